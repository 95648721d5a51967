use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use super::{BouquetDiagram, Crossing, LoopParam, SegmentId};
use crate::error::{Error, Result};
use crate::geometry::exact::{
    classify, cmp_coord, folds_back, overlap_at_shared, proper_intersection, Contact, HPoint,
};
use crate::geometry::{codirectional, seam_reflection, RatPoint};
use crate::invariants::Symbol;

/// One failed generic-position condition, with enough coordinates to find it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Violation {
    VertexNotInterior,
    LoopStartsOffVertex {
        loop_idx: usize,
    },
    LoopEndsOffVertex {
        loop_idx: usize,
    },
    ZeroLengthSegment(SegmentId),
    /// Consecutive segments of a leg reverse direction at `point`.
    Cusp {
        loop_idx: usize,
        leg: usize,
        point: usize,
    },
    PointNotInterior {
        loop_idx: usize,
        leg: usize,
        point: usize,
    },
    /// The end of `leg` should be on the seam but is not on the unit circle.
    SeamPointOffCircle {
        loop_idx: usize,
        leg: usize,
    },
    /// `leg` does not start at the antipode of where the previous leg ended.
    SeamEntryNotAntipodal {
        loop_idx: usize,
        leg: usize,
    },
    /// The first direction of `leg` is not the glued continuation of the
    /// previous leg's last direction.
    SeamDirectionMismatch {
        loop_idx: usize,
        leg: usize,
    },
    CodirectionalHalfEdges(Symbol, Symbol),
    NonTransversal(SegmentId, SegmentId),
    TriplePoint(RatPoint),
    CrossingAtVertex(SegmentId, SegmentId),
    SeamPointCollision {
        first: (usize, usize),
        second: (usize, usize),
    },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::VertexNotInterior => "VertexNotInterior",
            Violation::LoopStartsOffVertex { .. } => "LoopStartsOffVertex",
            Violation::LoopEndsOffVertex { .. } => "LoopEndsOffVertex",
            Violation::ZeroLengthSegment(_) => "ZeroLengthSegment",
            Violation::Cusp { .. } => "Cusp",
            Violation::PointNotInterior { .. } => "PointNotInterior",
            Violation::SeamPointOffCircle { .. } => "SeamPointOffCircle",
            Violation::SeamEntryNotAntipodal { .. } => "SeamEntryNotAntipodal",
            Violation::SeamDirectionMismatch { .. } => "SeamDirectionMismatch",
            Violation::CodirectionalHalfEdges(..) => "CodirectionalHalfEdges",
            Violation::NonTransversal(..) => "NonTransversal",
            Violation::TriplePoint(_) => "TriplePoint",
            Violation::CrossingAtVertex(..) => "CrossingAtVertex",
            Violation::SeamPointCollision { .. } => "SeamPointCollision",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind())?;
        match self {
            Violation::VertexNotInterior => Ok(()),
            Violation::LoopStartsOffVertex { loop_idx } | Violation::LoopEndsOffVertex { loop_idx } => {
                write!(f, " loop={loop_idx}")
            }
            Violation::ZeroLengthSegment(s) => write!(f, " {s}"),
            Violation::Cusp { loop_idx, leg, point } | Violation::PointNotInterior { loop_idx, leg, point } => {
                write!(f, " loop={loop_idx} leg={leg} point={point}")
            }
            Violation::SeamPointOffCircle { loop_idx, leg }
            | Violation::SeamEntryNotAntipodal { loop_idx, leg }
            | Violation::SeamDirectionMismatch { loop_idx, leg } => write!(f, " loop={loop_idx} leg={leg}"),
            Violation::CodirectionalHalfEdges(a, b) => write!(f, " {a} {b}"),
            Violation::NonTransversal(a, b) | Violation::CrossingAtVertex(a, b) => write!(f, " [{a}] [{b}]"),
            Violation::TriplePoint(p) => write!(f, " at {p}"),
            Violation::SeamPointCollision { first, second } => {
                write!(f, " [loop={} leg={}] [loop={} leg={}]", first.0, first.1, second.0, second.1)
            }
        }
    }
}

/// Check every generic-position condition. Returns all violations found.
pub fn validate(d: &BouquetDiagram) -> std::result::Result<(), Vec<Violation>> {
    let (violations, _) = analyze(d);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

/// All transversal double points, sorted by (loop_a, param_a, loop_b, param_b).
pub fn crossings(d: &BouquetDiagram) -> Result<Vec<Crossing>> {
    let (violations, crossings) = analyze(d);
    if violations.is_empty() {
        Ok(crossings)
    } else {
        Err(Error::InvalidDiagram(violations))
    }
}

struct Flat {
    id: SegmentId,
    a: usize,
    b: usize,
    /// Indices of the endpoint with the smaller / larger x, and likewise y.
    lo: [usize; 2],
    hi: [usize; 2],
    from_vertex: bool,
    to_vertex: bool,
}

/// Validation and crossing extraction in one pass. The crossing list is only
/// meaningful when no violations are returned.
pub(crate) fn analyze(d: &BouquetDiagram) -> (Vec<Violation>, Vec<Crossing>) {
    let mut out = Vec::new();
    let v = d.vertex();
    if !v.is_inside_open_disk() {
        out.push(Violation::VertexNotInterior);
    }
    check_loops(d, &mut out);
    check_half_edges(d, &mut out);
    check_seam_points(d, &mut out);
    let crossings = check_pairs(d, &mut out);
    (out, crossings)
}

fn check_loops(d: &BouquetDiagram, out: &mut Vec<Violation>) {
    let v = d.vertex();
    for (i, lp) in d.loops().iter().enumerate() {
        let legs = lp.legs();
        if legs[0].first() != v {
            out.push(Violation::LoopStartsOffVertex { loop_idx: i });
        }
        if legs[legs.len() - 1].last() != v {
            out.push(Violation::LoopEndsOffVertex { loop_idx: i });
        }
        for (k, leg) in legs.iter().enumerate() {
            let pts = leg.points();
            for (j, p) in pts.iter().enumerate().take(pts.len() - 1).skip(1) {
                if !p.is_inside_open_disk() {
                    out.push(Violation::PointNotInterior { loop_idx: i, leg: k, point: j });
                }
            }
            for s in 0..leg.segment_count() {
                if pts[s] == pts[s + 1] {
                    out.push(Violation::ZeroLengthSegment(SegmentId::new(i, k, s)));
                }
            }
            let hp: Vec<HPoint> = pts.iter().map(HPoint::new).collect();
            for j in 1..pts.len() - 1 {
                if folds_back(&hp[j - 1], &hp[j], &hp[j + 1]) {
                    out.push(Violation::Cusp { loop_idx: i, leg: k, point: j });
                }
            }
            if k + 1 < legs.len() {
                let p = leg.last();
                let next = &legs[k + 1];
                if !p.is_on_circle() {
                    out.push(Violation::SeamPointOffCircle { loop_idx: i, leg: k });
                    continue;
                }
                if *next.first() != p.neg() {
                    out.push(Violation::SeamEntryNotAntipodal { loop_idx: i, leg: k + 1 });
                    continue;
                }
                let d_out = leg.direction(leg.segment_count() - 1);
                let d_in = next.direction(0);
                if d_out.is_zero() || d_in.is_zero() {
                    continue;
                }
                let m = seam_reflection(p).expect("checked on circle");
                if !codirectional(&d_in, &m.apply(&d_out)) {
                    out.push(Violation::SeamDirectionMismatch { loop_idx: i, leg: k + 1 });
                }
            }
        }
    }
}

fn check_half_edges(d: &BouquetDiagram, out: &mut Vec<Violation>) {
    let dirs = d.vertex_directions();
    for a in 0..dirs.len() {
        for b in a + 1..dirs.len() {
            if codirectional(&dirs[a].1, &dirs[b].1) {
                out.push(Violation::CodirectionalHalfEdges(dirs[a].0, dirs[b].0));
            }
        }
    }
}

fn check_seam_points(d: &BouquetDiagram, out: &mut Vec<Violation>) {
    // Key each seam point by the representative of {p, -p} with the larger
    // coordinates, so equal and antipodal points collide.
    let mut seen: HashMap<RatPoint, (usize, usize)> = HashMap::new();
    for (i, lp) in d.loops().iter().enumerate() {
        let legs = lp.legs();
        for (k, leg) in legs.iter().enumerate().take(legs.len() - 1) {
            let p = leg.last();
            if !p.is_on_circle() {
                continue;
            }
            let q = p.neg();
            let key = if *p > q { p.clone() } else { q };
            if let Some(&first) = seen.get(&key) {
                out.push(Violation::SeamPointCollision { first, second: (i, k) });
            } else {
                seen.insert(key, (i, k));
            }
        }
    }
}

fn check_pairs(d: &BouquetDiagram, out: &mut Vec<Violation>) -> Vec<Crossing> {
    let v = d.vertex();
    let mut pts: Vec<&RatPoint> = Vec::new();
    let mut hp: Vec<HPoint> = Vec::new();
    let mut segs: Vec<Flat> = Vec::new();
    for (i, lp) in d.loops().iter().enumerate() {
        let legs = lp.legs();
        let last_leg = legs.len() - 1;
        for (k, leg) in legs.iter().enumerate() {
            let base = pts.len();
            for p in leg.points() {
                pts.push(p);
                hp.push(HPoint::new(p));
            }
            let last_seg = leg.segment_count() - 1;
            for s in 0..leg.segment_count() {
                let (a, b) = (base + s, base + s + 1);
                if pts[a] == pts[b] {
                    continue;
                }
                let (lo_x, hi_x) = order_by(&hp, a, b, 0);
                let (lo_y, hi_y) = order_by(&hp, a, b, 1);
                segs.push(Flat {
                    id: SegmentId::new(i, k, s),
                    a,
                    b,
                    lo: [lo_x, lo_y],
                    hi: [hi_x, hi_y],
                    from_vertex: k == 0 && s == 0 && pts[a] == v,
                    to_vertex: k == last_leg && s == last_seg && pts[b] == v,
                });
            }
        }
    }

    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.sort_by(|&x, &y| cmp_coord(&hp[segs[x].lo[0]], &hp[segs[y].lo[0]], 0));

    let mut found = Vec::new();
    for (oi, &x) in order.iter().enumerate() {
        let s = &segs[x];
        for &y in &order[oi + 1..] {
            let t = &segs[y];
            if cmp_coord(&hp[t.lo[0]], &hp[s.hi[0]], 0) == Ordering::Greater {
                break;
            }
            if cmp_coord(&hp[t.hi[1]], &hp[s.lo[1]], 1) == Ordering::Less
                || cmp_coord(&hp[s.hi[1]], &hp[t.lo[1]], 1) == Ordering::Less
            {
                continue;
            }
            let (s, t) = if s.id <= t.id { (s, t) } else { (t, s) };
            match shared_points(s, t) {
                Some(shared) => {
                    if shared.into_iter().flatten().any(|(p, a, b)| overlap_at_shared(&hp[p], &hp[a], &hp[b])) {
                        out.push(Violation::NonTransversal(s.id, t.id));
                    }
                }
                None => match classify(&hp[s.a], &hp[s.b], &hp[t.a], &hp[t.b]) {
                    Contact::Empty => {}
                    Contact::Degenerate => out.push(Violation::NonTransversal(s.id, t.id)),
                    Contact::Proper => found.push((s.id, s.a, s.b, t.id, t.a, t.b)),
                },
            }
        }
    }

    let mut crossings = Vec::with_capacity(found.len());
    for (sid, sa, sb, tid, ta, tb) in found {
        let (t1, t2, point) = proper_intersection(&hp[sa], &hp[sb], &hp[ta], &hp[tb]);
        if point == *v {
            out.push(Violation::CrossingAtVertex(sid, tid));
        }
        let pa = LoopParam { leg: sid.leg, seg: sid.seg, frac: t1 };
        let pb = LoopParam { leg: tid.leg, seg: tid.seg, frac: t2 };
        // sid < tid, so for the same loop the parameters are already ordered.
        crossings.push(Crossing {
            loop_a: sid.loop_idx,
            param_a: pa,
            loop_b: tid.loop_idx,
            param_b: pb,
            location: point,
        });
    }
    crossings.sort_by(|a, b| {
        (a.loop_a, &a.param_a, a.loop_b, &a.param_b).cmp(&(b.loop_a, &b.param_a, b.loop_b, &b.param_b))
    });

    let mut by_location: Vec<&Crossing> = crossings.iter().collect();
    by_location.sort_by(|a, b| a.location.cmp(&b.location));
    for w in by_location.windows(2) {
        if w[0].location == w[1].location {
            out.push(Violation::TriplePoint(w[0].location.clone()));
        }
    }
    crossings
}

fn order_by(hp: &[HPoint], a: usize, b: usize, k: usize) -> (usize, usize) {
    if cmp_coord(&hp[a], &hp[b], k) == Ordering::Greater {
        (b, a)
    } else {
        (a, b)
    }
}

type Shared = (usize, usize, usize);

/// Endpoints that two segments share by construction: consecutive segments
/// of one leg, or two segments incident to the vertex. Each entry is
/// (shared point, other end of first, other end of second).
fn shared_points(s: &Flat, t: &Flat) -> Option<[Option<Shared>; 2]> {
    let mut res = [None, None];
    let same_leg = s.id.loop_idx == t.id.loop_idx && s.id.leg == t.id.leg;
    if same_leg && s.id.seg + 1 == t.id.seg {
        res[0] = Some((s.b, s.a, t.b));
    }
    let vs = if s.from_vertex {
        Some((s.a, s.b))
    } else if s.to_vertex {
        Some((s.b, s.a))
    } else {
        None
    };
    let vt = if t.from_vertex {
        Some((t.a, t.b))
    } else if t.to_vertex {
        Some((t.b, t.a))
    } else {
        None
    };
    if let (Some((p, a)), Some((_, b))) = (vs, vt) {
        res[1] = Some((p, a, b));
    }
    if res[0].is_none() && res[1].is_none() {
        None
    } else {
        Some(res)
    }
}
