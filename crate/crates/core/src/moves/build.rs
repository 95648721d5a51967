//! Concrete geometry of each move: template points, splices and the regions
//! that must be empty for the move to be local.

use num_traits::{One, Signed, Zero};

use super::region::{on_closed_segment, Region, Seg};
use crate::diagram::{BouquetDiagram, Leg, LoopPath, SegmentId};
use crate::error::{Error, Result};
use crate::geometry::{
    grid_bits_for, norm_inf, orient2d, rat, rat_int, round_point, seam_reflection, segment_intersection, Rat, RatPoint,
    SeamPoint, SegmentIntersection,
};

pub(crate) struct Built {
    pub diagram: BouquetDiagram,
    pub regions: Vec<Region>,
    /// Crossings the construction adds; `None` when it makes no promise.
    pub added_crossings: Option<usize>,
}

fn blocked(msg: impl Into<String>) -> Error {
    Error::MoveBlocked(msg.into())
}

/// Local frame on the target segment `A -> B`: template coordinates `(a, b)`
/// map to `A + (c + a h) u + b h v` with `u = B - A` and `v` its quarter turn.
pub(crate) struct Frame {
    a: RatPoint,
    u: RatPoint,
    v: RatPoint,
    c: Rat,
    h: Rat,
    bits: u32,
}

impl Frame {
    pub fn new(a: &RatPoint, b: &RatPoint, c: &Rat, h: &Rat) -> Self {
        let u = b.sub(a);
        let unit = h * norm_inf(&u);
        Frame { a: a.clone(), v: u.perp(), u, c: c.clone(), h: h.clone(), bits: grid_bits_for(&unit) }
    }

    /// Exact point on the segment at template abscissa `t`.
    pub fn on_line(&self, t: i64) -> RatPoint {
        self.a.offset(&self.u, &(&self.c + &self.h * rat_int(t)))
    }

    pub fn exact(&self, a: i64, b: i64) -> RatPoint {
        self.on_line(a).offset(&self.v, &(&self.h * rat_int(b)))
    }

    /// Off-line template point snapped to a dyadic grid well below the
    /// template scale, so coordinates stay short.
    pub fn snapped(&self, a: i64, b: i64) -> RatPoint {
        round_point(&self.exact(a, b), self.bits)
    }

    pub fn snap(&self, p: &RatPoint) -> RatPoint {
        round_point(p, self.bits)
    }
}

fn check_span(c: &Rat, h: &Rat, span: i64) -> Result<()> {
    if !c.is_positive() || !h.is_positive() || c + h * rat_int(span) >= Rat::one() {
        return Err(blocked(format!("need 0 < c and c + {span} h < 1")));
    }
    Ok(())
}

fn unit_sign(s: &Rat) -> Result<i64> {
    if *s == Rat::one() {
        Ok(1)
    } else if *s == -Rat::one() {
        Ok(-1)
    } else {
        Err(blocked("sign parameter must be 1 or -1"))
    }
}

/// One kink starting on the line at template abscissa `a0`, crossing itself
/// once with chart sign `s`. Ends back on the line at `a0 + 3`.
fn kink(f: &Frame, a0: i64, s: i64) -> [RatPoint; 3] {
    [f.snapped(a0 + 3, -2 * s), f.snapped(a0 + 1, -2 * s), f.on_line(a0 + 3)]
}

/// Notched hexagon around `[0, span]` that keeps the rest of the line out.
fn kink_region(f: &Frame, span: i64, path: &[RatPoint]) -> Region {
    Region {
        poly: vec![
            f.exact(0, 0),
            f.exact(-1, -3),
            f.exact(span + 1, -3),
            f.exact(span, 0),
            f.exact(span + 1, 3),
            f.exact(-1, 3),
        ],
        owned: segs(path),
        anchors: vec![path[0].clone(), path[path.len() - 1].clone()],
        ..Region::default()
    }
}

fn segs(path: &[RatPoint]) -> Vec<Seg> {
    path.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect()
}

/// Replace the interior of segment `target` by `pieces`. With one piece the
/// points are inserted into the leg; with more, the leg is split at seam
/// points and every middle piece becomes a whole leg.
pub(crate) fn splice(d: &BouquetDiagram, target: SegmentId, pieces: Vec<Vec<RatPoint>>) -> Result<BouquetDiagram> {
    d.segment(target)?;
    let lp = d.loop_path(target.loop_idx)?;
    let mut legs: Vec<Vec<RatPoint>> = lp.legs().iter().map(|l| l.points().to_vec()).collect();
    let old = legs.remove(target.leg);
    let prefix = &old[..=target.seg];
    let suffix = &old[target.seg + 1..];
    let m = pieces.len();
    let mut new_legs = Vec::with_capacity(m);
    for (k, piece) in pieces.into_iter().enumerate() {
        let mut pts = Vec::new();
        if k == 0 {
            pts.extend_from_slice(prefix);
        }
        pts.extend(piece);
        if k + 1 == m {
            pts.extend_from_slice(suffix);
        }
        new_legs.push(pts);
    }
    for (k, l) in new_legs.into_iter().enumerate() {
        legs.insert(target.leg + k, l);
    }
    let path = LoopPath::new(legs.into_iter().map(Leg::new).collect::<Result<_>>()?)?;
    d.with_loop(target.loop_idx, path)
}

fn target_points(d: &BouquetDiagram, t: SegmentId) -> Result<(RatPoint, RatPoint)> {
    let (a, b) = d.segment(t)?;
    Ok((a.clone(), b.clone()))
}

pub(crate) fn kinks(d: &BouquetDiagram, t: SegmentId, c: &Rat, h: &Rat, signs: &[i64]) -> Result<Built> {
    let span = 3 * signs.len() as i64;
    check_span(c, h, span)?;
    let (a, b) = target_points(d, t)?;
    let f = Frame::new(&a, &b, c, h);
    let mut path = vec![f.on_line(0)];
    for (k, &s) in signs.iter().enumerate() {
        path.extend(kink(&f, 3 * k as i64, s));
    }
    let region = kink_region(&f, span, &path);
    Ok(Built { diagram: splice(d, t, vec![path])?, regions: vec![region], added_crossings: Some(signs.len()) })
}

pub(crate) fn kink_pair(d: &BouquetDiagram, t: SegmentId, p: &[Rat]) -> Result<Built> {
    let s = unit_sign(&p[2])?;
    kinks(d, t, &p[0], &p[1], &[s, -s])
}

pub(crate) fn single_kink(d: &BouquetDiagram, t: SegmentId, p: &[Rat]) -> Result<Built> {
    let s = unit_sign(&p[2])?;
    kinks(d, t, &p[0], &p[1], &[s])
}

/// Two same-sign kinks followed by a finger pushed out through the seam at
/// `q` and back in just beside it. Kink chart signs are `sigma * (-1)^leg`,
/// so the index (for the positive orientation) changes by `2 sigma`.
pub(crate) fn detour(d: &BouquetDiagram, t: SegmentId, p: &[Rat]) -> Result<Built> {
    let (c, h) = (&p[0], &p[1]);
    let sigma = unit_sign(&p[2])?;
    let tau = &p[4];
    if tau.is_zero() || tau.abs() >= rat(1, 4) {
        return Err(blocked("need 0 < |tau| < 1/4"));
    }
    check_span(c, h, 8)?;
    let (a, b) = target_points(d, t)?;
    let f = Frame::new(&a, &b, c, h);
    let s = if t.leg.is_multiple_of(2) { sigma } else { -sigma };

    let mut kinks_path = vec![f.on_line(0)];
    kinks_path.extend(kink(&f, 0, s));
    kinks_path.extend(kink(&f, 3, s));
    let kinks_region = kink_region(&f, 6, &kinks_path);

    let q = SeamPoint::from_param(&p[3]).into_point();
    let r = SeamPoint::new(q.neg())?.rotate(&SeamPoint::from_param(tau)).into_point();
    let eps = tau.abs() * rat_int(2);
    let shrink = Rat::one() - &eps;
    let xf = f.on_line(7);
    let yf = f.on_line(8);
    let k = q.scale(&shrink);
    let w = q.neg().scale(&shrink);
    let m = seam_reflection(&r)?;
    let l = r.neg().add(&m.apply(&r.sub(&w)));

    let strip = Region {
        poly: vec![xf.clone(), k.clone(), q.clone(), r.neg(), l.clone(), yf.clone()],
        caps: vec![(q.clone(), r.neg())],
        owned: segs(&[xf.clone(), k.clone(), q.clone()])
            .into_iter()
            .chain(segs(&[r.neg(), l.clone(), yf.clone()]))
            .collect(),
        anchors: vec![xf.clone(), yf.clone()],
        allowed: vec![],
    };
    let tip = Region {
        poly: vec![q.neg(), w.clone(), r.clone()],
        caps: vec![(r.clone(), q.neg())],
        owned: segs(&[q.neg(), w.clone(), r.clone()]),
        ..Region::default()
    };

    let mut first = kinks_path;
    first.extend([xf, k, q.clone()]);
    let pieces = vec![first, vec![q.neg(), w, r.clone()], vec![r.neg(), l, yf]];
    Ok(Built { diagram: splice(d, t, pieces)?, regions: vec![kinks_region, strip, tip], added_crossings: Some(2) })
}

/// Reidemeister 2: push `[X, Y]` across the strand segment as a triangle
/// `X, T, Y` whose apex lies just beyond the strand.
pub(crate) fn finger_push(d: &BouquetDiagram, t: SegmentId, p: &[Rat]) -> Result<Built> {
    let (c, h) = (&p[0], &p[1]);
    check_span(c, h, 1)?;
    let idx = |r: &Rat| -> Result<usize> {
        if !r.is_integer() || r.is_negative() {
            return Err(blocked("strand indices must be non-negative integers"));
        }
        r.to_integer().try_into().map_err(|_| blocked("strand index too large"))
    };
    let strand = SegmentId::new(idx(&p[2])?, idx(&p[3])?, idx(&p[4])?);
    if strand == t {
        return Err(blocked("strand is the target segment"));
    }
    let (z, eta) = (&p[5], &p[6]);
    if !z.is_positive() || *z >= Rat::one() || !eta.is_positive() {
        return Err(blocked("need 0 < z < 1 and eta > 0"));
    }
    let (s1, s2) = target_points(d, strand)?;
    let (a, b) = target_points(d, t)?;
    let f = Frame::new(&a, &b, c, h);
    let (x, y) = (f.on_line(0), f.on_line(1));
    let mid = x.lerp(&y, &rat(1, 2));
    let zp = s1.lerp(&s2, z);
    let apex = f.snap(&mid.offset(&zp.sub(&mid), &(Rat::one() + eta)));
    if orient2d(&x, &y, &apex) == 0 || !apex.is_inside_open_disk() {
        return Err(blocked("degenerate finger"));
    }
    let proper = |p: &RatPoint, q: &RatPoint| {
        matches!(segment_intersection((p, q), (&s1, &s2)), SegmentIntersection::Proper { .. })
    };
    if !proper(&x, &apex) || !proper(&apex, &y) {
        return Err(blocked("finger does not cross the strand twice"));
    }
    if segment_intersection((&x, &y), (&s1, &s2)) != SegmentIntersection::Empty {
        return Err(blocked("strand meets the base of the finger"));
    }
    let path = vec![x.clone(), apex.clone(), y.clone()];
    let region = Region {
        poly: path.clone(),
        owned: segs(&path),
        anchors: vec![x, y],
        allowed: vec![(s1, s2)],
        ..Region::default()
    };
    Ok(Built { diagram: splice(d, t, vec![path])?, regions: vec![region], added_crossings: Some(2) })
}

pub(crate) fn subdivide(d: &BouquetDiagram, t: SegmentId, p: &[Rat]) -> Result<Built> {
    let c = &p[0];
    if !c.is_positive() || *c >= Rat::one() {
        return Err(blocked("need 0 < c < 1"));
    }
    let (a, b) = target_points(d, t)?;
    Ok(Built { diagram: splice(d, t, vec![vec![a.lerp(&b, c)]])?, regions: vec![], added_crossings: Some(0) })
}

fn in_closed_triangle(p: &RatPoint, a: &RatPoint, b: &RatPoint, c: &RatPoint) -> bool {
    let area = orient2d(a, b, c);
    if area == 0 {
        return on_closed_segment(p, a, b) || on_closed_segment(p, b, c) || on_closed_segment(p, a, c);
    }
    let o1 = orient2d(a, b, p);
    let o2 = orient2d(b, c, p);
    let o3 = orient2d(c, a, p);
    o1 * area >= 0 && o2 * area >= 0 && o3 * area >= 0
}

/// Segment long enough to leave the disk from any interior point.
fn ray(o: &RatPoint, dir: &RatPoint) -> (RatPoint, RatPoint) {
    let k = rat_int(2) / norm_inf(dir);
    (o.clone(), o.offset(dir, &k))
}

/// Move the far end `P` of the target segment by `(dx, dy)`. The straight
/// motion from `P` to `P'` must sweep no vertex, never let `P` touch another
/// segment, and never create a cusp or a codirectional pair at the vertex.
/// Strands may slide across crossings (Reidemeister 3).
pub(crate) fn jiggle(d: &BouquetDiagram, t: SegmentId, p: &[Rat]) -> Result<Built> {
    let lp = d.loop_path(t.loop_idx)?;
    d.segment(t)?;
    let legs = lp.legs();
    let pts = legs[t.leg].points();
    let j = t.seg + 1;
    if j + 1 >= pts.len() {
        return Err(blocked("end of the target segment is not an interior point of its leg"));
    }
    let q_is_seam = t.leg > 0 && t.seg == 0;
    let r_is_seam = t.leg + 1 < legs.len() && j + 1 == pts.len() - 1;
    if q_is_seam || r_is_seam {
        return Err(blocked("a neighbour of the moved point is on the seam"));
    }
    let (q, pp, r) = (&pts[j - 1], &pts[j], &pts[j + 1]);
    let delta = RatPoint::new(p[0].clone(), p[1].clone());
    if delta.is_zero() {
        return Err(blocked("zero displacement"));
    }
    let np = pp.add(&delta);
    if !np.is_inside_open_disk() {
        return Err(blocked("moved point leaves the disk"));
    }
    let v = d.vertex();
    let q_is_v = t.leg == 0 && t.seg == 0;
    let r_is_v = t.leg + 1 == legs.len() && j + 1 == pts.len() - 1;

    let hits = |s: (&RatPoint, &RatPoint)| segment_intersection(s, (pp, &np)) != SegmentIntersection::Empty;
    if on_closed_segment(q, pp, &np) || on_closed_segment(r, pp, &np) {
        return Err(blocked("motion passes through a neighbour"));
    }
    for (i, other) in d.loops().iter().enumerate() {
        for (k, leg) in other.legs().iter().enumerate() {
            let lpts = leg.points();
            for (m, x) in lpts.iter().enumerate() {
                let own = i == t.loop_idx && k == t.leg && m == j;
                if own {
                    continue;
                }
                if x != q && x != pp && in_closed_triangle(x, q, pp, &np) {
                    return Err(blocked("motion sweeps a vertex"));
                }
                if x != r && x != pp && in_closed_triangle(x, pp, &np, r) {
                    return Err(blocked("motion sweeps a vertex"));
                }
            }
            for m in 0..leg.segment_count() {
                let own = i == t.loop_idx && k == t.leg && (m == t.seg || m == t.seg + 1);
                if !own && hits(leg.segment(m)) {
                    return Err(blocked("moved point touches a segment"));
                }
            }
        }
    }
    let mut rays = vec![ray(q, &q.sub(r)), ray(r, &r.sub(q))];
    if q_is_v {
        for (sym, dir) in d.vertex_directions() {
            if !(sym.loop_idx == t.loop_idx && !sym.inverse) {
                rays.push(ray(v, &dir));
            }
        }
    } else {
        let before = &pts[j - 2];
        rays.push(ray(q, &before.sub(q)));
    }
    if r_is_v {
        for (sym, dir) in d.vertex_directions() {
            if !(sym.loop_idx == t.loop_idx && sym.inverse) {
                rays.push(ray(v, &dir));
            }
        }
    } else {
        let after = &pts[j + 2];
        rays.push(ray(r, &after.sub(r)));
    }
    if rays.iter().any(|(o, e)| hits((o, e))) {
        return Err(blocked("motion passes through a cusp or codirectional position"));
    }
    let mut legs_pts: Vec<Vec<RatPoint>> = legs.iter().map(|l| l.points().to_vec()).collect();
    legs_pts[t.leg][j] = np;
    let path = LoopPath::new(legs_pts.into_iter().map(Leg::new).collect::<Result<_>>()?)?;
    Ok(Built { diagram: d.with_loop(t.loop_idx, path)?, regions: vec![], added_crossings: Some(0) })
}

/// Non-regular edit: leave `[X, Y]` radially out through the seam at `q`
/// and come back from `-q`. No emptiness is required.
pub(crate) fn seam_reroute(d: &BouquetDiagram, t: SegmentId, p: &[Rat]) -> Result<Built> {
    let (c, h, eps) = (&p[0], &p[1], &p[3]);
    check_span(c, h, 1)?;
    if !eps.is_positive() || *eps >= Rat::one() {
        return Err(blocked("need 0 < eps < 1"));
    }
    let (a, b) = target_points(d, t)?;
    let f = Frame::new(&a, &b, c, h);
    let q = SeamPoint::from_param(&p[2]).into_point();
    let shrink = Rat::one() - eps;
    let pieces =
        vec![vec![f.on_line(0), q.scale(&shrink), q.clone()], vec![q.neg(), q.neg().scale(&shrink), f.on_line(1)]];
    Ok(Built { diagram: splice(d, t, pieces)?, regions: vec![], added_crossings: None })
}
