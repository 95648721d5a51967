//! Emptiness checks for the neighbourhoods that moves rebuild.
//!
//! A region is a closed simple polygon, optionally extended by circular caps
//! between a chord (which must be a polygon edge) and the seam. A move is
//! local when every segment it did not create stays out of its regions,
//! except remainders of the edited segment that touch a region at an anchor.

use std::collections::HashSet;

use num_traits::Signed;

use crate::diagram::BouquetDiagram;
use crate::geometry::{orient2d, segment_intersection, Rat, RatPoint, SegmentIntersection};

pub(crate) type Seg = (RatPoint, RatPoint);

#[derive(Clone, Debug, Default)]
pub(crate) struct Region {
    pub poly: Vec<RatPoint>,
    /// Chords `(a, b)`; the disk beyond each chord belongs to the region.
    pub caps: Vec<(RatPoint, RatPoint)>,
    /// Segments of the new diagram built inside this region.
    pub owned: Vec<Seg>,
    /// Points where other segments may touch the region (at their own endpoints).
    pub anchors: Vec<RatPoint>,
    /// Segments exempt from the emptiness check; the move checks them itself.
    pub allowed: Vec<Seg>,
}

#[derive(Clone, Debug)]
struct BBox {
    lo: RatPoint,
    hi: RatPoint,
}

impl BBox {
    fn of<'a>(pts: impl IntoIterator<Item = &'a RatPoint>) -> BBox {
        let mut it = pts.into_iter();
        let first = it.next().expect("nonempty");
        let mut lo = first.clone();
        let mut hi = first.clone();
        for p in it {
            if p.x < lo.x {
                lo.x = p.x.clone();
            }
            if p.y < lo.y {
                lo.y = p.y.clone();
            }
            if p.x > hi.x {
                hi.x = p.x.clone();
            }
            if p.y > hi.y {
                hi.y = p.y.clone();
            }
        }
        BBox { lo, hi }
    }

    fn disjoint(&self, o: &BBox) -> bool {
        self.hi.x < o.lo.x || o.hi.x < self.lo.x || self.hi.y < o.lo.y || o.hi.y < self.lo.y
    }
}

/// Point in a closed simple polygon (boundary included).
pub(crate) fn in_closed_polygon(p: &RatPoint, poly: &[RatPoint]) -> bool {
    let n = poly.len();
    let mut winding = 0i32;
    for i in 0..n {
        let a = &poly[i];
        let b = &poly[(i + 1) % n];
        let o = orient2d(a, b, p);
        if o == 0 && on_closed_segment(p, a, b) {
            return true;
        }
        if a.y <= p.y {
            if b.y > p.y && o > 0 {
                winding += 1;
            }
        } else if b.y <= p.y && o < 0 {
            winding -= 1;
        }
    }
    winding != 0
}

pub(crate) fn on_closed_segment(p: &RatPoint, a: &RatPoint, b: &RatPoint) -> bool {
    if orient2d(a, b, p) != 0 {
        return false;
    }
    let (lx, hx) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (ly, hy) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    *lx <= p.x && p.x <= *hx && *ly <= p.y && p.y <= *hy
}

/// No two edges meet except consecutive ones at their shared vertex.
pub(crate) fn is_simple(poly: &[RatPoint]) -> bool {
    let n = poly.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        if poly[i] == poly[(i + 1) % n] {
            return false;
        }
    }
    for i in 0..n {
        let (a, b) = (&poly[i], &poly[(i + 1) % n]);
        for j in i + 1..n {
            let (c, d) = (&poly[j], &poly[(j + 1) % n]);
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                // Consecutive edges must not fold back onto each other.
                let (shared, x, y) = if j == i + 1 { (b, a, d) } else { (a, b, c) };
                if orient2d(shared, x, y) == 0 && x.sub(shared).dot(&y.sub(shared)).is_positive() {
                    return false;
                }
            } else if segment_intersection((a, b), (c, d)) != SegmentIntersection::Empty {
                return false;
            }
        }
    }
    orient2d_area_sign(poly) != 0
}

fn orient2d_area_sign(poly: &[RatPoint]) -> i32 {
    let n = poly.len();
    let mut twice: Rat = Rat::default();
    for i in 0..n {
        twice += poly[i].cross(&poly[(i + 1) % n]);
    }
    crate::geometry::sign_of(&twice)
}

fn beyond_chord(p: &RatPoint, a: &RatPoint, b: &RatPoint) -> bool {
    let side_origin = orient2d(a, b, &RatPoint::origin());
    let side_p = orient2d(a, b, p);
    side_p != 0 && side_p == -side_origin
}

/// The set where `s` touches edge `e`, if it is a single point.
enum Touch {
    None,
    Point(RatPoint),
    Many,
}

fn touch(s: (&RatPoint, &RatPoint), e: (&RatPoint, &RatPoint)) -> Touch {
    match segment_intersection(s, e) {
        SegmentIntersection::Empty => Touch::None,
        SegmentIntersection::Proper { point, .. } => Touch::Point(point),
        SegmentIntersection::Degenerate => {
            let (p1, p2) = s;
            let (q1, q2) = e;
            if orient2d(p1, p2, q1) == 0 && orient2d(p1, p2, q2) == 0 {
                // Collinear: the overlap is a point only when it is a shared endpoint
                // with the segments on opposite sides of it.
                for a in [p1, p2] {
                    for b in [q1, q2] {
                        if a == b {
                            let other_s = if a == p1 { p2 } else { p1 };
                            let other_e = if b == q1 { q2 } else { q1 };
                            if other_s.sub(a).dot(&other_e.sub(a)).is_negative() {
                                return Touch::Point(a.clone());
                            }
                        }
                    }
                }
                Touch::Many
            } else {
                for cand in [p1, p2] {
                    if on_closed_segment(cand, q1, q2) {
                        return Touch::Point(cand.clone());
                    }
                }
                for cand in [q1, q2] {
                    if on_closed_segment(cand, p1, p2) {
                        return Touch::Point(cand.clone());
                    }
                }
                Touch::Many
            }
        }
    }
}

impl Region {
    fn bbox(&self) -> BBox {
        BBox::of(&self.poly)
    }

    /// True when `s` stays out of the region, apart from touching it at one
    /// of its own endpoints that is an anchor.
    fn excludes(&self, s: (&RatPoint, &RatPoint)) -> bool {
        let mut contact: Option<RatPoint> = None;
        let n = self.poly.len();
        for i in 0..n {
            let e = (&self.poly[i], &self.poly[(i + 1) % n]);
            match touch(s, e) {
                Touch::None => {}
                Touch::Many => return false,
                Touch::Point(p) => {
                    let is_anchor_end = (p == *s.0 || p == *s.1) && self.anchors.contains(&p);
                    if !is_anchor_end {
                        return false;
                    }
                    if contact.as_ref().is_some_and(|c| *c != p) {
                        return false;
                    }
                    contact = Some(p);
                }
            }
        }
        for end in [s.0, s.1] {
            if contact.as_ref() != Some(end) && in_closed_polygon(end, &self.poly) {
                return false;
            }
            if self.caps.iter().any(|(a, b)| beyond_chord(end, a, b)) {
                return false;
            }
        }
        true
    }

    /// The polygon itself is usable: simple, inside the closed disk, and
    /// every cap chord is one of its edges.
    fn well_formed(&self) -> bool {
        if !is_simple(&self.poly) || self.poly.iter().any(|p| p.norm_sq() > Rat::from_integer(1.into())) {
            return false;
        }
        let n = self.poly.len();
        self.caps.iter().all(|(a, b)| {
            (0..n).any(|i| {
                let (p, q) = (&self.poly[i], &self.poly[(i + 1) % n]);
                (p == a && q == b) || (p == b && q == a)
            })
        })
    }
}

/// Check all regions against every segment of `d` that no region owns.
/// Segments owned by one region must also stay out of every other region.
pub(crate) fn regions_clear(d: &BouquetDiagram, regions: &[Region]) -> bool {
    if !regions.iter().all(Region::well_formed) {
        return false;
    }
    let boxes: Vec<BBox> = regions.iter().map(Region::bbox).collect();
    let owned: Vec<HashSet<&Seg>> = regions.iter().map(|r| r.owned.iter().collect()).collect();
    let allowed: Vec<HashSet<&Seg>> = regions.iter().map(|r| r.allowed.iter().collect()).collect();
    for id in d.segment_ids() {
        let (a, b) = d.segment(id).expect("id from diagram");
        let key = (a.clone(), b.clone());
        let sbox = BBox::of([a, b]);
        for (k, r) in regions.iter().enumerate() {
            if owned[k].contains(&key) || allowed[k].contains(&key) {
                continue;
            }
            if r.caps.is_empty() && sbox.disjoint(&boxes[k]) {
                continue;
            }
            if !r.excludes((a, b)) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> RatPoint {
        RatPoint::from_fracs(x, 8, y, 8)
    }

    #[test]
    fn polygon_membership() {
        let sq = vec![p(0, 0), p(2, 0), p(2, 2), p(0, 2)];
        assert!(in_closed_polygon(&p(1, 1), &sq));
        assert!(in_closed_polygon(&p(2, 1), &sq));
        assert!(in_closed_polygon(&p(0, 0), &sq));
        assert!(!in_closed_polygon(&p(3, 1), &sq));
        // Notched hexagon: the notch at (0, 0) is outside.
        let hex = vec![p(0, 0), p(-1, -3), p(7, -3), p(6, 0), p(7, 3), p(-1, 3)];
        assert!(is_simple(&hex));
        assert!(in_closed_polygon(&p(3, 0), &hex));
        assert!(!in_closed_polygon(&p(-1, 0), &hex));
        assert!(!in_closed_polygon(&p(7, 0), &hex));
    }

    #[test]
    fn simplicity() {
        assert!(is_simple(&[p(0, 0), p(2, 0), p(2, 2)]));
        assert!(!is_simple(&[p(0, 0), p(2, 2), p(2, 0), p(0, 2)]));
        assert!(!is_simple(&[p(0, 0), p(2, 0), p(1, 0)]));
    }

    #[test]
    fn anchored_touch() {
        let r = Region {
            poly: vec![p(0, 0), p(-1, -3), p(7, -3), p(6, 0), p(7, 3), p(-1, 3)],
            anchors: vec![p(0, 0), p(6, 0)],
            ..Region::default()
        };
        assert!(r.excludes((&p(-4, 0), &p(0, 0))));
        assert!(!r.excludes((&p(-4, 0), &p(1, 0))));
        assert!(!r.excludes((&p(-4, 1), &p(0, 1))));
        assert!(r.excludes((&p(-4, 5), &p(0, 5))));
        assert!(!r.excludes((&p(2, 1), &p(3, 1))));
        let no_anchor = Region { anchors: vec![], ..r };
        assert!(!no_anchor.excludes((&p(-4, 0), &p(0, 0))));
    }

    #[test]
    fn cap_catches_points_near_the_seam() {
        let a = RatPoint::from_fracs(3, 5, 4, 5);
        let b = RatPoint::from_fracs(4, 5, 3, 5);
        let r = Region {
            poly: vec![a.clone(), b.clone(), RatPoint::from_fracs(1, 2, 1, 2)],
            caps: vec![(a.clone(), b.clone())],
            ..Region::default()
        };
        assert!(r.well_formed());
        let near_seam = RatPoint::from_fracs(7, 10, 7, 10);
        assert!(!r.excludes((&near_seam, &RatPoint::from_fracs(69, 100, 70, 100))));
        assert!(r.excludes((&RatPoint::from_fracs(1, 10, 0, 1), &RatPoint::from_fracs(0, 1, 1, 10))));
    }
}
