//! Exact rational geometry for the disk model of the projective plane.
//!
//! The closed unit disk with antipodal boundary points identified is the only
//! chart. Every predicate here is decided exactly on rationals; nothing is
//! ever rounded.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type Rat = BigRational;

/// Shorthand constructor for small rationals. Panics on a zero denominator.
pub fn rat(numer: i64, denom: i64) -> Rat {
    Rat::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// Sign of a rational as -1, 0 or +1.
pub fn sign_of(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct RatPoint {
    pub x: Rat,
    pub y: Rat,
}

impl RatPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        RatPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RatPoint::new(rat_int(x), rat_int(y))
    }

    pub fn from_fracs(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        RatPoint::new(rat(xn, xd), rat(yn, yd))
    }

    pub fn origin() -> Self {
        RatPoint::new(Rat::zero(), Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, o: &RatPoint) -> RatPoint {
        RatPoint::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &RatPoint) -> RatPoint {
        RatPoint::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn neg(&self) -> RatPoint {
        RatPoint::new(-&self.x, -&self.y)
    }

    pub fn scale(&self, k: &Rat) -> RatPoint {
        RatPoint::new(&self.x * k, &self.y * k)
    }

    /// `self + k * dir`
    pub fn offset(&self, dir: &RatPoint, k: &Rat) -> RatPoint {
        RatPoint::new(&self.x + &dir.x * k, &self.y + &dir.y * k)
    }

    pub fn dot(&self, o: &RatPoint) -> Rat {
        &self.x * &o.x + &self.y * &o.y
    }

    pub fn cross(&self, o: &RatPoint) -> Rat {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn norm_sq(&self) -> Rat {
        self.dot(self)
    }

    /// Counterclockwise quarter turn.
    pub fn perp(&self) -> RatPoint {
        RatPoint::new(-&self.y, self.x.clone())
    }

    /// Point at parameter `t` on the segment from `self` to `o`.
    pub fn lerp(&self, o: &RatPoint, t: &Rat) -> RatPoint {
        self.offset(&o.sub(self), t)
    }

    pub fn is_inside_open_disk(&self) -> bool {
        self.cmp_unit_circle() == Ordering::Less
    }

    pub fn is_on_circle(&self) -> bool {
        self.cmp_unit_circle() == Ordering::Equal
    }

    /// Compare `x^2 + y^2` with 1 in integers: `(a/b)^2 + (c/d)^2` against 1
    /// is `(ad)^2 + (cb)^2` against `(bd)^2`.
    fn cmp_unit_circle(&self) -> Ordering {
        let (a, b) = (self.x.numer(), self.x.denom());
        let (c, d) = (self.y.numer(), self.y.denom());
        let ad = a * d;
        let cb = c * b;
        let bd = b * d;
        (&ad * &ad + &cb * &cb).cmp(&(&bd * &bd))
    }

    /// Lossy conversion for rendering and heuristics only.
    pub fn to_f64(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.x.to_f64().unwrap_or(f64::NAN), self.y.to_f64().unwrap_or(f64::NAN))
    }
}

impl fmt::Display for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

// `Ratio`'s own hash expands a continued fraction; rationals are kept in
// lowest terms, so hashing the raw parts agrees with equality.
impl Hash for RatPoint {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for r in [&self.x, &self.y] {
            r.numer().hash(state);
            r.denom().hash(state);
        }
    }
}

/// A rational point on the unit circle, i.e. on the seam of the disk model.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeamPoint(RatPoint);

impl SeamPoint {
    pub fn new(p: RatPoint) -> Result<Self> {
        if p.is_on_circle() {
            Ok(SeamPoint(p))
        } else {
            Err(Error::SeamPointOffCircle(Box::new(p)))
        }
    }

    /// Rational parametrization `t -> ((1-t^2)/(1+t^2), 2t/(1+t^2))`.
    /// Covers every rational circle point except (-1, 0).
    pub fn from_param(t: &Rat) -> Self {
        let t2 = t * t;
        let den = Rat::one() + &t2;
        let x = (Rat::one() - &t2) / &den;
        let y = (t * rat_int(2)) / den;
        SeamPoint(RatPoint::new(x, y))
    }

    pub fn point(&self) -> &RatPoint {
        &self.0
    }

    pub fn into_point(self) -> RatPoint {
        self.0
    }

    pub fn antipode(&self) -> SeamPoint {
        SeamPoint(self.0.neg())
    }

    /// Rotate by the angle of another circle point (complex multiplication).
    pub fn rotate(&self, by: &SeamPoint) -> SeamPoint {
        let (a, b) = (&self.0, &by.0);
        SeamPoint(RatPoint::new(&a.x * &b.x - &a.y * &b.y, &a.x * &b.y + &a.y * &b.x))
    }
}

/// 2x2 rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2(pub [[Rat; 2]; 2]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([[Rat::one(), Rat::zero()], [Rat::zero(), Rat::one()]])
    }

    pub fn det(&self) -> Rat {
        let m = &self.0;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn apply(&self, v: &RatPoint) -> RatPoint {
        let m = &self.0;
        RatPoint::new(&m[0][0] * &v.x + &m[0][1] * &v.y, &m[1][0] * &v.x + &m[1][1] * &v.y)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &o.0);
        let e = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        Mat2([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

/// Sign of the determinant `|b - a, c - a|`; +1 means counterclockwise.
pub fn orient2d(a: &RatPoint, b: &RatPoint, c: &RatPoint) -> i32 {
    use exact::{orient, HPoint};
    orient(&HPoint::unreduced(a), &HPoint::unreduced(b), &HPoint::unreduced(c))
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SegmentIntersection {
    Empty,
    /// Transversal crossing at a single point interior to both segments;
    /// `t1`, `t2` are the parameters along the first and second segment.
    Proper {
        point: RatPoint,
        t1: Rat,
        t2: Rat,
    },
    /// Endpoint contact, collinear overlap or any other non-transversal touch.
    Degenerate,
}

fn in_closed_box(p: &RatPoint, a: &RatPoint, b: &RatPoint) -> bool {
    let (lx, hx) = if a.x <= b.x { (&a.x, &b.x) } else { (&b.x, &a.x) };
    let (ly, hy) = if a.y <= b.y { (&a.y, &b.y) } else { (&b.y, &a.y) };
    *lx <= p.x && p.x <= *hx && *ly <= p.y && p.y <= *hy
}

/// Classify the intersection of the closed segments `s1` and `s2`.
///
/// Both segments must have distinct endpoints.
pub fn segment_intersection(s1: (&RatPoint, &RatPoint), s2: (&RatPoint, &RatPoint)) -> SegmentIntersection {
    let (p1, p2) = s1;
    let (q1, q2) = s2;
    let o1 = orient2d(p1, p2, q1);
    let o2 = orient2d(p1, p2, q2);
    if o1 * o2 > 0 {
        return SegmentIntersection::Empty;
    }
    let o3 = orient2d(q1, q2, p1);
    let o4 = orient2d(q1, q2, p2);
    if o1 * o2 < 0 && o3 * o4 < 0 {
        let r = p2.sub(p1);
        let s = q2.sub(q1);
        let denom = r.cross(&s);
        let qp = q1.sub(p1);
        let t1 = qp.cross(&s) / &denom;
        let t2 = qp.cross(&r) / &denom;
        let point = p1.offset(&r, &t1);
        return SegmentIntersection::Proper { point, t1, t2 };
    }
    let touches = (o1 == 0 && in_closed_box(q1, p1, p2))
        || (o2 == 0 && in_closed_box(q2, p1, p2))
        || (o3 == 0 && in_closed_box(p1, q1, q2))
        || (o4 == 0 && in_closed_box(p2, q1, q2));
    if touches {
        SegmentIntersection::Degenerate
    } else {
        SegmentIntersection::Empty
    }
}

/// Derivative of the seam gluing at `p`: reflection across the radial line
/// through `p`. A direction `d` leaving the disk at `p` continues as `M d`
/// entering at `-p`.
pub fn seam_reflection(p: &RatPoint) -> Result<Mat2> {
    if !p.is_on_circle() {
        return Err(Error::SeamPointOffCircle(Box::new(p.clone())));
    }
    let xx = &p.x * &p.x;
    let yy = &p.y * &p.y;
    let xy2 = &p.x * &p.y * rat_int(2);
    Ok(Mat2([[&xx - &yy, xy2.clone()], [xy2, yy - xx]]))
}

/// Quadrant index in counterclockwise order starting at direction (1, 0):
/// 0 for angles in [0, pi/2), 1 for [pi/2, pi), 2 for [pi, 3pi/2), 3 otherwise.
fn quadrant(v: &RatPoint) -> u8 {
    let xs = sign_of(&v.x);
    let ys = sign_of(&v.y);
    match (xs, ys) {
        (1, 0) | (1, 1) => 0,
        (0, 1) | (-1, 1) => 1,
        (-1, 0) | (-1, -1) => 2,
        _ => 3,
    }
}

/// Counterclockwise angular comparison of two nonzero directions, measured
/// from (1, 0).
pub fn angle_cmp(a: &RatPoint, b: &RatPoint) -> Ordering {
    let (qa, qb) = (quadrant(a), quadrant(b));
    if qa != qb {
        return qa.cmp(&qb);
    }
    // Same quadrant: a precedes b when b is counterclockwise of a.
    match sign_of(&a.cross(b)) {
        1 => Ordering::Less,
        -1 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// True when `a` and `b` point in exactly the same direction.
pub fn codirectional(a: &RatPoint, b: &RatPoint) -> bool {
    a.cross(b).is_zero() && a.dot(b).is_positive()
}

/// Indices of `vectors` sorted counterclockwise starting from (1, 0).
pub fn angle_sort(vectors: &[RatPoint]) -> Result<Vec<usize>> {
    for (i, v) in vectors.iter().enumerate() {
        if v.is_zero() {
            return Err(Error::ZeroDirection(i));
        }
    }
    let mut idx: Vec<usize> = (0..vectors.len()).collect();
    idx.sort_by(|&i, &j| angle_cmp(&vectors[i], &vectors[j]));
    for w in idx.windows(2) {
        if angle_cmp(&vectors[w[0]], &vectors[w[1]]) == Ordering::Equal {
            let (a, b) = (w[0].min(w[1]), w[0].max(w[1]));
            return Err(Error::CodirectionalVectors(a, b));
        }
    }
    Ok(idx)
}

/// Round to the dyadic grid of spacing `2^-bits`, ties away from zero.
pub fn round_dyadic(r: &Rat, bits: u32) -> Rat {
    let scale = BigInt::one() << bits;
    let scaled = r * Rat::from_integer(scale.clone());
    let half = rat(1, 2);
    let n = if scaled.is_negative() {
        -((-scaled) + half).floor().to_integer()
    } else {
        (scaled + half).floor().to_integer()
    };
    Rat::new(n, scale)
}

pub fn round_point(p: &RatPoint, bits: u32) -> RatPoint {
    RatPoint::new(round_dyadic(&p.x, bits), round_dyadic(&p.y, bits))
}

/// Smallest `bits` such that `2^-bits <= len / 64`. `len` must be positive.
pub fn grid_bits_for(len: &Rat) -> u32 {
    let target = Rat::from_integer(BigInt::from(64));
    let mut scaled = len.clone();
    let mut bits = 0;
    while scaled < target && bits < 4096 {
        scaled *= rat_int(2);
        bits += 1;
    }
    bits
}

/// Max-norm of a vector.
pub fn norm_inf(v: &RatPoint) -> Rat {
    let (ax, ay) = (v.x.abs(), v.y.abs());
    if ax >= ay {
        ax
    } else {
        ay
    }
}

/// Deterministic rational approximation of `tan(x)` for |x| < pi/2 from a
/// truncated Lambert continued fraction. Used only to choose construction
/// parameters, never to decide a predicate.
pub fn approx_tan(x: &Rat) -> Rat {
    let x2 = x * x;
    let mut acc = rat_int(15);
    for k in (1..=7).rev() {
        let odd = rat_int(2 * k - 1);
        acc = odd - &x2 / acc;
    }
    x / acc
}

/// 355/113.
pub fn approx_pi() -> Rat {
    rat(355, 113)
}

/// Points on segments and on the seam, decided with homogeneous integer
/// coordinates. This is the validator's hot path: no gcd per operation, and
/// an overflow-checked `i128` route before falling back to big integers.
pub(crate) mod exact {
    use super::{Rat, RatPoint};
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::{Signed, ToPrimitive, Zero};
    use std::cmp::Ordering;

    #[derive(Clone, Debug)]
    pub(crate) struct HPoint {
        big: [BigInt; 3],
        small: Option<[i128; 3]>,
    }

    impl HPoint {
        pub(crate) fn new(p: &RatPoint) -> Self {
            let dx = p.x.denom();
            let dy = p.y.denom();
            let w = dx.lcm(dy);
            let x = p.x.numer() * (&w / dx);
            let y = p.y.numer() * (&w / dy);
            let small = match (x.to_i64(), y.to_i64(), w.to_i64()) {
                (Some(a), Some(b), Some(c)) => Some([a as i128, b as i128, c as i128]),
                _ => None,
            };
            HPoint { big: [x, y, w], small }
        }

        /// Homogeneous form without a common-denominator reduction; cheaper
        /// when a point is used only once.
        pub(crate) fn unreduced(p: &RatPoint) -> Self {
            let (dx, dy) = (p.x.denom(), p.y.denom());
            let x = p.x.numer() * dy;
            let y = p.y.numer() * dx;
            let w = dx * dy;
            let small = match (x.to_i64(), y.to_i64(), w.to_i64()) {
                (Some(a), Some(b), Some(c)) => Some([a as i128, b as i128, c as i128]),
                _ => None,
            };
            HPoint { big: [x, y, w], small }
        }
    }

    fn sgn_big(v: &BigInt) -> i32 {
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    fn det_small(a: &[i128; 3], b: &[i128; 3], c: &[i128; 3]) -> Option<i32> {
        let m0 = b[1].checked_mul(c[2])?.checked_sub(b[2].checked_mul(c[1])?)?;
        let m1 = b[0].checked_mul(c[2])?.checked_sub(b[2].checked_mul(c[0])?)?;
        let m2 = b[0].checked_mul(c[1])?.checked_sub(b[1].checked_mul(c[0])?)?;
        let d = a[0].checked_mul(m0)?.checked_sub(a[1].checked_mul(m1)?)?.checked_add(a[2].checked_mul(m2)?)?;
        Some(d.signum() as i32)
    }

    fn det_big(a: &HPoint, b: &HPoint, c: &HPoint) -> BigInt {
        let (a, b, c) = (&a.big, &b.big, &c.big);
        let m0 = &b[1] * &c[2] - &b[2] * &c[1];
        let m1 = &b[0] * &c[2] - &b[2] * &c[0];
        let m2 = &b[0] * &c[1] - &b[1] * &c[0];
        &a[0] * m0 - &a[1] * m1 + &a[2] * m2
    }

    /// Parameters along both segments and the point of a proper crossing of
    /// `p1 p2` with `q1 q2`. The caller has established that it is proper.
    pub(crate) fn proper_intersection(p1: &HPoint, p2: &HPoint, q1: &HPoint, q2: &HPoint) -> (Rat, Rat, RatPoint) {
        let w = |h: &HPoint| h.big[2].clone();
        let den = det_big(p1, p2, q2) * w(q1) - det_big(p1, p2, q1) * w(q2);
        let n1 = det_big(p1, q1, q2) * w(p2);
        let n2 = det_big(p1, q1, p2) * w(q2);
        let (a, b) = (&p1.big, &p2.big);
        let coord = |k: usize| {
            let num = &a[k] * &b[2] * (&den - &n1) + &b[k] * &a[2] * &n1;
            Rat::new(num, &a[2] * &b[2] * &den)
        };
        let point = RatPoint::new(coord(0), coord(1));
        (Rat::new(n1, den.clone()), Rat::new(n2, den), point)
    }

    /// The path `a -> p -> b` turns back on itself at `p`.
    pub(crate) fn folds_back(a: &HPoint, p: &HPoint, b: &HPoint) -> bool {
        orient(p, a, b) == 0 && dot_sign(p, a, b) > 0
    }

    pub(crate) fn orient(a: &HPoint, b: &HPoint, c: &HPoint) -> i32 {
        if let (Some(sa), Some(sb), Some(sc)) = (&a.small, &b.small, &c.small) {
            if let Some(s) = det_small(sa, sb, sc) {
                return s;
            }
        }
        sgn_big(&det_big(a, b, c))
    }

    /// Compare coordinate `k` (0 = x, 1 = y) of two points.
    pub(crate) fn cmp_coord(a: &HPoint, b: &HPoint, k: usize) -> Ordering {
        if let (Some(sa), Some(sb)) = (&a.small, &b.small) {
            if let (Some(l), Some(r)) = (sa[k].checked_mul(sb[2]), sb[k].checked_mul(sa[2])) {
                return l.cmp(&r);
            }
        }
        (&a.big[k] * &b.big[2]).cmp(&(&b.big[k] * &a.big[2]))
    }

    /// Sign of `(a - p) . (b - p)`.
    pub(crate) fn dot_sign(p: &HPoint, a: &HPoint, b: &HPoint) -> i32 {
        let (p, a, b) = (&p.big, &a.big, &b.big);
        let ax = &a[0] * &p[2] - &p[0] * &a[2];
        let ay = &a[1] * &p[2] - &p[1] * &a[2];
        let bx = &b[0] * &p[2] - &p[0] * &b[2];
        let by = &b[1] * &p[2] - &p[1] * &b[2];
        sgn_big(&(ax * bx + ay * by))
    }

    fn in_box(p: &HPoint, a: &HPoint, b: &HPoint) -> bool {
        (0..2).all(|k| {
            let (lo, hi) = if cmp_coord(a, b, k) != Ordering::Greater { (a, b) } else { (b, a) };
            cmp_coord(lo, p, k) != Ordering::Greater && cmp_coord(p, hi, k) != Ordering::Greater
        })
    }

    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub(crate) enum Contact {
        Empty,
        Proper,
        Degenerate,
    }

    pub(crate) fn classify(p1: &HPoint, p2: &HPoint, q1: &HPoint, q2: &HPoint) -> Contact {
        let o1 = orient(p1, p2, q1);
        let o2 = orient(p1, p2, q2);
        if o1 * o2 > 0 {
            return Contact::Empty;
        }
        let o3 = orient(q1, q2, p1);
        let o4 = orient(q1, q2, p2);
        if o1 * o2 < 0 && o3 * o4 < 0 {
            return Contact::Proper;
        }
        let touches = (o1 == 0 && in_box(q1, p1, p2))
            || (o2 == 0 && in_box(q2, p1, p2))
            || (o3 == 0 && in_box(p1, q1, q2))
            || (o4 == 0 && in_box(p2, q1, q2));
        if touches {
            Contact::Degenerate
        } else {
            Contact::Empty
        }
    }

    /// Two segments sharing the endpoint `shared` overlap beyond it iff they
    /// leave it in exactly the same direction.
    pub(crate) fn overlap_at_shared(shared: &HPoint, a: &HPoint, b: &HPoint) -> bool {
        orient(shared, a, b) == 0 && dot_sign(shared, a, b) > 0
    }
}
