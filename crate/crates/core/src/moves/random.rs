//! Seeded generation of legal moves and edits.
//!
//! Attempt `k` draws its parameters from its own ChaCha8 stream, seeded from
//! a master stream, so a fixed seed always yields the same spec. Floating
//! point is used only to aim templates (basic IEEE operations and `sqrt`,
//! which are reproducible); every parameter handed to a move is an exact
//! dyadic rational and legality is decided exactly.

use num_traits::Signed;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{apply_edit_checked, apply_move_checked, checked, EditKind, EditSpec, MoveKind, MoveSpec};
use crate::diagram::{BouquetDiagram, Crossing, SegmentId};
use crate::error::{Error, Result};
use crate::geometry::{grid_bits_for, norm_inf, rat_int, sign_of, Rat, RatPoint, SeamPoint};
use num_bigint::BigInt;

/// Attempts before giving up with [`Error::Exhausted`].
pub const ATTEMPT_LIMIT: usize = 10_000;

const MOVE_WEIGHTS: [(MoveKind, u32); 5] = [
    (MoveKind::KinkPair, 2),
    (MoveKind::Detour, 1),
    (MoveKind::FingerPush, 3),
    (MoveKind::Jiggle, 3),
    (MoveKind::Subdivide, 1),
];

fn dyadic(k: i64, bits: u32) -> Rat {
    Rat::new(BigInt::from(k), BigInt::from(1u8) << bits)
}

fn f64_to_dyadic(x: f64, bits: u32) -> Rat {
    let scaled = (x * (1u64 << bits) as f64).round() as i64;
    dyadic(scaled, bits)
}

fn pick_sign(rng: &mut ChaCha8Rng) -> i64 {
    if rng.random_bool(0.5) {
        1
    } else {
        -1
    }
}

/// Random placement `[c, c + span h]` inside `(0, 1)` with `h = 2^-j`.
fn placement(rng: &mut ChaCha8Rng, span: i64) -> (Rat, Rat) {
    let mut j_min = 0u32;
    while (1i64 << (j_min + 2)) - 4 * span < 2 {
        j_min += 1;
    }
    let j = rng.random_range(j_min..=j_min + 6);
    let k_max = (1i64 << (j + 2)) - 4 * span - 1;
    let k = rng.random_range(1..=k_max);
    (dyadic(k, j + 2), dyadic(1, j))
}

fn f(p: &RatPoint) -> (f64, f64) {
    p.to_f64()
}

/// Exit point on the unit circle of the ray from `p` along `d`, as a circle
/// parameter on a 2^-16 grid.
fn aim_at_seam(p: (f64, f64), d: (f64, f64)) -> Option<Rat> {
    let dd = d.0 * d.0 + d.1 * d.1;
    if dd == 0.0 {
        return None;
    }
    let pd = p.0 * d.0 + p.1 * d.1;
    let pp = p.0 * p.0 + p.1 * p.1;
    let disc = pd * pd - dd * (pp - 1.0);
    if disc <= 0.0 {
        return None;
    }
    let lambda = (-pd + disc.sqrt()) / dd;
    let q = (p.0 + lambda * d.0, p.1 + lambda * d.1);
    if 1.0 + q.0 < 1e-6 {
        return None;
    }
    let t = q.1 / (1.0 + q.0);
    if !t.is_finite() || t.abs() > 1e6 {
        return None;
    }
    Some(f64_to_dyadic(t, 16))
}

/// Direction across the target segment, tilted a little along it.
fn across(rng: &mut ChaCha8Rng, a: &RatPoint, b: &RatPoint) -> (f64, f64) {
    let (ax, ay) = f(a);
    let (bx, by) = f(b);
    let (ux, uy) = (bx - ax, by - ay);
    let s = pick_sign(rng) as f64;
    let tilt = rng.random_range(-0.5..0.5);
    (-uy * s + ux * tilt, ux * s + uy * tilt)
}

fn point_at(a: &RatPoint, b: &RatPoint, t: &Rat) -> (f64, f64) {
    f(&a.lerp(b, t))
}

fn gen_kinks(rng: &mut ChaCha8Rng, span: i64) -> Vec<Rat> {
    let (c, h) = placement(rng, span);
    vec![c, h, rat_int(pick_sign(rng))]
}

fn gen_detour(rng: &mut ChaCha8Rng, a: &RatPoint, b: &RatPoint) -> Option<Vec<Rat>> {
    let (c, h) = placement(rng, 8);
    let xf = a.lerp(b, &(&c + &h * rat_int(7)));
    let t_q = aim_at_seam(f(&xf), across(rng, a, b))?;
    let k = rng.random_range(5..=10);
    let mag = dyadic(1, k);
    let q = SeamPoint::from_param(&t_q).into_point();
    let kq = q.scale(&(Rat::from_integer(1.into()) - &mag * rat_int(2)));
    let side = sign_of(&kq.sub(&xf).cross(&b.sub(a)));
    if side == 0 {
        return None;
    }
    let tau = if side > 0 { mag } else { -mag };
    Some(vec![c, h, rat_int(pick_sign(rng)), t_q, tau])
}

fn gen_finger(rng: &mut ChaCha8Rng, d: &BouquetDiagram, t: SegmentId) -> Option<Vec<Rat>> {
    let (a, b) = d.segment(t).ok()?;
    let (c, h) = placement(rng, 1);
    let mid = &c + &h / rat_int(2);
    let o = point_at(a, b, &mid);
    let dir = across(rng, a, b);
    // Nearest strand hit by the ray, in floating point.
    let mut best: Option<(f64, SegmentId, f64)> = None;
    for id in d.segment_ids() {
        if id == t {
            continue;
        }
        let (p, q) = d.segment(id).ok()?;
        let (p, q) = (f(p), f(q));
        let e = (q.0 - p.0, q.1 - p.1);
        let den = dir.0 * e.1 - dir.1 * e.0;
        if den == 0.0 {
            continue;
        }
        let w = (p.0 - o.0, p.1 - o.1);
        let lambda = (w.0 * e.1 - w.1 * e.0) / den;
        let mu = (w.0 * dir.1 - w.1 * dir.0) / den;
        if lambda > 0.0 && mu > 0.0 && mu < 1.0 && best.as_ref().is_none_or(|b| lambda < b.0) {
            best = Some((lambda, id, mu));
        }
    }
    let (_, strand, mu) = best?;
    let z = f64_to_dyadic(mu, 20);
    if !z.is_positive() || z >= Rat::from_integer(1.into()) {
        return None;
    }
    let eta = dyadic(1, rng.random_range(2..=5));
    Some(vec![c, h, rat_int(strand.loop_idx as i64), rat_int(strand.leg as i64), rat_int(strand.seg as i64), z, eta])
}

fn jiggle_targets(d: &BouquetDiagram) -> Vec<SegmentId> {
    let mut out = Vec::new();
    for (i, lp) in d.loops().iter().enumerate() {
        let legs = lp.legs();
        for (k, leg) in legs.iter().enumerate() {
            let len = leg.points().len();
            for s in 0..leg.segment_count() {
                let j = s + 1;
                let interior = j + 1 < len;
                let q_seam = k > 0 && s == 0;
                let r_seam = k + 1 < legs.len() && j + 1 == len - 1;
                if interior && !q_seam && !r_seam {
                    out.push(SegmentId::new(i, k, s));
                }
            }
        }
    }
    out
}

fn gen_jiggle(rng: &mut ChaCha8Rng, d: &BouquetDiagram, t: SegmentId) -> Option<Vec<Rat>> {
    let leg = &d.loops()[t.loop_idx].legs()[t.leg];
    let pts = leg.points();
    let j = t.seg + 1;
    let l1 = norm_inf(&pts[j].sub(&pts[j - 1]));
    let l2 = norm_inf(&pts[j + 1].sub(&pts[j]));
    let bits = grid_bits_for(if l1 < l2 { &l1 } else { &l2 });
    let kx = rng.random_range(-8..=8);
    let ky = rng.random_range(-8..=8);
    if kx == 0 && ky == 0 {
        return None;
    }
    Some(vec![dyadic(kx, bits), dyadic(ky, bits)])
}

fn gen_subdivide(rng: &mut ChaCha8Rng) -> Vec<Rat> {
    let m = rng.random_range(1..=6);
    let k = rng.random_range(1..(1i64 << m));
    vec![dyadic(k, m)]
}

fn gen_reroute(rng: &mut ChaCha8Rng, a: &RatPoint, b: &RatPoint) -> Option<Vec<Rat>> {
    let (c, h) = placement(rng, 1);
    let x = a.lerp(b, &c);
    let t_q = aim_at_seam(f(&x), across(rng, a, b))?;
    let eps = dyadic(1, rng.random_range(3..=7));
    Some(vec![c, h, t_q, eps])
}

fn gen_move(rng: &mut ChaCha8Rng, d: &BouquetDiagram, kind: MoveKind, ids: &[SegmentId]) -> Option<MoveSpec> {
    let jig;
    let pool = if kind == MoveKind::Jiggle {
        jig = jiggle_targets(d);
        &jig[..]
    } else {
        ids
    };
    if pool.is_empty() {
        return None;
    }
    let t = pool[rng.random_range(0..pool.len())];
    let (a, b) = d.segment(t).ok()?;
    let params = match kind {
        MoveKind::KinkPair => gen_kinks(rng, 6),
        MoveKind::Detour => gen_detour(rng, a, b)?,
        MoveKind::FingerPush => gen_finger(rng, d, t)?,
        MoveKind::Jiggle => gen_jiggle(rng, d, t)?,
        MoveKind::Subdivide => gen_subdivide(rng),
    };
    Some(MoveSpec::new(kind, t, params))
}

fn gen_edit(rng: &mut ChaCha8Rng, d: &BouquetDiagram, kind: EditKind, ids: &[SegmentId]) -> Option<EditSpec> {
    let t = ids[rng.random_range(0..ids.len())];
    let (a, b) = d.segment(t).ok()?;
    let params = match kind {
        EditKind::SingleKink => gen_kinks(rng, 3),
        EditKind::SeamReroute => gen_reroute(rng, a, b)?,
    };
    Some(EditSpec::new(kind, t, params))
}

fn weighted_kind(rng: &mut ChaCha8Rng) -> MoveKind {
    let total: u32 = MOVE_WEIGHTS.iter().map(|w| w.1).sum();
    let mut x = rng.random_range(0..total);
    for (k, w) in MOVE_WEIGHTS {
        if x < w {
            return k;
        }
        x -= w;
    }
    unreachable!()
}

/// Try seeded attempts until one applies. Blocked attempts are skipped; any
/// other error is a defect and is returned.
fn search<T>(seed: u64, mut attempt: impl FnMut(&mut ChaCha8Rng) -> Result<Option<T>>) -> Result<T> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPT_LIMIT {
        let mut rng = ChaCha8Rng::seed_from_u64(master.next_u64());
        match attempt(&mut rng) {
            Ok(Some(v)) => return Ok(v),
            Ok(None) | Err(Error::MoveBlocked(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::Exhausted(ATTEMPT_LIMIT))
}

pub(crate) fn random_move_applied(
    d: &BouquetDiagram,
    before: &[Crossing],
    kind: Option<MoveKind>,
    seed: u64,
) -> Result<(MoveSpec, BouquetDiagram, Vec<Crossing>)> {
    let ids: Vec<SegmentId> = d.segment_ids().collect();
    search(seed, |rng| {
        let k = kind.unwrap_or_else(|| weighted_kind(rng));
        let Some(m) = gen_move(rng, d, k, &ids) else {
            return Ok(None);
        };
        let (out, after) = apply_move_checked(d, before, &m)?;
        Ok(Some((m, out, after)))
    })
}

pub(crate) fn random_edit_applied(
    d: &BouquetDiagram,
    before: &[Crossing],
    kind: Option<EditKind>,
    seed: u64,
) -> Result<(EditSpec, BouquetDiagram, super::EditReport)> {
    let ids: Vec<SegmentId> = d.segment_ids().collect();
    search(seed, |rng| {
        let k = kind.unwrap_or_else(|| if rng.random_bool(0.5) { EditKind::SingleKink } else { EditKind::SeamReroute });
        let Some(e) = gen_edit(rng, d, k, &ids) else {
            return Ok(None);
        };
        let (out, report) = apply_edit_checked(d, before, &e)?;
        Ok(Some((e, out, report)))
    })
}

/// A legal regular move for `d`, chosen deterministically from `seed`.
pub fn random_move(d: &BouquetDiagram, seed: u64) -> Result<MoveSpec> {
    let before = checked(d)?;
    Ok(random_move_applied(d, &before, None, seed)?.0)
}

pub fn random_move_of_kind(d: &BouquetDiagram, kind: MoveKind, seed: u64) -> Result<MoveSpec> {
    let before = checked(d)?;
    Ok(random_move_applied(d, &before, Some(kind), seed)?.0)
}

/// A legal non-regular edit for `d`, chosen deterministically from `seed`.
pub fn random_edit(d: &BouquetDiagram, seed: u64) -> Result<EditSpec> {
    let before = checked(d)?;
    Ok(random_edit_applied(d, &before, None, seed)?.0)
}

pub fn random_edit_of_kind(d: &BouquetDiagram, kind: EditKind, seed: u64) -> Result<EditSpec> {
    let before = checked(d)?;
    Ok(random_edit_applied(d, &before, Some(kind), seed)?.0)
}
