//! Normal forms: a concrete diagram for every invariant tuple, and the list
//! of all tuples for a given number of loops.
//!
//! Construction: the vertex sits at the origin and the `2n` half-edges leave
//! it along a fan of equally spaced directions, slot `k` carrying the `k`-th
//! symbol of the cyclic order. Loop `i` lives near the circle of radius
//! `rho_i`: a loop with `h = 0` walks counterclockwise along that circle from
//! its outgoing ray to its incoming ray; a loop with `h = 1` leaves through
//! the seam just past its outgoing ray, re-enters at the antipode and walks
//! back along its circle. Self-crossing parity is then corrected with one
//! kink where needed.

use num_traits::{One, Signed};

use crate::diagram::{BouquetDiagram, Leg, LoopPath};
use crate::error::{Error, Result};
use crate::geometry::{approx_pi, approx_tan, rat, rat_int, round_dyadic, seam_reflection, Rat, RatPoint, SeamPoint};
use crate::invariants::{canonical_cyclic_word, invariants, CyclicWord, InvariantTuple, Symbol};
use crate::moves::{apply_edit_checked, checked, EditKind, EditSpec};

/// Largest `n` accepted by [`enumerate_classes`].
pub const MAX_ENUMERATE_N: usize = 6;

const ATTEMPTS: i64 = 8;
const TAN_BITS: u32 = 20;

/// Rational direction at (approximate) angle `phi`, from the half-angle
/// parametrization. Exact rational, but not of unit length when flipped.
fn direction_at(phi: &Rat) -> RatPoint {
    let pi = approx_pi();
    let half_pi = &pi / rat_int(2);
    let mut phi = phi.clone();
    while phi > pi {
        phi -= &pi * rat_int(2);
    }
    while phi <= -&pi {
        phi += &pi * rat_int(2);
    }
    if phi.abs() <= half_pi {
        let t = round_dyadic(&approx_tan(&(phi / rat_int(2))), TAN_BITS);
        SeamPoint::from_param(&t).into_point()
    } else {
        let psi = if phi.is_positive() { phi - &pi } else { phi + &pi };
        let t = round_dyadic(&approx_tan(&(psi / rat_int(2))), TAN_BITS);
        SeamPoint::from_param(&t).into_point().neg()
    }
}

fn seam_at(phi: &Rat) -> Result<SeamPoint> {
    SeamPoint::new(direction_at(phi))
}

struct Fan {
    n: usize,
    slot: Vec<Rat>,
    mid: Vec<Rat>,
}

impl Fan {
    fn new(n: usize) -> Fan {
        let pi = approx_pi();
        let step = &pi / rat_int(2 * n as i64);
        let slot: Vec<Rat> = (0..2 * n).map(|k| -&pi + &step * rat_int(2 * k as i64 + 1)).collect();
        let mid = slot.iter().map(|s| s + &step).collect();
        Fan { n, slot, mid }
    }

    fn slots(&self) -> usize {
        2 * self.n
    }

    /// Ring points at radius `rho` through the mids from slot `from` up to
    /// (not including) slot `to`, counterclockwise.
    fn ring(&self, from: usize, to: usize, rho: &Rat) -> Vec<RatPoint> {
        let m = self.slots();
        let mut pts = Vec::new();
        let mut k = from;
        while k != to {
            pts.push(direction_at(&self.mid[k]).scale(rho));
            k = (k + 1) % m;
        }
        pts
    }
}

fn build(t: &InvariantTuple, attempt: i64) -> Result<BouquetDiagram> {
    let n = t.n();
    let fan = Fan::new(n);
    let m = fan.slots();
    let mut out_slot = vec![0; n];
    let mut in_slot = vec![0; n];
    for (k, s) in t.order.symbols().iter().enumerate() {
        if s.inverse {
            in_slot[s.loop_idx] = k;
        } else {
            out_slot[s.loop_idx] = k;
        }
    }
    let shrink = Rat::one() - rat(attempt, 64);
    let mu = rat(1, 8 + attempt);
    let v = RatPoint::origin();
    let mut loops = Vec::with_capacity(n);
    for i in 0..n {
        let rho = (rat(1, 5) + rat(i as i64 + 1, 2 * (n as i64 + 1))) * &shrink;
        let (a, b) = (out_slot[i], in_slot[i]);
        let p1 = direction_at(&fan.slot[a]).scale(&rho);
        let p2 = direction_at(&fan.slot[b]).scale(&rho);
        let path = if !t.h[i] {
            let mut pts = vec![v.clone(), p1];
            pts.extend(fan.ring(a, b, &rho));
            pts.extend([p2, v.clone()]);
            LoopPath::from_points(vec![pts])?
        } else {
            let delta = approx_pi() * rat(i as i64 + 1, 2 * (n as i64) * (n as i64 + 2));
            let q = seam_at(&(&fan.slot[a] + &delta))?;
            let entry = q.antipode().into_point();
            let d_out = q.point().sub(&p1);
            let e = entry.offset(&seam_reflection(q.point())?.apply(&d_out), &mu);
            let r = entry.scale(&rho);
            let opposite = (a + fan.n) % m;
            let mut back = vec![entry, e, r];
            if opposite != b {
                back.extend(fan.ring(opposite, b, &rho));
            }
            back.extend([p2, v.clone()]);
            LoopPath::new(vec![Leg::new(vec![v.clone(), p1, q.into_point()])?, Leg::new(back)?])?
        };
        loops.push(path);
    }
    let d = BouquetDiagram::new(v, loops)?;
    let d = fix_parity(d, &t.w)?;
    match invariants(&d) {
        Ok(got) if got == *t => Ok(d),
        Ok(got) => Err(Error::Internal(format!("realized {got}, wanted {t}"))),
        Err(e) => Err(e),
    }
}

/// Splice one kink into every loop whose self-crossing parity is off.
fn fix_parity(mut d: BouquetDiagram, w: &[bool]) -> Result<BouquetDiagram> {
    let mut crossings = checked(&d)?;
    for (i, &want) in w.iter().enumerate() {
        let own = crossings.iter().filter(|c| c.is_self() && c.loop_a == i).count();
        if (own % 2 == 1) == want {
            continue;
        }
        let targets: Vec<_> = d.segment_ids().filter(|s| s.loop_idx == i).collect();
        let mut done = false;
        'search: for h in [rat(1, 32), rat(1, 128)] {
            for c in [rat(1, 2), rat(1, 4), rat(5, 8), rat(1, 8)] {
                for &target in &targets {
                    let e = EditSpec::new(EditKind::SingleKink, target, vec![c.clone(), h.clone(), Rat::one()]);
                    match apply_edit_checked(&d, &crossings, &e) {
                        Ok((next, _)) => {
                            d = next;
                            done = true;
                            break 'search;
                        }
                        Err(Error::MoveBlocked(_)) => {}
                        Err(err) => return Err(err),
                    }
                }
            }
        }
        if !done {
            return Err(Error::MoveBlocked(format!("no room for a kink on loop {i}")));
        }
        crossings = checked(&d)?;
    }
    Ok(d)
}

/// A valid diagram whose invariant tuple is `t`.
pub fn realize(t: &InvariantTuple) -> Result<BouquetDiagram> {
    let mut last = None;
    for attempt in 0..ATTEMPTS {
        match build(t, attempt) {
            Ok(d) => return Ok(d),
            Err(e) => last = Some(e),
        }
    }
    Err(Error::Internal(format!("could not realize {t}: {}", last.map(|e| e.to_string()).unwrap_or_default())))
}

/// The equivalence class of `d`, named by its invariant tuple.
pub fn classify(d: &BouquetDiagram) -> Result<InvariantTuple> {
    invariants(d)
}

/// Closed-form class count `4^n * max(1, (2n-1)!/2)`.
pub fn class_count(n: usize) -> u128 {
    let words: u128 = if n == 1 { 1 } else { (1..=(2 * n as u128 - 1)).product::<u128>() / 2 };
    words << (2 * n)
}

/// Lazily enumerate all invariant tuples for `n` loops: canonical words in
/// increasing order, then `h` and `w` as binary counters (loop 0 first).
pub fn enumerate_classes(n: usize) -> Result<Classes> {
    if n == 0 {
        return Err(Error::IndexOutOfRange("a bouquet needs at least one loop".into()));
    }
    if n > MAX_ENUMERATE_N {
        return Err(Error::LimitExceeded { n, max: MAX_ENUMERATE_N });
    }
    Ok(Classes { n, perm: Some((1..2 * n).collect()), word: None, bits: 0 })
}

/// Iterator returned by [`enumerate_classes`].
#[derive(Clone, Debug)]
pub struct Classes {
    n: usize,
    /// Ranks following the leading `e1`; `None` once exhausted.
    perm: Option<Vec<usize>>,
    word: Option<CyclicWord>,
    bits: u64,
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

impl Classes {
    fn next_word(&mut self) -> Option<CyclicWord> {
        loop {
            let perm = self.perm.as_mut()?;
            let raw: Vec<Symbol> =
                std::iter::once(Symbol::from_rank(0)).chain(perm.iter().map(|&r| Symbol::from_rank(r))).collect();
            if !next_permutation(perm) {
                self.perm = None;
            }
            let canon = canonical_cyclic_word(&raw).expect("a permutation of all symbols");
            if canon.symbols() == raw.as_slice() {
                return Some(canon);
            }
        }
    }
}

impl Iterator for Classes {
    type Item = InvariantTuple;

    fn next(&mut self) -> Option<InvariantTuple> {
        let n = self.n;
        if self.word.is_none() || self.bits == 1 << (2 * n) {
            self.word = Some(self.next_word()?);
            self.bits = 0;
        }
        let word = self.word.clone().expect("set above");
        let bit = |k: usize| (self.bits >> (2 * n - 1 - k)) & 1 == 1;
        let h = (0..n).map(bit).collect();
        let w = (n..2 * n).map(bit).collect();
        self.bits += 1;
        Some(InvariantTuple::new(word, h, w).expect("well-formed by construction"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::validate;
    use std::collections::BTreeSet;

    fn oracle_word_count(n: usize) -> usize {
        // Brute force over every word, canonicalized as the minimum over all
        // rotations and reversals of the rank sequence.
        let m = 2 * n;
        let mut perm: Vec<usize> = (0..m).collect();
        let mut seen = BTreeSet::new();
        loop {
            let mut best: Option<Vec<usize>> = None;
            for rev in [false, true] {
                let mut w = perm.clone();
                if rev {
                    w.reverse();
                }
                for _ in 0..m {
                    w.rotate_left(1);
                    if best.as_ref().is_none_or(|b| w < *b) {
                        best = Some(w.clone());
                    }
                }
            }
            seen.insert(best.unwrap());
            if !next_permutation(&mut perm) {
                break;
            }
        }
        seen.len()
    }

    #[test]
    fn counts_match_brute_force() {
        for n in 1..=3 {
            let all: Vec<_> = enumerate_classes(n).unwrap().collect();
            let distinct: BTreeSet<String> = all.iter().map(|t| t.to_string()).collect();
            assert_eq!(distinct.len(), all.len());
            assert_eq!(all.len(), oracle_word_count(n) << (2 * n));
            assert_eq!(all.len() as u128, class_count(n));
        }
        assert_eq!(class_count(1), 4);
        assert_eq!(class_count(2), 48);
        assert_eq!(class_count(3), 3840);
    }

    #[test]
    fn limits() {
        assert!(matches!(enumerate_classes(7), Err(Error::LimitExceeded { n: 7, max: 6 })));
        assert!(enumerate_classes(0).is_err());
        assert_eq!(enumerate_classes(6).unwrap().next().unwrap().n(), 6);
    }

    #[test]
    fn first_tuples_for_one_loop() {
        let texts: Vec<String> = enumerate_classes(1).unwrap().map(|t| t.to_string()).collect();
        assert_eq!(
            texts,
            [
                "order=e1,e1^-1; h=0; w=0",
                "order=e1,e1^-1; h=0; w=1",
                "order=e1,e1^-1; h=1; w=0",
                "order=e1,e1^-1; h=1; w=1",
            ]
        );
    }

    #[test]
    fn trivial_class_is_an_embedded_loop() {
        let t: InvariantTuple = "order=e1,e1^-1; h=0; w=0".parse().unwrap();
        let d = realize(&t).unwrap();
        assert!(crate::diagram::crossings(&d).unwrap().is_empty());
        assert_eq!(d.loops()[0].seam_crossings(), 0);
    }

    #[test]
    fn round_trip_small() {
        for n in 1..=2 {
            for t in enumerate_classes(n).unwrap() {
                let d = realize(&t).unwrap_or_else(|e| panic!("{t}: {e}"));
                assert!(validate(&d).is_ok());
                assert_eq!(classify(&d).unwrap(), t);
            }
        }
    }

    #[test]
    fn fan_is_exactly_ordered() {
        for n in 1..=6 {
            let fan = Fan::new(n);
            let dirs: Vec<RatPoint> = fan.slot.iter().map(direction_at).collect();
            let order = crate::geometry::angle_sort(&dirs).unwrap();
            let start = order.iter().position(|&k| k == 0).unwrap();
            let rotated: Vec<usize> = order[start..].iter().chain(&order[..start]).copied().collect();
            assert_eq!(rotated, (0..2 * n).collect::<Vec<_>>());
            assert!(dirs.iter().all(|p| !p.is_zero()));
        }
    }
}
