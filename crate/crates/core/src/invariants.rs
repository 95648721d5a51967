//! The complete invariant: cyclic order of half-edges at the vertex (up to
//! rotation and reversal), the class of each loop in pi_1 = Z/2, and the
//! parity of each loop's self-intersection index.

use std::fmt;
use std::str::FromStr;

use crate::diagram::{analyze, BouquetDiagram, Crossing};
use crate::error::{Error, Result};
use crate::geometry::{angle_sort, codirectional, sign_of};

/// A half-edge at the vertex: `e{i+1}` leaving along loop `i`, or its
/// inverse arriving. The derived order is e1 < e1^-1 < e2 < e2^-1 < ...
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub loop_idx: usize,
    pub inverse: bool,
}

impl Symbol {
    pub fn forward(loop_idx: usize) -> Self {
        Symbol { loop_idx, inverse: false }
    }

    pub fn inverse(loop_idx: usize) -> Self {
        Symbol { loop_idx, inverse: true }
    }

    /// Position in the symbol order, `2 * loop + inverse`.
    pub fn rank(self) -> usize {
        2 * self.loop_idx + self.inverse as usize
    }

    pub fn from_rank(r: usize) -> Self {
        Symbol { loop_idx: r / 2, inverse: r % 2 == 1 }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.loop_idx + 1)?;
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let body = s.strip_prefix('e').ok_or_else(|| Error::Parse(format!("bad symbol {s:?}")))?;
        let (num, inverse) = match body.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (body, false),
        };
        let k: usize = num.parse().map_err(|_| Error::Parse(format!("bad symbol {s:?}")))?;
        if k == 0 {
            return Err(Error::Parse(format!("symbols are numbered from 1: {s:?}")));
        }
        Ok(Symbol { loop_idx: k - 1, inverse })
    }
}

/// A cyclic word in which every half-edge symbol of a bouquet of `n` circles
/// occurs once, stored as its canonical representative.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    symbols: Vec<Symbol>,
}

impl CyclicWord {
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn n(&self) -> usize {
        self.symbols.len() / 2
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Minimum over all rotations of `raw` and of its reversal.
pub fn canonical_cyclic_word(raw: &[Symbol]) -> Result<CyclicWord> {
    let n = raw.len().div_ceil(2);
    let mut seen = vec![false; 2 * n];
    for &s in raw {
        if s.loop_idx >= n {
            return Err(Error::UnknownSymbol(s));
        }
        if std::mem::replace(&mut seen[s.rank()], true) {
            return Err(Error::DuplicateSymbol(s));
        }
    }
    if let Some(r) = seen.iter().position(|&b| !b) {
        return Err(Error::MissingSymbol(Symbol::from_rank(r)));
    }
    Ok(CyclicWord { symbols: min_rotation_reversal(raw) })
}

fn min_rotation_reversal(raw: &[Symbol]) -> Vec<Symbol> {
    let len = raw.len();
    let reversed: Vec<Symbol> = raw.iter().rev().copied().collect();
    let mut best: Option<Vec<Symbol>> = None;
    for word in [raw, &reversed[..]] {
        for r in 0..len {
            let cand: Vec<Symbol> = word[r..].iter().chain(&word[..r]).copied().collect();
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    best.unwrap_or_default()
}

/// Local orientation of the plane at the vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Counterclockwise in the disk chart.
    Positive,
    Negative,
}

impl Orientation {
    pub fn sign(self) -> i64 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }
}

/// `(order, h, w)`. Text form: `order=e1,e2,e1^-1,e2^-1; h=10; w=01`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantTuple {
    pub order: CyclicWord,
    pub h: Vec<bool>,
    pub w: Vec<bool>,
}

impl InvariantTuple {
    pub fn new(order: CyclicWord, h: Vec<bool>, w: Vec<bool>) -> Result<Self> {
        let n = order.n();
        if h.len() != n || w.len() != n {
            return Err(Error::Parse(format!("bit strings must have length {n}, got h={} w={}", h.len(), w.len())));
        }
        Ok(InvariantTuple { order, h, w })
    }

    pub fn n(&self) -> usize {
        self.order.n()
    }

    /// Names of the components that differ: a subset of `order`, `h`, `w`.
    pub fn differing_components(&self, other: &InvariantTuple) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.order != other.order {
            out.push("order");
        }
        if self.h != other.h {
            out.push("h");
        }
        if self.w != other.w {
            out.push("w");
        }
        out
    }
}

fn bits(v: &[bool]) -> String {
    v.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse(format!("bad bit {c:?} in {s:?}"))),
        })
        .collect()
}

impl fmt::Display for InvariantTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "order={}; h={}; w={}", self.order, bits(&self.h), bits(&self.w))
    }
}

impl FromStr for InvariantTuple {
    type Err = Error;

    /// Accepts any rotation or reversal of the word and canonicalizes it.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(';').map(str::trim).collect();
        let field = |i: usize, key: &str| -> Result<&str> {
            parts
                .get(i)
                .and_then(|p| p.strip_prefix(key))
                .and_then(|p| p.strip_prefix('='))
                .map(str::trim)
                .ok_or_else(|| Error::Parse(format!("expected `{key}=...` in {s:?}")))
        };
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected `order=...; h=...; w=...`, got {s:?}")));
        }
        let raw = field(0, "order")?.split(',').map(Symbol::from_str).collect::<Result<Vec<_>>>()?;
        let order = canonical_cyclic_word(&raw)?;
        InvariantTuple::new(order, parse_bits(field(1, "h")?)?, parse_bits(field(2, "w")?)?)
    }
}

fn checked_crossings(d: &BouquetDiagram) -> Result<Vec<Crossing>> {
    let (violations, crossings) = analyze(d);
    if violations.is_empty() {
        Ok(crossings)
    } else {
        Err(Error::InvalidDiagram(violations))
    }
}

fn order_of(d: &BouquetDiagram) -> Result<CyclicWord> {
    let dirs = d.vertex_directions();
    let vecs: Vec<_> = dirs.iter().map(|(_, v)| v.clone()).collect();
    let perm = angle_sort(&vecs)?;
    let raw: Vec<Symbol> = perm.into_iter().map(|k| dirs[k].0).collect();
    canonical_cyclic_word(&raw)
}

fn classes_of(d: &BouquetDiagram) -> Vec<bool> {
    d.loops().iter().map(|lp| lp.seam_crossings() % 2 == 1).collect()
}

fn index_of(d: &BouquetDiagram, crossings: &[Crossing], i: usize, or: Orientation) -> Result<i64> {
    let lp = d.loop_path(i)?;
    if codirectional(&lp.outgoing(), &lp.incoming().neg()) {
        return Err(Error::OppositeEndDirections(i));
    }
    let mut total = 0i64;
    for c in crossings.iter().filter(|c| c.is_self() && c.loop_a == i) {
        let d1 = d.direction(c.segment_a())?;
        let d2 = d.direction(c.segment_b())?;
        let transport = if c.param_a.leg % 2 == 0 { 1 } else { -1 };
        total += or.sign() * transport * sign_of(&d1.cross(&d2)) as i64;
    }
    Ok(total)
}

fn parities(d: &BouquetDiagram, crossings: &[Crossing]) -> Result<Vec<bool>> {
    (0..d.n()).map(|i| Ok(index_of(d, crossings, i, Orientation::Positive)?.rem_euclid(2) == 1)).collect()
}

/// Cyclic order of the half-edges at the vertex.
pub fn inv1(d: &BouquetDiagram) -> Result<CyclicWord> {
    checked_crossings(d)?;
    order_of(d)
}

/// Per loop: odd number of seam crossings, i.e. the loop is not contractible.
pub fn inv2(d: &BouquetDiagram) -> Result<Vec<bool>> {
    checked_crossings(d)?;
    Ok(classes_of(d))
}

/// Signed self-intersection index of loop `i`. Each self-crossing at loop
/// times t1 < t2 contributes `or * (-1)^s * sign(d(t1) x d(t2))`, where `s`
/// counts the seam crossings before t1.
pub fn signed_index(d: &BouquetDiagram, i: usize, or: Orientation) -> Result<i64> {
    let crossings = checked_crossings(d)?;
    index_of(d, &crossings, i, or)
}

/// Per loop: parity of the signed self-intersection index.
pub fn inv3(d: &BouquetDiagram) -> Result<Vec<bool>> {
    let crossings = checked_crossings(d)?;
    parities(d, &crossings)
}

pub fn invariants(d: &BouquetDiagram) -> Result<InvariantTuple> {
    let crossings = checked_crossings(d)?;
    InvariantTuple::new(order_of(d)?, classes_of(d), parities(d, &crossings)?)
}

/// Regular homotopy equivalence, decided by comparing invariants.
pub fn equiv(d1: &BouquetDiagram, d2: &BouquetDiagram) -> Result<bool> {
    if d1.n() != d2.n() {
        return Err(Error::MismatchedLoopCount(d1.n(), d2.n()));
    }
    Ok(invariants(d1)? == invariants(d2)?)
}
