//! Regular-homotopy moves and, for negative testing, edits that are not
//! regular homotopies.
//!
//! Every move carries explicit rational construction data. A move is applied
//! by splicing a template into the target segment, checking that the
//! neighbourhood it rebuilds is empty, and validating the result.
//!
//! Parameter layouts (all rationals):
//!
//! | kind          | params                                        |
//! |---------------|-----------------------------------------------|
//! | `KinkPair`    | `c h s` (s = chart sign of the first kink, ±1) |
//! | `Detour`      | `c h sigma t_q tau`                           |
//! | `FingerPush`  | `c h loop leg segment z eta`                  |
//! | `Jiggle`      | `dx dy`                                       |
//! | `Subdivide`   | `c`                                           |
//! | `SingleKink`  | `c h s`                                       |
//! | `SeamReroute` | `c h t_q eps`                                 |
//!
//! `c` and `h` place the template on `[c, c + span h]` of the target
//! segment; `t_q` is the circle parameter of the seam point used.

mod build;
mod random;
mod region;
mod script;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

pub(crate) use random::random_move_applied;
pub use random::{random_edit, random_edit_of_kind, random_move, random_move_of_kind, ATTEMPT_LIMIT};
pub use script::{format_script, parse_script, Script, ScriptStep};

use crate::diagram::{analyze, BouquetDiagram, Crossing, SegmentId};
use crate::error::{Error, Result};
use crate::geometry::Rat;
use build::Built;
use region::Seg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveKind {
    KinkPair,
    Detour,
    FingerPush,
    Jiggle,
    Subdivide,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EditKind {
    SingleKink,
    SeamReroute,
}

impl MoveKind {
    pub const ALL: [MoveKind; 5] =
        [MoveKind::KinkPair, MoveKind::Detour, MoveKind::FingerPush, MoveKind::Jiggle, MoveKind::Subdivide];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::KinkPair => "KinkPair",
            MoveKind::Detour => "Detour",
            MoveKind::FingerPush => "FingerPush",
            MoveKind::Jiggle => "Jiggle",
            MoveKind::Subdivide => "Subdivide",
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            MoveKind::KinkPair => 3,
            MoveKind::Detour => 5,
            MoveKind::FingerPush => 7,
            MoveKind::Jiggle => 2,
            MoveKind::Subdivide => 1,
        }
    }
}

impl EditKind {
    pub const ALL: [EditKind; 2] = [EditKind::SingleKink, EditKind::SeamReroute];

    pub fn name(self) -> &'static str {
        match self {
            EditKind::SingleKink => "SingleKink",
            EditKind::SeamReroute => "SeamReroute",
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            EditKind::SingleKink => 3,
            EditKind::SeamReroute => 4,
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for EditKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MoveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        MoveKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown move kind {s:?}")))
    }
}

impl FromStr for EditKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EditKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown edit kind {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MoveSpec {
    pub kind: MoveKind,
    pub target: SegmentId,
    pub params: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EditSpec {
    pub kind: EditKind,
    pub target: SegmentId,
    pub params: Vec<Rat>,
}

impl MoveSpec {
    pub fn new(kind: MoveKind, target: SegmentId, params: Vec<Rat>) -> Self {
        MoveSpec { kind, target, params }
    }
}

impl EditSpec {
    pub fn new(kind: EditKind, target: SegmentId, params: Vec<Rat>) -> Self {
        EditSpec { kind, target, params }
    }
}

fn write_step(f: &mut fmt::Formatter<'_>, name: &str, t: SegmentId, params: &[Rat]) -> fmt::Result {
    write!(f, "{name} {} {} {}", t.loop_idx, t.leg, t.seg)?;
    for p in params {
        write!(f, " {}/{}", p.numer(), p.denom())?;
    }
    Ok(())
}

/// Script line form: `KIND loop leg segment p/q ...`.
impl fmt::Display for MoveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_step(f, self.kind.name(), self.target, &self.params)
    }
}

impl fmt::Display for EditSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_step(f, self.kind.name(), self.target, &self.params)
    }
}

/// What an edit did to the self-crossings of its loop.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EditReport {
    pub loop_idx: usize,
    pub self_crossings_before: usize,
    pub self_crossings_after: usize,
}

impl EditReport {
    /// Whether the edit changed the parity of the loop's self-crossings.
    pub fn parity_changed(&self) -> bool {
        (self.self_crossings_before + self.self_crossings_after) % 2 == 1
    }
}

pub(crate) fn checked(d: &BouquetDiagram) -> Result<Vec<Crossing>> {
    let (violations, crossings) = analyze(d);
    if violations.is_empty() {
        Ok(crossings)
    } else {
        Err(Error::InvalidDiagram(violations))
    }
}

fn arity(name: &str, want: usize, got: usize) -> Result<()> {
    if want != got {
        return Err(Error::Parse(format!("{name} takes {want} parameters, got {got}")));
    }
    Ok(())
}

/// Validate a construction: regions empty, result generic, and the crossing
/// structure changed only inside the regions.
fn finish(built: Built, before: &[Crossing]) -> Result<(BouquetDiagram, Vec<Crossing>)> {
    if !region::regions_clear(&built.diagram, &built.regions) {
        return Err(Error::MoveBlocked("the rebuilt neighbourhood is not empty".into()));
    }
    let (violations, after) = analyze(&built.diagram);
    if let Some(v) = violations.first() {
        return Err(Error::MoveBlocked(format!("result is not generic: {v}")));
    }
    if let Some(added) = built.added_crossings {
        check_contract(&built, &after, added)?;
        if after.len() != before.len() + added {
            return Err(Error::Internal(format!(
                "expected {} crossings after the move, found {}",
                before.len() + added,
                after.len()
            )));
        }
    }
    Ok((built.diagram, after))
}

/// Every crossing on a segment a region owns is between segments that region
/// owns or allows, and there are exactly `added` of them.
fn check_contract(built: &Built, after: &[Crossing], added: usize) -> Result<()> {
    let mut owner: HashMap<Seg, usize> = HashMap::new();
    for (k, r) in built.regions.iter().enumerate() {
        for s in &r.owned {
            owner.insert(s.clone(), k);
        }
    }
    let key = |id: SegmentId| -> Result<Seg> {
        let (a, b) = built.diagram.segment(id)?;
        Ok((a.clone(), b.clone()))
    };
    let mut count = 0;
    for c in after {
        let (ka, kb) = (key(c.segment_a())?, key(c.segment_b())?);
        let expected = match (owner.get(&ka), owner.get(&kb)) {
            (None, None) => continue,
            (Some(x), Some(y)) => x == y,
            (Some(&x), None) => built.regions[x].allowed.contains(&kb),
            (None, Some(&y)) => built.regions[y].allowed.contains(&ka),
        };
        if !expected {
            return Err(Error::Internal(format!("unexpected crossing at {} after a region check passed", c.location)));
        }
        count += 1;
    }
    if count != added {
        return Err(Error::MoveBlocked(format!("template produced {count} crossings, expected {added}")));
    }
    Ok(())
}

fn build_move(d: &BouquetDiagram, m: &MoveSpec) -> Result<Built> {
    arity(m.kind.name(), m.kind.param_count(), m.params.len())?;
    d.segment(m.target)?;
    match m.kind {
        MoveKind::KinkPair => build::kink_pair(d, m.target, &m.params),
        MoveKind::Detour => build::detour(d, m.target, &m.params),
        MoveKind::FingerPush => build::finger_push(d, m.target, &m.params),
        MoveKind::Jiggle => build::jiggle(d, m.target, &m.params),
        MoveKind::Subdivide => build::subdivide(d, m.target, &m.params),
    }
}

fn build_edit(d: &BouquetDiagram, e: &EditSpec) -> Result<Built> {
    arity(e.kind.name(), e.kind.param_count(), e.params.len())?;
    d.segment(e.target)?;
    match e.kind {
        EditKind::SingleKink => build::single_kink(d, e.target, &e.params),
        EditKind::SeamReroute => build::seam_reroute(d, e.target, &e.params),
    }
}

/// Apply `m` to `d`, whose crossings are `before`; also returns the
/// crossings of the result.
pub(crate) fn apply_move_checked(
    d: &BouquetDiagram,
    before: &[Crossing],
    m: &MoveSpec,
) -> Result<(BouquetDiagram, Vec<Crossing>)> {
    finish(build_move(d, m)?, before)
}

pub(crate) fn apply_edit_checked(
    d: &BouquetDiagram,
    before: &[Crossing],
    e: &EditSpec,
) -> Result<(BouquetDiagram, EditReport)> {
    let (out, after) = finish(build_edit(d, e)?, before)?;
    let i = e.target.loop_idx;
    let own = |cs: &[Crossing]| cs.iter().filter(|c| c.is_self() && c.loop_a == i).count();
    let report = EditReport { loop_idx: i, self_crossings_before: own(before), self_crossings_after: own(&after) };
    Ok((out, report))
}

/// Apply a regular move. The input must be valid; the output is valid or the
/// move is reported as blocked.
pub fn apply_move(d: &BouquetDiagram, m: &MoveSpec) -> Result<BouquetDiagram> {
    let before = checked(d)?;
    Ok(apply_move_checked(d, &before, m)?.0)
}

/// Apply a non-regular edit.
pub fn apply_edit(d: &BouquetDiagram, e: &EditSpec) -> Result<BouquetDiagram> {
    Ok(apply_edit_reported(d, e)?.0)
}

/// Apply a non-regular edit and report its effect on the loop's crossings.
pub fn apply_edit_reported(d: &BouquetDiagram, e: &EditSpec) -> Result<(BouquetDiagram, EditReport)> {
    let before = checked(d)?;
    apply_edit_checked(d, &before, e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::fixtures::*;
    use crate::geometry::{rat, rat_int};
    use crate::invariants::{invariants, signed_index, Orientation};

    fn seg(l: usize, k: usize, s: usize) -> SegmentId {
        SegmentId::new(l, k, s)
    }

    fn self_crossings(d: &BouquetDiagram, i: usize) -> usize {
        crate::diagram::crossings(d).unwrap().iter().filter(|c| c.is_self() && c.loop_a == i).count()
    }

    #[test]
    fn kink_pair_on_square() {
        let d = square();
        let m = MoveSpec::new(MoveKind::KinkPair, seg(0, 0, 0), vec![rat(1, 4), rat(1, 16), rat_int(1)]);
        let out = apply_move(&d, &m).unwrap();
        assert_eq!(self_crossings(&out, 0), 2);
        assert_eq!(signed_index(&out, 0, Orientation::Positive).unwrap(), 0);
        assert_eq!(invariants(&out).unwrap(), invariants(&d).unwrap());
    }

    #[test]
    fn single_kink_twice() {
        let d = square();
        let e = EditSpec::new(EditKind::SingleKink, seg(0, 0, 0), vec![rat(1, 4), rat(1, 16), rat_int(1)]);
        let once = apply_edit(&d, &e).unwrap();
        assert_eq!(invariants(&once).unwrap().w, vec![true]);
        let e2 = EditSpec::new(EditKind::SingleKink, seg(0, 0, 1), vec![rat(1, 4), rat(1, 16), rat_int(1)]);
        let twice = apply_edit(&once, &e2).unwrap();
        assert_eq!(invariants(&twice).unwrap().w, vec![false]);
        assert_eq!(signed_index(&twice, 0, Orientation::Positive).unwrap().abs(), 2);
    }

    #[test]
    fn seam_reroute_on_square() {
        let d = square();
        // Leave the bottom edge straight down through (0, -1).
        let e = EditSpec::new(EditKind::SeamReroute, seg(0, 0, 1), vec![rat(1, 4), rat(1, 4), rat_int(-1), rat(1, 8)]);
        let e = EditSpec { target: seg(0, 0, 0), ..e };
        let (out, report) = apply_edit_reported(&d, &e).unwrap();
        assert_eq!(invariants(&out).unwrap().h, vec![true]);
        assert_eq!(report.self_crossings_before, 0);
    }

    #[test]
    fn subdivide_keeps_crossings() {
        let d = figure_eight();
        let m = MoveSpec::new(MoveKind::Subdivide, seg(0, 0, 0), vec![rat(1, 3)]);
        let out = apply_move(&d, &m).unwrap();
        let locs = |d: &BouquetDiagram| {
            crate::diagram::crossings(d).unwrap().into_iter().map(|c| c.location).collect::<Vec<_>>()
        };
        assert_eq!(locs(&out), locs(&d));
        let on_crossing = MoveSpec::new(MoveKind::Subdivide, seg(0, 0, 0), vec![rat(1, 2)]);
        assert!(matches!(apply_move(&d, &on_crossing), Err(Error::MoveBlocked(_))));
    }

    #[test]
    fn detour_on_seam_chord() {
        let d = seam_chord();
        let before = signed_index(&d, 0, Orientation::Positive).unwrap();
        for seed in 0..6 {
            let m = random_move_of_kind(&d, MoveKind::Detour, seed).unwrap();
            let sigma = if m.params[2] == rat_int(1) { 1 } else { -1 };
            let out = apply_move(&d, &m).unwrap();
            let after = signed_index(&out, 0, Orientation::Positive).unwrap();
            assert_eq!(after - before, 2 * sigma, "{m}");
            assert_eq!(invariants(&out).unwrap(), invariants(&d).unwrap());
            assert_eq!(out.loops()[0].seam_crossings(), 3);
        }
    }

    #[test]
    fn random_move_is_deterministic() {
        let d = figure_eight();
        for seed in [1, 7, 99] {
            assert_eq!(random_move(&d, seed).unwrap(), random_move(&d, seed).unwrap());
        }
    }

    #[test]
    fn wrong_arity_is_a_parse_error() {
        let m = MoveSpec::new(MoveKind::Subdivide, seg(0, 0, 0), vec![]);
        assert!(matches!(apply_move(&square(), &m), Err(Error::Parse(_))));
        let m = MoveSpec::new(MoveKind::Subdivide, seg(0, 0, 9), vec![rat(1, 2)]);
        assert!(matches!(apply_move(&square(), &m), Err(Error::IndexOutOfRange(_))));
    }
}
