//! Immersed bouquets of circles in the disk model, and their generic-position
//! validator.
//!
//! A loop is a sequence of polyline legs. Every leg but the last ends on the
//! seam at some point `p`; the next leg starts at `-p`. The first leg starts
//! and the last leg ends at the bouquet vertex.

mod json;
mod validate;

pub use json::{from_json, to_json};
pub(crate) use validate::analyze;
pub use validate::{crossings, validate, Violation};

use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{Rat, RatPoint};
use crate::invariants::Symbol;

/// One polyline piece of a loop, at least two points long.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Leg {
    points: Vec<RatPoint>,
}

impl Leg {
    pub fn new(points: Vec<RatPoint>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::Parse(format!("a leg needs at least 2 points, got {}", points.len())));
        }
        Ok(Leg { points })
    }

    pub fn points(&self) -> &[RatPoint] {
        &self.points
    }

    pub fn first(&self) -> &RatPoint {
        &self.points[0]
    }

    pub fn last(&self) -> &RatPoint {
        &self.points[self.points.len() - 1]
    }

    pub fn segment_count(&self) -> usize {
        self.points.len() - 1
    }

    pub fn segment(&self, seg: usize) -> (&RatPoint, &RatPoint) {
        (&self.points[seg], &self.points[seg + 1])
    }

    pub fn direction(&self, seg: usize) -> RatPoint {
        self.points[seg + 1].sub(&self.points[seg])
    }
}

/// The image of one edge of the bouquet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LoopPath {
    legs: Vec<Leg>,
}

impl LoopPath {
    pub fn new(legs: Vec<Leg>) -> Result<Self> {
        if legs.is_empty() {
            return Err(Error::Parse("a loop needs at least one leg".into()));
        }
        Ok(LoopPath { legs })
    }

    /// Convenience constructor from raw point lists.
    pub fn from_points(legs: Vec<Vec<RatPoint>>) -> Result<Self> {
        LoopPath::new(legs.into_iter().map(Leg::new).collect::<Result<_>>()?)
    }

    pub fn legs(&self) -> &[Leg] {
        &self.legs
    }

    pub fn seam_crossings(&self) -> usize {
        self.legs.len() - 1
    }

    pub fn segment_count(&self) -> usize {
        self.legs.iter().map(Leg::segment_count).sum()
    }

    /// Velocity of the first segment.
    pub fn outgoing(&self) -> RatPoint {
        self.legs[0].direction(0)
    }

    /// Velocity of the last segment (arriving at the vertex).
    pub fn incoming(&self) -> RatPoint {
        let leg = &self.legs[self.legs.len() - 1];
        leg.direction(leg.segment_count() - 1)
    }

    pub fn into_legs(self) -> Vec<Leg> {
        self.legs
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SegmentId {
    pub loop_idx: usize,
    pub leg: usize,
    pub seg: usize,
}

impl SegmentId {
    pub fn new(loop_idx: usize, leg: usize, seg: usize) -> Self {
        SegmentId { loop_idx, leg, seg }
    }
}

impl fmt::Display for SegmentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "loop={} leg={} seg={}", self.loop_idx, self.leg, self.seg)
    }
}

/// Position along a loop. The derived order (leg, segment, fraction) is the
/// loop's time order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LoopParam {
    pub leg: usize,
    pub seg: usize,
    pub frac: Rat,
}

/// A transversal double point. For a self-crossing `loop_a == loop_b` and
/// `param_a < param_b`; otherwise `loop_a < loop_b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub loop_a: usize,
    pub param_a: LoopParam,
    pub loop_b: usize,
    pub param_b: LoopParam,
    pub location: RatPoint,
}

impl Crossing {
    pub fn is_self(&self) -> bool {
        self.loop_a == self.loop_b
    }

    pub fn segment_a(&self) -> SegmentId {
        SegmentId::new(self.loop_a, self.param_a.leg, self.param_a.seg)
    }

    pub fn segment_b(&self) -> SegmentId {
        SegmentId::new(self.loop_b, self.param_b.leg, self.param_b.seg)
    }
}

/// An immersion of the bouquet of `n` circles. Immutable; edits produce new
/// values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BouquetDiagram {
    vertex: RatPoint,
    loops: Vec<LoopPath>,
}

impl BouquetDiagram {
    /// Structural construction only; generic position is checked by
    /// [`validate`].
    pub fn new(vertex: RatPoint, loops: Vec<LoopPath>) -> Result<Self> {
        if loops.is_empty() {
            return Err(Error::Parse("a bouquet needs at least one loop".into()));
        }
        Ok(BouquetDiagram { vertex, loops })
    }

    pub fn n(&self) -> usize {
        self.loops.len()
    }

    pub fn vertex(&self) -> &RatPoint {
        &self.vertex
    }

    pub fn loops(&self) -> &[LoopPath] {
        &self.loops
    }

    pub fn loop_path(&self, i: usize) -> Result<&LoopPath> {
        self.loops.get(i).ok_or_else(|| Error::IndexOutOfRange(format!("loop {i} of {}", self.n())))
    }

    pub fn segment(&self, id: SegmentId) -> Result<(&RatPoint, &RatPoint)> {
        let leg = self
            .loop_path(id.loop_idx)?
            .legs
            .get(id.leg)
            .ok_or_else(|| Error::IndexOutOfRange(format!("leg in {id}")))?;
        if id.seg >= leg.segment_count() {
            return Err(Error::IndexOutOfRange(format!("segment {id}")));
        }
        Ok(leg.segment(id.seg))
    }

    pub fn direction(&self, id: SegmentId) -> Result<RatPoint> {
        let (a, b) = self.segment(id)?;
        Ok(b.sub(a))
    }

    pub fn segment_ids(&self) -> impl Iterator<Item = SegmentId> + '_ {
        self.loops.iter().enumerate().flat_map(|(i, lp)| {
            lp.legs
                .iter()
                .enumerate()
                .flat_map(move |(k, leg)| (0..leg.segment_count()).map(move |s| SegmentId::new(i, k, s)))
        })
    }

    pub fn segment_count(&self) -> usize {
        self.loops.iter().map(LoopPath::segment_count).sum()
    }

    /// Replace loop `i`, keeping everything else.
    pub fn with_loop(&self, i: usize, path: LoopPath) -> Result<Self> {
        self.loop_path(i)?;
        let mut loops = self.loops.clone();
        loops[i] = path;
        Ok(BouquetDiagram { vertex: self.vertex.clone(), loops })
    }

    /// Apply a point map to every coordinate, vertex included.
    pub fn map_points(&self, f: impl Fn(&RatPoint) -> RatPoint) -> Self {
        let loops = self
            .loops
            .iter()
            .map(|lp| LoopPath {
                legs: lp.legs.iter().map(|leg| Leg { points: leg.points.iter().map(&f).collect() }).collect(),
            })
            .collect();
        BouquetDiagram { vertex: f(&self.vertex), loops }
    }

    /// The 2n half-edges at the vertex: for each loop, the outgoing symbol
    /// with the first-segment direction and the inverse symbol with the
    /// negated last-segment direction.
    pub fn vertex_directions(&self) -> Vec<(Symbol, RatPoint)> {
        let mut out = Vec::with_capacity(2 * self.n());
        for (i, lp) in self.loops.iter().enumerate() {
            out.push((Symbol::forward(i), lp.outgoing()));
            out.push((Symbol::inverse(i), lp.incoming().neg()));
        }
        out
    }
}

/// Free-function form of [`BouquetDiagram::vertex_directions`].
pub fn vertex_directions(d: &BouquetDiagram) -> Vec<(Symbol, RatPoint)> {
    d.vertex_directions()
}
