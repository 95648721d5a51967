//! Generic immersions of a bouquet of circles into the real projective plane,
//! their complete regular-homotopy invariant, a move engine and normal forms.
//!
//! The projective plane is modelled as the closed unit disk with antipodal
//! boundary points identified. All coordinates are exact rationals.

pub mod diagram;
pub mod error;
pub mod fuzz;
pub mod geometry;
pub mod invariants;
pub mod moves;
pub mod normal_form;

pub use diagram::{
    crossings, from_json, to_json, validate, vertex_directions, BouquetDiagram, Crossing, Leg, LoopParam, LoopPath,
    SegmentId, Violation,
};
pub use error::{Error, Result};
pub use geometry::{Rat, RatPoint, SeamPoint};
pub use invariants::{
    canonical_cyclic_word, equiv, inv1, inv2, inv3, invariants, signed_index, CyclicWord, InvariantTuple, Orientation,
    Symbol,
};
pub use moves::{
    apply_edit, apply_edit_reported, apply_move, format_script, parse_script, random_edit, random_edit_of_kind,
    random_move, random_move_of_kind, EditKind, EditReport, EditSpec, MoveKind, MoveSpec, Script, ScriptStep,
};
pub use normal_form::{class_count, classify, enumerate_classes, realize, Classes, MAX_ENUMERATE_N};
