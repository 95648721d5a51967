//! Benchmark fixtures: deterministic diagrams of growing size.

use rp2_core::fuzz::random_tuple;
use rp2_core::{apply_move, random_move, realize, BouquetDiagram};

/// Normal-form diagram for a fixed tuple with `n` loops.
pub fn normal_form(n: usize) -> BouquetDiagram {
    realize(&random_tuple(n, 7).expect("tuple")).expect("realize")
}

/// The normal form for `n` loops after `moves` random moves.
pub fn scrambled(n: usize, moves: u64) -> BouquetDiagram {
    let mut d = normal_form(n);
    for seed in 0..moves {
        d = apply_move(&d, &random_move(&d, seed).expect("move")).expect("apply");
    }
    d
}
