//! Fixed inputs shared by the benchmarks.

use rand::Rng;

use eo_core::classify::Typing;
use eo_core::grid::random::{a_member, p_member, random_family_grid, rng, GridFamily};
use eo_core::grid::{CSPInstance, Clause, EOGrid};
use eo_core::Signature;

/// `count` grids of one family, seeded so every run sees the same inputs.
pub fn grids(family: GridFamily, typing: Typing, count: usize, max_vertices: usize) -> Vec<EOGrid> {
    let mut r = rng(77);
    (0..count)
        .map(|_| random_family_grid(&mut r, family, typing, max_vertices, 6).expect("generator succeeds"))
        .collect()
}

/// A CSP instance over `n` variables with `m` clauses of arity at most 3.
pub fn csp(n: usize, m: usize, affine: bool) -> CSPInstance {
    let mut r = rng(78);
    let clauses = (0..m)
        .map(|_| {
            let k = r.gen_range(1..=3);
            let sig: Signature = if affine { a_member(&mut r, k) } else { p_member(&mut r, k) };
            let vars = (0..k).map(|_| r.gen_range(0..n)).collect();
            Clause { sig, vars }
        })
        .collect();
    CSPInstance::new(n, clauses).expect("indices in range")
}
