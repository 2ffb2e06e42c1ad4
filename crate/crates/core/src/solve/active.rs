//! Reduction of a pure-up grid to EOM-restricted tables by forced-value propagation.
//!
//! A non-EOM pure-up table has a variable equal to 1 on its whole support.
//! Its edge forces a 0 into the neighbouring slot; an EOM table receiving a 0
//! sends a 1 out through the pairing partner (an earlier pin acts the same
//! way), and so on until the 0 lands on a
//! non-EOM table. That table is multiplied by `[y1 ≠ y2]`, where `y2` is the
//! receiving slot and `y1` one of its own forced-1 variables. Every pin
//! shrinks the number of unpinned slots, so the loop ends with all tables EOM.

use std::collections::HashSet;

use super::reduce::{constant_columns, Reduced, Reduction, Rule, Step, ZeroCertificate};
use crate::classify::{first_eom_pairing, purity};
use crate::error::{Error, Result};
use crate::grid::EOGrid;
use crate::signature::{Pairing, Signature};

fn eom_pairing(f: &Signature) -> Result<Option<Pairing>> {
    if f.is_zero() {
        return Ok(Some(Pairing::canonical(f.arity() / 2)));
    }
    first_eom_pairing(f)
}

fn zero(vertex: usize, reason: String, mut steps: Vec<Step>) -> Reduced {
    steps.push(Step::new(Rule::Zero).at(vertex).detail(reason.clone()));
    Reduced::Zero { certificate: ZeroCertificate { vertex, reason }, steps }
}

/// Requires every vertex table to be pure-up.
pub fn active_reduce(g: &EOGrid) -> Result<Reduced> {
    for (name, f) in g.used_signatures() {
        if !purity(f)?.is_up() {
            return Err(Error::NotPureUp(format!("signature {name}")));
        }
    }
    let n = g.vertex_count();
    let mut tables = g.vertex_signatures();
    let mut eom: Vec<Option<Pairing>> = tables.iter().map(eom_pairing).collect::<Result<_>>()?;
    let mut pinned: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut steps = Vec::new();

    while let Some(v) = (0..n).find(|&v| eom[v].is_none()) {
        let is_pinned = |w: usize, x: usize, pinned: &[Vec<(usize, usize)>]| {
            pinned[w].iter().any(|&(a, b)| a == x || b == x)
        };
        let (_, ones) = constant_columns(&tables[v]);
        let y1 = (1..=tables[v].arity())
            .find(|&x| ones[x] && !is_pinned(v, x, &pinned))
            .ok_or_else(|| Error::NotPureUp(format!("vertex {v} is not EOM and has no free forced-1 variable")))?;
        steps.push(Step::new(Rule::ForcedOne).at(v).detail(format!("x{y1}=1")));

        let mut cur = (v, y1);
        let mut seen = HashSet::new();
        loop {
            let (w, z) = g.opposite(cur.0, cur.1);
            if !seen.insert((w, z)) {
                return Err(Error::Internal(format!("propagation from vertex {v} slot {y1} revisited vertex {w}")));
            }
            if let Some(p) = &eom[w] {
                let out = p.partner(z).expect("pairing covers every slot");
                steps.push(Step::new(Rule::PairingPartner).at(w).pair(z, out));
                cur = (w, out);
                continue;
            }
            let (_, ones) = constant_columns(&tables[w]);
            if ones[z] {
                return Ok(zero(w, format!("slot {z} receives 0 but is 1 on the whole support"), steps));
            }
            // an earlier pin [y≠z] forces its other slot to 1
            if let Some(&(a, b)) = pinned[w].iter().find(|&&(a, b)| a == z || b == z) {
                let out = if a == z { b } else { a };
                steps.push(Step::new(Rule::PairingPartner).at(w).pair(z, out).detail("earlier pin"));
                cur = (w, out);
                continue;
            }
            let y = (1..=tables[w].arity())
                .find(|&x| ones[x] && !is_pinned(w, x, &pinned))
                .ok_or_else(|| Error::NotPureUp(format!("vertex {w} is not EOM and has no free forced-1 variable")))?;
            tables[w] = tables[w].restrict_unequal(y, z)?;
            pinned[w].push((y, z));
            steps.push(Step::new(Rule::PinAgainstForcedOne).at(w).pair(y, z).indicator(format!("[x{y}≠x{z}]")));
            if tables[w].is_zero() {
                return Ok(zero(w, "table vanished after pinning".into(), steps));
            }
            eom[w] = eom_pairing(&tables[w])?;
            break;
        }
    }
    let pairings = eom.into_iter().map(|p| p.expect("loop ends when every table is EOM")).collect();
    let grid = g.with_vertex_signatures(tables)?;
    Ok(Reduced::Grid(Reduction { grid, pairings, steps }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ExactComplex;
    use crate::grid::builtin::sixv;
    use crate::grid::{brute_force_value, GridBuilder};

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_int(n)
    }

    fn value(r: &Reduced) -> ExactComplex {
        match r {
            Reduced::Grid(r) => brute_force_value(&r.grid).unwrap(),
            Reduced::Zero { .. } => c(0),
        }
    }

    #[test]
    fn eom_grid_unchanged() {
        let g = GridBuilder::new()
            .signature("n", Signature::neq(4).unwrap())
            .vertices("n", 2)
            .edge((0, 1), (1, 1))
            .edge((0, 2), (1, 2))
            .edge((0, 3), (1, 3))
            .edge((0, 4), (1, 4))
            .build()
            .unwrap();
        let Reduced::Grid(r) = active_reduce(&g).unwrap() else { panic!() };
        assert_eq!(r.grid.vertex_signatures(), g.vertex_signatures());
        assert!(r.steps.is_empty());
    }

    #[test]
    fn sixv_grid_restricts_to_two_rows() {
        let f = sixv(c(1), c(1), c(1));
        let g = GridBuilder::new()
            .signature("s", f)
            .vertices("s", 2)
            .edge((0, 1), (1, 2))
            .edge((0, 2), (1, 1))
            .edge((0, 3), (1, 4))
            .edge((0, 4), (1, 3))
            .build()
            .unwrap();
        let z = brute_force_value(&g).unwrap();
        let r = active_reduce(&g).unwrap();
        assert_eq!(value(&r), z);
        if let Reduced::Grid(r) = &r {
            for (v, t) in r.grid.vertex_signatures().iter().enumerate() {
                assert!(t.support_size() <= 2);
                assert!(t.support().all(|a| r.pairings[v].admits(&a)));
            }
        }
    }

    #[test]
    fn rejects_non_pure_up() {
        let g = GridBuilder::new()
            .signature("d", sixv(c(1), c(1), c(1)).dual())
            .vertex("d")
            .edge((0, 1), (0, 2))
            .edge((0, 3), (0, 4))
            .build()
            .unwrap();
        assert!(matches!(active_reduce(&g), Err(Error::NotPureUp(_))));
    }
}
