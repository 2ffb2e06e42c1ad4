//! Exact recognition of 0-/1-rebalancing signatures.
//!
//! Whether `f` is 0-rebalancing depends only on its support. For a variable
//! `x` with partner `y` the condition "no support row has `x = y = 0`" and the
//! pinned child `f^{x=0,y=1}` are both functions of the two columns and of the
//! surviving rows, so the search runs over states (surviving rows, multiset of
//! restricted columns) and memoizes them. The 1-rebalancing case is the
//! 0-rebalancing case of the complemented support.

use std::collections::HashMap;

use serde::Serialize;

use super::rows::{Classes, ColumnView, RowSet};
use crate::error::{Error, Result};
use crate::signature::Signature;

pub const REBALANCE_STATE_BUDGET: usize = 1_000_000;

/// First-level mapping `ψ` of a rebalancing signature. Children are recomputed
/// on demand with [`RebalanceWitness::child`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RebalanceWitness {
    pub bit: u8,
    /// `psi[x - 1] = ψ(x)`.
    pub psi: Vec<usize>,
}

impl RebalanceWitness {
    pub fn psi(&self, x: usize) -> usize {
        self.psi[x - 1]
    }

    /// The pinned signature for `(x, ψ(x))` together with its witness.
    pub fn child(&self, f: &Signature, x: usize) -> Result<(Signature, RebalanceWitness)> {
        let y = self.psi(x);
        let pinned = if self.bit == 0 { f.pin_pair(y, x)? } else { f.pin_pair(x, y)? };
        let w = rebalance_witness(&pinned, self.bit)?
            .ok_or_else(|| Error::Internal(format!("child of x{x} is not rebalancing")))?;
        Ok((pinned, w))
    }

    /// Checks the first-level condition of `ψ` against `f`'s support.
    pub fn first_level_holds(&self, f: &Signature) -> bool {
        first_level_holds(f, self.bit, &self.psi)
    }
}

/// True iff `psi` is a valid first-level mapping for `f`: `ψ(x) ≠ x` and no
/// support row has `x = ψ(x) = bit` (the children are not examined).
pub fn first_level_holds(f: &Signature, bit: u8, psi: &[usize]) -> bool {
    psi.len() == f.arity()
        && psi.iter().enumerate().all(|(k, &y)| {
            let x = k + 1;
            y != x
                && (1..=f.arity()).contains(&y)
                && f.support().all(|a| !(a.get(x) == (bit == 1) && a.get(y) == (bit == 1)))
        })
}

type Key = (RowSet, Vec<(RowSet, usize)>);

struct Search {
    memo: HashMap<Key, bool>,
    visited: usize,
    budget: usize,
}

impl Search {
    /// Partner class for a variable of class `a`, if one leads to a rebalancing child.
    fn partner(&mut self, rows: &RowSet, classes: &Classes, a: usize) -> Result<Option<usize>> {
        let (p, pvs) = &classes.0[a];
        let x = pvs[0];
        for (b, (q, qvs)) in classes.0.iter().enumerate() {
            let Some(&y) = qvs.iter().find(|&&v| v != x) else { continue };
            if !rows.is_subset(&p.or(q)) {
                continue;
            }
            let child_rows = rows.and_not(p).and(q);
            let child = classes.without(x, y, &child_rows);
            if self.solve(child_rows, child)? {
                return Ok(Some(b));
            }
        }
        Ok(None)
    }

    fn solve(&mut self, rows: RowSet, classes: Classes) -> Result<bool> {
        if rows.is_empty() || classes.var_count() == 0 {
            return Ok(true);
        }
        let key = (rows.clone(), classes.key());
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::Refused(format!(
                "undecided: rebalancing search exceeded {} states",
                self.budget
            )));
        }
        let mut ok = true;
        for a in 0..classes.0.len() {
            if self.partner(&rows, &classes, a)?.is_none() {
                ok = false;
                break;
            }
        }
        self.memo.insert(key, ok);
        Ok(ok)
    }
}

/// A `bit`-rebalancing witness for `f`, `None` if there is none.
/// Exceeding the default state budget yields a refusal, never a guess.
pub fn rebalance_witness(f: &Signature, bit: u8) -> Result<Option<RebalanceWitness>> {
    rebalance_witness_with_budget(f, bit, REBALANCE_STATE_BUDGET)
}

pub fn rebalance_witness_with_budget(
    f: &Signature,
    bit: u8,
    budget: usize,
) -> Result<Option<RebalanceWitness>> {
    if bit > 1 {
        return Err(Error::InvalidArgument(format!("rebalancing bit must be 0 or 1, got {bit}")));
    }
    if !f.is_zero() && !f.is_eo() {
        return Err(Error::NotEo("rebalancing is defined for EO signatures".into()));
    }
    let n = f.arity();
    if f.is_zero() && n % 2 == 1 {
        return Err(Error::InvalidArgument(format!("odd arity {n}")));
    }
    let trivial = || {
        // any fixed-point-free map works vacuously; pair neighbours
        let psi = (1..=n).map(|x| if x % 2 == 1 { x + 1 } else { x - 1 }).collect();
        RebalanceWitness { bit, psi }
    };
    if f.is_zero() || n == 0 {
        return Ok(Some(trivial()));
    }
    let view = ColumnView::new(f, bit == 1);
    let rows = RowSet::full(view.rows.len());
    let classes = Classes::build(view.columns.iter().cloned().zip(1..=n));
    let mut s = Search { memo: HashMap::new(), visited: 0, budget };
    let mut psi = vec![0usize; n];
    for (a, (_, vs)) in classes.0.iter().enumerate() {
        let Some(b) = s.partner(&rows, &classes, a)? else {
            return Ok(None);
        };
        let qvs = &classes.0[b].1;
        for &x in vs {
            psi[x - 1] = *qvs.iter().find(|&&y| y != x).expect("partner class has another variable");
        }
    }
    Ok(Some(RebalanceWitness { bit, psi }))
}

/// `bit`-rebalancing as a tri-state: `None` when the search was refused.
pub fn is_rebalancing(f: &Signature, bit: u8) -> Option<bool> {
    match rebalance_witness(f, bit) {
        Ok(w) => Some(w.is_some()),
        Err(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ExactComplex;

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_int(n)
    }

    /// Definition-level check, exponential: tries every partner for every variable.
    fn oracle(f: &Signature, bit: u8) -> bool {
        let n = f.arity();
        if n == 0 || f.is_zero() {
            return true;
        }
        let b = bit == 1;
        (1..=n).all(|x| {
            (1..=n).any(|y| {
                y != x
                    && f.support().all(|a| !(a.get(x) == b && a.get(y) == b))
                    && oracle(&if b { f.pin_pair(x, y).unwrap() } else { f.pin_pair(y, x).unwrap() }, bit)
            })
        })
    }

    fn verify_fully(f: &Signature, w: &RebalanceWitness) {
        assert!(w.first_level_holds(f), "{f}");
        for x in 1..=f.arity() {
            let (g, wg) = w.child(f, x).unwrap();
            if g.arity() > 0 {
                verify_fully(&g, &wg);
            }
        }
    }

    #[test]
    fn eom_signatures_are_zero_rebalancing() {
        let f = Signature::neq(6).unwrap();
        let w = rebalance_witness(&f, 0).unwrap().unwrap();
        verify_fully(&f, &w);
        let w1 = rebalance_witness(&f, 1).unwrap().unwrap();
        verify_fully(&f, &w1);
    }

    #[test]
    fn non_eo_is_rejected() {
        let f = Signature::from_literals(2, &[("11", c(1))]);
        assert!(matches!(rebalance_witness(&f, 0), Err(Error::NotEo(_))));
        assert!(rebalance_witness(&Signature::zero(4).unwrap(), 0).unwrap().is_some());
    }

    #[test]
    fn matches_definition_on_random_supports() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut seen = [0usize; 2];
        for n in [2usize, 4, 6] {
            for _ in 0..150 {
                let density = rng.gen_range(0.1..0.9);
                let f = Signature::from_fn(n, |a| c((2 * a.ones() == n && rng.gen_bool(density)) as i64)).unwrap();
                for bit in [0u8, 1] {
                    let got = rebalance_witness(&f, bit).unwrap();
                    assert_eq!(got.is_some(), oracle(&f, bit), "{f} bit {bit}");
                    seen[got.is_some() as usize] += 1;
                    if let Some(w) = got {
                        verify_fully(&f, &w);
                    }
                }
            }
        }
        assert!(seen[0] > 0 && seen[1] > 0);
    }

    #[test]
    fn budget_refuses() {
        let f = Signature::neq(8).unwrap();
        let err = rebalance_witness_with_budget(&f, 0, 1).unwrap_err();
        assert!(err.is_refusal());
    }
}
