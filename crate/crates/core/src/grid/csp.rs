//! Counting CSP instances, the slot-level flattening of a grid, and the
//! clause-to-grid translation through `π`.

use super::{EOGrid, Endpoint};
use crate::arith::ExactComplex;
use crate::error::{Error, Result};
use crate::signature::Signature;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub sig: Signature,
    /// 0-based instance variables; repeats allowed.
    pub vars: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CSPInstance {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

/// Largest variable count [`CSPInstance::enumerate_value`] accepts.
pub const ENUMERATION_LIMIT: usize = 26;

impl CSPInstance {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        for (k, c) in clauses.iter().enumerate() {
            if c.vars.len() != c.sig.arity() {
                return Err(Error::InvalidArgument(format!(
                    "clause {k}: arity {} but {} variables",
                    c.sig.arity(),
                    c.vars.len()
                )));
            }
            if let Some(&v) = c.vars.iter().find(|&&v| v >= num_vars) {
                return Err(Error::InvalidArgument(format!("clause {k}: variable {v} out of range")));
            }
        }
        Ok(CSPInstance { num_vars, clauses })
    }

    /// `Σ_x Π_c c.sig(x|c.vars)` by direct enumeration.
    pub fn enumerate_value(&self) -> Result<ExactComplex> {
        if self.num_vars > ENUMERATION_LIMIT {
            return Err(Error::Refused(format!("{} variables is too many to enumerate", self.num_vars)));
        }
        let mut total = ExactComplex::zero();
        'outer: for x in 0u64..(1u64 << self.num_vars) {
            let mut w = ExactComplex::one();
            for c in &self.clauses {
                let input = c.vars.iter().enumerate().fold(0u64, |acc, (k, &v)| acc | ((x >> v & 1) << k));
                let val = c.sig.value_raw(input);
                if val.is_zero() {
                    continue 'outer;
                }
                w *= &val;
            }
            total += &w;
        }
        Ok(total)
    }
}

/// Variable index of each `(vertex, slot)`: vertices in order, slots in order.
pub fn slot_offsets(g: &EOGrid) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(g.vertex_count() + 1);
    let mut acc = 0;
    for v in 0..g.vertex_count() {
        offsets.push(acc);
        acc += g.arity(v);
    }
    offsets.push(acc);
    offsets
}

/// One variable per slot, one clause per vertex, one disequality clause per edge.
pub fn flatten_to_csp(g: &EOGrid) -> CSPInstance {
    let offsets = slot_offsets(g);
    let var = |(v, s): Endpoint| offsets[v] + s - 1;
    let neq2 = Signature::neq(2).expect("binary disequality");
    let mut clauses = Vec::with_capacity(g.vertex_count() + g.edges().len());
    for v in 0..g.vertex_count() {
        clauses.push(Clause {
            sig: g.vertex_signature(v).clone(),
            vars: (offsets[v]..offsets[v + 1]).collect(),
        });
    }
    for &(a, b) in g.edges() {
        clauses.push(Clause { sig: neq2.clone(), vars: vec![var(a), var(b)] });
    }
    CSPInstance { num_vars: offsets[g.vertex_count()], clauses }
}

/// Builds a grid whose value times `2^unused` equals the CSP value.
///
/// Each clause over `g` becomes a vertex carrying `π(g)`, whose slot `2i-1`
/// reads the clause's `i`-th variable and slot `2i` its negation. The
/// occurrences of one variable are chained in a cycle, each joining an
/// occurrence's negated slot to the next occurrence's plain slot, so every
/// occurrence sees the same value.
pub fn csp_to_eo(c: &CSPInstance) -> Result<(EOGrid, usize)> {
    let mut sigs = Vec::with_capacity(c.clauses.len());
    let mut occurrences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); c.num_vars];
    for (k, clause) in c.clauses.iter().enumerate() {
        sigs.push(super::transform::pi_transform(&clause.sig)?);
        for (i, &v) in clause.vars.iter().enumerate() {
            occurrences[v].push((k, i + 1));
        }
    }
    let mut edges = Vec::new();
    let mut unused = 0;
    for occ in &occurrences {
        if occ.is_empty() {
            unused += 1;
            continue;
        }
        for j in 0..occ.len() {
            let (k, i) = occ[j];
            let (k2, i2) = occ[(j + 1) % occ.len()];
            edges.push(((k, 2 * i), (k2, 2 * i2 - 1)));
        }
    }
    Ok((EOGrid::from_vertex_signatures(sigs, edges)?, unused))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{brute_force_value, GridBuilder};

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_int(n)
    }

    #[test]
    fn flatten_examples() {
        let g = GridBuilder::new()
            .signature("w", Signature::neq_weighted(2, c(3), c(4)).unwrap())
            .vertex("w")
            .edge((0, 1), (0, 2))
            .build()
            .unwrap();
        let csp = flatten_to_csp(&g);
        assert_eq!(csp.num_vars, 2);
        assert_eq!(csp.clauses.len(), 2);
        assert_eq!(csp.enumerate_value().unwrap(), c(7));
        assert_eq!(flatten_to_csp(&EOGrid::empty()).enumerate_value().unwrap(), c(1));

        let two = GridBuilder::new()
            .signature("n", Signature::neq(4).unwrap())
            .vertices("n", 2)
            .edge((0, 1), (1, 1))
            .edge((0, 2), (1, 2))
            .edge((0, 3), (1, 3))
            .edge((0, 4), (1, 4))
            .build()
            .unwrap();
        let csp = flatten_to_csp(&two);
        assert_eq!(csp.num_vars, 8);
        assert_eq!(csp.clauses.iter().filter(|k| k.sig.arity() == 4).count(), 2);
        assert_eq!(csp.clauses.iter().filter(|k| k.sig.arity() == 2).count(), 4);
        assert_eq!(csp.enumerate_value().unwrap(), brute_force_value(&two).unwrap());
    }

    #[test]
    fn translation_preserves_value() {
        let g = Signature::from_literals(2, &[("00", c(1)), ("01", c(2)), ("11", c(-3))]);
        let inst = CSPInstance::new(
            4,
            vec![
                Clause { sig: g.clone(), vars: vec![0, 1] },
                Clause { sig: g.clone(), vars: vec![1, 1] },
                Clause { sig: g, vars: vec![1, 0] },
            ],
        )
        .unwrap();
        let (grid, unused) = csp_to_eo(&inst).unwrap();
        assert_eq!(unused, 2);
        let z = brute_force_value(&grid).unwrap();
        assert_eq!(&z * &c(4), inst.enumerate_value().unwrap());
    }

    #[test]
    fn rejects_mismatched_clause() {
        let err = CSPInstance::new(2, vec![Clause { sig: Signature::neq(2).unwrap(), vars: vec![0] }]);
        assert!(err.is_err());
    }
}
