//! Polynomial-time evaluation of counting CSP instances whose clauses are all
//! affine (`𝒜`) or all product type (`𝒫`).

use super::gauss::{gauss_sum, QuadraticPhaseSystem};
use crate::arith::ExactComplex;
use crate::classify::{membership_a, membership_p, PFactor};
use crate::error::{Error, Result};
use crate::grid::CSPInstance;

/// Composes the clause witnesses into one quadratic phase system.
pub fn affine_system(c: &CSPInstance) -> Result<QuadraticPhaseSystem> {
    let mut q = QuadraticPhaseSystem::new(c.num_vars);
    for (k, clause) in c.clauses.iter().enumerate() {
        let w = membership_a(&clause.sig)
            .ok_or_else(|| Error::Refused(format!("clause {k} is not affine")))?;
        if w.scalar.is_zero() {
            q.multiply_scalar(&ExactComplex::zero());
            return Ok(q);
        }
        q.multiply_scalar(&w.scalar);
        let space = &w.support;
        let var = |slot: usize| clause.vars[slot - 1];
        let base = space.point(0);
        let pivots = space.pivots();
        // x_c = base_c ⊕ Σ_j x_{pivot_j} · basis_j[c] at every non-pivot slot c
        for slot in 1..=space.width() {
            if pivots.contains(&slot) {
                continue;
            }
            let mut vars = vec![var(slot)];
            for (j, b) in space.basis().iter().enumerate() {
                if b.get(slot) {
                    vars.push(var(pivots[j]));
                }
            }
            q.add_constraint(&vars, base.get(slot));
        }
        q.add_constant(w.phase.constant);
        for (j, &l) in w.phase.linear.iter().enumerate() {
            q.add_linear(var(pivots[j]), l);
        }
        for &(a, b) in &w.phase.quadratic {
            q.add_quadratic(var(pivots[a]), var(pivots[b]));
        }
    }
    Ok(q)
}

/// Value of an instance whose clauses all lie in the affine family.
pub fn affine_csp_value(c: &CSPInstance) -> Result<ExactComplex> {
    Ok(gauss_sum(&affine_system(c)?))
}

struct ParityUnion {
    parent: Vec<usize>,
    /// Parity of each node relative to its parent.
    parity: Vec<bool>,
}

impl ParityUnion {
    fn new(n: usize) -> Self {
        ParityUnion { parent: (0..n).collect(), parity: vec![false; n] }
    }

    fn find(&mut self, v: usize) -> (usize, bool) {
        let mut path = Vec::new();
        let mut r = v;
        while self.parent[r] != r {
            path.push(r);
            r = self.parent[r];
        }
        // compress, accumulating parity from the root downwards
        let mut acc = false;
        for &u in path.iter().rev() {
            acc ^= self.parity[u];
            self.parity[u] = acc;
            self.parent[u] = r;
        }
        (r, if path.is_empty() { false } else { self.parity[v] })
    }

    /// Records `x_a ⊕ x_b = odd`; false on contradiction.
    fn union(&mut self, a: usize, b: usize, odd: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == odd;
        }
        self.parent[rb] = ra;
        self.parity[rb] = pa ^ pb ^ odd;
        true
    }
}

/// Value of an instance whose clauses all lie in the product family.
pub fn product_csp_value(c: &CSPInstance) -> Result<ExactComplex> {
    let n = c.num_vars;
    let mut scalar = ExactComplex::one();
    let mut uf = ParityUnion::new(n);
    let mut unary: Vec<[ExactComplex; 2]> = vec![[ExactComplex::one(), ExactComplex::one()]; n];
    for (k, clause) in c.clauses.iter().enumerate() {
        let d = membership_p(&clause.sig)
            .ok_or_else(|| Error::Refused(format!("clause {k} is not of product type")))?;
        if d.scalar.is_zero() {
            return Ok(ExactComplex::zero());
        }
        scalar *= &d.scalar;
        let var = |slot: usize| clause.vars[slot - 1];
        for f in &d.factors {
            let ok = match f {
                PFactor::Unary { var: v, w0, w1 } => {
                    let u = &mut unary[var(*v)];
                    u[0] *= w0;
                    u[1] *= w1;
                    true
                }
                PFactor::Equal { a, b } => uf.union(var(*a), var(*b), false),
                PFactor::Unequal { a, b } => uf.union(var(*a), var(*b), true),
            };
            if !ok {
                return Ok(ExactComplex::zero());
            }
        }
    }
    // w[root][b]: product of unary weights when the root takes value b
    let mut w: Vec<Option<[ExactComplex; 2]>> = vec![None; n];
    for v in 0..n {
        let (r, p) = uf.find(v);
        let entry = w[r].get_or_insert_with(|| [ExactComplex::one(), ExactComplex::one()]);
        for b in 0..2 {
            let value = (b == 1) ^ p;
            entry[b] *= &unary[v][value as usize];
        }
    }
    for [w0, w1] in w.into_iter().flatten() {
        scalar *= &(&w0 + &w1);
        if scalar.is_zero() {
            break;
        }
    }
    Ok(scalar)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::random::{a_member, p_member, rng};
    use crate::grid::Clause;
    use crate::signature::Signature;
    use rand::Rng;

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_int(n)
    }

    fn inst(n: usize, clauses: Vec<(Signature, Vec<usize>)>) -> CSPInstance {
        CSPInstance::new(n, clauses.into_iter().map(|(sig, vars)| Clause { sig, vars }).collect()).unwrap()
    }

    #[test]
    fn small_examples() {
        let neq = Signature::neq(2).unwrap();
        let one = inst(2, vec![(neq.clone(), vec![0, 1])]);
        assert_eq!(affine_csp_value(&one).unwrap(), c(2));
        assert_eq!(product_csp_value(&one).unwrap(), c(2));
        let chain = inst(3, vec![(neq.clone(), vec![0, 1]), (neq.clone(), vec![1, 2])]);
        assert_eq!(affine_csp_value(&chain).unwrap(), c(2));
        let eq_weighted = inst(
            2,
            vec![(Signature::eq(2).unwrap(), vec![0, 1]), (Signature::unary(c(1), c(2)), vec![0])],
        );
        assert_eq!(product_csp_value(&eq_weighted).unwrap(), c(3));
        let triangle = inst(3, vec![(neq.clone(), vec![0, 1]), (neq.clone(), vec![1, 2]), (neq, vec![2, 0])]);
        assert_eq!(product_csp_value(&triangle).unwrap(), c(0));
        assert_eq!(affine_csp_value(&triangle).unwrap(), c(0));
    }

    #[test]
    fn rejects_foreign_clauses() {
        let g = Signature::from_literals(2, &[("00", c(1)), ("01", c(1)), ("11", c(1))]);
        let bad = inst(2, vec![(g, vec![0, 1])]);
        assert!(affine_csp_value(&bad).unwrap_err().is_refusal());
        assert!(product_csp_value(&bad).unwrap_err().is_refusal());
    }

    fn random_instance<R: Rng>(r: &mut R, member: fn(&mut R, usize) -> Signature) -> CSPInstance {
        let n = r.gen_range(1..=8);
        let m = r.gen_range(1..=6);
        let clauses = (0..m)
            .map(|_| {
                let k = r.gen_range(1..=3);
                let sig = member(r, k);
                let vars = (0..k).map(|_| r.gen_range(0..n)).collect();
                Clause { sig, vars }
            })
            .collect();
        CSPInstance::new(n, clauses).unwrap()
    }

    #[test]
    fn affine_matches_enumeration() {
        let mut r = rng(11);
        for _ in 0..60 {
            let i = random_instance(&mut r, a_member);
            assert_eq!(affine_csp_value(&i).unwrap(), i.enumerate_value().unwrap());
        }
    }

    #[test]
    fn product_matches_enumeration() {
        let mut r = rng(12);
        for _ in 0..60 {
            let i = random_instance(&mut r, p_member);
            assert_eq!(product_csp_value(&i).unwrap(), i.enumerate_value().unwrap());
        }
    }
}
