//! Exact sums of `i^q(x)` over an affine subspace of `F_2^n`, where `q` is a
//! `Z_4` polynomial whose quadratic coefficients are even.

use serde::Serialize;

use crate::arith::ExactComplex;

/// Growable bit set over variable indices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VarSet(Vec<u64>);

impl VarSet {
    pub fn new() -> Self {
        VarSet(Vec::new())
    }

    pub fn from_vars<I: IntoIterator<Item = usize>>(vars: I) -> Self {
        let mut s = VarSet::new();
        for v in vars {
            s.toggle(v);
        }
        s
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.get(v / 64).is_some_and(|w| w >> (v % 64) & 1 == 1)
    }

    pub fn toggle(&mut self, v: usize) {
        if self.0.len() <= v / 64 {
            self.0.resize(v / 64 + 1, 0);
        }
        self.0[v / 64] ^= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        if self.contains(v) {
            self.toggle(v);
        }
    }

    pub fn xor_with(&mut self, other: &VarSet) {
        if self.0.len() < other.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn first(&self) -> Option<usize> {
        self.0.iter().enumerate().find(|(_, &w)| w != 0).map(|(k, w)| 64 * k + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(64 * k + b)
            })
        })
    }
}

/// `scalar · Σ_{x : constraints} i^{constant + Σ linear_v x_v + Σ 2 x_u x_v}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticPhaseSystem {
    n: usize,
    /// Rows `Σ_{v ∈ set} x_v = rhs` over `F_2`.
    constraints: Vec<(VarSet, bool)>,
    constant: u8,
    linear: Vec<u8>,
    /// Symmetric adjacency of the pairs carrying coefficient 2.
    quadratic: Vec<VarSet>,
    scalar: ExactComplex,
}

impl QuadraticPhaseSystem {
    pub fn new(n: usize) -> Self {
        QuadraticPhaseSystem {
            n,
            constraints: Vec::new(),
            constant: 0,
            linear: vec![0; n],
            quadratic: vec![VarSet::new(); n],
            scalar: ExactComplex::one(),
        }
    }

    pub fn var_count(&self) -> usize {
        self.n
    }

    pub fn scalar(&self) -> &ExactComplex {
        &self.scalar
    }

    /// Adds `⊕_{v ∈ vars} x_v = rhs`; repeated variables cancel.
    pub fn add_constraint(&mut self, vars: &[usize], rhs: bool) {
        self.constraints.push((VarSet::from_vars(vars.iter().copied()), rhs));
    }

    pub fn add_constant(&mut self, c: u8) {
        self.constant = (self.constant + c) % 4;
    }

    pub fn add_linear(&mut self, v: usize, c: u8) {
        self.linear[v] = (self.linear[v] + c) % 4;
    }

    /// Adds `2 x_u x_v`; for `u = v` this is the linear term `2 x_u`.
    pub fn add_quadratic(&mut self, u: usize, v: usize) {
        if u == v {
            self.add_linear(u, 2);
        } else {
            self.quadratic[u].toggle(v);
            self.quadratic[v].toggle(u);
        }
    }

    pub fn multiply_scalar(&mut self, c: &ExactComplex) {
        self.scalar *= c;
    }

    /// Direct evaluation of the summand at `x` (bit `v` of `x` is `x_v`), for tests.
    pub fn term(&self, x: &[bool]) -> ExactComplex {
        for (row, rhs) in &self.constraints {
            if row.iter().filter(|&v| x[v]).count() % 2 != *rhs as usize {
                return ExactComplex::zero();
            }
        }
        let mut e = self.constant as i64;
        for v in 0..self.n {
            if x[v] {
                e += self.linear[v] as i64;
                e += 2 * self.quadratic[v].iter().filter(|&u| u > v && x[u]).count() as i64;
            }
        }
        self.scalar.mul_i_pow(e)
    }
}

struct Work {
    alive: Vec<bool>,
    constraints: Vec<(VarSet, bool)>,
    constant: u8,
    linear: Vec<u8>,
    quadratic: Vec<VarSet>,
    factor: ExactComplex,
}

impl Work {
    fn add_lin(&mut self, v: usize, c: u8) {
        self.linear[v] = (self.linear[v] + c) % 4;
    }

    fn toggle_quad(&mut self, u: usize, v: usize) {
        if u == v {
            self.add_lin(u, 2);
        } else {
            self.quadratic[u].toggle(v);
            self.quadratic[v].toggle(u);
        }
    }

    /// Adds `c · lift(⊕_{k∈s} x_k ⊕ rhs)` to the phase, `c ∈ Z_4`.
    /// Over `Z_4`, `lift(⊕ x_k) = Σ x_k + 2 Σ_{k<k'} x_k x_k'`, and `1 ⊕ y = 1 - y`.
    fn add_lifted(&mut self, vars: &[usize], rhs: bool, c: u8) {
        let sign = if rhs { 3 } else { 1 };
        if rhs {
            self.constant = (self.constant + c) % 4;
        }
        for &k in vars {
            self.add_lin(k, (c * sign) % 4);
        }
        if c % 2 == 1 {
            for (a, &k) in vars.iter().enumerate() {
                for &k2 in &vars[a + 1..] {
                    self.toggle_quad(k, k2);
                }
            }
        }
    }

    fn kill(&mut self, p: usize) -> Vec<usize> {
        let nb: Vec<usize> = self.quadratic[p].iter().collect();
        for &j in &nb {
            self.quadratic[j].remove(p);
        }
        self.quadratic[p] = VarSet::new();
        self.alive[p] = false;
        self.linear[p] = 0;
        nb
    }

    /// Replaces `x_p` by `rhs ⊕ ⊕_{k ∈ rest} x_k` everywhere.
    fn substitute(&mut self, p: usize, rest: &[usize], rhs: bool) {
        let l = self.linear[p];
        let nb = self.kill(p);
        self.add_lifted(rest, rhs, l);
        // 2 x_j x_p = 2 x_j (rhs + Σ x_k) mod 4
        for j in nb {
            if rhs {
                self.add_lin(j, 2);
            }
            for &k in rest {
                self.toggle_quad(j, k);
            }
        }
    }

    /// Eliminates pending constraints; false if they are inconsistent.
    fn solve_constraints(&mut self) -> bool {
        while let Some((row, rhs)) = self.constraints.pop() {
            let Some(p) = row.first() else {
                if rhs {
                    return false;
                }
                continue;
            };
            let rest: Vec<usize> = row.iter().filter(|&v| v != p).collect();
            for (other, orhs) in self.constraints.iter_mut() {
                if other.contains(p) {
                    other.xor_with(&row);
                    *orhs ^= rhs;
                }
            }
            self.substitute(p, &rest, rhs);
        }
        true
    }
}

/// Exact value of the system.
pub fn gauss_sum(q: &QuadraticPhaseSystem) -> ExactComplex {
    if q.scalar.is_zero() {
        return ExactComplex::zero();
    }
    let mut w = Work {
        alive: vec![true; q.n],
        constraints: q.constraints.clone(),
        constant: q.constant,
        linear: q.linear.clone(),
        quadratic: q.quadratic.clone(),
        factor: ExactComplex::one(),
    };
    let two = ExactComplex::from_int(2);
    let one_plus_i = ExactComplex::gaussian(1, 1);
    let one_minus_i = ExactComplex::gaussian(1, -1);
    loop {
        if !w.solve_constraints() {
            return ExactComplex::zero();
        }
        let Some(x) = w.alive.iter().position(|&a| a) else { break };
        let l = w.linear[x];
        let nb = w.kill(x);
        // Σ_{x∈{0,1}} i^{l x + 2 x A} = 1 + i^l (-1)^A with A = ⊕_{k ∈ nb} x_k
        match l {
            0 => {
                w.factor *= &two;
                if !nb.is_empty() {
                    w.constraints.push((VarSet::from_vars(nb), false));
                }
            }
            2 => {
                if nb.is_empty() {
                    return ExactComplex::zero();
                }
                w.factor *= &two;
                w.constraints.push((VarSet::from_vars(nb), true));
            }
            1 => {
                w.factor *= &one_plus_i;
                w.add_lifted(&nb, false, 3);
            }
            _ => {
                w.factor *= &one_minus_i;
                w.add_lifted(&nb, false, 1);
            }
        }
    }
    (&q.scalar * &w.factor).mul_i_pow(w.constant as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn enumerate(q: &QuadraticPhaseSystem) -> ExactComplex {
        let n = q.var_count();
        let mut total = ExactComplex::zero();
        for x in 0u64..(1 << n) {
            let bits: Vec<bool> = (0..n).map(|v| x >> v & 1 == 1).collect();
            total += &q.term(&bits);
        }
        total
    }

    #[test]
    fn closed_forms() {
        let mut q = QuadraticPhaseSystem::new(1);
        q.add_linear(0, 1);
        assert_eq!(gauss_sum(&q), ExactComplex::gaussian(1, 1));

        let mut q = QuadraticPhaseSystem::new(2);
        q.add_quadratic(0, 1);
        assert_eq!(gauss_sum(&q), ExactComplex::from_int(2));

        for n in 0..=10 {
            let mut q = QuadraticPhaseSystem::new(n);
            for v in 0..n {
                q.add_linear(v, 1);
            }
            assert_eq!(gauss_sum(&q), ExactComplex::gaussian(1, 1).pow(n as u32), "n = {n}");
        }
    }

    #[test]
    fn constraints() {
        let mut q = QuadraticPhaseSystem::new(2);
        q.add_constraint(&[0, 1], true);
        assert_eq!(gauss_sum(&q), ExactComplex::from_int(2));
        q.add_constraint(&[0], true);
        q.add_constraint(&[1], true);
        assert_eq!(gauss_sum(&q), ExactComplex::zero());
        let mut q = QuadraticPhaseSystem::new(3);
        q.add_constraint(&[0, 0], false);
        assert_eq!(gauss_sum(&q), ExactComplex::from_int(8));
    }

    fn system() -> impl Strategy<Value = QuadraticPhaseSystem> {
        (1usize..=7).prop_flat_map(|n| {
            (
                proptest::collection::vec(0u8..4, n),
                proptest::collection::vec((0..n, 0..n), 0..8),
                proptest::collection::vec((proptest::collection::vec(0..n, 1..4), any::<bool>()), 0..4),
                0u8..4,
            )
                .prop_map(move |(lin, quad, cons, c)| {
                    let mut q = QuadraticPhaseSystem::new(n);
                    for (v, l) in lin.into_iter().enumerate() {
                        q.add_linear(v, l);
                    }
                    for (u, v) in quad {
                        q.add_quadratic(u, v);
                    }
                    for (vars, rhs) in cons {
                        q.add_constraint(&vars, rhs);
                    }
                    q.add_constant(c);
                    q.multiply_scalar(&ExactComplex::gaussian(2, -1));
                    q
                })
        })
    }

    proptest! {
        #[test]
        fn matches_enumeration(q in system()) {
            prop_assert_eq!(gauss_sum(&q), enumerate(&q));
        }
    }
}
