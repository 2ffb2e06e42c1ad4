use serde::Serialize;

use crate::arith::ExactComplex;
use crate::bits::BitString;
use crate::error::Result;
use crate::signature::Signature;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PFactor {
    Unary { var: usize, w0: ExactComplex, w1: ExactComplex },
    Equal { a: usize, b: usize },
    Unequal { a: usize, b: usize },
}

impl PFactor {
    pub fn eval(&self, alpha: &BitString) -> ExactComplex {
        match self {
            PFactor::Unary { var, w0, w1 } => {
                if alpha.get(*var) {
                    w1.clone()
                } else {
                    w0.clone()
                }
            }
            PFactor::Equal { a, b } => ExactComplex::from_int((alpha.get(*a) == alpha.get(*b)) as i64),
            PFactor::Unequal { a, b } => ExactComplex::from_int((alpha.get(*a) != alpha.get(*b)) as i64),
        }
    }
}

/// `scalar · Π factors`. The scalar carries the value of arity-0 and zero signatures.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PDecomposition {
    pub arity: usize,
    pub scalar: ExactComplex,
    pub factors: Vec<PFactor>,
}

impl PDecomposition {
    pub fn eval(&self, alpha: &BitString) -> ExactComplex {
        let mut v = self.scalar.clone();
        for f in &self.factors {
            if v.is_zero() {
                break;
            }
            v *= &f.eval(alpha);
        }
        v
    }

    /// Rebuilds the table by enumerating all inputs (small arities only).
    pub fn reconstruct(&self) -> Result<Signature> {
        Signature::from_fn(self.arity, |a| self.eval(&a))
    }
}

/// Membership in the product family, with a decomposition.
pub fn membership_p(f: &Signature) -> Option<PDecomposition> {
    let arity = f.arity();
    let rows: Vec<BitString> = f.support().collect();
    let Some(&first) = rows.first() else {
        return Some(PDecomposition { arity, scalar: ExactComplex::zero(), factors: Vec::new() });
    };

    let mut factors = Vec::new();
    // group[v] = (representative, same-as-representative) for non-constant variables
    let mut reps: Vec<usize> = Vec::new();
    let mut group: Vec<Option<(usize, bool)>> = vec![None; arity + 1];
    for v in 1..=arity {
        let constant = rows.iter().all(|a| a.get(v) == first.get(v));
        if constant {
            let (w0, w1) = if first.get(v) { (0, 1) } else { (1, 0) };
            factors.push(PFactor::Unary {
                var: v,
                w0: ExactComplex::from_int(w0),
                w1: ExactComplex::from_int(w1),
            });
            continue;
        }
        let found = reps.iter().find_map(|&r| {
            let same = first.get(v) == first.get(r);
            rows.iter().all(|a| (a.get(v) == a.get(r)) == same).then_some((r, same))
        });
        match found {
            Some((r, same)) => {
                group[v] = Some((r, same));
                factors.push(if same {
                    PFactor::Equal { a: r, b: v }
                } else {
                    PFactor::Unequal { a: r, b: v }
                });
            }
            None => {
                group[v] = Some((v, true));
                reps.push(v);
            }
        }
    }
    let k = reps.len();
    if k >= 64 || rows.len() as u64 != 1u64 << k {
        return None;
    }

    // support is the full product; locate each row by its representative values
    let point = |t: u64| -> BitString {
        let mut a = first;
        for v in 1..=arity {
            if let Some((r, same)) = group[v] {
                let j = reps.iter().position(|&x| x == r).unwrap();
                a.set(v, (t >> j & 1 == 1) == same);
            }
        }
        a
    };
    let value = |t: u64| f.value_raw(point(t).raw());
    let base = value(0);
    let inv = base.inverse().ok()?;
    let ratios: Vec<ExactComplex> = (0..k).map(|j| &value(1 << j) * &inv).collect();
    for t in 0..(1u64 << k) {
        let mut expect = base.clone();
        for (j, r) in ratios.iter().enumerate() {
            if t >> j & 1 == 1 {
                expect *= r;
            }
        }
        if value(t) != expect {
            return None;
        }
    }
    for (&r, w1) in reps.iter().zip(ratios) {
        factors.push(PFactor::Unary { var: r, w0: ExactComplex::one(), w1 });
    }
    Some(PDecomposition { arity, scalar: base, factors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_int(n)
    }

    #[test]
    fn weighted_disequalities() {
        let f = Signature::neq_weighted(2, c(2), c(3))
            .unwrap()
            .tensor(&Signature::neq_weighted(2, c(5), c(7)).unwrap())
            .unwrap();
        let d = membership_p(&f).unwrap();
        assert_eq!(d.reconstruct().unwrap(), f);
        let unequal = d.factors.iter().filter(|x| matches!(x, PFactor::Unequal { .. })).count();
        assert_eq!(unequal, 2);
    }

    #[test]
    fn affine_but_not_product() {
        let m = Signature::from_literals(4, &[("0101", c(1)), ("0110", c(1)), ("1001", c(1)), ("1010", c(-1))]);
        assert!(membership_p(&m).is_none());
    }

    #[test]
    fn pinned_units() {
        let f = Signature::delta0()
            .tensor(&Signature::delta0())
            .unwrap()
            .tensor(&Signature::delta1())
            .unwrap()
            .tensor(&Signature::delta1())
            .unwrap()
            .scale(&c(3));
        let d = membership_p(&f).unwrap();
        assert_eq!(d.factors.len(), 4);
        assert!(d.factors.iter().all(|x| matches!(x, PFactor::Unary { .. })));
        assert_eq!(d.reconstruct().unwrap(), f);
    }

    #[test]
    fn degenerate_inputs() {
        let z = Signature::zero(3).unwrap();
        assert_eq!(membership_p(&z).unwrap().reconstruct().unwrap(), z);
        let k = Signature::constant(c(4));
        assert_eq!(membership_p(&k).unwrap().reconstruct().unwrap(), k);
        let q = Signature::from_literals(4, &[("1100", c(1)), ("1010", c(1)), ("1001", c(1))]);
        assert!(membership_p(&q).is_none());
        // rank-one failure on a full support
        let g = Signature::from_literals(2, &[("00", c(1)), ("01", c(1)), ("10", c(1)), ("11", c(2))]);
        assert!(membership_p(&g).is_none());
    }
}
