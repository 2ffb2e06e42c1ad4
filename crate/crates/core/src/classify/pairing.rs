use std::collections::{BTreeMap, HashSet};
use std::ops::ControlFlow;

use serde::Serialize;

use super::affine::{membership_a, AWitness};
use super::product::{membership_p, PDecomposition};
use super::rows::{Classes, ColumnView, RowSet};
use crate::error::{Error, Result};
use crate::signature::{Pairing, Signature};

/// Cap on the number of pairings [`eom_pairings`] will materialize.
pub const PAIRING_LIST_CAP: usize = 100_000;

/// Default state budget for the typed-pairing search.
pub const TYPED_STATE_BUDGET: usize = 1_000_000;

fn check_even(f: &Signature) -> Result<()> {
    if f.arity() % 2 == 1 {
        return Err(Error::InvalidArgument(format!("pairings need even arity, got {}", f.arity())));
    }
    Ok(())
}

/// Calls `visit` on every pairing `P` with `supp(f) ⊆ EOM[P]` until it breaks.
pub fn for_each_eom_pairing<B>(
    f: &Signature,
    mut visit: impl FnMut(&Pairing) -> ControlFlow<B>,
) -> Result<Option<B>> {
    check_even(f)?;
    let view = ColumnView::new(f, false);
    let all = RowSet::full(view.rows.len());
    let n = f.arity();
    let compatible =
        |i: usize, j: usize| view.columns[i - 1].xor(&view.columns[j - 1]) == all;

    // without a perfect class matching there is nothing to enumerate
    if !view.rows.is_empty() {
        let classes = Classes::build(view.columns.iter().cloned().zip(1..=n));
        let count: BTreeMap<&RowSet, usize> = classes.0.iter().map(|(p, vs)| (p, vs.len())).collect();
        for (p, vs) in &classes.0 {
            if count.get(&all.xor(p)) != Some(&vs.len()) {
                return Ok(None);
            }
        }
    }

    fn walk<B>(
        used: &mut Vec<bool>,
        pairs: &mut Vec<(usize, usize)>,
        compatible: &dyn Fn(usize, usize) -> bool,
        visit: &mut dyn FnMut(&Pairing) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let Some(i) = (1..used.len()).find(|&v| !used[v]) else {
            let p = Pairing::new(pairs.clone()).expect("complete matching");
            return visit(&p);
        };
        used[i] = true;
        for j in i + 1..used.len() {
            if !used[j] && compatible(i, j) {
                used[j] = true;
                pairs.push((i, j));
                walk(used, pairs, compatible, visit)?;
                pairs.pop();
                used[j] = false;
            }
        }
        used[i] = false;
        ControlFlow::Continue(())
    }

    let mut used = vec![false; n + 1];
    used[0] = true;
    match walk(&mut used, &mut Vec::new(), &compatible, &mut visit) {
        ControlFlow::Break(b) => Ok(Some(b)),
        ControlFlow::Continue(()) => Ok(None),
    }
}

/// All pairings `P` with `supp(f) ⊆ EOM[P]`; empty means `f` is not EOM.
pub fn eom_pairings(f: &Signature) -> Result<Vec<Pairing>> {
    let mut out = Vec::new();
    let over = for_each_eom_pairing(f, |p| {
        if out.len() == PAIRING_LIST_CAP {
            return ControlFlow::Break(());
        }
        out.push(p.clone());
        ControlFlow::Continue(())
    })?;
    if over.is_some() {
        return Err(Error::Refused(format!("more than {PAIRING_LIST_CAP} pairings")));
    }
    Ok(out)
}

/// Some pairing witnessing that `f` is EOM, if any.
pub fn first_eom_pairing(f: &Signature) -> Result<Option<Pairing>> {
    for_each_eom_pairing(f, |p| ControlFlow::Break(p.clone()))
}

pub fn is_eom(f: &Signature) -> bool {
    f.arity() % 2 == 0 && matches!(first_eom_pairing(f), Ok(Some(_)))
}

/// One distinct restriction `f|EOM[P]`, with a pairing that produces it.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictionClass {
    pub pairing: Pairing,
    pub support_size: usize,
    pub a_witness: Option<AWitness>,
    pub p_decomposition: Option<PDecomposition>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TypedEom {
    pub is_eom_a: bool,
    pub is_eom_p: bool,
    /// Every distinct restriction over all pairings of the variables.
    pub restrictions: Vec<RestrictionClass>,
}

/// Decides whether every pairing restriction of `f` lies in the affine
/// (resp. product) family. Pairings are explored up to variable symmetry:
/// two variables with the same column on the surviving rows are
/// interchangeable, so states are keyed by the surviving rows and the
/// multiset of restricted columns.
pub fn typed_eom_class(f: &Signature) -> Result<TypedEom> {
    typed_eom_class_with_budget(f, TYPED_STATE_BUDGET)
}

pub fn typed_eom_class_with_budget(f: &Signature, budget: usize) -> Result<TypedEom> {
    check_even(f)?;
    let view = ColumnView::new(f, false);
    let all = RowSet::full(view.rows.len());
    let start = Classes::build(view.columns.iter().cloned().zip(1..=f.arity()));

    struct Search {
        seen: HashSet<(RowSet, Vec<(RowSet, usize)>)>,
        found: BTreeMap<RowSet, Vec<(usize, usize)>>,
        budget: usize,
    }

    fn go(s: &mut Search, rows: RowSet, classes: Classes, pairs: &mut Vec<(usize, usize)>) -> Result<()> {
        if rows.is_empty() || classes.var_count() == 0 {
            // every completion of the pairing leaves the same rows
            if !s.found.contains_key(&rows) {
                let mut full = pairs.clone();
                let rest: Vec<usize> = classes.0.iter().flat_map(|(_, vs)| vs.iter().copied()).collect();
                full.extend(rest.chunks(2).map(|c| (c[0], c[1])));
                s.found.insert(rows, full);
            }
            return Ok(());
        }
        if !s.seen.insert((rows.clone(), classes.key())) {
            return Ok(());
        }
        if s.seen.len() > s.budget {
            return Err(Error::Refused(format!(
                "undecided: pairing search exceeded {} states",
                s.budget
            )));
        }
        let (p, pvs) = &classes.0[0];
        let x = pvs[0];
        for (q, qvs) in &classes.0 {
            let Some(&y) = qvs.iter().find(|&&v| v != x) else { continue };
            let next_rows = rows.and(&p.xor(q));
            let next = classes.without(x, y, &next_rows);
            pairs.push((x, y));
            go(s, next_rows, next, pairs)?;
            pairs.pop();
        }
        Ok(())
    }

    let mut s = Search { seen: HashSet::new(), found: BTreeMap::new(), budget };
    go(&mut s, all, start, &mut Vec::new())?;

    let mut restrictions = Vec::with_capacity(s.found.len());
    for (rows, pairs) in s.found {
        let kept: BTreeMap<u64, _> = rows
            .iter()
            .map(|i| (view.rows[i], f.value_raw(view.rows[i])))
            .collect();
        let g = Signature::from_raw_rows(f.arity(), kept);
        restrictions.push(RestrictionClass {
            pairing: Pairing::new(pairs)?,
            support_size: g.support_size(),
            a_witness: membership_a(&g),
            p_decomposition: membership_p(&g),
        });
    }
    Ok(TypedEom {
        is_eom_a: restrictions.iter().all(|r| r.a_witness.is_some()),
        is_eom_p: restrictions.iter().all(|r| r.p_decomposition.is_some()),
        restrictions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ExactComplex;

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_int(n)
    }

    /// All perfect pairings of `{1..n}`.
    fn all_pairings(n: usize) -> Vec<Pairing> {
        fn rec(rest: Vec<usize>, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Pairing>) {
            if rest.is_empty() {
                out.push(Pairing::new(acc.clone()).unwrap());
                return;
            }
            for k in 1..rest.len() {
                let mut r = rest.clone();
                let b = r.remove(k);
                let a = r.remove(0);
                acc.push((a, b));
                rec(r, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        rec((1..=n).collect(), &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn pairing_examples() {
        let neq4 = Signature::neq(4).unwrap();
        let ps = eom_pairings(&neq4).unwrap();
        let want = vec![
            Pairing::new(vec![(1, 3), (2, 4)]).unwrap(),
            Pairing::new(vec![(1, 4), (2, 3)]).unwrap(),
        ];
        assert_eq!(ps, want);

        let q = Signature::from_literals(4, &[("1100", c(1)), ("1010", c(1)), ("1001", c(1))]);
        assert!(eom_pairings(&q).unwrap().is_empty());
        assert_eq!(eom_pairings(&Signature::zero(6).unwrap()).unwrap().len(), 15);
        assert!(eom_pairings(&Signature::zero(3).unwrap()).is_err());
        assert!(first_eom_pairing(&Signature::zero(56).unwrap()).unwrap().is_some());
    }

    #[test]
    fn typed_examples() {
        let t = typed_eom_class(&Signature::neq(4).unwrap()).unwrap();
        assert!(t.is_eom_a && t.is_eom_p);

        let ones = Signature::from_literals(4, &[("1100", c(1)), ("1010", c(1)), ("1001", c(1))]);
        assert!(typed_eom_class(&ones).unwrap().is_eom_p);
        let skew = Signature::from_literals(4, &[("1100", c(1)), ("1010", c(2)), ("1001", c(4))]);
        assert!(!typed_eom_class(&skew).unwrap().is_eom_a);
    }

    // the symmetry-reduced search must agree with checking every pairing directly
    #[test]
    fn typed_search_matches_exhaustive_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 4, 6] {
            let pairings = all_pairings(n);
            for _ in 0..60 {
                let f = Signature::from_fn(n, |a| {
                    if 2 * a.ones() == n && rng.gen_bool(0.5) {
                        ExactComplex::i_pow(rng.gen_range(0..4)) * c(rng.gen_range(1..3))
                    } else {
                        c(0)
                    }
                })
                .unwrap();
                let oracle_a = pairings
                    .iter()
                    .all(|p| membership_a(&f.restrict_pairing(p).unwrap()).is_some());
                let oracle_p = pairings
                    .iter()
                    .all(|p| membership_p(&f.restrict_pairing(p).unwrap()).is_some());
                let t = typed_eom_class(&f).unwrap();
                assert_eq!((t.is_eom_a, t.is_eom_p), (oracle_a, oracle_p), "{f}");
                for r in &t.restrictions {
                    let g = f.restrict_pairing(&r.pairing).unwrap();
                    assert_eq!(g.support_size(), r.support_size);
                }
                let direct: Vec<Pairing> = pairings
                    .iter()
                    .filter(|p| f.support().all(|a| p.admits(&a)))
                    .cloned()
                    .collect();
                assert_eq!(eom_pairings(&f).unwrap(), direct);
            }
        }
    }

    #[test]
    fn budget_is_reported() {
        let f = Signature::from_fn(8, |a| c((2 * a.ones() == 8) as i64)).unwrap();
        let err = typed_eom_class_with_budget(&f, 3).unwrap_err();
        assert!(err.is_refusal());
    }
}
