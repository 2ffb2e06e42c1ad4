//! Dichotomy verdicts for signature sets.

use serde::Serialize;

use crate::classify::{
    arity4_class, membership_a, membership_p, purity, rebalance_witness, typed_eom_class, Typing,
};
use crate::error::{Error, Result};
use crate::signature::Signature;

/// Pipeline that evaluates a tractable set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Pipeline {
    /// Forced-value propagation on pure signatures, then a CSP backend.
    Active,
    /// Cycle pinning on rebalancing signatures, then a CSP backend.
    Passive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Outcome {
    Tractable { case: String, pipeline: Pipeline },
    Hard { reason: String },
    Undecided { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    /// `arity4`, `pure` or `rebalancing`.
    pub decider: &'static str,
    #[serde(flatten)]
    pub outcome: Outcome,
    /// The condition that was checked, in words.
    pub condition: String,
    /// Indices into the input set of the signatures the verdict rests on.
    pub witnesses: Vec<usize>,
}

impl Verdict {
    fn new(decider: &'static str, outcome: Outcome, condition: impl Into<String>, witnesses: Vec<usize>) -> Self {
        Verdict { decider, outcome, condition: condition.into(), witnesses }
    }

    fn undecided(decider: &'static str, reason: impl Into<String>) -> Self {
        let reason = reason.into();
        Verdict::new(decider, Outcome::Undecided { reason: reason.clone() }, reason, Vec::new())
    }

    pub fn is_tractable(&self) -> bool {
        matches!(self.outcome, Outcome::Tractable { .. })
    }

    pub fn is_hard(&self) -> bool {
        matches!(self.outcome, Outcome::Hard { .. })
    }

    pub fn is_undecided(&self) -> bool {
        matches!(self.outcome, Outcome::Undecided { .. })
    }

    pub fn case(&self) -> Option<&str> {
        match &self.outcome {
            Outcome::Tractable { case, .. } => Some(case),
            _ => None,
        }
    }
}

fn require_eo(set: &[Signature]) -> Result<()> {
    match set.iter().position(|f| !f.is_zero() && !f.is_eo()) {
        Some(k) => Err(Error::NotEo(format!("signature {k} of the set"))),
        None => Ok(()),
    }
}

const ARITY4_CASES: [(char, &str); 4] = [
    ('a', "P or M⊗Δ1"),
    ('b', "A or M_A⊗Δ1"),
    ('c', "P or M̃⊗Δ0"),
    ('d', "A or M̃_A⊗Δ0"),
];

/// Cases `a..d` a single signature of arity at most 4 fits.
fn arity4_fits(f: &Signature) -> Result<[bool; 4]> {
    let in_a = membership_a(f).is_some();
    let in_p = membership_p(f).is_some();
    let m = if f.arity() == 4 { arity4_class(f)? } else { Default::default() };
    Ok([in_p || m.m_delta1, in_a || m.m_a_delta1, in_p || m.m_tilde_delta0, in_a || m.m_tilde_a_delta0])
}

/// Verdict for a set of EO signatures of arity at most 4.
pub fn decide_arity4(set: &[Signature]) -> Result<Verdict> {
    require_eo(set)?;
    if let Some(k) = set.iter().position(|f| f.arity() > 4) {
        return Err(Error::InvalidArgument(format!("signature {k} has arity {} > 4", set[k].arity())));
    }
    let fits: Vec<[bool; 4]> = set.iter().map(arity4_fits).collect::<Result<_>>()?;
    for (c, (tag, family)) in ARITY4_CASES.iter().enumerate() {
        if fits.iter().all(|f| f[c]) {
            return Ok(Verdict::new(
                "arity4",
                Outcome::Tractable { case: tag.to_string(), pipeline: Pipeline::Active },
                format!("every signature lies in {family}"),
                (0..set.len()).collect(),
            ));
        }
    }
    let hard = |reason: &str, condition: String, w: Vec<usize>| {
        Ok(Verdict::new("arity4", Outcome::Hard { reason: reason.into() }, condition, w))
    };
    if let Some(k) = fits.iter().position(|f| f.iter().all(|&b| !b)) {
        return hard(
            "single-signature",
            format!("signature {k} lies in none of P, A, M⊗Δ1, M_A⊗Δ1, M̃⊗Δ0, M̃_A⊗Δ0"),
            vec![k],
        );
    }
    let only = |want: [bool; 4]| fits.iter().position(|f| (0..4).all(|c| !f[c] || want[c]));
    // a: P side, b: A side, c/d the Δ0 mirrors
    let a_not_p = only([false, true, false, true]);
    let p_not_a = only([true, false, true, false]);
    if let (Some(i), Some(j)) = (a_not_p, p_not_a) {
        return hard(
            "affine-product-mixing",
            format!("signature {i} is affine but not of product type, signature {j} the reverse"),
            vec![i, j],
        );
    }
    let delta1 = only([true, true, false, false]);
    let delta0 = only([false, false, true, true]);
    if let (Some(i), Some(j)) = (delta1, delta0) {
        return hard(
            "delta1-delta0-mixing",
            format!("signature {i} only fits the Δ1 families, signature {j} only the Δ0 families"),
            vec![i, j],
        );
    }
    let pair = (0..set.len())
        .flat_map(|i| (i + 1..set.len()).map(move |j| (i, j)))
        .find(|&(i, j)| (0..4).all(|c| !(fits[i][c] && fits[j][c])));
    let w = pair.map(|(i, j)| vec![i, j]).unwrap_or_else(|| (0..set.len()).collect());
    hard(
        "family-delta-mixing",
        "no single case among P∪M⊗Δ1, A∪M_A⊗Δ1, P∪M̃⊗Δ0, A∪M̃_A⊗Δ0 contains the whole set".into(),
        w,
    )
}

/// Verdict for a set of pure-up or pure-down signatures.
pub fn decide_pure(set: &[Signature]) -> Result<Verdict> {
    require_eo(set)?;
    let mut up = true;
    let mut down = true;
    for f in set {
        match purity(f) {
            Ok(p) => {
                up &= p.is_up();
                down &= p.is_down();
            }
            Err(e) if e.is_refusal() => return Ok(Verdict::undecided("pure", e.to_string())),
            Err(e) => return Err(e),
        }
    }
    if !up && !down {
        return Ok(Verdict::undecided("pure", "not a pure set"));
    }
    let side = if up { "pure-up" } else { "pure-down" };
    let mut classes = Vec::with_capacity(set.len());
    for f in set {
        match typed_eom_class(f) {
            Ok(t) => classes.push(t),
            Err(e) if e.is_refusal() => return Ok(Verdict::undecided("pure", e.to_string())),
            Err(e) => return Err(e),
        }
    }
    for typing in [Typing::P, Typing::A] {
        if classes.iter().all(|t| typing.of(t)) {
            return Ok(Verdict::new(
                "pure",
                Outcome::Tractable { case: typing.to_string(), pipeline: Pipeline::Active },
                format!("{side} set, every signature is {typing}"),
                (0..set.len()).collect(),
            ));
        }
    }
    let not_a = classes.iter().position(|t| !t.is_eom_a).expect("some signature is not EOM[A]");
    let not_p = classes.iter().position(|t| !t.is_eom_p).expect("some signature is not EOM[P]");
    Ok(Verdict::new(
        "pure",
        Outcome::Hard { reason: "typing-not-uniform".into() },
        format!("{side} set: signature {not_a} is not EOM[A] and signature {not_p} is not EOM[P]"),
        if not_a == not_p { vec![not_a] } else { vec![not_a, not_p] },
    ))
}

/// Sufficient condition for tractability; a failure is never reported as hard.
pub fn decide_rebalancing(set: &[Signature]) -> Result<Verdict> {
    require_eo(set)?;
    let mut bits = [true, true];
    for (k, f) in set.iter().enumerate() {
        for bit in 0..2u8 {
            if !bits[bit as usize] {
                continue;
            }
            match rebalance_witness(f, bit) {
                Ok(w) => bits[bit as usize] = w.is_some(),
                Err(e) if e.is_refusal() => {
                    return Ok(Verdict::undecided("rebalancing", format!("signature {k}: {e}")))
                }
                Err(e) => return Err(e),
            }
        }
        if !bits[0] && !bits[1] {
            return Ok(Verdict::new(
                "rebalancing",
                Outcome::Undecided {
                    reason: "the set is neither 0-rebalancing nor 1-rebalancing; its complexity is open".into(),
                },
                "all signatures 0-rebalancing or all 1-rebalancing",
                vec![k],
            ));
        }
    }
    let bit = if bits[0] { 0 } else { 1 };
    let mut classes = Vec::with_capacity(set.len());
    for (k, f) in set.iter().enumerate() {
        match typed_eom_class(f) {
            Ok(t) => classes.push(t),
            Err(e) if e.is_refusal() => {
                return Ok(Verdict::undecided("rebalancing", format!("signature {k}: {e}")))
            }
            Err(e) => return Err(e),
        }
    }
    for typing in [Typing::P, Typing::A] {
        if classes.iter().all(|t| typing.of(t)) {
            return Ok(Verdict::new(
                "rebalancing",
                Outcome::Tractable { case: format!("{bit}-rebalancing {typing}"), pipeline: Pipeline::Passive },
                format!("every signature is {bit}-rebalancing and {typing}"),
                (0..set.len()).collect(),
            ));
        }
    }
    Ok(Verdict::new(
        "rebalancing",
        Outcome::Undecided { reason: format!("{bit}-rebalancing but the pairing restrictions are not uniformly typed") },
        "uniform EOM[A] or EOM[P] typing",
        (0..set.len()).collect(),
    ))
}

/// Arity-4 decider when every arity is at most 4; otherwise the pure decider,
/// and the rebalancing condition when the set is not pure.
pub fn decide(set: &[Signature]) -> Result<Verdict> {
    if set.iter().all(|f| f.arity() <= 4) {
        return decide_arity4(set);
    }
    let v = decide_pure(set)?;
    if v.is_undecided() {
        return decide_rebalancing(set);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ExactComplex;
    use crate::grid::builtin::{f40, f56, sixv};

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_int(n)
    }

    #[test]
    fn arity4_examples() {
        let set = [Signature::neq(2).unwrap(), sixv(c(1), c(1), c(1))];
        let v = decide_arity4(&set).unwrap();
        assert_eq!(v.case(), Some("a"), "{v:?}");

        let up = sixv(c(1), c(1), c(1));
        let v = decide_arity4(&[up.clone(), up.dual()]).unwrap();
        assert!(v.is_hard(), "{v:?}");
    }

    #[test]
    fn full_support_quaternary_is_hard() {
        let rows: Vec<(String, ExactComplex)> = ["0011", "0101", "0110", "1001", "1010", "1100"]
            .iter()
            .zip([1, 2, 3, 5, 7, 11])
            .map(|(s, v)| (s.to_string(), c(v)))
            .collect();
        let lits: Vec<(&str, ExactComplex)> = rows.iter().map(|(s, v)| (s.as_str(), v.clone())).collect();
        let f = Signature::from_literals(4, &lits);
        let v = decide_arity4(&[f]).unwrap();
        assert!(matches!(&v.outcome, Outcome::Hard { reason } if reason == "single-signature"), "{v:?}");
    }

    #[test]
    fn non_eo_rejected() {
        let f = Signature::from_literals(2, &[("11", c(1))]);
        assert!(matches!(decide_arity4(&[f]), Err(Error::NotEo(_))));
    }

    #[test]
    fn pure_examples() {
        let v = decide_pure(&[Signature::neq(4).unwrap(), sixv(c(1), c(1), c(1))]).unwrap();
        assert!(v.is_tractable(), "{v:?}");
        let v = decide_pure(&[sixv(c(1), c(2), c(4))]).unwrap();
        assert!(v.is_tractable(), "{v:?}");
        let v = decide_pure(&[f40()]).unwrap();
        assert!(v.is_undecided());
    }

    #[test]
    fn rebalancing_examples() {
        let v = decide_rebalancing(&[Signature::neq(6).unwrap()]).unwrap();
        assert!(v.is_tractable(), "{v:?}");
        let v = decide(&[f56()]).unwrap();
        assert!(v.is_undecided(), "{v:?}");
        assert_eq!(v.decider, "rebalancing");
    }
}
