//! Membership tests, with witnesses, for the signature families the
//! dichotomies are stated over.

pub mod affine;
pub mod pairing;
pub mod product;
pub mod rebalance;
mod rows;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::signature::{Pairing, Signature};

pub use affine::{affine_span, membership_a, AWitness, AffineSpace, Z4Phase};
pub use pairing::{
    eom_pairings, first_eom_pairing, for_each_eom_pairing, is_eom, typed_eom_class, RestrictionClass,
    TypedEom,
};
pub use product::{membership_p, PDecomposition, PFactor};
pub use rebalance::{first_level_holds, is_rebalancing, rebalance_witness, RebalanceWitness};

/// The two tractable #CSP families a typed signature set can land in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Typing {
    #[serde(rename = "A")]
    A,
    #[serde(rename = "P")]
    P,
}

impl Typing {
    pub fn of(self, t: &TypedEom) -> bool {
        match self {
            Typing::A => t.is_eom_a,
            Typing::P => t.is_eom_p,
        }
    }

    pub fn contains(self, f: &Signature) -> bool {
        match self {
            Typing::A => membership_a(f).is_some(),
            Typing::P => membership_p(f).is_some(),
        }
    }
}

impl std::fmt::Display for Typing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Typing::A => "EOM[A]",
            Typing::P => "EOM[P]",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Purity {
    PureUp,
    PureDown,
    Both,
    Neither,
}

impl Purity {
    pub fn is_up(self) -> bool {
        matches!(self, Purity::PureUp | Purity::Both)
    }

    pub fn is_down(self) -> bool {
        matches!(self, Purity::PureDown | Purity::Both)
    }
}

/// Classifies the affine span of the support against `HW≥` and `HW≤`.
/// Spans above [`affine::ENUMERATION_CAP`] dimensions are refused.
pub fn purity(f: &Signature) -> Result<Purity> {
    if !f.is_eo() {
        return Err(Error::NotEo("purity is defined for EO signatures".into()));
    }
    if f.is_zero() {
        return Ok(Purity::Both);
    }
    let span = AffineSpace::span(f.support())?;
    let (mut up, mut down) = (true, true);
    for p in span.points()? {
        let twice = 2 * p.ones();
        up &= twice >= f.arity();
        down &= twice <= f.arity();
        if !up && !down {
            break;
        }
    }
    Ok(match (up, down) {
        (true, true) => Purity::Both,
        (true, false) => Purity::PureUp,
        (false, true) => Purity::PureDown,
        (false, false) => Purity::Neither,
    })
}

/// Quaternary family flags. Each holds up to a reordering of the variables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Arity4Flags {
    /// `supp ⊆ {1100,1010,1001}` after moving the all-ones variable first.
    pub m_delta1: bool,
    /// `supp ⊆ {0011,0101,0110}` after moving the all-zeros variable first.
    pub m_tilde_delta0: bool,
    pub m_a_delta1: bool,
    pub m_tilde_a_delta0: bool,
}

fn quotients_are_i_powers(f: &Signature) -> bool {
    let mut values = f.rows().map(|(_, v)| v);
    let Some(first) = values.next() else { return true };
    let inv = first.inverse().expect("support value is nonzero");
    values.all(|v| (v * &inv).i_exponent().is_some())
}

fn m_delta1(f: &Signature) -> bool {
    (1..=4).any(|x| f.support().all(|a| a.get(x) && a.ones() == 2))
}

pub fn arity4_class(f: &Signature) -> Result<Arity4Flags> {
    if f.arity() != 4 {
        return Err(Error::WidthMismatch { expected: 4, found: f.arity() });
    }
    let m1 = m_delta1(f);
    let m0 = m_delta1(&f.dual());
    let quot = quotients_are_i_powers(f);
    Ok(Arity4Flags { m_delta1: m1, m_tilde_delta0: m0, m_a_delta1: m1 && quot, m_tilde_a_delta0: m0 && quot })
}

/// A flag that may be undecided because a search budget ran out.
pub type Flag = Option<bool>;

/// Everything the classifier knows about one signature.
#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub arity: usize,
    pub support_size: usize,
    pub is_eo: bool,
    pub in_a: bool,
    pub in_p: bool,
    pub is_eom: bool,
    /// Capped at a small number; the full set can be exponential.
    pub pairings: Vec<Pairing>,
    pub is_eom_a: Flag,
    pub is_eom_p: Flag,
    pub pure_up: Flag,
    pub pure_down: Flag,
    pub rebalancing_0: Flag,
    pub rebalancing_1: Flag,
    pub arity4: Option<Arity4Flags>,
    pub a_witness: Option<AWitness>,
    pub p_decomposition: Option<PDecomposition>,
    pub rebalance_0_witness: Option<RebalanceWitness>,
    pub rebalance_1_witness: Option<RebalanceWitness>,
    /// Per distinct pairing restriction; present when the typed search finished.
    pub restrictions: Option<Vec<RestrictionClass>>,
    /// Reasons for undecided flags.
    pub notes: Vec<String>,
}

/// Pairings listed in a report.
pub const REPORT_PAIRING_LIMIT: usize = 16;

impl ClassReport {
    pub fn of(f: &Signature) -> ClassReport {
        let mut notes = Vec::new();
        let is_eo = f.is_eo();
        let a_witness = membership_a(f);
        let p_decomposition = membership_p(f);

        let mut pairings = Vec::new();
        if f.arity() % 2 == 0 {
            let _ = for_each_eom_pairing(f, |p| {
                pairings.push(p.clone());
                if pairings.len() == REPORT_PAIRING_LIMIT {
                    std::ops::ControlFlow::Break(())
                } else {
                    std::ops::ControlFlow::Continue(())
                }
            });
        }

        let (mut is_eom_a, mut is_eom_p, mut restrictions) = (None, None, None);
        if f.arity() % 2 == 0 {
            match typed_eom_class(f) {
                Ok(t) => {
                    is_eom_a = Some(t.is_eom_a);
                    is_eom_p = Some(t.is_eom_p);
                    restrictions = Some(t.restrictions);
                }
                Err(e) => notes.push(format!("typed pairing class: {e}")),
            }
        } else {
            is_eom_a = Some(false);
            is_eom_p = Some(false);
        }

        let (mut pure_up, mut pure_down) = (Some(false), Some(false));
        let (mut rebalancing_0, mut rebalancing_1) = (Some(false), Some(false));
        let (mut rebalance_0_witness, mut rebalance_1_witness) = (None, None);
        if is_eo && f.arity() % 2 == 0 {
            match purity(f) {
                Ok(p) => {
                    pure_up = Some(p.is_up());
                    pure_down = Some(p.is_down());
                }
                Err(e) => {
                    notes.push(format!("purity: {e}"));
                    pure_up = None;
                    pure_down = None;
                }
            }
            for (bit, flag, wit) in [
                (0u8, &mut rebalancing_0, &mut rebalance_0_witness),
                (1u8, &mut rebalancing_1, &mut rebalance_1_witness),
            ] {
                match rebalance_witness(f, bit) {
                    Ok(w) => {
                        *flag = Some(w.is_some());
                        *wit = w;
                    }
                    Err(e) => {
                        notes.push(format!("{bit}-rebalancing: {e}"));
                        *flag = None;
                    }
                }
            }
        }

        ClassReport {
            arity: f.arity(),
            support_size: f.support_size(),
            is_eo,
            in_a: a_witness.is_some(),
            in_p: p_decomposition.is_some(),
            is_eom: !pairings.is_empty(),
            pairings,
            is_eom_a,
            is_eom_p,
            pure_up,
            pure_down,
            rebalancing_0,
            rebalancing_1,
            arity4: arity4_class(f).ok(),
            a_witness,
            p_decomposition,
            rebalance_0_witness,
            rebalance_1_witness,
            restrictions,
            notes,
        }
    }
}

/// True iff all nonzero values of `f` are `λ` times a power of `i`.
pub fn values_in_i_powers(f: &Signature) -> bool {
    quotients_are_i_powers(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ExactComplex;

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_int(n)
    }

    fn q1(values: [ExactComplex; 3]) -> Signature {
        let [a, b, d] = values;
        Signature::from_literals(4, &[("1100", a), ("1010", b), ("1001", d)])
    }

    #[test]
    fn purity_examples() {
        assert_eq!(purity(&q1([c(1), c(1), c(1)])).unwrap(), Purity::PureUp);
        assert_eq!(purity(&Signature::neq(4).unwrap()).unwrap(), Purity::Both);
        assert_eq!(purity(&q1([c(1), c(1), c(1)]).dual()).unwrap(), Purity::PureDown);
        // span contains 1111 and 0000
        let mixed = Signature::from_literals(4, &[("1100", c(1)), ("1010", c(1)), ("1001", c(1)), ("0110", c(1))]);
        assert_eq!(purity(&mixed).unwrap(), Purity::Neither);
        assert!(purity(&Signature::from_literals(2, &[("11", c(1))])).is_err());
    }

    #[test]
    fn arity4_examples() {
        let f = q1([c(1), c(2), c(3)]);
        let flags = arity4_class(&f).unwrap();
        assert!(flags.m_delta1 && !flags.m_a_delta1 && !flags.m_tilde_delta0);
        let g = q1([c(1), ExactComplex::i(), c(-1)]);
        assert!(arity4_class(&g).unwrap().m_a_delta1);
        let h = Signature::from_literals(4, &[("0011", c(1)), ("0101", c(1)), ("0110", c(1))]);
        assert!(arity4_class(&h).unwrap().m_tilde_delta0);
        // reordered: the all-ones variable is x3
        let r = Signature::from_literals(4, &[("1010", c(1)), ("0110", c(1)), ("0011", c(1))]);
        assert!(arity4_class(&r).unwrap().m_delta1);
        assert!(arity4_class(&Signature::neq(2).unwrap()).is_err());
    }

    #[test]
    fn report_serializes() {
        let r = ClassReport::of(&Signature::neq(4).unwrap());
        assert!(r.in_a && r.in_p && r.is_eom);
        assert_eq!(r.is_eom_a, Some(true));
        assert_eq!(r.rebalancing_0, Some(true));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["pairings"][0], serde_json::json!([[1, 3], [2, 4]]));
        assert_eq!(json["pure_up"], serde_json::json!(true));
    }
}
