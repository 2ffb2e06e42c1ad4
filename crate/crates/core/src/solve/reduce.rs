use serde::Serialize;

use crate::grid::EOGrid;
use crate::signature::Pairing;

/// Why a reduction step is sound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// Grid replaced by its dual so that the bit-0 pipeline applies.
    Dual,
    /// A non-EOM pure-up table has a variable that is 1 on its whole support.
    ForcedOne,
    /// A forced 0 entered an EOM table; its pairing partner is forced to 1.
    PairingPartner,
    /// A forced 0 reached a non-EOM table, which is pinned against its own forced-1 variable.
    PinAgainstForcedOne,
    /// `θ` read off by following first-level mappings around the rest of the grid.
    ThetaWalk,
    /// Two literals of one vertex imply each other's negation through `ψ`, `θ`
    /// and earlier pairs, so the variables are unequal in every nonzero term.
    ForcedUnequal,
    /// A variable whose opposite literal implies it is fixed.
    ForcedLiteral,
    /// The constructive update of `ψ` after a restriction satisfied the first-level condition.
    PsiUpdateChecked,
    /// A table became zero, or a forced value contradicts a table.
    Zero,
    /// The reduced grid was flattened and evaluated by a CSP backend.
    Backend,
    /// Sparse enumeration.
    BruteForce,
    /// The requested pipeline could not finish; brute force was used instead.
    Fallback,
}

/// One entry of the provenance report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub rule: Rule,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
    /// Slots `(p, q)` now known to be unequal, or the slot pair a step acted on.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair: Option<(usize, usize)>,
    /// Indicator multiplied into the vertex table, e.g. `[x3≠x5]`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub indicator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Step {
    pub fn new(rule: Rule) -> Self {
        Step { rule, vertex: None, pair: None, indicator: None, detail: None }
    }

    pub fn at(mut self, vertex: usize) -> Self {
        self.vertex = Some(vertex);
        self
    }

    pub fn pair(mut self, p: usize, q: usize) -> Self {
        self.pair = Some((p, q));
        self
    }

    pub fn indicator(mut self, text: String) -> Self {
        self.indicator = Some(text);
        self
    }

    pub fn detail(mut self, text: impl Into<String>) -> Self {
        self.detail = Some(text.into());
        self
    }
}

/// The partition function is zero; `reason` says which table forced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroCertificate {
    pub vertex: usize,
    pub reason: String,
}

/// A grid of the same shape and value whose tables are EOM-restricted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub grid: EOGrid,
    /// A pairing of each vertex whose EOM set contains the vertex's support.
    pub pairings: Vec<Pairing>,
    pub steps: Vec<Step>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduced {
    Grid(Reduction),
    Zero { certificate: ZeroCertificate, steps: Vec<Step> },
}

impl Reduced {
    pub fn steps(&self) -> &[Step] {
        match self {
            Reduced::Grid(r) => &r.steps,
            Reduced::Zero { steps, .. } => steps,
        }
    }
}

/// Columns of a table that are constant on its support: `(all zero, all one)`.
pub(crate) fn constant_columns(f: &crate::signature::Signature) -> (Vec<bool>, Vec<bool>) {
    let n = f.arity();
    let mut zero = vec![true; n + 1];
    let mut one = vec![true; n + 1];
    for a in f.support() {
        for x in 1..=n {
            if a.get(x) {
                zero[x] = false;
            } else {
                one[x] = false;
            }
        }
    }
    zero[0] = false;
    one[0] = false;
    (zero, one)
}
