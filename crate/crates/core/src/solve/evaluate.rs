//! Exact evaluation of a grid by brute force or by a reduction pipeline
//! followed by a CSP backend.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;

use super::active::active_reduce;
use super::backend::{affine_csp_value, product_csp_value};
use super::passive::passive_reduce;
use super::reduce::{Reduced, Rule, Step};
use crate::arith::ExactComplex;
use crate::classify::{first_eom_pairing, membership_a, membership_p, purity, rebalance_witness, typed_eom_class, Typing};
use crate::error::{Error, Result};
use crate::grid::{brute_force_value_with_budget, dual_grid, flatten_to_csp, EOGrid, BRUTE_FORCE_BUDGET};
use crate::signature::Signature;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    Auto,
    Brute,
    Active,
    Passive,
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Strategy::Auto),
            "brute" => Ok(Strategy::Brute),
            "active" => Ok(Strategy::Active),
            "passive" => Ok(Strategy::Passive),
            _ => Err(Error::InvalidArgument(format!("unknown strategy {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalOptions {
    pub strategy: Strategy,
    /// Support combinations brute force may visit.
    pub budget: u64,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions { strategy: Strategy::Auto, budget: BRUTE_FORCE_BUDGET }
    }
}

impl EvalOptions {
    pub fn with_strategy(strategy: Strategy) -> Self {
        EvalOptions { strategy, ..Default::default() }
    }
}

/// What produced the value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Tables already EOM-restricted; flattened and handed to a backend.
    Backend,
    Active,
    Passive,
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    Affine,
    Product,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Evaluation {
    pub value: ExactComplex,
    pub route: Route,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<Backend>,
    /// The pipeline ran on the dual grid.
    pub dualized: bool,
    pub steps: Vec<Step>,
    pub warnings: Vec<String>,
}

impl Evaluation {
    /// True when a pipeline was requested or chosen but brute force produced the value.
    pub fn fell_back(&self) -> bool {
        self.steps.iter().any(|s| s.rule == Rule::Fallback)
    }
}

/// Flattens `g` and evaluates it with the product backend when every clause
/// is of product type, otherwise with the affine backend.
pub fn backend_value(g: &EOGrid) -> Result<(ExactComplex, Backend)> {
    let c = flatten_to_csp(g);
    if c.clauses.iter().all(|cl| membership_p(&cl.sig).is_some()) {
        Ok((product_csp_value(&c)?, Backend::Product))
    } else {
        Ok((affine_csp_value(&c)?, Backend::Affine))
    }
}

/// Memoized per-signature facts the dispatcher asks for.
struct Facts<'a> {
    sigs: Vec<(&'a str, &'a Signature)>,
    typing: BTreeMap<&'a str, Option<(bool, bool)>>,
}

impl<'a> Facts<'a> {
    fn new(g: &'a EOGrid) -> Self {
        Facts { sigs: g.used_signatures(), typing: BTreeMap::new() }
    }

    fn all(&self, test: impl Fn(&Signature) -> bool) -> bool {
        self.sigs.iter().all(|(_, f)| test(f))
    }

    /// Uniform EOM[A] or EOM[P] typing; `false` when a search was refused.
    fn uniformly_typed(&mut self) -> bool {
        for &(name, f) in &self.sigs {
            self.typing
                .entry(name)
                .or_insert_with(|| typed_eom_class(f).ok().map(|t| (t.is_eom_a, t.is_eom_p)));
        }
        let flags: Vec<_> = self.typing.values().collect();
        flags.iter().all(|t| matches!(t, Some((true, _)))) || flags.iter().all(|t| matches!(t, Some((_, true))))
    }
}

fn is_pure(f: &Signature, up: bool) -> bool {
    match purity(f) {
        Ok(p) => if up { p.is_up() } else { p.is_down() },
        Err(_) => false,
    }
}

fn is_rebalancing(f: &Signature, bit: u8) -> bool {
    matches!(rebalance_witness(f, bit), Ok(Some(_)))
}

fn already_typed(f: &Signature) -> bool {
    f.is_zero() || (matches!(first_eom_pairing(f), Ok(Some(_))) && (membership_a(f).is_some() || membership_p(f).is_some()))
}

fn brute(g: &EOGrid, budget: u64, mut steps: Vec<Step>, warnings: Vec<String>) -> Result<Evaluation> {
    let value = brute_force_value_with_budget(g, budget)?;
    steps.push(Step::new(Rule::BruteForce));
    Ok(Evaluation { value, route: Route::Brute, backend: None, dualized: false, steps, warnings })
}

/// Runs one reduction pipeline on `g` (already dualized if needed) and a backend
/// on its output. Refusals inside the reduction fall back to brute force.
fn pipeline(original: &EOGrid, g: &EOGrid, route: Route, dualized: bool, budget: u64) -> Result<Evaluation> {
    let mut steps = Vec::new();
    if dualized {
        steps.push(Step::new(Rule::Dual));
    }
    let reduced = match route {
        Route::Active => active_reduce(g),
        Route::Passive => passive_reduce(g),
        _ => unreachable!("only reductions run through the pipeline"),
    };
    let reduced = match reduced {
        Ok(r) => r,
        Err(e) if e.is_refusal() => {
            let warning = format!("{e}; falling back to brute force");
            steps.push(Step::new(Rule::Fallback).detail(warning.clone()));
            return brute(original, budget, steps, vec![warning]);
        }
        Err(e) => return Err(e),
    };
    match reduced {
        Reduced::Zero { steps: s, .. } => {
            steps.extend(s);
            Ok(Evaluation { value: ExactComplex::zero(), route, backend: None, dualized, steps, warnings: Vec::new() })
        }
        Reduced::Grid(r) => {
            steps.extend(r.steps);
            let (value, backend) = backend_value(&r.grid)?;
            steps.push(Step::new(Rule::Backend).detail(format!("{backend:?}").to_lowercase()));
            Ok(Evaluation { value, route, backend: Some(backend), dualized, steps, warnings: Vec::new() })
        }
    }
}

pub fn evaluate(g: &EOGrid, options: &EvalOptions) -> Result<Evaluation> {
    let budget = options.budget;
    let mut facts = Facts::new(g);
    match options.strategy {
        Strategy::Brute => brute(g, budget, Vec::new(), Vec::new()),
        Strategy::Active => {
            if facts.all(|f| is_pure(f, true)) {
                pipeline(g, g, Route::Active, false, budget)
            } else if facts.all(|f| is_pure(f, false)) {
                pipeline(g, &dual_grid(g), Route::Active, true, budget)
            } else {
                Err(Error::Refused("active pipeline needs a pure-up or pure-down grid".into()))
            }
        }
        Strategy::Passive => {
            if facts.all(|f| is_rebalancing(f, 0)) {
                pipeline(g, g, Route::Passive, false, budget)
            } else if facts.all(|f| is_rebalancing(f, 1)) {
                pipeline(g, &dual_grid(g), Route::Passive, true, budget)
            } else {
                Err(Error::Refused("passive pipeline needs a 0- or 1-rebalancing grid".into()))
            }
        }
        Strategy::Auto => {
            if !facts.all(|f| f.is_zero() || f.is_eo()) {
                return brute(g, budget, Vec::new(), vec!["grid has non-EO signatures".into()]);
            }
            if facts.all(already_typed) {
                let all_in = |t: Typing| facts.all(|f| f.is_zero() || t.contains(f));
                if all_in(Typing::A) || all_in(Typing::P) {
                    let (value, backend) = backend_value(g)?;
                    let steps = vec![Step::new(Rule::Backend).detail(format!("{backend:?}").to_lowercase())];
                    return Ok(Evaluation {
                        value,
                        route: Route::Backend,
                        backend: Some(backend),
                        dualized: false,
                        steps,
                        warnings: Vec::new(),
                    });
                }
            }
            for up in [true, false] {
                if facts.all(|f| is_pure(f, up)) && facts.uniformly_typed() {
                    let h = if up { g.clone() } else { dual_grid(g) };
                    return pipeline(g, &h, Route::Active, !up, budget);
                }
            }
            for bit in [0, 1] {
                if facts.all(|f| is_rebalancing(f, bit)) && facts.uniformly_typed() {
                    let h = if bit == 0 { g.clone() } else { dual_grid(g) };
                    return pipeline(g, &h, Route::Passive, bit == 1, budget);
                }
            }
            brute(g, budget, Vec::new(), Vec::new())
        }
    }
}
