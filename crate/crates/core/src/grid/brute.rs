//! Reference evaluator: enumerates one support row per vertex and keeps the
//! combinations in which both ends of every edge differ.

use super::EOGrid;
use crate::arith::ExactComplex;
use crate::error::{Error, Result};

/// Default bound on search nodes (partial row combinations) visited.
pub const BRUTE_FORCE_BUDGET: u64 = 20_000_000;

pub fn brute_force_value(g: &EOGrid) -> Result<ExactComplex> {
    brute_force_value_with_budget(g, BRUTE_FORCE_BUDGET)
}

struct Plan {
    /// Vertex visited at each depth.
    order: Vec<usize>,
    /// Candidate rows per depth (self-loop constraints already applied).
    rows: Vec<Vec<(u64, ExactComplex)>>,
    /// Per depth: `(slot bit, earlier depth, slot bit there)` that must differ.
    checks: Vec<Vec<(u32, usize, u32)>>,
}

fn plan(g: &EOGrid) -> Plan {
    let n = g.vertex_count();
    // breadth-first order so that most edges are checked as early as possible
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    for root in 0..n {
        if placed[root] {
            continue;
        }
        placed[root] = true;
        let mut head = order.len();
        order.push(root);
        while head < order.len() {
            let v = order[head];
            head += 1;
            for s in 1..=g.arity(v) {
                let (w, _) = g.opposite(v, s);
                if !placed[w] {
                    placed[w] = true;
                    order.push(w);
                }
            }
        }
    }
    let mut depth_of = vec![0usize; n];
    for (d, &v) in order.iter().enumerate() {
        depth_of[v] = d;
    }
    let mut rows = Vec::with_capacity(n);
    let mut checks = Vec::with_capacity(n);
    for (d, &v) in order.iter().enumerate() {
        let mut own = Vec::new();
        let mut earlier = Vec::new();
        for s in 1..=g.arity(v) {
            let (w, t) = g.opposite(v, s);
            if w == v {
                if s < t {
                    own.push((s as u32 - 1, t as u32 - 1));
                }
            } else if depth_of[w] < d {
                earlier.push((s as u32 - 1, depth_of[w], t as u32 - 1));
            }
        }
        let candidates = g
            .vertex_signature(v)
            .raw_rows()
            .iter()
            .filter(|(&r, _)| own.iter().all(|&(s, t)| (r >> s & 1) != (r >> t & 1)))
            .map(|(&r, val)| (r, val.clone()))
            .collect();
        rows.push(candidates);
        checks.push(earlier);
    }
    Plan { order, rows, checks }
}

pub fn brute_force_value_with_budget(g: &EOGrid, budget: u64) -> Result<ExactComplex> {
    let plan = plan(g);
    let n = plan.order.len();
    let mut chosen = vec![0u64; n];
    let mut visited = 0u64;
    let mut total = ExactComplex::zero();

    fn go(
        plan: &Plan,
        d: usize,
        chosen: &mut Vec<u64>,
        weight: &ExactComplex,
        total: &mut ExactComplex,
        visited: &mut u64,
        budget: u64,
    ) -> Result<()> {
        if d == plan.order.len() {
            *total += weight;
            return Ok(());
        }
        for (r, val) in &plan.rows[d] {
            *visited += 1;
            if *visited > budget {
                return Err(Error::Refused(format!("brute force exceeded {budget} row combinations")));
            }
            if plan.checks[d].iter().all(|&(s, e, t)| (r >> s & 1) != (chosen[e] >> t & 1)) {
                chosen[d] = *r;
                go(plan, d + 1, chosen, &(weight * val), total, visited, budget)?;
            }
        }
        Ok(())
    }

    if n == 0 {
        return Ok(ExactComplex::one());
    }
    go(&plan, 0, &mut chosen, &ExactComplex::one(), &mut total, &mut visited, budget)?;
    Ok(total)
}
