//! Reduction of a 0-rebalancing grid to EOM-restricted tables.
//!
//! For a vertex `s`, its first-level mapping `ψ` gives implications
//! `x = 0 → ψ(x) = 1`. The rest of the grid gives implications
//! `y = 1 → θ(y) = 0`: a 1 leaving slot `y` arrives as a 0 somewhere, the
//! receiving vertex's own `ψ` sends a 1 out, and the walk continues until it
//! re-enters `s`. When two literals `x_i = 0` and `x_j = 1` imply each other,
//! `x_i ≠ x_j` holds in every nonzero term and the table is multiplied by
//! `[x_i ≠ x_j]`. The witness of the restricted table is recomputed by the
//! verifier, and the constructive update of `ψ` is checked against it.

use std::collections::HashSet;

use super::reduce::{constant_columns, Reduced, Reduction, Rule, Step, ZeroCertificate};
use crate::classify::{first_level_holds, rebalance_witness, RebalanceWitness};
use crate::error::{Error, Result};
use crate::grid::EOGrid;
use crate::signature::{Pairing, Signature};

/// `θ(y)` for every slot `y` of `s`: the slot at which a 1 sent out of `y`
/// comes back into `s` as a 0.
pub fn theta_mapping(g: &EOGrid, witnesses: &[RebalanceWitness], s: usize) -> Result<Vec<usize>> {
    (1..=g.arity(s)).map(|y| theta_walk(g, witnesses, s, y)).collect()
}

fn theta_walk(g: &EOGrid, witnesses: &[RebalanceWitness], s: usize, y: usize) -> Result<usize> {
    let mut cur = (s, y);
    let mut seen = HashSet::new();
    loop {
        let (v, z) = g.opposite(cur.0, cur.1);
        if v == s {
            return Ok(z);
        }
        if !seen.insert((v, z)) {
            return Err(Error::WalkCycled(format!(
                "walk from vertex {s} slot {y} returned to vertex {v} slot {z} without re-entering {s}"
            )));
        }
        cur = (v, witnesses[v].psi(z));
    }
}

/// Sound implications among the literals of one table, as local node pairs.
/// Node `x - 1` is `x = 0` and node `d + x - 1` is `x = 1`.
fn local_implications(f: &Signature, psi: &[usize], pairs: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let d = f.arity();
    let zero = |x: usize| x - 1;
    let one = |x: usize| d + x - 1;
    let mut out = Vec::new();
    for x in 1..=d {
        out.push((zero(x), one(psi[x - 1])));
    }
    for &(p, q) in pairs {
        out.extend([(zero(p), one(q)), (zero(q), one(p)), (one(p), zero(q)), (one(q), zero(p))]);
    }
    // two-literal clauses read off the table itself
    let rows: Vec<u64> = f.raw_rows().keys().copied().collect();
    for x in 1..=d {
        for y in 1..=d {
            if x == y {
                continue;
            }
            let (bx, by) = (1u64 << (x - 1), 1u64 << (y - 1));
            if rows.iter().all(|r| r & (bx | by) != 0) {
                out.push((zero(x), one(y)));
            }
            if rows.iter().all(|r| r & bx == 0 || r & by == 0) {
                out.push((one(x), zero(y)));
            }
        }
    }
    // a literal true on the whole support is implied by every literal of the table
    let (zeros, ones) = constant_columns(f);
    for x in 1..=d {
        let target = if zeros[x] {
            zero(x)
        } else if ones[x] {
            one(x)
        } else {
            continue;
        };
        out.extend((0..2 * d).map(|a| (a, target)));
    }
    out
}

/// Implication graph over every literal of the grid: table implications plus
/// `x = b → x' = ¬b` across each edge.
struct Implications {
    offset: Vec<usize>,
    local: Vec<Vec<(usize, usize)>>,
}

impl Implications {
    fn node(&self, g: &EOGrid, v: usize, local: usize) -> usize {
        let d = g.arity(v);
        let (x, b) = if local < d { (local, 0) } else { (local - d, 1) };
        2 * (self.offset[v] + x) + b
    }

    /// Reachability among the literals of `s`, in `s`'s local numbering.
    fn closure(&self, g: &EOGrid, s: usize) -> Literals {
        let total = 2 * *self.offset.last().expect("offset has a sentinel");
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); total];
        for v in 0..g.vertex_count() {
            for &(a, b) in &self.local[v] {
                adj[self.node(g, v, a)].push(self.node(g, v, b));
            }
            for x in 1..=g.arity(v) {
                let (w, z) = g.opposite(v, x);
                for b in 0..2 {
                    adj[2 * (self.offset[v] + x - 1) + b].push(2 * (self.offset[w] + z - 1) + 1 - b);
                }
            }
        }
        let d = g.arity(s);
        let reach = (0..2 * d)
            .map(|start| {
                let mut seen = vec![false; total];
                let mut stack = vec![self.node(g, s, start)];
                while let Some(u) = stack.pop() {
                    for &w in &adj[u] {
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
                (0..2 * d).map(|t| seen[self.node(g, s, t)]).collect()
            })
            .collect();
        Literals { d, reach }
    }
}

struct Literals {
    d: usize,
    reach: Vec<Vec<bool>>,
}

impl Literals {
    fn zero(&self, x: usize) -> usize {
        x - 1
    }

    fn one(&self, x: usize) -> usize {
        self.d + x - 1
    }

    fn implies(&self, a: usize, b: usize) -> bool {
        self.reach[a][b]
    }
}

enum Action {
    Pair { p: usize, q: usize, direct: bool },
    Fix { x: usize, value: bool },
    Contradiction(usize),
}

fn choose(lit: &Literals, psi: &[usize], free: &[usize], f: &Signature) -> Option<Action> {
    let d = lit.d;
    for x in 1..=d {
        if lit.implies(lit.zero(x), lit.one(x)) && lit.implies(lit.one(x), lit.zero(x)) {
            return Some(Action::Contradiction(x));
        }
    }
    for &p in free {
        let q = psi[p - 1];
        if free.contains(&q) && lit.implies(lit.one(q), lit.zero(p)) {
            return Some(Action::Pair { p, q, direct: true });
        }
    }
    for &p in free {
        for &q in free {
            if p != q && lit.implies(lit.zero(p), lit.one(q)) && lit.implies(lit.one(q), lit.zero(p)) {
                return Some(Action::Pair { p, q, direct: false });
            }
        }
    }
    let (zeros, ones) = constant_columns(f);
    for &x in free {
        if lit.implies(lit.zero(x), lit.one(x)) && !ones[x] {
            return Some(Action::Fix { x, value: true });
        }
        if lit.implies(lit.one(x), lit.zero(x)) && !zeros[x] {
            return Some(Action::Fix { x, value: false });
        }
    }
    None
}

/// The constructive update of `ψ` after restricting `f` to `p ≠ q` where `ψ(p) = q`:
/// `p ↔ q`, other targets kept unless they were `p` or `q`, in which case the
/// second-level mapping of the pinned child supplies the new target.
pub fn psi_after_pair(f: &Signature, w: &RebalanceWitness, p: usize, q: usize) -> Result<Vec<usize>> {
    let d = f.arity();
    let mut out = Vec::with_capacity(d);
    for x in 1..=d {
        let y = w.psi(x);
        let target = if x == p {
            q
        } else if x == q {
            p
        } else if y != p && y != q {
            y
        } else {
            let other = if y == p { q } else { p };
            let (_, child) = w.child(f, x)?;
            let kept: Vec<usize> = (1..=d).filter(|&v| v != x && v != y).collect();
            let idx = kept.iter().position(|&v| v == other).expect("partner survives pinning") + 1;
            kept[child.psi(idx) - 1]
        };
        out.push(target);
    }
    Ok(out)
}

fn witness(f: &Signature, vertex: usize) -> Result<RebalanceWitness> {
    rebalance_witness(f, 0)?
        .ok_or_else(|| Error::Internal(format!("table of vertex {vertex} is no longer 0-rebalancing")))
}

/// Requires every vertex table to be 0-rebalancing.
pub fn passive_reduce(g: &EOGrid) -> Result<Reduced> {
    let n = g.vertex_count();
    let mut tables = g.vertex_signatures();
    let mut steps = Vec::new();
    let zero = |vertex: usize, reason: String, mut steps: Vec<Step>| {
        steps.push(Step::new(Rule::Zero).at(vertex).detail(reason.clone()));
        Ok(Reduced::Zero { certificate: ZeroCertificate { vertex, reason }, steps })
    };
    if let Some(v) = tables.iter().position(|t| t.is_zero()) {
        return zero(v, "zero table".into(), steps);
    }
    let mut by_name = std::collections::BTreeMap::new();
    for (name, f) in g.used_signatures() {
        let w = rebalance_witness(f, 0)?
            .ok_or_else(|| Error::Refused(format!("signature {name} is not 0-rebalancing")))?;
        by_name.insert(name.to_string(), w);
    }
    let mut witnesses: Vec<RebalanceWitness> = g.vertices().iter().map(|name| by_name[name].clone()).collect();
    let mut pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut offset = vec![0];
    for v in 0..n {
        offset.push(offset[v] + g.arity(v));
    }
    let local = (0..n).map(|v| local_implications(&tables[v], &witnesses[v].psi, &[])).collect();
    let mut graph = Implications { offset, local };

    for s in 0..n {
        let d = tables[s].arity();
        while 2 * pairs[s].len() < d {
            // a walk that cycles away from s only loses the report; its edges are in the graph
            if let Ok(theta) = theta_mapping(g, &witnesses, s) {
                steps.push(Step::new(Rule::ThetaWalk).at(s).detail(format!("theta = {theta:?}")));
            }
            let psi = witnesses[s].psi.clone();
            let lit = graph.closure(g, s);
            let free: Vec<usize> =
                (1..=d).filter(|&x| !pairs[s].iter().any(|&(a, b)| a == x || b == x)).collect();
            let action = choose(&lit, &psi, &free, &tables[s])
                .ok_or_else(|| Error::Refused(format!("no forced pair found at vertex {s}")))?;
            let mut next_psi = None;
            match action {
                Action::Contradiction(x) => {
                    return zero(s, format!("x{x}=0 and x{x}=1 each imply the other's negation"), steps);
                }
                Action::Fix { x, value } => {
                    tables[s] = tables[s].restrict_value(x, value)?;
                    steps.push(Step::new(Rule::ForcedLiteral).at(s).indicator(format!("[x{x}={}]", value as u8)));
                }
                Action::Pair { p, q, direct } => {
                    let restricted = tables[s].restrict_unequal(p, q)?;
                    steps.push(
                        Step::new(Rule::ForcedUnequal)
                            .at(s)
                            .pair(p, q)
                            .indicator(format!("[x{p}≠x{q}]"))
                            .detail(if direct { "psi edge on a cycle" } else { "implication closure" }),
                    );
                    if direct && !restricted.is_zero() {
                        let updated = psi_after_pair(&tables[s], &witnesses[s], p, q)?;
                        if !first_level_holds(&restricted, 0, &updated) {
                            return Err(Error::Internal(format!(
                                "updated first-level mapping fails at vertex {s} after pairing ({p},{q})"
                            )));
                        }
                        steps.push(Step::new(Rule::PsiUpdateChecked).at(s).pair(p, q));
                        let w = RebalanceWitness { bit: 0, psi: updated };
                        if (1..=d).all(|x| w.child(&restricted, x).is_ok()) {
                            next_psi = Some(w);
                        }
                    }
                    tables[s] = restricted;
                    pairs[s].push((p, q));
                }
            }
            if tables[s].is_zero() {
                return zero(s, "table vanished after restriction".into(), steps);
            }
            witnesses[s] = match next_psi {
                Some(w) => w,
                None => witness(&tables[s], s)?,
            };
            graph.local[s] = local_implications(&tables[s], &witnesses[s].psi, &pairs[s]);
        }
    }
    let pairings = pairs.into_iter().map(Pairing::new).collect::<Result<Vec<_>>>()?;
    let grid = g.with_vertex_signatures(tables)?;
    Ok(Reduced::Grid(Reduction { grid, pairings, steps }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ExactComplex;
    use crate::grid::builtin::{f40, two_vertex_grid};
    use crate::classify::Typing;
    use crate::grid::random::{random_family_grid, GridFamily};
    use crate::grid::{brute_force_value, GridBuilder};

    fn neq4_pair() -> EOGrid {
        two_vertex_grid("n", &Signature::neq(4).unwrap()).unwrap()
    }

    fn psi_pairing(f: &Signature) -> RebalanceWitness {
        // ψ(x) = partner under {{1,3},{2,4}}
        let w = RebalanceWitness { bit: 0, psi: vec![3, 4, 1, 2] };
        assert!(w.first_level_holds(f));
        w
    }

    #[test]
    fn theta_examples() {
        let n4 = Signature::neq(4).unwrap();
        let g = neq4_pair();
        let w = vec![psi_pairing(&n4), psi_pairing(&n4)];
        assert_eq!(theta_mapping(&g, &w, 0).unwrap()[0], 3);

        let single = GridBuilder::new()
            .signature("n", n4.clone())
            .vertex("n")
            .edge((0, 1), (0, 3))
            .edge((0, 2), (0, 4))
            .build()
            .unwrap();
        assert_eq!(theta_mapping(&single, &w[..1], 0).unwrap()[0], 3);

        // s's slot 1 and slot 2 joined through a chain of two binary disequalities
        let neq2 = Signature::neq(2).unwrap();
        let chain = GridBuilder::new()
            .signature("n", n4)
            .signature("b", neq2)
            .vertex("n")
            .vertices("b", 2)
            .edge((0, 1), (1, 1))
            .edge((1, 2), (2, 1))
            .edge((2, 2), (0, 2))
            .edge((0, 3), (0, 4))
            .build()
            .unwrap();
        let ws = vec![
            psi_pairing(&Signature::neq(4).unwrap()),
            RebalanceWitness { bit: 0, psi: vec![2, 1] },
            RebalanceWitness { bit: 0, psi: vec![2, 1] },
        ];
        assert_eq!(theta_mapping(&chain, &ws, 0).unwrap()[0], 2);
    }

    #[test]
    fn neq4_pair_reduces() {
        let g = neq4_pair();
        let Reduced::Grid(r) = passive_reduce(&g).unwrap() else { panic!() };
        assert_eq!(brute_force_value(&r.grid).unwrap(), ExactComplex::from_int(2));
        assert_eq!(r.grid.vertex_signature(0), &Signature::neq(4).unwrap());
    }

    #[test]
    fn f40_pairs_are_sound() {
        let f = f40();
        let g = two_vertex_grid("f40", &f).unwrap();
        check(&g, &passive_reduce(&g).unwrap());
    }

    fn check(g: &EOGrid, r: &Reduced) {
        let z = brute_force_value(g).unwrap();
        match r {
            Reduced::Zero { .. } => assert!(z.is_zero(), "{g:?}"),
            Reduced::Grid(r) => {
                for (v, t) in r.grid.vertex_signatures().iter().enumerate() {
                    assert!(t.support().all(|a| r.pairings[v].admits(&a)));
                }
                assert_eq!(brute_force_value(&r.grid).unwrap(), z);
            }
        }
    }

    #[test]
    fn random_rebalancing_grids() {
        let mut rng = crate::grid::random::rng(21);
        let mut reduced = 0;
        for k in 0..40 {
            let typing = if k % 2 == 0 { Typing::A } else { Typing::P };
            let g = random_family_grid(&mut rng, GridFamily::Rebalancing, typing, 3, 6).unwrap();
            match passive_reduce(&g) {
                Ok(r) => {
                    check(&g, &r);
                    reduced += 1;
                }
                Err(e) => assert!(e.is_refusal(), "{e:?}"),
            }
        }
        assert!(reduced >= 30, "only {reduced} of 40 grids reduced");
    }
}
