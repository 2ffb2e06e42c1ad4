//! Seeded generators for signatures of each family and for grids over them.
//!
//! Members of the affine and product families are built straight from their
//! definitions (constraint matrix plus indicator phases, resp. a product of
//! unary/equality/disequality factors), so they are independent of the
//! membership tests they are used to check. Typed pure and rebalancing
//! generators filter their candidates through the classifier.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::builtin::{sixv, Generated};
use super::transform::pi_transform;
use super::EOGrid;
use crate::arith::ExactComplex;
use crate::classify::{purity, rebalance_witness, typed_eom_class, Typing};
use crate::error::{Error, Result};
use crate::signature::Signature;

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn int(n: i64) -> ExactComplex {
    ExactComplex::from_int(n)
}

/// Nonzero Gaussian integer with parts in `[-2, 2]`.
pub fn nonzero_value<R: Rng>(rng: &mut R) -> ExactComplex {
    loop {
        let v = ExactComplex::gaussian(rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        if !v.is_zero() {
            return v;
        }
    }
}

/// `±1` or `±i`, times a fixed scalar chosen by the caller.
pub fn i_power<R: Rng>(rng: &mut R) -> ExactComplex {
    ExactComplex::i_pow(rng.gen_range(0..4))
}

fn value_for<R: Rng>(rng: &mut R, typing: Typing) -> ExactComplex {
    match typing {
        Typing::A => i_power(rng),
        Typing::P => nonzero_value(rng),
    }
}

/// `λ · [Ax = b] · i^{Σ_j ⟨α_j, x⟩ mod 2}` with random `A`, `b` (consistent), `α_j`, `λ`.
pub fn a_member<R: Rng>(rng: &mut R, arity: usize) -> Signature {
    let full = (1u64 << arity) - 1;
    let x0 = rng.gen::<u64>() & full;
    let constraints: Vec<(u64, u32)> = (0..rng.gen_range(0..=arity))
        .map(|_| {
            let row = rng.gen::<u64>() & full;
            (row, (row & x0).count_ones() & 1)
        })
        .collect();
    let alphas: Vec<u64> = (0..rng.gen_range(0..=arity + 2)).map(|_| rng.gen::<u64>() & full).collect();
    let lambda = nonzero_value(rng);
    Signature::from_fn(arity, |a| {
        let x = a.raw();
        if constraints.iter().any(|&(row, b)| (row & x).count_ones() & 1 != b) {
            return int(0);
        }
        let k: u32 = alphas.iter().map(|&al| (al & x).count_ones() & 1).sum();
        lambda.mul_i_pow(k as i64)
    })
    .expect("small arity")
}

/// `λ ·` a product of random unary, `=_2` and `≠_2` factors.
pub fn p_member<R: Rng>(rng: &mut R, arity: usize) -> Signature {
    enum F {
        Unary(usize, ExactComplex, ExactComplex),
        Eq(usize, usize),
        Neq(usize, usize),
    }
    let mut factors = Vec::new();
    if arity > 0 {
        for _ in 0..rng.gen_range(0..=arity + 2) {
            let a = rng.gen_range(1..=arity);
            let b = rng.gen_range(1..=arity);
            factors.push(match rng.gen_range(0..3) {
                0 => {
                    let mut w = || if rng.gen_bool(0.15) { int(0) } else { nonzero_value(rng) };
                    F::Unary(a, w(), w())
                }
                1 => F::Eq(a, b),
                _ if a != b => F::Neq(a, b),
                _ => F::Eq(a, b),
            });
        }
    }
    let lambda = nonzero_value(rng);
    Signature::from_fn(arity, |x| {
        let mut v = lambda.clone();
        for f in &factors {
            match f {
                F::Unary(a, w0, w1) => v *= if x.get(*a) { w1 } else { w0 },
                F::Eq(a, b) if x.get(*a) != x.get(*b) => return int(0),
                F::Neq(a, b) if x.get(*a) == x.get(*b) => return int(0),
                _ => {}
            }
        }
        v
    })
    .expect("small arity")
}

/// Uniformly random reordering of the variables.
pub fn shuffle_vars<R: Rng>(rng: &mut R, f: &Signature) -> Signature {
    let mut order: Vec<usize> = (1..=f.arity()).collect();
    order.shuffle(rng);
    f.permute(&order).expect("permutation")
}

/// `π(g)` with shuffled variables: EOM, and typed when `g` is a family member.
pub fn eom_member<R: Rng>(rng: &mut R, half: usize, typing: Option<Typing>) -> Signature {
    let g = match typing {
        Some(Typing::A) => a_member(rng, half),
        Some(Typing::P) => p_member(rng, half),
        None => Signature::from_fn(half, |_| if rng.gen_bool(0.3) { int(0) } else { nonzero_value(rng) })
            .expect("small arity"),
    };
    shuffle_vars(rng, &pi_transform(&g).expect("small arity"))
}

/// `Δ1^{⊗k}` followed by the weight-one strings of length `k+2`: pure-up, arity `2k+2`.
pub fn star_block<R: Rng>(rng: &mut R, k: usize, typing: Typing) -> Signature {
    let n = 2 * k + 2;
    let ones = (1u64 << k) - 1;
    let scale = nonzero_value(rng);
    let rows: Vec<_> = (0..k + 2)
        .map(|j| {
            let bits = ones | 1 << (k + j);
            (crate::bits::BitString::new(n, bits).expect("fits"), &scale * &value_for(rng, typing))
        })
        .collect();
    shuffle_vars(rng, &Signature::from_rows(n, rows).expect("distinct rows"))
}

fn typed(f: &Signature, typing: Typing) -> bool {
    matches!(typed_eom_class(f), Ok(t) if typing.of(&t))
}

const ATTEMPTS: usize = 400;

/// A pure-up signature of even arity `≤ max_arity` that is uniformly typed.
pub fn pure_up_typed<R: Rng>(rng: &mut R, max_arity: usize, typing: Typing) -> Result<Signature> {
    if max_arity < 2 {
        return Err(Error::InvalidArgument("pure-up generator needs arity at least 2".into()));
    }
    for _ in 0..ATTEMPTS {
        let f = match rng.gen_range(0..4) {
            0 if max_arity >= 4 => { let k = rng.gen_range(1..=(max_arity - 2) / 2); star_block(rng, k, typing) },
            1 if max_arity >= 6 => {
                let s = star_block(rng, 1, typing);
                let e = eom_member(rng, 1, Some(typing));
                shuffle_vars(rng, &s.tensor(&e)?)
            }
            2 if max_arity >= 6 => {
                // a self-loop of a larger pure-up signature stays pure-up
                let k = rng.gen_range(1..=(max_arity - 2) / 2);
                let s = star_block(rng, k, typing);
                let e = eom_member(rng, 1, Some(typing));
                let t = s.tensor(&e)?;
                let x = rng.gen_range(1..=t.arity());
                let y = loop {
                    let y = rng.gen_range(1..=t.arity());
                    if y != x {
                        break y;
                    }
                };
                t.self_loop(x, y)?
            }
            _ => { let h = rng.gen_range(1..=max_arity / 2); eom_member(rng, h, Some(typing)) },
        };
        if f.arity() <= max_arity && !f.is_zero() && purity(&f).is_ok_and(|p| p.is_up()) && typed(&f, typing) {
            return Ok(f);
        }
    }
    Err(Error::Internal("pure-up generator found no candidate".into()))
}

/// A random EO signature with random support and values of the given typing.
pub fn random_eo<R: Rng>(rng: &mut R, arity: usize, typing: Typing, density: f64) -> Signature {
    Signature::from_fn(arity, |a| {
        if 2 * a.ones() == arity && rng.gen_bool(density) {
            value_for(rng, typing)
        } else {
            int(0)
        }
    })
    .expect("small arity")
}

/// A 0-rebalancing, uniformly typed signature of even arity `≤ max_arity`,
/// mixing EOM members, pure-up members and filtered random supports.
pub fn rebalancing_typed<R: Rng>(rng: &mut R, max_arity: usize, typing: Typing) -> Result<Signature> {
    for _ in 0..ATTEMPTS {
        let f = match rng.gen_range(0..4) {
            0 => { let h = rng.gen_range(1..=max_arity / 2); eom_member(rng, h, Some(typing)) },
            1 => pure_up_typed(rng, max_arity, typing)?,
            _ => {
                let n = 2 * rng.gen_range(2..=(max_arity / 2).max(2));
                if n > max_arity {
                    continue;
                }
                { let p = rng.gen_range(0.15..0.6); random_eo(rng, n, typing, p) }
            }
        };
        if !f.is_zero() && matches!(rebalance_witness(&f, 0), Ok(Some(_))) && typed(&f, typing) {
            return Ok(f);
        }
    }
    Err(Error::Internal("rebalancing generator found no candidate".into()))
}

/// A 0-rebalancing signature (untyped) built by closure: EOM and star-block
/// bases combined with tensor products and self-loops.
pub fn rebalancing_member<R: Rng>(rng: &mut R, max_arity: usize) -> Signature {
    let base = |rng: &mut R, n: usize| -> Signature {
        if n >= 4 && rng.gen_bool(0.5) {
            star_block(rng, (n - 2) / 2, Typing::P)
        } else {
            eom_member(rng, n / 2, None)
        }
    };
    loop {
        let n = 2 * rng.gen_range(1..=max_arity / 2);
        let mut f = base(rng, n);
        if f.arity() + 2 <= max_arity && rng.gen_bool(0.5) {
            let g = base(rng, 2);
            f = shuffle_vars(rng, &f.tensor(&g).expect("small"));
        }
        if f.arity() >= 4 && rng.gen_bool(0.4) {
            let x = rng.gen_range(1..=f.arity());
            let y = (x % f.arity()) + 1;
            f = f.self_loop(x, y).expect("valid indices");
        }
        if !f.is_zero() {
            return f;
        }
    }
}

/// Multiplies one nonzero value by 3, leaving the support unchanged.
pub fn perturb<R: Rng>(rng: &mut R, f: &Signature) -> Signature {
    let rows: Vec<_> = f.rows().map(|(a, v)| (a, v.clone())).collect();
    if rows.is_empty() {
        return f.clone();
    }
    let k = rng.gen_range(0..rows.len());
    let rows = rows.into_iter().enumerate().map(|(j, (a, v))| (a, if j == k { &v * &int(3) } else { v }));
    Signature::from_rows(f.arity(), rows).expect("same rows")
}

/// Assigns signatures from `pool` to `vertices` vertices and joins all slots
/// by a uniformly random perfect matching (self-loops and parallel edges allowed).
pub fn random_grid_from_pool<R: Rng>(rng: &mut R, pool: &[Signature], vertices: usize) -> Result<EOGrid> {
    if pool.is_empty() {
        return Err(Error::InvalidArgument("empty signature pool".into()));
    }
    let choice: Vec<usize> = (0..vertices).map(|_| rng.gen_range(0..pool.len())).collect();
    let mut slots: Vec<(usize, usize)> = Vec::new();
    for (v, &k) in choice.iter().enumerate() {
        slots.extend((1..=pool[k].arity()).map(|s| (v, s)));
    }
    if slots.len() % 2 == 1 {
        return Err(Error::InvalidArgument("odd total arity cannot be matched".into()));
    }
    slots.shuffle(rng);
    let edges = slots.chunks(2).map(|p| (p[0], p[1])).collect();
    let mut used: Vec<usize> = choice.clone();
    used.sort_unstable();
    used.dedup();
    let signatures = used.iter().map(|&k| (format!("s{k}"), pool[k].clone())).collect();
    let names = choice.iter().map(|k| format!("s{k}")).collect();
    EOGrid::new(signatures, names, edges)
}

/// Kinds of random grids used by the pipeline tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GridFamily {
    /// Pure-up signatures with a common typing.
    PureUp,
    /// 0-rebalancing signatures with a common typing.
    Rebalancing,
    /// EOM signatures with a common typing.
    Eom,
}

/// A grid of `1..=max_vertices` vertices over a small pool from `family`.
pub fn random_family_grid<R: Rng>(
    rng: &mut R,
    family: GridFamily,
    typing: Typing,
    max_vertices: usize,
    max_arity: usize,
) -> Result<EOGrid> {
    let pool_size = rng.gen_range(1..=3);
    let mut pool = Vec::with_capacity(pool_size);
    for _ in 0..pool_size {
        pool.push(match family {
            GridFamily::PureUp => pure_up_typed(rng, max_arity, typing)?,
            GridFamily::Rebalancing => rebalancing_typed(rng, max_arity, typing)?,
            GridFamily::Eom => loop {
                let f = { let h = rng.gen_range(1..=max_arity / 2); eom_member(rng, h, Some(typing)) };
                if !f.is_zero() {
                    break f;
                }
            },
        });
    }
    let vertices = rng.gen_range(1..=max_vertices);
    random_grid_from_pool(rng, &pool, vertices)
}

/// Signature sets for the four tractable arity-≤4 cases (`'a'..='d'`).
pub fn arity4_case<R: Rng>(rng: &mut R, case: char) -> Result<Vec<Signature>> {
    let (typing, dual) = match case {
        'a' => (Typing::P, false),
        'b' => (Typing::A, false),
        'c' => (Typing::P, true),
        'd' => (Typing::A, true),
        _ => return Err(Error::InvalidArgument(format!("arity-4 case {case:?}"))),
    };
    let mut set = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let half = rng.gen_range(1..=2);
        let f = loop {
            let f = eom_member(rng, half, Some(typing));
            if !f.is_zero() {
                break f;
            }
        };
        set.push(f);
    }
    let m = match typing {
        Typing::P => sixv(nonzero_value(rng), nonzero_value(rng), nonzero_value(rng)),
        Typing::A => {
            let s = nonzero_value(rng);
            sixv(&s * &i_power(rng), &s * &i_power(rng), &s * &i_power(rng))
        }
    };
    set.push(shuffle_vars(rng, &if dual { m.dual() } else { m }));
    Ok(set)
}

/// Named random families for the command line.
pub fn gen_random(family: &str, arity: usize, seed: u64) -> Result<Generated> {
    let mut r = rng(seed);
    let even = |n: usize| -> Result<usize> {
        if n % 2 == 1 || n == 0 {
            Err(Error::InvalidArgument(format!("{family} needs a positive even arity")))
        } else {
            Ok(n)
        }
    };
    if arity > 12 {
        return Err(Error::InvalidArgument(format!("random arity {arity} exceeds 12")));
    }
    let sig = |s: Signature| Ok(Generated::Signature(s));
    match family {
        "a-member" => sig(a_member(&mut r, arity)),
        "p-member" => sig(p_member(&mut r, arity)),
        "eom" => sig(eom_member(&mut r, even(arity)? / 2, None)),
        "eom-a" => sig(eom_member(&mut r, even(arity)? / 2, Some(Typing::A))),
        "eom-p" => sig(eom_member(&mut r, even(arity)? / 2, Some(Typing::P))),
        "pure-up-a" => sig(pure_up_typed(&mut r, even(arity)?, Typing::A)?),
        "pure-up-p" => sig(pure_up_typed(&mut r, even(arity)?, Typing::P)?),
        "rebalancing-a" => sig(rebalancing_typed(&mut r, even(arity)?, Typing::A)?),
        "rebalancing-p" => sig(rebalancing_typed(&mut r, even(arity)?, Typing::P)?),
        "adversarial" => {
            let base = a_member(&mut r, arity);
            sig(perturb(&mut r, &base))
        }
        "grid-pure-up-a" | "grid-pure-up-p" | "grid-rebalancing-a" | "grid-rebalancing-p" | "grid-eom-a"
        | "grid-eom-p" => {
            let typing = if family.ends_with("-a") { Typing::A } else { Typing::P };
            let kind = if family.contains("pure-up") {
                GridFamily::PureUp
            } else if family.contains("rebalancing") {
                GridFamily::Rebalancing
            } else {
                GridFamily::Eom
            };
            Ok(Generated::Grid(random_family_grid(&mut r, kind, typing, 6, even(arity)?)?))
        }
        _ => Err(Error::InvalidArgument(format!("unknown random family {family:?}"))),
    }
}
