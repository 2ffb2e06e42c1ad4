//! Named signatures and grids.
//!
//! | name | params | result |
//! |------|--------|--------|
//! | `f40` | | arity 40, rows `[H2 H2 H2 H4 H4]`: EO, not pure, 0-rebalancing |
//! | `f56` | | arity 56, rows `[H0 H2 H2 H2 H2 H4 H4 H4]`: EO, rebalancing for neither bit |
//! | `neq` | `2d` | `≠_{2d}`: EOM, in both families, both bits rebalancing |
//! | `neq-weighted` | `2d a b` | `a` on `0^d1^d`, `b` on `1^d0^d` |
//! | `eq` | `r` | `=_r` (not EO for `r > 0`) |
//! | `sixv` | `a b c` | `1001↦a, 1010↦b, 1100↦c`: pure-up, EOM[𝒫]-typed |
//! | `sixv-dual` | `a b c` | the dual of `sixv`: pure-down |
//! | `aff4` | `a b` | `0101↦1, 0110↦a, 1001↦b, 1010↦-ab`: affine, not product when `ab ≠ 0` |
//! | `unary` | `w0 w1` | `[w0, w1]` |
//! | `delta0`, `delta1` | | the pinning unaries |
//! | `delta-pair` | | `Δ1 ⊗ Δ0` (only `10`) |
//! | `two-vertex-grid` | `name params…` | two copies of a builtin signature joined slot `i` to slot `i` |
//!
//! Values are a single rational (`3`, `-1/2`), `i`, `-i`, a Gaussian pair
//! `re,im`, or the full four-rational form `a,b,c,d`.

use super::{EOGrid, GridBuilder};
use crate::arith::{parse_rational, ExactComplex};
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::signature::Signature;

pub const H0: [&str; 5] = ["0", "0", "0", "0", "0"];
pub const H2: [&str; 5] = ["1111000000", "1000111000", "0100100110", "0010010101", "0001001011"];
pub const H4: [&str; 5] = ["01111", "10111", "11011", "11101", "11110"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    H0,
    H2,
    H4,
}

impl Block {
    pub fn rows(self) -> [&'static str; 5] {
        match self {
            Block::H0 => H0,
            Block::H2 => H2,
            Block::H4 => H4,
        }
    }
}

/// Column blocks of a five-row 0/1 support matrix, each repeated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportMatrixSpec {
    pub blocks: Vec<(Block, usize)>,
}

impl SupportMatrixSpec {
    /// The five rows as strings.
    pub fn rows(&self) -> Vec<String> {
        (0..5)
            .map(|r| {
                self.blocks
                    .iter()
                    .flat_map(|&(b, k)| std::iter::repeat(b.rows()[r]).take(k))
                    .collect::<String>()
            })
            .collect()
    }

    /// The 0/1-valued signature supported on the rows.
    pub fn signature(&self) -> Result<Signature> {
        let rows = self.rows();
        let arity = rows[0].len();
        let parsed: Result<Vec<(BitString, ExactComplex)>> =
            rows.iter().map(|r| Ok((r.parse::<BitString>()?, ExactComplex::one()))).collect();
        Signature::from_rows(arity, parsed?)
    }
}

pub fn f40_spec() -> SupportMatrixSpec {
    SupportMatrixSpec { blocks: vec![(Block::H2, 3), (Block::H4, 2)] }
}

pub fn f56_spec() -> SupportMatrixSpec {
    SupportMatrixSpec { blocks: vec![(Block::H0, 1), (Block::H2, 4), (Block::H4, 3)] }
}

pub fn f40() -> Signature {
    f40_spec().signature().expect("f40 is well formed")
}

pub fn f56() -> Signature {
    f56_spec().signature().expect("f56 is well formed")
}

/// `1001 ↦ a, 1010 ↦ b, 1100 ↦ c`.
pub fn sixv(a: ExactComplex, b: ExactComplex, c: ExactComplex) -> Signature {
    Signature::from_literals(4, &[("1001", a), ("1010", b), ("1100", c)])
}

/// `0101 ↦ 1, 0110 ↦ a, 1001 ↦ b, 1010 ↦ -ab`.
pub fn aff4(a: ExactComplex, b: ExactComplex) -> Signature {
    let ab = -(&a * &b);
    Signature::from_literals(4, &[("0101", ExactComplex::one()), ("0110", a), ("1001", b), ("1010", ab)])
}

/// Two copies of `f` with slot `i` of one joined to slot `i` of the other.
pub fn two_vertex_grid(name: &str, f: &Signature) -> Result<EOGrid> {
    let mut b = GridBuilder::new().signature(name, f.clone()).vertices(name, 2);
    for s in 1..=f.arity() {
        b = b.edge((0, s), (1, s));
    }
    b.build()
}

/// Parses a builtin parameter value.
pub fn parse_value(text: &str) -> Result<ExactComplex> {
    match text.trim() {
        "i" => return Ok(ExactComplex::i()),
        "-i" => return Ok(-ExactComplex::i()),
        _ => {}
    }
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let q = |s: &str| parse_rational(s);
    match parts.len() {
        1 => Ok(ExactComplex::from_rational(q(parts[0])?)),
        2 => Ok(ExactComplex::new(q(parts[0])?, num_traits::Zero::zero(), q(parts[1])?, num_traits::Zero::zero())),
        4 => Ok(ExactComplex::new(q(parts[0])?, q(parts[1])?, q(parts[2])?, q(parts[3])?)),
        n => Err(Error::Parse(format!("value {text:?} has {n} comma-separated fields"))),
    }
}

fn parse_usize(text: &str) -> Result<usize> {
    text.parse().map_err(|_| Error::Parse(format!("expected a non-negative integer, found {text:?}")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generated {
    Signature(Signature),
    Grid(EOGrid),
}

fn expect_params(name: &str, params: &[String], n: usize) -> Result<()> {
    if params.len() != n {
        return Err(Error::InvalidArgument(format!("{name} takes {n} parameters, got {}", params.len())));
    }
    Ok(())
}

/// Builds the builtin `name` from textual parameters.
pub fn gen_builtin(name: &str, params: &[String]) -> Result<Generated> {
    let sig = |s: Signature| Ok(Generated::Signature(s));
    let v = |k: usize| parse_value(&params[k]);
    match name {
        "f40" | "f56" | "delta0" | "delta1" | "delta-pair" => {
            expect_params(name, params, 0)?;
            sig(match name {
                "f40" => f40(),
                "f56" => f56(),
                "delta0" => Signature::delta0(),
                "delta1" => Signature::delta1(),
                _ => Signature::delta1().tensor(&Signature::delta0())?,
            })
        }
        "neq" => {
            expect_params(name, params, 1)?;
            sig(Signature::neq(parse_usize(&params[0])?)?)
        }
        "eq" => {
            expect_params(name, params, 1)?;
            sig(Signature::eq(parse_usize(&params[0])?)?)
        }
        "neq-weighted" => {
            expect_params(name, params, 3)?;
            sig(Signature::neq_weighted(parse_usize(&params[0])?, v(1)?, v(2)?)?)
        }
        "sixv" | "sixv-dual" => {
            expect_params(name, params, 3)?;
            let f = sixv(v(0)?, v(1)?, v(2)?);
            sig(if name == "sixv" { f } else { f.dual() })
        }
        "aff4" => {
            expect_params(name, params, 2)?;
            sig(aff4(v(0)?, v(1)?))
        }
        "unary" => {
            expect_params(name, params, 2)?;
            sig(Signature::unary(v(0)?, v(1)?))
        }
        "two-vertex-grid" => {
            let (inner, rest) = params
                .split_first()
                .ok_or_else(|| Error::InvalidArgument("two-vertex-grid needs a signature name".into()))?;
            match gen_builtin(inner, rest)? {
                Generated::Signature(f) => Ok(Generated::Grid(two_vertex_grid(inner, &f)?)),
                Generated::Grid(_) => Err(Error::InvalidArgument(format!("{inner} is not a signature"))),
            }
        }
        _ => Err(Error::InvalidArgument(format!("unknown builtin {name:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_int(n)
    }

    fn strings(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn f40_rows() {
        let f = f40();
        assert_eq!(f.arity(), 40);
        assert_eq!(f.support_size(), 5);
        assert!(f.support().all(|a| a.ones() == 20));
        let rows = f40_spec().rows();
        assert_eq!(&rows[0][..10], "1111000000");
        assert_eq!(&rows[0][30..], "0111101111");
        for r in &rows {
            assert!(f.evaluate_at(&r.parse().unwrap()).unwrap().is_one());
        }
    }

    #[test]
    fn f56_rows() {
        let f = f56();
        assert_eq!(f.arity(), 56);
        assert_eq!(f.support_size(), 5);
        assert!(f.support().all(|a| a.ones() == 28 && !a.get(1)));
    }

    #[test]
    fn params() {
        assert_eq!(gen_builtin("neq", &strings(&["4"])).unwrap(), Generated::Signature(Signature::neq(4).unwrap()));
        let Generated::Signature(s) = gen_builtin("sixv", &strings(&["1", "i", "-1"])).unwrap() else { panic!() };
        assert_eq!(s.evaluate_at(&"1010".parse().unwrap()).unwrap(), ExactComplex::i());
        let Generated::Grid(g) = gen_builtin("two-vertex-grid", &strings(&["neq", "4"])).unwrap() else { panic!() };
        assert_eq!(g.edges().len(), 4);
        assert!(gen_builtin("nope", &[]).is_err());
        assert!(gen_builtin("neq", &[]).is_err());
        assert_eq!(parse_value("1/2,3").unwrap(), ExactComplex::new(
            parse_rational("1/2").unwrap(), parse_rational("0").unwrap(), parse_rational("3").unwrap(), parse_rational("0").unwrap()));
        assert_eq!(parse_value("-2").unwrap(), c(-2));
    }
}
