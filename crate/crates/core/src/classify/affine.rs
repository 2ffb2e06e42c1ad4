use serde::Serialize;

use crate::arith::ExactComplex;
use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::signature::Signature;

/// Largest dimension whose points [`AffineSpace::points`] will enumerate.
pub const ENUMERATION_CAP: usize = 20;

/// An affine subspace `offset + span(basis)` of `F_2^width`.
///
/// The basis is kept in reduced echelon form: basis vector `j` has pivot
/// `pivots[j]` (its highest variable index), and no other basis vector has
/// that bit set. A point is therefore determined by its values at the pivots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AffineSpace {
    width: usize,
    offset: BitString,
    basis: Vec<BitString>,
    #[serde(skip)]
    base: u64,
    #[serde(skip)]
    pivots: Vec<usize>,
}

fn top_bit(v: u64) -> usize {
    63 - v.leading_zeros() as usize
}

impl AffineSpace {
    /// The minimal affine subspace containing every string of `set`.
    /// The offset is the first string produced by the iterator.
    pub fn span<I: IntoIterator<Item = BitString>>(set: I) -> Result<Self> {
        let mut it = set.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::InvalidArgument("affine span of an empty set".into()))?;
        let width = first.width();
        let mut rows: Vec<u64> = Vec::new();
        for a in it {
            if a.width() != width {
                return Err(Error::WidthMismatch { expected: width, found: a.width() });
            }
            insert_reduced(&mut rows, a.raw() ^ first.raw());
        }
        Ok(Self::from_parts(width, first, rows))
    }

    /// The whole space `F_2^width`.
    pub fn full(width: usize) -> Result<Self> {
        let zero = BitString::zeros(width)?;
        let rows = (0..width).map(|k| 1u64 << k).collect();
        Ok(Self::from_parts(width, zero, rows))
    }

    fn from_parts(width: usize, offset: BitString, mut rows: Vec<u64>) -> Self {
        rows.sort_unstable_by(|a, b| b.cmp(a));
        let pivots: Vec<usize> = rows.iter().map(|&r| top_bit(r) + 1).collect();
        let mut base = offset.raw();
        for &r in &rows {
            if base >> top_bit(r) & 1 == 1 {
                base ^= r;
            }
        }
        AffineSpace {
            width,
            offset,
            basis: rows.into_iter().map(|r| BitString::from_raw(width, r)).collect(),
            base,
            pivots,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn offset(&self) -> BitString {
        self.offset
    }

    pub fn basis(&self) -> &[BitString] {
        &self.basis
    }

    /// Pivot variable (1-based) of each basis vector; these are the free coordinates.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Number of points, if it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        1u64.checked_shl(self.dim() as u32)
    }

    pub fn contains(&self, a: &BitString) -> bool {
        a.width() == self.width && self.coordinates(a).is_some()
    }

    /// Free-coordinate vector `t` (bit `j` is the value at `pivots[j]`) of a member.
    pub fn coordinates(&self, a: &BitString) -> Option<u64> {
        let mut rest = a.raw() ^ self.base;
        let mut t = 0u64;
        for (j, b) in self.basis.iter().enumerate() {
            if rest >> (self.pivots[j] - 1) & 1 == 1 {
                rest ^= b.raw();
                t |= 1 << j;
            }
        }
        (rest == 0).then_some(t)
    }

    /// The point with free coordinates `t`.
    pub fn point(&self, t: u64) -> BitString {
        let mut v = self.base;
        for (j, b) in self.basis.iter().enumerate() {
            if t >> j & 1 == 1 {
                v ^= b.raw();
            }
        }
        BitString::from_raw(self.width, v)
    }

    /// All points, ordered by free coordinates. Refuses above [`ENUMERATION_CAP`].
    pub fn points(&self) -> Result<impl Iterator<Item = BitString> + '_> {
        if self.dim() > ENUMERATION_CAP {
            return Err(Error::Refused(format!(
                "undecided: span of dimension {} is too large to enumerate",
                self.dim()
            )));
        }
        Ok((0..1u64 << self.dim()).map(move |t| self.point(t)))
    }
}

fn insert_reduced(rows: &mut Vec<u64>, mut v: u64) {
    for &r in rows.iter() {
        if v >> top_bit(r) & 1 == 1 {
            v ^= r;
        }
    }
    if v == 0 {
        return;
    }
    let p = top_bit(v);
    for r in rows.iter_mut() {
        if *r >> p & 1 == 1 {
            *r ^= v;
        }
    }
    rows.push(v);
}

pub fn affine_span<I: IntoIterator<Item = BitString>>(set: I) -> Result<AffineSpace> {
    AffineSpace::span(set)
}

/// Phase polynomial over `Z_4` in the free coordinates of a support space:
/// `constant + Σ linear[j] t_j + Σ 2 t_j t_k` over `quadratic`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Z4Phase {
    pub constant: u8,
    pub linear: Vec<u8>,
    /// Pairs `(j, k)`, `j < k`, whose coefficient is 2.
    pub quadratic: Vec<(usize, usize)>,
}

impl Z4Phase {
    pub fn eval(&self, t: u64) -> u8 {
        let mut e = self.constant as u32;
        for (j, &l) in self.linear.iter().enumerate() {
            if t >> j & 1 == 1 {
                e += l as u32;
            }
        }
        for &(j, k) in &self.quadratic {
            if t >> j & 1 == 1 && t >> k & 1 == 1 {
                e += 2;
            }
        }
        (e % 4) as u8
    }
}

/// Certificate that a signature is `λ · χ_support · i^phase`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AWitness {
    pub scalar: ExactComplex,
    pub support: AffineSpace,
    pub phase: Z4Phase,
}

impl AWitness {
    /// Rebuilds the table the witness describes.
    pub fn reconstruct(&self) -> Result<Signature> {
        let width = self.support.width();
        if self.scalar.is_zero() {
            return Signature::zero(width);
        }
        let rows = self
            .support
            .points()?
            .enumerate()
            .map(|(t, p)| (p, self.scalar.mul_i_pow(self.phase.eval(t as u64) as i64)));
        Signature::from_rows(width, rows)
    }
}

/// Membership in the affine family, with a witness.
pub fn membership_a(f: &Signature) -> Option<AWitness> {
    if f.is_zero() {
        let support = AffineSpace::full(f.arity()).ok()?;
        let linear = vec![0; support.dim()];
        return Some(AWitness {
            scalar: ExactComplex::zero(),
            support,
            phase: Z4Phase { constant: 0, linear, quadratic: Vec::new() },
        });
    }
    let space = AffineSpace::span(f.support()).ok()?;
    let dim = space.dim();
    if dim > ENUMERATION_CAP || (f.support_size() as u64) != 1u64 << dim {
        return None;
    }
    let scalar = f.value_raw(space.point(0).raw());
    let inv = scalar.inverse().ok()?;
    let n = 1usize << dim;
    let mut e = vec![0u8; n];
    for (t, slot) in e.iter_mut().enumerate() {
        let v = f.value_raw(space.point(t as u64).raw());
        *slot = (&v * &inv).i_exponent()?;
    }
    // Möbius transform over Z_4: e[T] becomes the coefficient of Π_{j∈T} t_j
    for j in 0..dim {
        for t in 0..n {
            if t >> j & 1 == 1 {
                e[t] = (e[t] + 4 - e[t ^ (1 << j)]) % 4;
            }
        }
    }
    let mut linear = vec![0u8; dim];
    let mut quadratic = Vec::new();
    for (t, &c) in e.iter().enumerate() {
        match t.count_ones() {
            0 => debug_assert_eq!(c, 0),
            1 => linear[t.trailing_zeros() as usize] = c,
            2 if c == 0 => {}
            2 if c == 2 => {
                let j = t.trailing_zeros() as usize;
                let k = (t & !(1 << j)).trailing_zeros() as usize;
                quadratic.push((j, k));
            }
            _ if c == 0 => {}
            _ => return None,
        }
    }
    Some(AWitness { scalar, support: space, phase: Z4Phase { constant: 0, linear, quadratic } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bs;

    fn c(n: i64) -> ExactComplex {
        ExactComplex::from_int(n)
    }

    #[test]
    fn span_examples() {
        let s = affine_span([bs("1100"), bs("1010"), bs("1001")]).unwrap();
        assert_eq!(s.size(), Some(4));
        let pts: Vec<String> = s.points().unwrap().map(|p| p.to_string()).collect();
        for want in ["1100", "1010", "1001", "1111"] {
            assert!(pts.contains(&want.to_string()));
        }
        assert_eq!(affine_span([bs("0110")]).unwrap().dim(), 0);
        let s = affine_span([bs("1100"), bs("0011")]).unwrap();
        assert_eq!(s.offset(), bs("1100"));
        assert_eq!(s.basis(), &[bs("1111")]);
        assert!(affine_span(Vec::<BitString>::new()).is_err());
        assert!(affine_span([bs("10"), bs("100")]).is_err());
    }

    #[test]
    fn coordinates_round_trip() {
        let s = affine_span([bs("110010"), bs("011001"), bs("000111"), bs("110010")]).unwrap();
        for t in 0..(1u64 << s.dim()) {
            assert_eq!(s.coordinates(&s.point(t)), Some(t));
        }
        assert_eq!(s.dim(), 2);
        assert!(s.contains(&bs("011110") .xor(&bs("110010"))));
        assert!(!s.contains(&bs("111111")));
    }

    #[test]
    fn membership_a_examples() {
        let neq2 = Signature::neq(2).unwrap();
        let w = membership_a(&neq2).unwrap();
        assert_eq!(w.scalar, c(1));
        assert_eq!(w.support.dim(), 1);
        assert_eq!(w.phase.linear, vec![0]);
        assert_eq!(w.reconstruct().unwrap(), neq2);

        let weighted = Signature::neq_weighted(2, c(1), c(2)).unwrap();
        assert!(membership_a(&weighted).is_none());

        let (a, b) = (c(1), c(1));
        let m = Signature::from_literals(
            4,
            &[("0101", c(1)), ("0110", a.clone()), ("1001", b.clone()), ("1010", -(&a * &b))],
        );
        let w = membership_a(&m).unwrap();
        assert_eq!(w.reconstruct().unwrap(), m);
        assert_eq!(w.phase.quadratic.len(), 1);
    }

    #[test]
    fn non_affine_and_bad_phase() {
        let q = Signature::from_literals(4, &[("1100", c(1)), ("1010", c(1)), ("1001", c(1))]);
        assert!(membership_a(&q).is_none());
        // i^{t1 t2} has an odd cross term
        let odd = Signature::from_literals(
            4,
            &[("0101", c(1)), ("0110", c(1)), ("1001", c(1)), ("1010", ExactComplex::i())],
        );
        assert!(membership_a(&odd).is_none());
        let z = Signature::zero(6).unwrap();
        assert_eq!(membership_a(&z).unwrap().reconstruct().unwrap(), z);
        let k = Signature::constant(c(5));
        assert_eq!(membership_a(&k).unwrap().reconstruct().unwrap(), k);
    }
}
