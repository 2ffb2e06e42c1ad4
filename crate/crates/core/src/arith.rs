//! Exact arithmetic in Q(i, √2).
//!
//! An [`ExactComplex`] is `a + b√2 + (c + d√2)i` with rational coordinates.
//! The four coordinates form a basis of the field over Q, so derived equality
//! on reduced rationals is equality of field elements.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = BigRational;

/// Parses `p` or `p/q` into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, d),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("malformed rational numerator in {text:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("malformed rational denominator in {text:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {text:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Canonical text of a rational: `p` when the denominator is one, else `p/q`.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Element `r + s√2` of Q(√2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Surd {
    r: Rational,
    s: Rational,
}

impl Surd {
    fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    fn add(&self, o: &Surd) -> Surd {
        Surd { r: &self.r + &o.r, s: &self.s + &o.s }
    }

    fn sub(&self, o: &Surd) -> Surd {
        Surd { r: &self.r - &o.r, s: &self.s - &o.s }
    }

    fn mul(&self, o: &Surd) -> Surd {
        let two = Rational::from_integer(BigInt::from(2));
        Surd {
            r: &self.r * &o.r + two * &self.s * &o.s,
            s: &self.r * &o.s + &self.s * &o.r,
        }
    }

    fn neg(&self) -> Surd {
        Surd { r: -&self.r, s: -&self.s }
    }

    // (r + s√2)^-1 = (r - s√2) / (r² - 2s²); the norm is nonzero since √2 is irrational.
    fn inv(&self) -> Option<Surd> {
        if self.is_zero() {
            return None;
        }
        let two = Rational::from_integer(BigInt::from(2));
        let norm = &self.r * &self.r - two * &self.s * &self.s;
        Some(Surd { r: &self.r / &norm, s: -&self.s / &norm })
    }
}

/// Exact element of Q(i, √2): `a + b√2 + (c + d√2)i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactComplex {
    re: Surd,
    im: Surd,
}

impl ExactComplex {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        ExactComplex { re: Surd { r: a, s: b }, im: Surd { r: c, s: d } }
    }

    pub fn from_int(n: i64) -> Self {
        Self::gaussian(n, 0)
    }

    /// `re + im·i` with integer parts.
    pub fn gaussian(re: i64, im: i64) -> Self {
        let z = Rational::zero();
        ExactComplex::new(
            Rational::from_integer(re.into()),
            z.clone(),
            Rational::from_integer(im.into()),
            z,
        )
    }

    pub fn from_rational(q: Rational) -> Self {
        ExactComplex::new(q, Rational::zero(), Rational::zero(), Rational::zero())
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        Self::gaussian(0, 1)
    }

    pub fn sqrt2() -> Self {
        let z = Rational::zero();
        ExactComplex::new(z.clone(), Rational::one(), z.clone(), z)
    }

    pub fn a(&self) -> &Rational {
        &self.re.r
    }

    pub fn b(&self) -> &Rational {
        &self.re.s
    }

    pub fn c(&self) -> &Rational {
        &self.im.r
    }

    pub fn d(&self) -> &Rational {
        &self.im.s
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    pub fn conj(&self) -> Self {
        ExactComplex { re: self.re.clone(), im: self.im.neg() }
    }

    /// `i^k` for any integer `k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::gaussian(1, 0),
            1 => Self::gaussian(0, 1),
            2 => Self::gaussian(-1, 0),
            _ => Self::gaussian(0, -1),
        }
    }

    /// If `self` is one of `1, i, -1, -i`, returns its exponent `k` with `self = i^k`.
    pub fn i_exponent(&self) -> Option<u8> {
        (0..4u8).find(|&k| *self == Self::i_pow(k as i64))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.inverse()?)
    }

    pub fn inverse(&self) -> Result<Self> {
        // 1/(p + qi) = (p - qi)/(p² + q²), with p² + q² ∈ Q(√2) nonzero.
        let norm = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        let inv = norm.inv().ok_or(Error::DivisionByZero)?;
        Ok(ExactComplex { re: self.re.mul(&inv), im: self.im.neg().mul(&inv) })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplies by `i^k`.
    pub fn mul_i_pow(&self, k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => self.clone(),
            1 => ExactComplex { re: self.im.neg(), im: self.re.clone() },
            2 => -self,
            _ => ExactComplex { re: self.im.clone(), im: self.re.neg() },
        }
    }
}

/// `2^(half_powers_of_two/2) · ω^(omega_exponent mod 8)` with `ω = (√2/2)(1+i)`.
pub fn scaled_phase(half_powers_of_two: i64, omega_exponent: i64) -> ExactComplex {
    let k = half_powers_of_two;
    let whole = k.div_euclid(2);
    let magnitude = if whole >= 0 {
        Rational::from_integer(num_traits::pow(BigInt::from(2), whole as usize))
    } else {
        Rational::one() / Rational::from_integer(num_traits::pow(BigInt::from(2), (-whole) as usize))
    };
    let odd = k.rem_euclid(2) == 1;

    let e = omega_exponent.rem_euclid(8);
    // Even powers of ω are powers of i; odd ones carry a factor √2/2.
    let mut value = if e % 2 == 0 {
        ExactComplex::i_pow(e / 2)
    } else {
        let half = Rational::new(BigInt::from(1), BigInt::from(2));
        let z = Rational::zero();
        let omega = ExactComplex::new(z.clone(), half.clone(), z, half);
        omega.mul_i_pow((e - 1) / 2)
    };
    if odd {
        value = &value * &ExactComplex::sqrt2();
    }
    if !magnitude.is_one() {
        value = &value * &ExactComplex::from_rational(magnitude);
    }
    value
}

impl Default for ExactComplex {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a> Add<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn add(self, o: &ExactComplex) -> ExactComplex {
        ExactComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
}

impl<'a> Sub<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn sub(self, o: &ExactComplex) -> ExactComplex {
        ExactComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
}

impl<'a> Mul<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn mul(self, o: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex { re: self.re.neg(), im: self.im.neg() }
    }
}

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, o: ExactComplex) -> ExactComplex {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a ExactComplex> for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, o: &ExactComplex) -> ExactComplex {
                (&self).$m(o)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&ExactComplex> for ExactComplex {
    fn add_assign(&mut self, o: &ExactComplex) {
        *self = &*self + o;
    }
}

impl SubAssign<&ExactComplex> for ExactComplex {
    fn sub_assign(&mut self, o: &ExactComplex) {
        *self = &*self - o;
    }
}

impl MulAssign<&ExactComplex> for ExactComplex {
    fn mul_assign(&mut self, o: &ExactComplex) {
        *self = &*self * o;
    }
}

impl Sum for ExactComplex {
    fn sum<I: Iterator<Item = ExactComplex>>(iter: I) -> Self {
        iter.fold(ExactComplex::zero(), |acc, x| &acc + &x)
    }
}

impl Product for ExactComplex {
    fn product<I: Iterator<Item = ExactComplex>>(iter: I) -> Self {
        iter.fold(ExactComplex::one(), |acc, x| &acc * &x)
    }
}

impl From<i64> for ExactComplex {
    fn from(n: i64) -> Self {
        ExactComplex::from_int(n)
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {}",
            format_rational(self.a()),
            format_rational(self.b()),
            format_rational(self.c()),
            format_rational(self.d())
        )
    }
}

impl FromStr for ExactComplex {
    type Err = Error;

    /// Parses the four-rational form `a b c d`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "expected four rationals \"a b c d\", found {} fields in {s:?}",
                parts.len()
            )));
        }
        Ok(ExactComplex::new(
            parse_rational(parts[0])?,
            parse_rational(parts[1])?,
            parse_rational(parts[2])?,
            parse_rational(parts[3])?,
        ))
    }
}

impl Serialize for ExactComplex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactComplex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(d)? {
            Repr::Text(t) => t.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => Ok(ExactComplex::from_int(n)),
        }
    }
}

/// Signed integer test used by generators and the CLI: true when the value is
/// a nonnegative rational with no radical or imaginary part.
pub fn is_nonnegative_rational(x: &ExactComplex) -> bool {
    x.b().is_zero() && x.c().is_zero() && x.d().is_zero() && !x.a().is_negative()
}
