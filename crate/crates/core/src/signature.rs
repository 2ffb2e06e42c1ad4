//! Signatures and the gadget calculus over binary disequality edges.
//!
//! A [`Signature`] stores only its nonzero rows, so sparse high-arity
//! signatures (support of a handful of strings over 40+ variables) and small
//! dense tables go through the same code. Variable indices are 1-based
//! throughout the public API.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::ExactComplex;
use crate::bits::{mask, BitString, MAX_WIDTH};
use crate::error::{Error, Result};

/// Arity limit for operations that materialize all `2^arity` inputs.
pub const DENSE_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    arity: usize,
    rows: BTreeMap<u64, ExactComplex>,
}

impl Signature {
    /// The zero signature of the given arity.
    pub fn zero(arity: usize) -> Result<Self> {
        if arity > MAX_WIDTH {
            return Err(Error::ArityTooLarge(arity));
        }
        Ok(Signature { arity, rows: BTreeMap::new() })
    }

    /// Arity-0 signature with the given value.
    pub fn constant(value: ExactComplex) -> Self {
        let mut rows = BTreeMap::new();
        if !value.is_zero() {
            rows.insert(0, value);
        }
        Signature { arity: 0, rows }
    }

    /// Builds from explicit rows; zero values are dropped, repeated strings rejected.
    pub fn from_rows<I>(arity: usize, rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BitString, ExactComplex)>,
    {
        let mut sig = Signature::zero(arity)?;
        for (alpha, value) in rows {
            if alpha.width() != arity {
                return Err(Error::WidthMismatch { expected: arity, found: alpha.width() });
            }
            if sig.rows.contains_key(&alpha.raw()) {
                return Err(Error::InvalidArgument(format!("row {alpha} given twice")));
            }
            if !value.is_zero() {
                sig.rows.insert(alpha.raw(), value);
            }
        }
        // a repeated zero row is harmless but still a malformed literal
        Ok(sig)
    }

    /// Rows given as `(bits literal, value)` pairs. Panics on malformed literals.
    pub fn from_literals(arity: usize, rows: &[(&str, ExactComplex)]) -> Self {
        Self::from_rows(arity, rows.iter().map(|(b, v)| (crate::bits::bs(b), v.clone())))
            .expect("valid signature literal")
    }

    /// Tabulates `f` over all `2^arity` inputs.
    pub fn from_fn(arity: usize, mut f: impl FnMut(BitString) -> ExactComplex) -> Result<Self> {
        if arity > DENSE_LIMIT {
            return Err(Error::ArityTooLarge(arity));
        }
        let mut rows = BTreeMap::new();
        for raw in 0..(1u64 << arity) {
            let v = f(BitString::from_raw(arity, raw));
            if !v.is_zero() {
                rows.insert(raw, v);
            }
        }
        Ok(Signature { arity, rows })
    }

    /// Symmetric signature `[f_0, …, f_r]`.
    pub fn symmetric(values: &[ExactComplex]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("symmetric signature needs at least one value".into()));
        }
        let arity = values.len() - 1;
        Self::from_fn(arity, |a| values[a.ones()].clone())
    }

    pub fn unary(w0: ExactComplex, w1: ExactComplex) -> Self {
        Self::symmetric(&[w0, w1]).expect("unary")
    }

    pub fn delta0() -> Self {
        Self::unary(ExactComplex::one(), ExactComplex::zero())
    }

    pub fn delta1() -> Self {
        Self::unary(ExactComplex::zero(), ExactComplex::one())
    }

    /// Equality `=_r`.
    pub fn eq(arity: usize) -> Result<Self> {
        let mut vals = vec![ExactComplex::zero(); arity + 1];
        vals[0] = ExactComplex::one();
        vals[arity] = ExactComplex::one();
        if arity > DENSE_LIMIT {
            return Self::from_rows(
                arity,
                [
                    (BitString::from_raw(arity, 0), ExactComplex::one()),
                    (BitString::from_raw(arity, mask(arity)), ExactComplex::one()),
                ],
            );
        }
        Self::symmetric(&vals)
    }

    /// Disequality `≠_{2d}`: one on `0^d 1^d` and `1^d 0^d`.
    pub fn neq(arity: usize) -> Result<Self> {
        Self::neq_weighted(arity, ExactComplex::one(), ExactComplex::one())
    }

    /// Generalized disequality `≠_{2d}^{a,b}`: `a` on `0^d 1^d`, `b` on `1^d 0^d`.
    pub fn neq_weighted(arity: usize, a: ExactComplex, b: ExactComplex) -> Result<Self> {
        if arity == 0 || arity % 2 == 1 {
            return Err(Error::InvalidArgument(format!("disequality needs positive even arity, got {arity}")));
        }
        if arity > MAX_WIDTH {
            return Err(Error::ArityTooLarge(arity));
        }
        let d = arity / 2;
        let high = mask(arity) & !mask(d);
        Self::from_rows(
            arity,
            [
                (BitString::from_raw(arity, high), a),
                (BitString::from_raw(arity, mask(d)), b),
            ],
        )
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.rows.len()
    }

    /// Nonzero rows in increasing raw order.
    pub fn rows(&self) -> impl Iterator<Item = (BitString, &ExactComplex)> + '_ {
        self.rows.iter().map(move |(&k, v)| (BitString::from_raw(self.arity, k), v))
    }

    pub fn support(&self) -> impl Iterator<Item = BitString> + '_ {
        self.rows.keys().map(move |&k| BitString::from_raw(self.arity, k))
    }

    pub(crate) fn raw_rows(&self) -> &BTreeMap<u64, ExactComplex> {
        &self.rows
    }

    pub(crate) fn from_raw_rows(arity: usize, rows: BTreeMap<u64, ExactComplex>) -> Self {
        debug_assert!(rows.values().all(|v| !v.is_zero()));
        Signature { arity, rows }
    }

    /// Table lookup `f(α)`.
    pub fn evaluate_at(&self, alpha: &BitString) -> Result<ExactComplex> {
        if alpha.width() != self.arity {
            return Err(Error::WidthMismatch { expected: self.arity, found: alpha.width() });
        }
        Ok(self.value_raw(alpha.raw()))
    }

    pub(crate) fn value_raw(&self, raw: u64) -> ExactComplex {
        self.rows.get(&raw).cloned().unwrap_or_default()
    }

    /// Value at arity 0 (the empty string).
    pub fn scalar_value(&self) -> Option<ExactComplex> {
        (self.arity == 0).then(|| self.value_raw(0))
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.arity {
            return Err(Error::IndexOutOfRange { index: i, arity: self.arity });
        }
        Ok(())
    }

    fn check_pair(&self, x: usize, y: usize) -> Result<()> {
        self.check_index(x)?;
        self.check_index(y)?;
        if x == y {
            return Err(Error::IndexCollision(x));
        }
        Ok(())
    }

    /// Every support string has as many ones as zeros.
    pub fn is_eo(&self) -> bool {
        self.support().all(|a| 2 * a.ones() == self.arity)
    }

    pub fn dual(&self) -> Signature {
        let m = mask(self.arity);
        let rows = self.rows.iter().map(|(&k, v)| (!k & m, v.clone())).collect();
        Signature { arity: self.arity, rows }
    }

    pub fn scale(&self, c: &ExactComplex) -> Signature {
        if c.is_zero() {
            return Signature { arity: self.arity, rows: BTreeMap::new() };
        }
        let rows = self.rows.iter().map(|(&k, v)| (k, v * c)).collect();
        Signature { arity: self.arity, rows }
    }

    /// `f ⊗ g` with `f` on the first slots.
    pub fn tensor(&self, g: &Signature) -> Result<Signature> {
        let arity = self.arity + g.arity;
        if arity > MAX_WIDTH {
            return Err(Error::ArityTooLarge(arity));
        }
        let mut rows = BTreeMap::new();
        for (&a, fa) in &self.rows {
            for (&b, gb) in &g.rows {
                rows.insert(a | (b << self.arity), fa * gb);
            }
        }
        Ok(Signature { arity, rows })
    }

    /// Connects `x` and `y` through `≠_2`: `f(…x=0…y=1…) + f(…x=1…y=0…)`.
    pub fn self_loop(&self, x: usize, y: usize) -> Result<Signature> {
        self.check_pair(x, y)?;
        let mut acc: BTreeMap<u64, ExactComplex> = BTreeMap::new();
        for (alpha, v) in self.rows() {
            if alpha.get(x) != alpha.get(y) {
                let key = alpha.remove(&[x, y]).raw();
                *acc.entry(key).or_default() += v;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(Signature { arity: self.arity - 2, rows: acc })
    }

    /// `f^{x=1,y=0}`: keep rows with `x = 1` and `y = 0`, then drop both coordinates.
    pub fn pin_pair(&self, x: usize, y: usize) -> Result<Signature> {
        self.check_pair(x, y)?;
        let rows = self
            .rows()
            .filter(|(a, _)| a.get(x) && !a.get(y))
            .map(|(a, v)| (a.remove(&[x, y]).raw(), v.clone()))
            .collect();
        Ok(Signature { arity: self.arity - 2, rows })
    }

    /// Multiplies by the indicator `[α_p ≠ α_q]`.
    pub fn restrict_unequal(&self, p: usize, q: usize) -> Result<Signature> {
        self.check_pair(p, q)?;
        Ok(self.retain(|a| a.get(p) != a.get(q)))
    }

    /// Multiplies by the indicator `[α_x = value]`.
    pub fn restrict_value(&self, x: usize, value: bool) -> Result<Signature> {
        self.check_index(x)?;
        Ok(self.retain(|a| a.get(x) == value))
    }

    /// `f|_{EOM[P]}`: restrict to strings unequal on every pair of `P`.
    pub fn restrict_pairing(&self, pairing: &Pairing) -> Result<Signature> {
        if pairing.arity() != self.arity {
            return Err(Error::MalformedPairing(format!(
                "pairing covers {} variables, signature has {}",
                pairing.arity(),
                self.arity
            )));
        }
        Ok(self.retain(|a| pairing.admits(&a)))
    }

    /// Keeps the rows whose string satisfies `keep`.
    pub fn retain(&self, mut keep: impl FnMut(BitString) -> bool) -> Signature {
        let rows = self
            .rows
            .iter()
            .filter(|(&k, _)| keep(BitString::from_raw(self.arity, k)))
            .map(|(&k, v)| (k, v.clone()))
            .collect();
        Signature { arity: self.arity, rows }
    }

    /// Reorders variables: new variable `k` (1-based) is old variable `order[k-1]`.
    pub fn permute(&self, order: &[usize]) -> Result<Signature> {
        if order.len() != self.arity {
            return Err(Error::WidthMismatch { expected: self.arity, found: order.len() });
        }
        let mut seen = vec![false; self.arity + 1];
        for &i in order {
            self.check_index(i)?;
            if std::mem::replace(&mut seen[i], true) {
                return Err(Error::IndexCollision(i));
            }
        }
        let rows = self.rows().map(|(a, v)| (a.select(order).raw(), v.clone())).collect();
        Ok(Signature { arity: self.arity, rows })
    }

    /// Gadget of `f` and `g` with `f`'s variable `i` wired to `g`'s variable `j`
    /// through `≠_2` for every `(i, j)` in `pairs`. The result's variables are
    /// the unmatched ones of `f` in ascending order followed by those of `g`.
    pub fn connect(&self, g: &Signature, pairs: &[(usize, usize)]) -> Result<Signature> {
        let mut fs = Vec::with_capacity(pairs.len());
        let mut gs = Vec::with_capacity(pairs.len());
        for &(i, j) in pairs {
            self.check_index(i)?;
            g.check_index(j)?;
            if fs.contains(&i) {
                return Err(Error::IndexCollision(i));
            }
            if gs.contains(&j) {
                return Err(Error::IndexCollision(j));
            }
            fs.push(i);
            gs.push(j);
        }
        let left = self.arity - fs.len();
        let arity = left + g.arity - gs.len();
        if arity > MAX_WIDTH {
            return Err(Error::ArityTooLarge(arity));
        }
        let mut acc: BTreeMap<u64, ExactComplex> = BTreeMap::new();
        for (a, fa) in self.rows() {
            let a_in = a.select(&fs).raw();
            let a_out = a.remove(&fs).raw();
            for (b, gb) in g.rows() {
                // every internal edge carries ≠_2
                if a_in != !b.select(&gs).raw() & mask(gs.len()) {
                    continue;
                }
                let key = a_out | (b.remove(&gs).raw() << left);
                *acc.entry(key).or_default() += &(fa * gb);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(Signature { arity, rows: acc })
    }

    /// Dense matrix form: rows indexed by `row_vars` (first listed is most
    /// significant), columns by the remaining variables in ascending order.
    pub fn signature_matrix(&self, row_vars: &[usize]) -> Result<Vec<Vec<ExactComplex>>> {
        if self.arity > DENSE_LIMIT {
            return Err(Error::ArityTooLarge(self.arity));
        }
        for (k, &i) in row_vars.iter().enumerate() {
            self.check_index(i)?;
            if row_vars[..k].contains(&i) {
                return Err(Error::IndexCollision(i));
            }
        }
        let col_vars: Vec<usize> = (1..=self.arity).filter(|i| !row_vars.contains(i)).collect();
        let nr = 1usize << row_vars.len();
        let nc = 1usize << col_vars.len();
        let mut m = vec![vec![ExactComplex::zero(); nc]; nr];
        for (a, v) in self.rows() {
            m[msb_index(&a, row_vars)][msb_index(&a, &col_vars)] = v.clone();
        }
        Ok(m)
    }
}

/// Index of the sub-string on `vars`, reading the first variable as the most significant bit.
pub(crate) fn msb_index(a: &BitString, vars: &[usize]) -> usize {
    vars.iter().fold(0usize, |acc, &i| (acc << 1) | a.get(i) as usize)
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "arity {} {{", self.arity)?;
        for (k, (a, v)) in self.rows().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, " {a}: {v}")?;
        }
        f.write_str(" }")
    }
}

/// A perfect partition of `{1..2d}` into unordered pairs, stored as sorted `(i, j)` with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, usize)>", into = "Vec<(usize, usize)>")]
pub struct Pairing {
    pairs: Vec<(usize, usize)>,
}

impl Pairing {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let arity = pairs.len() * 2;
        let mut seen = vec![false; arity + 1];
        let mut norm = Vec::with_capacity(pairs.len());
        for (a, b) in pairs {
            for v in [a, b] {
                if v == 0 || v > arity {
                    return Err(Error::MalformedPairing(format!("index {v} outside 1..={arity}")));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::MalformedPairing(format!("index {v} appears twice")));
                }
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        Ok(Pairing { pairs: norm })
    }

    /// `{{1,2},{3,4},…}`.
    pub fn canonical(half_arity: usize) -> Self {
        Pairing { pairs: (0..half_arity).map(|k| (2 * k + 1, 2 * k + 2)).collect() }
    }

    pub fn arity(&self) -> usize {
        self.pairs.len() * 2
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn partner(&self, x: usize) -> Option<usize> {
        self.pairs.iter().find_map(|&(a, b)| {
            if a == x {
                Some(b)
            } else if b == x {
                Some(a)
            } else {
                None
            }
        })
    }

    /// `α ∈ EOM[P]`.
    pub fn admits(&self, alpha: &BitString) -> bool {
        self.pairs.iter().all(|&(a, b)| alpha.get(a) != alpha.get(b))
    }
}

impl TryFrom<Vec<(usize, usize)>> for Pairing {
    type Error = Error;
    fn try_from(v: Vec<(usize, usize)>) -> Result<Self> {
        Pairing::new(v)
    }
}

impl From<Pairing> for Vec<(usize, usize)> {
    fn from(p: Pairing) -> Self {
        p.pairs
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (a, b)) in self.pairs.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{{{a},{b}}}")?;
        }
        f.write_str("}")
    }
}
