use std::collections::BTreeMap;

use super::EOGrid;
use crate::bits::{BitString, MAX_WIDTH};
use crate::error::{Error, Result};
use crate::signature::{Pairing, Signature};

/// Every signature replaced by its dual; edges unchanged.
pub fn dual_grid(g: &EOGrid) -> EOGrid {
    let signatures = g.signatures().iter().map(|(n, s)| (n.clone(), s.dual())).collect();
    EOGrid::new(signatures, g.vertices().to_vec(), g.edges().to_vec()).expect("dual keeps arities")
}

/// `π(h)(x_1,y_1,…,x_d,y_d) = h(x_1,…,x_d) · Π [x_i ≠ y_i]`, slots interleaved.
pub fn pi_transform(h: &Signature) -> Result<Signature> {
    let d = h.arity();
    if 2 * d > MAX_WIDTH {
        return Err(Error::ArityTooLarge(2 * d));
    }
    let rows = h.rows().map(|(a, v)| {
        let mut bits = 0u64;
        for i in 0..d {
            let x = a.raw() >> i & 1;
            bits |= x << (2 * i) | (1 - x) << (2 * i + 1);
        }
        (BitString::from_raw(2 * d, bits), v.clone())
    });
    Signature::from_rows(2 * d, rows)
}

/// Largest half-arity for which all `2^d` representative choices are tried.
pub const TAU_LIMIT: usize = 16;

/// The distinct half-arity signatures read off `f` by keeping one variable
/// of each pair of `P` (in pair order) and letting the partner be its negation.
pub fn tau_set(f: &Signature, p: &Pairing) -> Result<Vec<Signature>> {
    if p.arity() != f.arity() {
        return Err(Error::MalformedPairing(format!(
            "pairing covers {} variables, signature has {}",
            p.arity(),
            f.arity()
        )));
    }
    if let Some(a) = f.support().find(|a| !p.admits(a)) {
        return Err(Error::InvalidArgument(format!("support string {a} is not inside EOM[{p}]")));
    }
    let d = p.pairs().len();
    if d > TAU_LIMIT {
        return Err(Error::Refused(format!("2^{d} representative choices")));
    }
    let mut out: BTreeMap<Vec<(u64, String)>, Signature> = BTreeMap::new();
    for choice in 0u64..(1u64 << d) {
        let reps: Vec<usize> = p
            .pairs()
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| if choice >> k & 1 == 0 { a } else { b })
            .collect();
        let g = Signature::from_rows(d, f.rows().map(|(a, v)| (a.select(&reps), v.clone())))?;
        let key = g.rows().map(|(a, v)| (a.raw(), v.to_string())).collect();
        out.entry(key).or_insert(g);
    }
    Ok(out.into_values().collect())
}
