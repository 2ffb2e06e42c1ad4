//! Bitsets over the support rows of a signature. Both the pairing search and
//! the rebalancing search work on columns (per variable, the set of rows where
//! it is 1) restricted to a surviving set of rows.

use crate::signature::Signature;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct RowSet(Vec<u64>);

impl RowSet {
    pub fn empty(n: usize) -> Self {
        RowSet(vec![0; n.div_ceil(64)])
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn zip(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        RowSet(self.0.iter().zip(&other.0).map(|(&a, &b)| op(a, b)).collect())
    }

    pub fn and(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & b)
    }

    pub fn or(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a | b)
    }

    pub fn xor(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a ^ b)
    }

    pub fn and_not(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b))
    }
}

/// Support rows (raw strings, increasing) and per-variable columns.
pub(crate) struct ColumnView {
    pub rows: Vec<u64>,
    pub columns: Vec<RowSet>,
}

impl ColumnView {
    /// Columns of `f`'s support; with `complement` the rows are dualized first.
    pub fn new(f: &Signature, complement: bool) -> Self {
        let m = crate::bits::mask(f.arity());
        let rows: Vec<u64> = f
            .raw_rows()
            .keys()
            .map(|&r| if complement { !r & m } else { r })
            .collect();
        let columns = (0..f.arity())
            .map(|v| {
                let mut c = RowSet::empty(rows.len());
                for (i, &r) in rows.iter().enumerate() {
                    if r >> v & 1 == 1 {
                        c.insert(i);
                    }
                }
                c
            })
            .collect();
        ColumnView { rows, columns }
    }
}

/// Remaining variables grouped by their column restricted to the surviving rows.
/// Classes are sorted by pattern; variables within a class ascend.
#[derive(Clone, Debug)]
pub(crate) struct Classes(pub Vec<(RowSet, Vec<usize>)>);

impl Classes {
    pub fn build(items: impl IntoIterator<Item = (RowSet, usize)>) -> Self {
        let mut map: std::collections::BTreeMap<RowSet, Vec<usize>> = Default::default();
        for (p, v) in items {
            map.entry(p).or_default().push(v);
        }
        let mut classes: Vec<(RowSet, Vec<usize>)> = map.into_iter().collect();
        for (_, vs) in &mut classes {
            vs.sort_unstable();
        }
        Classes(classes)
    }

    /// Removes `a` and `b` and restricts every pattern to `keep`.
    pub fn without(&self, a: usize, b: usize, keep: &RowSet) -> Self {
        Self::build(self.0.iter().flat_map(|(p, vs)| {
            let p = p.and(keep);
            vs.iter().filter(move |&&v| v != a && v != b).map(move |&v| (p.clone(), v))
        }))
    }

    pub fn key(&self) -> Vec<(RowSet, usize)> {
        self.0.iter().map(|(p, vs)| (p.clone(), vs.len())).collect()
    }

    pub fn var_count(&self) -> usize {
        self.0.iter().map(|(_, vs)| vs.len()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_operations() {
        let mut a = RowSet::empty(70);
        a.insert(3);
        a.insert(65);
        let f = RowSet::full(70);
        assert_eq!(f.len(), 70);
        assert!(a.is_subset(&f));
        assert_eq!(f.and_not(&a).len(), 68);
        assert_eq!(a.iter().collect::<Vec<_>>(), vec![3, 65]);
        assert!(a.xor(&a).is_empty());
        assert_eq!(a.or(&f), f);
    }
}
