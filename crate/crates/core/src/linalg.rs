//! Sparse row reduction over a cyclotomic field.

use crate::scalars::CycScalar;
use std::collections::BTreeMap;

pub type SparseVec = BTreeMap<usize, CycScalar>;

pub fn axpy(v: &mut SparseVec, c: &CycScalar, w: &SparseVec) {
    for (&k, x) in w {
        let t = c * x;
        match v.get_mut(&k) {
            Some(y) => {
                *y += &t;
                if y.is_zero() {
                    v.remove(&k);
                }
            }
            None => {
                if !t.is_zero() {
                    v.insert(k, t);
                }
            }
        }
    }
}

/// Fully reduced row echelon basis; every pivot entry is 1 and no other row has
/// a nonzero entry in a pivot column.
#[derive(Clone, Debug, Default)]
pub struct Rref {
    rows: BTreeMap<usize, SparseVec>,
}

impl Rref {
    pub fn new() -> Self {
        Rref { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &usize> {
        self.rows.keys()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    /// Remainder of v modulo the row space.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut out = v.clone();
        let keys: Vec<usize> = v.keys().copied().filter(|k| self.rows.contains_key(k)).collect();
        for k in keys {
            if let Some(c) = out.get(&k).cloned() {
                axpy(&mut out, &(-c), &self.rows[&k]);
            }
        }
        out
    }

    /// Adds v to the row space; returns false if v was already in it.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let mut r = self.reduce(v);
        let Some((&p, lead)) = r.iter().next() else { return false };
        let inv = lead.inv().expect("nonzero pivot");
        for x in r.values_mut() {
            *x = &*x * &inv;
        }
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&p).cloned() {
                axpy(row, &(-c), &r);
            }
        }
        r.insert(p, inv.field().one());
        self.rows.insert(p, r);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::CyclotomicField;

    #[test]
    fn rank_and_membership() {
        let f = CyclotomicField::new(5);
        let z = f.zeta();
        let v1: SparseVec = [(0, f.one()), (1, z.clone())].into_iter().collect();
        let v2: SparseVec = [(1, f.one()), (2, f.from_i64(3))].into_iter().collect();
        let mut v3 = v1.clone();
        axpy(&mut v3, &z, &v2);
        let mut r = Rref::new();
        assert!(r.insert(&v1));
        assert!(r.insert(&v2));
        assert!(!r.insert(&v3));
        assert_eq!(r.rank(), 2);
        assert!(r.reduce(&v3).is_empty());
    }
}
