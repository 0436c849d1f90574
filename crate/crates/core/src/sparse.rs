//! Column-sparse integer matrices used for differentials and chain maps.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::intlinalg::IntMatrix;

pub type SparseVec = BTreeMap<usize, BigInt>;

/// A `rows x cols` matrix stored as one sparse column per source basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols: vec![SparseVec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for (j, c) in m.cols.iter_mut().enumerate() {
            c.insert(j, BigInt::from(1));
        }
        m
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols.iter().all(|c| c.keys().all(|&r| r < rows)));
        SparseMatrix { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.cols[j].get(&i).cloned().unwrap_or_default()
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: BigInt) {
        add_entry(&mut self.cols[j], i, v);
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(BTreeMap::len).sum()
    }

    /// Image of a sparse vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&j, c) in v {
            for (&i, a) in &self.cols[j] {
                add_entry(&mut out, i, a * c);
            }
        }
        out
    }

    /// `self * other`
    pub fn compose(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), other.rows, "composition shape mismatch");
        SparseMatrix { rows: self.rows, cols: other.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn scaled(&self, k: &BigInt) -> SparseMatrix {
        let mut m = self.clone();
        for c in &mut m.cols {
            for v in c.values_mut() {
                *v *= k;
            }
            c.retain(|_, v| !v.is_zero());
        }
        m
    }

    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols()), (other.rows, other.cols()));
        let mut m = self.clone();
        for (j, c) in other.cols.iter().enumerate() {
            for (&i, v) in c {
                add_entry(&mut m.cols[j], i, -v);
            }
        }
        m
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::zeros(self.cols(), self.rows);
        for (j, c) in self.cols.iter().enumerate() {
            for (&i, v) in c {
                t.cols[i].insert(j, v.clone());
            }
        }
        t
    }

    /// Dense block with the given row and column index ranges.
    pub fn block(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (jj, j) in cols.clone().enumerate() {
            for (&i, v) in self.cols[j].range(rows.clone()) {
                m.set(i - rows.start, jj, v.clone());
            }
        }
        m
    }
}

pub fn add_entry(v: &mut SparseVec, i: usize, x: BigInt) {
    if x.is_zero() {
        return;
    }
    match v.entry(i) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(x);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += x;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}
