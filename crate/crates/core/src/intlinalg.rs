//! Exact integer linear algebra: Smith normal form and homology of `Z`-complexes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinAlgError {
    #[error("d_out * d_in is not zero")]
    NotAComplex,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.set(i, j, v.clone().into());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinAlgError> {
        if self.cols != other.rows {
            return Err(LinAlgError::Shape(format!("{}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc += a * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[target] -= q * row[source]
    fn row_axpy(&mut self, target: usize, source: usize, q: &BigInt) {
        for j in 0..self.cols {
            let s = &self.data[source * self.cols + j];
            if !s.is_zero() {
                let d = s * q;
                self.data[target * self.cols + j] -= d;
            }
        }
    }

    /// col[target] -= q * col[source]
    fn col_axpy(&mut self, target: usize, source: usize, q: &BigInt) {
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + source];
            if !s.is_zero() {
                let d = s * q;
                self.data[i * self.cols + target] -= d;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[i * self.cols + j];
            *v = -std::mem::take(v);
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// `u * m * v` is diagonal with `factors` on the leading diagonal.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub factors: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }
}

/// Invariant factors and rank of `m`.
pub fn smith_normal_form(m: &IntMatrix) -> (Vec<BigInt>, usize) {
    let f = smith_with_transforms(m).factors;
    let r = f.len();
    (f, r)
}

/// Smith normal form by gcd reduction. The pivot is the entry of least
/// absolute value in the remaining block, ties broken by row then column.
pub fn smith_with_transforms(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut factors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = smallest_entry(&a, t) else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let mut clean = true;
        for i in t + 1..rows {
            if a.get(i, t).is_zero() {
                continue;
            }
            let q = a.get(i, t).div_floor(a.get(t, t));
            a.row_axpy(i, t, &q);
            u.row_axpy(i, t, &q);
            clean &= a.get(i, t).is_zero();
        }
        for j in t + 1..cols {
            if a.get(t, j).is_zero() {
                continue;
            }
            let q = a.get(t, j).div_floor(a.get(t, t));
            a.col_axpy(j, t, &q);
            v.col_axpy(j, t, &q);
            clean &= a.get(t, j).is_zero();
        }
        if !clean {
            continue;
        }
        let p = a.get(t, t).clone();
        let bad_row = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&p)));
        if let Some(i) = bad_row {
            // row t picks up an entry not divisible by the pivot
            a.row_axpy(t, i, &BigInt::from(-1));
            u.row_axpy(t, i, &BigInt::from(-1));
            continue;
        }
        if p.is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        factors.push(a.get(t, t).clone());
        t += 1;
    }
    SmithForm { factors, u, v }
}

fn smallest_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(b, _, _)| ax < *b) {
                let one = ax.is_one();
                best = Some((ax, i, j));
                if one && i == t {
                    return best.map(|(_, i, j)| (i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

pub fn rank(m: &IntMatrix) -> usize {
    smith_normal_form(m).1
}

/// A `Z`-basis of the kernel of `m`, as column vectors.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let s = smith_with_transforms(m);
    (s.rank()..m.cols).map(|j| s.v.column(j)).collect()
}

/// Decides whether `y` lies in the column lattice of a matrix with Smith form `s`.
pub fn in_image(s: &SmithForm, y: &[BigInt]) -> bool {
    let uy = s.u.mul_vec(y);
    uy.iter().enumerate().all(|(k, c)| match s.factors.get(k) {
        Some(d) => c.is_multiple_of(d),
        None => c.is_zero(),
    })
}

/// A finitely generated abelian group `Z^free_rank + Z/t1 + ... + Z/tk`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn free(rank: usize) -> Self {
        AbelianGroup { free_rank: rank, torsion: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

/// `ker(d_out) / im(d_in)` for `. --d_in--> M --d_out--> .`.
///
/// `d_in` is `dim M x dim prev` and `d_out` is `dim next x dim M`.
pub fn homology_at(d_in: &IntMatrix, d_out: &IntMatrix) -> Result<AbelianGroup, LinAlgError> {
    if d_out.cols != d_in.rows {
        return Err(LinAlgError::Shape(format!("d_out has {} columns, d_in has {} rows", d_out.cols, d_in.rows)));
    }
    if !d_out.mul(d_in)?.is_zero() {
        return Err(LinAlgError::NotAComplex);
    }
    let (_, r_out) = smith_normal_form(d_out);
    let (f_in, r_in) = smith_normal_form(d_in);
    // ker(d_out) is saturated, so the torsion of ker/im is the torsion of Z^n/im
    Ok(AbelianGroup {
        free_rank: d_in.rows - r_out - r_in,
        torsion: f_in.into_iter().filter(|d| !d.is_one()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_factors() {
        let (f, r) = smith_normal_form(&IntMatrix::identity(2));
        assert_eq!(f, big(&[1, 1]));
        assert_eq!(r, 2);
    }

    #[test]
    fn two_by_two() {
        let m = IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        let (f, r) = smith_normal_form(&m);
        assert_eq!(f, big(&[2, 4]));
        assert_eq!(r, 2);
    }

    #[test]
    fn zero_matrix() {
        let (f, r) = smith_normal_form(&IntMatrix::zeros(3, 3));
        assert!(f.is_empty());
        assert_eq!(r, 0);
    }

    #[test]
    fn transforms_diagonalize() {
        let m = IntMatrix::from_rows(&[vec![3, 5, 7], vec![2, -4, 6], vec![0, 9, -3]]);
        let s = smith_with_transforms(&m);
        let d = s.u.mul(&m).unwrap().mul(&s.v).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j && i < s.rank() { s.factors[i].clone() } else { BigInt::zero() };
                assert_eq!(d.get(i, j), &expect);
            }
        }
    }

    #[test]
    fn homology_examples() {
        let h = homology_at(&IntMatrix::zeros(2, 0), &IntMatrix::zeros(0, 2)).unwrap();
        assert_eq!(h, AbelianGroup::free(2));

        let h = homology_at(&IntMatrix::from_rows(&[vec![2], vec![0]]), &IntMatrix::zeros(0, 2)).unwrap();
        assert_eq!(h, AbelianGroup { free_rank: 1, torsion: big(&[2]) });
        assert_eq!(h.to_string(), "Z + Z/2");

        let h = homology_at(&IntMatrix::identity(2), &IntMatrix::zeros(0, 2)).unwrap();
        assert!(h.is_zero());
    }

    #[test]
    fn not_a_complex() {
        let d = IntMatrix::identity(2);
        assert_eq!(homology_at(&d, &d), Err(LinAlgError::NotAComplex));
    }

    #[test]
    fn image_membership() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3], vec![0, 0]]);
        let s = smith_with_transforms(&m);
        assert!(in_image(&s, &big(&[4, 3, 0])));
        assert!(!in_image(&s, &big(&[1, 0, 0])));
        assert!(!in_image(&s, &big(&[0, 0, 1])));
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
        }
    }
}
