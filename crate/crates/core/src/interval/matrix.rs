//! Dense interval matrices, row major.

use super::{down, up, Interval};
use crate::linalg::RealMat;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Dense matrix of intervals; the product of enclosures encloses every
/// pointwise product.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl Serialize for IntervalMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<Interval>> =
            (0..self.rows).map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec()).collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntervalMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let rows: Vec<Vec<Interval>> = Vec::deserialize(deserializer)?;
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(D::Error::custom("ragged interval matrix"));
        }
        Ok(IntervalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }
}

impl IntervalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntervalMatrix {
        IntervalMatrix { rows, cols, data: vec![Interval::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> IntervalMatrix {
        let mut m = IntervalMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Interval::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Interval) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntervalMatrix { rows, cols, data }
    }

    /// Point matrix from row-major f64 data.
    pub fn from_rows(rows: &[Vec<f64>]) -> IntervalMatrix {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        IntervalMatrix::from_fn(r, c, |i, j| Interval::point(rows[i][j]))
    }

    /// Matrix with all entries `[-r, r]`.
    pub fn symmetric(rows: usize, cols: usize, r: f64) -> IntervalMatrix {
        IntervalMatrix { rows, cols, data: vec![Interval::symmetric(r); rows * cols] }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn try_add(&self, rhs: &IntervalMatrix) -> Result<IntervalMatrix> {
        self.check_same_shape(rhs)?;
        Ok(self.zip(rhs, Interval::add))
    }

    pub fn try_sub(&self, rhs: &IntervalMatrix) -> Result<IntervalMatrix> {
        self.check_same_shape(rhs)?;
        Ok(self.zip(rhs, Interval::sub))
    }

    pub fn try_mul(&self, rhs: &IntervalMatrix) -> Result<IntervalMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntervalMatrix::zeros(self.rows, rhs.cols);
        // ikj order: stream over rows of rhs for cache friendliness.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.lo() == 0.0 && a.hi() == 0.0 {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for j in 0..rhs.cols {
                    orow[j] = orow[j].add(&a.mul(&rrow[j]));
                }
            }
        }
        Ok(out)
    }

    fn check_same_shape(&self, rhs: &IntervalMatrix) -> Result<()> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(())
    }

    fn zip(&self, rhs: &IntervalMatrix, f: impl Fn(&Interval, &Interval) -> Interval) -> Self {
        IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn neg(&self) -> IntervalMatrix {
        self.map(|x| x.neg())
    }

    pub fn scale(&self, c: f64) -> IntervalMatrix {
        self.map(|x| x.scale(c))
    }

    pub fn scale_iv(&self, c: &Interval) -> IntervalMatrix {
        self.map(|x| x.mul(c))
    }

    pub fn map(&self, f: impl Fn(&Interval) -> Interval) -> IntervalMatrix {
        IntervalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> IntervalMatrix {
        IntervalMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Widen every entry by `± r`.
    pub fn inflate(&self, r: f64) -> IntervalMatrix {
        let pad = Interval::symmetric(r);
        self.map(|x| x.add(&pad))
    }

    /// Midpoint matrix (row major), for non-rigorous seeding.
    pub fn midpoint(&self) -> Vec<f64> {
        self.data.iter().map(|x| x.mid()).collect()
    }

    /// Upper bound of max_{i,j} |a_{i,j}| over every matrix in the enclosure.
    pub fn abs_sup(&self) -> f64 {
        self.data.iter().map(|x| x.mag()).fold(0.0, f64::max)
    }

    /// Upper bound of the row-sum norm over the enclosure.
    pub fn rowsum_norm(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.rows {
            let mut s = 0.0;
            for j in 0..self.cols {
                let m = self[(i, j)].mag();
                if m != 0.0 {
                    s = if s == 0.0 { m } else { up(s + m) };
                }
            }
            best = best.max(s);
        }
        best
    }

    /// Entrywise magnitude matrix, |A| with upper rounding.
    pub fn mag_matrix(&self) -> Vec<f64> {
        self.data.iter().map(|x| x.mag()).collect()
    }

    pub fn contains_point(&self, m: &[f64]) -> bool {
        m.len() == self.data.len()
            && self.data.iter().zip(m).all(|(iv, x)| iv.contains(*x))
    }

    pub fn contains_zero(&self) -> bool {
        self.data.iter().all(|iv| iv.contains(0.0))
    }

    /// Enclosure of `a · self` with a floating point left factor. Streamlined
    /// for the large products of the verification step.
    pub fn mul_real_left(&self, a: &RealMat) -> Result<IntervalMatrix> {
        if a.cols() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                a.rows(),
                a.cols(),
                self.rows,
                self.cols
            )));
        }
        let mut out = IntervalMatrix::zeros(a.rows(), self.cols);
        for i in 0..a.rows() {
            let arow = a.row(i);
            let orow = &mut out.data[i * self.cols..(i + 1) * self.cols];
            for (k, &av) in arow.iter().enumerate() {
                if av == 0.0 {
                    continue;
                }
                let brow = &self.data[k * self.cols..(k + 1) * self.cols];
                if av > 0.0 {
                    for j in 0..self.cols {
                        let b = brow[j];
                        orow[j] = Interval::new(
                            down(orow[j].lo() + down(av * b.lo())),
                            up(orow[j].hi() + up(av * b.hi())),
                        );
                    }
                } else {
                    for j in 0..self.cols {
                        let b = brow[j];
                        orow[j] = Interval::new(
                            down(orow[j].lo() + down(av * b.hi())),
                            up(orow[j].hi() + up(av * b.lo())),
                        );
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn data(&self) -> &[Interval] {
        &self.data
    }

    /// Kronecker-style block for left multiplication: vec(C X) = (C ⊗ I) vec(X)
    /// in row-major vectorization of n×n matrices.
    pub fn kron_left(&self, n: usize) -> IntervalMatrix {
        assert!(self.is_square() && self.rows == n);
        IntervalMatrix::from_fn(n * n, n * n, |r, c| {
            let (a, b) = (r / n, r % n);
            let (cc, d) = (c / n, c % n);
            if b == d {
                self[(a, cc)]
            } else {
                Interval::ZERO
            }
        })
    }

    /// Kronecker-style block for right multiplication: vec(X B) = (I ⊗ Bᵀ) vec(X)
    /// in row-major vectorization.
    pub fn kron_right(&self, n: usize) -> IntervalMatrix {
        assert!(self.is_square() && self.rows == n);
        IntervalMatrix::from_fn(n * n, n * n, |r, c| {
            let (a, b) = (r / n, r % n);
            let (cc, d) = (c / n, c % n);
            if a == cc {
                self[(d, b)]
            } else {
                Interval::ZERO
            }
        })
    }
}

impl std::ops::Index<(usize, usize)> for IntervalMatrix {
    type Output = Interval;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Interval {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntervalMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Interval {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_product_up_to_rounding() {
        let a = IntervalMatrix::from_rows(&[
            vec![1.0, -2.0, 0.5],
            vec![3.0, 0.0, -4.0],
            vec![0.25, 8.0, 1.0],
        ]);
        let p = IntervalMatrix::identity(3).try_mul(&a).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!(p[(i, j)].contains(a[(i, j)].mid()));
                assert!(p[(i, j)].width() < 1e-13);
            }
        }
    }

    #[test]
    fn zero_product_is_zero() {
        let a = IntervalMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]);
        let z = IntervalMatrix::zeros(2, 2);
        let p = a.try_mul(&z).unwrap();
        assert_eq!(p.abs_sup(), 0.0);
    }

    #[test]
    fn dimension_mismatch_errors() {
        let a = IntervalMatrix::zeros(2, 3);
        let b = IntervalMatrix::zeros(2, 3);
        assert!(a.try_mul(&b).is_err());
        assert!(a.try_add(&b.transpose()).is_err());
    }

    #[test]
    fn norms_trivial_cases() {
        let a = IntervalMatrix::from_rows(&[vec![1.0, -2.0], vec![3.0, -4.0]]);
        assert_eq!(a.abs_sup(), 4.0);
        let rs = a.rowsum_norm();
        assert!(rs >= 7.0 && rs <= 7.0 * (1.0 + 1e-14));
        assert_eq!(IntervalMatrix::identity(3).rowsum_norm(), 1.0);
        assert_eq!(IntervalMatrix::zeros(2, 2).abs_sup(), 0.0);
    }

    #[test]
    fn abs_sup_interval_corners() {
        let a = IntervalMatrix::symmetric(2, 2, 1.0);
        assert_eq!(a.abs_sup(), 1.0);
        let rs = a.rowsum_norm();
        assert!(rs >= 2.0 && rs <= 2.0 * (1.0 + 1e-14));
    }

    #[test]
    fn kron_blocks_reproduce_products() {
        let n = 3;
        let c = IntervalMatrix::from_rows(&[
            vec![1.0, 2.0, -1.0],
            vec![0.5, -3.0, 2.0],
            vec![4.0, 0.0, 1.5],
        ]);
        let x = IntervalMatrix::from_rows(&[
            vec![2.0, -1.0, 0.0],
            vec![1.0, 1.0, -2.0],
            vec![0.5, 3.0, 1.0],
        ]);
        // vec(CX) = kron_left(C) vec(X)
        let vec_x = IntervalMatrix::from_fn(n * n, 1, |i, _| x[(i / n, i % n)]);
        let lhs = c.kron_left(n).try_mul(&vec_x).unwrap();
        let direct = c.try_mul(&x).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!(lhs[(i * n + j, 0)].contains(direct[(i, j)].mid()));
            }
        }
        // vec(XC) = kron_right(C) vec(X)
        let rhs = c.kron_right(n).try_mul(&vec_x).unwrap();
        let direct_r = x.try_mul(&c).unwrap();
        for i in 0..n {
            for j in 0..n {
                assert!(rhs[(i * n + j, 0)].contains(direct_r[(i, j)].mid()));
            }
        }
    }
}
