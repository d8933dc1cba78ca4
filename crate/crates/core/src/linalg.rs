//! Plain floating point dense linear algebra.
//!
//! Everything here is non-rigorous by design: it seeds Newton iterations,
//! builds approximate inverses and produces midpoint diagnostics. Rigor is
//! recovered afterwards through the interval bounds, never assumed from
//! these routines.

use crate::{Error, Result};

/// Dense row-major f64 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMat {
    pub fn zeros(rows: usize, cols: usize) -> RealMat {
        RealMat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> RealMat {
        let mut m = RealMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> RealMat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        RealMat { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> RealMat {
        let r = rows.len();
        let c = if r > 0 { rows[0].len() } else { 0 };
        RealMat::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> RealMat {
        assert_eq!(rows * cols, data.len());
        RealMat { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, rhs: &RealMat) -> RealMat {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in mul");
        let mut out = RealMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == 0.0 {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for j in 0..rhs.cols {
                    orow[j] += a * rrow[j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, rhs: &RealMat) -> RealMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RealMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &RealMat) -> RealMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        RealMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> RealMat {
        RealMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn transpose(&self) -> RealMat {
        RealMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// max_{i,j} |a_ij|
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Row-sum norm.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum())
            .fold(0.0f64, f64::max)
    }

    /// Max column sum norm.
    pub fn norm_1(&self) -> f64 {
        let mut sums = vec![0.0f64; self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                sums[j] += self[(i, j)].abs();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// LU factorization with partial pivoting.
    pub fn lu(&self) -> Result<Lu> {
        Lu::new(self)
    }

    pub fn inverse(&self) -> Result<RealMat> {
        self.lu()?.inverse()
    }
}

impl std::ops::Index<(usize, usize)> for RealMat {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RealMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factors with partial pivoting, PA = LU.
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    piv: Vec<usize>,
}

impl Lu {
    fn new(a: &RealMat) -> Result<Lu> {
        assert_eq!(a.rows, a.cols, "LU of non-square matrix");
        let n = a.rows;
        let mut lu = a.data.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        for col in 0..n {
            let mut p = col;
            let mut best = lu[col * n + col].abs();
            for r in col + 1..n {
                let v = lu[r * n + col].abs();
                if v > best {
                    best = v;
                    p = r;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularJacobian);
            }
            if p != col {
                for j in 0..n {
                    lu.swap(col * n + j, p * n + j);
                }
                piv.swap(col, p);
            }
            let d = lu[col * n + col];
            for r in col + 1..n {
                let f = lu[r * n + col] / d;
                lu[r * n + col] = f;
                if f != 0.0 {
                    let (upper, lower) = lu.split_at_mut(r * n);
                    let src = &upper[col * n + col + 1..col * n + n];
                    let dst = &mut lower[col + 1..n];
                    for (dj, sj) in dst.iter_mut().zip(src) {
                        *dj -= f * sj;
                    }
                }
            }
        }
        Ok(Lu { n, lu, piv })
    }

    pub fn solve_vec(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.piv.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    /// Solve A X = B column-wise.
    pub fn solve_mat(&self, b: &RealMat) -> RealMat {
        let n = self.n;
        assert_eq!(b.rows, n);
        let mut out = RealMat::zeros(n, b.cols);
        let mut col = vec![0.0; n];
        for j in 0..b.cols {
            for i in 0..n {
                col[i] = b[(i, j)];
            }
            let x = self.solve_vec(&col);
            for i in 0..n {
                out[(i, j)] = x[i];
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<RealMat> {
        let n = self.n;
        let mut inv = RealMat::zeros(n, n);
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            let x = self.solve_vec(&e);
            e[j] = 0.0;
            for i in 0..n {
                if !x[i].is_finite() {
                    return Err(Error::SingularJacobian);
                }
                inv[(i, j)] = x[i];
            }
        }
        Ok(inv)
    }
}

// ---------------------------------------------------------------------------
// Complex support: Schur decomposition, matrix logarithm, matrix exponential.
// ---------------------------------------------------------------------------

/// Minimal complex scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cplx {
    pub re: f64,
    pub im: f64,
}

impl Cplx {
    pub const ZERO: Cplx = Cplx { re: 0.0, im: 0.0 };
    pub const ONE: Cplx = Cplx { re: 1.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> Cplx {
        Cplx { re, im }
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn conj(self) -> Cplx {
        Cplx { re: self.re, im: -self.im }
    }

    pub fn sqrt(self) -> Cplx {
        // Principal branch.
        let r = self.abs();
        if r == 0.0 {
            return Cplx::ZERO;
        }
        let re = ((r + self.re) / 2.0).max(0.0).sqrt();
        let im_mag = ((r - self.re) / 2.0).max(0.0).sqrt();
        Cplx { re, im: if self.im >= 0.0 { im_mag } else { -im_mag } }
    }

    pub fn ln(self) -> Cplx {
        Cplx { re: self.abs().ln(), im: self.im.atan2(self.re) }
    }
}

impl std::ops::Add for Cplx {
    type Output = Cplx;
    fn add(self, r: Cplx) -> Cplx {
        Cplx::new(self.re + r.re, self.im + r.im)
    }
}
impl std::ops::Sub for Cplx {
    type Output = Cplx;
    fn sub(self, r: Cplx) -> Cplx {
        Cplx::new(self.re - r.re, self.im - r.im)
    }
}
impl std::ops::Mul for Cplx {
    type Output = Cplx;
    fn mul(self, r: Cplx) -> Cplx {
        Cplx::new(self.re * r.re - self.im * r.im, self.re * r.im + self.im * r.re)
    }
}
impl std::ops::Div for Cplx {
    type Output = Cplx;
    fn div(self, r: Cplx) -> Cplx {
        let d = r.re * r.re + r.im * r.im;
        Cplx::new(
            (self.re * r.re + self.im * r.im) / d,
            (self.im * r.re - self.re * r.im) / d,
        )
    }
}
impl std::ops::Neg for Cplx {
    type Output = Cplx;
    fn neg(self) -> Cplx {
        Cplx::new(-self.re, -self.im)
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone)]
pub struct CplxMat {
    n: usize,
    data: Vec<Cplx>,
}

impl CplxMat {
    pub fn zeros(n: usize) -> CplxMat {
        CplxMat { n, data: vec![Cplx::ZERO; n * n] }
    }

    pub fn identity(n: usize) -> CplxMat {
        let mut m = CplxMat::zeros(n);
        for i in 0..n {
            m[(i, i)] = Cplx::ONE;
        }
        m
    }

    pub fn from_real(a: &RealMat) -> CplxMat {
        assert_eq!(a.rows, a.cols);
        let n = a.rows;
        let mut m = CplxMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Cplx::new(a[(i, j)], 0.0);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn real_part(&self) -> RealMat {
        RealMat::from_fn(self.n, self.n, |i, j| self[(i, j)].re)
    }

    pub fn mul(&self, rhs: &CplxMat) -> CplxMat {
        let n = self.n;
        let mut out = CplxMat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] = out[(i, j)] + a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CplxMat {
        let n = self.n;
        let mut out = CplxMat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, z| m.max(z.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for CplxMat {
    type Output = Cplx;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Cplx {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CplxMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cplx {
        &mut self.data[i * self.n + j]
    }
}

/// Complex Schur decomposition A = U T U* with T upper triangular.
///
/// Householder reduction to Hessenberg form followed by shifted QR with
/// deflation. Suited to the small matrices this crate works with.
pub fn schur(a: &CplxMat) -> Result<(CplxMat, CplxMat)> {
    let n = a.n;
    let mut t = a.clone();
    let mut u = CplxMat::identity(n);

    // Householder Hessenberg reduction.
    for col in 0..n.saturating_sub(2) {
        let mut v: Vec<Cplx> = (col + 1..n).map(|i| t[(i, col)]).collect();
        let norm = v.iter().map(|z| z.abs() * z.abs()).sum::<f64>().sqrt();
        if norm <= 1e-300 {
            continue;
        }
        let alpha = if v[0].abs() == 0.0 {
            Cplx::new(-norm, 0.0)
        } else {
            let phase = v[0] / Cplx::new(v[0].abs(), 0.0);
            -phase * Cplx::new(norm, 0.0)
        };
        v[0] = v[0] - alpha;
        let vnorm2: f64 = v.iter().map(|z| z.abs() * z.abs()).sum();
        if vnorm2 <= 1e-300 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // t = P t P with P = I - beta v v* acting on rows/cols col+1..n
        apply_householder_left(&mut t, &v, beta, col + 1);
        apply_householder_right(&mut t, &v, beta, col + 1);
        apply_householder_right(&mut u, &v, beta, col + 1);
        for i in col + 2..n {
            t[(i, col)] = Cplx::ZERO;
        }
        t[(col + 1, col)] = alpha;
    }

    // Shifted QR iteration with deflation.
    let mut hi = n;
    let mut iter_budget = 60 * n * n + 200;
    while hi > 1 {
        if iter_budget == 0 {
            return Err(Error::NoConvergence("complex QR iteration stalled".into()));
        }
        iter_budget -= 1;

        // Deflate tiny subdiagonals.
        let mut deflated = false;
        for i in (1..hi).rev() {
            let scale = t[(i - 1, i - 1)].abs() + t[(i, i)].abs();
            if t[(i, i - 1)].abs() <= 1e-300 + 2e-16 * scale {
                t[(i, i - 1)] = Cplx::ZERO;
                if i == hi - 1 {
                    hi -= 1;
                    deflated = true;
                    break;
                }
            }
        }
        if deflated {
            continue;
        }
        let lo = (1..hi)
            .rev()
            .find(|&i| t[(i, i - 1)].re == 0.0 && t[(i, i - 1)].im == 0.0)
            .unwrap_or(0);

        // Wilkinson shift from the trailing 2x2 block of the active window.
        let m = hi - 1;
        let shift = if m >= 1 {
            let a11 = t[(m - 1, m - 1)];
            let a12 = t[(m - 1, m)];
            let a21 = t[(m, m - 1)];
            let a22 = t[(m, m)];
            let tr = a11 + a22;
            let det = a11 * a22 - a12 * a21;
            let half = Cplx::new(0.5, 0.0);
            let disc = (tr * tr - Cplx::new(4.0, 0.0) * det).sqrt();
            let l1 = (tr + disc) * half;
            let l2 = (tr - disc) * half;
            if (l1 - a22).abs() <= (l2 - a22).abs() {
                l1
            } else {
                l2
            }
        } else {
            t[(m, m)]
        };

        // Implicit single shift sweep with Givens rotations on rows lo..hi.
        let mut x = t[(lo, lo)] - shift;
        let mut y = t[(lo + 1, lo)];
        for k in lo..hi - 1 {
            let (c, s) = givens(x, y);
            rot_rows(&mut t, k, k + 1, c, s, k.saturating_sub(1));
            // The column rotation spills one row below the pair: the bulge.
            rot_cols(&mut t, k, k + 1, c, s, (k + 3).min(hi));
            rot_cols_full(&mut u, k, k + 1, c, s);
            if k + 2 < hi {
                x = t[(k + 1, k)];
                y = t[(k + 2, k)];
            }
        }
    }
    Ok((u, t))
}

fn apply_householder_left(t: &mut CplxMat, v: &[Cplx], beta: f64, row0: usize) {
    let n = t.n;
    for j in 0..n {
        let mut dot = Cplx::ZERO;
        for (i, vi) in v.iter().enumerate() {
            dot = dot + vi.conj() * t[(row0 + i, j)];
        }
        let f = Cplx::new(beta, 0.0) * dot;
        for (i, vi) in v.iter().enumerate() {
            t[(row0 + i, j)] = t[(row0 + i, j)] - *vi * f;
        }
    }
}

fn apply_householder_right(t: &mut CplxMat, v: &[Cplx], beta: f64, col0: usize) {
    let n = t.n;
    for i in 0..n {
        let mut dot = Cplx::ZERO;
        for (j, vj) in v.iter().enumerate() {
            dot = dot + t[(i, col0 + j)] * *vj;
        }
        let f = Cplx::new(beta, 0.0) * dot;
        for (j, vj) in v.iter().enumerate() {
            t[(i, col0 + j)] = t[(i, col0 + j)] - f * vj.conj();
        }
    }
}

/// Givens rotation zeroing y: [c, s; -s̄, c] [x; y] = [r; 0], c real.
fn givens(x: Cplx, y: Cplx) -> (f64, Cplx) {
    let nx = x.abs();
    let ny = y.abs();
    if ny == 0.0 {
        return (1.0, Cplx::ZERO);
    }
    if nx == 0.0 {
        return (0.0, Cplx::ONE);
    }
    let r = (nx * nx + ny * ny).sqrt();
    let c = nx / r;
    let s = (x / Cplx::new(nx, 0.0)) * y.conj() / Cplx::new(r, 0.0);
    (c, s)
}

fn rot_rows(t: &mut CplxMat, i: usize, k: usize, c: f64, s: Cplx, from_col: usize) {
    let n = t.n;
    for j in from_col..n {
        let a = t[(i, j)];
        let b = t[(k, j)];
        t[(i, j)] = Cplx::new(c, 0.0) * a + s * b;
        t[(k, j)] = Cplx::new(c, 0.0) * b - s.conj() * a;
    }
}

fn rot_cols(t: &mut CplxMat, i: usize, k: usize, c: f64, s: Cplx, to_row: usize) {
    for r in 0..to_row {
        let a = t[(r, i)];
        let b = t[(r, k)];
        t[(r, i)] = Cplx::new(c, 0.0) * a + s.conj() * b;
        t[(r, k)] = Cplx::new(c, 0.0) * b - s * a;
    }
}

fn rot_cols_full(t: &mut CplxMat, i: usize, k: usize, c: f64, s: Cplx) {
    let n = t.n;
    rot_cols(t, i, k, c, s, n);
}

/// Eigenvalues from the Schur factor.
pub fn schur_eigenvalues(t: &CplxMat) -> Vec<Cplx> {
    (0..t.n).map(|i| t[(i, i)]).collect()
}

/// Eigenvector of the original matrix for the i-th Schur eigenvalue, by back
/// substitution in the triangular factor.
pub fn schur_eigenvector(u: &CplxMat, t: &CplxMat, idx: usize) -> Vec<Cplx> {
    let n = t.n;
    let lam = t[(idx, idx)];
    let mut y = vec![Cplx::ZERO; n];
    y[idx] = Cplx::ONE;
    for j in (0..idx).rev() {
        let mut s = Cplx::ZERO;
        for k in j + 1..=idx {
            s = s + t[(j, k)] * y[k];
        }
        let mut d = t[(j, j)] - lam;
        if d.abs() < 1e-290 {
            d = Cplx::new(1e-290, 0.0);
        }
        y[j] = -s / d;
    }
    // v = U y, normalized.
    let mut v = vec![Cplx::ZERO; n];
    for i in 0..n {
        for j in 0..n {
            v[i] = v[i] + u[(i, j)] * y[j];
        }
    }
    let norm = v.iter().map(|z| z.abs() * z.abs()).sum::<f64>().sqrt();
    for z in &mut v {
        *z = *z / Cplx::new(norm, 0.0);
    }
    v
}

/// Square root of an upper triangular matrix by the recurrence of
/// Björck–Hammarling.
fn sqrt_triangular(t: &CplxMat) -> Result<CplxMat> {
    let n = t.n;
    let mut x = CplxMat::zeros(n);
    for i in 0..n {
        x[(i, i)] = t[(i, i)].sqrt();
    }
    for off in 1..n {
        for i in 0..n - off {
            let j = i + off;
            let mut s = t[(i, j)];
            for k in i + 1..j {
                s = s - x[(i, k)] * x[(k, j)];
            }
            let d = x[(i, i)] + x[(j, j)];
            if d.abs() < 1e-290 {
                return Err(Error::LogBranchFailure(format!(
                    "vanishing diagonal pair at ({i},{j})"
                )));
            }
            x[(i, j)] = s / d;
        }
    }
    Ok(x)
}

/// Principal logarithm of an upper triangular matrix via inverse scaling
/// and squaring plus a Gregory series.
fn log_triangular(t: &CplxMat) -> Result<CplxMat> {
    let n = t.n;
    for i in 0..n {
        let d = t[(i, i)];
        if d.abs() < 1e-200 || (d.re < 0.0 && d.im.abs() <= 1e-12 * d.abs()) {
            return Err(Error::LogBranchFailure(format!("({}, {})", d.re, d.im)));
        }
    }
    let mut s = t.clone();
    let mut k = 0u32;
    loop {
        let mut e = s.clone();
        for i in 0..n {
            e[(i, i)] = e[(i, i)] - Cplx::ONE;
        }
        if e.max_abs() < 0.25 || k >= 60 {
            // log(I + E) = E - E²/2 + E³/3 - ...
            let mut term = e.clone();
            let mut acc = CplxMat::zeros(n);
            let mut sign = 1.0;
            for p in 1..=40 {
                for i in 0..n {
                    for j in 0..n {
                        acc[(i, j)] = acc[(i, j)] + term[(i, j)] * Cplx::new(sign / p as f64, 0.0);
                    }
                }
                term = term.mul(&e);
                sign = -sign;
                if term.max_abs() < 1e-18 {
                    break;
                }
            }
            let factor = Cplx::new(2f64.powi(k as i32), 0.0);
            for i in 0..n {
                for j in 0..n {
                    acc[(i, j)] = acc[(i, j)] * factor;
                }
            }
            return Ok(acc);
        }
        s = sqrt_triangular(&s)?;
        k += 1;
    }
}

/// Principal real matrix logarithm via complex Schur decomposition, imaginary
/// part dropped. Errors when an eigenvalue sits on the closed negative real
/// axis, where the principal branch is undefined.
pub fn matrix_log_real(a: &RealMat) -> Result<RealMat> {
    let c = CplxMat::from_real(a);
    let (u, t) = schur(&c)?;
    let log_t = log_triangular(&t)?;
    let log_a = u.mul(&log_t).mul(&u.adjoint());
    Ok(log_a.real_part())
}

/// Matrix exponential by scaling and squaring with a Taylor core.
pub fn matrix_exp(a: &RealMat) -> RealMat {
    let n = a.rows;
    let norm = a.norm_inf();
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let b = a.scale(0.5f64.powi(s));
    let mut term = RealMat::identity(n);
    let mut acc = RealMat::identity(n);
    for p in 1..=24 {
        term = term.mul(&b).scale(1.0 / p as f64);
        acc = acc.add(&term);
        if term.max_abs() < 1e-18 {
            break;
        }
    }
    let mut e = acc;
    for _ in 0..s {
        e = e.mul(&e);
    }
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rand_mat(n: usize, seed: u64) -> RealMat {
        // Small deterministic LCG; avoids pulling rand into the unit test.
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        RealMat::from_fn(n, n, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
    }

    #[test]
    fn lu_solves_linear_systems() {
        let a = rand_mat(12, 3);
        let lu = a.lu().unwrap();
        let x_true: Vec<f64> = (0..12).map(|i| (i as f64) - 5.5).collect();
        let b = a.mul_vec(&x_true);
        let x = lu.solve_vec(&b);
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!((xi - ti).abs() < 1e-10);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let a = rand_mat(8, 11);
        let inv = a.inverse().unwrap();
        let p = a.mul(&inv);
        let err = p.sub(&RealMat::identity(8)).max_abs();
        assert!(err < 1e-11, "err = {err}");
    }

    #[test]
    fn schur_reconstructs_matrix() {
        for seed in [1, 2, 9, 42] {
            let a = rand_mat(6, seed);
            let c = CplxMat::from_real(&a);
            let (u, t) = schur(&c).unwrap();
            // Strictly lower part of T is zero.
            for i in 0..6 {
                for j in 0..i {
                    assert!(t[(i, j)].abs() < 1e-10, "t[{i},{j}] = {:?}", t[(i, j)]);
                }
            }
            let rec = u.mul(&t).mul(&u.adjoint());
            for i in 0..6 {
                for j in 0..6 {
                    assert!((rec[(i, j)].re - a[(i, j)]).abs() < 1e-9);
                    assert!(rec[(i, j)].im.abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn schur_eigen_solves() {
        let a = RealMat::from_rows(&[
            vec![2.0, 1.0, 0.0],
            vec![0.0, 3.0, 1.0],
            vec![-1.0, 0.5, -1.0],
        ]);
        let c = CplxMat::from_real(&a);
        let (u, t) = schur(&c).unwrap();
        for idx in 0..3 {
            let lam = t[(idx, idx)];
            let v = schur_eigenvector(&u, &t, idx);
            // || A v - lam v ||
            let mut err: f64 = 0.0;
            for i in 0..3 {
                let mut av = Cplx::ZERO;
                for j in 0..3 {
                    av = av + Cplx::new(a[(i, j)], 0.0) * v[j];
                }
                err = err.max((av - lam * v[i]).abs());
            }
            assert!(err < 1e-9, "residual {err}");
        }
    }

    #[test]
    fn log_inverts_exp() {
        let a = RealMat::from_rows(&[
            vec![-0.4, 1.2, 0.1],
            vec![-1.2, -0.4, 0.0],
            vec![0.3, -0.2, 0.8],
        ]);
        let e = matrix_exp(&a);
        let l = matrix_log_real(&e).unwrap();
        assert!(l.sub(&a).max_abs() < 1e-10);
    }

    #[test]
    fn log_rejects_negative_axis() {
        let a = RealMat::from_rows(&[vec![-1.0, 0.0], vec![0.0, 2.0]]);
        assert!(matches!(matrix_log_real(&a), Err(Error::LogBranchFailure(_))));
    }

    #[test]
    fn exp_matches_diagonal() {
        let a = RealMat::from_rows(&[vec![-1.0, 0.0], vec![0.0, 2.0]]);
        let e = matrix_exp(&a);
        assert!((e[(0, 0)] - (-1.0f64).exp()).abs() < 1e-14);
        assert!((e[(1, 1)] - 2.0f64.exp()).abs() < 1e-12);
        assert!(e[(0, 1)].abs() < 1e-15 && e[(1, 0)].abs() < 1e-15);
    }
}
