//! Vector fields, validated orbit data and Jacobian coefficient sequences.
//!
//! Only quadratic polynomial fields are supported: the Jacobian of such a
//! field is affine in the state, so the Fourier coefficients of
//! `A(t) = ∇g(γ(t))` are affine in the orbit coefficients and interval
//! evaluation stays tight.

pub mod builtin;
mod find;

pub use find::{orbit_candidate_find, OrbitGuess};

use crate::interval::{
    cos_enclosure, pi, pow_enclosure, sin_enclosure, sqrt2, up, ComplexInterval, Interval,
    IntervalMatrix,
};
use crate::linalg::RealMat;
use crate::sequence::{MatrixFourierSeq, SeqCoeff};
use crate::verifier::zeta_upper;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// One monomial of a polynomial vector field component.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyTerm {
    pub coeff: f64,
    /// One exponent per state variable; total degree at most 2.
    pub powers: Vec<u32>,
}

/// Arbitrary polynomial field of total degree at most two.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PolyField {
    pub components: Vec<Vec<PolyTerm>>,
}

/// Supported vector fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum VectorFieldKind {
    Lorenz { sigma: f64, rho: f64, beta: f64 },
    Zeta3 { alpha: f64, beta: f64 },
    Polynomial(PolyField),
}

/// A vector field together with its state dimension.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorFieldSpec {
    pub n: usize,
    #[serde(flatten)]
    pub kind: VectorFieldKind,
}

impl VectorFieldSpec {
    pub fn lorenz(sigma: f64, rho: f64, beta: f64) -> VectorFieldSpec {
        VectorFieldSpec { n: 3, kind: VectorFieldKind::Lorenz { sigma, rho, beta } }
    }

    pub fn zeta3(alpha: f64, beta: f64) -> VectorFieldSpec {
        VectorFieldSpec { n: 3, kind: VectorFieldKind::Zeta3 { alpha, beta } }
    }

    pub fn polynomial(field: PolyField) -> Result<VectorFieldSpec> {
        let n = field.components.len();
        for (i, comp) in field.components.iter().enumerate() {
            for term in comp {
                if term.powers.len() != n {
                    return Err(Error::UnsupportedField(format!(
                        "component {i}: multi-index length {} != {n}",
                        term.powers.len()
                    )));
                }
                let deg: u32 = term.powers.iter().sum();
                if deg > 2 {
                    return Err(Error::UnsupportedField(format!(
                        "component {i}: total degree {deg} > 2"
                    )));
                }
            }
        }
        Ok(VectorFieldSpec { n, kind: VectorFieldKind::Polynomial(field) })
    }

    /// Canonical quadratic form of the field.
    pub fn quadratic_form(&self) -> Result<QuadraticField> {
        match &self.kind {
            VectorFieldKind::Lorenz { sigma, rho, beta } => Ok(QuadraticField {
                n: 3,
                constant: vec![0.0; 3],
                linear: RealMat::from_rows(&[
                    vec![-sigma, *sigma, 0.0],
                    vec![*rho, -1.0, 0.0],
                    vec![0.0, 0.0, -beta],
                ]),
                quad: vec![(1, 0, 2, -1.0), (2, 0, 1, 1.0)],
            }),
            VectorFieldKind::Zeta3 { alpha, beta } => Ok(QuadraticField {
                n: 3,
                constant: vec![0.0; 3],
                linear: RealMat::from_rows(&[
                    vec![0.0, 1.0, 0.0],
                    vec![0.0, 0.0, 1.0],
                    vec![*alpha, -beta, -1.0],
                ]),
                quad: vec![(2, 0, 0, -1.0)],
            }),
            VectorFieldKind::Polynomial(p) => {
                let n = self.n;
                let mut constant = vec![0.0; n];
                let mut linear = RealMat::zeros(n, n);
                let mut quad = Vec::new();
                for (i, comp) in p.components.iter().enumerate() {
                    for term in comp {
                        let deg: u32 = term.powers.iter().sum();
                        match deg {
                            0 => constant[i] += term.coeff,
                            1 => {
                                let j = term.powers.iter().position(|&p| p == 1).unwrap();
                                linear[(i, j)] += term.coeff;
                            }
                            2 => {
                                let mut vars = Vec::new();
                                for (j, &p) in term.powers.iter().enumerate() {
                                    for _ in 0..p {
                                        vars.push(j);
                                    }
                                }
                                quad.push((i, vars[0].min(vars[1]), vars[0].max(vars[1]), term.coeff));
                            }
                            _ => {
                                return Err(Error::UnsupportedField(format!(
                                    "degree {deg} > 2 in component {i}"
                                )))
                            }
                        }
                    }
                }
                Ok(QuadraticField { n, constant, linear, quad })
            }
        }
    }
}

/// Quadratic field `g_i(y) = c_i + Σ_j b_ij y_j + Σ q_(i,j,l) y_j y_l`.
#[derive(Debug, Clone)]
pub struct QuadraticField {
    pub n: usize,
    pub constant: Vec<f64>,
    pub linear: RealMat,
    /// (component, j, l, coefficient) with j <= l.
    pub quad: Vec<(usize, usize, usize, f64)>,
}

impl QuadraticField {
    pub fn eval(&self, y: &[f64], out: &mut [f64]) {
        for i in 0..self.n {
            let mut v = self.constant[i];
            for j in 0..self.n {
                v += self.linear[(i, j)] * y[j];
            }
            out[i] = v;
        }
        for &(i, j, l, q) in &self.quad {
            out[i] += q * y[j] * y[l];
        }
    }

    /// Jacobian ∇g(y).
    pub fn jacobian_at(&self, y: &[f64]) -> RealMat {
        let mut m = self.linear.clone();
        for &(i, j, l, q) in &self.quad {
            m[(i, l)] += q * y[j];
            m[(i, j)] += q * y[l];
        }
        m
    }

    /// Affine decomposition ∇g(y) = J0 + Σ_i y_i J_i.
    pub fn jacobian_parts(&self) -> (RealMat, Vec<RealMat>) {
        let j0 = self.linear.clone();
        let mut ji = vec![RealMat::zeros(self.n, self.n); self.n];
        for &(i, j, l, q) in &self.quad {
            ji[j][(i, l)] += q;
            ji[l][(i, j)] += q;
        }
        (j0, ji)
    }
}

/// One stored orbit coefficient row in the JSON format.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct XiCoeff {
    k: usize,
    re: Vec<Interval>,
    im: Vec<Interval>,
}

/// Validated (or trusted) periodic orbit data.
///
/// Encodes the hypothesis `|τ_γ − τ̄_γ| ≤ r_γ`, coefficient deviations
/// `≤ r_γ w_k^{-s★}` for stored modes and `|ξ_k|_∞ ≤ r_γ w_k^{-s★}` beyond
/// them. When `rigorous` is false the data is a numerical candidate and every
/// downstream statement is conditional on this hypothesis.
#[derive(Debug, Clone)]
pub struct OrbitEnclosure {
    pub field: VectorFieldSpec,
    /// Enclosure of the approximate period τ̄ (widen by `r_gamma` for the
    /// true period).
    pub tau: Interval,
    pub s_star: f64,
    pub m_gamma: usize,
    /// Coefficients ξ_k, k = 0..=m_gamma, each of length n.
    pub xi: Vec<Vec<ComplexInterval>>,
    pub r_gamma: f64,
    pub rigorous: bool,
}

#[derive(Debug, Serialize, Deserialize)]
struct OrbitFile {
    field: VectorFieldSpec,
    tau: Interval,
    s_star: f64,
    m_gamma: usize,
    r_gamma: f64,
    rigorous: bool,
    xi: Vec<XiCoeff>,
}

impl OrbitEnclosure {
    pub fn validate(&self) -> Result<()> {
        if self.s_star < 2.0 {
            return Err(Error::MalformedOrbitFile(format!("s_star = {} < 2", self.s_star)));
        }
        if self.r_gamma < 0.0 {
            return Err(Error::MalformedOrbitFile("r_gamma < 0".into()));
        }
        if self.xi.len() != self.m_gamma + 1 {
            return Err(Error::MalformedOrbitFile(format!(
                "m_gamma = {} but {} coefficient rows stored",
                self.m_gamma,
                self.xi.len()
            )));
        }
        for (k, row) in self.xi.iter().enumerate() {
            if row.len() != self.field.n {
                return Err(Error::MalformedOrbitFile(format!(
                    "coefficient {k} has {} components, field dimension is {}",
                    row.len(),
                    self.field.n
                )));
            }
        }
        for z in &self.xi[0] {
            if z.im.mag() != 0.0 {
                return Err(Error::MalformedOrbitFile(
                    "k=0 coefficient must be real".into(),
                ));
            }
        }
        if self.tau.lo() <= 0.0 {
            return Err(Error::MalformedOrbitFile("period must be positive".into()));
        }
        Ok(())
    }

    /// Enclosure of the true period.
    pub fn tau_enclosure(&self) -> Interval {
        self.tau.add(&Interval::symmetric(self.r_gamma))
    }

    /// Enclosure of ξ_k including the orbit-ball deviation.
    pub fn xi_enclosure(&self, k: usize) -> Vec<ComplexInterval> {
        let d = crate::sequence::ball_tail_bound(self.r_gamma, self.s_star, k as i64);
        let pad = Interval::symmetric(d);
        self.xi[k]
            .iter()
            .map(|z| {
                if k == 0 {
                    // The zero mode of a real orbit is real.
                    ComplexInterval::new(z.re.add(&pad), Interval::ZERO)
                } else {
                    ComplexInterval::new(z.re.add(&pad), z.im.add(&pad))
                }
            })
            .collect()
    }

    /// Midpoint trajectory value at time t (non-rigorous).
    pub fn gamma_mid_at(&self, t: f64) -> Vec<f64> {
        let n = self.field.n;
        let tau = self.tau.mid();
        let omega = 2.0 * std::f64::consts::PI / tau;
        let mut out = vec![0.0; n];
        for i in 0..n {
            out[i] = self.xi[0][i].re.mid();
        }
        for k in 1..=self.m_gamma {
            let (c, s) = ((k as f64 * omega * t).cos(), (k as f64 * omega * t).sin());
            for i in 0..n {
                let (re, im) = self.xi[k][i].mid();
                out[i] += 2.0 * (re * c - im * s);
            }
        }
        out
    }

    /// Enclosure of the orbit point γ(θ).
    pub fn gamma_at(&self, theta: &Interval) -> Result<Vec<Interval>> {
        let tau = self.tau_enclosure();
        let omega = pi().scale(2.0).div(&tau)?;
        let base = omega.mul(theta);
        let mut out: Vec<Interval> = self.xi_enclosure(0).iter().map(|z| z.re).collect();
        for k in 1..=self.m_gamma {
            let ang = base.scale(k as f64);
            let c = cos_enclosure(&ang);
            let s = sin_enclosure(&ang);
            for (i, z) in self.xi_enclosure(k).iter().enumerate() {
                let term = z.re.mul(&c).sub(&z.im.mul(&s)).scale(2.0);
                out[i] = out[i].add(&term);
            }
        }
        // Tail: |ξ_k| ≤ √2 r_γ w_k^{-s★} for k > m_gamma.
        let tail = up(2.0 * sqrt2().hi() * self.r_gamma * zeta_upper(self.m_gamma.max(1), self.s_star)?);
        let pad = Interval::symmetric(tail);
        Ok(out.into_iter().map(|x| x.add(&pad)).collect())
    }

    /// Construct the Jacobian coefficient sequence `A(t) = ∇g(γ(t))` in the
    /// doubled-period basis: stored index 2l holds the l-th coefficient of
    /// the period-τ expansion, odd indices are exactly zero, and the tail
    /// constant reflects `|ξ_k|_∞ ≤ r_γ w_k^{-s★}` beyond the stored modes.
    pub fn jacobian_coeffs(&self) -> Result<MatrixFourierSeq> {
        let quad = self.field.quadratic_form()?;
        let n = self.field.n;
        let (j0, ji) = quad.jacobian_parts();

        let stored = 2 * self.m_gamma + 1;
        let mut coeffs = Vec::with_capacity(stored);
        for idx in 0..stored {
            if idx % 2 == 1 {
                coeffs.push(SeqCoeff {
                    re: IntervalMatrix::zeros(n, n),
                    im: IntervalMatrix::zeros(n, n),
                });
                continue;
            }
            let l = idx / 2;
            let xi_l = self.xi_enclosure(l);
            let mut re = IntervalMatrix::from_fn(n, n, |a, b| {
                if l == 0 {
                    Interval::point(j0[(a, b)])
                } else {
                    Interval::ZERO
                }
            });
            let mut im = IntervalMatrix::zeros(n, n);
            for (i, j) in ji.iter().enumerate() {
                for a in 0..n {
                    for b in 0..n {
                        let c = j[(a, b)];
                        if c != 0.0 {
                            re[(a, b)] = re[(a, b)].add(&xi_l[i].re.scale(c));
                            im[(a, b)] = im[(a, b)].add(&xi_l[i].im.scale(c));
                        }
                    }
                }
            }
            coeffs.push(SeqCoeff { re, im });
        }

        // Tail constant in doubled indexing: |A_{2l}|_∞ ≤ qmax √2 r_γ w_l^{-s★}
        //                                             = qmax √2 r_γ 2^{s★} w_{2l}^{-s★}.
        let mut qmax: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                let mut s = 0.0;
                for j in &ji {
                    s += j[(a, b)].abs();
                }
                qmax = qmax.max(s);
            }
        }
        let two_pow = pow_enclosure(&Interval::point(2.0), self.s_star)?.hi();
        let tail_c = if self.r_gamma == 0.0 {
            0.0
        } else {
            up(up(up(qmax * sqrt2().hi()) * self.r_gamma) * two_pow)
        };

        MatrixFourierSeq::new(n, self.tau_enclosure(), coeffs, tail_c, self.s_star)
    }

    /// Residual `max_j |γ̇(t_j) − g(γ(t_j))|_∞` of the midpoint data over a
    /// uniform grid (non-rigorous quality metric).
    pub fn midpoint_residual(&self, grid: usize) -> Result<f64> {
        let quad = self.field.quadratic_form()?;
        let n = self.field.n;
        let tau = self.tau.mid();
        let omega = 2.0 * std::f64::consts::PI / tau;
        let mut worst: f64 = 0.0;
        let mut g = vec![0.0; n];
        for j in 0..grid {
            let t = tau * j as f64 / grid as f64;
            let y = self.gamma_mid_at(t);
            // γ̇(t) from the series
            let mut dy = vec![0.0; n];
            for k in 1..=self.m_gamma {
                let kw = k as f64 * omega;
                let (c, s) = ((kw * t).cos(), (kw * t).sin());
                for i in 0..n {
                    let (re, im) = self.xi[k][i].mid();
                    dy[i] += 2.0 * kw * (-re * s - im * c);
                }
            }
            quad.eval(&y, &mut g);
            for i in 0..n {
                worst = worst.max((dy[i] - g[i]).abs());
            }
        }
        Ok(worst)
    }

    /// Serialize to the orbit JSON format.
    pub fn to_json(&self) -> Result<String> {
        let file = OrbitFile {
            field: self.field.clone(),
            tau: self.tau,
            s_star: self.s_star,
            m_gamma: self.m_gamma,
            r_gamma: self.r_gamma,
            rigorous: self.rigorous,
            xi: self
                .xi
                .iter()
                .enumerate()
                .map(|(k, row)| XiCoeff {
                    k,
                    re: row.iter().map(|z| z.re).collect(),
                    im: row.iter().map(|z| z.im).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file)
            .map_err(|e| Error::MalformedOrbitFile(e.to_string()))
    }

    /// Parse from the orbit JSON format, with outward rounding on endpoints.
    pub fn from_json(text: &str) -> Result<OrbitEnclosure> {
        let file: OrbitFile =
            serde_json::from_str(text).map_err(|e| Error::MalformedOrbitFile(e.to_string()))?;
        let n = file.field.n;
        let mut xi = vec![vec![ComplexInterval::ZERO; n]; file.m_gamma + 1];
        let mut seen = vec![false; file.m_gamma + 1];
        for row in &file.xi {
            if row.k > file.m_gamma {
                return Err(Error::MalformedOrbitFile(format!(
                    "coefficient index {} exceeds m_gamma = {}",
                    row.k, file.m_gamma
                )));
            }
            if row.re.len() != n || row.im.len() != n {
                return Err(Error::MalformedOrbitFile(format!(
                    "coefficient {} has wrong arity",
                    row.k
                )));
            }
            xi[row.k] = (0..n)
                .map(|i| ComplexInterval::new(row.re[i], row.im[i]))
                .collect();
            seen[row.k] = true;
        }
        if let Some(k) = seen.iter().position(|s| !s) {
            return Err(Error::MalformedOrbitFile(format!("coefficient {k} missing")));
        }
        let orbit = OrbitEnclosure {
            field: file.field,
            tau: file.tau,
            s_star: file.s_star,
            m_gamma: file.m_gamma,
            xi,
            r_gamma: file.r_gamma,
            rigorous: file.rigorous,
        };
        orbit.validate()?;
        Ok(orbit)
    }
}

/// Read an orbit enclosure from a file.
pub fn parse_orbit(path: &std::path::Path) -> Result<OrbitEnclosure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::MalformedOrbitFile(format!("{}: {e}", path.display())))?;
    OrbitEnclosure::from_json(&text)
}

/// Write an orbit enclosure to a file.
pub fn emit_orbit(orbit: &OrbitEnclosure, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, orbit.to_json()?)?;
    Ok(())
}
