//! Outward-rounded interval arithmetic.
//!
//! Every arithmetic result encloses the exact real result. Rounding is
//! realized in software: each operation is evaluated in the default
//! round-to-nearest mode and the endpoints are then bumped one representable
//! step outward. The bump only loosens enclosures, never invalidates them,
//! and it keeps the arithmetic free of any global floating point state, so
//! values can be shared across threads without rounding-mode hazards.

mod complex;
mod functions;
mod matrix;

pub use complex::ComplexInterval;
pub use functions::{
    cos_enclosure, exp_enclosure, ln_enclosure, pi, pow_enclosure, sin_enclosure, sqrt2,
};
pub use matrix::IntervalMatrix;

use crate::{Error, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Bump one representable step down, saturating at -inf.
#[inline]
pub(crate) fn down(x: f64) -> f64 {
    if x.is_nan() {
        f64::NEG_INFINITY
    } else {
        x.next_down()
    }
}

/// Bump one representable step up, saturating at +inf.
#[inline]
pub(crate) fn up(x: f64) -> f64 {
    if x.is_nan() {
        f64::INFINITY
    } else {
        x.next_up()
    }
}

/// A closed real interval `[lo, hi]` with `lo <= hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub const ZERO: Interval = Interval { lo: 0.0, hi: 0.0 };
    pub const ONE: Interval = Interval { lo: 1.0, hi: 1.0 };

    /// Interval from explicit endpoints. Panics on `lo > hi` or NaN: that is
    /// a programming error, not a data error.
    pub fn new(lo: f64, hi: f64) -> Interval {
        assert!(!lo.is_nan() && !hi.is_nan() && lo <= hi, "bad interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    /// Degenerate (zero width) interval.
    pub fn point(x: f64) -> Interval {
        assert!(!x.is_nan(), "NaN point");
        Interval { lo: x, hi: x }
    }

    /// Symmetric interval `[-r, r]`.
    pub fn symmetric(r: f64) -> Interval {
        assert!(r >= 0.0, "negative radius {r}");
        Interval { lo: -r, hi: r }
    }

    /// Interval `mid ± rad`, endpoints bumped outward.
    pub fn with_radius(mid: f64, rad: f64) -> Interval {
        assert!(rad >= 0.0, "negative radius {rad}");
        Interval { lo: down(mid - rad), hi: up(mid + rad) }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    /// Midpoint (not rounded; used for non-rigorous seeding only).
    #[inline]
    pub fn mid(&self) -> f64 {
        let m = 0.5 * (self.lo + self.hi);
        if m.is_finite() {
            m
        } else {
            0.5 * self.lo + 0.5 * self.hi
        }
    }

    /// Upper bound for the radius around `mid()`.
    pub fn rad(&self) -> f64 {
        let m = self.mid();
        up(f64::max(m - self.lo, self.hi - m))
    }

    /// Upper bound for the width `hi - lo`.
    pub fn width(&self) -> f64 {
        up(self.hi - self.lo)
    }

    /// Magnitude: upper bound of |x| over the interval.
    #[inline]
    pub fn mag(&self) -> f64 {
        f64::max(self.lo.abs(), self.hi.abs())
    }

    /// Mignitude: lower bound of |x| over the interval.
    pub fn mig(&self) -> f64 {
        if self.contains(0.0) {
            0.0
        } else {
            f64::min(self.lo.abs(), self.hi.abs())
        }
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_finite(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    /// Hull of two intervals.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }

    pub fn intersection(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Absolute value as an interval, `{|x| : x in self}`.
    pub fn abs(&self) -> Interval {
        Interval { lo: self.mig(), hi: self.mag() }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }

    #[inline]
    fn is_exact_zero(&self) -> bool {
        self.lo == 0.0 && self.hi == 0.0
    }

    pub fn add(&self, rhs: &Interval) -> Interval {
        // Adding an exact zero is exact; keep zeros clean.
        if rhs.is_exact_zero() {
            return *self;
        }
        if self.is_exact_zero() {
            return *rhs;
        }
        Interval { lo: down(self.lo + rhs.lo), hi: up(self.hi + rhs.hi) }
    }

    pub fn sub(&self, rhs: &Interval) -> Interval {
        if rhs.is_exact_zero() {
            return *self;
        }
        if self.is_exact_zero() {
            return rhs.neg();
        }
        Interval { lo: down(self.lo - rhs.hi), hi: up(self.hi - rhs.lo) }
    }

    pub fn mul(&self, rhs: &Interval) -> Interval {
        // A zero factor gives an exact zero product.
        if self.is_exact_zero() || rhs.is_exact_zero() {
            return Interval::ZERO;
        }
        // Endpoint products; NaN (0 * inf) is widened conservatively.
        let cands = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in cands {
            if c.is_nan() {
                lo = f64::NEG_INFINITY;
                hi = f64::INFINITY;
            } else {
                lo = lo.min(c);
                hi = hi.max(c);
            }
        }
        Interval { lo: down(lo), hi: up(hi) }
    }

    /// Multiplication by an exact scalar.
    pub fn scale(&self, c: f64) -> Interval {
        self.mul(&Interval::point(c))
    }

    /// Division; errors when the divisor contains zero.
    pub fn div(&self, rhs: &Interval) -> Result<Interval> {
        if rhs.contains(0.0) {
            return Err(Error::DivisionByZeroInterval);
        }
        if self.is_exact_zero() {
            return Ok(Interval::ZERO);
        }
        let cands = [
            self.lo / rhs.lo,
            self.lo / rhs.hi,
            self.hi / rhs.lo,
            self.hi / rhs.hi,
        ];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in cands {
            lo = lo.min(c);
            hi = hi.max(c);
        }
        Ok(Interval { lo: down(lo), hi: up(hi) })
    }

    /// Reciprocal; errors when the interval contains zero.
    pub fn recip(&self) -> Result<Interval> {
        Interval::ONE.div(self)
    }

    /// Square, sharper than `mul(self)` around zero.
    pub fn square(&self) -> Interval {
        if self.is_exact_zero() {
            return Interval::ZERO;
        }
        let m = self.mag();
        let lo = self.mig();
        Interval { lo: down(lo * lo).max(0.0), hi: up(m * m) }
    }

    /// Square root; errors on intervals extending below zero.
    pub fn sqrt(&self) -> Result<Interval> {
        if self.lo < 0.0 {
            return Err(Error::DomainError(format!("sqrt of [{}, {}]", self.lo, self.hi)));
        }
        Ok(Interval { lo: down(self.lo.sqrt()).max(0.0), hi: up(self.hi.sqrt()) })
    }

    /// Integer power with sign handling; exponent may be negative.
    pub fn powi(&self, n: i32) -> Result<Interval> {
        if n < 0 {
            return self.powi(-n)?.recip();
        }
        let mut acc = Interval::ONE;
        let mut base = *self;
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.square();
            e >>= 1;
        }
        if n % 2 == 0 && n != 0 {
            // Even powers are nonnegative; tighten driven by mignitude.
            let lo = self.mig();
            let tight_lo = down(lo.powi(n));
            Ok(Interval { lo: acc.lo.max(tight_lo).max(0.0), hi: acc.hi })
        } else {
            Ok(acc)
        }
    }

    /// Parse decimal strings outward. If a string is the shortest
    /// round-trip form of the parsed value the endpoint is taken exactly,
    /// so emit-parse round trips are lossless; otherwise the endpoint is
    /// bumped outward to cover the decimal it came from.
    pub fn from_decimal_strs(lo_s: &str, hi_s: &str) -> Result<Interval> {
        let lo: f64 = lo_s
            .trim()
            .parse()
            .map_err(|e| Error::MalformedInput(format!("bad interval endpoint {lo_s:?}: {e}")))?;
        let hi: f64 = hi_s
            .trim()
            .parse()
            .map_err(|e| Error::MalformedInput(format!("bad interval endpoint {hi_s:?}: {e}")))?;
        let lo = if format_shortest(lo) == lo_s.trim() { lo } else { down(lo) };
        let hi = if format_shortest(hi) == hi_s.trim() { hi } else { up(hi) };
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return Err(Error::MalformedInput(format!("empty interval [{lo_s}, {hi_s}]")));
        }
        Ok(Interval { lo, hi })
    }
}

/// Shortest decimal string that parses back to exactly `x`.
pub(crate) fn format_shortest(x: f64) -> String {
    let mut s = format!("{x}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", format_shortest(self.lo), format_shortest(self.hi))
    }
}

impl std::ops::Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval::add(&self, &rhs)
    }
}

impl std::ops::Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval::sub(&self, &rhs)
    }
}

impl std::ops::Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        Interval::mul(&self, &rhs)
    }
}

impl std::ops::Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::neg(&self)
    }
}

#[derive(Serialize, Deserialize)]
struct IntervalRepr {
    lo: String,
    hi: String,
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        IntervalRepr { lo: format_shortest(self.lo), hi: format_shortest(self.hi) }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Interval {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = IntervalRepr::deserialize(deserializer)?;
        Interval::from_decimal_strs(&repr.lo, &repr.hi).map_err(D::Error::custom)
    }
}
