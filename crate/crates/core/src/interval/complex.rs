//! Rectangular complex interval arithmetic.

use super::{up, Interval};
use crate::Result;
use serde::{Deserialize, Serialize};

/// A rectangle `re + i·im` in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexInterval {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexInterval {
    pub const ZERO: ComplexInterval =
        ComplexInterval { re: Interval::ZERO, im: Interval::ZERO };

    pub fn new(re: Interval, im: Interval) -> ComplexInterval {
        ComplexInterval { re, im }
    }

    pub fn point(re: f64, im: f64) -> ComplexInterval {
        ComplexInterval { re: Interval::point(re), im: Interval::point(im) }
    }

    pub fn real(re: Interval) -> ComplexInterval {
        ComplexInterval { re, im: Interval::ZERO }
    }

    pub fn conj(&self) -> ComplexInterval {
        ComplexInterval { re: self.re, im: self.im.neg() }
    }

    pub fn neg(&self) -> ComplexInterval {
        ComplexInterval { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn add(&self, rhs: &ComplexInterval) -> ComplexInterval {
        ComplexInterval { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn sub(&self, rhs: &ComplexInterval) -> ComplexInterval {
        ComplexInterval { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }

    pub fn mul(&self, rhs: &ComplexInterval) -> ComplexInterval {
        ComplexInterval {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    pub fn scale(&self, c: f64) -> ComplexInterval {
        ComplexInterval { re: self.re.scale(c), im: self.im.scale(c) }
    }

    /// Division through the conjugate; errors when `0 ∈ |rhs|²`.
    pub fn div(&self, rhs: &ComplexInterval) -> Result<ComplexInterval> {
        let den = rhs.re.square().add(&rhs.im.square());
        let num = self.mul(&rhs.conj());
        Ok(ComplexInterval { re: num.re.div(&den)?, im: num.im.div(&den)? })
    }

    /// Upper bound of the complex modulus over the rectangle.
    pub fn abs_upper(&self) -> f64 {
        let a = self.re.mag();
        let b = self.im.mag();
        if a == 0.0 {
            return b;
        }
        if b == 0.0 {
            return a;
        }
        up(up(up(a * a) + up(b * b)).sqrt())
    }

    /// Enclosure of |z|² over the rectangle.
    pub fn norm_sq(&self) -> Interval {
        self.re.square().add(&self.im.square())
    }

    pub fn mid(&self) -> (f64, f64) {
        (self.re.mid(), self.im.mid())
    }

    pub fn contains(&self, re: f64, im: f64) -> bool {
        self.re.contains(re) && self.im.contains(im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_matches_exact_gaussian_integers() {
        let a = ComplexInterval::point(2.0, 3.0);
        let b = ComplexInterval::point(-1.0, 4.0);
        let p = a.mul(&b);
        // (2+3i)(-1+4i) = -14+5i
        assert!(p.contains(-14.0, 5.0));
        assert!(p.re.width() < 1e-13 && p.im.width() < 1e-13);
    }

    #[test]
    fn div_roundtrip() {
        let a = ComplexInterval::point(1.5, -2.25);
        let b = ComplexInterval::point(0.5, 0.75);
        let q = a.div(&b).unwrap();
        let back = q.mul(&b);
        assert!(back.contains(1.5, -2.25));
    }

    #[test]
    fn abs_upper_dominates() {
        let z = ComplexInterval::point(3.0, 4.0);
        let m = z.abs_upper();
        assert!(m >= 5.0 && m < 5.0 + 1e-13);
    }
}
