//! Rigorous enclosures of elementary functions.
//!
//! Point evaluations use argument reduction against interval constants and
//! truncated Taylor/atanh series with explicit remainder bounds; interval
//! arguments go through monotonicity (exp, ln, pow) or a mean value form
//! (sin, cos). Everything is built on the outward-rounded base arithmetic,
//! so results are guaranteed enclosures rather than faithful roundings.

use super::{up, Interval};
use crate::{Error, Result};

/// Enclosure of π. The nearest double sits below π, one step up is above.
pub fn pi() -> Interval {
    Interval::new(std::f64::consts::PI.next_down(), std::f64::consts::PI.next_up())
}

/// Enclosure of √2.
pub fn sqrt2() -> Interval {
    Interval::new(
        std::f64::consts::SQRT_2.next_down(),
        std::f64::consts::SQRT_2.next_up(),
    )
}

fn ln2() -> Interval {
    Interval::new(std::f64::consts::LN_2.next_down(), std::f64::consts::LN_2.next_up())
}

fn half_pi() -> Interval {
    pi().scale(0.5)
}

/// exp at a point argument, as an enclosure.
fn exp_point(x: f64) -> Interval {
    if x > 709.0 {
        return Interval::new(f64::MAX, f64::INFINITY);
    }
    if x < -745.0 {
        return Interval::new(0.0, f64::MIN_POSITIVE);
    }
    // x = k ln2 + r with |r| <= ln2/2, then e^x = 2^k e^r.
    let k = (x / std::f64::consts::LN_2).round();
    let r = Interval::point(x).sub(&ln2().scale(k));
    debug_assert!(r.mag() < 0.36);

    // Horner sum of sum_{i<=13} r^i/i! plus a geometric remainder bound.
    let mut acc = Interval::ONE;
    for i in (1..=13u32).rev() {
        acc = Interval::ONE.add(&r.mul(&acc).div(&Interval::point(i as f64)).unwrap());
    }
    let rm = r.mag();
    let rem = rm.powi(14) / 8.71782912e10 / (1.0 - rm / 15.0);
    let e_r = acc.add(&Interval::symmetric(up(rem)));

    let scale = 2.0f64.powi(k as i32);
    e_r.scale(scale)
}

/// Monotone interval exp.
pub fn exp_enclosure(x: &Interval) -> Interval {
    let lo = exp_point(x.lo()).lo().max(0.0);
    let hi = exp_point(x.hi()).hi();
    Interval::new(lo, hi)
}

/// Split a positive finite double into (f, e) with x = f 2^e, f in [0.5, 1).
fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x > 0.0 && x.is_finite());
    let (x, bias) = if x < f64::MIN_POSITIVE {
        (x * 2f64.powi(80), -80i64)
    } else {
        (x, 0)
    };
    let bits = x.to_bits();
    let e = ((bits >> 52) & 0x7ff) as i64 - 1022;
    let f = f64::from_bits((bits & 0x000f_ffff_ffff_ffff) | (1022u64 << 52));
    (f, e + bias)
}

/// ln at a positive point argument, as an enclosure.
fn ln_point(x: f64) -> Interval {
    let (mut f, mut e) = frexp(x);
    if f < std::f64::consts::FRAC_1_SQRT_2 {
        f *= 2.0;
        e -= 1;
    }
    // ln f = 2 atanh(u), u = (f-1)/(f+1), |u| <= 0.1716...
    let f_iv = Interval::point(f);
    let u = f_iv.sub(&Interval::ONE).div(&f_iv.add(&Interval::ONE)).unwrap();
    let u2 = u.square();
    let mut acc = Interval::ZERO;
    for i in (0..=9u32).rev() {
        let c = Interval::point(1.0 / (2 * i + 1) as f64);
        acc = c.add(&u2.mul(&acc));
    }
    let um = u.mag();
    let rem = um.powi(21) / (21.0 * (1.0 - um * um));
    let ln_f = u.mul(&acc).add(&Interval::symmetric(up(rem))).scale(2.0);
    ln_f.add(&ln2().scale(e as f64))
}

/// Monotone interval ln; the argument must be strictly positive.
pub fn ln_enclosure(x: &Interval) -> Result<Interval> {
    if x.lo() <= 0.0 {
        return Err(Error::DomainError(format!("ln of {x}")));
    }
    Ok(Interval::new(ln_point(x.lo()).lo(), ln_point(x.hi()).hi()))
}

/// sin on |r| <= 0.8 by Taylor series with remainder.
///
/// Horner form: sin r = r (1 - r²/(2·3) (1 - r²/(4·5) (...))).
fn sin_small(r: &Interval) -> Interval {
    let r2 = r.square();
    let mut s = Interval::ONE;
    for i in (1..=7u32).rev() {
        let denom = ((2 * i) * (2 * i + 1)) as f64;
        s = Interval::ONE.sub(&r2.mul(&s).div(&Interval::point(denom)).unwrap());
    }
    let rm = r.mag();
    let rem = rm.powi(17) / 3.55687428096e14;
    r.mul(&s).add(&Interval::symmetric(up(rem)))
}

/// cos on |r| <= 0.8 by Taylor series with remainder.
fn cos_small(r: &Interval) -> Interval {
    let r2 = r.square();
    let mut c = Interval::ONE;
    for i in (1..=8u32).rev() {
        let denom = ((2 * i - 1) * (2 * i)) as f64;
        c = Interval::ONE.sub(&r2.mul(&c).div(&Interval::point(denom)).unwrap());
    }
    let rm = r.mag();
    let rem = rm.powi(18) / 6.402373705728e15;
    c.add(&Interval::symmetric(up(rem)))
}

fn clamp_unit(x: Interval) -> Interval {
    Interval::new(x.lo().max(-1.0), x.hi().min(1.0))
}

/// sin at a point argument: reduce mod π/2 and dispatch on the quadrant.
fn sin_point(x: f64) -> Interval {
    let n = (x * std::f64::consts::FRAC_2_PI).round();
    let r = Interval::point(x).sub(&half_pi().scale(n));
    let m = (n as i64).rem_euclid(4);
    let v = match m {
        0 => sin_small(&r),
        1 => cos_small(&r),
        2 => sin_small(&r).neg(),
        _ => cos_small(&r).neg(),
    };
    clamp_unit(v)
}

fn cos_point(x: f64) -> Interval {
    let n = (x * std::f64::consts::FRAC_2_PI).round();
    let r = Interval::point(x).sub(&half_pi().scale(n));
    let m = (n as i64).rem_euclid(4);
    let v = match m {
        0 => cos_small(&r),
        1 => sin_small(&r).neg(),
        2 => cos_small(&r).neg(),
        _ => sin_small(&r),
    };
    clamp_unit(v)
}

/// Interval sin via the mean value form around the midpoint.
pub fn sin_enclosure(x: &Interval) -> Interval {
    if !x.is_finite() || x.width() > std::f64::consts::TAU {
        return Interval::new(-1.0, 1.0);
    }
    let m = x.mid();
    let slop = x.sub(&Interval::point(m)).mag();
    clamp_unit(sin_point(m).add(&Interval::symmetric(slop)))
}

/// Interval cos via the mean value form around the midpoint.
pub fn cos_enclosure(x: &Interval) -> Interval {
    if !x.is_finite() || x.width() > std::f64::consts::TAU {
        return Interval::new(-1.0, 1.0);
    }
    let m = x.mid();
    let slop = x.sub(&Interval::point(m)).mag();
    clamp_unit(cos_point(m).add(&Interval::symmetric(slop)))
}

/// Interval power with a real exponent; the base must allow it.
///
/// Integer exponents use repeated squaring and permit any base; fractional
/// exponents require a strictly positive base and go through exp(s ln x).
pub fn pow_enclosure(base: &Interval, s: f64) -> Result<Interval> {
    if s == 0.0 {
        return Ok(Interval::ONE);
    }
    if s.fract() == 0.0 && s.abs() <= 512.0 {
        return base.powi(s as i32);
    }
    if base.lo() <= 0.0 {
        return Err(Error::DomainError(format!("{base}^{s} with nonpositive base")));
    }
    let ln_b = ln_enclosure(base)?;
    Ok(exp_enclosure(&ln_b.scale(s)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_encloses(iv: Interval, x: f64, max_width: f64) {
        assert!(iv.contains(x), "{iv} should contain {x}");
        assert!(iv.width() <= max_width, "{iv} too wide (> {max_width})");
    }

    #[test]
    fn exp_reference_values() {
        assert_encloses(exp_point(0.0), 1.0, 1e-15);
        assert_encloses(exp_point(1.0), std::f64::consts::E, 1e-14);
        assert_encloses(exp_point(-9.38), 8.439520253333736e-5, 1e-17);
        assert_encloses(exp_point(20.0), 4.851651954097903e8, 1e-5);
    }

    #[test]
    fn ln_reference_values() {
        assert_encloses(ln_point(1.0), 0.0, 1e-15);
        assert_encloses(ln_point(2.0), std::f64::consts::LN_2, 1e-15);
        assert_encloses(ln_point(1e-9), -20.72326583694641, 1e-13);
        assert_encloses(ln_point(6.02e23), 54.75454439818378, 1e-13);
    }

    #[test]
    fn exp_ln_inverse_on_grid() {
        for i in 1..200 {
            let x = -8.0 + 0.08 * i as f64;
            let e = exp_enclosure(&Interval::point(x));
            let back = ln_enclosure(&e).unwrap();
            assert!(back.contains(x));
            assert!(back.width() < 1e-12);
        }
    }

    #[test]
    fn trig_reference_values() {
        assert_encloses(sin_point(0.0), 0.0, 1e-16);
        assert_encloses(cos_point(0.0), 1.0, 1e-15);
        assert_encloses(sin_point(1.0), 0.8414709848078965, 5e-15);
        assert_encloses(cos_point(100.0), 0.8623188722876839, 5e-13);
        assert_encloses(sin_point(-700.5), -0.07509100210558642, 1e-12);
        // sin over the π enclosure must contain 0.
        assert!(sin_enclosure(&pi()).contains(0.0));
        assert!(cos_enclosure(&pi()).contains(-1.0));
    }

    #[test]
    fn trig_mean_value_over_widths() {
        let x = Interval::new(1.0, 1.001);
        let s = sin_enclosure(&x);
        assert!(s.contains(1.0f64.sin()) && s.contains(1.001f64.sin()));
        assert!(s.width() < 2e-3);
    }

    #[test]
    fn pow_integer_and_fractional() {
        let b = Interval::point(3.0);
        assert_encloses(pow_enclosure(&b, 2.0).unwrap(), 9.0, 1e-14);
        assert_encloses(pow_enclosure(&b, -2.0).unwrap(), 1.0 / 9.0, 1e-16);
        assert_encloses(pow_enclosure(&b, 2.5).unwrap(), 15.588457268119896, 5e-13);
        assert!(pow_enclosure(&Interval::new(-1.0, 2.0), 2.5).is_err());
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn constants_vs_high_precision_decimals() {
        // 25-digit decimals straddling the true constants.
        assert!(pi().lo() < 3.141592653589793238462643);
        assert!(pi().hi() > 3.141592653589793238462644);
        assert!(sqrt2().lo() < 1.414213562373095048801688);
        assert!(sqrt2().hi() > 1.414213562373095048801689);
    }
}
