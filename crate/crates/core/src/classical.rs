//! Classical special functions used as corollary kernels.

use crate::error::{Error, Result};
use crate::gamma::{gamma_complete, ln_gamma_signed, lower_incomplete, ExtGammaArgs};
use crate::quad::QuadratureControls;

/// Generalized Laguerre polynomial `L_n^{(α)}(x)` by the three-term recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let k = k as f64;
        let next = ((2.0 * k + 1.0 + alpha - x) * cur - (k + alpha) * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Unevaluated sum `hi + lo` with `|lo| ≤ ulp(hi)/2`.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    fn new(hi: f64) -> Self {
        Self { hi, lo: 0.0 }
    }

    fn renorm(hi: f64, lo: f64) -> Self {
        let s = hi + lo;
        Self { hi: s, lo: lo - (s - hi) }
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        Self { hi: s, lo: (a - (s - bb)) + (b - bb) }
    }

    fn two_prod(a: f64, b: f64) -> Self {
        let p = a * b;
        Self { hi: p, lo: a.mul_add(b, -p) }
    }

    fn add(self, o: Self) -> Self {
        let s = Self::two_sum(self.hi, o.hi);
        Self::renorm(s.hi, s.lo + self.lo + o.lo)
    }

    fn mul(self, o: Self) -> Self {
        let p = Self::two_prod(self.hi, o.hi);
        Self::renorm(p.hi, p.lo + self.hi * o.lo + self.lo * o.hi)
    }

    fn div(self, o: Self) -> Self {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Self::new(-q1)));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul(Self::new(-q2)));
        let q3 = r.hi / o.hi;
        Self::renorm(q1, q2).add(Self::new(q3))
    }

    fn neg(self) -> Self {
        Self { hi: -self.hi, lo: -self.lo }
    }
}

/// Bessel function of the first kind `J_ν(z)` for real `ν > −1`, `z ≥ 0`.
///
/// The ascending series is summed in double-double arithmetic, which keeps
/// the cancellation between its alternating terms harmless up to `z ≈ 30`.
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    if !(nu > -1.0) || !(z >= 0.0) || !nu.is_finite() || !z.is_finite() {
        return Err(Error::domain(format!("bessel_j needs ν > −1 and finite z ≥ 0, got ν={nu}, z={z}")));
    }
    if z == 0.0 {
        return match nu {
            0.0 => Ok(1.0),
            n if n > 0.0 => Ok(0.0),
            _ => Err(Error::domain(format!("J_{nu}(0) is infinite"))),
        };
    }
    let w = Dd::two_prod(z, z).mul(Dd::new(0.25)).neg();
    let mut term = Dd::new(1.0);
    let mut sum = term;
    for k in 0..1000 {
        let kk = (k + 1) as f64;
        let den = Dd::two_sum(nu, kk).mul(Dd::new(kk));
        term = term.mul(w).div(den);
        sum = sum.add(term);
        if kk * kk > -w.hi && term.hi.abs() <= 1e-33 * sum.hi.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    let series = sum.hi + sum.lo;
    let (lg, _) = ln_gamma_signed(nu + 1.0)?;
    Ok(series * (nu * (0.5 * z).ln() - lg).exp())
}

const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Error function. Series below 3, continued fraction for `erfc` above.
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return -erf(-x);
    }
    if x < 3.0 {
        let x2 = x * x;
        let mut term = x;
        let mut sum = term;
        let mut n = 0.0;
        loop {
            term *= 2.0 * x2 / (2.0 * n + 3.0);
            sum += term;
            n += 1.0;
            if term <= 1e-17 * sum {
                break;
            }
        }
        FRAC_2_SQRT_PI * (-x2).exp() * sum
    } else {
        1.0 - erfc_cf(x)
    }
}

/// `erfc(x)` for `x ≥ 3` by modified Lentz on
/// `erfc(x) = e^{−x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …))))`.
fn erfc_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..500 {
        let a = k as f64 * 0.5;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    0.5 * FRAC_2_SQRT_PI * (-x * x).exp() / f
}

/// Classical lower incomplete gamma `γ(k, x)`.
pub fn classical_lower_gamma(k: f64, x: f64, ctl: &QuadratureControls) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::domain(format!("γ(k, x) needs k > 0, got {k}")));
    }
    lower_incomplete(ExtGammaArgs::new(k, x, 0.0), ctl).map(|r| r.value)
}

/// Beta function `Γ(a)Γ(b)/Γ(a+b)`.
pub fn beta_function(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::domain(format!("beta needs a, b > 0, got ({a}, {b})")));
    }
    if a + b < 150.0 {
        return Ok(gamma_complete(a)? * gamma_complete(b)? / gamma_complete(a + b)?);
    }
    let (la, _) = ln_gamma_signed(a)?;
    let (lb, _) = ln_gamma_signed(b)?;
    let (lab, _) = ln_gamma_signed(a + b)?;
    Ok((la + lb - lab).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn laguerre_examples() {
        assert_eq!(laguerre(0, 0.7, 3.0), 1.0);
        assert_eq!(laguerre(1, 0.7, 3.0), 0.7 + 1.0 - 3.0);
        assert_eq!(laguerre(2, 0.0, 1.0), -0.5);
        let x = 2.0;
        let want = (-x * x * x + 9.0 * x * x - 18.0 * x + 6.0) / 6.0;
        assert!((laguerre(3, 0.0, x) - want).abs() < 1e-14);
    }

    #[test]
    fn bessel_j_examples() {
        assert_eq!(bessel_j(0.0, 0.0).unwrap(), 1.0);
        assert!(bessel_j(0.5, PI).unwrap().abs() < 1e-15);
        assert!((bessel_j(1.0, 2.0).unwrap() - 0.576_724_807_756_873_4).abs() < 1e-15);
        assert!(bessel_j(-1.5, 1.0).is_err());
        assert!(bessel_j(-0.5, 0.0).is_err());
    }

    #[test]
    fn bessel_j_half_order_large_argument() {
        for z in [5.0, 12.5, 20.0, 29.7] {
            let want = (2.0 / (PI * z)).sqrt() * f64::sin(z);
            let got = bessel_j(0.5, z).unwrap();
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1e-3), "z={z}: {got} vs {want}");
        }
    }

    #[test]
    fn erf_examples() {
        assert_eq!(erf(0.0), 0.0);
        assert!((erf(6.0) - 1.0).abs() < 1e-13);
        let e1 = erf(1.0);
        assert!((e1 - 0.842_700_792_949_714_9).abs() < 3e-16, "{e1:e}");
        assert_eq!(erf(-0.3), -erf(0.3));
        let lo = erf(2.999_999_999);
        let hi = erf(3.0);
        assert!((hi - lo).abs() < 1e-12);
    }

    #[test]
    fn classical_lower_gamma_examples() {
        let ctl = QuadratureControls::default();
        assert!((classical_lower_gamma(1.0, 0.8, &ctl).unwrap() - (1.0 - (-0.8f64).exp())).abs() < 1e-14);
        let want = PI.sqrt() * erf(1.0);
        assert!((classical_lower_gamma(0.5, 1.0, &ctl).unwrap() - want).abs() < 1e-13);
        assert!(classical_lower_gamma(0.0, 1.0, &ctl).is_err());
    }

    #[test]
    fn beta_examples() {
        assert!((beta_function(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((beta_function(0.5, 0.5).unwrap() - PI).abs() < 1e-14);
        assert!((beta_function(2.0, 3.0).unwrap() - 1.0 / 12.0).abs() < 1e-16);
        assert!(beta_function(0.0, 1.0).is_err());
        let b = beta_function(100.0, 120.0).unwrap();
        assert!(b > 0.0 && b.is_finite());
    }
}
