//! Classical, generalized and extended incomplete Pochhammer symbols.
//!
//! ```text
//! (λ; x, p)_ν = γ(λ+ν, x; p) / Γ(λ)
//! [λ; x, p]_ν = Γ(λ+ν, x; p) / Γ(λ)
//! (λ; p)_ν    = Γ_p(λ+ν) / Γ(λ)
//! ```
//!
//! Series code never works with these symbols directly because they grow
//! like (λ)_n. [`HeadSequence`] instead produces the bounded ratios
//! `symbol_n / (λ)_n`, i.e. the regularized integrals `Γ(λ+n, x; p)/Γ(λ+n)`.

use crate::error::{Error, Result};
use crate::gamma::{
    complete_regularized, complete_scaled, ln_gamma_signed, lower_regularized, lower_scaled, regularize,
    upper_regularized, upper_scaled, ExtGammaArgs,
};
use crate::quad::{QuadResult, QuadratureControls};

/// Rising factorial (λ)_n = λ(λ+1)…(λ+n−1).
pub fn rising(lambda: f64, n: usize) -> f64 {
    let mut acc = 1.0;
    for k in 0..n {
        acc *= lambda + k as f64;
        if acc == 0.0 {
            break;
        }
    }
    acc
}

/// Arguments `(λ, ν, x, p)` of the incomplete Pochhammer symbols.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PochArgs {
    pub lambda: f64,
    pub nu: f64,
    pub x: f64,
    pub p: f64,
}

impl PochArgs {
    pub fn new(lambda: f64, nu: f64, x: f64, p: f64) -> Self {
        Self { lambda, nu, x, p }
    }

    fn gamma_args(&self) -> ExtGammaArgs {
        ExtGammaArgs::new(self.lambda + self.nu, self.x, self.p)
    }
}

fn check_base(lambda: f64) -> Result<()> {
    if lambda <= 0.0 && lambda == lambda.floor() {
        Err(Error::Pole(lambda))
    } else {
        Ok(())
    }
}

/// (λ; x, p)_ν.
pub fn poch_lower(args: PochArgs, ctl: &QuadratureControls) -> Result<QuadResult> {
    check_base(args.lambda)?;
    regularize(lower_scaled(&args.gamma_args(), ctl)?, args.lambda)
}

/// [λ; x, p]_ν.
pub fn poch_upper(args: PochArgs, ctl: &QuadratureControls) -> Result<QuadResult> {
    check_base(args.lambda)?;
    regularize(upper_scaled(&args.gamma_args(), ctl)?, args.lambda)
}

/// (λ; p)_ν. For `p = 0` this is the classical ratio Γ(λ+ν)/Γ(λ), evaluated
/// without quadrature.
pub fn poch_generalized(lambda: f64, nu: f64, p: f64, ctl: &QuadratureControls) -> Result<QuadResult> {
    check_base(lambda)?;
    if p == 0.0 {
        if lambda + nu <= 0.0 {
            return Err(Error::domain(format!("(λ; 0)_ν needs λ + ν > 0, got {}", lambda + nu)));
        }
        let value = gamma_ratio(lambda + nu, lambda)?;
        return Ok(QuadResult { value, err_estimate: 0.0, n_evals: 0 });
    }
    regularize(complete_scaled(lambda + nu, p, ctl)?, lambda)
}

/// Γ(a)/Γ(b).
pub(crate) fn gamma_ratio(a: f64, b: f64) -> Result<f64> {
    let d = a - b;
    if d >= 0.0 && d == d.floor() && d < 64.0 {
        return Ok(rising(b, d as usize));
    }
    let (la, sa) = ln_gamma_signed(a)?;
    let (lb, sb) = ln_gamma_signed(b)?;
    Ok(sa * sb * (la - lb).exp())
}

/// [λ; x, p]_n for n = 0..=N.
pub fn upper_sequence(lambda: f64, x: f64, p: f64, count: usize, ctl: &QuadratureControls) -> Result<Vec<f64>> {
    let mut head = HeadSequence::new(HeadKind::Upper, lambda, x, p, *ctl)?;
    (0..=count).map(|n| Ok(rising(lambda, n) * head.ratio(n)?)).collect()
}

/// Which incomplete symbol heads a hypergeometric series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HeadKind {
    /// (α; x, p)_n
    Lower,
    /// [α; x, p]_n
    Upper,
    /// (α; p)_n
    Complete,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Mode {
    Constant(f64),
    Recurrence,
    Direct,
}

/// Relative mismatch that sends a recurrence-driven sequence back to
/// per-index quadrature.
const RECURRENCE_CHECK_TOL: f64 = 1e-10;

/// Lazily extended sequence `c_n = symbol_n / (α)_n`.
///
/// Upper and complete sequences with α > 0 are advanced with the
/// integration-by-parts recurrence
///
/// ```text
/// c_{n+1} = c_n + p c_{n-1} / ((α+n)(α+n-1)) + x^{α+n} e^{-x-p/x} / Γ(α+n+1)
/// ```
///
/// (boundary term absent for the complete symbol) seeded by two quadratures.
/// Every time the sequence length passes a power of two the newest entry is
/// recomputed by quadrature; a mismatch switches the sequence to direct
/// quadrature for every index. Lower sequences always use direct quadrature
/// because their recurrence subtracts nearly equal terms.
#[derive(Debug, Clone)]
pub struct HeadSequence {
    kind: HeadKind,
    alpha: f64,
    x: f64,
    p: f64,
    ctl: QuadratureControls,
    mode: Mode,
    values: Vec<f64>,
    quad_evals: usize,
}

impl HeadSequence {
    pub fn new(kind: HeadKind, alpha: f64, x: f64, p: f64, ctl: QuadratureControls) -> Result<Self> {
        check_base(alpha)?;
        ExtGammaArgs::new(alpha, x, p).validate()?;
        ctl.validate()?;
        let mode = match kind {
            HeadKind::Upper if x == 0.0 && p == 0.0 => Mode::Constant(1.0),
            HeadKind::Complete if p == 0.0 => Mode::Constant(1.0),
            HeadKind::Lower if x == 0.0 => Mode::Constant(0.0),
            HeadKind::Upper | HeadKind::Complete if alpha > 0.0 => Mode::Recurrence,
            _ => Mode::Direct,
        };
        Ok(Self { kind, alpha, x, p, ctl, mode, values: Vec::new(), quad_evals: 0 })
    }

    pub fn kind(&self) -> HeadKind {
        self.kind
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Integrand evaluations spent so far.
    pub fn quad_evals(&self) -> usize {
        self.quad_evals
    }

    /// True once the recurrence has been abandoned for direct quadrature.
    pub fn is_direct(&self) -> bool {
        self.mode == Mode::Direct
    }

    fn direct(&mut self, n: usize) -> Result<f64> {
        let args = ExtGammaArgs::new(self.alpha + n as f64, self.x, self.p);
        let r = match self.kind {
            HeadKind::Lower => lower_regularized(args, &self.ctl)?,
            HeadKind::Upper => upper_regularized(args, &self.ctl)?,
            HeadKind::Complete => complete_regularized(args.s, self.p, &self.ctl)?,
        };
        self.quad_evals += r.n_evals;
        Ok(r.value)
    }

    fn boundary(&self, s: f64) -> Result<f64> {
        if self.kind != HeadKind::Upper || self.x == 0.0 {
            return Ok(0.0);
        }
        let (lg, sign) = ln_gamma_signed(s + 1.0)?;
        let barrier = if self.p == 0.0 { 0.0 } else { self.p / self.x };
        Ok(sign * (s * self.x.ln() - self.x - barrier - lg).exp())
    }

    fn extend(&mut self) -> Result<()> {
        let n = self.values.len();
        let next = match self.mode {
            Mode::Constant(c) => c,
            Mode::Direct => self.direct(n)?,
            Mode::Recurrence if n < 2 => self.direct(n)?,
            Mode::Recurrence => {
                let m = n - 1;
                let s = self.alpha + m as f64;
                let c_m = self.values[m];
                let c_prev = self.values[m - 1];
                let next = c_m + self.p * c_prev / (s * (s - 1.0)) + self.boundary(s)?;
                if (n + 1).is_power_of_two() && n >= 7 {
                    let check = self.direct(n)?;
                    let scale = check.abs().max(next.abs());
                    if (check - next).abs() > RECURRENCE_CHECK_TOL * scale {
                        self.mode = Mode::Direct;
                        self.values.clear();
                        for k in 0..n {
                            let v = self.direct(k)?;
                            self.values.push(v);
                        }
                        check
                    } else {
                        next
                    }
                } else {
                    next
                }
            }
        };
        self.values.push(next);
        Ok(())
    }

    /// `symbol_n / (α)_n`.
    pub fn ratio(&mut self, n: usize) -> Result<f64> {
        while self.values.len() <= n {
            self.extend()?;
        }
        Ok(self.values[n])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctl() -> QuadratureControls {
        QuadratureControls::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn rising_examples() {
        assert_eq!(rising(3.0, 4), 360.0);
        assert_eq!(rising(0.37, 0), 1.0);
        assert_eq!(rising(-2.0, 3), 0.0);
        assert_eq!(rising(-2.0, 2), 2.0);
    }

    #[test]
    fn lower_examples() {
        assert_eq!(poch_lower(PochArgs::new(2.0, 1.0, 0.0, 1.0), &ctl()).unwrap().value, 0.0);
        let v = poch_lower(PochArgs::new(1.0, 0.0, 2f64.ln(), 0.0), &ctl()).unwrap().value;
        assert!(rel(v, 0.5) < 1e-13);
    }

    #[test]
    fn upper_examples() {
        let v = poch_upper(PochArgs::new(2.0, 2.0, 0.0, 0.0), &ctl()).unwrap().value;
        assert!(rel(v, 6.0) < 1e-12);
        let v = poch_upper(PochArgs::new(1.0, 0.0, 1.0, 0.0), &ctl()).unwrap().value;
        assert!(rel(v, (-1.0f64).exp()) < 1e-12);
    }

    #[test]
    fn generalized_classical_case_is_exact() {
        assert_eq!(poch_generalized(3.0, 2.0, 0.0, &ctl()).unwrap().value, 12.0);
    }

    #[test]
    fn poles_rejected() {
        for lambda in [0.0, -1.0, -4.0] {
            assert!(matches!(poch_upper(PochArgs::new(lambda, 3.0, 1.0, 1.0), &ctl()), Err(Error::Pole(_))));
            assert!(matches!(poch_lower(PochArgs::new(lambda, 3.0, 1.0, 1.0), &ctl()), Err(Error::Pole(_))));
            assert!(matches!(poch_generalized(lambda, 3.0, 1.0, &ctl()), Err(Error::Pole(_))));
        }
    }

    #[test]
    fn sequence_examples() {
        assert_eq!(upper_sequence(1.0, 0.0, 0.0, 2, &ctl()).unwrap(), vec![1.0, 1.0, 2.0]);
        assert_eq!(upper_sequence(2.0, 0.0, 0.0, 3, &ctl()).unwrap(), vec![1.0, 2.0, 6.0, 24.0]);
    }

    #[test]
    fn recurrence_matches_direct_quadrature() {
        for &(alpha, x, p) in &[(1.5, 1.0, 1.0), (0.3, 2.0, 0.5), (2.0, 0.0, 3.0), (1.0, 5.0, 0.0), (4.2, 0.5, 0.0)] {
            for kind in [HeadKind::Upper, HeadKind::Complete] {
                let mut rec = HeadSequence::new(kind, alpha, x, p, ctl()).unwrap();
                let mut dir = HeadSequence::new(kind, alpha, x, p, ctl()).unwrap();
                dir.mode = if matches!(dir.mode, Mode::Constant(_)) { dir.mode } else { Mode::Direct };
                for n in 0..40 {
                    let a = rec.ratio(n).unwrap();
                    let b = dir.ratio(n).unwrap();
                    assert!(rel(a, b) < 1e-10, "{kind:?} α={alpha} x={x} p={p} n={n}: {a} vs {b}");
                }
                assert!(!rec.is_direct());
            }
        }
    }

    #[test]
    fn negative_base_uses_direct_quadrature() {
        let mut h = HeadSequence::new(HeadKind::Upper, -0.5, 1.0, 1.0, ctl()).unwrap();
        assert!(h.is_direct());
        let want = poch_upper(PochArgs::new(-0.5, 3.0, 1.0, 1.0), &ctl()).unwrap().value;
        assert!(rel(rising(-0.5, 3) * h.ratio(3).unwrap(), want) < 1e-12);
    }
}
