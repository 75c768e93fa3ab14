//! Riemann–Liouville operators on power-weighted upper series.
//!
//! ```text
//! (I^μ_{a+} φ)(y) = (1/Γ(μ)) ∫_a^y φ(t) (y−t)^{μ−1} dt
//! (D^μ_{a+} φ)(y) = (d/dy)^n (I^{n−μ}_{a+} φ)(y),   n = ⌊μ⌋ + 1
//! ```

use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::gamma::{gamma_complete, ln_gamma_signed};
use crate::hyp::{derivative_upper_hyp, eval_hyp, HypSpec, NumericControls, PreparedSeries};
use crate::pochhammer::HeadKind;
use crate::quad::{integrate_pieces, Piece, QuadResult, QuadratureControls};
use crate::report::VerificationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FracOp {
    Integral,
    Derivative,
}

/// `I^μ` or `D^μ` applied to `(t−a)^{ρ−1} · spec(ω(t−a))`, evaluated at `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct FracCase {
    pub a: f64,
    pub rho: f64,
    pub mu: f64,
    pub omega: f64,
    pub y: f64,
    /// Upper-kind series; its own `z` is ignored.
    pub spec: HypSpec,
    pub op: FracOp,
}

impl FracCase {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.a, self.rho, self.mu, self.omega, self.y].iter().all(|v| v.is_finite());
        if !finite {
            return Err(Error::domain("fractional case parameters must be finite"));
        }
        if !(self.a >= 0.0 && self.y > self.a) {
            return Err(Error::domain(format!("need y > a ≥ 0, got a={}, y={}", self.a, self.y)));
        }
        if !(self.rho > 0.0 && self.mu > 0.0) {
            return Err(Error::domain(format!("need ρ > 0 and μ > 0, got ρ={}, μ={}", self.rho, self.mu)));
        }
        if self.spec.kind != HeadKind::Upper || !self.spec.delta_num.is_empty() || !self.spec.delta_den.is_empty() {
            return Err(Error::domain("fractional relations are stated for plain upper series"));
        }
        Ok(())
    }

    /// `n = ⌊μ⌋ + 1`.
    pub fn order(&self) -> usize {
        self.mu.floor() as usize + 1
    }

    pub fn identity_id(&self) -> String {
        let op = match self.op {
            FracOp::Integral => "rl-integral",
            FracOp::Derivative => "rl-derivative",
        };
        let h = &self.spec.head;
        let list = |v: &[f64]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
        format!(
            "{op}[rho={},mu={},alpha={},x={},p={},num=[{}],den=[{}],omega={},a={},y={}]",
            self.rho,
            self.mu,
            h.alpha,
            h.x,
            h.p,
            list(&self.spec.num),
            list(&self.spec.den),
            self.omega,
            self.a,
            self.y
        )
    }

    fn augmented(&self, extra_den: f64) -> HypSpec {
        let mut s = self.spec.clone();
        s.num.push(self.rho);
        s.den.push(extra_den);
        s.z = self.omega * (self.y - self.a);
        s
    }
}

/// `(1/Γ(μ)) ∫_a^y (t−a)^{ρ−1} (y−t)^{μ−1} g(t) dt`.
///
/// The interval is halved; an exponent below one at either end is removed
/// by the substitution `v = (t−a)^ρ` or `u = (y−t)^μ` on that half.
fn rl_apply(g: &dyn Fn(f64) -> f64, a: f64, rho: f64, mu: f64, y: f64, ctl: &QuadratureControls) -> Result<QuadResult> {
    let mid = 0.5 * (a + y);
    let h = mid - a;
    let (ir, im) = (1.0 / rho, 1.0 / mu);
    let left_sub = |v: f64| {
        let t = a + v.powf(ir);
        (y - t).powf(mu - 1.0) * g(t) * ir
    };
    let left_plain = |t: f64| (t - a).powf(rho - 1.0) * (y - t).powf(mu - 1.0) * g(t);
    let right_sub = |u: f64| {
        let t = y - u.powf(im);
        (t - a).powf(rho - 1.0) * g(t) * im
    };
    let right_plain = |t: f64| (t - a).powf(rho - 1.0) * (y - t).powf(mu - 1.0) * g(t);
    let left = if rho < 1.0 { Piece::new(&left_sub, 0.0, h.powf(rho)) } else { Piece::new(&left_plain, a, mid) };
    let right = if mu < 1.0 { Piece::new(&right_sub, 0.0, h.powf(mu)) } else { Piece::new(&right_plain, mid, y) };
    let r = integrate_pieces(&[left, right], ctl)?;
    let norm = gamma_complete(mu)?;
    Ok(QuadResult { value: r.value / norm, err_estimate: r.err_estimate / norm.abs(), n_evals: r.n_evals })
}

/// `(I^μ_{a+} [(t−a)^{ρ−1} g])(y)` by quadrature, with the endpoint power
/// handled by substitution.
pub fn rl_integral_weighted(
    g: &dyn Fn(f64) -> f64,
    a: f64,
    rho: f64,
    mu: f64,
    y: f64,
    ctl: &QuadratureControls,
) -> Result<QuadResult> {
    if !(mu > 0.0) || !(rho > 0.0) || !(y > a) {
        return Err(Error::domain(format!("need ρ, μ > 0 and y > a, got ρ={rho}, μ={mu}, a={a}, y={y}")));
    }
    rl_apply(g, a, rho, mu, y, ctl)
}

/// `(I^μ_{a+} f)(y)` by quadrature.
pub fn rl_integral_numeric(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    mu: f64,
    y: f64,
    ctl: &QuadratureControls,
) -> Result<QuadResult> {
    if !(mu > 0.0) || !(y > a) {
        return Err(Error::domain(format!("need μ > 0 and y > a, got μ={mu}, a={a}, y={y}")));
    }
    rl_apply(f, a, 1.0, mu, y, ctl)
}

/// `I^α_{a+}[(t−a)^{β−1}](y) = Γ(β)/Γ(α+β) · (y−a)^{α+β−1}`.
pub fn rl_power_rule(alpha: f64, beta: f64, a: f64, y: f64) -> Result<f64> {
    if !(alpha > 0.0 && beta > 0.0 && y > a) {
        return Err(Error::domain(format!(
            "power rule needs α, β > 0 and y > a, got α={alpha}, β={beta}, a={a}, y={y}"
        )));
    }
    let (lb, _) = ln_gamma_signed(beta)?;
    let (lab, _) = ln_gamma_signed(alpha + beta)?;
    Ok((lb - lab + (alpha + beta - 1.0) * (y - a).ln()).exp())
}

/// Closed form of `I^μ`: one series with the extra pair `ρ / ρ+μ`.
pub fn rl_integral_closed(case: &FracCase, controls: &NumericControls) -> Result<f64> {
    case.validate()?;
    let (rho, mu, d) = (case.rho, case.mu, case.y - case.a);
    let s = eval_hyp(&case.augmented(rho + mu), controls)?;
    let (lr, _) = ln_gamma_signed(rho)?;
    let (lrm, _) = ln_gamma_signed(rho + mu)?;
    Ok((lr - lrm + (rho + mu - 1.0) * d.ln()).exp() * s.value)
}

/// Closed form of `D^μ`: one series with the extra pair `ρ / ρ−μ`.
/// Rejected when `ρ − μ` is a pole of Γ.
pub fn rl_derivative_closed(case: &FracCase, controls: &NumericControls) -> Result<f64> {
    case.validate()?;
    let (rho, mu, d) = (case.rho, case.mu, case.y - case.a);
    let c = rho - mu;
    if c <= 0.0 && c == c.floor() {
        return Err(Error::domain(format!("ρ − μ = {c} is a pole of Γ")));
    }
    let s = eval_hyp(&case.augmented(c), controls)?;
    let (lr, _) = ln_gamma_signed(rho)?;
    let (lc, sign) = ln_gamma_signed(c)?;
    Ok(sign * (lr - lc + (c - 1.0) * d.ln()).exp() * s.value)
}

/// `I^ν` of the weighted series at `y`, by quadrature.
fn numeric_integral_of_series(case: &FracCase, nu: f64, y: f64, controls: &NumericControls) -> Result<f64> {
    let prepared = RefCell::new(PreparedSeries::new(&case.spec, controls)?);
    let failure = RefCell::new(None);
    let g = |t: f64| match prepared.borrow_mut().eval_at(&case.spec, case.omega * (t - case.a)) {
        Ok(s) => s.value,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let r = rl_apply(&g, case.a, case.rho, nu, y, &controls.quad);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(r?.value)
}

/// `I^μ` of the weighted series by direct quadrature.
pub fn rl_integral_of_series(case: &FracCase, controls: &NumericControls) -> Result<f64> {
    case.validate()?;
    numeric_integral_of_series(case, case.mu, case.y, controls)
}

/// `d^n/dy^n F(y)` from central differences at steps `h, h/2, h/4`,
/// with two rounds of Richardson extrapolation.
pub fn central_derivative(f: &dyn Fn(f64) -> Result<f64>, y: f64, n: usize, h: f64) -> Result<f64> {
    let central = |h: f64| -> Result<f64> {
        let mut acc = 0.0;
        let mut binom = 1.0;
        for k in 0..=n {
            let offset = (0.5 * n as f64 - k as f64) * h;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binom * f(y + offset)?;
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
        Ok(acc / h.powi(n as i32))
    };
    let d0 = central(h)?;
    let d1 = central(0.5 * h)?;
    let d2 = central(0.25 * h)?;
    let r0 = (4.0 * d1 - d0) / 3.0;
    let r1 = (4.0 * d2 - d1) / 3.0;
    Ok((16.0 * r1 - r0) / 15.0)
}

/// `D^μ` of the weighted series as `(d/dy)^n I^{n−μ}`, differentiated numerically.
pub fn rl_derivative_numeric(case: &FracCase, controls: &NumericControls) -> Result<f64> {
    case.validate()?;
    let n = case.order();
    let nu = n as f64 - case.mu;
    let h = (0.02 * n as f64).min(0.25 * (case.y - case.a) / n as f64);
    let mut tight = *controls;
    tight.quad.rel_tol = tight.quad.rel_tol.min(1e-13);
    let f = |y: f64| numeric_integral_of_series(case, nu, y, &tight);
    central_derivative(&f, case.y, n, h)
}

/// For integer `μ = k`: `d^k/dy^k [(y−a)^{ρ−1} F(ω(y−a))]` by Leibniz with
/// the series derivative formula.
pub fn rl_derivative_integer_order(case: &FracCase, controls: &NumericControls) -> Result<f64> {
    case.validate()?;
    if case.mu != case.mu.floor() {
        return Err(Error::domain(format!("μ = {} is not an integer", case.mu)));
    }
    let k = case.mu as usize;
    let d = case.y - case.a;
    let mut spec = case.spec.clone();
    spec.z = case.omega * d;
    let mut total = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        // j derivatives on the power, k − j on the series.
        let falling: f64 = (0..j).map(|i| case.rho - 1.0 - i as f64).product();
        let power = falling * d.powf(case.rho - 1.0 - j as f64);
        let series = derivative_upper_hyp(&spec, k - j, controls)?.value * case.omega.powi((k - j) as i32);
        total += binom * power * series;
        binom = binom * (k - j) as f64 / (j + 1) as f64;
    }
    Ok(total)
}

/// Closed form against the operator applied numerically. Integer-order
/// derivatives use the Leibniz oracle; the rest use differentiated quadrature.
pub fn verify_frac(case: &FracCase, tol: f64, controls: &NumericControls) -> Result<VerificationReport> {
    case.validate()?;
    let id = case.identity_id();
    let extra = match case.op {
        FracOp::Integral => case.rho + case.mu,
        FracOp::Derivative => case.rho - case.mu,
    };
    match case.augmented(extra).validate() {
        Ok(()) => {}
        Err(Error::Inadmissible(_)) => return Ok(VerificationReport::skipped(id, tol)),
        Err(e) => return Err(e),
    }
    let (closed, numeric) = match case.op {
        FracOp::Integral => (rl_integral_closed(case, controls)?, rl_integral_of_series(case, controls)?),
        FracOp::Derivative => {
            let oracle = if case.mu == case.mu.floor() {
                rl_derivative_integer_order(case, controls)?
            } else {
                rl_derivative_numeric(case, controls)?
            };
            (rl_derivative_closed(case, controls)?, oracle)
        }
    };
    Ok(VerificationReport::compare(id, closed, numeric, tol, 0, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qc() -> QuadratureControls {
        QuadratureControls::default()
    }

    fn nc() -> NumericControls {
        NumericControls::default()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn numeric_integral_examples() {
        let one = |_: f64| 1.0;
        assert!(rel(rl_integral_numeric(&one, 0.0, 1.0, 2.0, &qc()).unwrap().value, 2.0) < 1e-14);
        let want = 2.0 / std::f64::consts::PI.sqrt();
        assert!(rel(rl_integral_numeric(&one, 0.0, 0.5, 1.0, &qc()).unwrap().value, want) < 1e-13);
        let pw = |t: f64| (t - 0.5).powf(1.3);
        let want = gamma_complete(2.3).unwrap() / gamma_complete(3.0).unwrap() * 1.5f64.powi(2);
        assert!(rel(rl_integral_numeric(&pw, 0.5, 0.7, 2.0, &qc()).unwrap().value, want) < 1e-12);
        assert!(rl_integral_numeric(&one, 1.0, 0.5, 0.5, &qc()).is_err());
    }

    #[test]
    fn power_rule_examples() {
        assert!(rel(rl_power_rule(1.0, 1.0, 0.3, 2.0).unwrap(), 1.7) < 1e-15);
        assert!(rel(rl_power_rule(0.5, 1.0, 0.0, 1.0).unwrap(), 2.0 / std::f64::consts::PI.sqrt()) < 1e-14);
        let want = gamma_complete(2.2).unwrap() / gamma_complete(2.5).unwrap() * 2f64.powf(1.5);
        assert!(rel(rl_power_rule(0.3, 2.2, 1.0, 3.0).unwrap(), want) < 1e-14);
        assert!(rl_power_rule(0.0, 1.0, 0.0, 1.0).is_err());
    }

    fn kummer_case(op: FracOp, rho: f64, mu: f64, omega: f64, y: f64) -> FracCase {
        FracCase { a: 0.0, rho, mu, omega, y, spec: HypSpec::upper(1.0, 0.0, 0.0).with_den(&[1.0]), op }
    }

    #[test]
    fn closed_integral_matches_exponential_case() {
        // ρ = μ = 1 and F = e^z: I¹[e^{ωt}](y) = (e^{ωy} − 1)/ω.
        let case = kummer_case(FracOp::Integral, 1.0, 1.0, 0.5, 1.0);
        let want = (0.5f64.exp() - 1.0) / 0.5;
        assert!(rel(rl_integral_closed(&case, &nc()).unwrap(), want) < 1e-13);
        assert!(verify_frac(&case, 1e-6, &nc()).unwrap().passed());
    }

    #[test]
    fn omega_zero_collapses() {
        let mut case = kummer_case(FracOp::Integral, 1.5, 0.5, 0.0, 1.3);
        let r = verify_frac(&case, 1e-6, &nc()).unwrap();
        assert!(r.passed() && r.abs_err < 1e-10, "{r:?}");
        case.op = FracOp::Derivative;
        let r = verify_frac(&case, 1e-6, &nc()).unwrap();
        assert!(r.passed() && r.abs_err < 1e-10, "{r:?}");
    }

    #[test]
    fn derivative_examples() {
        let case = kummer_case(FracOp::Derivative, 1.4, 0.6, 0.4, 0.9);
        let r = verify_frac(&case, 1e-5, &nc()).unwrap();
        assert!(r.passed(), "{r:?}");
        let case = kummer_case(FracOp::Derivative, 2.0, 1.0, 0.4, 0.9);
        let r = verify_frac(&case, 1e-6, &nc()).unwrap();
        assert!(r.passed(), "{r:?}");
        let numeric = rl_derivative_numeric(&case, &nc()).unwrap();
        assert!(rel(numeric, r.rhs) < 1e-6);
    }

    #[test]
    fn derivative_pole_rejected() {
        let case = kummer_case(FracOp::Derivative, 1.0, 1.0, 0.4, 0.9);
        assert!(matches!(rl_derivative_closed(&case, &nc()), Err(Error::Domain(_))));
    }

    #[test]
    fn invalid_cases() {
        let mut case = kummer_case(FracOp::Integral, 1.0, 1.0, 0.4, 0.9);
        case.y = -1.0;
        assert!(case.validate().is_err());
        let mut case = kummer_case(FracOp::Integral, 1.0, 0.0, 0.4, 0.9);
        assert!(case.validate().is_err());
        case.mu = 0.5;
        case.spec.kind = HeadKind::Lower;
        assert!(case.validate().is_err());
    }
}
