//! Integral representations of the upper series, checked against quadrature.

use std::cell::{Cell, RefCell};
use std::f64::consts::PI;

use crate::classical::{bessel_j, beta_function, classical_lower_gamma, erf, laguerre};
use crate::error::{Error, Result};
use crate::gamma::{gamma_complete, regularize, weighted_integral};
use crate::hyp::{classical_hyp, eval_hyp, Head, HypSpec, NumericControls, PreparedSeries};
use crate::pochhammer::{rising, HeadKind};
use crate::quad::{integrate_pieces, Piece};
use crate::report::VerificationReport;

/// Default agreement threshold for the integral representations.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Captures the first error raised inside an integrand.
struct Trap {
    err: RefCell<Option<Error>>,
    terms: Cell<usize>,
}

impl Trap {
    fn new() -> Self {
        Self { err: RefCell::new(None), terms: Cell::new(0) }
    }

    fn catch(&self, r: Result<f64>) -> f64 {
        match r {
            Ok(v) => v,
            Err(e) => {
                self.err.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    }

    fn add_terms(&self, n: usize) {
        self.terms.set(self.terms.get() + n);
    }

    fn check(self) -> Result<usize> {
        match self.err.into_inner() {
            Some(e) => Err(e),
            None => Ok(self.terms.get()),
        }
    }
}

/// One side of an identity with its cost.
#[derive(Debug, Clone, Copy)]
struct Side {
    value: f64,
    terms: usize,
    evals: usize,
}

/// `(1/Γ(g)) ∫_x^∞ t^{s-1} e^{-t-p/t} k(t) dt`.
fn weighted_over_gamma(
    s: f64,
    g: f64,
    head: &Head,
    kernel: &dyn Fn(f64, &Trap) -> f64,
    breaks: &[f64],
    controls: &NumericControls,
) -> Result<Side> {
    let trap = Trap::new();
    let k = |t: f64| kernel(t, &trap);
    let scaled = weighted_integral(s, head.x, f64::INFINITY, head.p, Some(&k), breaks, &controls.quad);
    let terms = trap.check()?;
    let r = regularize(scaled?, g)?;
    Ok(Side { value: r.value, terms, evals: r.n_evals })
}

fn lhs_side(spec: &HypSpec, controls: &NumericControls) -> Result<Side> {
    let s = eval_hyp(spec, controls)?;
    Ok(Side { value: s.value, terms: s.terms, evals: s.quad_evals })
}

fn report(id: String, lhs: Side, rhs: Side, tol: f64) -> VerificationReport {
    VerificationReport::compare(id, lhs.value, rhs.value, tol, lhs.terms + rhs.terms, lhs.evals + rhs.evals)
}

fn fmt_list(v: &[f64]) -> String {
    v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
}

fn head_label(h: &Head) -> String {
    format!("alpha={},x={},p={}", h.alpha, h.x, h.p)
}

fn require_upper(spec: &HypSpec) -> Result<()> {
    if spec.kind != HeadKind::Upper {
        return Err(Error::domain("integral representations are stated for the upper series"));
    }
    if !spec.delta_num.is_empty() || !spec.delta_den.is_empty() {
        return Err(Error::domain("integral representations take plain parameters only"));
    }
    Ok(())
}

/// The inner classical series `F(num; den; zt)` stays integrable against
/// the weight on the whole ray `t > x`.
fn inner_integrable(num: &[f64], den: &[f64], z: f64) -> bool {
    let terminates = num.iter().any(|&a| a <= 0.0 && a == a.floor());
    if terminates || z == 0.0 {
        return true;
    }
    match num.len().cmp(&den.len()) {
        std::cmp::Ordering::Less => true,
        std::cmp::Ordering::Equal => z < 1.0,
        std::cmp::Ordering::Greater => false,
    }
}

/// Series against `(1/Γ(α₁)) ∫_x^∞ t^{α₁-1} e^{-t-p/t} F(α₂…; β…; zt) dt`.
fn spec_label(spec: &HypSpec) -> String {
    format!("{},num=[{}],den=[{}],z={}", head_label(&spec.head), fmt_list(&spec.num), fmt_list(&spec.den), spec.z)
}

pub fn gamma_kernel_id(spec: &HypSpec) -> String {
    format!("gamma-kernel-representation[{}]", spec_label(spec))
}

pub fn beta_kernel_id(spec: &HypSpec) -> String {
    format!("beta-kernel-representation[{}]", spec_label(spec))
}

pub fn verify_gamma_kernel(spec: &HypSpec, controls: &NumericControls) -> Result<VerificationReport> {
    verify_gamma_kernel_tol(spec, DEFAULT_TOL, controls)
}

pub fn verify_gamma_kernel_tol(spec: &HypSpec, tol: f64, controls: &NumericControls) -> Result<VerificationReport> {
    require_upper(spec)?;
    let id = gamma_kernel_id(spec);
    if !inner_integrable(&spec.num, &spec.den, spec.z) {
        return Ok(VerificationReport::skipped(id, tol));
    }
    let lhs = lhs_side(spec, controls)?;
    let (num, den, z, sctl) = (&spec.num, &spec.den, spec.z, controls.series);
    let kernel = |t: f64, trap: &Trap| {
        trap.catch(classical_hyp(num, den, z * t, &sctl).map(|s| {
            trap.add_terms(s.terms);
            s.value
        }))
    };
    let a = spec.head.alpha;
    let rhs = weighted_over_gamma(a, a, &spec.head, &kernel, &[], controls)?;
    Ok(report(id, lhs, rhs, tol))
}

fn beta_check(beta: f64, gamma: f64) -> Result<()> {
    if gamma > beta && beta > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("Beta weight needs γ > β > 0, got β={beta}, γ={gamma}")))
    }
}

/// `(1/B(β, γ−β)) ∫_0^1 t^{β-1}(1-t)^{γ-β-1} g(t) dt`.
///
/// Both endpoint singularities are removed by power substitutions on the
/// halves `[0, ½]` and `[½, 1]`.
fn beta_weighted(beta: f64, gamma: f64, g: &dyn Fn(f64) -> f64, controls: &NumericControls) -> Result<(f64, usize)> {
    let c = gamma - beta;
    let (ib, ic) = (1.0 / beta, 1.0 / c);
    let left = |u: f64| {
        let t = u.powf(ib);
        (1.0 - t).powf(c - 1.0) * g(t) * ib
    };
    let right = |v: f64| {
        let w = v.powf(ic);
        let t = 1.0 - w;
        t.powf(beta - 1.0) * g(t) * ic
    };
    let pieces = [Piece::new(&left, 0.0, 0.5f64.powf(beta)), Piece::new(&right, 0.0, 0.5f64.powf(c))];
    let r = integrate_pieces(&pieces, &controls.quad)?;
    Ok((r.value / beta_function(beta, c)?, r.n_evals))
}

/// Full series with trailing `β` over `γ` against the Beta-weighted
/// integral of the reduced series at `zt`.
pub fn verify_beta_kernel(
    spec: &HypSpec,
    beta: f64,
    gamma: f64,
    controls: &NumericControls,
) -> Result<VerificationReport> {
    verify_beta_kernel_tol(spec, beta, gamma, DEFAULT_TOL, controls)
}

pub fn verify_beta_kernel_tol(
    spec: &HypSpec,
    beta: f64,
    gamma: f64,
    tol: f64,
    controls: &NumericControls,
) -> Result<VerificationReport> {
    require_upper(spec)?;
    beta_check(beta, gamma)?;
    if spec.num.last() != Some(&beta) || spec.den.last() != Some(&gamma) {
        return Err(Error::domain("spec must end with numerator β and denominator γ"));
    }
    let id = beta_kernel_id(spec);
    let lhs = lhs_side(spec, controls)?;
    let mut reduced = spec.clone();
    reduced.num.pop();
    reduced.den.pop();
    let rhs = beta_side(&reduced, beta, gamma, controls)?;
    Ok(report(id, lhs, rhs, tol))
}

fn beta_side(reduced: &HypSpec, beta: f64, gamma: f64, controls: &NumericControls) -> Result<Side> {
    let prepared = RefCell::new(PreparedSeries::new(reduced, controls)?);
    let trap = Trap::new();
    let g = |t: f64| {
        let r = prepared.borrow_mut().eval_at(reduced, reduced.z * t);
        trap.catch(r.map(|s| {
            trap.add_terms(s.terms);
            s.value
        }))
    };
    let quad = beta_weighted(beta, gamma, &g, controls);
    let terms = trap.check()?;
    let (value, evals) = quad?;
    let head_evals = prepared.borrow().quad_evals();
    Ok(Side { value, terms, evals: evals + head_evals })
}

/// The corollary integral representations of the Gauss and Kummer cases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Corollary {
    /// ₂Γ₁[(α,x;p),β;γ;z] with a ₁F₁(β;γ;zt) kernel.
    GaussConfluentKernel { head: Head, beta: f64, gamma: f64, z: f64 },
    /// ₁Γ₁[(α,x;p);γ;z] with a ₀F₁(;γ;zt) kernel.
    KummerLimitKernel { head: Head, gamma: f64, z: f64 },
    /// ₂Γ₁[(α,x;p),β;γ;z] as a Beta-weighted ₁Γ₀.
    EulerBeta { head: Head, beta: f64, gamma: f64, z: f64 },
    /// ₂Γ₁[(α,x;p),−m;γ+1;z] with a Laguerre kernel `L_m^{(γ)}(zt)`.
    Laguerre { head: Head, m: usize, gamma: f64, z: f64 },
    /// ₂Γ₁[(α,x;p),β;β+1;−z] with an incomplete gamma kernel `γ(β,zt)`.
    IncompleteGamma { head: Head, beta: f64, z: f64 },
    /// ₁Γ₁[(α,x;p);γ+1;−z] with a Bessel kernel `J_γ(2√(zt))`.
    BesselJ { head: Head, gamma: f64, z: f64 },
    /// ₂Γ₁[(α,x;p),½;3/2;−z] with an error-function kernel `erf(√(zt))`.
    Erf { head: Head, z: f64 },
}

impl Corollary {
    pub fn head(&self) -> Head {
        match *self {
            Corollary::GaussConfluentKernel { head, .. }
            | Corollary::KummerLimitKernel { head, .. }
            | Corollary::EulerBeta { head, .. }
            | Corollary::Laguerre { head, .. }
            | Corollary::IncompleteGamma { head, .. }
            | Corollary::BesselJ { head, .. }
            | Corollary::Erf { head, .. } => head,
        }
    }

    /// The series side.
    pub fn series_spec(&self) -> HypSpec {
        let h = self.head();
        let base = HypSpec::upper(h.alpha, h.x, h.p);
        match *self {
            Corollary::GaussConfluentKernel { beta, gamma, z, .. } | Corollary::EulerBeta { beta, gamma, z, .. } => {
                base.with_num(&[beta]).with_den(&[gamma]).at(z)
            }
            Corollary::KummerLimitKernel { gamma, z, .. } => base.with_den(&[gamma]).at(z),
            Corollary::Laguerre { m, gamma, z, .. } => base.with_num(&[-(m as f64)]).with_den(&[gamma + 1.0]).at(z),
            Corollary::IncompleteGamma { beta, z, .. } => base.with_num(&[beta]).with_den(&[beta + 1.0]).at(-z),
            Corollary::BesselJ { gamma, z, .. } => base.with_den(&[gamma + 1.0]).at(-z),
            Corollary::Erf { z, .. } => base.with_num(&[0.5]).with_den(&[1.5]).at(-z),
        }
    }

    pub fn identity_id(&self) -> String {
        let h = head_label(&self.head());
        match *self {
            Corollary::GaussConfluentKernel { beta, gamma, z, .. } => {
                format!("gauss-confluent-kernel[{h},beta={beta},gamma={gamma},z={z}]")
            }
            Corollary::KummerLimitKernel { gamma, z, .. } => format!("kummer-limit-kernel[{h},gamma={gamma},z={z}]"),
            Corollary::EulerBeta { beta, gamma, z, .. } => {
                format!("gauss-euler-beta[{h},beta={beta},gamma={gamma},z={z}]")
            }
            Corollary::Laguerre { m, gamma, z, .. } => format!("laguerre-kernel[{h},m={m},gamma={gamma},z={z}]"),
            Corollary::IncompleteGamma { beta, z, .. } => format!("incomplete-gamma-kernel[{h},beta={beta},z={z}]"),
            Corollary::BesselJ { gamma, z, .. } => format!("bessel-j-kernel[{h},gamma={gamma},z={z}]"),
            Corollary::Erf { z, .. } => format!("erf-kernel[{h},z={z}]"),
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Corollary::EulerBeta { beta, gamma, .. } => beta_check(beta, gamma),
            Corollary::IncompleteGamma { beta, z, .. } => {
                if beta > 0.0 && z > 0.0 {
                    Ok(())
                } else {
                    Err(Error::domain(format!("incomplete gamma kernel needs β > 0, z > 0, got β={beta}, z={z}")))
                }
            }
            Corollary::BesselJ { gamma, z, .. } => {
                if gamma > -1.0 && z > 0.0 {
                    Ok(())
                } else {
                    Err(Error::domain(format!("Bessel kernel needs γ > −1, z > 0, got γ={gamma}, z={z}")))
                }
            }
            Corollary::Erf { z, .. } => {
                if z > 0.0 {
                    Ok(())
                } else {
                    Err(Error::domain(format!("erf kernel needs z > 0, got {z}")))
                }
            }
            _ => Ok(()),
        }
    }

    /// The integral side.
    pub fn integral_side(&self, controls: &NumericControls) -> Result<f64> {
        self.validate()?;
        self.rhs(controls).map(|s| s.value)
    }

    fn rhs(&self, controls: &NumericControls) -> Result<Side> {
        let h = self.head();
        let a = h.alpha;
        let sctl = controls.series;
        let qctl = controls.quad;
        match *self {
            Corollary::GaussConfluentKernel { beta, gamma, z, .. } => {
                let k = |t: f64, trap: &Trap| {
                    trap.catch(classical_hyp(&[beta], &[gamma], z * t, &sctl).map(|s| {
                        trap.add_terms(s.terms);
                        s.value
                    }))
                };
                weighted_over_gamma(a, a, &h, &k, &[], controls)
            }
            Corollary::KummerLimitKernel { gamma, z, .. } => {
                let k = |t: f64, trap: &Trap| {
                    trap.catch(classical_hyp(&[], &[gamma], z * t, &sctl).map(|s| {
                        trap.add_terms(s.terms);
                        s.value
                    }))
                };
                weighted_over_gamma(a, a, &h, &k, &[], controls)
            }
            Corollary::EulerBeta { beta, gamma, z, .. } => {
                beta_side(&HypSpec::upper(h.alpha, h.x, h.p).at(z), beta, gamma, controls)
            }
            Corollary::Laguerre { m, gamma, z, .. } => {
                let k = |t: f64, _: &Trap| laguerre(m, gamma, z * t);
                let side = weighted_over_gamma(a, a, &h, &k, &[], controls)?;
                let factor = rising(1.0, m) / rising(gamma + 1.0, m);
                Ok(Side { value: factor * side.value, ..side })
            }
            Corollary::IncompleteGamma { beta, z, .. } => {
                let k = |t: f64, trap: &Trap| trap.catch(classical_lower_gamma(beta, z * t, &qctl));
                let side = weighted_over_gamma(a - beta, a, &h, &k, &[], controls)?;
                Ok(Side { value: beta * z.powf(-beta) * side.value, ..side })
            }
            Corollary::BesselJ { gamma, z, .. } => {
                let k = |t: f64, trap: &Trap| trap.catch(bessel_j(gamma, 2.0 * (z * t).sqrt()));
                let zeros = bessel_zero_breaks(gamma, z, h.x);
                let side = weighted_over_gamma(a - 0.5 * gamma, a, &h, &k, &zeros, controls)?;
                let factor = gamma_complete(gamma + 1.0)? * z.powf(-0.5 * gamma);
                Ok(Side { value: factor * side.value, ..side })
            }
            Corollary::Erf { z, .. } => {
                let k = |t: f64, _: &Trap| erf((z * t).sqrt());
                let side = weighted_over_gamma(a - 0.5, a, &h, &k, &[], controls)?;
                Ok(Side { value: 0.5 * (PI / z).sqrt() * side.value, ..side })
            }
        }
    }
}

/// `t` where `2√(zt)` sits at McMahon's estimate of the k-th zero of `J_γ`,
/// for the zeros that fall where the weight is not negligible.
fn bessel_zero_breaks(gamma: f64, z: f64, x: f64) -> Vec<f64> {
    (1..=40)
        .map(|k| {
            let j = (k as f64 + 0.5 * gamma - 0.25) * PI;
            j * j / (4.0 * z)
        })
        .filter(|&t| t > x && t < x + 80.0)
        .collect()
}

/// Series side against integral side of one corollary case.
pub fn verify_corollary_integrals(case: &Corollary, controls: &NumericControls) -> Result<VerificationReport> {
    verify_corollary_tol(case, DEFAULT_TOL, controls)
}

pub fn verify_corollary_tol(case: &Corollary, tol: f64, controls: &NumericControls) -> Result<VerificationReport> {
    case.validate()?;
    let lhs = lhs_side(&case.series_spec(), controls)?;
    let rhs = case.rhs(controls)?;
    Ok(report(case.identity_id(), lhs, rhs, tol))
}
