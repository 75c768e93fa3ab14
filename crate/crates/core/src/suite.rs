//! Canonical identity checks, grouped into suites.
//!
//! Every case is a pure function of its parameters and the controls, so a
//! suite can run on a worker pool and still report in a fixed order.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frac::{central_derivative, rl_integral_weighted, rl_power_rule, verify_frac, FracCase, FracOp};
use crate::gamma::{bessel_k, gamma_p, lower_incomplete, upper_incomplete, ExtGammaArgs};
use crate::genfun::{verify_genfun, GenFunCase, GenFunTheorem};
use crate::hyp::{
    derivative_upper_hyp, direct_coefficient, eval_hyp, incremental_coefficients, Head, HypSpec, NumericControls,
};
use crate::pochhammer::{poch_generalized, poch_lower, poch_upper, rising, upper_sequence, HeadKind, PochArgs};
use crate::report::VerificationReport;
use crate::reps::{
    beta_kernel_id, gamma_kernel_id, verify_beta_kernel_tol, verify_corollary_tol, verify_gamma_kernel_tol, Corollary,
};

/// Seed of the randomized decomposition specs.
pub const DEFAULT_SEED: u64 = 20_140_917;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Gamma,
    Pochhammer,
    Hyp,
    Reps,
    Genfun,
    Frac,
}

impl Suite {
    pub const NAMES: [&'static str; 7] = ["all", "gamma", "pochhammer", "hyp", "reps", "genfun", "frac"];

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::Gamma, Suite::Pochhammer, Suite::Hyp, Suite::Reps, Suite::Genfun, Suite::Frac],
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "all" => Suite::All,
            "gamma" => Suite::Gamma,
            "pochhammer" => Suite::Pochhammer,
            "hyp" => Suite::Hyp,
            "reps" => Suite::Reps,
            "genfun" => Suite::Genfun,
            "frac" => Suite::Frac,
            other => return Err(Error::domain(format!("unknown suite {other:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [Suite::All, Suite::Gamma, Suite::Pochhammer, Suite::Hyp, Suite::Reps, Suite::Genfun, Suite::Frac]
            .iter()
            .position(|s| s == self)
            .unwrap();
        f.write_str(Suite::NAMES[i])
    }
}

/// One check: its parameters and its default tolerance.
#[derive(Debug, Clone, PartialEq)]
pub enum Case {
    GammaDecomposition { s: f64, x: f64, p: f64 },
    GammaBessel { s: f64, p: f64 },
    GammaRecurrence { s: f64, x: f64, p: f64 },
    GammaClassical { x: f64 },
    PochDecomposition { lambda: f64, nu: f64, x: f64, p: f64 },
    PochSplitting { upper: bool, lambda: f64, n: usize, m: usize, x: f64, p: f64 },
    PochSequence { lambda: f64, x: f64, p: f64, count: usize },
    HypDecomposition { spec: HypSpec },
    HypClassical { form: ClassicalForm, z: f64 },
    HypDerivative { spec: HypSpec, n: usize },
    HypTermRatio { spec: HypSpec, n: usize },
    GammaKernel { spec: HypSpec },
    BetaKernel { spec: HypSpec, beta: f64, gamma: f64 },
    Corollary(Corollary),
    GenFun(GenFunCase),
    PowerRule { alpha: f64, beta: f64, a: f64, y: f64 },
    Frac(FracCase),
}

/// Closed forms the upper series must reproduce at `x = p = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClassicalForm {
    /// ₁F₁(a; a; z) = e^z with a = 1.7.
    Exp,
    /// ₁F₁(1; 2; z) = (e^z − 1)/z.
    ExpMinusOne,
    /// ₂F₁(1, 1; 2; z) = −ln(1−z)/z.
    Log,
    /// ₂F₁(a, b; b; z) = (1−z)^{−a} with a = 0.7, b = 2.3.
    Binomial,
}

impl ClassicalForm {
    pub const ALL: [ClassicalForm; 4] =
        [ClassicalForm::Exp, ClassicalForm::ExpMinusOne, ClassicalForm::Log, ClassicalForm::Binomial];

    pub fn spec(&self, z: f64) -> HypSpec {
        match self {
            ClassicalForm::Exp => HypSpec::upper(1.7, 0.0, 0.0).with_den(&[1.7]).at(z),
            ClassicalForm::ExpMinusOne => HypSpec::upper(1.0, 0.0, 0.0).with_den(&[2.0]).at(z),
            ClassicalForm::Log => HypSpec::upper(1.0, 0.0, 0.0).with_num(&[1.0]).with_den(&[2.0]).at(z),
            ClassicalForm::Binomial => HypSpec::upper(0.7, 0.0, 0.0).with_num(&[2.3]).with_den(&[2.3]).at(z),
        }
    }

    pub fn closed(&self, z: f64) -> f64 {
        match self {
            ClassicalForm::Exp => z.exp(),
            ClassicalForm::ExpMinusOne => z.exp_m1() / z,
            ClassicalForm::Log => -(-z).ln_1p() / z,
            ClassicalForm::Binomial => (1.0 - z).powf(-0.7),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            ClassicalForm::Exp => "exp",
            ClassicalForm::ExpMinusOne => "expm1-over-z",
            ClassicalForm::Log => "log1p-over-z",
            ClassicalForm::Binomial => "binomial",
        }
    }
}

fn list(v: &[f64]) -> String {
    v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",")
}

fn spec_label(s: &HypSpec) -> String {
    let kind = match s.kind {
        HeadKind::Lower => "lower",
        HeadKind::Upper => "upper",
        HeadKind::Complete => "complete",
    };
    format!(
        "{kind},alpha={},x={},p={},num=[{}],den=[{}],z={}",
        s.head.alpha,
        s.head.x,
        s.head.p,
        list(&s.num),
        list(&s.den),
        s.z
    )
}

impl Case {
    pub fn default_tol(&self) -> f64 {
        match self {
            Case::GammaDecomposition { .. } | Case::GammaRecurrence { .. } => 1e-9,
            Case::GammaBessel { .. } => 1e-8,
            Case::GammaClassical { .. } => 1e-12,
            Case::PochDecomposition { .. } | Case::PochSequence { .. } => 1e-9,
            Case::PochSplitting { .. } => 1e-12,
            Case::HypDecomposition { .. } => 1e-9,
            Case::HypClassical { .. } => 1e-11,
            Case::HypDerivative { .. } => 1e-5,
            Case::HypTermRatio { .. } => 1e-13,
            Case::GammaKernel { .. } | Case::BetaKernel { .. } | Case::Corollary(_) => 1e-6,
            Case::GenFun(_) => 1e-6,
            Case::PowerRule { .. } => 1e-8,
            Case::Frac(c) => match c.op {
                FracOp::Integral => 1e-6,
                FracOp::Derivative => 1e-5,
            },
        }
    }

    pub fn identity_id(&self) -> String {
        match self {
            Case::GammaDecomposition { s, x, p } => format!("gamma-decomposition[s={s},x={x},p={p}]"),
            Case::GammaBessel { s, p } => format!("gamma-bessel-k[s={s},p={p}]"),
            Case::GammaRecurrence { s, x, p } => format!("gamma-upper-recurrence[s={s},x={x},p={p}]"),
            Case::GammaClassical { x } => format!("gamma-classical-limit[s=1,x={x}]"),
            Case::PochDecomposition { lambda, nu, x, p } => {
                format!("pochhammer-decomposition[lambda={lambda},nu={nu},x={x},p={p}]")
            }
            Case::PochSplitting { upper, lambda, n, m, x, p } => {
                let which = if *upper { "upper" } else { "lower" };
                format!("pochhammer-splitting-{which}[lambda={lambda},n={n},m={m},x={x},p={p}]")
            }
            Case::PochSequence { lambda, x, p, count } => {
                format!("pochhammer-upper-sequence[lambda={lambda},x={x},p={p},N={count}]")
            }
            Case::HypDecomposition { spec } => format!("hyp-decomposition[{}]", spec_label(spec)),
            Case::HypClassical { form, z } => format!("hyp-classical-{}[z={z}]", form.name()),
            Case::HypDerivative { spec, n } => format!("hyp-derivative[n={n},{}]", spec_label(spec)),
            Case::HypTermRatio { spec, n } => format!("hyp-term-recursion[n={n},{}]", spec_label(spec)),
            Case::GammaKernel { spec } => gamma_kernel_id(spec),
            Case::BetaKernel { spec, .. } => beta_kernel_id(spec),
            Case::Corollary(c) => c.identity_id(),
            Case::GenFun(g) => g.identity_id(),
            Case::PowerRule { alpha, beta, a, y } => format!("rl-power-rule[alpha={alpha},beta={beta},a={a},y={y}]"),
            Case::Frac(f) => f.identity_id(),
        }
    }

    /// Run at `tol`; errors become FAIL reports carrying NaN sides.
    pub fn run(&self, tol: f64, controls: &NumericControls) -> VerificationReport {
        self.try_run(tol, controls).unwrap_or_else(|_| VerificationReport::failed(self.identity_id(), tol))
    }

    pub fn try_run(&self, tol: f64, controls: &NumericControls) -> Result<VerificationReport> {
        let id = self.identity_id();
        let q = &controls.quad;
        let cmp = |lhs: f64, rhs: f64, terms: usize, evals: usize| {
            Ok(VerificationReport::compare(id.clone(), lhs, rhs, tol, terms, evals))
        };
        match self {
            &Case::GammaDecomposition { s, x, p } => {
                let args = ExtGammaArgs::new(s, x, p);
                let lo = lower_incomplete(args, q)?;
                let up = upper_incomplete(args, q)?;
                let full = gamma_p(s, p, q)?;
                cmp(lo.value + up.value, full.value, 0, lo.n_evals + up.n_evals + full.n_evals)
            }
            &Case::GammaBessel { s, p } => {
                let full = gamma_p(s, p, q)?;
                let k = bessel_k(s, 2.0 * p.sqrt(), q)?;
                cmp(full.value, 2.0 * p.powf(0.5 * s) * k.value, 0, full.n_evals + k.n_evals)
            }
            &Case::GammaRecurrence { s, x, p } => {
                let g = |s: f64| upper_incomplete(ExtGammaArgs::new(s, x, p), q);
                let (a, b, c) = (g(s + 1.0)?, g(s)?, g(s - 1.0)?);
                let boundary = (s * x.ln() - x - p / x).exp();
                cmp(a.value, s * b.value + p * c.value + boundary, 0, a.n_evals + b.n_evals + c.n_evals)
            }
            &Case::GammaClassical { x } => {
                let r = lower_incomplete(ExtGammaArgs::new(1.0, x, 0.0), q)?;
                cmp(r.value, -(-x).exp_m1(), 0, r.n_evals)
            }
            &Case::PochDecomposition { lambda, nu, x, p } => {
                let args = PochArgs::new(lambda, nu, x, p);
                let lo = poch_lower(args, q)?;
                let up = poch_upper(args, q)?;
                let full = poch_generalized(lambda, nu, p, q)?;
                cmp(lo.value + up.value, full.value, 0, lo.n_evals + up.n_evals + full.n_evals)
            }
            &Case::PochSplitting { upper, lambda, n, m, x, p } => {
                let f = if upper { poch_upper } else { poch_lower };
                let whole = f(PochArgs::new(lambda, (n + m) as f64, x, p), q)?;
                let tail = f(PochArgs::new(lambda + n as f64, m as f64, x, p), q)?;
                cmp(whole.value, rising(lambda, n) * tail.value, 0, whole.n_evals + tail.n_evals)
            }
            &Case::PochSequence { lambda, x, p, count } => {
                let seq = upper_sequence(lambda, x, p, count, q)?;
                let direct = poch_upper(PochArgs::new(lambda, count as f64, x, p), q)?;
                cmp(seq[count], direct.value, 0, direct.n_evals)
            }
            Case::HypDecomposition { spec } => {
                let lo = eval_hyp(&spec.clone().with_kind(HeadKind::Lower), controls)?;
                let up = eval_hyp(&spec.clone().with_kind(HeadKind::Upper), controls)?;
                let full = eval_hyp(&spec.clone().with_kind(HeadKind::Complete), controls)?;
                cmp(
                    lo.value + up.value,
                    full.value,
                    lo.terms + up.terms + full.terms,
                    lo.quad_evals + up.quad_evals + full.quad_evals,
                )
            }
            &Case::HypClassical { form, z } => {
                let s = eval_hyp(&form.spec(z), controls)?;
                cmp(s.value, form.closed(z), s.terms, s.quad_evals)
            }
            Case::HypDerivative { spec, n } => {
                let formula = derivative_upper_hyp(spec, *n, controls)?;
                let f = |z: f64| eval_hyp(&spec.clone().at(z), controls).map(|s| s.value);
                let fd = central_derivative(&f, spec.z, *n, 0.02 * *n as f64)?;
                cmp(formula.value, fd, formula.terms, formula.quad_evals)
            }
            Case::HypTermRatio { spec, n } => {
                let inc = incremental_coefficients(spec, n + 2);
                let ratio_inc = inc[n + 1] / inc[*n];
                let ratio_direct = direct_coefficient(spec, n + 1) / direct_coefficient(spec, *n);
                cmp(ratio_inc, ratio_direct, n + 2, 0)
            }
            Case::GammaKernel { spec } => verify_gamma_kernel_tol(spec, tol, controls),
            Case::BetaKernel { spec, beta, gamma } => verify_beta_kernel_tol(spec, *beta, *gamma, tol, controls),
            Case::Corollary(c) => verify_corollary_tol(c, tol, controls),
            Case::GenFun(g) => verify_genfun(g, tol, controls),
            &Case::PowerRule { alpha, beta, a, y } => {
                let r = rl_integral_weighted(&|_| 1.0, a, beta, alpha, y, q)?;
                cmp(r.value, rl_power_rule(alpha, beta, a, y)?, 0, r.n_evals)
            }
            Case::Frac(f) => verify_frac(f, tol, controls),
        }
    }
}

fn gamma_cases() -> Vec<Case> {
    let mut v = Vec::new();
    for s in [-1.5, 0.5, 2.0, 3.7] {
        for x in [0.1, 1.0, 5.0] {
            for p in [0.25, 1.0, 4.0] {
                v.push(Case::GammaDecomposition { s, x, p });
            }
        }
    }
    for s in [-1.0, 0.0, 0.5, 2.0] {
        for p in [0.5, 1.0, 3.0] {
            v.push(Case::GammaBessel { s, p });
        }
    }
    for (s, x, p) in [(0.5, 1.0, 0.5), (2.3, 0.4, 1.0), (-1.2, 2.0, 3.0), (4.0, 6.0, 0.25)] {
        v.push(Case::GammaRecurrence { s, x, p });
    }
    for x in [0.1, std::f64::consts::LN_2, 3.0] {
        v.push(Case::GammaClassical { x });
    }
    v
}

fn pochhammer_cases() -> Vec<Case> {
    let mut v = Vec::new();
    for lambda in [0.5, 1.5, 3.2] {
        for nu in [0.0, 1.0, 2.5] {
            for x in [0.2, 1.0, 3.0] {
                for p in [0.25, 1.0, 2.5] {
                    v.push(Case::PochDecomposition { lambda, nu, x, p });
                }
            }
        }
    }
    for upper in [false, true] {
        for lambda in [0.5, 1.5, 3.2] {
            for (n, m) in [(1, 0), (1, 2), (3, 2)] {
                for (x, p) in [(0.5, 0.5), (2.0, 2.0)] {
                    v.push(Case::PochSplitting { upper, lambda, n, m, x, p });
                }
            }
        }
    }
    for (lambda, x, p) in [(1.5, 1.0, 1.0), (0.7, 0.3, 2.0), (2.5, 4.0, 0.5)] {
        for count in [4, 12] {
            v.push(Case::PochSequence { lambda, x, p, count });
        }
    }
    v
}

/// Admissible upper specs with `p ∈ (0, 2]` and `|z| ≤ 0.5`, from `seed`.
pub fn random_decomposition_specs(seed: u64, count: usize) -> Vec<HypSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let round = |x: f64| (x * 1000.0).round() / 1000.0;
    (0..count)
        .map(|_| {
            let alpha = round(rng.gen_range(0.5..3.0));
            let x = round(rng.gen_range(0.05..3.0));
            let p = round(rng.gen_range(0.05..=2.0));
            let n_num = rng.gen_range(0..=1usize);
            let n_den = rng.gen_range(n_num..=2usize).max(1);
            let num: Vec<f64> = (0..n_num).map(|_| round(rng.gen_range(0.5..3.5))).collect();
            let den: Vec<f64> = (0..n_den).map(|_| round(rng.gen_range(0.5..3.5))).collect();
            let z = round(rng.gen_range(-0.5..=0.5));
            HypSpec::upper(alpha, x, p).with_num(&num).with_den(&den).at(z)
        })
        .collect()
}

/// Specs for the derivative formula.
pub fn derivative_specs() -> Vec<HypSpec> {
    vec![
        HypSpec::upper(1.5, 1.0, 0.5).with_num(&[2.0]).with_den(&[3.0]).at(0.2),
        HypSpec::upper(1.0, 0.0, 0.0).with_den(&[1.0]).at(0.7),
        HypSpec::upper(2.0, 0.5, 1.0).with_den(&[1.5]).at(-1.0),
        HypSpec::upper(0.8, 0.3, 2.0).with_num(&[1.5]).with_den(&[2.5, 0.5]).at(1.3),
        HypSpec::upper(2.5, 2.0, 0.25).with_num(&[0.5]).with_den(&[1.5]).at(-0.45),
    ]
}

fn hyp_cases(seed: u64) -> Vec<Case> {
    let mut v: Vec<Case> =
        random_decomposition_specs(seed, 10).into_iter().map(|spec| Case::HypDecomposition { spec }).collect();
    for form in ClassicalForm::ALL {
        for z in [-0.3, 0.3, 0.5] {
            v.push(Case::HypClassical { form, z });
        }
    }
    for spec in derivative_specs() {
        for n in [1, 2] {
            v.push(Case::HypDerivative { spec: spec.clone(), n });
        }
    }
    let ratio_spec = HypSpec::upper(1.5, 1.0, 0.5).with_num(&[2.0, -7.5]).with_den(&[3.0, 0.25]).at(0.4);
    for n in [0, 5, 17] {
        v.push(Case::HypTermRatio { spec: ratio_spec.clone(), n });
    }
    v
}

pub fn gamma_kernel_specs() -> Vec<HypSpec> {
    vec![
        HypSpec::upper(1.0, 0.0, 0.0).with_den(&[1.0]),
        HypSpec::upper(1.5, 1.0, 0.5).with_num(&[2.0]).with_den(&[3.0]).at(0.3),
        HypSpec::upper(2.0, 0.5, 1.0).with_den(&[1.5]).at(-1.0),
        HypSpec::upper(0.7, 0.0, 1.5).with_num(&[-3.0, 1.2]).with_den(&[2.0]).at(0.8),
    ]
}

/// `(full spec, β, γ)`.
pub fn beta_kernel_cases() -> Vec<(HypSpec, f64, f64)> {
    vec![
        (HypSpec::upper(1.0, 0.0, 0.0).with_num(&[1.0]).with_den(&[2.0]), 1.0, 2.0),
        (HypSpec::upper(1.5, 1.0, 1.0).with_num(&[1.0]).with_den(&[2.5]).at(0.4), 1.0, 2.5),
        (HypSpec::upper(2.0, 0.5, 0.5).with_num(&[0.5]).with_den(&[1.5]).at(-0.6), 0.5, 1.5),
        (HypSpec::upper(1.2, 0.2, 2.0).with_num(&[0.8]).with_den(&[1.7, 2.6]).at(1.5), 0.8, 2.6),
    ]
}

pub fn corollary_cases() -> Vec<Corollary> {
    let h = Head::new;
    vec![
        Corollary::GaussConfluentKernel { head: h(1.5, 1.0, 0.5), beta: 2.0, gamma: 3.0, z: 0.3 },
        Corollary::GaussConfluentKernel { head: h(2.0, 0.5, 1.0), beta: 0.5, gamma: 1.5, z: -0.6 },
        Corollary::GaussConfluentKernel { head: h(1.2, 0.0, 0.8), beta: 1.0, gamma: 2.5, z: 0.5 },
        Corollary::KummerLimitKernel { head: h(1.5, 0.5, 1.0), gamma: 2.5, z: -0.7 },
        Corollary::KummerLimitKernel { head: h(2.0, 1.0, 0.5), gamma: 1.5, z: 1.2 },
        Corollary::KummerLimitKernel { head: h(0.8, 0.2, 2.0), gamma: 3.0, z: -2.0 },
        Corollary::EulerBeta { head: h(1.5, 1.0, 1.0), beta: 1.0, gamma: 2.5, z: 0.4 },
        Corollary::EulerBeta { head: h(2.0, 0.5, 0.5), beta: 0.5, gamma: 1.5, z: -0.6 },
        Corollary::EulerBeta { head: h(1.2, 0.3, 2.0), beta: 2.0, gamma: 3.5, z: 0.7 },
        Corollary::Laguerre { head: h(1.5, 0.5, 1.0), m: 0, gamma: 0.5, z: 0.3 },
        Corollary::Laguerre { head: h(2.0, 1.0, 0.5), m: 3, gamma: 1.0, z: 0.8 },
        Corollary::Laguerre { head: h(1.3, 0.2, 1.5), m: 5, gamma: 0.5, z: -1.5 },
        Corollary::IncompleteGamma { head: h(1.5, 0.5, 1.0), beta: 0.5, z: 0.8 },
        Corollary::IncompleteGamma { head: h(2.5, 1.0, 0.5), beta: 1.5, z: 0.4 },
        Corollary::IncompleteGamma { head: h(2.0, 0.3, 2.0), beta: 2.0, z: 0.6 },
        Corollary::BesselJ { head: h(2.0, 0.5, 0.5), gamma: 1.0, z: 0.9 },
        Corollary::BesselJ { head: h(1.5, 1.0, 1.0), gamma: 0.5, z: 2.0 },
        Corollary::BesselJ { head: h(3.0, 0.2, 1.5), gamma: 2.0, z: 4.0 },
        Corollary::Erf { head: h(1.5, 0.5, 1.0), z: 0.8 },
        Corollary::Erf { head: h(2.0, 1.0, 0.5), z: 0.3 },
        Corollary::Erf { head: h(1.2, 0.2, 2.0), z: 0.95 },
    ]
}

fn reps_cases() -> Vec<Case> {
    let mut v: Vec<Case> = gamma_kernel_specs().into_iter().map(|spec| Case::GammaKernel { spec }).collect();
    v.extend(beta_kernel_cases().into_iter().map(|(spec, beta, gamma)| Case::BetaKernel { spec, beta, gamma }));
    v.extend(corollary_cases().into_iter().map(Case::Corollary));
    v
}

/// The `t` grid every generating function is checked on.
pub const GENFUN_T: [f64; 7] = [0.0, 0.1, -0.1, 0.25, -0.25, 0.4, -0.4];

/// One representative `(theorem, λ, N, base)` set per identity, at `t = 0`.
pub fn genfun_bases() -> Vec<GenFunCase> {
    use GenFunTheorem::*;
    let classical = HypSpec::upper(1.0, 0.0, 0.0).with_den(&[1.0]).at(0.2);
    let short = HypSpec::upper(1.5, 0.5, 1.0).with_den(&[2.0]).at(0.2);
    let wide = HypSpec::upper(1.5, 0.5, 1.0).with_den(&[2.0, 2.5, 3.0]).at(0.2);
    let wider = HypSpec::upper(1.2, 0.3, 2.0).with_num(&[0.7]).with_den(&[2.0, 2.5, 3.0, 3.5, 1.5]).at(0.01);
    vec![
        GenFunCase::new(Binomial, 1.0, 1, classical.clone(), 0.0),
        GenFunCase::new(Binomial, 0.7, 2, wide.clone().at(0.3), 0.0),
        GenFunCase::new(NegativeDelta, 2.0, 1, classical.clone(), 0.0),
        GenFunCase::new(NegativeDelta, 1.3, 2, wide.clone().at(0.3), 0.0),
        GenFunCase::new(PairedDelta, 1.0, 1, wide.clone(), 0.0),
        GenFunCase::new(PairedDelta, 0.8, 2, wider, 0.0),
        GenFunCase::new(ReflectedDelta, 1.5, 1, short.clone(), 0.0),
        GenFunCase::new(ReflectedDelta, 2.5, 2, short.clone().at(0.6), 0.0),
        GenFunCase::new(ShiftedParam, 1.0, 1, short.clone(), 0.0),
        GenFunCase::new(ShiftedParam, 2.5, 1, wide.clone().at(0.3), 0.0),
        GenFunCase::new(QuadraticParam, 1.5, 1, wide.clone(), 0.0),
        GenFunCase::new(QuadraticParam, 0.6, 1, wide.at(-0.1), 0.0),
    ]
}

fn genfun_cases() -> Vec<Case> {
    let mut v = Vec::new();
    for base in genfun_bases() {
        for t in GENFUN_T {
            v.push(Case::GenFun(base.at_t(t)));
        }
    }
    v
}

/// `(ρ, μ, spec, ω, a, y)` sets for the closed-form integral.
pub fn frac_integral_cases() -> Vec<FracCase> {
    let mk = |rho, mu, spec: HypSpec, omega, a, y| FracCase { a, rho, mu, omega, y, spec, op: FracOp::Integral };
    vec![
        mk(1.0, 1.0, HypSpec::upper(1.0, 0.0, 0.0).with_den(&[1.0]), 0.5, 0.0, 1.0),
        mk(0.8, 0.6, HypSpec::upper(1.5, 0.5, 1.0).with_num(&[2.0]).with_den(&[3.0]), 0.3, 0.2, 1.2),
        mk(1.5, 0.3, HypSpec::upper(2.0, 1.0, 0.5).with_den(&[1.5]), -0.8, 0.0, 2.0),
        mk(2.2, 1.7, HypSpec::upper(1.2, 0.3, 2.0).with_den(&[2.0]), 0.6, 1.0, 2.5),
        mk(1.5, 0.5, HypSpec::upper(1.0, 0.0, 0.0).with_den(&[1.0]), 0.0, 0.0, 1.3),
    ]
}

pub fn frac_derivative_cases() -> Vec<FracCase> {
    let mk = |rho, mu, spec: HypSpec, omega, a, y| FracCase { a, rho, mu, omega, y, spec, op: FracOp::Derivative };
    vec![
        mk(1.4, 0.6, HypSpec::upper(1.0, 0.0, 0.0).with_den(&[1.0]), 0.4, 0.0, 0.9),
        mk(2.0, 1.0, HypSpec::upper(1.5, 0.5, 1.0).with_num(&[2.0]).with_den(&[3.0]), 0.3, 0.2, 1.4),
        mk(2.5, 1.3, HypSpec::upper(1.5, 0.5, 1.0).with_num(&[2.0]).with_den(&[3.0]), 0.3, 0.2, 1.4),
        mk(1.5, 0.5, HypSpec::upper(1.0, 0.0, 0.0).with_den(&[1.0]), 0.0, 0.0, 1.3),
    ]
}

fn frac_cases() -> Vec<Case> {
    let mut v = Vec::new();
    for alpha in [0.3, 0.5, 1.0, 1.7] {
        for beta in [0.5, 1.0, 2.2] {
            v.push(Case::PowerRule { alpha, beta, a: 0.5, y: 2.0 });
        }
    }
    v.extend(frac_integral_cases().into_iter().map(Case::Frac));
    v.extend(frac_derivative_cases().into_iter().map(Case::Frac));
    v
}

/// Every case of `suite`, in report order.
pub fn cases(suite: Suite, seed: u64) -> Vec<Case> {
    suite
        .parts()
        .into_iter()
        .flat_map(|part| match part {
            Suite::Gamma => gamma_cases(),
            Suite::Pochhammer => pochhammer_cases(),
            Suite::Hyp => hyp_cases(seed),
            Suite::Reps => reps_cases(),
            Suite::Genfun => genfun_cases(),
            Suite::Frac => frac_cases(),
            Suite::All => unreachable!(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub controls: NumericControls,
    /// Replaces every case's default tolerance.
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { controls: NumericControls::default(), tol: None, seed: DEFAULT_SEED }
    }
}

/// Run all cases in parallel; reports come back in case order.
pub fn run_cases(cases: &[Case], opts: &SuiteOptions) -> Vec<VerificationReport> {
    cases.par_iter().map(|c| c.run(opts.tol.unwrap_or_else(|| c.default_tol()), &opts.controls)).collect()
}

pub fn run_suite(suite: Suite, opts: &SuiteOptions) -> Vec<VerificationReport> {
    run_cases(&cases(suite, opts.seed), opts)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn of(reports: &[VerificationReport]) -> Self {
        use crate::report::Status;
        let mut s = Summary::default();
        for r in reports {
            match r.status {
                Status::Pass => s.passed += 1,
                Status::Fail => s.failed += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("misc".parse::<Suite>().is_err());
    }

    #[test]
    fn random_specs_are_seeded_and_admissible() {
        let a = random_decomposition_specs(7, 10);
        assert_eq!(a, random_decomposition_specs(7, 10));
        assert_ne!(a, random_decomposition_specs(8, 10));
        for s in &a {
            assert!(s.validate().is_ok(), "{s:?}");
            assert!(s.head.p > 0.0 && s.head.p <= 2.0 && s.z.abs() <= 0.5);
        }
    }

    #[test]
    fn case_ids_match_report_ids() {
        let opts = SuiteOptions::default();
        for c in cases(Suite::All, DEFAULT_SEED) {
            assert_eq!(c.run(c.default_tol(), &opts.controls).identity_id, c.identity_id());
        }
    }

    #[test]
    fn all_is_the_union() {
        let all = cases(Suite::All, DEFAULT_SEED).len();
        let parts: usize = Suite::All.parts().into_iter().map(|s| cases(s, DEFAULT_SEED).len()).sum();
        assert_eq!(all, parts);
    }
}
