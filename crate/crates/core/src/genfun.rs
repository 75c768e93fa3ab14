//! Generating functions over shifted Δ(N; λ) parameter blocks.
//!
//! Each identity has the shape
//!
//! ```text
//! Σ_n (λ)_n/n! · F_n(z) tⁿ = (1−t)^{−λ} · G(ζ(z, t))
//! ```
//!
//! where `F_n` carries a parameter block that moves with `n` and `G` is a
//! single series at a transformed argument.

use crate::error::{Error, Result};
use crate::hyp::{DeltaBlock, HypSpec, NumericControls, PreparedSeries};
use crate::pochhammer::HeadKind;
use crate::report::VerificationReport;

pub use crate::hyp::delta_factor;

/// Outer sums are never extended past this many terms.
pub const MAX_OUTER_TERMS: usize = 500;

/// Largest `|t|` accepted by [`verify_genfun`].
pub const MAX_ABS_T: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GenFunTheorem {
    /// `Δ(N; λ+n)` in the numerator; right side `Δ(N; λ)` at `z/(1−t)^N`.
    Binomial,
    /// `Δ(N; −n)`; right side `Δ(N; λ)` at `z(−t/(1−t))^N`.
    NegativeDelta,
    /// `Δ(N; −n), Δ(N; λ+n)`; right side `Δ(2N; λ)` at `z(−4t/(1−t)²)^N`.
    PairedDelta,
    /// `Δ(N; −n)` over `Δ(N; 1−λ−n)`; right side the base at `z tᴺ`.
    ReflectedDelta,
    /// Plain numerator `λ+n`; right side `λ` at `z/(1−t)`.
    ShiftedParam,
    /// Plain numerators `−n, λ+n`; right side `Δ(2; λ)` at `−4zt/(1−t)²`.
    QuadraticParam,
}

impl GenFunTheorem {
    pub const ALL: [GenFunTheorem; 6] = [
        GenFunTheorem::Binomial,
        GenFunTheorem::NegativeDelta,
        GenFunTheorem::PairedDelta,
        GenFunTheorem::ReflectedDelta,
        GenFunTheorem::ShiftedParam,
        GenFunTheorem::QuadraticParam,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GenFunTheorem::Binomial => "binomial-delta",
            GenFunTheorem::NegativeDelta => "negative-delta",
            GenFunTheorem::PairedDelta => "paired-delta",
            GenFunTheorem::ReflectedDelta => "reflected-delta",
            GenFunTheorem::ShiftedParam => "shifted-param",
            GenFunTheorem::QuadraticParam => "quadratic-param",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.name() == s)
    }

    /// The two plain-parameter forms fix `N = 1`.
    fn block_size(&self, n_block: usize) -> usize {
        match self {
            GenFunTheorem::ShiftedParam | GenFunTheorem::QuadraticParam => 1,
            _ => n_block,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenFunCase {
    pub theorem: GenFunTheorem,
    pub lambda: f64,
    pub n_block: usize,
    /// Upper-kind core series; its `z` is the identity's `z`.
    pub base: HypSpec,
    pub t: f64,
    /// Fixed outer truncation; `None` picks it from the tail bound.
    pub m_outer: Option<usize>,
}

impl GenFunCase {
    pub fn new(theorem: GenFunTheorem, lambda: f64, n_block: usize, base: HypSpec, t: f64) -> Self {
        Self { theorem, lambda, n_block, base, t, m_outer: None }
    }

    pub fn with_m_outer(mut self, m: usize) -> Self {
        self.m_outer = Some(m);
        self
    }

    pub fn at_t(&self, t: f64) -> Self {
        Self { t, ..self.clone() }
    }

    fn big_n(&self) -> usize {
        self.theorem.block_size(self.n_block)
    }

    pub fn validate(&self) -> Result<()> {
        if self.base.kind != HeadKind::Upper {
            return Err(Error::domain("generating functions are stated for the upper series"));
        }
        if !self.base.delta_num.is_empty() || !self.base.delta_den.is_empty() {
            return Err(Error::domain("base series must not carry Δ-blocks"));
        }
        if self.n_block == 0 {
            return Err(Error::domain("Δ-block size N must be at least 1"));
        }
        if !(self.t.abs() < 1.0) || !self.lambda.is_finite() {
            return Err(Error::domain(format!("generating functions need |t| < 1, got t = {}", self.t)));
        }
        Ok(())
    }

    /// The `n`-th inner series of the left side.
    pub fn lhs_spec(&self, n: usize) -> HypSpec {
        let big_n = self.big_n();
        let shift = n as f64;
        let lam = self.lambda;
        let mut spec = self.base.clone();
        match self.theorem {
            GenFunTheorem::Binomial => spec.delta_num.push(DeltaBlock::new(big_n, lam + shift)),
            GenFunTheorem::NegativeDelta => spec.delta_num.push(DeltaBlock::new(big_n, -shift)),
            GenFunTheorem::PairedDelta => {
                spec.delta_num.push(DeltaBlock::new(big_n, -shift));
                spec.delta_num.push(DeltaBlock::new(big_n, lam + shift));
            }
            GenFunTheorem::ReflectedDelta => {
                spec.delta_num.push(DeltaBlock::new(big_n, -shift));
                spec.delta_den.push(DeltaBlock::new(big_n, 1.0 - lam - shift));
            }
            GenFunTheorem::ShiftedParam => spec.num.insert(0, lam + shift),
            GenFunTheorem::QuadraticParam => {
                spec.num.insert(0, lam + shift);
                spec.num.insert(0, -shift);
            }
        }
        spec
    }

    /// The single series on the right side, at its transformed argument.
    pub fn rhs_spec(&self) -> HypSpec {
        let big_n = self.big_n();
        let (t, z, lam) = (self.t, self.base.z, self.lambda);
        let k = big_n as i32;
        let mut spec = self.base.clone();
        match self.theorem {
            GenFunTheorem::Binomial => {
                spec.delta_num.push(DeltaBlock::new(big_n, lam));
                spec.z = z / (1.0 - t).powi(k);
            }
            GenFunTheorem::NegativeDelta => {
                spec.delta_num.push(DeltaBlock::new(big_n, lam));
                spec.z = z * (-t / (1.0 - t)).powi(k);
            }
            GenFunTheorem::PairedDelta => {
                spec.delta_num.push(DeltaBlock::new(2 * big_n, lam));
                spec.z = z * (-4.0 * t / ((1.0 - t) * (1.0 - t))).powi(k);
            }
            GenFunTheorem::ReflectedDelta => spec.z = z * t.powi(k),
            GenFunTheorem::ShiftedParam => {
                spec.num.insert(0, lam);
                spec.z = z / (1.0 - t);
            }
            GenFunTheorem::QuadraticParam => {
                spec.delta_num.push(DeltaBlock::new(2, lam));
                spec.z = -4.0 * z * t / ((1.0 - t) * (1.0 - t));
            }
        }
        spec
    }

    pub fn rhs_prefactor(&self) -> f64 {
        (1.0 - self.t).powf(-self.lambda)
    }

    pub fn identity_id(&self) -> String {
        let b = &self.base;
        let list = |v: &[f64]| v.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(",");
        format!(
            "{}[N={},lambda={},alpha={},x={},p={},num=[{}],den=[{}],z={},t={}]",
            self.theorem.name(),
            self.big_n(),
            self.lambda,
            b.head.alpha,
            b.head.x,
            b.head.p,
            list(&b.num),
            list(&b.den),
            b.z,
            self.t
        )
    }
}

/// Truncated left side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterSum {
    pub value: f64,
    /// Outer terms summed (`n = 0..outer_terms`).
    pub outer_terms: usize,
    pub inner_terms: usize,
    pub quad_evals: usize,
    /// Estimate of the neglected outer tail.
    pub tail_bound: f64,
}

/// `Σ_{n<M} (λ)_n/n! · F_n tⁿ`, with `M` fixed by the case or chosen so the
/// geometric tail estimate drops below `0.1 · rel_tol · |sum|`.
pub fn gf_lhs(case: &GenFunCase, controls: &NumericControls) -> Result<OuterSum> {
    case.validate()?;
    let mut prepared = PreparedSeries::new(&case.lhs_spec(0), controls)?;
    let (t, lam) = (case.t, case.lambda);
    let target = 0.1 * controls.series.rel_tol;
    let cap = case.m_outer.map_or(MAX_OUTER_TERMS, |m| m.max(1));

    let mut coeff = 1.0;
    let mut sum = 0.0;
    let mut inner_terms = 0;
    let mut max_inner: f64 = 0.0;
    let mut prev_mag = f64::NAN;
    let mut tail = f64::INFINITY;
    let mut n = 0;
    while n < cap {
        let inner = prepared.eval(&case.lhs_spec(n))?;
        inner_terms += inner.terms;
        max_inner = max_inner.max(inner.value.abs());
        let term = coeff * inner.value;
        sum += term;
        let mag = term.abs();
        n += 1;

        let next = coeff * (lam + (n - 1) as f64) * t / n as f64;
        // Tail estimate: next outer coefficient times the largest inner value
        // seen, continued geometrically at the larger of the coefficient ratio
        // and the observed term ratio.
        let class_ratio = if coeff == 0.0 { 0.0 } else { (next / coeff).abs() };
        let obs_ratio = if prev_mag > 0.0 { mag / prev_mag } else { 0.0 };
        let rho = class_ratio.max(obs_ratio);
        tail = if next == 0.0 {
            0.0
        } else if rho < 1.0 {
            next.abs() * max_inner.max(inner.value.abs()) / (1.0 - rho)
        } else {
            f64::INFINITY
        };
        prev_mag = mag;
        coeff = next;
        if case.m_outer.is_none() && tail <= target * sum.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    if case.m_outer.is_none() && tail > target * sum.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::NonConvergence { estimate: sum, error: tail, evals: n });
    }
    Ok(OuterSum { value: sum, outer_terms: n, inner_terms, quad_evals: prepared.quad_evals(), tail_bound: tail })
}

/// The closed form side with its series cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RhsValue {
    pub value: f64,
    pub terms: usize,
    pub quad_evals: usize,
}

pub fn gf_rhs(case: &GenFunCase, controls: &NumericControls) -> Result<RhsValue> {
    case.validate()?;
    let spec = case.rhs_spec();
    let s = crate::hyp::eval_hyp(&spec, controls)?;
    Ok(RhsValue { value: case.rhs_prefactor() * s.value, terms: s.terms, quad_evals: s.quad_evals })
}

/// Left side against right side; SKIPPED if either side leaves the
/// convergence region of its series.
pub fn verify_genfun(case: &GenFunCase, tol: f64, controls: &NumericControls) -> Result<VerificationReport> {
    case.validate()?;
    if case.t.abs() > MAX_ABS_T {
        return Err(Error::domain(format!("generating-function checks need |t| ≤ {MAX_ABS_T}, got {}", case.t)));
    }
    let id = case.identity_id();
    for spec in [case.lhs_spec(0), case.rhs_spec()] {
        match spec.validate() {
            Ok(()) => {}
            Err(Error::Inadmissible(_)) => return Ok(VerificationReport::skipped(id, tol)),
            Err(e) => return Err(e),
        }
    }
    let lhs = gf_lhs(case, controls)?;
    let rhs = gf_rhs(case, controls)?;
    Ok(VerificationReport::compare(
        id,
        lhs.value,
        rhs.value,
        tol,
        lhs.inner_terms + rhs.terms,
        lhs.quad_evals + rhs.quad_evals,
    ))
}
