//! Extended incomplete generalized hypergeometric series.
//!
//! ```text
//! Σ_n  h_n (α₂)_n⋯(α_r)_n Δ⁺_n / ((β₁)_n⋯(β_s)_n Δ⁻_n) · zⁿ/n!
//! ```
//!
//! where the head factor `h_n` is one of `(α₁; x, p)_n`, `[α₁; x, p]_n` or
//! `(α₁; p)_n` and each Δ-block `Δ(N; λ)` contributes `(λ)_{Nn} / N^{Nn}`.
//!
//! Terms are built incrementally: the classical part (including `(α₁)_n`)
//! is advanced by its term ratio, and the head enters through the bounded
//! ratio `h_n / (α₁)_n` supplied by a [`HeadSequence`].

use crate::error::{Error, Result};
use crate::pochhammer::{rising, HeadKind, HeadSequence};
use crate::quad::QuadratureControls;

/// The distinguished numerator `(α₁, x; p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Head {
    pub alpha: f64,
    pub x: f64,
    pub p: f64,
}

impl Head {
    pub fn new(alpha: f64, x: f64, p: f64) -> Self {
        Self { alpha, x, p }
    }
}

/// The parameter array `λ/N, (λ+1)/N, …, (λ+N−1)/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaBlock {
    pub n: usize,
    pub lambda: f64,
}

impl DeltaBlock {
    pub fn new(n: usize, lambda: f64) -> Self {
        Self { n, lambda }
    }

    /// Product of the block's Pochhammer symbols at index `m`:
    /// `(λ)_{Nm} / N^{Nm}`.
    pub fn factor(&self, m: usize) -> f64 {
        delta_factor(*self, m)
    }

    /// Ratio of the block factor at `m + 1` to the one at `m`.
    fn step(&self, m: usize) -> f64 {
        let big_n = self.n as f64;
        let base = self.lambda + (self.n * m) as f64;
        (0..self.n).map(|j| (base + j as f64) / big_n).product()
    }

    fn has_zero(&self) -> bool {
        self.lambda <= 0.0 && self.lambda == self.lambda.floor()
    }
}

/// `(λ)_{Nm} / N^{Nm}`; an exact zero once `λ = −k` and `Nm > k`.
pub fn delta_factor(block: DeltaBlock, m: usize) -> f64 {
    let k = block.n * m;
    rising(block.lambda, k) / (block.n as f64).powi(k as i32)
}

/// Full parameterization of one series.
#[derive(Debug, Clone, PartialEq)]
pub struct HypSpec {
    pub kind: HeadKind,
    pub head: Head,
    pub num: Vec<f64>,
    pub den: Vec<f64>,
    pub delta_num: Vec<DeltaBlock>,
    pub delta_den: Vec<DeltaBlock>,
    pub z: f64,
}

impl HypSpec {
    pub fn new(kind: HeadKind, head: Head) -> Self {
        Self { kind, head, num: Vec::new(), den: Vec::new(), delta_num: Vec::new(), delta_den: Vec::new(), z: 0.0 }
    }

    pub fn upper(alpha: f64, x: f64, p: f64) -> Self {
        Self::new(HeadKind::Upper, Head::new(alpha, x, p))
    }

    pub fn with_kind(mut self, kind: HeadKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_num(mut self, num: &[f64]) -> Self {
        self.num = num.to_vec();
        self
    }

    pub fn with_den(mut self, den: &[f64]) -> Self {
        self.den = den.to_vec();
        self
    }

    pub fn with_delta_num(mut self, block: DeltaBlock) -> Self {
        self.delta_num.push(block);
        self
    }

    pub fn with_delta_den(mut self, block: DeltaBlock) -> Self {
        self.delta_den.push(block);
        self
    }

    pub fn at(mut self, z: f64) -> Self {
        self.z = z;
        self
    }

    /// Effective numerator count, head and Δ-blocks included.
    pub fn r(&self) -> usize {
        1 + self.num.len() + self.delta_num.iter().map(|b| b.n).sum::<usize>()
    }

    /// Effective denominator count, Δ-blocks included.
    pub fn s(&self) -> usize {
        self.den.len() + self.delta_den.iter().map(|b| b.n).sum::<usize>()
    }

    /// A classical numerator or Δ-block hits zero, so the series is a polynomial.
    pub fn terminates(&self) -> bool {
        self.num.iter().any(|&a| a <= 0.0 && a == a.floor()) || self.delta_num.iter().any(DeltaBlock::has_zero)
    }

    pub fn validate(&self) -> Result<()> {
        let all = self
            .num
            .iter()
            .chain(&self.den)
            .chain(self.delta_num.iter().map(|b| &b.lambda))
            .chain(self.delta_den.iter().map(|b| &b.lambda))
            .chain([&self.head.alpha, &self.head.x, &self.head.p, &self.z]);
        if let Some(bad) = all.into_iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("non-finite series parameter {bad}")));
        }
        if let Some(&b) = self.den.iter().find(|&&b| b <= 0.0 && b == b.floor()) {
            return Err(Error::domain(format!("denominator parameter {b} is a non-positive integer")));
        }
        if let Some(b) = self.delta_den.iter().find(|b| b.has_zero()) {
            return Err(Error::domain(format!("denominator block Δ({}; {}) has a zero", b.n, b.lambda)));
        }
        if self.delta_num.iter().chain(&self.delta_den).any(|b| b.n == 0) {
            return Err(Error::domain("Δ-block with N = 0"));
        }
        self.check_region(self.z)
    }

    /// Convergence region of the classical series with the same counts.
    pub fn check_region(&self, z: f64) -> Result<()> {
        if self.terminates() {
            return Ok(());
        }
        let (r, s) = (self.r(), self.s());
        if r > s + 1 && z != 0.0 {
            return Err(Error::Inadmissible(format!("{r} numerators over {s} denominators diverges for z ≠ 0")));
        }
        if r == s + 1 && z.abs() >= 1.0 {
            return Err(Error::Inadmissible(format!("{r}F{s}-type series needs |z| < 1, got z = {z}")));
        }
        Ok(())
    }

    /// Every parameter, the head's α₁ included, shifted by `n`.
    pub fn shifted(&self, n: usize) -> Self {
        let d = n as f64;
        let mut out = self.clone();
        out.head.alpha += d;
        out.num.iter_mut().for_each(|a| *a += d);
        out.den.iter_mut().for_each(|b| *b += d);
        out
    }

    pub(crate) fn head_sequence(&self, ctl: &QuadratureControls) -> Result<HeadSequence> {
        HeadSequence::new(self.kind, self.head.alpha, self.head.x, self.head.p, *ctl)
    }
}

/// Series truncation controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControls {
    pub rel_tol: f64,
    pub max_terms: usize,
    pub consecutive_small: usize,
}

impl Default for SeriesControls {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_terms: 10_000, consecutive_small: 3 }
    }
}

impl SeriesControls {
    pub fn validate(&self) -> Result<()> {
        if self.rel_tol > 0.0 && self.max_terms >= 1 && self.consecutive_small >= 1 {
            Ok(())
        } else {
            Err(Error::domain(format!("invalid series controls {self:?}")))
        }
    }
}

/// Quadrature and series controls together.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NumericControls {
    pub quad: QuadratureControls,
    pub series: SeriesControls,
}

impl NumericControls {
    pub fn validate(&self) -> Result<()> {
        self.quad.validate()?;
        self.series.validate()
    }
}

/// A summed series with its cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Number of terms added, `n = 0` included.
    pub terms: usize,
    pub quad_evals: usize,
    /// Magnitude of the last term added.
    pub err_estimate: f64,
}

/// Consecutive growing terms after which the growth rate is inspected.
const DIVERGENCE_RUN: usize = 50;

/// Classical (non-head) parameters of a series.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Params<'a> {
    pub lead: Option<f64>,
    pub num: &'a [f64],
    pub den: &'a [f64],
    pub delta_num: &'a [DeltaBlock],
    pub delta_den: &'a [DeltaBlock],
}

impl<'a> Params<'a> {
    pub fn of(spec: &'a HypSpec) -> Self {
        Self {
            lead: Some(spec.head.alpha),
            num: &spec.num,
            den: &spec.den,
            delta_num: &spec.delta_num,
            delta_den: &spec.delta_den,
        }
    }

    pub fn classical(num: &'a [f64], den: &'a [f64]) -> Self {
        Self { lead: None, num, den, delta_num: &[], delta_den: &[] }
    }

    /// `coefficient_{n+1} / coefficient_n`, without the `z/(n+1)` factor.
    fn ratio(&self, n: usize) -> f64 {
        let k = n as f64;
        let mut r = 1.0;
        if let Some(a) = self.lead {
            r *= a + k;
        }
        for &a in self.num {
            r *= a + k;
        }
        for b in self.delta_num {
            r *= b.step(n);
        }
        if r == 0.0 {
            return 0.0;
        }
        for &b in self.den {
            r /= b + k;
        }
        for b in self.delta_den {
            r /= b.step(n);
        }
        r
    }

    /// Coefficient of `z^n` before the head ratio, built from scratch.
    fn direct(&self, n: usize, z: f64) -> f64 {
        let mut c = self.lead.map_or(1.0, |a| rising(a, n));
        for &a in self.num {
            c *= rising(a, n);
        }
        for b in self.delta_num {
            c *= b.factor(n);
        }
        for &b in self.den {
            c /= rising(b, n);
        }
        for b in self.delta_den {
            c /= b.factor(n);
        }
        c * z.powi(n as i32) / rising(1.0, n)
    }
}

/// Core summation loop shared by every series in the crate.
pub(crate) fn sum_series(
    params: Params<'_>,
    z: f64,
    head: &mut dyn FnMut(usize) -> Result<f64>,
    sctl: &SeriesControls,
) -> Result<(f64, usize, f64)> {
    sctl.validate()?;
    let mut classical = 1.0;
    let mut sum = 0.0;
    let mut small_run = 0;
    let mut grow_run = 0;
    let mut run_rate = 0.0;
    let mut prev = f64::INFINITY;
    for n in 0..sctl.max_terms {
        let term = classical * head(n)?;
        sum += term;
        let mag = term.abs();
        if !sum.is_finite() {
            return Err(Error::Divergence(n));
        }
        if mag <= sctl.rel_tol * sum.abs() {
            small_run += 1;
            if small_run >= sctl.consecutive_small {
                return Ok((sum, n + 1, mag));
            }
        } else {
            small_run = 0;
        }
        // Entire series at large |z| grow for a long stretch before turning
        // over; only growth whose rate is not decaying counts.
        if mag > prev {
            let rate = mag / prev;
            if grow_run == 0 {
                run_rate = rate;
            }
            grow_run += 1;
            if grow_run >= DIVERGENCE_RUN {
                if rate >= run_rate {
                    return Err(Error::Divergence(n));
                }
                grow_run = 0;
            }
        } else {
            grow_run = 0;
        }
        prev = mag;
        let ratio = params.ratio(n);
        if ratio == 0.0 || z == 0.0 {
            return Ok((sum, n + 1, 0.0));
        }
        classical *= ratio * z / (n + 1) as f64;
    }
    Err(Error::MaxTermsExceeded(sctl.max_terms))
}

/// A series whose head sequence is computed once and reused across
/// arguments `z` (and across Δ-block changes in the outer sums of
/// generating functions).
#[derive(Debug, Clone)]
pub struct PreparedSeries {
    head: HeadSequence,
    sctl: SeriesControls,
}

impl PreparedSeries {
    pub fn new(spec: &HypSpec, controls: &NumericControls) -> Result<Self> {
        controls.validate()?;
        Ok(Self { head: spec.head_sequence(&controls.quad)?, sctl: controls.series })
    }

    /// Sum `spec`, whose head must match the prepared one.
    pub fn eval(&mut self, spec: &HypSpec) -> Result<SeriesSum> {
        if spec.kind != self.head.kind()
            || spec.head.alpha != self.head.alpha()
            || spec.head.x != self.head.x()
            || spec.head.p != self.head.p()
        {
            return Err(Error::domain("series head does not match the prepared head sequence"));
        }
        spec.validate()?;
        let before = self.head.quad_evals();
        let head = &mut self.head;
        let (value, terms, last) = sum_series(Params::of(spec), spec.z, &mut |n| head.ratio(n), &self.sctl)?;
        Ok(SeriesSum { value, terms, quad_evals: self.head.quad_evals() - before, err_estimate: last })
    }

    /// Sum `spec` with its argument replaced by `z`.
    pub fn eval_at(&mut self, spec: &HypSpec, z: f64) -> Result<SeriesSum> {
        let mut shifted = spec.clone();
        shifted.z = z;
        self.eval(&shifted)
    }

    pub fn quad_evals(&self) -> usize {
        self.head.quad_evals()
    }
}

/// Sum the extended incomplete hypergeometric series described by `spec`.
pub fn eval_hyp(spec: &HypSpec, controls: &NumericControls) -> Result<SeriesSum> {
    spec.validate()?;
    PreparedSeries::new(spec, controls)?.eval(spec)
}

/// Classical `rFs(num; den; z)` through the same summation engine.
pub fn classical_hyp(num: &[f64], den: &[f64], z: f64, sctl: &SeriesControls) -> Result<SeriesSum> {
    if let Some(&b) = den.iter().find(|&&b| b <= 0.0 && b == b.floor()) {
        return Err(Error::domain(format!("denominator parameter {b} is a non-positive integer")));
    }
    let (value, terms, last) = sum_series(Params::classical(num, den), z, &mut |_| Ok(1.0), sctl)?;
    Ok(SeriesSum { value, terms, quad_evals: 0, err_estimate: last })
}

/// ₂Γ₁[(α, x; p), β; γ; z].
pub fn eval_gauss_2g1(
    alpha: f64,
    x: f64,
    p: f64,
    beta: f64,
    gamma: f64,
    z: f64,
    controls: &NumericControls,
) -> Result<SeriesSum> {
    eval_hyp(&HypSpec::upper(alpha, x, p).with_num(&[beta]).with_den(&[gamma]).at(z), controls)
}

/// ₁Γ₁[(α, x; p); γ; z].
pub fn eval_kummer_1g1(
    alpha: f64,
    x: f64,
    p: f64,
    gamma: f64,
    z: f64,
    controls: &NumericControls,
) -> Result<SeriesSum> {
    eval_hyp(&HypSpec::upper(alpha, x, p).with_den(&[gamma]).at(z), controls)
}

/// n-th z-derivative of an upper series:
/// `(α₁)_n⋯(α_r)_n / ((β₁)_n⋯(β_s)_n)` times the series with every
/// parameter shifted by `n`.
pub fn derivative_upper_hyp(spec: &HypSpec, n: usize, controls: &NumericControls) -> Result<SeriesSum> {
    if spec.kind != HeadKind::Upper {
        return Err(Error::domain("derivative formula applies to the upper series"));
    }
    if !spec.delta_num.is_empty() || !spec.delta_den.is_empty() {
        return Err(Error::domain("derivative formula is stated for plain parameters only"));
    }
    spec.validate()?;
    let mut factor = rising(spec.head.alpha, n);
    for &a in &spec.num {
        factor *= rising(a, n);
    }
    for &b in &spec.den {
        factor /= rising(b, n);
    }
    if factor == 0.0 {
        return Ok(SeriesSum { value: 0.0, terms: 0, quad_evals: 0, err_estimate: 0.0 });
    }
    let shifted = eval_hyp(&spec.shifted(n), controls)?;
    Ok(SeriesSum { value: factor * shifted.value, err_estimate: factor.abs() * shifted.err_estimate, ..shifted })
}

/// The first `count` classical coefficients (head ratio excluded) produced by
/// the incremental update the summation loop uses.
pub fn incremental_coefficients(spec: &HypSpec, count: usize) -> Vec<f64> {
    let params = Params::of(spec);
    let mut out = Vec::with_capacity(count);
    let mut c = 1.0;
    for n in 0..count {
        out.push(c);
        c *= params.ratio(n) * spec.z / (n + 1) as f64;
    }
    out
}

/// The classical coefficient of index `n`, computed from scratch.
pub fn direct_coefficient(spec: &HypSpec, n: usize) -> f64 {
    Params::of(spec).direct(n, spec.z)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    fn nc() -> NumericControls {
        NumericControls::default()
    }

    #[test]
    fn exponential_from_trivial_head() {
        for a in [0.5, 1.0, 2.7] {
            let spec = HypSpec::upper(a, 0.0, 0.0).with_den(&[a]).at(1.0);
            assert!(rel(eval_hyp(&spec, &nc()).unwrap().value, std::f64::consts::E) < 1e-14);
        }
    }

    #[test]
    fn log_from_gauss() {
        let v = eval_gauss_2g1(1.0, 0.0, 0.0, 1.0, 2.0, 0.5, &nc()).unwrap().value;
        assert!(rel(v, 2.0 * 2f64.ln()) < 1e-12);
        assert!((v - 1.386_294_361_1).abs() < 1e-10);
    }

    #[test]
    fn kummer_closed_forms() {
        let e = std::f64::consts::E;
        assert!(rel(eval_kummer_1g1(1.0, 0.0, 0.0, 1.0, 1.0, &nc()).unwrap().value, e) < 1e-14);
        assert!(rel(eval_kummer_1g1(1.0, 0.0, 0.0, 2.0, 1.0, &nc()).unwrap().value, e - 1.0) < 1e-14);
    }

    #[test]
    fn extended_heads_match_reference() {
        let v = eval_gauss_2g1(1.5, 1.0, 0.5, 2.0, 3.0, 0.3, &nc()).unwrap().value;
        assert!(rel(v, 0.739_068_083_999_450_7) < 1e-11, "{v}");
        let v = eval_kummer_1g1(1.5, 0.5, 1.0, 2.5, -0.7, &nc()).unwrap().value;
        assert!(rel(v, 0.212_149_011_138_013_86) < 1e-11, "{v}");
    }

    #[test]
    fn huge_split_point_kills_upper_head() {
        let v = eval_gauss_2g1(1.0, 1e6, 0.0, 1.0, 2.0, 0.5, &nc()).unwrap();
        assert_eq!(v.value, 0.0);
    }

    #[test]
    fn z_zero_is_head_constant() {
        let spec = HypSpec::upper(1.5, 1.0, 0.5).with_num(&[2.0]).with_den(&[3.0]);
        let s = eval_hyp(&spec, &nc()).unwrap();
        assert_eq!(s.terms, 1);
    }

    #[test]
    fn admissibility() {
        let spec = HypSpec::upper(1.0, 0.5, 1.0).with_num(&[1.0]).with_den(&[2.0]).at(1.0);
        assert!(matches!(eval_hyp(&spec, &nc()), Err(Error::Inadmissible(_))));
        let spec = HypSpec::upper(1.0, 0.5, 1.0).with_num(&[1.0, 2.0]).with_den(&[2.0]).at(0.1);
        assert!(matches!(eval_hyp(&spec, &nc()), Err(Error::Inadmissible(_))));
        let spec = HypSpec::upper(1.0, 0.5, 1.0).with_num(&[-2.0, 2.0]).with_den(&[2.0]).at(5.0);
        assert!(eval_hyp(&spec, &nc()).is_ok());
        let spec = HypSpec::upper(1.0, 0.5, 1.0).with_den(&[-1.0]).at(0.1);
        assert!(matches!(eval_hyp(&spec, &nc()), Err(Error::Domain(_))));
    }

    #[test]
    fn termination_counts_terms() {
        let spec = HypSpec::upper(1.0, 0.0, 0.0).with_num(&[-3.0]).with_den(&[2.0]).at(0.7);
        assert_eq!(eval_hyp(&spec, &nc()).unwrap().terms, 4);
        let spec = HypSpec::upper(1.0, 0.3, 1.0).with_delta_num(DeltaBlock::new(2, -5.0)).at(0.7);
        assert_eq!(eval_hyp(&spec, &nc()).unwrap().terms, 3);
    }

    #[test]
    fn max_terms_exceeded() {
        let nc = NumericControls { series: SeriesControls { max_terms: 5, ..Default::default() }, ..nc() };
        let spec = HypSpec::upper(1.0, 0.0, 0.0).with_den(&[1.0]).at(3.0);
        assert!(matches!(eval_hyp(&spec, &nc), Err(Error::MaxTermsExceeded(5))));
    }

    #[test]
    fn delta_factor_examples() {
        assert_eq!(delta_factor(DeltaBlock::new(1, 2.0), 3), 24.0);
        assert_eq!(delta_factor(DeltaBlock::new(2, -3.0), 2), 0.0);
        assert_eq!(delta_factor(DeltaBlock::new(2, 1.0), 1), 0.5);
    }

    #[test]
    fn derivative_identity_cases() {
        let spec = HypSpec::upper(1.5, 1.0, 0.5).with_num(&[2.0]).with_den(&[3.0]).at(0.2);
        let d0 = derivative_upper_hyp(&spec, 0, &nc()).unwrap().value;
        assert_eq!(d0, eval_hyp(&spec, &nc()).unwrap().value);
        for z in [-0.4, 0.3, 1.1] {
            let spec = HypSpec::upper(1.0, 0.0, 0.0).with_den(&[1.0]).at(z);
            assert!(rel(derivative_upper_hyp(&spec, 2, &nc()).unwrap().value, z.exp()) < 1e-13);
        }
        assert!(derivative_upper_hyp(&spec.clone().with_kind(HeadKind::Lower), 1, &nc()).is_err());
    }

    #[test]
    fn prepared_head_must_match() {
        let spec = HypSpec::upper(1.5, 1.0, 0.5).with_den(&[3.0]);
        let mut prep = PreparedSeries::new(&spec, &nc()).unwrap();
        let other = HypSpec::upper(1.5, 1.0, 0.6).with_den(&[3.0]);
        assert!(prep.eval(&other).is_err());
        assert!(prep.eval_at(&spec, 0.3).is_ok());
    }
}
