//! Globally adaptive Gauss–Kronrod quadrature (10-point Gauss, 21-point Kronrod).
//!
//! Every integral representation in the crate is evaluated through this
//! module. An integral is described as a list of [`Piece`]s, each a finite
//! interval with its own (possibly variable-changed) integrand; all pieces
//! share one priority queue so the subinterval with the largest error
//! estimate is always bisected next, wherever it lives.
//!
//! Semi-infinite ranges `(a, ∞)` are mapped onto `u ∈ (0, 1)` through
//! `t = a + L·u/(1 − u)`. The Kronrod nodes never touch the interval ends, so
//! integrable endpoint singularities are resolved by repeated bisection
//! toward the singular end.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances for adaptive quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureControls {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Relative integrand magnitude below which the infinite tail is dropped.
    pub tail_cut_factor: f64,
}

impl Default for QuadratureControls {
    fn default() -> Self {
        Self { rel_tol: 1e-12, abs_tol: 1e-14, max_subdivisions: 2000, tail_cut_factor: 1e-18 }
    }
}

impl QuadratureControls {
    pub fn validate(&self) -> Result<()> {
        let ok = self.rel_tol > 0.0
            && self.abs_tol > 0.0
            && self.max_subdivisions >= 1
            && self.tail_cut_factor > 0.0
            && self.tail_cut_factor < 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::domain(format!("invalid quadrature controls {self:?}")))
        }
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }
}

/// Outcome of a converged quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub n_evals: usize,
}

/// One finite piece of a composite integral.
pub struct Piece<'a> {
    pub f: &'a dyn Fn(f64) -> f64,
    pub a: f64,
    pub b: f64,
}

impl<'a> Piece<'a> {
    pub fn new(f: &'a dyn Fn(f64) -> f64, a: f64, b: f64) -> Self {
        Self { f, a, b }
    }
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

const EVALS_PER_RULE: usize = 21;

#[derive(Debug, Clone, Copy)]
struct Segment {
    piece: usize,
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// Apply the 21-point Kronrod rule with embedded 10-point Gauss error estimate.
fn gk21(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = sanitize(f(center));
    let mut res_g = 0.0;
    let mut res_k = fc * WGK[10];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];

    for (j, &wg) in WG.iter().enumerate() {
        let jtw = 2 * j + 1;
        let dx = half * XGK[jtw];
        let f1 = sanitize(f(center - dx));
        let f2 = sanitize(f(center + dx));
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_g += wg * (f1 + f2);
        res_k += WGK[jtw] * (f1 + f2);
        res_abs += WGK[jtw] * (f1.abs() + f2.abs());
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * XGK[jtwm1];
        let f1 = sanitize(f(center - dx));
        let f2 = sanitize(f(center + dx));
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_k += WGK[jtwm1] * (f1 + f2);
        res_abs += WGK[jtwm1] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let err = (res_k - res_g) * half;
    let abs_half = half.abs();
    (res_k * half, rescale_error(err, res_abs * abs_half, res_asc * abs_half))
}

// Non-finite samples would poison the whole estimate; the integrands used
// here only produce them at removable endpoint limits.
#[inline]
fn sanitize(v: f64) -> f64 {
    if v.is_finite() {
        v
    } else {
        0.0
    }
}

fn too_narrow(a: f64, b: f64) -> bool {
    let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    (b - a).abs() <= 1e3 * f64::EPSILON * scale
}

/// Integrate a composite of finite pieces to the requested tolerance.
pub fn integrate_pieces(pieces: &[Piece<'_>], ctl: &QuadratureControls) -> Result<QuadResult> {
    ctl.validate()?;
    let mut heap = BinaryHeap::new();
    let mut settled_value = 0.0;
    let mut settled_error = 0.0;
    let mut evals = 0usize;

    for (idx, piece) in pieces.iter().enumerate() {
        if !(piece.b > piece.a) {
            if piece.b == piece.a {
                continue;
            }
            return Err(Error::domain(format!("integration piece [{}, {}] is reversed", piece.a, piece.b)));
        }
        let (value, error) = gk21(piece.f, piece.a, piece.b);
        evals += EVALS_PER_RULE;
        heap.push(Segment { piece: idx, a: piece.a, b: piece.b, value, error });
    }
    if heap.is_empty() {
        return Ok(QuadResult { value: 0.0, err_estimate: 0.0, n_evals: evals.max(1) });
    }

    let mut subdivisions = heap.len();
    loop {
        let total_value: f64 = settled_value + heap.iter().map(|s| s.value).sum::<f64>();
        let total_error: f64 = settled_error + heap.iter().map(|s| s.error).sum::<f64>();
        let target = ctl.abs_tol.max(ctl.rel_tol * total_value.abs());
        if total_error <= target || heap.is_empty() {
            return Ok(QuadResult { value: total_value, err_estimate: total_error, n_evals: evals });
        }
        if subdivisions >= ctl.max_subdivisions {
            return Err(Error::NonConvergence { estimate: total_value, error: total_error, evals });
        }
        let worst = heap.pop().expect("heap checked non-empty");
        if too_narrow(worst.a, worst.b) {
            settled_value += worst.value;
            settled_error += worst.error;
            continue;
        }
        let mid = 0.5 * (worst.a + worst.b);
        let f = pieces[worst.piece].f;
        let (v1, e1) = gk21(f, worst.a, mid);
        let (v2, e2) = gk21(f, mid, worst.b);
        evals += 2 * EVALS_PER_RULE;
        subdivisions += 1;
        heap.push(Segment { piece: worst.piece, a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { piece: worst.piece, a: mid, b: worst.b, value: v2, error: e2 });
    }
}

/// Map `t = a + scale·u/(1 − u)` so that `(a, ∞)` becomes `u ∈ (0, 1)`.
pub fn tail_map(f: impl Fn(f64) -> f64, a: f64, scale: f64) -> impl Fn(f64) -> f64 {
    move |u: f64| {
        let w = 1.0 - u;
        if w <= 0.0 {
            return 0.0;
        }
        let t = a + scale * u / w;
        let jac = scale / (w * w);
        let v = f(t);
        if v == 0.0 {
            0.0
        } else {
            v * jac
        }
    }
}

/// Integrate `f` over `(a, b)`; `b` may be `f64::INFINITY`.
pub fn integrate_adaptive(f: impl Fn(f64) -> f64, a: f64, b: f64, ctl: &QuadratureControls) -> Result<QuadResult> {
    if !a.is_finite() || b.is_nan() || !(a < b) {
        return Err(Error::domain(format!("need finite a < b, got a={a}, b={b}")));
    }
    if b.is_finite() {
        integrate_pieces(&[Piece::new(&f, a, b)], ctl)
    } else {
        let mapped = tail_map(&f, a, 1.0);
        integrate_pieces(&[Piece::new(&mapped, 0.0, 1.0)], ctl)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_on_half_line() {
        let r = integrate_adaptive(|t| (-t).exp(), 0.0, f64::INFINITY, &Default::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-13, "{r:?}");
        assert!(r.err_estimate >= 0.0 && r.n_evals >= 1);
    }

    #[test]
    fn inverse_sqrt_endpoint_singularity() {
        let r = integrate_adaptive(|t: f64| 1.0 / t.sqrt(), 0.0, 1.0, &Default::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-11, "{r:?}");
    }

    #[test]
    fn polynomial_is_exact_in_one_rule() {
        let r = integrate_adaptive(|t: f64| t.powi(7) - 3.0 * t, -1.0, 2.0, &Default::default()).unwrap();
        let exact = (2f64.powi(8) - 1.0) / 8.0 - 1.5 * (4.0 - 1.0);
        assert!((r.value - exact).abs() < 1e-12);
        assert_eq!(r.n_evals, 21);
    }

    #[test]
    fn exhausted_subdivisions_report_best_estimate() {
        let ctl = QuadratureControls { max_subdivisions: 2, ..Default::default() };
        let err = integrate_adaptive(|t: f64| (50.0 * t).sin().abs(), 0.0, 10.0, &ctl).unwrap_err();
        match err {
            Error::NonConvergence { estimate, error, evals } => {
                assert!(estimate.is_finite() && error > 0.0 && evals > 0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn reversed_bounds_rejected() {
        assert!(integrate_adaptive(|t| t, 1.0, 0.0, &Default::default()).is_err());
    }

    #[test]
    fn invalid_controls_rejected() {
        let ctl = QuadratureControls { tail_cut_factor: 1.5, ..Default::default() };
        assert!(integrate_adaptive(|t| t, 0.0, 1.0, &ctl).is_err());
    }
}
