use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex;

use super::{IntegralResult, QuadratureConfig};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Values that the adaptive engine can integrate: real scalars and complex numbers.
pub trait QuadValue<T: Scalar>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(self) -> T;
    fn is_finite_value(self) -> bool;
}

impl<T: Scalar> QuadValue<T> for T {
    fn zero() -> Self {
        T::zero()
    }
    fn magnitude(self) -> T {
        self.abs()
    }
    fn is_finite_value(self) -> bool {
        self.is_finite()
    }
}

impl<T: Scalar> QuadValue<T> for Complex<T> {
    fn zero() -> Self {
        Complex::new(T::zero(), T::zero())
    }
    fn magnitude(self) -> T {
        self.norm()
    }
    fn is_finite_value(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

// Kronrod 21-point nodes (positive half, x = 0 last) and weights; Gauss
// 10-point weights for the odd-indexed Kronrod nodes.
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
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_814_970_226,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

struct Panel<T, V> {
    lo: T,
    hi: T,
    value: V,
    error: T,
    /// Part of `error` that is the rounding floor of the rule itself.
    round: T,
}

// Max-heap on the panel error.
impl<T: Scalar, V> PartialEq for Panel<T, V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Scalar, V> Eq for Panel<T, V> {}
impl<T: Scalar, V> PartialOrd for Panel<T, V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Scalar, V> Ord for Panel<T, V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn eval<T: Scalar, V: QuadValue<T>, F: Fn(T) -> V>(f: &F, x: T) -> Result<V> {
    let v = f(x);
    if v.is_finite_value() {
        Ok(v)
    } else {
        Err(Error::NonFiniteIntegrand { abscissa: x.as_f64() })
    }
}

/// One Gauss–Kronrod 10/21 application on `[lo, hi]`, with the QUADPACK
/// error rescaling.
fn gk21<T, V, F>(f: &F, lo: T, hi: T) -> Result<Panel<T, V>>
where
    T: Scalar,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    let half = T::lit(0.5);
    let center = half * (lo + hi);
    let half_len = half * (hi - lo);
    let fc = eval(f, center)?;
    let mut res_k = fc * T::lit(WGK[10]);
    let mut res_g = V::zero();
    let mut res_abs = fc.magnitude() * T::lit(WGK[10]);
    let mut fv1 = [V::zero(); 10];
    let mut fv2 = [V::zero(); 10];
    for j in 0..10 {
        let dx = half_len * T::lit(XGK[j]);
        let f1 = eval(f, center - dx)?;
        let f2 = eval(f, center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        let wk = T::lit(WGK[j]);
        res_k = res_k + (f1 + f2) * wk;
        res_abs += (f1.magnitude() + f2.magnitude()) * wk;
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * T::lit(WG[j / 2]);
        }
    }
    let mean = res_k * half;
    let mut res_asc = (fc - mean).magnitude() * T::lit(WGK[10]);
    for j in 0..10 {
        res_asc += T::lit(WGK[j]) * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let scale = half_len.abs();
    let value = res_k * half_len;
    let res_abs = res_abs * scale;
    let res_asc = res_asc * scale;
    let mut err = ((res_k - res_g) * half_len).magnitude();
    if res_asc != T::zero() && err != T::zero() {
        let ratio = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        err = res_asc * ratio.min(T::one());
    }
    let round = T::lit(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) && round > err {
        err = round;
    }
    Ok(Panel {
        lo,
        hi,
        value,
        error: err,
        round,
    })
}

fn adaptive_core<T, V, F>(f: &F, points: &[T], cfg: &QuadratureConfig<T>) -> Result<IntegralResult<T, V>>
where
    T: Scalar,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    cfg.validate()?;
    if points.len() < 2 {
        return Err(Error::InvalidInput("need at least two integration limits".into()));
    }
    for w in points.windows(2) {
        if !(w[0] < w[1]) || !w[0].is_finite() || !w[1].is_finite() {
            return Err(Error::InvalidInput(format!(
                "integration limits must be finite and strictly increasing, got {} and {}",
                w[0], w[1]
            )));
        }
    }
    let mut heap = BinaryHeap::new();
    let mut frozen_value = V::zero();
    let mut frozen_error = T::zero();
    let mut frozen_excess = T::zero();
    let mut evaluations = 0usize;
    for w in points.windows(2) {
        heap.push(gk21(f, w[0], w[1])?);
        evaluations += 21;
    }
    let mut panels = heap.len();
    loop {
        let (mut total, mut err, mut excess) = (frozen_value, frozen_error, frozen_excess);
        for p in heap.iter() {
            total = total + p.value;
            err += p.error;
            excess += (p.error - p.round).max(T::zero());
        }
        // Stop when the tolerance is met, or when all that is left is the
        // rounding floor, which bisection cannot reduce.
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.magnitude());
        if err <= tol || excess <= tol {
            return Ok(IntegralResult {
                value: total,
                error_estimate: err,
                evaluations,
            });
        }
        let not_converged = Error::NotConverged {
            estimate: total.magnitude().as_f64(),
            error_estimate: err.as_f64(),
            subdivisions: panels,
        };
        if panels >= cfg.max_subdivisions {
            return Err(not_converged);
        }
        let Some(worst) = heap.pop() else {
            return Err(not_converged);
        };
        let mid = T::lit(0.5) * (worst.lo + worst.hi);
        let tiny = T::lit(100.0) * T::epsilon() * (worst.lo.abs().max(worst.hi.abs()).max(T::min_positive_value()));
        if worst.hi - worst.lo <= tiny || !(worst.lo < mid && mid < worst.hi) {
            frozen_value = frozen_value + worst.value;
            frozen_error += worst.error;
            frozen_excess += (worst.error - worst.round).max(T::zero());
            continue;
        }
        heap.push(gk21(f, worst.lo, mid)?);
        heap.push(gk21(f, mid, worst.hi)?);
        evaluations += 42;
        panels += 1;
    }
}

/// Integrates a real function over `[lo, hi]`.
///
/// Panels are bisected in order of decreasing error until the summed error
/// estimate is below `max(abs_tol, rel_tol·|value|)`. The rule is open, so
/// integrable endpoint singularities are tolerated.
pub fn integrate_adaptive<T, F>(f: F, lo: T, hi: T, cfg: &QuadratureConfig<T>) -> Result<IntegralResult<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    adaptive_core(&f, &[lo, hi], cfg)
}

/// Like [`integrate_adaptive`] but with initial breakpoints `points` (sorted).
pub fn integrate_adaptive_points<T, F>(f: F, points: &[T], cfg: &QuadratureConfig<T>) -> Result<IntegralResult<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    adaptive_core(&f, points, cfg)
}

pub fn integrate_adaptive_complex<T, F>(
    f: F,
    lo: T,
    hi: T,
    cfg: &QuadratureConfig<T>,
) -> Result<IntegralResult<T, Complex<T>>>
where
    T: Scalar,
    F: Fn(T) -> Complex<T>,
{
    adaptive_core(&f, &[lo, hi], cfg)
}

pub fn integrate_adaptive_points_complex<T, F>(
    f: F,
    points: &[T],
    cfg: &QuadratureConfig<T>,
) -> Result<IntegralResult<T, Complex<T>>>
where
    T: Scalar,
    F: Fn(T) -> Complex<T>,
{
    adaptive_core(&f, points, cfg)
}

/// Exponential majorant `|f(t)| ≤ amplitude·exp(−rate·t)` valid for `t ≥ lo`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpEnvelope<T> {
    pub amplitude: T,
    pub rate: T,
}

impl<T: Scalar> ExpEnvelope<T> {
    /// Envelope of `g(t)/sinh(t/2)` or `g(t)/cosh(t/2)` with `|g| ≤ bound`, valid for `t ≥ lo > 0`.
    pub fn half_hyperbolic(bound: T, lo: T) -> Self {
        let lo = lo.max(T::lit(1e-3));
        Self {
            amplitude: T::lit(2.0) * bound / (T::one() - (-lo).exp()),
            rate: T::lit(0.5),
        }
    }

    fn at(&self, t: T) -> T {
        self.amplitude * (-self.rate * t).exp()
    }
}

// Panels laid over long semi-infinite ranges so oscillatory integrands start
// from a reasonable partition.
fn partition<T: Scalar>(lo: T, hi: T, width: T) -> Vec<T> {
    let n = ((hi - lo) / width).ceil().to_usize().unwrap_or(1).clamp(1, 512);
    let step = (hi - lo) / T::from_usize(n).unwrap();
    (0..=n)
        .map(|i| {
            if i == n {
                hi
            } else {
                lo + step * T::from_usize(i).unwrap()
            }
        })
        .collect()
}

/// `∫_lo^∞ f` using a known exponential envelope.
///
/// The range is cut at the `T` where the envelope falls below
/// `truncation_threshold`; the reported error includes the analytic tail
/// bound `envelope(T)/rate`.
pub fn integrate_semi_infinite_enveloped<T, V, F>(
    f: F,
    lo: T,
    envelope: ExpEnvelope<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<IntegralResult<T, V>>
where
    T: Scalar,
    V: QuadValue<T>,
    F: Fn(T) -> V,
{
    cfg.validate()?;
    if !(envelope.amplitude > T::zero() && envelope.rate > T::zero()) {
        return Err(Error::InvalidInput("envelope needs positive amplitude and rate".into()));
    }
    let target = cfg.truncation_threshold.min(cfg.abs_tol * envelope.rate * T::lit(0.1));
    let cut = (envelope.amplitude / target).ln() / envelope.rate;
    let cut = cut.max(lo + T::one());
    let points = partition(lo, cut, T::lit(4.0));
    let r = adaptive_core(&f, &points, cfg)?;
    let tail = envelope.at(cut) / envelope.rate;
    Ok(IntegralResult {
        value: r.value,
        error_estimate: r.error_estimate + tail,
        evaluations: r.evaluations,
    })
}

/// `∫_lo^∞ f` for an integrand that decays at least exponentially.
///
/// Unit panels are integrated in turn while the sampled magnitude per panel
/// is tracked; once the panel maxima are below `truncation_threshold` and
/// shrink geometrically, the remainder is bounded by the geometric tail.
pub fn integrate_semi_infinite<T, F>(f: F, lo: T, cfg: &QuadratureConfig<T>) -> Result<IntegralResult<T>>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    const MAX_PANELS: usize = 4096;
    cfg.validate()?;
    if !lo.is_finite() {
        return Err(Error::InvalidInput("lower limit must be finite".into()));
    }
    let width = T::one();
    let probes = 16;
    let mut total = T::zero();
    let mut err = T::zero();
    let mut evaluations = 0;
    let mut prev_max: Option<T> = None;
    let mut quiet = 0;
    for j in 0..MAX_PANELS {
        let a = lo + width * T::from_usize(j).unwrap();
        let b = a + width;
        let panel_cfg = QuadratureConfig {
            abs_tol: cfg.abs_tol * T::lit(0.01),
            ..*cfg
        };
        let r = adaptive_core(&f, &[a, b], &panel_cfg)?;
        total += r.value;
        err += r.error_estimate;
        evaluations += r.evaluations;
        let mut m = T::zero();
        for i in 0..probes {
            let x = a + width * (T::from_usize(i).unwrap() + T::lit(0.5)) / T::from_usize(probes).unwrap();
            m = m.max(eval(&f, x)?.abs());
        }
        evaluations += probes;
        let decaying = prev_max.is_some_and(|p| m <= p * T::lit(0.9) || m == T::zero());
        if m < cfg.truncation_threshold && decaying {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 3 {
            let ratio = match prev_max {
                Some(p) if p > T::zero() => (m / p).min(T::lit(0.9)),
                _ => T::lit(0.5),
            };
            let tail = m * width * ratio / (T::one() - ratio);
            return Ok(IntegralResult {
                value: total,
                error_estimate: err + tail,
                evaluations,
            });
        }
        prev_max = Some(m);
    }
    Err(Error::NoDecay {
        cap: (lo + width * T::from_usize(MAX_PANELS).unwrap()).as_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> QuadratureConfig<f64> {
        QuadratureConfig::default()
    }

    #[test]
    fn kronrod_rule_is_exact_for_degree_31() {
        let r = gk21(&|x: f64| x.powi(31) + x.powi(30), -1.0, 1.0).unwrap();
        assert!((r.value - 2.0 / 31.0).abs() < 1e-14);
        // the embedded Gauss rule is exact to degree 19, so the error estimate collapses
        let r = gk21(&|x: f64| x.powi(18), -1.0, 1.0).unwrap();
        assert!(r.error < 1e-14);
    }

    #[test]
    fn constant_and_sine() {
        let r = integrate_adaptive(|_| 1.0, 0.0, 1.0, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-14);
        let r = integrate_adaptive(f64::sin, 0.0, PI, &cfg()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!(r.error_estimate >= 0.0 && r.evaluations >= 1);
    }

    #[test]
    fn endpoint_singularity_is_tolerated() {
        let r = integrate_adaptive(|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, &cfg()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn nan_reports_abscissa() {
        let e = integrate_adaptive(|x: f64| if x > 0.5 { f64::NAN } else { x }, 0.0, 1.0, &cfg()).unwrap_err();
        match e {
            Error::NonFiniteIntegrand { abscissa } => assert!(abscissa > 0.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_convergence_keeps_best_estimate() {
        let c = QuadratureConfig {
            max_subdivisions: 3,
            ..cfg()
        };
        let e = integrate_adaptive(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &c).unwrap_err();
        assert!(matches!(e, Error::NotConverged { subdivisions: 3, .. }));
    }

    #[test]
    fn invalid_limits_rejected() {
        assert!(integrate_adaptive(|x: f64| x, 1.0, 0.0, &cfg()).is_err());
        assert!(integrate_adaptive(|x: f64| x, 0.0, f64::INFINITY, &cfg()).is_err());
        let bad = QuadratureConfig { abs_tol: 0.0, ..cfg() };
        assert!(integrate_adaptive(|x: f64| x, 0.0, 1.0, &bad).is_err());
    }

    #[test]
    fn complex_integrand() {
        let r = integrate_adaptive_complex(|x: f64| Complex::new(0.0, x).exp(), 0.0, 2.0 * PI, &cfg()).unwrap();
        assert!(r.value.norm() < 1e-12);
    }

    #[test]
    fn semi_infinite_detected_exponential() {
        let r = integrate_semi_infinite(|t: f64| (-t).exp(), 0.0, &cfg()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn semi_infinite_sine_over_sinh() {
        // ∫₀^∞ sin(t)/sinh(t/2) dt = π·tanh(π)
        let exact = PI * PI.tanh();
        let f = |t: f64| t.sin() / (0.5 * t).sinh();
        let r = integrate_semi_infinite(f, 0.0, &cfg()).unwrap();
        assert!((r.value - exact).abs() < 1e-10, "{}", r.value - exact);
        let env = ExpEnvelope::half_hyperbolic(1.0, 1.0);
        let head = integrate_adaptive(f, 0.0, 1.0, &cfg()).unwrap().value;
        let r = integrate_semi_infinite_enveloped(f, 1.0, env, &cfg()).unwrap();
        assert!((head + r.value - exact).abs() < 1e-10);
    }

    #[test]
    fn semi_infinite_without_decay_fails() {
        let e = integrate_semi_infinite(|t: f64| 1.0 / (1.0 + t), 0.0, &cfg()).unwrap_err();
        assert!(matches!(e, Error::NoDecay { .. }));
    }

    #[test]
    fn truncated_sine_over_sinh_matches_closed_form_minus_tail() {
        // ω = 1, k = 0 on [1e-8, 40]; the discarded pieces are bounded by
        // ∫₀^{1e-8} 2 dt and ∫_40^∞ 2e^{-t/2}/(1-e^{-40}) dt.
        let f = |t: f64| t.sin() / (0.5 * t).sinh();
        let r = integrate_adaptive(f, 1e-8, 40.0, &cfg()).unwrap();
        let exact = PI * PI.tanh();
        let tail_bound = 2e-8 + 4.0 * (-20.0f64).exp();
        assert!((r.value - exact).abs() <= tail_bound + 1e-10);
        assert!(r.value < exact);
    }
}
