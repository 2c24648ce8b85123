//! Spectral kernel functions `u`, `d`, `a`, `b` and the residue `R` of the
//! contour integrand `f(z) = exp(iωz − 2ik·coth(z/2)) / cosh(z/2)` at `z = 0`.
//!
//! `d` and `b` come from the residue, computed by a trapezoid rule on a
//! circle around the origin. `a` comes from a real integral whose two
//! singular parts cancel at `t = 0`. The direct oscillatory integrals are
//! available as a slow cross-check in [`eval_kernels_direct`].

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_adaptive, integrate_adaptive_complex, integrate_adaptive_points, integrate_closed_circle_adaptive,
    integrate_semi_infinite_enveloped, ContourSpec, ExpEnvelope, QuadratureConfig,
};
use crate::scalar::{sech, Scalar};

/// Radii tried by [`select_radius`]. All lie inside `|z| < π`.
const RADIUS_CANDIDATES: [f64; 10] = [0.2, 0.3, 0.4, 0.5, 0.7, 1.0, 1.5, 2.0, 2.5, 2.9];

/// Below this ω, `a` is computed along a path lifted off the real axis.
const DEFORMED_PATH_BELOW: f64 = -4.0;

/// Numerical settings for kernel evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig<T> {
    /// Used for the real integrals behind `a`. The absolute tolerance is tiny
    /// because `a` itself becomes exponentially small for large ω.
    pub quad: QuadratureConfig<T>,
    /// Relative agreement required between successive node doublings.
    pub contour_tol: T,
    pub initial_nodes: usize,
    pub max_nodes: usize,
    /// Fixed contour radius; `None` picks one per (ω, k) with [`select_radius`].
    pub radius: Option<T>,
}

impl<T: Scalar> Default for KernelConfig<T> {
    fn default() -> Self {
        let abs_tol = T::lit(1e-150).max(T::min_positive_value().sqrt());
        Self {
            quad: QuadratureConfig {
                abs_tol,
                rel_tol: T::lit(1e-12).max(T::lit(64.0) * T::epsilon()),
                max_subdivisions: 20_000,
                truncation_threshold: T::lit(1e-16),
            },
            contour_tol: T::lit(1e-12).max(T::lit(64.0) * T::epsilon()),
            initial_nodes: 256,
            max_nodes: crate::quadrature::MAX_CONTOUR_NODES,
            radius: None,
        }
    }
}

/// Residue `R(ω, k)` together with the contour that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidueResult<T> {
    pub r: Complex<T>,
    pub radius_used: T,
    pub nodes_used: usize,
    pub error_estimate: T,
}

/// Values of the kernels at one `(ω, k)`.
///
/// `half_plus_d` and `half_minus_d` are `1/2 ± d` computed without
/// cancellation; the spectra use them instead of `d` directly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralKernels<T> {
    pub omega: T,
    pub k: T,
    pub d: T,
    pub a: T,
    pub b: T,
    pub half_plus_d: T,
    pub half_minus_d: T,
    /// Sum of the error estimates of the ingredients.
    pub error: T,
}

impl<T: Scalar> SpectralKernels<T> {
    /// `|b − e^{−πω}(1/2 + d)|`.
    pub fn identity_residual(&self) -> T {
        (self.b - (-T::PI() * self.omega).exp() * self.half_plus_d).abs()
    }
}

fn check_args<T: Scalar>(omega: T, k: T) -> Result<()> {
    if !omega.is_finite() {
        return Err(Error::InvalidInput(format!("omega must be finite, got {omega}")));
    }
    if !(k >= T::zero()) || !k.is_finite() {
        return Err(Error::InvalidInput(format!(
            "k must be finite and nonnegative, got {k}"
        )));
    }
    Ok(())
}

/// `u(ω) = (8ω/π) Σ_{n≥0} 1/(4ω² + (4n+1)²)`.
///
/// The terms past `N` are replaced by a midpoint Euler–Maclaurin estimate
/// whose remainder sits far below `1e-14`.
pub fn eval_u<T: Scalar>(omega: T) -> T {
    if omega == T::zero() {
        return T::zero();
    }
    let w = omega.abs();
    let four = T::lit(4.0);
    let w2 = four * w * w;
    let n_terms = 2000 + (4.0 * w.as_f64()).min(1e6) as usize;
    // Summing the smallest terms first.
    let mut sum = T::zero();
    for n in (0..n_terms).rev() {
        let y = four * T::from_usize(n).unwrap() + T::one();
        sum += T::one() / (w2 + y * y);
    }
    let y = four * T::from_usize(n_terms).unwrap() - T::one();
    let d = w2 + y * y;
    let integral = (T::FRAC_PI_2() - (y / (T::lit(2.0) * w)).atan()) / (T::lit(8.0) * w);
    let d1 = -T::lit(8.0) * y / (d * d);
    let d3 = T::lit(1536.0) * y / (d * d * d) - T::lit(3072.0) * y * y * y / (d * d * d * d);
    let tail = integral + d1 / T::lit(24.0) - T::lit(7.0) * d3 / T::lit(5760.0);
    let value = T::lit(8.0) * w / T::PI() * (sum + tail);
    value.copysign(omega)
}

/// `log(f(z)·z)`, finite wherever `0 < |z| < π`.
fn log_integrand<T: Scalar>(omega: T, k: T, z: Complex<T>) -> Complex<T> {
    let i = Complex::new(T::zero(), T::one());
    let half = z * T::lit(0.5);
    let coth = half.cosh() / half.sinh();
    i * z * omega - i * coth * (T::lit(2.0) * k) - half.cosh().ln() + z.ln()
}

/// Radius from a fixed candidate list minimizing `max |f(z)·z|` on the circle,
/// so that the rounding floor of the trapezoid sum is as low as possible.
pub fn select_radius<T: Scalar>(omega: T, k: T) -> T {
    let samples = 128;
    let mut best = (T::infinity(), T::one());
    for &rho in RADIUS_CANDIDATES.iter() {
        let rho = T::lit(rho);
        let mut m = T::neg_infinity();
        for j in 0..samples {
            let theta = T::TAU() * T::from_usize(j).unwrap() / T::from_usize(samples).unwrap();
            let lf = log_integrand(omega, k, Complex::from_polar(rho, theta)).re;
            m = m.max(lf);
        }
        if m < best.0 {
            best = (m, rho);
        }
    }
    best.1
}

/// `R(ω, k) = (1/2πi) ∮ f(z) dz` on the circle in `contour`, doubling the
/// node count until successive values agree to `1e-12` relative.
///
/// `R(ω, 0) = 0` exactly since `f` is then analytic at the origin.
pub fn residue_r<T: Scalar>(omega: T, k: T, contour: &ContourSpec<T>) -> Result<ResidueResult<T>> {
    let cfg = KernelConfig::default();
    residue_with(omega, k, contour, cfg.contour_tol, cfg.max_nodes)
}

fn residue_with<T: Scalar>(
    omega: T,
    k: T,
    contour: &ContourSpec<T>,
    tol: T,
    max_nodes: usize,
) -> Result<ResidueResult<T>> {
    check_args(omega, k)?;
    contour.validate()?;
    if k == T::zero() {
        return Ok(ResidueResult {
            r: Complex::new(T::zero(), T::zero()),
            radius_used: contour.radius,
            nodes_used: 0,
            error_estimate: T::zero(),
        });
    }
    let g = |z: Complex<T>| (log_integrand(omega, k, z)).exp() / z;
    let res = integrate_closed_circle_adaptive(g, contour, tol, max_nodes)?;
    let two_pi_i = Complex::new(T::zero(), T::TAU());
    Ok(ResidueResult {
        r: res.value / two_pi_i,
        radius_used: contour.radius,
        nodes_used: res.evaluations,
        error_estimate: res.error_estimate / T::TAU(),
    })
}

/// Residue using the settings in `cfg`, choosing the radius automatically
/// unless `cfg.radius` is set.
pub fn residue_auto<T: Scalar>(omega: T, k: T, cfg: &KernelConfig<T>) -> Result<ResidueResult<T>> {
    check_args(omega, k)?;
    let radius = cfg.radius.unwrap_or_else(|| select_radius(omega, k));
    let spec = ContourSpec::new(radius, cfg.initial_nodes)?;
    residue_with(omega, k, &spec, cfg.contour_tol, cfg.max_nodes)
}

/// `(1/2 + d, 1/2 − d, error)` from the residue.
///
/// `d = tanh(πω)/2 + sech(πω)·Im R/4`; the two halves are regrouped as
/// `sech(πω)/2 · (e^{±πω} ± Im R/2)` so that neither cancels.
fn halves<T: Scalar>(omega: T, res: &ResidueResult<T>) -> (T, T, T) {
    let pw = T::PI() * omega;
    let s2 = sech(pw) * T::lit(0.5);
    let im = res.r.im;
    let plus = s2 * (pw.exp() + im * T::lit(0.5));
    let minus = s2 * ((-pw).exp() - im * T::lit(0.5));
    (plus, minus, s2 * T::lit(0.5) * res.error_estimate)
}

/// `d(ω, k)`. At `k = 0` this is exactly `tanh(πω)/2`.
pub fn eval_d<T: Scalar>(omega: T, k: T) -> Result<T> {
    eval_d_with(omega, k, &KernelConfig::default())
}

pub fn eval_d_with<T: Scalar>(omega: T, k: T, cfg: &KernelConfig<T>) -> Result<T> {
    check_args(omega, k)?;
    let t = (T::PI() * omega).tanh() * T::lit(0.5);
    if k == T::zero() {
        return Ok(t);
    }
    let res = residue_auto(omega, k, cfg)?;
    Ok(t + sech(T::PI() * omega) * res.r.im * T::lit(0.25))
}

/// `b(ω, k) = (sech(πω)/2)·(1 + e^{−πω}·Im R/2)`.
pub fn eval_b<T: Scalar>(omega: T, k: T) -> Result<T> {
    eval_b_with(omega, k, &KernelConfig::default())
}

pub fn eval_b_with<T: Scalar>(omega: T, k: T, cfg: &KernelConfig<T>) -> Result<T> {
    check_args(omega, k)?;
    let res = residue_auto(omega, k, cfg)?;
    Ok(b_from_residue(omega, &res))
}

fn b_from_residue<T: Scalar>(omega: T, res: &ResidueResult<T>) -> T {
    let pw = T::PI() * omega;
    sech(pw) * T::lit(0.5) * (T::one() + (-pw).exp() * res.r.im * T::lit(0.5))
}

/// Taylor expansion at `t = 0` of
/// `e^{ωt − 2k·tan(t/2)}/sin(t/2) − cos(ωt − 2k·tanh(t/2))/sinh(t/2)`.
fn difference_series<T: Scalar>(omega: T, k: T, t: T) -> T {
    let c = omega - k;
    let l = T::lit;
    let c2 = c * c;
    let c3 = c2 * c;
    let c4 = c3 * c;
    let c5 = c4 * c;
    let c6 = c5 * c;
    let coeffs = [
        l(2.0) * c,
        l(2.0) * c2 + l(1.0 / 6.0),
        c3 / l(3.0) + c / l(12.0) - k / l(6.0),
        T::zero(),
        c5 / l(60.0) + c3 / l(72.0) - c2 * k / l(12.0) + l(7.0) * c / l(2880.0) - l(17.0) * k / l(720.0),
        c6 / l(180.0) + c4 / l(144.0) - c3 * k / l(18.0) + l(7.0) * c2 / l(2880.0) - l(17.0) * c * k / l(360.0)
            + k * k / l(72.0)
            + l(31.0) / l(241_920.0),
    ];
    coeffs.iter().rev().fold(T::zero(), |acc, &a| acc * t + a)
}

/// `sinh(u) − sin(u)` without cancellation for small `u`.
fn sinh_minus_sin<T: Scalar>(u: T) -> T {
    if u.abs() > T::lit(0.5) {
        return u.sinh() - u.sin();
    }
    // 2 Σ u^{4j+3}/(4j+3)!
    let u2 = u * u;
    let u4 = u2 * u2;
    let mut term = u * u2 / T::lit(6.0);
    let mut sum = T::zero();
    let mut n = 3.0;
    for _ in 0..6 {
        sum += term;
        term = term * u4 / T::lit((n + 1.0) * (n + 2.0) * (n + 3.0) * (n + 4.0));
        n += 4.0;
    }
    T::lit(2.0) * sum
}

/// `a(ω, k)`.
///
/// For `ω ≥ −4`:
/// `a = e^{−πω}/(2π) [∫₀^π (e^{ωt−2k·tan(t/2)}/sin(t/2) − cos(ωt−2k·tanh(t/2))/sinh(t/2)) dt
///  − ∫_π^∞ cos(ωt−2k·tanh(t/2))/sinh(t/2) dt]`,
/// with the bracketed difference replaced by its Taylor series near `t = 0`.
/// That form loses about `e^{π|ω|}` in relative accuracy for negative ω,
/// so below `ω = −4` the defining integral of `b + ia` is instead taken
/// along `0 → ic → ic + ∞`, `c = min(1, 4/|ω|)`.
pub fn eval_a<T: Scalar>(omega: T, k: T) -> Result<T> {
    eval_a_with(omega, k, &KernelConfig::default()).map(|(a, _)| a)
}

/// `a(ω, k)` and its error estimate.
pub fn eval_a_with<T: Scalar>(omega: T, k: T, cfg: &KernelConfig<T>) -> Result<(T, T)> {
    check_args(omega, k)?;
    if omega < T::lit(DEFORMED_PATH_BELOW) {
        let (a, _, err) = deformed_path(omega, k, &cfg.quad)?;
        return Ok((a, err));
    }
    regularized_a(omega, k, &cfg.quad)
}

fn regularized_a<T: Scalar>(omega: T, k: T, qcfg: &QuadratureConfig<T>) -> Result<(T, T)> {
    let pi = T::PI();
    let half = T::lit(0.5);
    let two_k = T::lit(2.0) * k;
    let scale = (-pi * omega).exp();
    let t_series = T::lit(1e-3) / (omega - k).abs().max(k).max(T::one());
    let g = |t: T| -> T {
        if t < t_series {
            return scale * difference_series(omega, k, t);
        }
        // e^x/sin(u) − cos(y)/sinh(u)
        //   = (expm1(x) + 2 sin²(y/2))/sinh(u) + e^x (sinh(u) − sin(u))/(sin(u) sinh(u)),
        // which avoids subtracting two values of size 2/t.
        let u = t * half;
        let x = omega * t - two_k * u.tan();
        let y = omega * t - two_k * u.tanh();
        let (sn, sh) = (u.sin(), u.sinh());
        let s = (y * half).sin();
        let ex = (x - pi * omega).exp();
        (scale * (x.exp_m1() + T::lit(2.0) * s * s)) / sh + ex * sinh_minus_sin(u) / (sn * sh)
    };
    let mut points = vec![T::zero(), t_series, T::FRAC_PI_2(), T::lit(2.5), T::lit(3.0), pi];
    if k > T::zero() && omega > k {
        // peak of the first term, where ω = k·sec²(t/2)
        points.push(T::lit(2.0) * ((omega / k - T::one()).sqrt()).atan());
    }
    points.sort_by(|a, b| a.partial_cmp(b).unwrap());
    points.dedup_by(|a, b| (*a - *b).abs() < T::lit(1e-12));
    let head = integrate_adaptive_points(g, &points, qcfg)?;

    let tail_cfg = QuadratureConfig {
        abs_tol: qcfg.abs_tol.max(T::lit(0.1) * qcfg.rel_tol * head.value.abs()),
        ..*qcfg
    };
    let h = |t: T| scale * (omega * t - two_k * (t * half).tanh()).cos() / (t * half).sinh();
    let env = ExpEnvelope::half_hyperbolic(scale, pi);
    let tail = integrate_semi_infinite_enveloped(h, pi, env, &tail_cfg)?;

    let a = (head.value - tail.value) / T::TAU();
    Ok((a, (head.error_estimate + tail.error_estimate) / T::TAU()))
}

/// `(a, b, error)` from `2π(b + ia) = i·V + H` with
/// `V = ∫₀^c e^{−ωy − 2k·cot(y/2)}/cos(y/2) dy` and `H = ∫₀^∞ f(x + ic) dx`.
fn deformed_path<T: Scalar>(omega: T, k: T, qcfg: &QuadratureConfig<T>) -> Result<(T, T, T)> {
    let half = T::lit(0.5);
    let two_k = T::lit(2.0) * k;
    let c = T::one().min(T::lit(4.0) / omega.abs());
    let vert = |y: T| -> T {
        let damp = if k == T::zero() {
            T::zero()
        } else {
            -two_k / (y * half).tan()
        };
        (-omega * y + damp).exp() / (y * half).cos()
    };
    let v = integrate_adaptive(vert, T::zero(), c, qcfg)?;

    let i = Complex::new(T::zero(), T::one());
    let horiz = |x: T| -> Complex<T> {
        let z = Complex::new(x, c);
        let zh = z * half;
        let coth = zh.cosh() / zh.sinh();
        (i * z * omega - i * coth * two_k).exp() / zh.cosh()
    };
    let lift = (-omega * c).exp().max(T::one());
    let near = integrate_adaptive_complex(horiz, T::zero(), T::one(), qcfg)?;
    let env = ExpEnvelope::half_hyperbolic(lift, T::one());
    let far_cfg = QuadratureConfig {
        abs_tol: qcfg
            .abs_tol
            .max(T::lit(0.1) * qcfg.rel_tol * (v.value + near.value.im).abs()),
        ..*qcfg
    };
    let far = integrate_semi_infinite_enveloped(horiz, T::one(), env, &far_cfg)?;
    let h = near.value + far.value;
    let err = (v.error_estimate + near.error_estimate + far.error_estimate) / T::TAU();
    Ok(((v.value + h.im) / T::TAU(), h.re / T::TAU(), err))
}

/// All kernels at `(ω, k)` with default settings.
pub fn eval_kernels<T: Scalar>(omega: T, k: T) -> Result<SpectralKernels<T>> {
    eval_kernels_with(omega, k, &KernelConfig::default())
}

pub fn eval_kernels_with<T: Scalar>(omega: T, k: T, cfg: &KernelConfig<T>) -> Result<SpectralKernels<T>> {
    check_args(omega, k)?;
    let res = if k == T::zero() {
        ResidueResult {
            r: Complex::new(T::zero(), T::zero()),
            radius_used: T::one(),
            nodes_used: 0,
            error_estimate: T::zero(),
        }
    } else {
        residue_auto(omega, k, cfg)?
    };
    let (plus, minus, d_err) = halves(omega, &res);
    let d = if k == T::zero() {
        (T::PI() * omega).tanh() * T::lit(0.5)
    } else {
        (T::PI() * omega).tanh() * T::lit(0.5) + sech(T::PI() * omega) * res.r.im * T::lit(0.25)
    };
    let (a, a_err) = eval_a_with(omega, k, cfg)?;
    let b = b_from_residue(omega, &res);
    Ok(SpectralKernels {
        omega,
        k,
        d,
        a,
        b,
        half_plus_d: plus,
        half_minus_d: minus,
        error: d_err + a_err,
    })
}

/// Domain on which [`eval_kernels_direct`] is trusted.
pub const DIRECT_OMEGA_MAX: f64 = 3.0;
pub const DIRECT_K_MAX: f64 = 5.0;

/// Kernels from the defining oscillatory integrals
/// `d = (1/2π)∫₀^∞ sin(ωt − 2k·tanh(t/2))/sinh(t/2) dt` and
/// `b + ia = (1/2π)∫₀^∞ e^{i(ωt − 2k·coth(t/2))}/cosh(t/2) dt`.
///
/// On `t < 1` the substitution `s = coth(t/2)` turns the accumulating
/// oscillation into a decaying Fourier tail in `s`, summed in half-period
/// chunks with repeated averaging of the partial sums. Slow; meant as an
/// oracle for `|ω| ≤ 3`, `k ≤ 5` and rejected outside it.
pub fn eval_kernels_direct<T: Scalar>(omega: T, k: T) -> Result<SpectralKernels<T>> {
    check_args(omega, k)?;
    if omega.abs() > T::lit(DIRECT_OMEGA_MAX) || k > T::lit(DIRECT_K_MAX) {
        return Err(Error::InvalidInput(format!(
            "direct oracle covers |omega| <= {DIRECT_OMEGA_MAX}, k <= {DIRECT_K_MAX}; got ({omega}, {k})"
        )));
    }
    let qcfg = QuadratureConfig::with_tolerances(T::lit(1e-13).max(T::lit(64.0) * T::epsilon()), T::lit(1e-12));
    let half = T::lit(0.5);
    let two_k = T::lit(2.0) * k;

    let fd = |t: T| (omega * t - two_k * (t * half).tanh()).sin() / (t * half).sinh();
    let d_head = integrate_adaptive(fd, T::zero(), T::one(), &qcfg)?;
    let d_tail =
        integrate_semi_infinite_enveloped(fd, T::one(), ExpEnvelope::half_hyperbolic(T::one(), T::one()), &qcfg)?;
    let d = (d_head.value + d_tail.value) / T::TAU();
    let mut err = (d_head.error_estimate + d_tail.error_estimate) / T::TAU();

    let i = Complex::new(T::zero(), T::one());
    let ft = |t: T| (i * (omega * t - two_k / (t * half).tanh())).exp() / (t * half).cosh();
    let (head, head_err) = if k == T::zero() {
        let r = integrate_adaptive_complex(ft, T::zero(), T::one(), &qcfg)?;
        (r.value, r.error_estimate)
    } else {
        s_domain_head(omega, k, &qcfg)?
    };
    let tail =
        integrate_semi_infinite_enveloped(ft, T::one(), ExpEnvelope::half_hyperbolic(T::one(), T::one()), &qcfg)?;
    let ba = (head + tail.value) / T::TAU();
    err += (head_err + tail.error_estimate) / T::TAU();

    Ok(SpectralKernels {
        omega,
        k,
        d,
        a: ba.im,
        b: ba.re,
        half_plus_d: half + d,
        half_minus_d: half - d,
        error: err,
    })
}

/// `∫₀^1 e^{i(ωt − 2k·coth(t/2))}/cosh(t/2) dt` via `s = coth(t/2)`.
fn s_domain_head<T: Scalar>(omega: T, k: T, qcfg: &QuadratureConfig<T>) -> Result<(Complex<T>, T)> {
    const CHUNKS: usize = 60;
    const ROUNDS: usize = 20;
    let i = Complex::new(T::zero(), T::one());
    let two = T::lit(2.0);
    let g = |s: T| -> Complex<T> {
        let t = ((s + T::one()) / (s - T::one())).ln();
        (i * (omega * t - two * k * s)).exp() * (two / (s * (s * s - T::one()).sqrt()))
    };
    let s0 = T::one() / T::lit(0.5).tanh();
    let width = T::PI() / (two * k);
    let mut partial = Vec::with_capacity(CHUNKS);
    let mut acc = Complex::new(T::zero(), T::zero());
    let mut err = T::zero();
    for j in 0..CHUNKS {
        let lo = s0 + width * T::from_usize(j).unwrap();
        let r = integrate_adaptive_complex(g, lo, lo + width, qcfg)?;
        acc += r.value;
        err += r.error_estimate;
        partial.push(acc);
    }
    let mut prev_last = partial[partial.len() - 1];
    for _ in 0..ROUNDS {
        prev_last = partial[partial.len() - 1];
        partial = partial.windows(2).map(|w| (w[0] + w[1]) * T::lit(0.5)).collect();
    }
    let value = partial[partial.len() - 1];
    Ok((value, err + (value - prev_last).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    // Reference values computed independently at 30 digits.
    const U_REF: [(f64, f64); 5] = [
        (0.6, 0.736_733_189_664_168_84),
        (1.0, 0.683_738_675_973_903_92),
        (-0.35, -0.664_085_388_067_678_21),
        (0.25, 0.556_650_361_778_129_65),
        (2.0, 0.586_360_874_061_403_67),
    ];

    #[test]
    fn u_matches_reference() {
        assert_eq!(eval_u(0.0), 0.0);
        for (w, v) in U_REF {
            assert_abs_diff_eq!(eval_u(w), v, epsilon = 1e-13);
        }
    }

    #[test]
    fn u_maximum() {
        let (mut lo, mut hi) = (0.3f64, 0.9f64);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let a = hi - g * (hi - lo);
            let b = lo + g * (hi - lo);
            if eval_u(a) > eval_u(b) {
                hi = b
            } else {
                lo = a
            }
        }
        let w = 0.5 * (lo + hi);
        assert_abs_diff_eq!(w, 0.588_796_555_641_082_6, epsilon = 1e-6);
        assert_abs_diff_eq!(eval_u(w), 1.236_823_651_710_054 - 0.5, epsilon = 1e-12);
    }

    #[test]
    fn residue_vanishes_without_k() {
        let r = residue_r(1.3, 0.0, &ContourSpec::default()).unwrap();
        assert_eq!(r.r, Complex::new(0.0, 0.0));
    }

    #[test]
    fn residue_reference_and_radius_independence() {
        let a = residue_r(1.0f64, 1.0, &ContourSpec::new(0.5, 256).unwrap()).unwrap();
        let b = residue_r(1.0, 1.0, &ContourSpec::new(2.0, 256).unwrap()).unwrap();
        assert!((a.r - b.r).norm() < 1e-10);
        assert_abs_diff_eq!(a.r.im, -14.876_609_455_7, epsilon = 1e-9);
        assert!(a.r.re.abs() < 1e-10);
        let c = residue_r(0.0f64, 1.0, &ContourSpec::new(1.0, 256).unwrap()).unwrap();
        assert_abs_diff_eq!(c.r.im, -2.851_540_586_39, epsilon = 1e-9);
        let d = residue_r(0.0, 1.0, &ContourSpec::new(1.0, 2 * c.nodes_used).unwrap()).unwrap();
        assert!((c.r - d.r).norm() < 1e-12);
    }

    #[cfg(feature = "f128")]
    #[test]
    fn residue_radius_independence_quad_precision() {
        use f128::f128;
        use num_traits::Float;
        let reference = f128::parse("-30857.05789295872946126164741116008607").unwrap();
        let [a, b, c] = [0.5, 1.0, 2.0].map(|rho| {
            residue_r(
                f128::from(3.0),
                f128::from(5.0),
                &ContourSpec::new(f128::from(rho), 256).unwrap(),
            )
            .unwrap()
            .r
        });
        for r in [a, b, c] {
            assert!((r.im - reference).abs() < f128::from(1e-15));
            assert!(r.re.abs() < f128::from(1e-12));
        }
        assert!((a - c).norm() < f128::from(1e-10));
    }

    #[test]
    fn d_reference() {
        assert_eq!(eval_d(0.0, 0.0).unwrap(), 0.0);
        for w in [-2.0, -1.0, 0.5, 3.0] {
            assert_eq!(eval_d(w, 0.0).unwrap(), (PI * w).tanh() / 2.0);
        }
        assert_abs_diff_eq!(eval_d(1.0, 1.0).unwrap(), 0.177_296_894_307, epsilon = 1e-10);
        assert_abs_diff_eq!(eval_d(0.5, 2.0).unwrap(), -0.801_073_744_143, epsilon = 1e-10);
        assert_abs_diff_eq!(eval_d(0.0, 1.0).unwrap(), -0.712_885_146_599, epsilon = 1e-10);
        assert_abs_diff_eq!(eval_d(-0.5, 1.0).unwrap(), -0.530_969_883_109, epsilon = 1e-10);
    }

    #[test]
    fn a_reference() {
        assert_abs_diff_eq!(eval_a(0.0, 0.0).unwrap(), 0.0, epsilon = 1e-13);
        for w in [-1.0, 0.7, 2.0] {
            let want = -(PI * w).tanh() / 2.0 + eval_u(w);
            assert_abs_diff_eq!(eval_a(w, 0.0).unwrap(), want, epsilon = 1e-11);
        }
        let cases = [
            (1.0, 1.0, -0.001_699_702_599_472_4),
            (0.5, 2.0, -0.020_219_825_171_913),
            (0.0, 1.0, -0.141_096_425_043),
            (-0.5, 1.0, 0.237_443_643_957_05),
            (2.0, 5.0, 0.000_429_829_322_986_66),
            (-3.0, 5.0, -0.104_370_627_102_58),
            (3.0, 0.5, 0.001_825_211_773_064_5),
        ];
        for (w, k, v) in cases {
            assert_abs_diff_eq!(eval_a(w, k).unwrap(), v, epsilon = 1e-10);
        }
    }

    #[test]
    fn deformed_path_agrees_with_regularized_form() {
        let cfg = KernelConfig::<f64>::default();
        for (w, k) in [(-3.0, 0.0), (-3.0, 1.0), (-4.5, 2.0), (-1.0, 5.0)] {
            let (a1, _) = regularized_a(w, k, &cfg.quad).unwrap();
            let (a2, b2, _) = deformed_path(w, k, &cfg.quad).unwrap();
            assert_abs_diff_eq!(a1, a2, epsilon = 1e-9);
            let b = eval_b(w, k).unwrap();
            assert_abs_diff_eq!(b, b2, epsilon = 1e-9 * b.abs().max(1.0));
        }
        // k = 0 closed form far out on the negative side
        for w in [-6.0, -10.0, -25.0] {
            let want = -(PI * w).tanh() / 2.0 + eval_u(w);
            assert_abs_diff_eq!(eval_a(w, 0.0).unwrap(), want, epsilon = 1e-11);
        }
    }

    #[test]
    fn b_reference() {
        assert_eq!(eval_b(0.0, 0.0).unwrap(), 0.5);
        for w in [0.0, 1.0, 2.0] {
            assert_abs_diff_eq!(eval_b(w, 0.0).unwrap(), sech(PI * w) / 2.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(eval_b(1.0, 1.0).unwrap(), 0.029_268_652_630_891, epsilon = 1e-11);
        assert_abs_diff_eq!(eval_b(0.5, 2.0).unwrap(), -0.062_587_082_382_819, epsilon = 1e-11);
        assert_abs_diff_eq!(eval_b(-3.0, 5.0).unwrap(), 0.069_376_288_241_826, epsilon = 1e-10);
        assert_abs_diff_eq!(eval_b(3.0, 0.5).unwrap(), 8.064_413_196_870_1e-5, epsilon = 1e-13);
    }

    #[test]
    fn kernels_bundle() {
        let z = eval_kernels(0.0, 0.0).unwrap();
        assert_eq!((z.d, z.b), (0.0, 0.5));
        assert_abs_diff_eq!(z.a, 0.0, epsilon = 1e-13);
        let o = eval_kernels(1.0, 0.0).unwrap();
        assert_abs_diff_eq!(o.d, PI.tanh() / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(o.d, 0.498_136, epsilon = 1e-6);
        assert_abs_diff_eq!(o.b, sech(PI) / 2.0, epsilon = 1e-15);
        assert!(o.identity_residual() < 1e-14);
        let k = eval_kernels(1.0, 1.0).unwrap();
        assert_abs_diff_eq!(k.half_plus_d, 0.5 + k.d, epsilon = 1e-14);
        assert_abs_diff_eq!(k.half_minus_d, 0.5 - k.d, epsilon = 1e-14);
    }

    #[test]
    fn direct_oracle_agrees() {
        for (w, k) in [(1.0, 0.0), (0.0, 0.0), (1.0, 1.0), (0.5, 2.0), (-0.5, 1.0), (2.0, 5.0)] {
            let c = eval_kernels(w, k).unwrap();
            let o = eval_kernels_direct(w, k).unwrap();
            assert_abs_diff_eq!(c.d, o.d, epsilon = 1e-8);
            assert_abs_diff_eq!(c.a, o.a, epsilon = 1e-8);
            assert_abs_diff_eq!(c.b, o.b, epsilon = 1e-8);
        }
        let o = eval_kernels_direct(1.0, 0.0).unwrap();
        assert_abs_diff_eq!(o.a, eval_u(1.0) - PI.tanh() / 2.0, epsilon = 1e-10);
        assert!(eval_kernels_direct(4.0, 1.0).is_err());
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(eval_kernels(0.0, -1.0).is_err());
        assert!(eval_kernels(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn f32_instantiation() {
        let k = eval_kernels(0.5f32, 0.0f32).unwrap();
        assert!((k.d - (0.5 * std::f32::consts::PI).tanh() / 2.0).abs() < 1e-6);
        assert!((eval_u(0.6f32) - 0.736_733_2).abs() < 1e-5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn u_is_odd(w in -20.0f64..20.0) {
            prop_assert_eq!(eval_u(-w), -eval_u(w));
        }

        #[test]
        fn k0_closed_forms_and_oddness(w in -3.0f64..3.0) {
            let p = eval_kernels(w, 0.0).unwrap();
            let m = eval_kernels(-w, 0.0).unwrap();
            prop_assert!((p.a - (eval_u(w) - (PI * w).tanh() / 2.0)).abs() < 1e-9);
            prop_assert!((p.a + m.a).abs() < 1e-10);
            prop_assert!((p.d + m.d).abs() < 1e-10);
        }

        #[test]
        fn b_identity(w in 0.0f64..3.0, k in 0.0f64..5.0) {
            let s = eval_kernels(w, k).unwrap();
            prop_assert!(s.identity_residual() < 1e-8);
        }
    }
}
