//! 2×2 matrix representations of the region operators on one dilation
//! eigenspace, and their eigenvalues.
//!
//! On the ω-eigenspace spanned by `ψ_ω^±`, the single-curve operator acts as
//! `[[1/2 + d, (a + ib)/2], [(a − ib)/2, 0]]` and the double-curve operator as
//! `[[1/2 + d, a], [a, 1/2 + d]]`, with `b = e^{−πω}(1/2 + d)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::kernels::{eval_kernels_with, eval_u, KernelConfig, SpectralKernels};
use crate::scalar::{sech, Scalar};

/// Hermitian 2×2 matrix `[[a11, a12], [conj(a12), a22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HermitianMatrix2<T> {
    pub a11: T,
    pub a12: Complex<T>,
    pub a22: T,
}

/// Eigenvalue with unit eigenvector `(alpha, beta)` in the `ψ_ω^±` basis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenPair<T> {
    pub mu: T,
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
}

/// Spectrum of one region operator at one `(ω, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint<T> {
    pub omega: T,
    pub k: T,
    pub mu_plus: T,
    pub mu_minus: T,
    /// `mu_plus − 1`, computed without cancellation. For k > 0 the upper
    /// bound exceeds 1 by amounts far below the f64 spacing at 1.
    pub plus_excess: T,
    /// Propagated kernel error estimate.
    pub error: T,
}

/// How the k = 0 single-wedge spectrum is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum WedgeFormula {
    /// `μ± = ½[h ± sqrt(h²(1 + e^{−2πω}) + a²)]` with the k = 0 closed forms:
    /// the general single-curve formula.
    #[default]
    General,
    /// `μ± = ¼[1 + tanh(πω) ± sqrt((2u − tanh(πω))² + (1 + tanh(πω))²)]`:
    /// the specialization as printed, kept for comparison only. It does not
    /// reproduce the published wedge bounds.
    PrintedSpecialization,
}

impl<T: Scalar> HermitianMatrix2<T> {
    pub fn new(a11: T, a12: Complex<T>, a22: T) -> Self {
        Self { a11, a12, a22 }
    }

    pub fn trace(&self) -> T {
        self.a11 + self.a22
    }

    pub fn det(&self) -> T {
        self.a11 * self.a22 - self.a12.norm_sqr()
    }
}

/// Matrix of the single-curve operator on the ω-eigenspace.
pub fn build_a<T: Scalar>(omega: T, k: T) -> Result<HermitianMatrix2<T>> {
    let s = eval_kernels_with(omega, k, &KernelConfig::default())?;
    Ok(single_matrix(&s))
}

/// Matrix of the double-curve operator on the ω-eigenspace.
pub fn build_a2<T: Scalar>(omega: T, k: T) -> Result<HermitianMatrix2<T>> {
    let s = eval_kernels_with(omega, k, &KernelConfig::default())?;
    Ok(double_matrix(&s))
}

pub fn single_matrix<T: Scalar>(s: &SpectralKernels<T>) -> HermitianMatrix2<T> {
    let half = T::lit(0.5);
    HermitianMatrix2::new(s.half_plus_d, Complex::new(s.a * half, s.b * half), T::zero())
}

pub fn double_matrix<T: Scalar>(s: &SpectralKernels<T>) -> HermitianMatrix2<T> {
    HermitianMatrix2::new(s.half_plus_d, Complex::new(s.a, T::zero()), s.half_plus_d)
}

// Normalizes and rotates the phase so the first nonzero component is real positive.
fn fix_phase<T: Scalar>(alpha: Complex<T>, beta: Complex<T>) -> (Complex<T>, Complex<T>) {
    let n = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
    let (alpha, beta) = (alpha / n, beta / n);
    let lead = if alpha.norm() > T::lit(1e-14) { alpha } else { beta };
    let phase = lead.conj() / lead.norm();
    (alpha * phase, beta * phase)
}

/// Eigenpairs of a Hermitian 2×2 matrix, largest eigenvalue first.
///
/// The smaller-magnitude eigenvalue is taken from the determinant so it keeps
/// full relative accuracy. With `a12 = 0` the eigenvectors are the unit
/// vectors, `(1, 0)` going with the larger diagonal entry (and with the first
/// pair on a tie).
pub fn eigen2<T: Scalar>(m: &HermitianMatrix2<T>) -> (EigenPair<T>, EigenPair<T>) {
    let half = T::lit(0.5);
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mean = (m.a11 + m.a22) * half;
    let spread = ((m.a11 - m.a22) * half).hypot(m.a12.norm());
    let det = m.det();
    let (hi, lo) = if mean >= T::zero() {
        let hi = mean + spread;
        (hi, if hi != T::zero() { det / hi } else { mean - spread })
    } else {
        let lo = mean - spread;
        (det / lo, lo)
    };

    if m.a12 == zero {
        let (first, second) = if m.a11 >= m.a22 {
            ((one, zero), (zero, one))
        } else {
            ((zero, one), (one, zero))
        };
        return (
            EigenPair {
                mu: hi,
                alpha: first.0,
                beta: first.1,
            },
            EigenPair {
                mu: lo,
                alpha: second.0,
                beta: second.1,
            },
        );
    }

    // Two candidate null vectors of A − hi·I; keep the better conditioned one.
    let c1 = (m.a12, Complex::new(hi - m.a11, T::zero()));
    let c2 = (Complex::new(hi - m.a22, T::zero()), m.a12.conj());
    let n1 = c1.0.norm_sqr() + c1.1.norm_sqr();
    let n2 = c2.0.norm_sqr() + c2.1.norm_sqr();
    let (va, vb) = if n1 >= n2 { c1 } else { c2 };
    let (a1, b1) = fix_phase(va, vb);
    let (a2, b2) = fix_phase(-b1.conj(), a1.conj());
    (
        EigenPair {
            mu: hi,
            alpha: a1,
            beta: b1,
        },
        EigenPair {
            mu: lo,
            alpha: a2,
            beta: b2,
        },
    )
}

/// Closed-form single-curve spectrum from precomputed kernels.
pub fn single_from_kernels<T: Scalar>(s: &SpectralKernels<T>) -> SpectrumPoint<T> {
    single_closed_form(s.omega, s.k, s.half_plus_d, s.half_minus_d, s.a, s.b, s.error)
}

// h = 1/2 + d, delta = 1/2 − d, b = e^{−πω}h.
fn single_closed_form<T: Scalar>(omega: T, k: T, h: T, delta: T, a: T, b: T, error: T) -> SpectrumPoint<T> {
    let half = T::lit(0.5);
    let q = b * b + a * a;
    let r = (h * h + q).sqrt();
    let (mu_plus, mu_minus) = if h >= T::zero() {
        ((h + r) * half, -q / (T::lit(2.0) * (h + r)))
    } else {
        (q / (T::lit(2.0) * (r - h)), (h - r) * half)
    };
    // μ+ − 1 = (b² + a² − 4δ) / (2(r + 1 + δ))
    let plus_excess = (q - T::lit(4.0) * delta) / (T::lit(2.0) * (r + T::one() + delta));
    SpectrumPoint {
        omega,
        k,
        mu_plus,
        mu_minus,
        plus_excess,
        error,
    }
}

/// Closed-form double-curve spectrum `1/2 + d ± |a|` from precomputed kernels.
pub fn double_from_kernels<T: Scalar>(s: &SpectralKernels<T>) -> SpectrumPoint<T> {
    let aa = s.a.abs();
    SpectrumPoint {
        omega: s.omega,
        k: s.k,
        mu_plus: s.half_plus_d + aa,
        mu_minus: s.half_plus_d - aa,
        plus_excess: aa - s.half_minus_d,
        error: s.error,
    }
}

/// `μ±(ω, k)` for the single hyperbolic region `qp ≥ k, q ≥ 0`.
pub fn spectrum_single<T: Scalar>(omega: T, k: T) -> Result<SpectrumPoint<T>> {
    spectrum_single_with(omega, k, &KernelConfig::default())
}

pub fn spectrum_single_with<T: Scalar>(omega: T, k: T, cfg: &KernelConfig<T>) -> Result<SpectrumPoint<T>> {
    Ok(single_from_kernels(&eval_kernels_with(omega, k, cfg)?))
}

/// `μ_{2,±}(ω, k)` for the region together with its rotation by π.
pub fn spectrum_double<T: Scalar>(omega: T, k: T) -> Result<SpectrumPoint<T>> {
    spectrum_double_with(omega, k, &KernelConfig::default())
}

pub fn spectrum_double_with<T: Scalar>(omega: T, k: T, cfg: &KernelConfig<T>) -> Result<SpectrumPoint<T>> {
    Ok(double_from_kernels(&eval_kernels_with(omega, k, cfg)?))
}

/// k = 0 kernels in closed form: `(1/2 + d, 1/2 − d, a, b)`.
fn wedge_parts<T: Scalar>(omega: T) -> (T, T, T, T) {
    let pw = T::PI() * omega;
    let t = pw.tanh();
    let h = (T::one() + t) * T::lit(0.5);
    let delta = T::one() / (T::one() + (T::lit(2.0) * pw).exp());
    let a = eval_u(omega) - t * T::lit(0.5);
    let b = sech(pw) * T::lit(0.5);
    (h, delta, a, b)
}

/// Single-wedge (quadrant) spectrum from the k = 0 closed forms; no quadrature.
pub fn spectrum_wedge<T: Scalar>(omega: T, formula: WedgeFormula) -> SpectrumPoint<T> {
    let (h, delta, a, b) = wedge_parts(omega);
    match formula {
        WedgeFormula::General => single_closed_form(omega, T::zero(), h, delta, a, b, T::zero()),
        WedgeFormula::PrintedSpecialization => {
            let t = (T::PI() * omega).tanh();
            let root = ((T::lit(2.0) * eval_u(omega) - t).powi(2) + (T::one() + t).powi(2)).sqrt();
            let q = T::lit(0.25);
            let mu_plus = q * (T::one() + t + root);
            SpectrumPoint {
                omega,
                k: T::zero(),
                mu_plus,
                mu_minus: q * (T::one() + t - root),
                plus_excess: mu_plus - T::one(),
                error: T::zero(),
            }
        }
    }
}

/// Double-wedge spectrum `(1 + tanh(πω))/2 ± |u(ω) − tanh(πω)/2|`; no quadrature.
pub fn spectrum_double_wedge<T: Scalar>(omega: T) -> SpectrumPoint<T> {
    let (h, delta, a, _) = wedge_parts(omega);
    let aa = a.abs();
    SpectrumPoint {
        omega,
        k: T::zero(),
        mu_plus: h + aa,
        mu_minus: h - aa,
        plus_excess: aa - delta,
        error: T::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use std::f64::consts::{PI, SQRT_2};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn eigen_trivial_cases() {
        let (p, m) = eigen2(&HermitianMatrix2::new(1.0, c(0.0, 0.0), 0.0));
        assert_eq!((p.mu, m.mu), (1.0, 0.0));
        assert_eq!((p.alpha, p.beta), (c(1.0, 0.0), c(0.0, 0.0)));
        assert_eq!((m.alpha, m.beta), (c(0.0, 0.0), c(1.0, 0.0)));
        let (p, m) = eigen2(&HermitianMatrix2::new(0.0, c(0.0, 0.0), 2.0));
        assert_eq!((p.mu, p.beta), (2.0, c(1.0, 0.0)));
        assert_eq!(m.alpha, c(1.0, 0.0));
        let z = c(0.3, -0.4);
        let (p, m) = eigen2(&HermitianMatrix2::new(0.0, z, 0.0));
        assert_abs_diff_eq!(p.mu, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(m.mu, -0.5, epsilon = 1e-15);
        assert_eq!(p.alpha.im, 0.0);
        assert!(p.alpha.re > 0.0);
    }

    #[test]
    fn build_a_examples() {
        let m = build_a(0.0, 0.0).unwrap();
        assert_eq!(m.a11, 0.5);
        assert_abs_diff_eq!(m.a12.re, 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(m.a12.im, 0.25, epsilon = 1e-15);
        assert_eq!(m.a22, 0.0);
        // a(ω, 0) decays only like 1/(2πω), so at ω = 6 the off-diagonal entry
        // is still about a/2 = 0.0134.
        let m = build_a(6.0f64, 0.0).unwrap();
        assert_abs_diff_eq!(m.a11, 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(m.a12.re, 0.026_717_092 / 2.0, epsilon = 1e-9);
        assert!(m.a12.im.abs() < 1e-8);
        assert!(build_a(48.0, 0.0).unwrap().a12.norm() < m.a12.norm() / 7.0);
        assert_eq!(build_a(1.0, 1.0).unwrap().a22, 0.0);
        let m = build_a(0.5, 1.0).unwrap();
        let (p, q) = eigen2(&m);
        assert_abs_diff_eq!(p.mu * q.mu, -m.a12.norm_sqr(), epsilon = 1e-12);
    }

    #[test]
    fn build_a2_examples() {
        let m = build_a2(0.0, 0.0).unwrap();
        assert_eq!((m.a11, m.a22), (0.5, 0.5));
        assert_abs_diff_eq!(m.a12.re, 0.0, epsilon = 1e-13);
        assert_eq!(build_a2(1.3, 2.0).unwrap().a12.im, 0.0);
        let m = build_a2(0.6, 0.0).unwrap();
        let t = (0.6 * PI).tanh();
        assert_abs_diff_eq!(m.a11, (1.0 + t) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(m.a12.re, eval_u(0.6) - t / 2.0, epsilon = 1e-11);
    }

    #[test]
    fn single_examples() {
        let s = spectrum_single(0.0, 0.0).unwrap();
        assert_abs_diff_eq!(s.mu_plus, (1.0 + SQRT_2) / 4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.mu_minus, (1.0 - SQRT_2) / 4.0, epsilon = 1e-12);
        let s = spectrum_single(6.0, 0.0).unwrap();
        assert_abs_diff_eq!(s.plus_excess, 1.784_19e-4, epsilon = 1e-9);
        assert_abs_diff_eq!(s.mu_minus, -1.784_19e-4, epsilon = 1e-8);
        let s = spectrum_single(48.0, 0.0).unwrap();
        assert_abs_diff_eq!(s.plus_excess, 2.749_1e-6, epsilon = 1e-10);
        let s = spectrum_single(-0.35, 0.0).unwrap();
        assert_abs_diff_eq!(s.mu_minus, -0.15593, epsilon = 5e-6);
    }

    #[test]
    fn wedge_formulas() {
        let w = spectrum_wedge(0.0, WedgeFormula::General);
        assert_abs_diff_eq!(w.mu_plus, (1.0 + SQRT_2) / 4.0, epsilon = 1e-15);
        for om in [-2.0, -0.35, 0.4, 0.87, 3.0] {
            let g = spectrum_wedge(om, WedgeFormula::General);
            let s = spectrum_single(om, 0.0).unwrap();
            assert_abs_diff_eq!(g.mu_plus, s.mu_plus, epsilon = 1e-11);
            assert_abs_diff_eq!(g.mu_minus, s.mu_minus, epsilon = 1e-11);
            assert_abs_diff_eq!(g.plus_excess, g.mu_plus - 1.0, epsilon = 1e-15);
        }
        // the printed specialization differs away from large |ω|
        let p = spectrum_wedge(-0.35f64, WedgeFormula::PrintedSpecialization);
        let g = spectrum_wedge(-0.35, WedgeFormula::General);
        assert!((p.mu_minus - g.mu_minus).abs() > 1e-2);
    }

    #[test]
    fn double_examples() {
        let s = spectrum_double(0.0, 0.0).unwrap();
        assert_abs_diff_eq!(s.mu_plus, 0.5, epsilon = 1e-13);
        assert_abs_diff_eq!(s.mu_minus, 0.5, epsilon = 1e-13);
        let s = spectrum_double(0.6, 0.0).unwrap();
        assert_abs_diff_eq!(s.mu_plus, 1.23674, epsilon = 1e-5);
        assert_abs_diff_eq!(s.mu_plus, 0.5 + eval_u(0.6), epsilon = 1e-11);
        let w = spectrum_double_wedge(0.0f64);
        assert_eq!((w.mu_plus, w.mu_minus), (0.5, 0.5));
        for om in [0.3, 1.0, 2.0] {
            let p = spectrum_double_wedge(om);
            let m = spectrum_double_wedge(-om);
            assert_abs_diff_eq!(p.mu_plus + m.mu_minus, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn double_eigenvectors_are_even_and_odd() {
        for (om, k) in [(0.3f64, 0.0), (-1.0, 1.0), (2.0, 4.0)] {
            let m = build_a2(om, k).unwrap();
            let (p, q) = eigen2(&m);
            let r = std::f64::consts::FRAC_1_SQRT_2;
            let sign = m.a12.re.signum();
            assert_abs_diff_eq!(p.alpha.re, r, epsilon = 1e-14);
            assert_abs_diff_eq!(p.beta.re, sign * r, epsilon = 1e-14);
            assert_abs_diff_eq!(q.alpha.re, r, epsilon = 1e-14);
            assert_abs_diff_eq!(q.beta.re, -sign * r, epsilon = 1e-14);
        }
    }

    #[test]
    fn large_omega_excess_matches_high_precision() {
        // 30-digit references for μ+ − 1.
        let s = spectrum_single(18.0f64, 1.0).unwrap();
        assert!(
            (s.plus_excess / 1.375_039_3e-18 - 1.0).abs() < 1e-4,
            "{:e}",
            s.plus_excess
        );
        let s = spectrum_single(24.0f64, 1.0).unwrap();
        assert!(
            (s.plus_excess / 4.741_491_2e-21 - 1.0).abs() < 1e-4,
            "{:e}",
            s.plus_excess
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn eigen2_is_an_orthonormal_eigendecomposition(
            a11 in -3.0f64..3.0, a22 in -3.0f64..3.0, re in -2.0f64..2.0, im in -2.0f64..2.0
        ) {
            let m = HermitianMatrix2::new(a11, c(re, im), a22);
            let (p, q) = eigen2(&m);
            prop_assert!(p.mu >= q.mu);
            for e in [p, q] {
                let r1 = c(m.a11, 0.0) * e.alpha + m.a12 * e.beta - e.alpha * e.mu;
                let r2 = m.a12.conj() * e.alpha + c(m.a22, 0.0) * e.beta - e.beta * e.mu;
                prop_assert!(r1.norm() < 1e-12 && r2.norm() < 1e-12);
                prop_assert!((e.alpha.norm_sqr() + e.beta.norm_sqr() - 1.0).abs() < 1e-14);
            }
            let inner = p.alpha.conj() * q.alpha + p.beta.conj() * q.beta;
            prop_assert!(inner.norm() < 1e-14);
            prop_assert!((p.mu + q.mu - m.trace()).abs() < 1e-12);
        }

        #[test]
        fn closed_forms_match_eigensolver(om in -4.0f64..4.0, k in 0.0f64..5.0) {
            let ker = eval_kernels_with(om, k, &KernelConfig::default()).unwrap();
            let s = single_from_kernels(&ker);
            let (p, q) = eigen2(&single_matrix(&ker));
            prop_assert!((s.mu_plus - p.mu).abs() < 1e-12);
            prop_assert!((s.mu_minus - q.mu).abs() < 1e-12);
            prop_assert!(s.mu_plus * s.mu_minus <= 0.0);
            prop_assert!((s.mu_plus + s.mu_minus - ker.half_plus_d).abs() < 1e-12);
            prop_assert!((s.plus_excess - (s.mu_plus - 1.0)).abs() < 1e-12);
            let d = double_from_kernels(&ker);
            let (p, q) = eigen2(&double_matrix(&ker));
            prop_assert!((d.mu_plus - p.mu).abs() < 1e-12);
            prop_assert!((d.mu_minus - q.mu).abs() < 1e-12);
            prop_assert!(d.mu_plus >= d.mu_minus);
            prop_assert!((d.mu_plus + d.mu_minus - 2.0 * ker.half_plus_d).abs() < 1e-12);
        }

        #[test]
        fn double_wedge_complement_symmetry(om in -5.0f64..5.0) {
            let p = spectrum_double_wedge(om);
            let m = spectrum_double_wedge(-om);
            prop_assert!((p.mu_plus + m.mu_minus - 1.0).abs() < 1e-10);
            prop_assert!((p.mu_minus + m.mu_plus - 1.0).abs() < 1e-10);
        }
    }
}
