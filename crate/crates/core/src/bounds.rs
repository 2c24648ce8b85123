//! Best-possible qpi bounds: the infimum of `μ−` and supremum of `μ+` over ω.
//!
//! The upper bound is located by maximizing `μ+ − 1` rather than `μ+`: for
//! k > 0 the supremum exceeds 1 by less than the f64 spacing at 1, and only
//! the excess resolves where it is attained.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernels::{eval_kernels_with, KernelConfig};
use crate::oracle::PhasePoint;
use crate::scalar::Scalar;
use crate::spectrum::{
    double_from_kernels, single_from_kernels, spectrum_double_wedge, spectrum_wedge, SpectrumPoint, WedgeFormula,
};

/// Region families with a 2×2 spectral reduction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RegionFamily<T> {
    /// `qp ≥ k, q ≥ 0`.
    HyperbolaSingle(T),
    /// The single region together with its rotation by π.
    HyperbolaDouble(T),
    /// The positive quadrant, i.e. `HyperbolaSingle(0)` via closed forms.
    Wedge,
    /// Positive and negative quadrants, via closed forms.
    DoubleWedge,
}

impl<T: Scalar> RegionFamily<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::HyperbolaSingle(k) | Self::HyperbolaDouble(k) if !(k >= T::zero() && k.is_finite()) => Err(
                Error::InvalidInput(format!("k must be finite and nonnegative, got {k}")),
            ),
            _ => Ok(()),
        }
    }

    /// Spectrum of this family's operator on the ω-eigenspace.
    pub fn spectrum(&self, omega: T, kernel: &KernelConfig<T>) -> Result<SpectrumPoint<T>> {
        match *self {
            Self::Wedge => Ok(spectrum_wedge(omega, WedgeFormula::General)),
            Self::DoubleWedge => Ok(spectrum_double_wedge(omega)),
            Self::HyperbolaSingle(k) => Ok(single_from_kernels(&eval_kernels_with(omega, k, kernel)?)),
            Self::HyperbolaDouble(k) => Ok(double_from_kernels(&eval_kernels_with(omega, k, kernel)?)),
        }
    }
}

/// Settings for the ω scan and refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig<T> {
    pub omega_min: T,
    pub omega_max: T,
    pub coarse_step: T,
    /// Width in ω below which golden-section refinement stops.
    pub refine_tol: T,
    /// Maximum golden-section iterations per bracket.
    pub max_refinements: usize,
    /// The window is doubled per side while an extremum sits on its edge,
    /// but never beyond `|ω| = window_cap`.
    pub window_cap: T,
    pub kernel: KernelConfig<T>,
}

impl<T: Scalar> Default for OptimizerConfig<T> {
    fn default() -> Self {
        Self {
            omega_min: T::lit(-10.0),
            omega_max: T::lit(10.0),
            coarse_step: T::lit(0.02),
            refine_tol: T::lit(1e-10).max(T::lit(16.0) * T::epsilon()),
            max_refinements: 200,
            window_cap: T::lit(80.0),
            kernel: KernelConfig::default(),
        }
    }
}

impl<T: Scalar> OptimizerConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let ok = self.omega_min.is_finite()
            && self.omega_max.is_finite()
            && self.omega_min < self.omega_max
            && self.coarse_step > T::zero()
            && self.refine_tol > T::zero()
            && self.max_refinements >= 1
            && self.window_cap >= self.omega_min.abs().max(self.omega_max.abs());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid optimizer config {self:?}")))
        }
    }
}

/// Best-possible bounds for one region family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsResult<T> {
    pub lower: T,
    pub upper: T,
    /// `upper − 1` at full relative precision.
    pub upper_excess: T,
    pub omega_at_lower: T,
    pub omega_at_upper: T,
    /// ω refinement tolerance plus the kernel error at both extremizers.
    pub certified_tol: T,
}

#[derive(Clone, Copy)]
struct Sample<T> {
    omega: T,
    point: SpectrumPoint<T>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    Lower,
    Upper,
}

impl Goal {
    // Quantity to minimize.
    fn score<T: Scalar>(self, p: &SpectrumPoint<T>) -> T {
        match self {
            Goal::Lower => p.mu_minus,
            Goal::Upper => -p.plus_excess,
        }
    }
}

fn grid<T: Scalar>(lo: T, hi: T, step: T) -> Vec<T> {
    let n = ((hi - lo) / step).round().to_usize().unwrap_or(1).max(1);
    (0..=n)
        .map(|i| lo + (hi - lo) * T::from_usize(i).unwrap() / T::from_usize(n).unwrap())
        .collect()
}

fn evaluate<T: Scalar>(family: &RegionFamily<T>, omegas: &[T], cfg: &OptimizerConfig<T>) -> Result<Vec<Sample<T>>> {
    omegas
        .par_iter()
        .map(|&omega| family.spectrum(omega, &cfg.kernel).map(|point| Sample { omega, point }))
        .collect()
}

fn argbest<T: Scalar>(samples: &[Sample<T>], goal: Goal) -> usize {
    let mut best = 0;
    for (i, s) in samples.iter().enumerate() {
        if goal.score(&s.point) < goal.score(&samples[best].point) {
            best = i;
        }
    }
    best
}

/// Coarse samples over a window that is enlarged on whichever side holds the
/// best sample for either goal. Each extension doubles that side and samples
/// it with a step scaled by the same factor.
fn scan<T: Scalar>(family: &RegionFamily<T>, cfg: &OptimizerConfig<T>) -> Result<Vec<Sample<T>>> {
    let mut samples = evaluate(family, &grid(cfg.omega_min, cfg.omega_max, cfg.coarse_step), cfg)?;
    let half0 = (cfg.omega_max - cfg.omega_min) / T::lit(2.0);
    let (mut lo, mut hi) = (cfg.omega_min, cfg.omega_max);
    let scaled_step = |edge: T| cfg.coarse_step * (edge.abs() / half0).max(T::one());
    loop {
        let last = samples.len() - 1;
        let hits: Vec<usize> = [Goal::Lower, Goal::Upper]
            .iter()
            .map(|&g| argbest(&samples, g))
            .collect();
        let extend_lo = hits.contains(&0);
        let extend_hi = hits.contains(&last);
        if !extend_lo && !extend_hi {
            return Ok(samples);
        }
        let cap = cfg.window_cap;
        if (extend_lo && lo <= -cap) || (extend_hi && hi >= cap) {
            return Err(Error::ExtremumOnBoundary {
                omega_min: lo.as_f64(),
                omega_max: hi.as_f64(),
            });
        }
        if extend_lo {
            let new_lo = (lo - lo.abs().max(half0)).max(-cap);
            let fresh = grid(new_lo, lo, scaled_step(new_lo));
            let mut fresh = evaluate(family, &fresh[..fresh.len() - 1], cfg)?;
            fresh.append(&mut samples);
            samples = fresh;
            lo = new_lo;
        }
        if extend_hi {
            let new_hi = (hi + hi.abs().max(half0)).min(cap);
            let fresh = grid(hi, new_hi, scaled_step(new_hi));
            samples.extend(evaluate(family, &fresh[1..], cfg)?);
            hi = new_hi;
        }
    }
}

/// Golden-section minimization of `goal` on `[a, b]`.
fn golden<T: Scalar>(
    family: &RegionFamily<T>,
    goal: Goal,
    mut a: T,
    mut b: T,
    cfg: &OptimizerConfig<T>,
) -> Result<Sample<T>> {
    let inv_phi = T::lit(0.5) * (T::lit(5.0).sqrt() - T::one());
    let eval = |w: T| family.spectrum(w, &cfg.kernel).map(|p| Sample { omega: w, point: p });
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    let mut iterations = 0;
    while b - a > cfg.refine_tol && iterations < cfg.max_refinements {
        if goal.score(&f1.point) <= goal.score(&f2.point) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2)?;
        }
        iterations += 1;
    }
    Ok(if goal.score(&f1.point) <= goal.score(&f2.point) {
        f1
    } else {
        f2
    })
}

const MAX_BRACKETS: usize = 16;

fn refine<T: Scalar>(
    family: &RegionFamily<T>,
    samples: &[Sample<T>],
    goal: Goal,
    cfg: &OptimizerConfig<T>,
) -> Result<Sample<T>> {
    let score = |i: usize| goal.score(&samples[i].point);
    let n = samples.len();
    let mut brackets: Vec<usize> = (1..n - 1)
        .filter(|&i| score(i) <= score(i - 1) && score(i) <= score(i + 1))
        .collect();
    brackets.sort_by(|&i, &j| score(i).partial_cmp(&score(j)).unwrap());
    brackets.truncate(MAX_BRACKETS);
    let refined: Vec<Sample<T>> = brackets
        .par_iter()
        .map(|&i| golden(family, goal, samples[i - 1].omega, samples[i + 1].omega, cfg))
        .collect::<Result<_>>()?;
    let mut best = samples[argbest(samples, goal)];
    let tie = T::lit(4.0) * T::epsilon();
    for r in refined {
        let (sr, sb) = (goal.score(&r.point), goal.score(&best.point));
        let scale = sr.abs().max(sb.abs());
        if sr < sb - tie * scale || ((sr - sb).abs() <= tie * scale && r.omega.abs() < best.omega.abs()) {
            best = r;
        }
    }
    Ok(best)
}

/// `L = inf_ω μ−(ω)` and `U = sup_ω μ+(ω)` for `family`.
pub fn optimize_bounds<T: Scalar>(family: RegionFamily<T>, cfg: &OptimizerConfig<T>) -> Result<BoundsResult<T>> {
    family.validate()?;
    cfg.validate()?;
    let samples = scan(&family, cfg)?;
    let low = refine(&family, &samples, Goal::Lower, cfg)?;
    let up = refine(&family, &samples, Goal::Upper, cfg)?;
    Ok(BoundsResult {
        lower: low.point.mu_minus,
        upper: T::one() + up.point.plus_excess,
        upper_excess: up.point.plus_excess,
        omega_at_lower: low.omega,
        omega_at_upper: up.omega,
        certified_tol: cfg.refine_tol + low.point.error + up.point.error,
    })
}

/// Which hyperbolic family a sweep runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepKind {
    Single,
    Double,
}

impl SweepKind {
    pub fn family<T: Scalar>(self, k: T) -> RegionFamily<T> {
        match self {
            Self::Single => RegionFamily::HyperbolaSingle(k),
            Self::Double => RegionFamily::HyperbolaDouble(k),
        }
    }
}

/// Bounds for each `k`, in input order. A failure at one `k` is reported in
/// its row and does not stop the others.
pub fn sweep<T: Scalar>(
    kind: SweepKind,
    k_values: &[T],
    cfg: &OptimizerConfig<T>,
) -> Result<Vec<(T, Result<BoundsResult<T>>)>> {
    cfg.validate()?;
    if k_values.iter().any(|&k| !(k >= T::zero() && k.is_finite())) {
        return Err(Error::InvalidInput(
            "sweep k values must be finite and nonnegative".into(),
        ));
    }
    if k_values.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidInput("sweep k values must be sorted".into()));
    }
    Ok(k_values
        .par_iter()
        .map(|&k| (k, optimize_bounds(kind.family(k), cfg)))
        .collect())
}

/// Bounds for an infinite wedge of the given half-angle, vertex and axis
/// orientation. Every such wedge is a metaplectic image of the quadrant, so
/// this is the quadrant's answer; the arguments are only checked.
pub fn wedge_equivalence<T: Scalar>(
    half_angle: T,
    vertex: PhasePoint<T>,
    orientation: T,
    cfg: &OptimizerConfig<T>,
) -> Result<BoundsResult<T>> {
    if !(half_angle > T::zero() && half_angle < T::FRAC_PI_2()) {
        return Err(Error::InvalidInput(format!(
            "wedge half-angle must lie in (0, π/2), got {half_angle}"
        )));
    }
    if !(vertex.q.is_finite() && vertex.p.is_finite() && orientation.is_finite()) {
        return Err(Error::InvalidInput(
            "wedge vertex and orientation must be finite".into(),
        ));
    }
    optimize_bounds(RegionFamily::Wedge, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn wedge_bounds() {
        let b = optimize_bounds(RegionFamily::Wedge, &OptimizerConfig::<f64>::default()).unwrap();
        assert_abs_diff_eq!(b.lower, -0.155_939_843_191, epsilon = 1e-11);
        assert_abs_diff_eq!(b.upper, 1.007_679_970_07, epsilon = 1e-11);
        assert_abs_diff_eq!(b.omega_at_lower, -0.355_819_897_1, epsilon = 1e-6);
        assert_abs_diff_eq!(b.omega_at_upper, 0.872_202_868_7, epsilon = 1e-6);
        assert!(b.certified_tol > 0.0);
    }

    #[test]
    fn double_wedge_bounds() {
        let b = optimize_bounds(RegionFamily::DoubleWedge, &OptimizerConfig::<f64>::default()).unwrap();
        assert_abs_diff_eq!(b.lower, -0.236_823_651_710_054, epsilon = 1e-11);
        assert_abs_diff_eq!(b.upper, 1.236_823_651_710_054, epsilon = 1e-11);
        assert_abs_diff_eq!(b.lower + b.upper, 1.0, epsilon = 1e-12);
        assert!(b.omega_at_lower < 0.0 && b.omega_at_upper > 0.0);
    }

    #[test]
    fn hyperbola_at_zero_is_the_wedge() {
        let cfg = OptimizerConfig::<f64>::default();
        let w = optimize_bounds(RegionFamily::Wedge, &cfg).unwrap();
        let h = optimize_bounds(RegionFamily::HyperbolaSingle(0.0), &cfg).unwrap();
        assert_abs_diff_eq!(w.lower, h.lower, epsilon = 1e-10);
        assert_abs_diff_eq!(w.upper, h.upper, epsilon = 1e-10);
    }

    #[test]
    fn narrow_window_is_extended() {
        let cfg = OptimizerConfig {
            omega_min: -0.1,
            omega_max: 0.1,
            window_cap: 80.0,
            ..OptimizerConfig::default()
        };
        let b = optimize_bounds(RegionFamily::Wedge, &cfg).unwrap();
        assert_abs_diff_eq!(b.lower, -0.155_939_843_191, epsilon = 1e-11);
        let capped = OptimizerConfig { window_cap: 0.1, ..cfg };
        let e = optimize_bounds(RegionFamily::<f64>::Wedge, &capped).unwrap_err();
        assert!(matches!(e, Error::ExtremumOnBoundary { .. }));
    }

    #[test]
    fn halving_step_is_stable() {
        let cfg = OptimizerConfig::<f64>::default();
        let fine = OptimizerConfig {
            coarse_step: 0.01,
            ..cfg
        };
        let a = optimize_bounds(RegionFamily::DoubleWedge, &cfg).unwrap();
        let b = optimize_bounds(RegionFamily::DoubleWedge, &fine).unwrap();
        assert!((a.lower - b.lower).abs() < a.certified_tol);
        assert!((a.upper - b.upper).abs() < a.certified_tol);
    }

    #[test]
    fn wedge_equivalence_checks_angle() {
        let cfg = OptimizerConfig::<f64>::default();
        let v = PhasePoint { q: 1.0, p: -2.0 };
        let w = optimize_bounds(RegionFamily::Wedge, &cfg).unwrap();
        assert_eq!(
            wedge_equivalence(PI / 4.0, PhasePoint { q: 0.0, p: 0.0 }, 0.0, &cfg).unwrap(),
            w
        );
        assert_eq!(wedge_equivalence(PI / 6.0, v, 0.3, &cfg).unwrap(), w);
        assert!(wedge_equivalence(PI / 2.0, v, 0.0, &cfg).is_err());
        assert!(wedge_equivalence(0.0, v, 0.0, &cfg).is_err());
    }

    #[test]
    fn sweep_rows_in_order() {
        let cfg = OptimizerConfig::<f64>::default();
        let rows = sweep(SweepKind::Double, &[0.0, 0.4], &cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].0, 0.0);
        let b0 = rows[0].1.as_ref().unwrap();
        assert_abs_diff_eq!(b0.lower, -0.236_823_651_710_054, epsilon = 1e-9);
        let b1 = rows[1].1.as_ref().unwrap();
        assert_abs_diff_eq!(b1.lower, -0.4014, epsilon = 5e-4);
        assert!(sweep(SweepKind::Single, &[1.0, 0.5], &cfg).is_err());
        assert!(sweep(SweepKind::Single, &[-1.0], &cfg).is_err());
    }
}
