//! Independent validation by direct phase-space and configuration-space
//! integration.

mod region;
mod state;

use std::cell::RefCell;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use region::{apply_metaplectic, Metaplectic, Region};
pub use state::{apply_metaplectic_state, cross_wigner, hermite_functions, laguerre, wigner_eval, StateSpec};

use crate::bounds::{BoundsResult, RegionFamily};
use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_adaptive, integrate_adaptive_complex, integrate_adaptive_points_complex, integrate_region_2d_in,
    IntegralResult, QuadratureConfig,
};
use crate::scalar::Scalar;

/// A point `(q, p)` of the dimensionless phase plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint<T> {
    pub q: T,
    pub p: T,
}

impl<T: Scalar> PhasePoint<T> {
    pub fn new(q: T, p: T) -> Result<Self> {
        if q.is_finite() && p.is_finite() {
            Ok(Self { q, p })
        } else {
            Err(Error::InvalidInput(format!("phase point ({q}, {p}) is not finite")))
        }
    }
}

impl<T: Scalar> From<RegionFamily<T>> for Region<T> {
    fn from(f: RegionFamily<T>) -> Self {
        match f {
            RegionFamily::HyperbolaSingle(k) => Region::HyperbolaSingle(k),
            RegionFamily::HyperbolaDouble(k) => Region::HyperbolaDouble(k),
            RegionFamily::Wedge => Region::Quadrant,
            RegionFamily::DoubleWedge => Region::DoubleWedge0,
        }
    }
}

/// A quasiprobability integral `∫_region W dq dp`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QpiResult<T> {
    pub value: T,
    pub error_estimate: T,
    pub region: Region<T>,
    pub state: StateSpec<T>,
}

/// `∫∫_region W_state dq dp` over the box holding the state's support.
pub fn qpi<T: Scalar>(state: &StateSpec<T>, region: &Region<T>, cfg: &QuadratureConfig<T>) -> Result<QpiResult<T>> {
    state.validate()?;
    region.validate()?;
    let r = integrate_region_2d_in(
        |q, p| wigner_eval(state, PhasePoint { q, p }),
        region,
        &state.phase_box(),
        cfg,
    )?;
    Ok(QpiResult {
        value: r.value,
        error_estimate: r.error_estimate,
        region: region.clone(),
        state: state.clone(),
    })
}

/// `∫W(q, p) dp`, which equals `|ψ(q)|²`.
pub fn position_marginal<T: Scalar>(
    state: &StateSpec<T>,
    q: T,
    cfg: &QuadratureConfig<T>,
) -> Result<IntegralResult<T>> {
    state.validate()?;
    let b = state.phase_box();
    integrate_adaptive(|p| wigner_eval(state, PhasePoint { q, p }), b.p_min, b.p_max, cfg)
}

/// Wigner function of a wavefunction `psi` supported on `support`, by
/// quadrature of the defining integral.
///
/// Fails with [`Error::Normalization`] when `∫|ψ|²` over the support is off
/// from 1 by more than 1e-6, which flags an undersampled or truncated input.
pub fn wigner_from_wavefunction<T, F>(psi: F, support: (T, T), x: PhasePoint<T>, cfg: &QuadratureConfig<T>) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> Complex<T>,
{
    let (lo, hi) = support;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidInput(
            "wavefunction support must be a finite interval".into(),
        ));
    }
    let norm = integrate_adaptive(|y| psi(y).norm_sqr(), lo, hi, cfg)?.value;
    let drift = (norm - T::one()).abs();
    if drift > T::lit(1e-6) {
        return Err(Error::Normalization { drift: drift.as_f64() });
    }
    let t_lo = (lo - x.q).max(x.q - hi);
    let t_hi = (hi - x.q).min(x.q - lo);
    if !(t_lo < t_hi) {
        return Ok(T::zero());
    }
    let two = T::lit(2.0);
    let r = integrate_adaptive_complex(
        |t| psi(x.q + t).conj() * psi(x.q - t) * Complex::from_polar(T::one(), two * x.p * t),
        t_lo,
        t_hi,
        cfg,
    )?;
    Ok(r.value.re / T::PI())
}

const PV_T_MIN: f64 = 1e-4;
const ASYMPTOTIC_S_FRACTION: f64 = 1.0 / 60.0;

/// `⟨ψ|χ̂_k|ψ⟩` for the single hyperbolic region, evaluated from the
/// configuration kernel of the region operator.
///
/// The kernel is a delta term `½∫₀^∞|ψ|²` plus a principal-value term taken
/// in coordinates `s = (x+y)/2`, `t = x − y`. Below `s = k/60` the inner
/// integral is replaced by its high-frequency limit `iπ|ψ(s)|²`. The
/// imaginary part of the result, zero in exact arithmetic, is added to the
/// error estimate.
pub fn expectation_region_operator<T: Scalar>(
    state: &StateSpec<T>,
    k: T,
    cfg: &QuadratureConfig<T>,
) -> Result<IntegralResult<T>> {
    state.validate()?;
    if !(k >= T::zero() && k.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "k must be finite and nonnegative, got {k}"
        )));
    }
    let (c, r) = state.extent();
    let (x_lo, x_hi) = (c.q - r, c.q + r);
    if x_hi <= T::zero() {
        return Ok(IntegralResult {
            value: T::zero(),
            error_estimate: T::zero(),
            evaluations: 0,
        });
    }
    let psi = |x: T| state.wavefunction(x);

    let delta = integrate_adaptive(|x| psi(x).norm_sqr(), x_lo.max(T::zero()), x_hi, cfg)?;

    let inner_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol / (T::lit(4.0) * x_hi.max(T::one())),
        rel_tol: cfg.rel_tol * T::lit(0.25),
        ..*cfg
    };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner_err = RefCell::new(T::zero());
    let evals = RefCell::new(0usize);
    let s_switch = k * T::lit(ASYMPTOTIC_S_FRACTION);
    let half = T::lit(0.5);
    let t_min = T::lit(PV_T_MIN);

    let inner = |s: T| -> Complex<T> {
        let zero = Complex::new(T::zero(), T::zero());
        if failure.borrow().is_some() {
            return Complex::new(T::nan(), T::zero());
        }
        if s < s_switch {
            return Complex::new(T::zero(), T::PI() * psi(s).norm_sqr());
        }
        let t_max = T::lit(2.0) * (s - x_lo).min(x_hi - s);
        if !(t_max > T::zero()) {
            return zero;
        }
        let g = |t: T| Complex::from_polar(T::one(), k * t / s) * psi(s + half * t).conj() * psi(s - half * t);
        let odd = |t: T| {
            let t = t.max(t_min);
            (g(t) - g(-t)) / t
        };
        match integrate_adaptive_complex(odd, T::zero(), t_max, &inner_cfg) {
            Ok(r) => {
                *evals.borrow_mut() += r.evaluations;
                let mut e = inner_err.borrow_mut();
                *e = e.max(r.error_estimate);
                r.value
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                Complex::new(T::nan(), T::zero())
            }
        }
    };

    let mut points = vec![T::zero()];
    if s_switch > T::zero() && s_switch < x_hi {
        points.push(s_switch);
    }
    points.push(x_hi);
    let outer_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol * half,
        rel_tol: cfg.rel_tol * half,
        ..*cfg
    };
    let outer = integrate_adaptive_points_complex(inner, &points, &outer_cfg);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    // −(1/2πi)·J
    let pv = Complex::new(T::zero(), T::one()) * outer.value / T::TAU();
    let value = half * delta.value + pv.re;
    Ok(IntegralResult {
        value,
        error_estimate: half * delta.error_estimate
            + (outer.error_estimate + inner_err.into_inner() * x_hi) / T::TAU()
            + pv.im.abs(),
        evaluations: delta.evaluations + outer.evaluations + evals.into_inner(),
    })
}

/// Fock states 0–8, coherent states on a 5×5 grid over `[−3, 3]²`, and
/// squeezed states with `σ ∈ {0.5, 1, 2}` at six centres: 52 states.
pub fn state_suite<T: Scalar>() -> Vec<StateSpec<T>> {
    let mut out: Vec<StateSpec<T>> = (0..=8).map(StateSpec::Fock).collect();
    let grid = [-3.0, -1.5, 0.0, 1.5, 3.0];
    for &q0 in &grid {
        for &p0 in &grid {
            out.push(StateSpec::Coherent {
                q0: T::lit(q0),
                p0: T::lit(p0),
            });
        }
    }
    let centres = [
        (0.0, 0.0),
        (1.0, -1.0),
        (-1.5, 0.5),
        (2.0, 2.0),
        (-2.0, -1.0),
        (0.5, 3.0),
    ];
    for sigma in [0.5, 1.0, 2.0] {
        for &(q0, p0) in &centres {
            out.push(StateSpec::Squeezed {
                sigma: T::lit(sigma),
                q0: T::lit(q0),
                p0: T::lit(p0),
            });
        }
    }
    out
}

/// One state's qpi against a pair of bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentEntry<T> {
    pub index: usize,
    pub state: StateSpec<T>,
    pub qpi: Option<T>,
    pub error_estimate: T,
    /// `qpi − lower`.
    pub margin_lower: T,
    /// `upper − qpi`.
    pub margin_upper: T,
    pub pass: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContainmentReport<T> {
    pub family: RegionFamily<T>,
    pub lower: T,
    pub upper: T,
    /// Slack allowed beyond the bounds, before the per-state quadrature error.
    pub tolerance: T,
    pub entries: Vec<ContainmentEntry<T>>,
    pub violations: usize,
    /// Smallest observed `qpi − lower` and `upper − qpi`.
    pub min_margin_lower: Option<T>,
    pub min_margin_upper: Option<T>,
}

/// Checks that every state's qpi over `family` lies in
/// `[lower − ε, upper + ε]`, where `ε` is `tolerance` plus the bounds'
/// certified tolerance plus the qpi error estimate. A failed quadrature is
/// recorded as a violation.
pub fn containment_check<T: Scalar>(
    states: &[StateSpec<T>],
    family: RegionFamily<T>,
    bounds: &BoundsResult<T>,
    tolerance: T,
    cfg: &QuadratureConfig<T>,
) -> ContainmentReport<T> {
    let region = Region::from(family);
    let entries: Vec<ContainmentEntry<T>> = states
        .par_iter()
        .enumerate()
        .map(|(index, state)| match qpi(state, &region, cfg) {
            Ok(r) => {
                let eps = tolerance + bounds.certified_tol + r.error_estimate;
                let margin_lower = r.value - bounds.lower;
                let margin_upper = bounds.upper - r.value;
                ContainmentEntry {
                    index,
                    state: state.clone(),
                    qpi: Some(r.value),
                    error_estimate: r.error_estimate,
                    margin_lower,
                    margin_upper,
                    pass: margin_lower >= -eps && margin_upper >= -eps,
                    failure: None,
                }
            }
            Err(e) => ContainmentEntry {
                index,
                state: state.clone(),
                qpi: None,
                error_estimate: T::infinity(),
                margin_lower: T::nan(),
                margin_upper: T::nan(),
                pass: false,
                failure: Some(e.to_string()),
            },
        })
        .collect();
    let fold_min = |f: fn(&ContainmentEntry<T>) -> T| {
        entries
            .iter()
            .filter(|e| e.qpi.is_some())
            .map(f)
            .fold(None, |acc: Option<T>, v| Some(acc.map_or(v, |a| a.min(v))))
    };
    ContainmentReport {
        family,
        lower: bounds.lower,
        upper: bounds.upper,
        tolerance,
        violations: entries.iter().filter(|e| !e.pass).count(),
        min_margin_lower: fold_min(|e| e.margin_lower),
        min_margin_upper: fold_min(|e| e.margin_upper),
        entries,
    }
}
