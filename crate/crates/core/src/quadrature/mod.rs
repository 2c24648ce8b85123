//! Numerical integration engine.
//!
//! * [`integrate_adaptive`]: globally adaptive Gauss–Kronrod (10/21) bisection.
//! * [`integrate_semi_infinite`] / [`integrate_semi_infinite_enveloped`]:
//!   `[lo, ∞)` integrals cut where an exponential envelope drops below the
//!   truncation threshold, with the discarded tail bounded analytically.
//! * [`integrate_closed_circle`]: periodic trapezoid rule on `|z| = ρ`.
//! * [`integrate_region_2d`]: iterated quadrature over a phase-plane region
//!   whose boundary is honoured slice by slice.

mod adaptive;
mod contour;
pub(crate) mod planar;

pub use adaptive::{
    integrate_adaptive, integrate_adaptive_complex, integrate_adaptive_points, integrate_adaptive_points_complex,
    integrate_semi_infinite, integrate_semi_infinite_enveloped, ExpEnvelope, QuadValue,
};
pub use contour::{integrate_closed_circle, integrate_closed_circle_adaptive, ContourSpec, MAX_CONTOUR_NODES};
pub use planar::{integrate_region_2d, integrate_region_2d_in, PlaneRegion, Rect};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tolerances shared by the 1-D, semi-infinite and planar routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    /// Upper limit on the number of panels held by the adaptive bisection.
    pub max_subdivisions: usize,
    /// Integrand magnitude below which a semi-infinite or unbounded domain is cut.
    pub truncation_threshold: T,
}

impl<T: Scalar> Default for QuadratureConfig<T> {
    fn default() -> Self {
        Self {
            abs_tol: floor_tol(T::lit(1e-10)),
            rel_tol: floor_tol(T::lit(1e-10)),
            max_subdivisions: 10_000,
            truncation_threshold: T::lit(1e-16),
        }
    }
}

impl<T: Scalar> QuadratureConfig<T> {
    /// Defaults for phase-plane integration (`abs_tol = 1e-8`).
    pub fn planar() -> Self {
        Self {
            abs_tol: floor_tol(T::lit(1e-8)),
            rel_tol: floor_tol(T::lit(1e-8)),
            max_subdivisions: 4_000,
            truncation_threshold: T::lit(1e-16),
        }
    }

    pub fn with_tolerances(abs_tol: T, rel_tol: T) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.abs_tol > T::zero()
            && self.rel_tol > T::zero()
            && self.max_subdivisions >= 1
            && self.truncation_threshold > T::zero();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "quadrature config needs positive tolerances and max_subdivisions >= 1, got {self:?}"
            )))
        }
    }
}

// f32 cannot reach the f64 default tolerances.
fn floor_tol<T: Scalar>(tol: T) -> T {
    tol.max(T::lit(64.0) * T::epsilon())
}

/// Value of an integral together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult<T, V = T> {
    pub value: V,
    pub error_estimate: T,
    pub evaluations: usize,
}

impl<T: Scalar, V> IntegralResult<T, V> {
    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> IntegralResult<T, W> {
        IntegralResult {
            value: f(self.value),
            error_estimate: self.error_estimate,
            evaluations: self.evaluations,
        }
    }
}
