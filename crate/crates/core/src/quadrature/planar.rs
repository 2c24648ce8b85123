use std::cell::RefCell;

use serde::{Deserialize, Serialize};

use super::adaptive::integrate_adaptive_points;
use super::{IntegralResult, QuadratureConfig};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A subset of the phase plane that can be cut along straight lines.
///
/// Integration goes in vertical slices: for each `q` the region is the
/// union of the `p`-intervals in [`PlaneRegion::slice`].
pub trait PlaneRegion<T: Scalar> {
    /// Sorted, disjoint parameter intervals `{s : origin + s·dir ∈ region}`.
    /// Endpoints may be infinite.
    fn line_intervals(&self, origin: [T; 2], dir: [T; 2]) -> Vec<(T, T)>;

    /// `p`-intervals of the region on the vertical line through `q`.
    fn slice(&self, q: T) -> Vec<(T, T)> {
        self.line_intervals([q, T::zero()], [T::zero(), T::one()])
    }

    /// `q` values where the slice endpoints stop being smooth functions of `q`.
    fn q_breakpoints(&self) -> Vec<T> {
        Vec::new()
    }

    /// True when the region has no interior.
    fn is_empty(&self) -> bool {
        false
    }
}

/// Closed axis-aligned rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect<T> {
    pub q_min: T,
    pub q_max: T,
    pub p_min: T,
    pub p_max: T,
}

impl<T: Scalar> Rect<T> {
    pub fn square(half_width: T) -> Self {
        Self {
            q_min: -half_width,
            q_max: half_width,
            p_min: -half_width,
            p_max: half_width,
        }
    }

    fn valid(&self) -> bool {
        [self.q_min, self.q_max, self.p_min, self.p_max]
            .iter()
            .all(|v| v.is_finite())
            && self.q_min <= self.q_max
            && self.p_min <= self.p_max
    }
}

/// `{s : lo ≤ o + s·d ≤ hi}` as an interval, or `None` if empty.
pub(crate) fn linear_band<T: Scalar>(o: T, d: T, lo: T, hi: T) -> Option<(T, T)> {
    if d == T::zero() {
        return if o >= lo && o <= hi {
            Some((T::neg_infinity(), T::infinity()))
        } else {
            None
        };
    }
    let (a, b) = ((lo - o) / d, (hi - o) / d);
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    if a <= b {
        Some((a, b))
    } else {
        None
    }
}

impl<T: Scalar> PlaneRegion<T> for Rect<T> {
    fn line_intervals(&self, origin: [T; 2], dir: [T; 2]) -> Vec<(T, T)> {
        let q = linear_band(origin[0], dir[0], self.q_min, self.q_max);
        let p = linear_band(origin[1], dir[1], self.p_min, self.p_max);
        match (q, p) {
            (Some(a), Some(b)) => {
                let lo = a.0.max(b.0);
                let hi = a.1.min(b.1);
                if lo < hi {
                    vec![(lo, hi)]
                } else {
                    Vec::new()
                }
            }
            _ => Vec::new(),
        }
    }

    fn q_breakpoints(&self) -> Vec<T> {
        vec![self.q_min, self.q_max]
    }

    fn is_empty(&self) -> bool {
        !(self.q_min < self.q_max && self.p_min < self.p_max)
    }
}

const MAX_HALF_WIDTH: f64 = 1024.0;

/// Smallest power-of-two half-width `L` such that `|f|` sampled on the
/// boundary of `[-L, L]²` is below `threshold`.
fn detect_box<T, F>(f: &F, threshold: T) -> Result<T>
where
    T: Scalar,
    F: Fn(T, T) -> T,
{
    let samples = 128;
    let mut half = T::lit(2.0);
    while half <= T::lit(MAX_HALF_WIDTH) {
        let mut m = T::zero();
        for i in 0..=samples {
            let s = -half + T::lit(2.0) * half * T::from_usize(i).unwrap() / T::from_usize(samples).unwrap();
            for v in [f(s, half), f(s, -half), f(half, s), f(-half, s)] {
                m = m.max(v.abs());
            }
        }
        if m.is_finite() && m < threshold {
            return Ok(half);
        }
        half *= T::lit(2.0);
    }
    Err(Error::NoDecay { cap: MAX_HALF_WIDTH })
}

/// `∫∫_region f(q, p) dq dp`, truncated to a square located by sampling the
/// decay of `f`.
pub fn integrate_region_2d<T, F, R>(f: F, region: &R, cfg: &QuadratureConfig<T>) -> Result<IntegralResult<T>>
where
    T: Scalar,
    F: Fn(T, T) -> T,
    R: PlaneRegion<T> + ?Sized,
{
    cfg.validate()?;
    if region.is_empty() {
        return Ok(IntegralResult {
            value: T::zero(),
            error_estimate: T::zero(),
            evaluations: 0,
        });
    }
    let half = detect_box(&f, cfg.truncation_threshold)?;
    integrate_region_2d_in(f, region, &Rect::square(half), cfg)
}

/// `∫∫_{region ∩ bounds} f(q, p) dq dp` by iterated adaptive quadrature.
///
/// The inner `p` integral runs over the exact slice intervals of the region,
/// so curved boundaries are never approximated by the mesh.
pub fn integrate_region_2d_in<T, F, R>(
    f: F,
    region: &R,
    bounds: &Rect<T>,
    cfg: &QuadratureConfig<T>,
) -> Result<IntegralResult<T>>
where
    T: Scalar,
    F: Fn(T, T) -> T,
    R: PlaneRegion<T> + ?Sized,
{
    cfg.validate()?;
    if !bounds.valid() {
        return Err(Error::InvalidInput(format!("invalid integration box {bounds:?}")));
    }
    if region.is_empty() || bounds.is_empty() {
        return Ok(IntegralResult {
            value: T::zero(),
            error_estimate: T::zero(),
            evaluations: 0,
        });
    }
    let width = bounds.q_max - bounds.q_min;
    let inner_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol / (T::lit(4.0) * width.max(T::one())),
        rel_tol: cfg.rel_tol * T::lit(0.25),
        ..*cfg
    };
    let outer_cfg = QuadratureConfig {
        abs_tol: cfg.abs_tol * T::lit(0.5),
        rel_tol: cfg.rel_tol * T::lit(0.5),
        ..*cfg
    };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner_evals = RefCell::new(0usize);
    let inner_err = RefCell::new(T::zero());

    let slice_integral = |q: T| -> T {
        if failure.borrow().is_some() {
            return T::nan();
        }
        let mut total = T::zero();
        for (lo, hi) in region.slice(q) {
            let lo = lo.max(bounds.p_min);
            let hi = hi.min(bounds.p_max);
            if !(lo < hi) {
                continue;
            }
            match integrate_adaptive_points(|p| f(q, p), &[lo, hi], &inner_cfg) {
                Ok(r) => {
                    total += r.value;
                    *inner_evals.borrow_mut() += r.evaluations;
                    let mut e = inner_err.borrow_mut();
                    *e = e.max(r.error_estimate);
                }
                Err(e) => {
                    *failure.borrow_mut() = Some(e);
                    return T::nan();
                }
            }
        }
        total
    };

    let mut points = vec![bounds.q_min];
    let mut interior: Vec<T> = region
        .q_breakpoints()
        .into_iter()
        .filter(|&b| b > bounds.q_min && b < bounds.q_max)
        .collect();
    interior.sort_by(|a, b| a.partial_cmp(b).unwrap());
    interior.dedup();
    points.extend(interior);
    points.push(bounds.q_max);

    let outer = integrate_adaptive_points(slice_integral, &points, &outer_cfg);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let outer = outer?;
    Ok(IntegralResult {
        value: outer.value,
        error_estimate: outer.error_estimate + inner_err.into_inner() * width,
        evaluations: inner_evals.into_inner().max(1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    struct Quadrant;
    impl PlaneRegion<f64> for Quadrant {
        fn line_intervals(&self, o: [f64; 2], d: [f64; 2]) -> Vec<(f64, f64)> {
            let inf = f64::INFINITY;
            let a = linear_band(o[0], d[0], 0.0, inf);
            let b = linear_band(o[1], d[1], 0.0, inf);
            match (a, b) {
                (Some(a), Some(b)) if a.0.max(b.0) < a.1.min(b.1) => vec![(a.0.max(b.0), a.1.min(b.1))],
                _ => vec![],
            }
        }
        fn q_breakpoints(&self) -> Vec<f64> {
            vec![0.0]
        }
    }

    fn vacuum(q: f64, p: f64) -> f64 {
        (-q * q - p * p).exp() / PI
    }

    #[test]
    fn vacuum_over_quadrant_and_plane() {
        let cfg = QuadratureConfig::planar();
        let r = integrate_region_2d(vacuum, &Quadrant, &cfg).unwrap();
        assert!((r.value - 0.25).abs() < 1e-8, "{}", r.value);
        let big = Rect::square(1e6);
        let r = integrate_region_2d(vacuum, &big, &cfg).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8);
    }

    #[test]
    fn rectangle_of_product() {
        let rect = Rect {
            q_min: 0.0,
            q_max: 1.0,
            p_min: 0.0,
            p_max: 2.0,
        };
        let r = integrate_region_2d_in(
            |q: f64, p: f64| q * p,
            &rect,
            &Rect::square(5.0),
            &QuadratureConfig::planar(),
        )
        .unwrap();
        assert!((r.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn empty_region_is_zero() {
        let flat = Rect {
            q_min: 0.0,
            q_max: 0.0,
            p_min: -1.0,
            p_max: 1.0,
        };
        let r = integrate_region_2d(vacuum, &flat, &QuadratureConfig::planar()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.error_estimate, 0.0);
    }

    #[test]
    fn non_decaying_integrand_fails() {
        let e = integrate_region_2d(|_, _| 1.0, &Quadrant, &QuadratureConfig::planar()).unwrap_err();
        assert!(matches!(e, Error::NoDecay { .. }));
    }

    #[test]
    fn line_band_cases() {
        assert_eq!(
            linear_band(0.5, 0.0, 0.0, 1.0),
            Some((f64::NEG_INFINITY, f64::INFINITY))
        );
        assert_eq!(linear_band(2.0, 0.0, 0.0, 1.0), None);
        assert_eq!(linear_band(0.0, -1.0, 0.0, 1.0), Some((-1.0, 0.0)));
    }
}
