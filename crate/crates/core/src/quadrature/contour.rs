use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::IntegralResult;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Circle `|z| = radius` sampled at `nodes` equispaced points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec<T> {
    pub radius: T,
    pub nodes: usize,
}

impl<T: Scalar> Default for ContourSpec<T> {
    fn default() -> Self {
        Self {
            radius: T::one(),
            nodes: 256,
        }
    }
}

/// Largest node count the doubling loop will try.
pub const MAX_CONTOUR_NODES: usize = 1 << 16;

impl<T: Scalar> ContourSpec<T> {
    pub fn new(radius: T, nodes: usize) -> Result<Self> {
        let s = Self { radius, nodes };
        s.validate()?;
        Ok(s)
    }

    /// The circle must stay inside `|z| < π`, where the nearest poles of the
    /// kernel integrand sit.
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > T::zero() && self.radius < T::PI()) {
            return Err(Error::InvalidInput(format!(
                "contour radius must lie in (0, π), got {}",
                self.radius
            )));
        }
        if self.nodes < 16 || !self.nodes.is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "contour node count must be even and at least 16, got {}",
                self.nodes
            )));
        }
        Ok(())
    }
}

struct Sums<T> {
    sum: Complex<T>,
    max_mag: T,
}

// Σ g(z_j)·z_j over j = offset, offset + stride, … < n, with z_j = ρ e^{2πij/n}.
fn partial_sum<T, G>(g: &G, radius: T, n: usize, offset: usize, stride: usize) -> Result<Sums<T>>
where
    T: Scalar,
    G: Fn(Complex<T>) -> Complex<T>,
{
    let two_pi = T::TAU();
    let nf = T::from_usize(n).unwrap();
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut max_mag = T::zero();
    let mut j = offset;
    while j < n {
        let theta = two_pi * T::from_usize(j).unwrap() / nf;
        let z = Complex::from_polar(radius, theta);
        let v = g(z) * z;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFiniteIntegrand {
                abscissa: theta.as_f64(),
            });
        }
        max_mag = max_mag.max(v.norm());
        sum += v;
        j += stride;
    }
    Ok(Sums { sum, max_mag })
}

fn scaled<T: Scalar>(sum: Complex<T>, n: usize) -> Complex<T> {
    // ∮ g dz = ∫ g(ρe^{iθ}) iρe^{iθ} dθ
    Complex::new(T::zero(), T::TAU() / T::from_usize(n).unwrap()) * sum
}

fn noise_floor<T: Scalar>(max_mag: T) -> T {
    T::lit(16.0) * T::epsilon() * T::TAU() * max_mag
}

fn default_tol<T: Scalar>() -> T {
    T::lit(1e-12).max(T::lit(64.0) * T::epsilon())
}

/// `∮ g(z) dz` on the circle given by `spec`, by the periodic trapezoid rule.
///
/// The error estimate is the difference between the `N` and `N/2` node
/// results. Fails with [`Error::ContourNotConverged`] when that difference
/// exceeds `1e-12·max(1, |I|)` and the rounding floor set by the largest sample.
pub fn integrate_closed_circle<T, G>(g: G, spec: &ContourSpec<T>) -> Result<IntegralResult<T, Complex<T>>>
where
    T: Scalar,
    G: Fn(Complex<T>) -> Complex<T>,
{
    spec.validate()?;
    let n = spec.nodes;
    let even = partial_sum(&g, spec.radius, n, 0, 2)?;
    let odd = partial_sum(&g, spec.radius, n, 1, 2)?;
    let full = scaled(even.sum + odd.sum, n);
    let half = scaled(even.sum, n / 2);
    let discrepancy = (full - half).norm();
    let floor = noise_floor(even.max_mag.max(odd.max_mag));
    let tol = default_tol::<T>() * full.norm().max(T::one());
    if discrepancy > tol.max(floor) {
        return Err(Error::ContourNotConverged {
            re: full.re.as_f64(),
            im: full.im.as_f64(),
            discrepancy: discrepancy.as_f64(),
            nodes: n,
        });
    }
    Ok(IntegralResult {
        value: full,
        error_estimate: discrepancy,
        evaluations: n,
    })
}

/// As [`integrate_closed_circle`] but doubles the node count from
/// `spec.nodes` until two successive results agree to `tol·max(1, |I|)`
/// (or to the rounding floor), up to `max_nodes`.
///
/// The returned `evaluations` is the final node count.
pub fn integrate_closed_circle_adaptive<T, G>(
    g: G,
    spec: &ContourSpec<T>,
    tol: T,
    max_nodes: usize,
) -> Result<IntegralResult<T, Complex<T>>>
where
    T: Scalar,
    G: Fn(Complex<T>) -> Complex<T>,
{
    spec.validate()?;
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput("contour tolerance must be positive".into()));
    }
    let max_nodes = max_nodes.max(spec.nodes);
    let mut n = spec.nodes / 2;
    let first = partial_sum(&g, spec.radius, n, 0, 1)?;
    let mut sum = first.sum;
    let mut max_mag = first.max_mag;
    let mut prev = scaled(sum, n);
    loop {
        let fresh = partial_sum(&g, spec.radius, 2 * n, 1, 2)?;
        sum += fresh.sum;
        max_mag = max_mag.max(fresh.max_mag);
        n *= 2;
        let cur = scaled(sum, n);
        let discrepancy = (cur - prev).norm();
        let bound = (tol * cur.norm().max(T::one())).max(noise_floor(max_mag));
        if discrepancy <= bound {
            return Ok(IntegralResult {
                value: cur,
                error_estimate: discrepancy,
                evaluations: n,
            });
        }
        if 2 * n > max_nodes {
            return Err(Error::ContourNotConverged {
                re: cur.re.as_f64(),
                im: cur.im.as_f64(),
                discrepancy: discrepancy.as_f64(),
                nodes: n,
            });
        }
        prev = cur;
    }
}
