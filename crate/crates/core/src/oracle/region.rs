use serde::{Deserialize, Serialize};

use super::PhasePoint;
use crate::error::{Error, Result};
use crate::quadrature::planar::linear_band;
use crate::quadrature::PlaneRegion;
use crate::scalar::Scalar;

/// Affine symplectic map `(q, p) ↦ (αq + βp + q0, γq + δp + p0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metaplectic<T> {
    pub alpha: T,
    pub beta: T,
    pub gamma: T,
    pub delta: T,
    pub q0: T,
    pub p0: T,
}

impl<T: Scalar> Metaplectic<T> {
    pub fn new(alpha: T, beta: T, gamma: T, delta: T, q0: T, p0: T) -> Result<Self> {
        let m = Self {
            alpha,
            beta,
            gamma,
            delta,
            q0,
            p0,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let entries = [self.alpha, self.beta, self.gamma, self.delta, self.q0, self.p0];
        if !entries.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidInput("metaplectic entries must be finite".into()));
        }
        let det = self.alpha * self.delta - self.beta * self.gamma;
        if (det - T::one()).abs() > T::lit(1e-12) {
            return Err(Error::InvalidInput(format!("metaplectic determinant is {det}, not 1")));
        }
        Ok(())
    }

    pub fn identity() -> Self {
        Self::linear(T::one(), T::zero(), T::zero(), T::one())
    }

    fn linear(alpha: T, beta: T, gamma: T, delta: T) -> Self {
        Self {
            alpha,
            beta,
            gamma,
            delta,
            q0: T::zero(),
            p0: T::zero(),
        }
    }

    /// Counter-clockwise rotation by `theta`. Quarter turns use exact
    /// cosines and sines.
    pub fn rotation(theta: T) -> Self {
        let quarters = theta / T::FRAC_PI_2();
        let nearest = quarters.round();
        let (c, s) = if (quarters - nearest).abs() < T::lit(1e-14) {
            let r = nearest.to_i64().unwrap_or(0).rem_euclid(4);
            let table = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
            let (c, s) = table[r as usize];
            (T::lit(c), T::lit(s))
        } else {
            (theta.cos(), theta.sin())
        };
        Self::linear(c, -s, s, c)
    }

    /// `(q, p) ↦ (σq, p/σ)`.
    pub fn squeeze(sigma: T) -> Result<Self> {
        if !(sigma > T::zero() && sigma.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "squeeze factor must be positive, got {sigma}"
            )));
        }
        Ok(Self::linear(sigma, T::zero(), T::zero(), sigma.recip()))
    }

    pub fn translation(q0: T, p0: T) -> Self {
        Self {
            q0,
            p0,
            ..Self::identity()
        }
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let a = self;
        let b = other;
        Self {
            alpha: a.alpha * b.alpha + a.beta * b.gamma,
            beta: a.alpha * b.beta + a.beta * b.delta,
            gamma: a.gamma * b.alpha + a.delta * b.gamma,
            delta: a.gamma * b.beta + a.delta * b.delta,
            q0: a.alpha * b.q0 + a.beta * b.p0 + a.q0,
            p0: a.gamma * b.q0 + a.delta * b.p0 + a.p0,
        }
    }

    pub fn inverse(&self) -> Self {
        let det = self.alpha * self.delta - self.beta * self.gamma;
        let (alpha, beta, gamma, delta) = (self.delta / det, -self.beta / det, -self.gamma / det, self.alpha / det);
        Self {
            alpha,
            beta,
            gamma,
            delta,
            q0: -(alpha * self.q0 + beta * self.p0),
            p0: -(gamma * self.q0 + delta * self.p0),
        }
    }

    pub fn apply(&self, x: PhasePoint<T>) -> PhasePoint<T> {
        PhasePoint {
            q: self.alpha * x.q + self.beta * x.p + self.q0,
            p: self.gamma * x.q + self.delta * x.p + self.p0,
        }
    }

    /// The linear part applied to a direction.
    pub fn apply_linear(&self, d: [T; 2]) -> [T; 2] {
        [
            self.alpha * d[0] + self.beta * d[1],
            self.gamma * d[0] + self.delta * d[1],
        ]
    }

    /// Preimage `M⁻¹x`, computed without forming the inverse.
    pub fn pull_back(&self, x: PhasePoint<T>) -> PhasePoint<T> {
        let (dq, dp) = (x.q - self.q0, x.p - self.p0);
        PhasePoint {
            q: self.delta * dq - self.beta * dp,
            p: self.alpha * dp - self.gamma * dq,
        }
    }

    fn pull_back_linear(&self, d: [T; 2]) -> [T; 2] {
        [
            self.delta * d[0] - self.beta * d[1],
            self.alpha * d[1] - self.gamma * d[0],
        ]
    }
}

/// Phase-plane regions with exact membership tests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Region<T> {
    /// `qp ≥ k, q ≥ 0`.
    HyperbolaSingle(T),
    /// `qp ≥ k`: the single region and its rotation by π.
    HyperbolaDouble(T),
    /// `q ≥ 0, p ≥ 0`.
    Quadrant,
    /// `qp ≥ 0`: first and third quadrants.
    DoubleWedge0,
    /// Points whose direction from `vertex` is within `half_angle` of the
    /// axis at `axis_angle`.
    GeneralWedge {
        vertex: PhasePoint<T>,
        axis_angle: T,
        half_angle: T,
    },
    Complement(Box<Region<T>>),
    FullPlane,
    /// `q_min ≤ q ≤ q_max`.
    VerticalStrip {
        q_min: T,
        q_max: T,
    },
    /// The image `map(base)`.
    Transformed {
        map: Metaplectic<T>,
        base: Box<Region<T>>,
    },
}

impl<T: Scalar> Region<T> {
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::HyperbolaSingle(k) | Self::HyperbolaDouble(k) if !(*k >= T::zero() && k.is_finite()) => Err(
                Error::InvalidInput(format!("hyperbola k must be finite and nonnegative, got {k}")),
            ),
            Self::GeneralWedge {
                vertex,
                axis_angle,
                half_angle,
            } => {
                if !(vertex.q.is_finite() && vertex.p.is_finite() && axis_angle.is_finite()) {
                    return Err(Error::InvalidInput("wedge vertex and axis must be finite".into()));
                }
                if !(*half_angle > T::zero() && *half_angle <= T::FRAC_PI_2()) {
                    return Err(Error::InvalidInput(format!(
                        "wedge half-angle must lie in (0, π/2], got {half_angle}"
                    )));
                }
                Ok(())
            }
            Self::VerticalStrip { q_min, q_max } if !(q_min.is_finite() && q_max.is_finite() && q_min <= q_max) => {
                Err(Error::InvalidInput("strip bounds must be finite and ordered".into()))
            }
            Self::Complement(b) => b.validate(),
            Self::Transformed { map, base } => {
                map.validate()?;
                base.validate()
            }
            _ => Ok(()),
        }
    }

    pub fn complement(self) -> Self {
        Self::Complement(Box::new(self))
    }

    pub fn contains(&self, x: PhasePoint<T>) -> bool {
        let (q, p) = (x.q, x.p);
        match self {
            Self::HyperbolaSingle(k) => q >= T::zero() && q * p >= *k,
            Self::HyperbolaDouble(k) => q * p >= *k,
            Self::Quadrant => q >= T::zero() && p >= T::zero(),
            Self::DoubleWedge0 => q * p >= T::zero(),
            Self::GeneralWedge {
                vertex,
                axis_angle,
                half_angle,
            } => {
                let (along, perp) = wedge_frame(*vertex, *axis_angle, q, p);
                let (s, c) = (half_angle.sin(), half_angle.cos());
                along * s - perp * c >= T::zero() && along * s + perp * c >= T::zero()
            }
            Self::Complement(b) => !b.contains(x),
            Self::FullPlane => true,
            Self::VerticalStrip { q_min, q_max } => q >= *q_min && q <= *q_max,
            Self::Transformed { map, base } => base.contains(map.pull_back(x)),
        }
    }

    // q-coordinates where the vertical slices of `map(self)` change shape.
    fn q_breaks_under(&self, m: &Metaplectic<T>, out: &mut Vec<T>) {
        let origin = PhasePoint {
            q: T::zero(),
            p: T::zero(),
        };
        match self {
            Self::HyperbolaSingle(k) | Self::HyperbolaDouble(k) => {
                out.push(m.apply(origin).q);
                // vertical tangents of the image of the branch (t, k/t)
                let ratio = m.beta * *k / m.alpha;
                if *k > T::zero() && ratio > T::zero() && ratio.is_finite() {
                    let t = ratio.sqrt();
                    out.push(m.q0 + T::lit(2.0) * m.alpha * t);
                    if matches!(self, Self::HyperbolaDouble(_)) {
                        out.push(m.q0 - T::lit(2.0) * m.alpha * t);
                    }
                }
            }
            Self::Quadrant | Self::DoubleWedge0 => out.push(m.apply(origin).q),
            Self::GeneralWedge { vertex, .. } => out.push(m.apply(*vertex).q),
            Self::Complement(b) => b.q_breaks_under(m, out),
            Self::FullPlane => {}
            Self::VerticalStrip { q_min, q_max } => {
                if m.beta == T::zero() {
                    out.push(m.alpha * *q_min + m.q0);
                    out.push(m.alpha * *q_max + m.q0);
                }
            }
            Self::Transformed { map, base } => base.q_breaks_under(&m.compose(map), out),
        }
    }
}

fn wedge_frame<T: Scalar>(vertex: PhasePoint<T>, axis: T, q: T, p: T) -> (T, T) {
    let (s, c) = (axis.sin(), axis.cos());
    let (dq, dp) = (q - vertex.q, p - vertex.p);
    (dq * c + dp * s, -dq * s + dp * c)
}

/// Applies `m` to `region`. Nested maps are composed into one.
pub fn apply_metaplectic<T: Scalar>(m: &Metaplectic<T>, region: &Region<T>) -> Result<Region<T>> {
    m.validate()?;
    region.validate()?;
    Ok(match region {
        Region::Transformed { map, base } => Region::Transformed {
            map: m.compose(map),
            base: base.clone(),
        },
        other => Region::Transformed {
            map: *m,
            base: Box::new(other.clone()),
        },
    })
}

type Intervals<T> = Vec<(T, T)>;

fn whole<T: Scalar>() -> Intervals<T> {
    vec![(T::neg_infinity(), T::infinity())]
}

fn band<T: Scalar>(o: T, d: T, lo: T, hi: T) -> Intervals<T> {
    linear_band(o, d, lo, hi).into_iter().collect()
}

// {s : a + b·s ≥ 0}
fn half_line<T: Scalar>(a: T, b: T) -> Intervals<T> {
    band(a, b, T::zero(), T::infinity())
}

fn intersect<T: Scalar>(x: &[(T, T)], y: &[(T, T)]) -> Intervals<T> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < x.len() && j < y.len() {
        let lo = x[i].0.max(y[j].0);
        let hi = x[i].1.min(y[j].1);
        if lo <= hi {
            out.push((lo, hi));
        }
        if x[i].1 < y[j].1 {
            i += 1;
        } else {
            j += 1;
        }
    }
    out
}

fn complement_of<T: Scalar>(x: &[(T, T)]) -> Intervals<T> {
    let mut out = Vec::new();
    let mut start = T::neg_infinity();
    for &(lo, hi) in x {
        if lo > start {
            out.push((start, lo));
        }
        start = start.max(hi);
    }
    if start < T::infinity() {
        out.push((start, T::infinity()));
    }
    out
}

// {s : A s² + B s + C ≥ 0}
fn quadratic_set<T: Scalar>(a: T, b: T, c: T) -> Intervals<T> {
    if a == T::zero() {
        return half_line(c, b);
    }
    let disc = b * b - T::lit(4.0) * a * c;
    if disc < T::zero() {
        return if a > T::zero() { whole() } else { Vec::new() };
    }
    let sq = disc.sqrt();
    let qv = -T::lit(0.5) * (b + b.signum() * sq);
    let (mut r1, mut r2) = if qv == T::zero() {
        (T::zero(), T::zero())
    } else {
        (qv / a, c / qv)
    };
    if r1 > r2 {
        std::mem::swap(&mut r1, &mut r2);
    }
    if a > T::zero() {
        vec![(T::neg_infinity(), r1), (r2, T::infinity())]
    } else {
        vec![(r1, r2)]
    }
}

// {s : q(s)·p(s) ≥ k} along o + s·d
fn product_at_least<T: Scalar>(o: [T; 2], d: [T; 2], k: T) -> Intervals<T> {
    quadratic_set(d[0] * d[1], o[0] * d[1] + o[1] * d[0], o[0] * o[1] - k)
}

impl<T: Scalar> PlaneRegion<T> for Region<T> {
    fn line_intervals(&self, o: [T; 2], d: [T; 2]) -> Vec<(T, T)> {
        match self {
            Self::HyperbolaSingle(k) => intersect(&product_at_least(o, d, *k), &half_line(o[0], d[0])),
            Self::HyperbolaDouble(k) => product_at_least(o, d, *k),
            Self::Quadrant => intersect(&half_line(o[0], d[0]), &half_line(o[1], d[1])),
            Self::DoubleWedge0 => product_at_least(o, d, T::zero()),
            Self::GeneralWedge {
                vertex,
                axis_angle,
                half_angle,
            } => {
                let (a0, p0) = wedge_frame(*vertex, *axis_angle, o[0], o[1]);
                let zero = PhasePoint {
                    q: T::zero(),
                    p: T::zero(),
                };
                let (ad, pd) = wedge_frame(zero, *axis_angle, d[0], d[1]);
                let (s, c) = (half_angle.sin(), half_angle.cos());
                intersect(
                    &half_line(a0 * s - p0 * c, ad * s - pd * c),
                    &half_line(a0 * s + p0 * c, ad * s + pd * c),
                )
            }
            Self::Complement(b) => complement_of(&b.line_intervals(o, d)),
            Self::FullPlane => whole(),
            Self::VerticalStrip { q_min, q_max } => band(o[0], d[0], *q_min, *q_max),
            Self::Transformed { map, base } => {
                let o2 = map.pull_back(PhasePoint { q: o[0], p: o[1] });
                base.line_intervals([o2.q, o2.p], map.pull_back_linear(d))
            }
        }
    }

    fn q_breakpoints(&self) -> Vec<T> {
        let mut out = Vec::new();
        self.q_breaks_under(&Metaplectic::identity(), &mut out);
        out.retain(|v| v.is_finite());
        out
    }

    fn is_empty(&self) -> bool {
        match self {
            Self::Complement(b) => matches!(**b, Self::FullPlane),
            Self::Transformed { base, .. } => base.is_empty(),
            _ => false,
        }
    }
}
