use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{Metaplectic, PhasePoint};
use crate::error::{Error, Result};
use crate::quadrature::Rect;
use crate::scalar::Scalar;

/// Pure states with closed-form wavefunctions and Wigner functions.
///
/// The Wigner convention is `W(q,p) = (1/π)∫ ψ̄(q+τ)ψ(q−τ)e^{2ipτ}dτ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum StateSpec<T> {
    /// Number state `n` of the unit oscillator.
    Fock(u32),
    /// Displaced vacuum centred at `(q0, p0)`.
    Coherent { q0: T, p0: T },
    /// `W ∝ exp(−(q−q0)²/σ² − σ²(p−p0)²)`.
    Squeezed { sigma: T, q0: T, p0: T },
    /// `Σ c·|n⟩` with `Σ|c|² = 1` and distinct `n`.
    FockSuperposition(Vec<(Complex<T>, u32)>),
    /// `W = (1/π)exp(−[g11 dq² + 2 g12 dq dp + g22 dp²])` with unit determinant.
    Gaussian { g11: T, g12: T, g22: T, q0: T, p0: T },
}

impl<T: Scalar> StateSpec<T> {
    pub fn coherent(q0: T, p0: T) -> Result<Self> {
        let s = Self::Coherent { q0, p0 };
        s.validate()?;
        Ok(s)
    }

    pub fn squeezed(sigma: T, q0: T, p0: T) -> Result<Self> {
        let s = Self::Squeezed { sigma, q0, p0 };
        s.validate()?;
        Ok(s)
    }

    pub fn superposition(terms: Vec<(Complex<T>, u32)>) -> Result<Self> {
        let s = Self::FockSuperposition(terms);
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |vs: &[T]| vs.iter().all(|v| v.is_finite());
        match self {
            Self::Fock(_) => Ok(()),
            Self::Coherent { q0, p0 } if finite(&[*q0, *p0]) => Ok(()),
            Self::Squeezed { sigma, q0, p0 } if finite(&[*sigma, *q0, *p0]) && *sigma > T::zero() => Ok(()),
            Self::FockSuperposition(terms) => {
                if terms.is_empty() {
                    return Err(Error::InvalidInput("empty superposition".into()));
                }
                let mut ns: Vec<u32> = terms.iter().map(|t| t.1).collect();
                ns.sort_unstable();
                ns.dedup();
                if ns.len() != terms.len() {
                    return Err(Error::InvalidInput("superposition repeats a Fock index".into()));
                }
                let norm: T = terms.iter().map(|t| t.0.norm_sqr()).fold(T::zero(), |a, b| a + b);
                if (norm - T::one()).abs() > T::lit(1e-10) {
                    return Err(Error::InvalidInput(format!("superposition has Σ|c|² = {norm}, not 1")));
                }
                Ok(())
            }
            Self::Gaussian { g11, g12, g22, q0, p0 } if finite(&[*g11, *g12, *g22, *q0, *p0]) => {
                let det = *g11 * *g22 - *g12 * *g12;
                if *g11 > T::zero() && *g22 > T::zero() && (det - T::one()).abs() <= T::lit(1e-10) {
                    Ok(())
                } else {
                    Err(Error::InvalidInput(format!(
                        "Gaussian matrix has determinant {det}, not 1"
                    )))
                }
            }
            _ => Err(Error::InvalidInput(format!("invalid state {self:?}"))),
        }
    }

    /// `(g11, g12, g22, q0, p0)` for the Gaussian families.
    pub fn gaussian_parameters(&self) -> Option<(T, T, T, T, T)> {
        match *self {
            Self::Fock(0) => Some((T::one(), T::zero(), T::one(), T::zero(), T::zero())),
            Self::Coherent { q0, p0 } => Some((T::one(), T::zero(), T::one(), q0, p0)),
            Self::Squeezed { sigma, q0, p0 } => Some(((sigma * sigma).recip(), T::zero(), sigma * sigma, q0, p0)),
            Self::Gaussian { g11, g12, g22, q0, p0 } => Some((g11, g12, g22, q0, p0)),
            _ => None,
        }
    }

    fn max_fock(&self) -> u32 {
        match self {
            Self::Fock(n) => *n,
            Self::FockSuperposition(t) => t.iter().map(|t| t.1).max().unwrap_or(0),
            _ => 0,
        }
    }

    /// Centre and radius of a disc outside which `|W|` and `|ψ|²` are
    /// below about 1e-17.
    pub fn extent(&self) -> (PhasePoint<T>, T) {
        match self.gaussian_parameters() {
            Some((g11, g12, g22, q0, p0)) => {
                let mean = (g11 + g22) / T::lit(2.0);
                let gap = (((g11 - g22) / T::lit(2.0)).powi(2) + g12 * g12).sqrt();
                let lambda_min = (mean + gap).recip();
                (PhasePoint { q: q0, p: p0 }, (T::lit(40.0) / lambda_min).sqrt())
            }
            None => {
                let n = T::lit(self.max_fock() as f64);
                (
                    PhasePoint {
                        q: T::zero(),
                        p: T::zero(),
                    },
                    (T::lit(2.0) * n + T::one()).sqrt() + T::lit(8.0),
                )
            }
        }
    }

    /// Axis-aligned box containing [`StateSpec::extent`].
    pub fn phase_box(&self) -> Rect<T> {
        let (c, r) = self.extent();
        Rect {
            q_min: c.q - r,
            q_max: c.q + r,
            p_min: c.p - r,
            p_max: c.p + r,
        }
    }

    /// Configuration-space wavefunction `ψ(x)`.
    pub fn wavefunction(&self, x: T) -> Complex<T> {
        match self {
            Self::Fock(n) => Complex::new(hermite_functions(*n, x)[*n as usize], T::zero()),
            Self::FockSuperposition(terms) => {
                let fs = hermite_functions(self.max_fock(), x);
                terms.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (c, n)| {
                    acc + *c * fs[*n as usize]
                })
            }
            _ => {
                let (_, g12, g22, q0, p0) = self.gaussian_parameters().unwrap();
                let a = g22.recip();
                let b = g12 / g22;
                let y = x - q0;
                let amp = (a / T::PI()).sqrt().sqrt();
                let exponent = Complex::new(-a * y * y / T::lit(2.0), -b * y * y / T::lit(2.0) + p0 * x);
                exponent.exp() * amp
            }
        }
    }
}

/// Normalized Hermite functions `φ_0(x) … φ_n(x)`.
pub fn hermite_functions<T: Scalar>(n: u32, x: T) -> Vec<T> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let phi0 = T::PI().powf(T::lit(-0.25)) * (-x * x / T::lit(2.0)).exp();
    out.push(phi0);
    if n >= 1 {
        out.push(T::lit(2.0).sqrt() * x * phi0);
    }
    for j in 1..n as usize {
        let jf = T::from_usize(j).unwrap();
        let next = (T::lit(2.0) / (jf + T::one())).sqrt() * x * out[j] - (jf / (jf + T::one())).sqrt() * out[j - 1];
        out.push(next);
    }
    out
}

/// Generalized Laguerre polynomial `L_n^{(α)}(x)`.
pub fn laguerre<T: Scalar>(n: u32, alpha: T, x: T) -> T {
    if n == 0 {
        return T::one();
    }
    let mut prev = T::one();
    let mut cur = T::one() + alpha - x;
    for k in 1..n {
        let kf = T::lit(k as f64);
        let next = ((T::lit(2.0) * kf + T::one() + alpha - x) * cur - (kf + alpha) * prev) / (kf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// `(1/π)∫ φ_m(q+τ)φ_n(q−τ)e^{2ipτ}dτ`.
pub fn cross_wigner<T: Scalar>(m: u32, n: u32, x: PhasePoint<T>) -> Complex<T> {
    let (hi, lo) = if m >= n { (m, n) } else { (n, m) };
    let r2 = x.q * x.q + x.p * x.p;
    let diff = hi - lo;
    let mut ratio = T::one();
    for j in lo + 1..=hi {
        ratio /= T::lit(j as f64);
    }
    let sign = if lo % 2 == 0 { T::one() } else { -T::one() };
    let z = Complex::new(x.q, x.p) * T::lit(2.0).sqrt();
    let value = z.powu(diff)
        * (sign * ratio.sqrt() * (-r2).exp() * laguerre(lo, T::lit(diff as f64), T::lit(2.0) * r2) / T::PI());
    if m >= n {
        value
    } else {
        value.conj()
    }
}

/// Closed-form Wigner function of `state` at `x`.
pub fn wigner_eval<T: Scalar>(state: &StateSpec<T>, x: PhasePoint<T>) -> T {
    match state {
        StateSpec::Fock(n) => {
            let r2 = x.q * x.q + x.p * x.p;
            let sign = if n % 2 == 0 { T::one() } else { -T::one() };
            sign * (-r2).exp() * laguerre(*n, T::zero(), T::lit(2.0) * r2) / T::PI()
        }
        StateSpec::FockSuperposition(terms) => {
            let mut w = T::zero();
            for (i, (cm, m)) in terms.iter().enumerate() {
                w += cm.norm_sqr() * cross_wigner(*m, *m, x).re;
                for (cn, n) in &terms[i + 1..] {
                    // the (m, n) and (n, m) terms are conjugates
                    w += T::lit(2.0) * (cm.conj() * *cn * cross_wigner(*m, *n, x)).re;
                }
            }
            w
        }
        _ => {
            let (g11, g12, g22, q0, p0) = state.gaussian_parameters().unwrap();
            let (dq, dp) = (x.q - q0, x.p - p0);
            (-(g11 * dq * dq + T::lit(2.0) * g12 * dq * dp + g22 * dp * dp)).exp() / T::PI()
        }
    }
}

/// Pushes a Gaussian state through `m`: `W' = W ∘ m⁻¹`.
pub fn apply_metaplectic_state<T: Scalar>(m: &Metaplectic<T>, state: &StateSpec<T>) -> Result<StateSpec<T>> {
    m.validate()?;
    state.validate()?;
    let (g11, g12, g22, q0, p0) = state
        .gaussian_parameters()
        .ok_or_else(|| Error::Unsupported(format!("metaplectic image of non-Gaussian state {state:?}")))?;
    // L⁻¹ = [[δ, −β], [−γ, α]]; G' = L⁻ᵀ G L⁻¹
    let (a, b, c, d) = (m.delta, -m.beta, -m.gamma, m.alpha);
    let n11 = a * (g11 * a + g12 * c) + c * (g12 * a + g22 * c);
    let n12 = a * (g11 * b + g12 * d) + c * (g12 * b + g22 * d);
    let n22 = b * (g11 * b + g12 * d) + d * (g12 * b + g22 * d);
    let centre = m.apply(PhasePoint { q: q0, p: p0 });
    let out = StateSpec::Gaussian {
        g11: n11,
        g12: n12,
        g22: n22,
        q0: centre.q,
        p0: centre.p,
    };
    out.validate()?;
    Ok(out)
}
