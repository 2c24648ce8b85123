//! Best-possible bounds on quasiprobability integrals of Wigner functions
//! over hyperbolic regions, infinite wedges and double wedges.
//!
//! * [`kernels`]: the functions `u`, `d`, `a`, `b` and the contour residue `R`.
//! * [`spectrum`]: the 2×2 reduction on each ω-eigenspace.
//! * [`bounds`]: infimum and supremum of the spectrum over ω, and k-sweeps.
//! * [`oracle`]: Wigner functions, direct qpis and the region-operator expectation.
//! * [`quadrature`]: the integration engine shared by all of the above.
//!
//! Everything is generic over [`Scalar`]; the `*64` aliases fix it to `f64`.

#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod kernels;
pub mod oracle;
pub mod quadrature;
pub mod scalar;
pub mod spectrum;

pub use bounds::{optimize_bounds, sweep, wedge_equivalence, RegionFamily, SweepKind};
pub use error::{Error, Result};
pub use kernels::{eval_a, eval_b, eval_d, eval_kernels, eval_u, residue_r};
pub use oracle::{
    containment_check, expectation_region_operator, qpi, wigner_eval, Metaplectic, PhasePoint, Region, StateSpec,
};
pub use scalar::Scalar;
pub use spectrum::{spectrum_double, spectrum_single, spectrum_wedge};

pub type BoundsResult64 = bounds::BoundsResult<f64>;
pub type OptimizerConfig64 = bounds::OptimizerConfig<f64>;
pub type RegionFamily64 = bounds::RegionFamily<f64>;
pub type KernelConfig64 = kernels::KernelConfig<f64>;
pub type SpectralKernels64 = kernels::SpectralKernels<f64>;
pub type SpectrumPoint64 = spectrum::SpectrumPoint<f64>;
pub type QuadratureConfig64 = quadrature::QuadratureConfig<f64>;
pub type PhasePoint64 = oracle::PhasePoint<f64>;
pub type Region64 = oracle::Region<f64>;
pub type StateSpec64 = oracle::StateSpec<f64>;
pub type Metaplectic64 = oracle::Metaplectic<f64>;
pub type QpiResult64 = oracle::QpiResult<f64>;
pub type ContainmentReport64 = oracle::ContainmentReport<f64>;
