//! Parameter algebra, identities and hypergeometric reductions of the general
//! Heun equation
//!
//! ```text
//! H'' + (Γ/z + Δ/(z-1) + ε/(z-d)) H' + (abz - q) / (z(z-1)(z-d)) H = 0,
//! a + b + 1 = Γ + Δ + ε,
//! ```
//!
//! together with the numerical machinery (Frobenius series, Gauss 2F1,
//! quadrature) used to certify every reduction on a grid.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Modules import `num_traits::Float` for libm-backed f64 methods. When another
// crate in the build enables `std` those methods become inherent, hence the
// `allow(unused_imports)` next to each such import.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod identities;
pub mod maps;
pub mod numerics;
pub mod params;
pub mod physics;
pub mod reduction;
pub mod scalar;
pub mod verification;

pub use error::Error;
pub use identities::{apply_line17, apply_line5, apply_line9, d_orbit, transport_to, IdentityId, TransformResult};
pub use maps::{AffineFactor, MobiusMap, PowerPrefactor, RationalMap};
pub use params::{make_params, validate, HeunParams, Validity, Violation};
pub use reduction::{
    catalog_pairs, detect_cases, CaseTag, HypergeometricForm, QuadratureDescriptor, ReducedForm,
    ReductionEntry, ReductionReport,
};
pub use scalar::C64;
pub use verification::{GridSpec, VerificationReport};
