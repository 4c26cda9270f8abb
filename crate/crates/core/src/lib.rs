//! Measures and sections of origin-symmetric star bodies in `R^n` and `C^n`, computed through polar
//! coordinates and spherical Radon transforms, plus numerical verifiers for slicing and stability
//! inequalities.
//!
//! The crate is `no_std` (it needs `alloc`). Everything is sequential and deterministic for a given
//! [`QuadratureSpec`] and [`SearchConfig`].
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod body;
pub mod complex;
pub mod constants;
pub mod density;
pub mod error;
pub mod grassmann;
pub mod john;
pub mod linalg;
pub mod oracle;
pub mod quadrature;
pub mod sections;
pub mod verify;

pub use body::{BodyKind, StarBody, CONTAINMENT_TOL};
pub use complex::{complex_hyperplane_frame, is_density_rtheta_invariant, is_rtheta_invariant, rtheta_apply, rtheta_symmetrize, ComplexStructure, InvarianceReport};
pub use constants::{ball_volume, c_n, c_nk, d_n, sphere_measure, Factor, SlicingConstants};
pub use density::{Density, DensityKind};
pub use error::{Error, Result};
pub use grassmann::{haar_sample, max_complex_section, max_hyperplane_section, max_section, MaxSectionResult, SearchConfig, Subspace};
pub use john::{check_sandwich, sandwich_ellipsoid, verify_sandwich, SANDWICH_TOL, SandwichEllipsoid, SandwichReport};
pub use oracle::{mc_body_measure, mc_body_volume, mc_section_measure, McEstimate};
pub use quadrature::{radial_integral, sphere_rule, subsphere_rule, QuadratureSpec, Scheme, SphericalRule, Symmetry};
pub use sections::{body_measure, body_volume, complex_radon, radon_transform, section_excess, section_measure, section_volume, IntegralResult};
pub use verify::{
    check_km, check_slicing_complex, check_slicing_real, check_stability_complex, check_stability_real, is_certified_complex, is_certified_real, ProofStep, Relation,
    SearchSummary, Theorem, VerificationReport, ERROR_SAFETY, MARGIN_FLOOR,
};
