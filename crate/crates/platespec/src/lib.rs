//! Fourier-side spectral analysis of generalized thermoelastic plate systems
//! with and without structural damping.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod apps;
pub mod cubic;
pub mod diag;
pub mod eigen;
pub mod error;
pub mod evolve;
pub mod expm;
pub mod mat3;
pub(crate) mod par;
pub mod params;
pub mod profiles;
pub mod quadrature;
pub mod rates;
pub mod symbol;

pub use error::{Error, Result};
pub use evolve::{DataFamily, InitialData, SpectralState};
pub use mat3::{ComplexMat3, Vec3, C64};
pub use params::{SystemParams, Zone, ZonePartition};
pub use quadrature::RadialQuadrature;
