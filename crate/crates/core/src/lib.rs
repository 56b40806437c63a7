//! Numeric tools for the contact geometry of thermodynamic phase-space.
//!
//! * [`phasespace`]: Darboux coordinates, the contact form, the Reeb field.
//! * [`flows`]: contact Hamiltonian fields, RK4 flows, discrete Legendre maps.
//! * [`metriclab`]: phase-space metric families and symmetry residuals.
//! * [`equilibrium`]: Legendre embeddings, induced metrics, scalar curvature.
//! * [`expr`] and [`registry`]: user-supplied metric functions and potentials.

pub mod equilibrium;
pub mod error;
pub mod expr;
pub mod fd;
pub mod flows;
pub mod metriclab;
pub mod phasespace;
pub mod registry;
pub mod sampling;

pub use error::{CtlError, Result};
pub use phasespace::DarbouxPoint;
