//! Enhanced moduli of the Dwork family: charts, Gauss-Manin connection,
//! modular vector fields, the Lie algebra of the symmetry group and its
//! action, plus the constant-matrix block construction for threefolds.

pub mod chart;
pub mod connection;
pub mod crosscheck;
pub mod cy3;
pub mod dworkgeo;
pub mod error;
pub mod groupaction;
pub mod liealg;
pub mod model;
pub mod modular;

pub use chart::{chart_spec, solve_dependents, ChartLayout, ChartSpec};
pub use connection::{contract, full_connection, Connection, VecField};
pub use dworkgeo::{base_connection, intersection_matrix, moduli_dim, phi_matrix, stirling2, CMode, DworkParams, OneFormMat};
pub use error::{DworkError, Result};
pub use model::{model, Model};
