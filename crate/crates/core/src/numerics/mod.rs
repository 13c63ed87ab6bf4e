//! Dense complex linear algebra and deterministic randomness.

mod cmatrix;
mod eig;
mod linalg;
mod rng;
mod units;

pub use cmatrix::{outer, vdot, vnorm, vnorm2, CMatrix, C64};
pub use eig::{dominant_eigvec, eig_hermitian, psd_project, DominantEig, HermitianEig};
pub use linalg::{complex_logdet_hpd, solve_real, solve_real_spd};
pub use rng::{derive_seed, Rng};
pub use units::{db_convert, db_to_linear, dbm_to_mw, linear_to_db, DbDirection};
