//! Channel generators: Rician links, UAV array responses, IRS cascades,
//! movable-antenna banks, delay-Doppler matrices and CSI perturbations.

mod dd;
mod fading;
mod geometry;
mod irs;
mod mfa;

pub use dd::{dd_channel, ddma_indicator, DdPath};
pub use fading::{gen_rician, perturb_csi, RicianParams, UncertaintyModel};
pub use geometry::{uav_angles, uav_user_channel, ula_steering, upa_steering, Geometry, SPEED_OF_LIGHT};
pub use irs::{irs_effective_channel, phase_matrix};
pub use mfa::{mfa_channel, mfa_stacked_bank, selection_from_indices, MfaCandidateSet};

use crate::numerics::CMatrix;

/// Which domain a channel matrix lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelDomain {
    Frequency,
    Spatial,
    DelayDoppler,
    Cascaded,
}

/// A channel matrix tagged with its domain and a short note on how it was produced.
#[derive(Debug, Clone)]
pub struct Channel {
    pub matrix: CMatrix,
    pub domain: ChannelDomain,
    pub provenance: String,
}
