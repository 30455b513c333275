//! Simulation kernels for azimuthal phase plates acting on the
//! orbital-angular-momentum (OAM) space of light.
//!
//! The crate models spiral, step and binary-sector plates as unitary
//! operators on angular states, derives single-analyzer overlap curves and
//! two-photon coincidence fringes, evaluates CHSH Bell parameters (in
//! floating point and exact rational arithmetic), searches binary masks for
//! maximal violation, and decomposes plate outputs into Laguerre-Gaussian
//! modes. Every closed form has an independent quadrature oracle in
//! [`oracle`].

// `!(x > 0.0)` is deliberate: it rejects NaN as well
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(unknown_lints, clippy::manual_is_multiple_of)]

pub mod angle;
pub mod angular;
pub mod bell;
pub mod error;
pub mod io;
pub mod lg;
pub mod oracle;
pub mod overlap;
pub mod plates;
pub mod quadrature;
pub mod sectors;
pub mod special;
pub mod twophoton;

pub use angular::{
    inner_product, oam_spectrum, to_sampled, AngularGrid, AngularWavefunction, ClosedForm, NonIntegerOamState,
    OamIndex, OamSpectrum, Sampled,
};
pub use bell::search::{search_max_s, MaskSearchResult, SearchConfig};
pub use bell::{
    chsh_s, coincidence_probability, e_correlation, BellResult, BellSettings, ClosedFringe, CoincidenceModel,
};
pub use error::{OamError, Result};
pub use lg::decompose::{decompose_auto, decompose_plate_output, DecomposeWindow, LgDecomposition};
pub use lg::farfield::{far_field, FarFieldImage, FarFieldMetrics};
pub use lg::{lg_amplitude, lg_overlap, LgMode};
pub use oracle::{verify_bell, verify_overlap, OracleReport};
pub use overlap::{
    binary_mask_overlap, sample_curve, spiral_overlap_amplitude, spiral_overlap_probability, step_overlap_probability,
    ClosedFormId, OverlapCurve,
};
pub use plates::{PhasePlate, PlateDecomposition};
pub use sectors::SectorSet;
pub use twophoton::{
    coincidence_amplitude, coincidence_fringe, collapse_idler, schmidt_pairing, AnalyzerSetting, CoincidenceFringe,
    TwoPhotonState,
};
