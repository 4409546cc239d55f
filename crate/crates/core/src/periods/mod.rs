//! `ξ^{G/P}` from Weyl-group periods: period terms, numeric iterated
//! residues, normalization, functional-equation checks and zero search.

mod closed;
mod norm;
mod residue;
mod spec;
mod terms;
mod zeros;

pub use closed::{sl3_closed_form, sl3_expected_ratio};
pub use norm::{
    calibrate_normalization, calibrate_spec, eval_zeta_gp, fe_check, fe_deviation, norm_for_centre,
    sample_im_range, Calibration, CalibrationOptions, FeReport, FeSample, ZetaFunction, MIN_CLEARANCE,
};
pub use residue::{
    clearing_factors_in_s, eval_structure, identity_pole, iterated_residue, residue_structure, LinearInS,
    ResidueEngine, ResidueOptions, ResidueValue, RestrictedTerm,
};
pub use spec::{default_radii, parabolic_name, parse_parabolic, ClearingFactor, NormSpec, ZetaSpec};
pub use terms::{build_period_terms, eval_period, eval_term, AffineForm, PeriodTerm};
pub use zeros::{find_zeros, find_zeros_of, LocatedZero, ZeroOptions, ZeroReport};
