mod batch;
mod checks;
mod eigen;
mod field;
mod quad_cft;
mod quadrature;

pub use batch::{ChannelBatch, ChannelKey, PolyGaussian};
pub use checks::{
    eigen_relation_check, plancherel_batch, plancherel_check, plancherel_quadrature, plancherel_spectral, scaling_check,
    EigenRelationRow, PlancherelReport, QuadratureSetup, ScalingReport, SOURCE_PRUNE,
};
pub use eigen::{
    analyze, cft_spectral, cft_spectral_field, closed_form_norm_sq, eigenfunction, eigenvalue, gaussian_coeffs,
    indices_up_to, monogenic_dim, numeric_basis, synthesize, EigenIndex, Eigenfunction,
    ExpansionEvaluator, Parity, Sign, SpectralCoeffs,
};
pub use field::{FieldJson, SampledField};
pub use quad_cft::{cft_minus_quadrature, kernel_channel_sums, transform_params, ChannelSums, TRANSFORM_K_MAX};
pub use quadrature::{
    canonical_radius, gauss_hermite_1d, radius_classes, QuadratureRule, RuleKind, RuleSpec,
};
