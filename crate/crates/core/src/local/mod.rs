//! Local analysis at equilibria and the analytic cycle criteria.

mod dulac;
mod hopf;
mod hyperbolic;
mod uniqueness;

pub use dulac::{dulac_check, DulacConclusion, DulacReport};
pub use hopf::{hopf_analysis, lyapunov_procedural, procedural_normal_form, HopfData, MultilinearForms, NormalForm};
pub use hyperbolic::{classify_hyperbolic, classify_semihyperbolic, ZERO_BAND};
pub use uniqueness::{uniqueness_check, UniquenessConditions, UniquenessReport};
