//! Family sweeps, the empirical λ envelope, Step-1 ratio fits and the
//! flat-collapse study.

pub mod collapse;
pub mod family;
pub mod fit;
pub mod sweep;

pub use collapse::{collapse_csv, collapse_study, CollapseRow, COLLAPSE_CSV_HEADER};
pub use family::{shipped_families, BodySpec, FamilyKind, FamilySpec};
pub use fit::{envelope, lambda_at, step_one_fit, EnvelopeBin, EnvelopeEstimate, RatioRange, SlopeFit, StepOneFit};
pub use sweep::{analyze_body, sweep, sweep_all, to_csv, to_json, SweepRow, CSV_HEADER};
