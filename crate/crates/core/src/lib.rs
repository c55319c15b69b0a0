//! Global dynamics of the cubic predator-prey Kolmogorov system
//!
//! ```text
//! ẋ = x(−x² + (1−b)x − y + b)
//! ẏ = y((c−δ)x − δb)
//! ```
//!
//! on the closed positive quadrant of the Poincaré disc.
//!
//! The crate is split along the analysis pipeline:
//!
//! - [`model`]: parameters, the affine field, finite equilibria and the
//!   parameter-space case classification.
//! - [`compactify`]: polynomial systems, Poincaré charts, infinite
//!   equilibria and the horizontal blow-up of the degenerate point at the
//!   end of the y-axis.
//! - [`local`]: hyperbolic/semi-hyperbolic classification, the Hopf
//!   pipeline with the first Lyapunov coefficient, Dulac and uniqueness
//!   checks.
//! - [`numerics`]: adaptive Dormand–Prince integration with chart
//!   switching, return maps, limit-cycle detection and the parameter scan.
//! - [`portrait`]: global portrait assembly, SVG rendering, JSON report and
//!   the command line front end.

pub mod compactify;
pub mod error;
pub mod local;
pub mod model;
pub mod numerics;
pub mod portrait;

pub use error::{Error, Result};
pub use model::{CaseLabel, Params, Point2};
