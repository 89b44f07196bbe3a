//! Exact Hilbert-function computations for subvarieties of Veronese
//! varieties: Macaulay bounds, the surface realizability criterion with
//! explicit witnesses, a rank oracle on explicit point sets, and the
//! complete-intersection classification.

pub mod ci;
pub mod error;
pub mod format;
pub mod linalg;
pub mod macaulay;
pub mod realization;
pub mod sequences;
pub mod surface;
pub mod veronese;

pub use error::{Error, Result};
pub use sequences::{DeltaSequence, DeltaTail, HilbertSequence, HilbertTail};
pub use veronese::VeroneseParams;
