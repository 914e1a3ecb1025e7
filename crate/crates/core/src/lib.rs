//! Private proximity retrieval intersection covering (PPRIC) codes.

pub mod bounds;
pub mod construct;
pub mod covering;
pub mod error;
pub mod metric;
pub mod ppric;
pub mod protocol;
pub mod schemes;
pub mod search;

pub use error::{Error, Result};
pub use metric::{BinaryWord, JohnsonWord, QaryWord, SchemeParams};
pub use ppric::{verify_exact, PpricCode, Verdict};
