//! Exact combinatorics of posets of shuffles: words and covers, graded poset
//! machinery, the chain labeling and its local symmetric-group action, flag
//! quasisymmetric functions, and multiplicative functions on the infinite
//! poset of shuffles via truncated bivariate series.

pub mod action;
pub mod arith;
pub mod error;
pub mod labeling;
pub mod poset;
pub mod series;
pub mod shuffle;
pub mod symfunc;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use poset::{ElemId, RankedPoset};
pub use shuffle::ShufflePoset;
pub use word::{Letter, ShuffleContext, ShuffleWord};
