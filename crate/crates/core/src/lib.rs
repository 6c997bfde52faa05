pub mod algebra;
pub mod bench;
pub mod dyck;
pub mod dyck_range;
pub mod error;
pub mod hierarchy;
pub mod meter;
pub mod oracle;
pub mod ranked_set;
pub mod regular;
pub mod script;
pub mod starfree;
pub mod string_eq;
pub mod word;

pub use error::{Error, Result};
pub use meter::WorkMeter;
pub use ranked_set::RankedSet;
pub use word::{Alphabet, Change, DynamicWord, Letter, Symbol};
