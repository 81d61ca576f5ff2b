//! Test subsets in free groups and the detection-probability machinery
//! around them: constructions (subset-product, random syndrome,
//! amplification, composition, expander doubling), certificates that
//! lower-bound the detection probability over all groups of a given rank,
//! exact evaluation in small finite quotients, and the abelianization
//! bridge to classical linear codes.

pub mod abelian;
pub mod certify;
pub mod constructions;
pub mod error;
pub mod expanders;
pub mod groups;
pub mod rng;
pub mod words;

pub use error::{Error, Result};
pub use words::{length_stats, LengthStats, Word, WordSet};
