//! Streaming summability analysis: Cesàro and strong Cesàro means, block
//! means over geometric partitions of the positive integers, asymptotic
//! density estimates for integer sets, and finite-horizon checks of the
//! equivalences between them.

pub mod analysis;
pub mod blocks;
pub mod cli;
pub mod compensated;
pub mod density;
pub mod error;
pub mod export;
pub mod seqcore;
pub mod summability;

pub use error::{Error, Result};
pub use seqcore::{IndicatorSet, RunList, SequenceSource};
