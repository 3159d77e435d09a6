//! Bias of the sample-maximum ("state of the art") score on public leaderboards.

pub mod auc;
pub mod binomial;
pub mod cli;
pub mod dependent;
pub mod error;
pub mod exact;
pub mod io;
pub mod pipeline;
pub mod poisson_binomial;
pub mod sota;
pub mod stream;

pub use error::{Error, Result};
