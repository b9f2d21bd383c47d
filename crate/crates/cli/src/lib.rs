//! File formats, pipeline stages and reports around `phonvar-core`.

pub mod error;
pub mod formats;
pub mod heatmap;
pub mod manifest;
pub mod pipeline;
pub mod report;

pub use error::{Error, Result};
