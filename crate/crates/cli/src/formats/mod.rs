//! Text formats read and written by the pipeline.

pub mod annotation_csv;
pub mod grid;
pub mod inventory;
pub mod lexicon;
pub mod profile;
pub mod tables;
pub mod textgrid;
