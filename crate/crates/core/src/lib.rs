//! Phoneme-level analysis of ASR output.
//!
//! Expected (prompt) and observed (ASR transcript) phoneme sequences are
//! aligned with a weighted edit distance, the resulting edit operations are
//! counted into per-speaker confusion matrices, and those matrices are
//! compared against human annotations or clustered across speakers.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! everything touching the filesystem live in the `phonvar` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod alignment;
pub mod annotations;
pub mod clustering;
pub mod confusion;
mod error;
pub mod inventory;
pub mod lexicon;

pub use error::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;
