#![cfg_attr(not(test), no_std)]
//! Line bundles on 1-motives over prime fields.

extern crate alloc;

pub mod cubical;
pub mod elliptic;
pub mod error;
pub mod field;
pub mod groups;
pub mod motive;
pub mod picard;
pub mod suites;
pub mod torus;

pub use error::{Error, Result};
