//! File formats, the example catalog, report rendering and the command-line
//! front end for [`biquad_core`].

pub mod catalog;
pub mod cli;
pub mod format;
pub mod report;
pub mod word;

pub use biquad_core as core;
