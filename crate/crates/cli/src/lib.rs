//! Command-line front end for polynav: file formats, rendering and the
//! benchmark runner.

pub mod bench;
pub mod commands;
pub mod format;
pub mod render;
