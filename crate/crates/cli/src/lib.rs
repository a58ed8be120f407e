//! Library surface of the command-line tool: configuration-file parsing and
//! table output, reused by the binary and by the fuzz targets.

pub mod config;
pub mod output;
