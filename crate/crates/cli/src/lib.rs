//! File formats, instance generation, and sweep machinery behind the
//! `sixflow` command-line tool.

pub mod formats;
pub mod gen;
pub mod sweep;
