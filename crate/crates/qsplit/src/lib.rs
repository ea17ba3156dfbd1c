//! File formats, run reports and the `qsplit` command-line tool built on
//! [`qsplit_core`].

pub mod cli;
pub mod format;
pub mod plot;
pub mod report;
