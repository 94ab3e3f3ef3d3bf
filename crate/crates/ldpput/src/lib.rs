//! File formats, ε conversion and the command-line front end for
//! [`ldpput_core`].

pub mod cli;
pub mod epsilon;
pub mod formats;
