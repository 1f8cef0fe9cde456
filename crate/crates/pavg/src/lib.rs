//! Command-line front end and file formats for `pavg-core`.

pub mod cli;
pub mod io;
pub mod schema;
