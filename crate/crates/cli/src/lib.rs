//! Command-line front end and HTTP service over the vesseltrack pipeline.

pub mod commands;
pub mod server;
