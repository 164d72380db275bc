//! HTTP API and command-line front end over relmap snapshots.

pub mod api;
pub mod cli;
pub mod views;
