//! Command line and HTTP service for the superbase engine.

pub mod commands;
pub mod server;
pub mod session;
