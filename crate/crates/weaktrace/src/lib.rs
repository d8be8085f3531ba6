//! Std companion to `weaktrace-core`: configuration, CSV/SVG artifacts with
//! hashed manifests, the canned scenarios, the command line, and an
//! angular-spectrum grid oracle used to check the closed-form beam engine.

pub mod cli;
pub mod config;
pub mod error;
pub mod manifest;
pub mod oracle;
pub mod scenarios;
pub mod svg;
pub mod tables;

pub use config::Config;
pub use error::Error;
