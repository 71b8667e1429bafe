//! Fixture files and command implementations for the `multicoh` binary.

pub mod commands;
pub mod fixture;
