//! Command-line front end for `cm-torus`: configuration files, report
//! emission and the built-in acceptance suite.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod report;
pub mod selftest;
