//! Finite-volume shock capturing for spherically symmetric perfect-fluid
//! spacetimes in standard Schwarzschild coordinates.

pub mod relfluid;
pub mod riemann;
pub mod models;
pub mod scheme;
pub mod diagnostics;
pub mod experiments;
pub mod config;
pub mod output;
pub mod run;
