//! Simulation toolkit for photonic cluster states generated by a single
//! spin in a cavity with time-delayed feedback.
//!
//! The crate covers the cavity reflection model, the resulting spin-photon
//! gates, lattice bookkeeping, a sequential tensor-network engine, a dense
//! reference simulator, fidelity metrics and the delay-line scheduler.

pub mod cavity;
pub mod cli;
pub mod config;
pub mod gates;
pub mod lattice;
pub mod metrics;
pub mod oracle;
pub mod scheduler;
pub mod tensornet;
