//! Experiment harness and CLI companion to `redei-core`: seeded parallel
//! reproductions of the 4-rank distribution results, the Rédei-vs-Jacobian
//! oracle sweep, matrix-statistics validation, and selection degree
//! statistics.

pub mod experiments;
