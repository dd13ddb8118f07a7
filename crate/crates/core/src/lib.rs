//! Repeated rock-paper-scissors: a 43-bot population, online learners,
//! and population-based evaluation (population return, within-population
//! exploitability, aggregate score).

pub mod bots;
pub mod engine;
pub mod learners;
pub mod pbe;
