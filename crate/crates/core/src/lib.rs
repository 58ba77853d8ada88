//! Exact solvers for finite ordinal games: elimination procedures built on
//! optimistic, pessimistic and admissibility criteria, type structures and
//! their belief chains, and risk-averse limits.

pub mod cli;
pub mod criteria;
pub mod epistemic;
pub mod game;
pub mod generate;
pub mod io;
pub mod lp;
pub mod report;
pub mod risk;
pub mod solvers;
pub mod suite;
