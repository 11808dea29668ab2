//! Exact analysis of Shapley network design games.
//!
//! Costs are exact rationals extended by a formal infinitesimal `ε`
//! ([`EpsCost`]). On small games the analyzer enumerates every strategy
//! profile to find all Nash equilibria, social optima and potential minima,
//! computes the price of stability/anarchy and their potential-optimal
//! variants, and checks the known upper-bound inequalities instance by
//! instance.

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod equilibria;
pub mod error;
pub mod families;
pub mod game;
pub mod instance;
mod kernel;
pub mod path;
pub mod profile;
pub mod report;
pub mod search;

pub use arith::{harmonic, EpsCost, EpsRatio, Rational};
pub use equilibria::{
    all_nash, analyze, best_response, best_response_dynamics, enumerate_profiles, is_nash, potential_minima,
    social_optimum, Analysis, BestResponse, DynamicsStep, DynamicsTrace, EquilibriumKind, EquilibriumSet, Schedule,
};
pub use error::{Error, Result};
pub use game::{validate_game, Edge, Game, Player, Violation};
pub use kernel::Limits;
pub use path::{enumerate_simple_paths, Path};
pub use profile::{
    edge_loads, player_cost, potential, social_cost, usage_histogram, LoadMap, StrategyProfile, UsageHistogram,
};
