//! Polynomial-time reductions from quadratic polynomial systems to
//! three-player strategic games, plus an exact analysis engine for small
//! games: Nash equilibrium checking and enumeration, Pareto-optimal and
//! strong equilibrium certification, and coalition-deviation feasibility.
//!
//! The pipeline: a quadratic system over box variables is normalized into a
//! promise region, made bilinear and homogeneous over a product of simplices,
//! and then compiled into a zero-sum three-player game whose equilibrium
//! payoffs encode solvability. Further stages append bot actions with
//! hand-built 2x2x2 subgames to control which equilibria survive, and a
//! symmetrization stage folds the three roles into one shared action set.

pub mod analysis;
pub mod error;
pub mod exact;
pub mod gadgets;
pub mod game;
pub mod plant;
pub mod suites;
pub mod symmetrize;
pub mod systems;

pub use error::{Error, Result};
pub use exact::{QuadAlgebraic, Rational};
pub use game::{MixedProfile, StrategicGame};
pub use systems::{BilinearSystem, QuadraticSystem};
