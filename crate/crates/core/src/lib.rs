//! Solvers for dynamic network congestion games: social optima, blind and
//! general Nash equilibria, subgame-perfect equilibria, and brute-force
//! reference implementations for checking them on small instances.
//!
//! A game is an [`Arena`] (a weighted graph with a source and a target)
//! played by `n` players who all start at the source and move in
//! synchronous rounds. Each round every player crosses one edge and pays
//! that edge's cost evaluated at the number of players crossing it in the
//! same round.

pub mod arena;
pub mod costfn;
pub mod dynamics;
pub mod error;
pub mod ext;
pub mod fixtures;
pub mod graphs;
pub mod metrics;
pub mod ne;
pub mod oracle;
pub mod socopt;
pub mod spe;

mod search;

pub use arena::{parse_arena, validate_arena, Arena, EdgeId, Game, StateId, Violation};
pub use costfn::{CostFunction, Piece};
pub use error::{Error, Result};
pub use ext::{ExtNat, Label};
pub use graphs::{AbstractConfiguration, Configuration, MoveVector, OutcomePath, Step};
