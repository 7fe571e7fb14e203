//! Exact-arithmetic simulation and verification of Schmidt-style ball games.
//!
//! Players alternately choose nested closed balls in a metric space; player II
//! shrinks the previous radius by a factor alpha, player I by beta, and II wins
//! when the point the balls close in on lies in a target set. The crate plays
//! these games with exact rational arithmetic, certifies finite-depth outcomes
//! against tri-valued target oracles, and implements the constructive strategy
//! transformations that relate the game's variants: rational-game transfer,
//! one-round strategy simplification, the half-real pair/integer form, the
//! cylinder coding of plane relations, and the Baire-space stem reduction.

pub mod arena;
pub mod cylinder;
pub mod engine;
pub mod rat;
pub mod reductions;
pub mod simple;
pub mod space;
pub mod strategy;
pub mod target;
pub mod trace;
pub mod transfer;
pub mod verify;

pub use engine::{legal_move, play, GameParams, Outcome, Position, Trace, Variant};
pub use rat::{rat, Rat};
pub use space::{ball_nested, dist_cmp, Ball, BairePoint, Nesting, Point, SpaceKind};
pub use strategy::{Strategy, StrategyError};
pub use target::{BallAnswer, Membership, TargetSet};
