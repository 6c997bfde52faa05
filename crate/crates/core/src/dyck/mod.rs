//! Dyck languages: balance pairs, the one-type engine and the typed engine.

pub mod balance;
pub mod d1;
pub mod dk;

pub use balance::{BalanceCombine, BalancePair, ChangeKind, Effect, EffectTable};
pub use d1::D1Engine;
pub use dk::DkEngine;
