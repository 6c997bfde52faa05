//! Finite monoids, automata and the decomposition used by the star-free
//! evaluator.

pub mod dfa;
pub mod kr;
pub mod monoid;
pub mod regex;
pub mod transition;

pub use dfa::Dfa;
pub use kr::{kr_decompose, KrDecomposition, KrPart};
pub use monoid::{example_monoid, Element, FiniteMonoid, Submonoid};
pub use transition::{transition_monoid, LetterMorphism, TransitionMonoid, DEFAULT_MONOID_CAP};
