//! Combinatorics and checks for filtered tree-indexed moduli systems.

pub mod error;
pub mod monoid;
pub mod novikov;
pub mod rational;
pub mod tree;
pub mod corner;
pub mod cover;
pub mod blaschke;

pub use error::{BlaschkeError, CornerError, CoverError, MonoidError, NovikovError, TreeError};
pub use monoid::{Activity, ClassElement, ClassMonoid, DefaultActivity, Generator, Triple};
pub use tree::{ChildSpec, DecoratedTree, NodeSpec};
