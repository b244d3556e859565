//! Skew group algebras, invariant subalgebras and machine checks of the
//! correspondence between their simple modules.

pub mod algebra;
pub mod error;
pub mod fixtures;
pub mod group_action;
pub mod numeric;
pub mod projective;
pub mod repmod;
pub mod skew;
pub mod theorems;

pub use error::{Error, Result};
