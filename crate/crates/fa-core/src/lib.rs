#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod group;
pub mod linalg;
pub mod poly;

pub use error::{Caps, Error, Result};
pub use group::{CosetSystem, Element, FPower, Group, GroupSpec};
pub mod spanning;
pub mod automata;
pub mod fauto;
pub mod presburger;
pub mod modeltheory;

pub(crate) type FastMap<K, V> = hashbrown::HashMap<K, V, foldhash::fast::FixedState>;
