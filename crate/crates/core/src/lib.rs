//! Exact computations for contact (±1)-surgery on Legendrian links.
//!
//! The crate is `no_std` (it needs `alloc`). It reads front words, computes
//! classical invariants, pushes them through surgery with exact rational
//! linear algebra, and checks vanishing/overtwistedness criteria for the
//! resulting contact manifold.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod front;
pub mod classify;
pub mod invariants;
pub mod rational;
pub mod surgery;
#[cfg(test)]
mod testkit;

pub use front::{parse_front_word, build_diagram, Diagram, FrontWord};
pub use invariants::{classical_data, ClassicalData};
pub use rational::Rational;
