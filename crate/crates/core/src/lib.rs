//! Exact workbench for finite Bayesian mechanisms.
//!
//! The crate models a finite Bayesian environment (agents, type spaces, a joint
//! prior, outcomes, utilities), mechanisms over it, and pure-strategy Bayesian
//! Nash equilibria. On top of that it builds direct revelation mechanisms from
//! equilibria and checks truthful implementability instance by instance. The
//! [`energy`] module accounts for the energy agents and the designer spend when
//! an indirect mechanism is replaced by its direct counterpart.
//!
//! All arithmetic is exact ([`Rational`]); nothing is ever rounded.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]

extern crate alloc;

pub mod energy;
pub mod equilibrium;
mod error;
pub mod game;
mod profile;
pub mod rational;
pub mod revelation;

pub use error::CoreError;
pub use profile::ProfileSpace;
pub use rational::Rational;
