//! Architecture models for Grid applications, and the machinery to refine
//! them: a text syntax, a catalog of guarded refinement actions, weaving of
//! QoS patterns, platform adaptation with deployment placement, and
//! behavioral checking over derived labelled transition systems.
//!
//! The crate is `no_std` and only needs `alloc`. File IO, JSON and the
//! command line live in the `gmde` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod dsl;
pub mod model;
pub mod platform;
pub mod refine;
pub mod weave;

pub use model::*;
