//! One-dimensional Schrödinger solver for heterostructures in which the
//! carrier's effective mass varies with position.
//!
//! The kinetic operator is the mass-symmetrized form
//! `-(ħ²/2) d/dx [ (1/m*(x)) dψ/dx ] + V(x)ψ = Eψ`,
//! whose matching conditions are continuity of ψ and of ψ′/m*.
//!
//! Four interchangeable solution strategies live behind the [`engine::Engine`]
//! trait and are selected by name at runtime:
//!
//! * `tmm` — piecewise-constant slab discretization composed through 2×2
//!   transfer matrices ([`tmm`]),
//! * `coupled` — the continuous limit of the slab recursion, a pair of
//!   coupled first-order amplitude ODEs ([`coupled`]),
//! * `wkb` — the semiclassical envelope/phase-integral approximation extended
//!   to position-dependent mass ([`semiclassical`]),
//! * `exact` — closed-form Airy-function solutions for the hard-wall well
//!   with linearly varying mass ([`exact`]), used as the accuracy benchmark.
//!
//! Units throughout: lengths in nm, energies in eV, masses in units of the
//! free-electron mass m₀.

pub mod airy;
pub mod cli;
pub mod config;
pub mod constants;
pub mod coupled;
pub mod engine;
pub mod error;
pub mod matrix2;
pub mod numeric;
pub mod problem;
pub mod profile;
pub mod semiclassical;
pub mod tmm;
pub mod wavefunction;

pub mod exact;

pub use constants::PhysicalConstants;
pub use error::Error;
pub use problem::{Boundary, Lead, Problem};
pub use profile::Profile;
pub use wavefunction::{EngineKind, Wavefunction};
