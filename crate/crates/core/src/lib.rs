//! Knapp–Stein R-groups, elliptic classification data and parameter-side
//! (Arthur) R-groups for parabolically induced representations of GSpin
//! groups, computed from symbolic inducing data.
//!
//! Everything here is exact and allocation-only: block permutations and sign
//! changes for the relative Weyl group, reduced restricted roots in a block
//! symbol model, rational fixed subspaces on `a_M`, and the closed forms for
//! `R(σ)` cross-checked against the brute-force definition.
//!
//! The crate is `no_std` with `alloc`; IO, file formats and the command line
//! live in the `gspin` crate.

#![no_std]

extern crate alloc;

pub mod elliptic;
pub mod error;
pub mod inertia;
pub mod instance;
pub mod linalg;
pub mod lparam;
pub mod roots;
pub mod weyl;

pub use error::{Error, Result};
pub use weyl::{BlockSet, Family, GroupSpec, LeviSpec, Rational, WeylElement, WeylGroup};
