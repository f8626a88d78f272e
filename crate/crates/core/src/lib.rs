//! Approximation of non-periodic functions on the unit cube `[0,1]^d` from
//! samples along (transformed) rank-1 lattices.
//!
//! Four orthonormal systems are supported, all driven by the same fast
//! lattice DFT kernel:
//!
//! * the Fourier system on plain rank-1 lattices,
//! * the half-period cosine system on tent-transformed lattices,
//! * the Chebyshev system on Chebyshev-transformed lattices,
//! * transformed Fourier systems built from parameterized torus-to-cube
//!   maps (logarithmic and error-function families).
//!
//! Frequencies live on hyperbolic cross index sets ([`index_sets`]), lattices
//! are searched and verified in [`lattice`], and the coefficient pipelines are
//! in [`systems`].
//!
//! The crate is `no_std` (with `alloc`). Enable the `std` feature to get
//! `std::error::Error` impls.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

mod error;
mod math;

pub mod fft;
pub mod fourier;
pub mod index_sets;
pub mod lattice;
pub mod special;
pub mod systems;
pub mod testfunctions;
pub mod transforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use fourier::{CoefficientVector, LatticeSamples, Verification};
pub use index_sets::{FrequencySet, SetKind};
pub use lattice::{Rank1Lattice, SearchOptions, SearchStrategy};
pub use systems::{Approximant, Method};
pub use transforms::{TransformKind, Univariate, WeightFunction};
