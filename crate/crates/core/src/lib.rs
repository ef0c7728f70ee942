//! Discrete spectrum of a two-level impurity coupled to a one-dimensional
//! tight-binding chain.
//!
//! The impurity level `E_d` couples with strength `g` either to a
//! semi-infinite chain (at distance `n_d` from the wall) or to an infinite
//! chain. Eliminating the band leaves the nonlinear eigenvalue problem
//! `z - E_d - g^2 Sigma(z) = 0` on a two-sheeted Riemann surface. This
//! crate finds all of its solutions, their normalization constants,
//! exceptional points and resonance trajectories, and splits the
//! absorption spectrum into per-resonance Fano components.
//!
//! ```
//! use fanochain::{discrete_states, ChainModel, StateClass};
//!
//! let model = ChainModel::semi_infinite(4, -0.5, 0.2);
//! let states = discrete_states(&model).unwrap();
//! let resonances = states.iter().filter(|s| s.class == StateClass::Resonance).count();
//! assert_eq!(resonances, 3);
//! ```

// `!(x > 0.0)` is used deliberately so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dispersion;
pub mod error;
pub mod model;
pub mod output;
pub mod poly;
pub mod quad;
pub mod selfenergy;
pub mod spectrum;
pub mod states;
pub mod sweep;

pub use dispersion::{
    bic_energies, discrete_states, discrete_states_with, DiscreteState, RootSet, SolverOptions,
    StateClass,
};
pub use error::{Error, Result};
pub use model::{ChainModel, ChainVariant};
pub use selfenergy::{self_energy, self_energy_deriv, Sheet, SheetedEnergy};
pub use spectrum::{decompose, green_spectrum, BoundLine, SpectrumGrid};
pub use states::{normalization, weights, StateWeights};
pub use sweep::{find_ep, scan_for_ep_seeds, trace, EpResult, EpSeed, SweepParameter, Trajectory};
