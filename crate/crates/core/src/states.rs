//! Normalization constants and transition weights of discrete states.
//!
//! The product of the impurity components of the right and left
//! eigenvectors, `N = <d|phi><phi~|d> = (1 - g^2 Sigma'(z))^-1`, is all the
//! spectrum needs. It is also the derivative `dz/dE_d` of the eigenvalue
//! with respect to the bare level, which makes it complex for resonances
//! and real for states on the real axis.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{eta_deriv, DiscreteState, StateClass};
use crate::error::{Error, Result};
use crate::model::ChainModel;

/// Below this `|1 - g^2 Sigma'|` the state is treated as sitting on an
/// exceptional point.
pub const EP_GUARD: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateWeights {
    pub norm: Complex64,
    /// `d eps / dE_d = Re N`.
    pub d_eps_d_ed: f64,
    /// `d gamma / dE_d = -Im N`.
    pub d_gamma_d_ed: f64,
    /// `|<d|phi>|^2` for states on the real axis of the physical sheet,
    /// zero otherwise.
    pub bound_weight: f64,
}

/// `(1 - g^2 Sigma'(z))^-1` on the state's own sheet.
///
/// For a BIC the same residue formula applies: `Sigma` vanishes at the BIC
/// energy while `Sigma'` stays finite and real, so the result is a real
/// number in `(0, 1]`.
pub fn normalization(model: &ChainModel, state: &DiscreteState) -> Result<Complex64> {
    let d = eta_deriv(model, state.z)?;
    if d.norm() < EP_GUARD {
        return Err(Error::NearExceptionalPoint(d.norm()));
    }
    let n = d.inv();
    Ok(match state.class {
        StateClass::BoundI | StateClass::Bic | StateClass::Virtual => Complex64::new(n.re, 0.0),
        _ => n,
    })
}

/// Residue of `G_dd` at a pole on the physical real axis: the spectral
/// weight of a bound state (or BIC) delta line.
pub fn bound_weight(model: &ChainModel, state: &DiscreteState) -> Result<f64> {
    match state.class {
        StateClass::BoundI | StateClass::Bic => Ok(normalization(model, state)?.re),
        other => Err(Error::WrongClass {
            expected: "bound",
            found: other.as_str(),
        }),
    }
}

pub fn weights(model: &ChainModel, state: &DiscreteState) -> Result<StateWeights> {
    let norm = normalization(model, state)?;
    let bound = match state.class {
        StateClass::BoundI | StateClass::Bic => norm.re,
        _ => 0.0,
    };
    Ok(StateWeights {
        norm,
        d_eps_d_ed: norm.re,
        d_gamma_d_ed: -norm.im,
        bound_weight: bound,
    })
}
