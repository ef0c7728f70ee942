//! Physical parameters of one problem instance.
//!
//! Energies are measured in units of the half-bandwidth with the band
//! centred at zero, so the continuum always occupies `[-1, 1]` on the real
//! axis. Spectra are parametrized by `Omega = omega + E_c`; the core level
//! `e_c` is carried along only so that the axis can be relabelled.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lower band edge.
pub const BAND_BOTTOM: f64 = -1.0;
/// Upper band edge.
pub const BAND_TOP: f64 = 1.0;

/// Geometry of the chain the impurity couples to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainVariant {
    /// Chain terminated by a hard wall; the impurity couples to the site
    /// `n_d` sites away from the wall.
    SemiInfinite { n_d: u32 },
    /// Unbounded chain with a wavenumber-independent coupling.
    Infinite,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainModel {
    pub variant: ChainVariant,
    /// Bare impurity level.
    pub e_d: f64,
    /// Dimensionless coupling constant.
    pub g: f64,
    /// Potential amplitude.
    #[serde(default = "one")]
    pub v: f64,
    /// Overall scale of the spectrum, `mu^2 T_dc^2`.
    #[serde(default = "one")]
    pub transition_weight: f64,
    /// Core level; only shifts the `Omega <-> omega` relation.
    #[serde(default)]
    pub e_c: f64,
}

fn one() -> f64 {
    1.0
}

impl ChainModel {
    pub fn semi_infinite(n_d: u32, e_d: f64, g: f64) -> Self {
        ChainModel {
            variant: ChainVariant::SemiInfinite { n_d },
            e_d,
            g,
            v: 1.0,
            transition_weight: 1.0,
            e_c: 0.0,
        }
    }

    pub fn infinite(e_d: f64, g: f64) -> Self {
        ChainModel {
            variant: ChainVariant::Infinite,
            e_d,
            g,
            v: 1.0,
            transition_weight: 1.0,
            e_c: 0.0,
        }
    }

    pub fn with_v(mut self, v: f64) -> Self {
        self.v = v;
        self
    }

    pub fn with_transition_weight(mut self, w: f64) -> Self {
        self.transition_weight = w;
        self
    }

    pub fn with_e_c(mut self, e_c: f64) -> Self {
        self.e_c = e_c;
        self
    }

    pub fn with_e_d(mut self, e_d: f64) -> Self {
        self.e_d = e_d;
        self
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g = g;
        self
    }

    /// Impurity site index, `None` for the infinite chain.
    pub fn n_d(&self) -> Option<u32> {
        match self.variant {
            ChainVariant::SemiInfinite { n_d } => Some(n_d),
            ChainVariant::Infinite => None,
        }
    }

    /// Returns the model unchanged if every field constraint holds,
    /// otherwise the first violated constraint.
    pub fn validate(self) -> Result<Self> {
        if let ChainVariant::SemiInfinite { n_d } = self.variant {
            if n_d == 0 {
                return Err(Error::InvalidModel("n_d must be >= 1".into()));
            }
        }
        if !self.e_d.is_finite() {
            return Err(Error::InvalidModel(format!(
                "e_d must be finite, got {}",
                self.e_d
            )));
        }
        if !self.g.is_finite() || self.g < 0.0 {
            return Err(Error::InvalidModel(format!(
                "g must be finite and >= 0, got {}",
                self.g
            )));
        }
        if !self.v.is_finite() || self.v <= 0.0 {
            return Err(Error::InvalidModel(format!(
                "v must be finite and > 0, got {}",
                self.v
            )));
        }
        if !self.transition_weight.is_finite() || self.transition_weight <= 0.0 {
            return Err(Error::InvalidModel(format!(
                "transition_weight must be finite and > 0, got {}",
                self.transition_weight
            )));
        }
        if !self.e_c.is_finite() {
            return Err(Error::InvalidModel(format!(
                "e_c must be finite, got {}",
                self.e_c
            )));
        }
        Ok(self)
    }

    /// Parses a JSON model descriptor and validates it.
    pub fn from_json(text: &str) -> Result<Self> {
        let model: ChainModel = serde_json::from_str(text)?;
        model.validate()
    }

    /// Effective coupling strength `g^2 V^2` that multiplies the bare
    /// self-energy shape.
    pub(crate) fn coupling_sq(&self) -> f64 {
        self.g * self.g * self.v * self.v
    }
}
