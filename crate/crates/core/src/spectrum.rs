//! Absorption spectrum and its decomposition into discrete-state
//! contributions.
//!
//! The exact spectrum comes from the impurity Green's function,
//! `F = -(w / pi) Im 1 / (Omega - E_d - g^2 Sigma(Omega + i0))`.
//! Each resonance `z = eps - i gamma` with normalization `N` contributes
//! `f = -(w / pi) Im N / (Omega - z)`, which splits into a Lorentzian
//! weighted by `Re N = d eps / dE_d` and a dispersive part weighted by
//! `-Im N = d gamma / dE_d`. Bound states and BICs are kept as delta
//! lines. Whatever is left over is the continuum contribution.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{bic_energies, branch_label, discrete_states, DiscreteState, StateClass};
use crate::error::{Error, Result};
use crate::model::ChainModel;
use crate::quad;
use crate::selfenergy::{self_energy, Sheet, SheetedEnergy};
use crate::states::{normalization, weights, StateWeights};

/// Resonances whose normalization exceeds this modulus are reported as
/// being in the exceptional-point regime.
pub const NEAR_EP_NORM: f64 = 1e2;

pub const DEFAULT_POINTS: usize = 2001;
pub const DEFAULT_OMEGA_MAX: f64 = 0.999;

/// Uniform grid over `[-0.999, 0.999]` with 2001 points.
pub fn default_grid() -> Vec<f64> {
    uniform_grid(-DEFAULT_OMEGA_MAX, DEFAULT_OMEGA_MAX, DEFAULT_POINTS)
}

pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![lo],
        n => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + step * i as f64 })
                .collect()
        }
    }
}

/// A delta-function contribution `weight * delta(Omega - energy)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundLine {
    pub energy: f64,
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceComponent {
    pub total: Vec<f64>,
    pub symmetric: Vec<f64>,
    pub antisymmetric: Vec<f64>,
    /// Computed next to an exceptional point where the normalization is
    /// near-divergent.
    pub unreliable: bool,
}

/// Per-resonance data of a decomposition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceTrack {
    /// `i`, `ii`, ... by ascending `Re z`.
    pub label: String,
    pub z: Complex64,
    pub norm: Complex64,
    pub degree_of_asymmetry: f64,
    pub q: f64,
    pub component: ResonanceComponent,
}

impl ResonanceTrack {
    pub fn energy(&self) -> f64 {
        self.z.re
    }

    pub fn width(&self) -> f64 {
        -self.z.im
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumGrid {
    pub omega: Vec<f64>,
    pub total: Vec<f64>,
    pub resonances: Vec<ResonanceTrack>,
    /// `total - sum of resonance components`, pointwise.
    pub continuum_residual: Vec<f64>,
    /// Bound-state and BIC lines, weights already multiplied by the
    /// transition weight.
    pub bound_lines: Vec<BoundLine>,
    /// At least one resonance sits in the exceptional-point regime; the
    /// individual components may be huge and cancel each other.
    pub near_exceptional_point: bool,
}

impl SpectrumGrid {
    pub fn resonance_sum(&self) -> Vec<f64> {
        let mut sum = vec![0.0; self.omega.len()];
        for r in &self.resonances {
            for (s, f) in sum.iter_mut().zip(&r.component.total) {
                *s += f;
            }
        }
        sum
    }
}

/// Exact absorption spectrum at a single point.
///
/// Points outside the band return 0; their weight lives in bound lines.
/// A point coinciding with a BIC pole (`Omega = E_d` on a BIC energy)
/// also returns 0.
pub fn green_spectrum_at(model: &ChainModel, omega: f64) -> Result<f64> {
    if omega.abs() == 1.0 {
        return Err(Error::BandEdge(omega));
    }
    if omega.abs() > 1.0 {
        return Ok(0.0);
    }
    let sigma = self_energy(model, SheetedEnergy::real(omega, Sheet::I))?;
    let denom = omega - model.e_d - model.g * model.g * sigma;
    if denom == Complex64::new(0.0, 0.0) {
        return Ok(0.0);
    }
    Ok(-model.transition_weight / PI * denom.inv().im)
}

pub fn green_spectrum(model: &ChainModel, omega: &[f64]) -> Result<Vec<f64>> {
    let model = model.validate()?;
    omega
        .iter()
        .map(|&w| green_spectrum_at(&model, w))
        .collect()
}

/// Symmetric and antisymmetric parts of one resonance's contribution.
pub fn resonance_component(
    model: &ChainModel,
    state: &DiscreteState,
    weights: &StateWeights,
    omega: &[f64],
) -> Result<ResonanceComponent> {
    if state.class != StateClass::Resonance {
        return Err(Error::WrongClass {
            expected: "resonance",
            found: state.class.as_str(),
        });
    }
    let scale = model.transition_weight / PI;
    let eps = state.energy();
    let gamma = state.width();
    let mut symmetric = Vec::with_capacity(omega.len());
    let mut antisymmetric = Vec::with_capacity(omega.len());
    for &w in omega {
        let dx = w - eps;
        let denom = dx * dx + gamma * gamma;
        symmetric.push(scale * gamma / denom * weights.d_eps_d_ed);
        antisymmetric.push(scale * dx / denom * weights.d_gamma_d_ed);
    }
    let total = symmetric
        .iter()
        .zip(&antisymmetric)
        .map(|(s, a)| s + a)
        .collect();
    Ok(ResonanceComponent {
        total,
        symmetric,
        antisymmetric,
        unreliable: state.near_degenerate || weights.norm.norm() > NEAR_EP_NORM,
    })
}

/// `DA = (d gamma / dE_d) / (d eps / dE_d) = -Im N / Re N`.
///
/// A vanishing `d eps / dE_d` yields an infinity carrying the sign of
/// `d gamma / dE_d`.
pub fn degree_of_asymmetry(weights: &StateWeights) -> f64 {
    if weights.d_eps_d_ed == 0.0 {
        return f64::INFINITY.copysign(weights.d_gamma_d_ed);
    }
    weights.d_gamma_d_ed / weights.d_eps_d_ed
}

/// Fano asymmetry parameter `q = (1 +- sqrt(1 + DA^2)) / DA`.
///
/// Of the two roots, the one whose sign matches `sign_dgamma` (the sign of
/// `d gamma / dE_d`) is returned; this makes the resonance component a
/// positive multiple of `f_F(x) - 1`. `DA = 0` is the Lorentzian limit and
/// returns an infinity.
pub fn fano_q(da: f64, sign_dgamma: f64) -> f64 {
    let sign = if sign_dgamma < 0.0 { -1.0 } else { 1.0 };
    if da == 0.0 {
        return f64::INFINITY * sign;
    }
    if da.is_infinite() {
        return sign;
    }
    let root = (1.0 + da * da).sqrt();
    // both roots written without cancellation; the large one has modulus
    // (1 + root) / |DA| and the small one |DA| / (1 + root)
    let large = (1.0 + root) / da.abs();
    let small = da.abs() / (1.0 + root);
    // the two roots have opposite signs: q_+ = (1 + root) / DA has the
    // sign of DA, q_- the opposite one
    if sign * da.signum() > 0.0 {
        sign * large
    } else {
        sign * small
    }
}

/// Ordinary Fano profile `(x + q)^2 / (x^2 + 1)`.
pub fn fano_profile(x: f64, q: f64) -> f64 {
    (x + q) * (x + q) / (x * x + 1.0)
}

/// Amplitude `C` such that the resonance component equals
/// `C (f_F(x) - 1)` with `x = (Omega - eps) / gamma`.
pub fn fano_amplitude(model: &ChainModel, state: &DiscreteState, weights: &StateWeights) -> f64 {
    let q = fano_q(degree_of_asymmetry(weights), weights.d_gamma_d_ed);
    let scale = model.transition_weight / (PI * state.width());
    if q.is_infinite() {
        // Lorentzian limit: C (q^2 - 1) -> scale * d eps / dE_d
        return 0.0;
    }
    scale * weights.d_gamma_d_ed / (2.0 * q)
}

/// Full decomposition of the spectrum on `omega`.
pub fn decompose(model: &ChainModel, omega: &[f64]) -> Result<SpectrumGrid> {
    let model = model.validate()?;
    let total = green_spectrum(&model, omega)?;
    let states = discrete_states(&model)?;

    let mut resonances = Vec::new();
    let mut bound_lines = Vec::new();
    let mut near_ep = false;
    for state in &states {
        match state.class {
            StateClass::Resonance => {
                let w = match weights(&model, state) {
                    Ok(w) => w,
                    Err(Error::NearExceptionalPoint(_)) => raw_weights(state),
                    Err(e) => return Err(e),
                };
                let component = resonance_component(&model, state, &w, omega)?;
                near_ep |= component.unreliable;
                let da = degree_of_asymmetry(&w);
                resonances.push(ResonanceTrack {
                    label: branch_label(resonances.len()),
                    z: state.z.value,
                    norm: w.norm,
                    degree_of_asymmetry: da,
                    q: fano_q(da, w.d_gamma_d_ed),
                    component,
                });
            }
            StateClass::BoundI | StateClass::Bic => {
                let n = normalization(&model, state)?;
                bound_lines.push(BoundLine {
                    energy: state.energy(),
                    weight: n.re * model.transition_weight,
                });
            }
            StateClass::Virtual | StateClass::AntiResonance => {}
        }
    }

    let mut grid = SpectrumGrid {
        omega: omega.to_vec(),
        total,
        resonances,
        continuum_residual: Vec::new(),
        bound_lines,
        near_exceptional_point: near_ep,
    };
    let sum = grid.resonance_sum();
    grid.continuum_residual = grid.total.iter().zip(&sum).map(|(t, s)| t - s).collect();
    Ok(grid)
}

fn raw_weights(state: &DiscreteState) -> StateWeights {
    StateWeights {
        norm: state.norm,
        d_eps_d_ed: state.norm.re,
        d_gamma_d_ed: -state.norm.im,
        bound_weight: 0.0,
    }
}

/// Spectral weight inside the band and in the bound lines.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumRule {
    pub band: f64,
    pub lines: f64,
}

impl SumRule {
    pub fn total(&self) -> f64 {
        self.band + self.lines
    }
}

/// Integrates the exact spectrum over the band and adds the bound-line
/// weights; the sum equals the transition weight.
pub fn sum_rule(model: &ChainModel) -> Result<SumRule> {
    let model = model.validate()?;
    let states = discrete_states(&model)?;
    let mut breaks: Vec<f64> = states
        .iter()
        .filter(|s| s.class == StateClass::Resonance)
        .map(|s| s.energy())
        .collect();
    breaks.push(model.e_d);
    if let Ok(b) = bic_energies(&model) {
        breaks.extend(b);
    }
    let band = quad::integrate(
        |w| green_spectrum_at(&model, w).unwrap_or(0.0),
        -1.0,
        1.0,
        &breaks,
        1e-11 * model.transition_weight,
        0.0,
    )?;
    let mut lines = 0.0;
    for s in &states {
        if matches!(s.class, StateClass::BoundI | StateClass::Bic) {
            lines += normalization(&model, s)?.re * model.transition_weight;
        }
    }
    Ok(SumRule { band, lines })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        let g = default_grid();
        assert_eq!(g.len(), 2001);
        assert_eq!(g[0], -0.999);
        assert_eq!(g[2000], 0.999);
        assert!(g[1000].abs() < 1e-15);
        assert!(uniform_grid(0.0, 1.0, 0).is_empty());
    }

    #[test]
    fn uncoupled_spectrum_vanishes_in_band() {
        let model = ChainModel::semi_infinite(4, -0.5, 0.0);
        let f = green_spectrum(&model, &[-0.9, -0.3, 0.0, 0.7]).unwrap();
        assert!(f.iter().all(|&x| x == 0.0));
        let grid = decompose(&model, &default_grid()).unwrap();
        assert!(grid.total.iter().all(|&x| x == 0.0));
        assert_eq!(
            grid.bound_lines,
            vec![BoundLine {
                energy: -0.5,
                weight: 1.0
            }]
        );
    }

    #[test]
    fn band_edges_are_rejected() {
        let model = ChainModel::infinite(0.0, 0.2);
        assert!(matches!(
            green_spectrum(&model, &[1.0]),
            Err(Error::BandEdge(_))
        ));
        assert_eq!(green_spectrum(&model, &[1.5]).unwrap(), vec![0.0]);
    }

    #[test]
    fn fano_q_limits_and_signs() {
        assert!((fano_q(0.664, 1.0) - 3.313).abs() / 3.313 < 1e-3);
        assert!(fano_q(0.0, 1.0).is_infinite());
        assert!((fano_q(1e12, 1.0).abs() - 1.0).abs() < 1e-9);
        for da in [-3.0, -0.2, 0.2, 3.0] {
            for sign in [-1.0, 1.0] {
                let q = fano_q(da, sign);
                assert_eq!(q.signum(), sign);
                // q solves q^2 - 2q/DA - 1 = 0
                assert!((q * q - 2.0 * q / da - 1.0).abs() < 1e-12 * (q * q).max(1.0));
            }
        }
    }

    #[test]
    fn fano_profile_shape() {
        assert_eq!(fano_profile(-2.5, 2.5), 0.0);
        assert!((fano_profile(1e9, 3.0) - 1.0).abs() < 1e-8);
        assert!((fano_profile(-1e9, 3.0) - 1.0).abs() < 1e-8);
        assert!((fano_profile(0.7, 0.0) - 0.49 / 1.49).abs() < 1e-15);
    }

    #[test]
    fn markovian_component_is_lorentzian() {
        let model = ChainModel::infinite(0.0, 0.2);
        let state = DiscreteState {
            z: SheetedEnergy::new(Complex64::new(0.1, -0.05), Sheet::II),
            class: StateClass::Resonance,
            norm: Complex64::new(1.0, 0.0),
            residual: 0.0,
            near_degenerate: false,
        };
        let w = StateWeights {
            norm: Complex64::new(1.0, 0.0),
            d_eps_d_ed: 1.0,
            d_gamma_d_ed: 0.0,
            bound_weight: 0.0,
        };
        let omega = uniform_grid(-0.5, 0.5, 11);
        let c = resonance_component(&model, &state, &w, &omega).unwrap();
        assert!(c.antisymmetric.iter().all(|&a| a == 0.0));
        assert_eq!(degree_of_asymmetry(&w), 0.0);
        let peak = c.total.iter().cloned().fold(f64::MIN, f64::max);
        assert!((peak - 1.0 / (PI * 0.05)).abs() < 1e-12);
    }

    #[test]
    fn antisymmetric_kernel_maximum() {
        let gamma = 0.03;
        let kernel = |w: f64| w / (w * w + gamma * gamma);
        let best = uniform_grid(0.0, 0.2, 200_001)
            .into_iter()
            .map(kernel)
            .fold(f64::MIN, f64::max);
        assert!((best - 1.0 / (2.0 * gamma)).abs() < 1e-6);
        assert!((kernel(gamma) - 1.0 / (2.0 * gamma)).abs() < 1e-12);
    }

    #[test]
    fn da_sentinel() {
        let w = StateWeights {
            norm: Complex64::new(0.0, -0.3),
            d_eps_d_ed: 0.0,
            d_gamma_d_ed: 0.3,
            bound_weight: 0.0,
        };
        assert_eq!(degree_of_asymmetry(&w), f64::INFINITY);
    }
}
