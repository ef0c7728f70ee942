//! Discrete solutions of the dispersion equation
//! `eta(z) = z - E_d - g^2 Sigma(z) = 0`.
//!
//! Squaring away the square root turns the equation into a real polynomial
//! whose roots are exactly the zeros of `eta` on either sheet. Every root is
//! re-polished by Newton's method on `eta` itself, on the sheet implied by
//! its location, and classified:
//!
//! * real, `|z| > 1`, sheet I: bound state;
//! * real, `|z| > 1`, sheet II: virtual (anti-bound) state;
//! * `Im z < 0`, sheet II: resonance, paired with the anti-resonance at the
//!   conjugate point;
//! * real and inside the band: bound state in the continuum, which only
//!   occurs when `E_d` sits on one of the BIC energies.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ChainModel, ChainVariant};
use crate::poly;
use crate::selfenergy::{self_energy, self_energy_deriv, Sheet, SheetedEnergy};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StateClass {
    /// Real eigenvalue outside the band on the physical sheet.
    BoundI,
    /// Real eigenvalue outside the band on sheet II (anti-bound state).
    Virtual,
    /// `z = eps - i gamma`, `gamma > 0`, on sheet II.
    Resonance,
    /// Conjugate partner of a resonance; growing in time.
    AntiResonance,
    /// Real eigenvalue inside the band with zero width.
    Bic,
}

impl StateClass {
    pub fn as_str(self) -> &'static str {
        match self {
            StateClass::BoundI => "bound",
            StateClass::Virtual => "virtual",
            StateClass::Resonance => "resonance",
            StateClass::AntiResonance => "antiresonance",
            StateClass::Bic => "bic",
        }
    }

    fn order(self) -> u8 {
        match self {
            StateClass::Resonance => 0,
            StateClass::Bic => 1,
            StateClass::BoundI => 2,
            StateClass::Virtual => 3,
            StateClass::AntiResonance => 4,
        }
    }
}

impl std::str::FromStr for StateClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bound" => StateClass::BoundI,
            "virtual" => StateClass::Virtual,
            "resonance" => StateClass::Resonance,
            "antiresonance" => StateClass::AntiResonance,
            "bic" => StateClass::Bic,
            other => return Err(Error::InvalidArgument(format!("unknown class {other:?}"))),
        })
    }
}

/// One discrete eigenvalue of the total Hamiltonian.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteState {
    pub z: SheetedEnergy,
    pub class: StateClass,
    /// `(1 - g^2 Sigma'(z))^-1`, equal to `dz/dE_d`. Diverges at an
    /// exceptional point; see [`crate::states::normalization`] for the
    /// guarded version.
    pub norm: Complex64,
    /// `|eta(z)|` at the reported root.
    pub residual: f64,
    /// Another resonance lies closer than the degeneracy tolerance.
    #[serde(default)]
    pub near_degenerate: bool,
}

impl DiscreteState {
    /// Real part of the eigenvalue.
    pub fn energy(&self) -> f64 {
        self.z.value.re
    }

    /// Decay rate `gamma = -Im z`.
    pub fn width(&self) -> f64 {
        -self.z.value.im
    }
}

/// Tolerances used by the root solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    /// Largest accepted `|eta|` at a reported root.
    pub root_tol: f64,
    /// Roots closer than this are the same root.
    pub dedup_tol: f64,
    /// Distinct resonances closer than this are flagged `near_degenerate`.
    pub degenerate_tol: f64,
    pub max_newton: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            root_tol: 1e-12,
            dedup_tol: 1e-9,
            degenerate_tol: 1e-6,
            max_newton: 100,
        }
    }
}

/// Every discrete solution, including the anti-resonances that are left
/// out of the physical state list.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub states: Vec<DiscreteState>,
    pub anti_resonances: Vec<DiscreteState>,
}

impl RootSet {
    pub fn resonances(&self) -> impl Iterator<Item = &DiscreteState> {
        self.states
            .iter()
            .filter(|s| s.class == StateClass::Resonance)
    }
}

/// `eta(z) = z - E_d - g^2 Sigma(z)` on the tagged sheet.
pub fn eta(model: &ChainModel, z: SheetedEnergy) -> Result<Complex64> {
    Ok(z.value - model.e_d - model.g * model.g * self_energy(model, z)?)
}

/// `d eta / dz = 1 - g^2 Sigma'(z)`.
pub fn eta_deriv(model: &ChainModel, z: SheetedEnergy) -> Result<Complex64> {
    Ok(1.0 - model.g * model.g * self_energy_deriv(model, z, 1)?)
}

/// Real coefficients, constant term first, of the polynomial whose roots
/// contain every discrete solution.
///
/// Semi-infinite chain (degree `2 n_d`, with `a = g^2 V^2`):
/// `(z - E_d)^2 - 2a (z - E_d) U_{2n_d-1}(z) + 4a^2 U_{n_d-1}(z)^2`,
/// where `U_m` are Chebyshev polynomials of the second kind.
///
/// Infinite chain (degree 4): `(z - E_d)^2 (z^2 - 1) - a^2`.
pub fn polynomial_coefficients(model: &ChainModel) -> Vec<f64> {
    let a = model.coupling_sq();
    let shifted = [-model.e_d, 1.0];
    let square = poly::mul(&shifted, &shifted);
    let coeffs = match model.variant {
        ChainVariant::SemiInfinite { n_d } => {
            let n = n_d as usize;
            let u_odd = poly::chebyshev_u(2 * n - 1);
            let u_half = poly::chebyshev_u(n - 1);
            let cross = poly::scale(&poly::mul(&shifted, &u_odd), -2.0 * a);
            let tail = poly::scale(&poly::mul(&u_half, &u_half), 4.0 * a * a);
            poly::add(&poly::add(&square, &cross), &tail)
        }
        ChainVariant::Infinite => {
            let mut c = poly::mul(&square, &[-1.0, 0.0, 1.0]);
            c[0] -= a * a;
            c
        }
    };
    poly::trim(coeffs)
}

/// Impurity levels at which a bound state in the continuum appears,
/// `-cos(pi k / n_d)` for `k = 1 .. n_d - 1`, ascending.
pub fn bic_energies(model: &ChainModel) -> Result<Vec<f64>> {
    match model.variant {
        ChainVariant::SemiInfinite { n_d } => {
            let n = n_d as f64;
            // -cos(pi k / n) written as a sine so the centre is exactly 0
            // and the set is exactly symmetric
            Ok((1..n_d)
                .map(|k| (PI * (2.0 * k as f64 - n) / (2.0 * n)).sin())
                .collect())
        }
        ChainVariant::Infinite => Err(Error::NoBicInInfiniteChain),
    }
}

/// Lowercase roman numeral label for the branch at zero-based `index`.
pub fn branch_label(index: usize) -> String {
    const TABLE: [(usize, &str); 13] = [
        (1000, "m"),
        (900, "cm"),
        (500, "d"),
        (400, "cd"),
        (100, "c"),
        (90, "xc"),
        (50, "l"),
        (40, "xl"),
        (10, "x"),
        (9, "ix"),
        (5, "v"),
        (4, "iv"),
        (1, "i"),
    ];
    let mut n = index + 1;
    let mut out = String::new();
    for (value, digits) in TABLE {
        while n >= value {
            out.push_str(digits);
            n -= value;
        }
    }
    out
}

/// The BIC energy within `tol` of `e`, if any.
pub fn matching_bic(model: &ChainModel, e: f64, tol: f64) -> Option<f64> {
    bic_energies(model)
        .ok()?
        .into_iter()
        .find(|b| (b - e).abs() <= tol)
}

/// Newton iteration on `eta` starting at `start`, staying on its sheet.
///
/// With `keep_real` the iterate is confined to the real axis.
pub fn newton(
    model: &ChainModel,
    start: SheetedEnergy,
    keep_real: bool,
    opts: &SolverOptions,
) -> Result<(SheetedEnergy, f64)> {
    let sheet = start.sheet;
    let mut z = start.value;
    // a real iterate that starts outside the band stays outside
    let outside = keep_real && start.value.re.abs() > 1.0;
    let mut trace = vec![z];
    for _ in 0..opts.max_newton {
        let sz = SheetedEnergy::new(z, sheet);
        let e = eta(model, sz)?;
        if e == Complex64::new(0.0, 0.0) {
            break;
        }
        let mut step = e / eta_deriv(model, sz)?;
        if keep_real {
            step.im = 0.0;
        }
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if outside && z.re.abs() <= 1.0 {
            z.re = z.re.signum() * (1.0 + 4.0 * f64::EPSILON);
        }
        trace.push(z);
        if step.norm() <= 2.0 * f64::EPSILON * z.norm().max(1.0) {
            break;
        }
    }
    let sz = SheetedEnergy::new(z, sheet);
    let residual = eta(model, sz)?.norm();
    // next to a branch point eta' blows up and rounding in z alone
    // exceeds root_tol; accept roots pinned down to a few ulps
    let ulp_limit = 8.0 * f64::EPSILON * z.norm().max(1.0) * eta_deriv(model, sz)?.norm();
    if residual < opts.root_tol || residual <= ulp_limit {
        Ok((sz, residual))
    } else {
        Err(Error::NewtonDiverged { trace, residual })
    }
}

/// Physical discrete states: resonances, bound and virtual states, and a
/// BIC when `E_d` sits on a BIC energy. Anti-resonances are omitted.
pub fn discrete_states(model: &ChainModel) -> Result<Vec<DiscreteState>> {
    Ok(discrete_states_with(model, &SolverOptions::default())?.states)
}

pub fn discrete_states_with(model: &ChainModel, opts: &SolverOptions) -> Result<RootSet> {
    let model = model.validate()?;
    if model.g == 0.0 {
        return Ok(uncoupled(&model));
    }

    let coeffs = polynomial_coefficients(&model);
    let degree = coeffs.len() - 1;
    let raw = poly::roots(&coeffs)?;

    let mut candidates = Vec::with_capacity(raw.len());
    let mut kept: Vec<DiscreteState> = Vec::new();
    let mut accounted = 0usize;

    for r in raw {
        let polished = polish_raw(&model, r, opts);
        match polished {
            Some((z, residual)) => {
                candidates.push((r, z.value, residual));
                if kept
                    .iter()
                    .any(|k| (k.z.value - z.value).norm() < opts.dedup_tol)
                {
                    continue;
                }
                let state = classify(&model, z, residual)?;
                accounted += if state.z.value.im == 0.0 && state.class != StateClass::Bic {
                    1
                } else {
                    2
                };
                kept.push(state);
            }
            None => candidates.push((r, r, f64::NAN)),
        }
    }

    if accounted != degree {
        return Err(Error::RootCount {
            expected: degree,
            kept: accounted,
            candidates,
        });
    }

    flag_degenerate(&mut kept, opts.degenerate_tol);
    kept.sort_by(|a, b| {
        a.class
            .order()
            .cmp(&b.class.order())
            .then(a.z.value.re.total_cmp(&b.z.value.re))
    });

    let anti_resonances = kept
        .iter()
        .filter(|s| s.class == StateClass::Resonance)
        .map(|s| conjugate_partner(&model, s))
        .collect::<Result<Vec<_>>>()?;

    Ok(RootSet {
        states: kept,
        anti_resonances,
    })
}

/// Re-polishes user supplied eigenvalues (for example a previous run's
/// output) on their own sheets and classifies them.
pub fn polish_seeds(
    model: &ChainModel,
    seeds: &[SheetedEnergy],
    opts: &SolverOptions,
) -> Result<Vec<DiscreteState>> {
    let model = model.validate()?;
    let mut out = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let keep_real = seed.value.im == 0.0;
        let (z, residual) = newton(&model, seed, keep_real, opts)?;
        out.push(classify(&model, z, residual)?);
    }
    flag_degenerate(&mut out, opts.degenerate_tol);
    Ok(out)
}

/// States of the decoupled problem: one real level at `E_d`.
fn uncoupled(model: &ChainModel) -> RootSet {
    let class = if model.e_d.abs() > 1.0 {
        StateClass::BoundI
    } else {
        StateClass::Bic
    };
    RootSet {
        states: vec![DiscreteState {
            z: SheetedEnergy::real(model.e_d, Sheet::I),
            class,
            norm: Complex64::new(1.0, 0.0),
            residual: 0.0,
            near_degenerate: false,
        }],
        anti_resonances: Vec::new(),
    }
}

/// Polishes one raw polynomial root. Nearly real roots outside the band
/// are tried as real roots on sheet I then sheet II; everything else is
/// reflected into the lower half plane and polished on sheet II.
fn polish_raw(
    model: &ChainModel,
    r: Complex64,
    opts: &SolverOptions,
) -> Option<(SheetedEnergy, f64)> {
    let nearly_real = r.im.abs() <= 1e-7 * r.norm().max(1.0);
    // at the bound/virtual threshold a real root sits closer to a band edge
    // than rounding resolves and the raw root may land just inside the band
    let near_edge = nearly_real && (r.re.abs() - 1.0).abs() <= 1e-6;
    if nearly_real && (r.re.abs() > 1.0 || near_edge) {
        let start = if r.re.abs() > 1.0 {
            r.re
        } else {
            r.re.signum() * (1.0 + 4.0 * f64::EPSILON)
        };
        // Newton may wander off to another real root; keep the sheet whose
        // root is the one the polynomial pointed at
        let best = [Sheet::I, Sheet::II]
            .into_iter()
            .filter_map(|sheet| newton(model, SheetedEnergy::real(start, sheet), true, opts).ok())
            .filter(|found| found.0.value.re.abs() > 1.0)
            .min_by(|a, b| (a.0.value - r).norm().total_cmp(&(b.0.value - r).norm()));
        if let Some(found) = best {
            if (found.0.value - r).norm() <= 1e-6 * r.norm().max(1.0) {
                return Some(found);
            }
        }
        if near_edge {
            return [Sheet::I, Sheet::II]
                .into_iter()
                .filter_map(|sheet| {
                    let z = SheetedEnergy::real(start, sheet);
                    eta(model, z).ok().map(|e| (z, e.norm()))
                })
                .min_by(|a, b| a.1.total_cmp(&b.1));
        }
    }
    let start = Complex64::new(r.re, -r.im.abs());
    let (z, residual) = newton(model, SheetedEnergy::new(start, Sheet::II), false, opts).ok()?;
    let z = if z.value.im > 0.0 {
        // wandered onto the anti-resonance; its conjugate is the resonance
        let flipped = SheetedEnergy::new(z.value.conj(), Sheet::II);
        newton(model, flipped, false, opts).ok()?
    } else {
        (z, residual)
    };
    if z.0.value.im.abs() <= 1e-12 && (z.0.value.re.abs() - 1.0).abs() <= 1e-6 {
        // parked on a branch point, not a resonance
        return None;
    }
    Some(z)
}

fn classify(model: &ChainModel, z: SheetedEnergy, residual: f64) -> Result<DiscreteState> {
    let v = z.value;
    let (z, class) = if v.im == 0.0 && v.re.abs() > 1.0 {
        let class = match z.sheet {
            Sheet::I => StateClass::BoundI,
            Sheet::II => StateClass::Virtual,
        };
        (z, class)
    } else if v.re.abs() < 1.0
        && v.im.abs() <= 1e-10
        && (v.re - model.e_d).abs() <= 1e-8
        && matching_bic(model, model.e_d, 1e-9).is_some()
    {
        (SheetedEnergy::real(model.e_d, Sheet::I), StateClass::Bic)
    } else if v.im > 0.0 {
        (z, StateClass::AntiResonance)
    } else {
        (z, StateClass::Resonance)
    };
    let residual = if class == StateClass::Bic {
        eta(model, z)?.norm()
    } else {
        residual
    };
    Ok(DiscreteState {
        z,
        class,
        norm: eta_deriv(model, z)?.inv(),
        residual,
        near_degenerate: false,
    })
}

fn conjugate_partner(model: &ChainModel, s: &DiscreteState) -> Result<DiscreteState> {
    let z = SheetedEnergy::new(s.z.value.conj(), s.z.sheet);
    Ok(DiscreteState {
        z,
        class: StateClass::AntiResonance,
        norm: eta_deriv(model, z)?.inv(),
        residual: eta(model, z)?.norm(),
        near_degenerate: s.near_degenerate,
    })
}

fn flag_degenerate(states: &mut [DiscreteState], tol: f64) {
    for i in 0..states.len() {
        for j in (i + 1)..states.len() {
            if states[i].class == StateClass::Resonance
                && states[j].class == StateClass::Resonance
                && (states[i].z.value - states[j].z.value).norm() < tol
            {
                states[i].near_degenerate = true;
                states[j].near_degenerate = true;
            }
        }
    }
}
