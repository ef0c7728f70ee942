//! Resonance trajectories under a parameter sweep and exceptional points.
//!
//! Continuation uses the eigenvalue derivative as predictor:
//! `dz/dE_d = N` and `dz/dg = 2 g Sigma(z) N`, both free once the
//! normalization is known. Newton on sheet II corrects the prediction, and
//! the step is halved whenever the correction exceeds a tenth of the
//! predicted move.
//!
//! A branch that touches the real axis at a BIC parameter continues
//! through it: near a BIC `gamma` grows quadratically on both sides, so
//! the path is smooth and keeps its label. The grid point sitting on the
//! BIC is marked instead.

use nalgebra::{Matrix4, Vector4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dispersion::{
    branch_label, discrete_states, eta, eta_deriv, matching_bic, newton, SolverOptions, StateClass,
};
use crate::error::{Error, Result};
use crate::model::ChainModel;
use crate::selfenergy::{self_energy, self_energy_deriv, Sheet, SheetedEnergy};

/// Parameter varied along a sweep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepParameter {
    EdLevel,
    Coupling,
}

impl SweepParameter {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParameter::EdLevel => "ed",
            SweepParameter::Coupling => "g",
        }
    }

    fn apply(self, model: &ChainModel, value: f64) -> ChainModel {
        match self {
            SweepParameter::EdLevel => model.with_e_d(value),
            SweepParameter::Coupling => model.with_g(value),
        }
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ed" | "e_d" | "Ed" => Ok(SweepParameter::EdLevel),
            "g" => Ok(SweepParameter::Coupling),
            other => Err(Error::InvalidArgument(format!(
                "unknown sweep parameter {other:?}, expected ed or g"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub param: f64,
    pub z: Complex64,
    /// Real eigenvalue of a BIC at this parameter value.
    pub bic: bool,
    /// Another branch claimed a root within the degeneracy tolerance.
    pub collision: bool,
    /// Continuation failed and the point was matched to the nearest root
    /// of an independent solve.
    pub rematched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Branch {
    pub label: String,
    pub points: Vec<TrajectoryPoint>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
    pub branches: Vec<Branch>,
}

/// Tunables of the continuation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceOptions {
    /// A corrector move larger than this fraction of the predicted move
    /// triggers step halving.
    pub max_correction_ratio: f64,
    pub max_halvings: u32,
    pub solver: SolverOptions,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            max_correction_ratio: 0.1,
            max_halvings: 40,
            solver: SolverOptions::default(),
        }
    }
}

/// `dz/dp` at a root on sheet II.
pub fn eigenvalue_derivative(
    model: &ChainModel,
    parameter: SweepParameter,
    z: Complex64,
) -> Result<Complex64> {
    let sz = SheetedEnergy::new(z, Sheet::II);
    let n = eta_deriv(model, sz)?.inv();
    Ok(match parameter {
        SweepParameter::EdLevel => n,
        SweepParameter::Coupling => 2.0 * model.g * self_energy(model, sz)? * n,
    })
}

/// One Euler predictor plus Newton corrector step.
///
/// Returns the corrected eigenvalue and the size of the correction.
pub fn predict_correct(
    model: &ChainModel,
    parameter: SweepParameter,
    z: Complex64,
    from: f64,
    to: f64,
    opts: &SolverOptions,
) -> Result<(Complex64, f64)> {
    let slope = eigenvalue_derivative(&parameter.apply(model, from), parameter, z)?;
    let predicted = z + slope * (to - from);
    let target = parameter.apply(model, to);
    let corrected = corrector(&target, predicted, opts)?;
    Ok((corrected, (corrected - predicted).norm()))
}

/// Newton on sheet II; a result above the real axis is reflected back.
fn corrector(model: &ChainModel, start: Complex64, opts: &SolverOptions) -> Result<Complex64> {
    let start = Complex64::new(start.re, start.im.min(0.0));
    let (z, _) = newton(model, SheetedEnergy::new(start, Sheet::II), false, opts)?;
    if z.value.im > 0.0 {
        let (z, _) = newton(
            model,
            SheetedEnergy::new(z.value.conj(), Sheet::II),
            false,
            opts,
        )?;
        return Ok(Complex64::new(z.value.re, z.value.im.min(0.0)));
    }
    Ok(z.value)
}

/// Resonances and BICs of a model, as sheet-II eigenvalues sorted by
/// ascending real part.
fn branch_roots(model: &ChainModel) -> Result<Vec<Complex64>> {
    let mut roots: Vec<Complex64> = discrete_states(model)?
        .into_iter()
        .filter(|s| matches!(s.class, StateClass::Resonance | StateClass::Bic))
        .map(|s| s.z.value)
        .collect();
    roots.sort_by(|a, b| a.re.total_cmp(&b.re));
    Ok(roots)
}

fn is_bic_point(model: &ChainModel, z: Complex64) -> bool {
    z.im.abs() <= 1e-10
        && (z.re - model.e_d).abs() <= 1e-8
        && matching_bic(model, model.e_d, 1e-9).is_some()
}

/// Follows every resonance branch of `model` as `parameter` runs over
/// `values`.
pub fn trace(model: &ChainModel, parameter: SweepParameter, values: &[f64]) -> Result<Trajectory> {
    trace_with(model, parameter, values, &TraceOptions::default())
}

pub fn trace_with(
    model: &ChainModel,
    parameter: SweepParameter,
    values: &[f64],
    opts: &TraceOptions,
) -> Result<Trajectory> {
    let model = model.validate()?;
    if values.windows(2).any(|w| w[1] <= w[0]) || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "sweep values must be finite and strictly increasing".into(),
        ));
    }
    if parameter == SweepParameter::Coupling && values.iter().any(|&g| g <= 0.0) {
        return Err(Error::InvalidArgument(
            "coupling sweep values must be positive".into(),
        ));
    }
    let Some(&first) = values.first() else {
        return Ok(Trajectory {
            parameter,
            values: Vec::new(),
            branches: Vec::new(),
        });
    };

    let start_model = parameter.apply(&model, first);
    let mut branches: Vec<Branch> = branch_roots(&start_model)?
        .into_iter()
        .enumerate()
        .map(|(i, z)| Branch {
            label: branch_label(i),
            points: vec![TrajectoryPoint {
                param: first,
                z,
                bic: is_bic_point(&start_model, z),
                collision: false,
                rematched: false,
            }],
        })
        .collect();
    mark_collisions(&mut branches, opts.solver.degenerate_tol);

    for pair in values.windows(2) {
        let (from, to) = (pair[0], pair[1]);
        let target = parameter.apply(&model, to);
        let mut fresh: Option<Vec<Complex64>> = None;
        for branch in branches.iter_mut() {
            let last = *branch.points.last().expect("branches start non-empty");
            let (z, rematched) = match continue_branch(&model, parameter, last.z, from, to, opts) {
                Ok(z) => (z, false),
                Err(_) => {
                    let roots = match &fresh {
                        Some(r) => r,
                        None => fresh.insert(branch_roots(&target)?),
                    };
                    let nearest = roots
                        .iter()
                        .min_by(|a, b| (*a - last.z).norm().total_cmp(&(*b - last.z).norm()))
                        .copied()
                        .ok_or_else(|| Error::ContinuationFailed {
                            branch: branch.label.clone(),
                            param: to,
                        })?;
                    (nearest, true)
                }
            };
            branch.points.push(TrajectoryPoint {
                param: to,
                z,
                bic: is_bic_point(&target, z),
                collision: false,
                rematched,
            });
        }
        mark_collisions(&mut branches, opts.solver.degenerate_tol);
    }

    Ok(Trajectory {
        parameter,
        values: values.to_vec(),
        branches,
    })
}

/// Adaptive continuation of one eigenvalue from `from` to `to`.
fn continue_branch(
    model: &ChainModel,
    parameter: SweepParameter,
    z0: Complex64,
    from: f64,
    to: f64,
    opts: &TraceOptions,
) -> Result<Complex64> {
    let mut z = z0;
    let mut p = from;
    let mut h = to - from;
    let min_h = (to - from).abs() * 0.5f64.powi(opts.max_halvings as i32);
    while p != to {
        if (to - p).abs() < h.abs() {
            h = to - p;
        }
        let next = if (to - p - h).abs() <= 1e-15 * to.abs().max(1.0) {
            to
        } else {
            p + h
        };
        let attempt =
            eigenvalue_derivative(&parameter.apply(model, p), parameter, z).and_then(|slope| {
                let moved = slope * (next - p);
                let predicted = z + moved;
                let corrected = corrector(&parameter.apply(model, next), predicted, &opts.solver)?;
                Ok((corrected, (corrected - predicted).norm(), moved.norm()))
            });
        match attempt {
            Ok((corrected, correction, moved))
                if correction <= opts.max_correction_ratio * moved + 1e-13 =>
            {
                z = corrected;
                p = next;
                // cautiously regrow after easy steps
                if correction <= 0.25 * opts.max_correction_ratio * moved {
                    h = (2.0 * h).clamp(-(to - from).abs(), (to - from).abs());
                }
            }
            _ => {
                h *= 0.5;
                if h.abs() < min_h {
                    return Err(Error::ContinuationFailed {
                        branch: String::new(),
                        param: p,
                    });
                }
            }
        }
    }
    Ok(z)
}

fn mark_collisions(branches: &mut [Branch], tol: f64) {
    let last: Vec<Complex64> = branches
        .iter()
        .map(|b| b.points.last().map(|p| p.z).unwrap_or_default())
        .collect();
    for i in 0..branches.len() {
        for j in (i + 1)..branches.len() {
            if (last[i] - last[j]).norm() < tol {
                for k in [i, j] {
                    if let Some(p) = branches[k].points.last_mut() {
                        p.collision = true;
                    }
                }
            }
        }
    }
}

/// Exceptional point: a double root of `eta` on sheet II.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpResult {
    pub g: f64,
    pub e_d: f64,
    pub z: Complex64,
    /// `|eta(z)|` at the solution.
    pub res_eta: f64,
    /// `|eta'(z)|` at the solution.
    pub res_eta_prime: f64,
    pub iterations: usize,
}

impl EpResult {
    /// The template model moved onto the exceptional point.
    pub fn model(&self, template: &ChainModel) -> ChainModel {
        template.with_g(self.g).with_e_d(self.e_d)
    }
}

/// Starting point for [`find_ep`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpSeed {
    pub g: f64,
    pub e_d: f64,
    pub z: Complex64,
    /// Distance between the two closest resonances at the seed.
    pub distance: f64,
}

pub const EP_TOL: f64 = 1e-10;
const EP_MAX_ITER: usize = 100;

/// Solves `eta = eta' = 0` for `(z, g, E_d)` by damped Newton.
pub fn find_ep(template: &ChainModel, seed: &EpSeed) -> Result<EpResult> {
    find_ep_with(template, seed, EP_TOL)
}

pub fn find_ep_with(template: &ChainModel, seed: &EpSeed, tol: f64) -> Result<EpResult> {
    let template = template.validate()?;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ep tolerance must be > 0, got {tol}"
        )));
    }
    if !(seed.g > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "ep seed needs g > 0, got {}",
            seed.g
        )));
    }
    let mut x = Vector4::new(seed.z.re, seed.z.im, seed.g, seed.e_d);
    let mut f = ep_residual(&template, &x)?;
    let mut iterations = 0;
    while iterations < EP_MAX_ITER {
        let (r_eta, r_prime) = split_norms(&f);
        if r_eta < tol && r_prime < tol {
            break;
        }
        iterations += 1;
        let jac = ep_jacobian(&template, &x)?;
        let Some(step) = jac.lu().solve(&f) else {
            break;
        };
        let mut lambda = 1.0;
        let current = f.norm();
        let mut accepted = false;
        while lambda > 1e-6 {
            let trial = x - step * lambda;
            if let Ok(ft) = ep_residual(&template, &trial) {
                if ft.norm() < current || lambda == 1.0 && ft.norm() < 10.0 * current {
                    x = trial;
                    f = ft;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let (res_eta, res_eta_prime) = split_norms(&f);
    if !(res_eta < tol && res_eta_prime < tol) {
        return Err(Error::EpNotConverged {
            iterations,
            eta: res_eta,
            eta_prime: res_eta_prime,
        });
    }
    if x[2] <= 0.0 {
        return Err(Error::NonPositiveCoupling(x[2]));
    }
    Ok(EpResult {
        g: x[2],
        e_d: x[3],
        z: Complex64::new(x[0], x[1]),
        res_eta,
        res_eta_prime,
        iterations,
    })
}

fn split_norms(f: &Vector4<f64>) -> (f64, f64) {
    (f[0].hypot(f[1]), f[2].hypot(f[3]))
}

fn ep_point(template: &ChainModel, x: &Vector4<f64>) -> (ChainModel, SheetedEnergy) {
    let model = template.with_g(x[2]).with_e_d(x[3]);
    (
        model,
        SheetedEnergy::new(Complex64::new(x[0], x[1]), Sheet::II),
    )
}

fn ep_residual(template: &ChainModel, x: &Vector4<f64>) -> Result<Vector4<f64>> {
    let (model, z) = ep_point(template, x);
    let e = eta(&model, z)?;
    let d = eta_deriv(&model, z)?;
    Ok(Vector4::new(e.re, e.im, d.re, d.im))
}

fn ep_jacobian(template: &ChainModel, x: &Vector4<f64>) -> Result<Matrix4<f64>> {
    let (model, z) = ep_point(template, x);
    let g = model.g;
    let sigma = self_energy(&model, z)?;
    let sigma1 = self_energy_deriv(&model, z, 1)?;
    let sigma2 = self_energy_deriv(&model, z, 2)?;
    // analytic in z: d/dRe z = f', d/dIm z = i f'
    let d_eta_dz = 1.0 - g * g * sigma1;
    let d_prime_dz = -g * g * sigma2;
    let d_eta_dg = -2.0 * g * sigma;
    let d_prime_dg = -2.0 * g * sigma1;
    Ok(Matrix4::new(
        d_eta_dz.re,
        -d_eta_dz.im,
        d_eta_dg.re,
        -1.0,
        d_eta_dz.im,
        d_eta_dz.re,
        d_eta_dg.im,
        0.0,
        d_prime_dz.re,
        -d_prime_dz.im,
        d_prime_dg.re,
        0.0,
        d_prime_dz.im,
        d_prime_dz.re,
        d_prime_dg.im,
        0.0,
    ))
}

/// Smallest distance between two resonances of `model`, with their
/// midpoint.
pub fn closest_resonance_pair(model: &ChainModel) -> Result<Option<(f64, Complex64)>> {
    let res: Vec<Complex64> = discrete_states(model)?
        .into_iter()
        .filter(|s| s.class == StateClass::Resonance)
        .map(|s| s.z.value)
        .collect();
    let mut best: Option<(f64, Complex64)> = None;
    for i in 0..res.len() {
        for j in (i + 1)..res.len() {
            let d = (res[i] - res[j]).norm();
            if best.is_none_or(|(b, _)| d < b) {
                best = Some((d, (res[i] + res[j]) * 0.5));
            }
        }
    }
    Ok(best)
}

pub const DEFAULT_SEED_THRESHOLD: f64 = 0.02;

/// Seeds for [`find_ep`]: grid cells where the closest-pair distance is
/// a local minimum over the neighbouring cells, refined by a local pattern
/// search and kept if the pair then approaches within `threshold`.
/// Ordered by distance.
pub fn scan_for_ep_seeds(
    template: &ChainModel,
    g_range: (f64, f64),
    ed_range: (f64, f64),
    grid: (usize, usize),
    threshold: f64,
) -> Result<Vec<EpSeed>> {
    let template = template.validate()?;
    let (ng, ne) = grid;
    if ng == 0 || ne == 0 {
        return Err(Error::InvalidArgument("grid sizes must be positive".into()));
    }
    if !(g_range.1 > g_range.0) || !(ed_range.1 > ed_range.0) {
        return Ok(Vec::new());
    }
    let axis = |lo: f64, hi: f64, n: usize| -> Vec<f64> {
        if n == 1 {
            vec![0.5 * (lo + hi)]
        } else {
            (0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect()
        }
    };
    let gs: Vec<f64> = axis(g_range.0, g_range.1, ng)
        .into_iter()
        .filter(|&g| g > 0.0)
        .collect();
    let eds = axis(ed_range.0, ed_range.1, ne);

    let mut table = vec![vec![None; eds.len()]; gs.len()];
    for (i, &g) in gs.iter().enumerate() {
        for (j, &e) in eds.iter().enumerate() {
            table[i][j] = closest_resonance_pair(&template.with_g(g).with_e_d(e))?;
        }
    }

    let mut seeds = Vec::new();
    for i in 0..gs.len() {
        for j in 0..eds.len() {
            let Some((d, mid)) = table[i][j] else {
                continue;
            };
            let mut minimum = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    if di == 0 && dj == 0 {
                        continue;
                    }
                    let (a, b) = (i as i64 + di, j as i64 + dj);
                    if a < 0 || b < 0 || a >= gs.len() as i64 || b >= eds.len() as i64 {
                        continue;
                    }
                    if let Some((dn, _)) = table[a as usize][b as usize] {
                        if dn < d {
                            minimum = false;
                        }
                    }
                }
            }
            if !minimum {
                continue;
            }
            let cell = (
                (g_range.1 - g_range.0) / ng.max(2) as f64,
                (ed_range.1 - ed_range.0) / ne.max(2) as f64,
            );
            let seed = refine_seed(
                &template,
                EpSeed {
                    g: gs[i],
                    e_d: eds[j],
                    z: mid,
                    distance: d,
                },
                cell,
            )?;
            if seed.distance < threshold {
                seeds.push(seed);
            }
        }
    }
    seeds.sort_by(|a, b| a.distance.total_cmp(&b.distance));
    Ok(seeds)
}

/// Pattern search on the closest-pair distance starting from a grid
/// minimum. The distance has a square-root cusp at an exceptional point,
/// so a coarse grid alone rarely gets within a useful threshold.
fn refine_seed(template: &ChainModel, mut seed: EpSeed, cell: (f64, f64)) -> Result<EpSeed> {
    let (mut dg, mut de) = (0.5 * cell.0, 0.5 * cell.1);
    for _ in 0..200 {
        if dg < 1e-10 || seed.distance < 1e-9 {
            break;
        }
        let mut best = seed;
        for (sg, se) in [
            (-1.0, 0.0),
            (1.0, 0.0),
            (0.0, -1.0),
            (0.0, 1.0),
            (-1.0, -1.0),
            (-1.0, 1.0),
            (1.0, -1.0),
            (1.0, 1.0),
        ] {
            let g = seed.g + sg * dg;
            let e_d = seed.e_d + se * de;
            if g <= 0.0 {
                continue;
            }
            if let Some((d, z)) = closest_resonance_pair(&template.with_g(g).with_e_d(e_d))? {
                if d < best.distance {
                    best = EpSeed {
                        g,
                        e_d,
                        z,
                        distance: d,
                    };
                }
            }
        }
        if best.distance < seed.distance {
            seed = best;
        } else {
            dg *= 0.5;
            de *= 0.5;
        }
    }
    Ok(seed)
}

/// Distance between the two resonances closest to `ep.z` after shifting
/// `parameter` by `delta` away from the exceptional point.
pub fn ep_splitting(
    template: &ChainModel,
    ep: &EpResult,
    parameter: SweepParameter,
    delta: f64,
) -> Result<f64> {
    let base = ep.model(template);
    let value = match parameter {
        SweepParameter::EdLevel => ep.e_d + delta,
        SweepParameter::Coupling => ep.g + delta,
    };
    let model = parameter.apply(&base, value);
    let mut res: Vec<Complex64> = discrete_states(&model)?
        .into_iter()
        .filter(|s| s.class == StateClass::Resonance)
        .map(|s| s.z.value)
        .collect();
    if res.len() < 2 {
        return Err(Error::InvalidArgument(
            "fewer than two resonances near the exceptional point".into(),
        ));
    }
    res.sort_by(|a, b| (*a - ep.z).norm().total_cmp(&(*b - ep.z).norm()));
    Ok((res[0] - res[1]).norm())
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument(
            "slope fit needs at least two matching points".into(),
        ));
    }
    if xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument(
            "slope fit needs positive data".into(),
        ));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(sxy / sxx)
}

/// Log-log slope of the splitting against `delta`, which is 1/2 at a
/// second order exceptional point.
pub fn splitting_exponent(
    template: &ChainModel,
    ep: &EpResult,
    parameter: SweepParameter,
    deltas: &[f64],
) -> Result<f64> {
    let splits = deltas
        .iter()
        .map(|&d| ep_splitting(template, ep, parameter, d))
        .collect::<Result<Vec<_>>>()?;
    loglog_slope(&deltas.iter().map(|d| d.abs()).collect::<Vec<_>>(), &splits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seed(g: f64, e_d: f64, z: Complex64) -> EpSeed {
        EpSeed {
            g,
            e_d,
            z,
            distance: 0.0,
        }
    }

    #[test]
    fn parameter_names() {
        assert_eq!(
            "ed".parse::<SweepParameter>().unwrap(),
            SweepParameter::EdLevel
        );
        assert_eq!(
            "g".parse::<SweepParameter>().unwrap(),
            SweepParameter::Coupling
        );
        assert!("x".parse::<SweepParameter>().is_err());
    }

    #[test]
    fn ep_of_four_site_chain() {
        let template = ChainModel::semi_infinite(4, -0.4, 0.17);
        let ep = find_ep(&template, &seed(0.17, -0.4, Complex64::new(-0.41, -0.15))).unwrap();
        assert!((ep.g - 0.1728448).abs() < 1e-6, "{ep:?}");
        assert!((ep.e_d + 0.398197).abs() < 1e-6, "{ep:?}");
        assert!(ep.res_eta < EP_TOL && ep.res_eta_prime < EP_TOL);

        let mirrored = find_ep(&template, &seed(0.17, 0.4, Complex64::new(0.41, -0.15))).unwrap();
        assert!((mirrored.g - ep.g).abs() < 1e-9);
        assert!((mirrored.e_d + ep.e_d).abs() < 1e-9);
    }

    #[test]
    fn slope_fit() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(1.5)).collect();
        assert!((loglog_slope(&xs, &ys).unwrap() - 1.5).abs() < 1e-12);
        assert!(loglog_slope(&[1.0], &[1.0]).is_err());
    }

    #[test]
    fn empty_scan_ranges() {
        let m = ChainModel::semi_infinite(4, 0.0, 0.2);
        assert!(scan_for_ep_seeds(&m, (0.2, 0.2), (-0.5, 0.0), (5, 5), 0.02)
            .unwrap()
            .is_empty());
        assert!(scan_for_ep_seeds(&m, (0.1, 0.2), (-0.5, 0.0), (0, 5), 0.02).is_err());
    }

    #[test]
    fn trace_rejects_unsorted_values() {
        let m = ChainModel::semi_infinite(4, -0.5, 0.2);
        assert!(trace(&m, SweepParameter::EdLevel, &[0.1, 0.0]).is_err());
        assert!(trace(&m, SweepParameter::EdLevel, &[])
            .unwrap()
            .branches
            .is_empty());
    }

    #[test]
    fn short_trace_keeps_three_branches() {
        let m = ChainModel::semi_infinite(4, -0.5, 0.2);
        let values: Vec<f64> = (0..21).map(|i| -0.6 + 0.01 * i as f64).collect();
        let t = trace(&m, SweepParameter::EdLevel, &values).unwrap();
        assert_eq!(t.branches.len(), 3);
        assert_eq!(t.branches[0].label, "i");
        for b in &t.branches {
            assert_eq!(b.points.len(), values.len());
            assert!(b.points.iter().all(|p| !p.rematched));
        }
    }
}
