//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls the closed-form self-energy: every quantity is built
//! from the wavenumber integral over the band with a separate adaptive
//! Simpson rule.

#![allow(dead_code)]

use std::f64::consts::PI;

use fanochain::{ChainModel, ChainVariant};
use num_complex::Complex64;

/// Adaptive Simpson quadrature with Richardson correction.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    // the last clause stops refinement once the difference is pure rounding
    if depth == 0
        || diff.abs() <= 15.0 * tol
        || diff.abs() <= 64.0 * f64::EPSILON * (left.abs() + right.abs())
    {
        return left + right + diff / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Spectral density of the coupling over `k in [0, pi]`, so that
/// `Sigma(z) = int F(k) / (z + cos k) dk`.
pub fn coupling_density(model: &ChainModel, k: f64) -> f64 {
    let v2 = model.v * model.v;
    match model.variant {
        ChainVariant::SemiInfinite { n_d } => {
            let s = (n_d as f64 * k).sin();
            2.0 / PI * v2 * s * s
        }
        ChainVariant::Infinite => v2 / PI,
    }
}

fn coupling_density_deriv(model: &ChainModel, k: f64) -> f64 {
    let v2 = model.v * model.v;
    match model.variant {
        ChainVariant::SemiInfinite { n_d } => {
            let n = n_d as f64;
            2.0 / PI * v2 * n * (2.0 * n * k).sin()
        }
        ChainVariant::Infinite => 0.0,
    }
}

/// Self-energy off the real axis on the physical sheet from its integral
/// definition.
pub fn sigma_by_quadrature(model: &ChainModel, z: Complex64, tol: f64) -> Complex64 {
    let re = |k: f64| (coupling_density(model, k) / (z + k.cos())).re;
    let im = |k: f64| (coupling_density(model, k) / (z + k.cos())).im;
    // split into pieces so that the peak near cos k = -Re z is resolved
    let mut cuts = vec![0.0, PI];
    if z.re.abs() < 1.0 {
        cuts.push((-z.re).acos());
    }
    let n = 16;
    for i in 1..n {
        cuts.push(PI * i as f64 / n as f64);
    }
    cuts.sort_by(|a, b| a.total_cmp(b));
    let mut out = Complex64::new(0.0, 0.0);
    for w in cuts.windows(2) {
        out += Complex64::new(simpson(&re, w[0], w[1], tol), simpson(&im, w[0], w[1], tol));
    }
    out
}

/// Retarded self-energy `Sigma(E + i0)` for `|E| < 1`: principal value by
/// subtracting the pole, plus `-i pi F(k0) / sin k0`.
pub fn sigma_retarded(model: &ChainModel, e: f64, tol: f64) -> Complex64 {
    assert!(e.abs() < 1.0);
    let k0 = (-e).acos();
    let f0 = coupling_density(model, k0);
    let limit = -coupling_density_deriv(model, k0) / k0.sin();
    let integrand = |k: f64| {
        let d = k.cos() - k0.cos();
        if (k - k0).abs() < 1e-7 {
            limit
        } else {
            (coupling_density(model, k) - f0) / d
        }
    };
    // PV int_0^pi dk / (cos k - cos k0) vanishes, so only the subtracted
    // part remains
    let mut cuts: Vec<f64> = (0..=16).map(|i| PI * i as f64 / 16.0).collect();
    cuts.push(k0);
    cuts.sort_by(|a, b| a.total_cmp(b));
    let mut pv = 0.0;
    for w in cuts.windows(2) {
        if w[1] > w[0] {
            pv += simpson(&integrand, w[0], w[1], tol);
        }
    }
    Complex64::new(pv, -PI * f0 / k0.sin())
}

/// `-(w / pi) Im G_dd(E + i0)` with the quadrature self-energy.
pub fn spectrum_by_quadrature(model: &ChainModel, e: f64, tol: f64) -> f64 {
    let sigma = sigma_retarded(model, e, tol);
    let g = (Complex64::new(e - model.e_d, 0.0) - model.g * model.g * sigma).inv();
    -model.transition_weight / PI * g.im
}

/// `|a - b| <= rel |b| + abs`.
pub fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * b.abs() + abs
}
