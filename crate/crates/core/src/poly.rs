//! Dense real polynomials in ascending-power form and an Aberth-Ehrlich
//! solver for all of their complex roots.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `a + b` for ascending coefficient vectors.
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn scale(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|x| x * k).collect()
}

/// Chebyshev polynomial of the second kind `U_m`, `m >= 0`.
pub fn chebyshev_u(m: usize) -> Vec<f64> {
    // U_0 = 1, U_1 = 2z, U_{k+1} = 2z U_k - U_{k-1}
    let mut prev = vec![1.0];
    if m == 0 {
        return prev;
    }
    let mut cur = vec![0.0, 2.0];
    for _ in 1..m {
        let next = add(&mul(&[0.0, 2.0], &cur), &scale(&prev, -1.0));
        prev = cur;
        cur = next;
    }
    cur
}

/// Drops leading coefficients that are negligible relative to the largest
/// one, so the returned polynomial has a genuinely nonzero leading term.
pub fn trim(mut coeffs: Vec<f64>) -> Vec<f64> {
    let big = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.abs() <= 1e-14 * big) {
        coeffs.pop();
    }
    coeffs
}

/// Horner evaluation of the polynomial and its derivative.
pub fn eval_with_deriv(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `sum |a_k| r^k`, the scale of rounding errors in Horner evaluation at
/// modulus `r`.
fn abs_eval(coeffs: &[f64], r: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.abs())
}

/// All complex roots of a real polynomial given in ascending order.
///
/// Simultaneous Aberth-Ehrlich iteration from points on a circle whose
/// radius is the Fujiwara bound of the root moduli.
pub fn roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let coeffs = trim(coeffs.to_vec());
    let degree = coeffs.len() - 1;
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    let monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();

    let radius = (0..degree)
        .map(|k| {
            let e = (degree - k) as f64;
            let c = monic[k].abs();
            if k == 0 {
                (c / 2.0).powf(1.0 / e)
            } else {
                c.powf(1.0 / e)
            }
        })
        .fold(0.0f64, f64::max)
        * 2.0;
    let radius = if radius > 0.0 { radius } else { 1.0 };

    let mut z: Vec<Complex64> = (0..degree)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / degree as f64 + 0.4;
            Complex64::from_polar(radius, theta)
        })
        .collect();
    let mut converged = vec![false; degree];

    const MAX_ITER: usize = 2000;
    for _ in 0..MAX_ITER {
        for i in 0..degree {
            if converged[i] {
                continue;
            }
            let (p, dp) = eval_with_deriv(&monic, z[i]);
            // rounding-level residual: as good as this representation allows,
            // which is what stops the iteration at multiple roots
            let noise = 8.0 * f64::EPSILON * abs_eval(&monic, z[i].norm());
            if p.norm() <= noise {
                converged[i] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..degree)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                return Err(Error::PolynomialRoots(MAX_ITER));
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                converged[i] = true;
            }
        }
        if converged.iter().all(|&c| c) {
            return Ok(z);
        }
    }
    Err(Error::PolynomialRoots(MAX_ITER))
}
