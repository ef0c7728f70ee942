//! Self-energy of the impurity level and its derivatives on both Riemann
//! sheets.
//!
//! The only multivalued ingredient is `s(z) = sqrt(z^2 - 1)`, evaluated as
//! `sqrt(z - 1) * sqrt(z + 1)` with principal roots. That product is
//! analytic off the cut `[-1, 1]` and behaves like `z` at infinity, which
//! defines sheet I. Sheet II is `-s(z)`: crossing the cut from the upper
//! half of sheet I lands on the lower half of sheet II, where the resonance
//! poles live.
//!
//! Real energies strictly inside the band are read as boundary values of
//! that continuation path. On sheet I this is the upper lip `E + i0`; on
//! sheet II it is the lower lip, which carries the same value. Either tag
//! therefore gives `s(E) = i sqrt(1 - E^2)` and the retarded self-energy.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ChainModel, ChainVariant};

/// Riemann sheet of `sqrt(z^2 - 1)` relative to the cut `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sheet {
    I,
    II,
}

impl Sheet {
    pub fn flip(self) -> Sheet {
        match self {
            Sheet::I => Sheet::II,
            Sheet::II => Sheet::I,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sheet::I => "I",
            Sheet::II => "II",
        }
    }
}

impl std::str::FromStr for Sheet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" | "1" => Ok(Sheet::I),
            "II" | "ii" | "2" => Ok(Sheet::II),
            other => Err(Error::InvalidArgument(format!("unknown sheet {other:?}"))),
        }
    }
}

/// A complex energy tagged with the sheet it lives on.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SheetedEnergy {
    pub value: Complex64,
    pub sheet: Sheet,
}

impl SheetedEnergy {
    pub fn new(value: Complex64, sheet: Sheet) -> Self {
        SheetedEnergy { value, sheet }
    }

    /// Point on the physical sheet.
    pub fn physical(value: Complex64) -> Self {
        SheetedEnergy::new(value, Sheet::I)
    }

    pub fn real(e: f64, sheet: Sheet) -> Self {
        SheetedEnergy::new(Complex64::new(e, 0.0), sheet)
    }
}

/// `sqrt(z^2 - 1)` on the tagged sheet.
pub fn sqrt_branch(z: SheetedEnergy) -> Result<Complex64> {
    let x = z.value;
    if x.im == 0.0 && x.re.abs() == 1.0 {
        return Err(Error::BranchPoint(x));
    }
    if x.im == 0.0 && x.re.abs() < 1.0 {
        return Ok(Complex64::new(0.0, ((1.0 - x.re) * (1.0 + x.re)).sqrt()));
    }
    // normalize a negative-zero imaginary part so real z outside the band
    // is treated the same way regardless of its sign bit
    let x = if x.im == 0.0 {
        Complex64::new(x.re, 0.0)
    } else {
        x
    };
    let one = Complex64::new(1.0, 0.0);
    let s = (x - one).sqrt() * (x + one).sqrt();
    Ok(match z.sheet {
        Sheet::I => s,
        Sheet::II => -s,
    })
}

/// Quantities shared by the self-energy and its derivatives.
struct Kernel {
    z: Complex64,
    s: Complex64,
    /// `(z - s)^(2 n_d)`; identically zero for the infinite chain.
    p: Complex64,
    n: f64,
}

fn kernel(model: &ChainModel, z: SheetedEnergy) -> Result<Kernel> {
    let s = sqrt_branch(z)?;
    let zv = z.value;
    let (p, n) = match model.variant {
        ChainVariant::SemiInfinite { n_d } => {
            // (z - s)(z + s) = 1; take whichever form avoids cancellation
            let w = if (zv + s).norm() >= (zv - s).norm() {
                (zv + s).inv()
            } else {
                zv - s
            };
            (w.powu(2 * n_d), n_d as f64)
        }
        ChainVariant::Infinite => (Complex64::new(0.0, 0.0), 0.0),
    };
    Ok(Kernel { z: zv, s, p, n })
}

/// Self-energy `Sigma(z)` on the tagged sheet.
///
/// Semi-infinite chain: `V^2 / s * (1 - (z - s)^(2 n_d))`.
/// Infinite chain: `V^2 / s`.
pub fn self_energy(model: &ChainModel, z: SheetedEnergy) -> Result<Complex64> {
    let k = kernel(model, z)?;
    let v2 = model.v * model.v;
    Ok((1.0 - k.p) / k.s * v2)
}

/// First (`order = 1`) or second (`order = 2`) derivative of the
/// self-energy, from the differentiated closed form.
pub fn self_energy_deriv(model: &ChainModel, z: SheetedEnergy, order: u8) -> Result<Complex64> {
    let k = kernel(model, z)?;
    let v2 = model.v * model.v;
    let Kernel { z, s, p, n } = k;
    let q = 1.0 - p;
    match order {
        1 => {
            let s2 = s * s;
            Ok((p * 2.0 * n / s2 - q * z / (s2 * s)) * v2)
        }
        2 => {
            let s2 = s * s;
            let s3 = s2 * s;
            let s4 = s2 * s2;
            let s5 = s4 * s;
            Ok((-p * 4.0 * n * n / s3 - p * z * 6.0 * n / s4 - q / s3 + q * z * z * 3.0 / s5) * v2)
        }
        other => Err(Error::InvalidArgument(format!(
            "derivative order must be 1 or 2, got {other}"
        ))),
    }
}

/// Band dispersion `E_k = -cos k`.
pub fn band_energy(k: f64) -> Result<f64> {
    check_wavenumber(k)?;
    Ok(-k.cos())
}

/// Coupling matrix element `V_k` between the impurity and the band state
/// with wavenumber `k`.
///
/// For the infinite chain the coupling is flat, `V / sqrt(2 pi)`, over the
/// full zone; only its square enters the self-energy.
pub fn coupling(model: &ChainModel, k: f64) -> Result<f64> {
    check_wavenumber(k)?;
    Ok(match model.variant {
        ChainVariant::SemiInfinite { n_d } => (2.0 / PI).sqrt() * model.v * (n_d as f64 * k).sin(),
        ChainVariant::Infinite => model.v / (2.0 * PI).sqrt(),
    })
}

fn check_wavenumber(k: f64) -> Result<()> {
    if (0.0..=PI).contains(&k) {
        Ok(())
    } else {
        Err(Error::WavenumberOutOfRange(k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sqrt_branch_real_axis() {
        let s = sqrt_branch(SheetedEnergy::real(2.0, Sheet::I)).unwrap();
        assert!((s - c(3f64.sqrt(), 0.0)).norm() < 1e-15);
        let s = sqrt_branch(SheetedEnergy::real(2.0, Sheet::II)).unwrap();
        assert!((s + c(3f64.sqrt(), 0.0)).norm() < 1e-15);
        let s = sqrt_branch(SheetedEnergy::real(-2.0, Sheet::I)).unwrap();
        assert!((s + c(3f64.sqrt(), 0.0)).norm() < 1e-15);
        let s = sqrt_branch(SheetedEnergy::new(c(-2.0, -0.0), Sheet::I)).unwrap();
        assert!((s + c(3f64.sqrt(), 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sqrt_branch_rejects_branch_points() {
        for e in [-1.0, 1.0] {
            for sheet in [Sheet::I, Sheet::II] {
                assert!(matches!(
                    sqrt_branch(SheetedEnergy::real(e, sheet)),
                    Err(Error::BranchPoint(_))
                ));
            }
        }
    }

    #[test]
    fn sqrt_branch_on_cut_is_retarded_boundary_value() {
        let above = sqrt_branch(SheetedEnergy::physical(c(0.3, 1e-12))).unwrap();
        for sheet in [Sheet::I, Sheet::II] {
            let on = sqrt_branch(SheetedEnergy::real(0.3, sheet)).unwrap();
            assert!((on - above).norm() < 1e-11);
        }
        let below_ii = sqrt_branch(SheetedEnergy::new(c(0.3, -1e-12), Sheet::II)).unwrap();
        assert!((below_ii - above).norm() < 1e-11);
    }

    #[test]
    fn self_energy_known_values() {
        let semi = ChainModel::semi_infinite(4, -0.5, 0.2);
        let r3 = 3f64.sqrt();
        let expected = (1.0 - (2.0 - r3).powi(8)) / r3;
        let got = self_energy(&semi, SheetedEnergy::real(2.0, Sheet::I)).unwrap();
        assert!((got - c(expected, 0.0)).norm() < 1e-15);
        assert!((expected - 0.5773349).abs() < 1e-7);

        let at_center = self_energy(&semi, SheetedEnergy::real(0.0, Sheet::I)).unwrap();
        assert_eq!(at_center, c(0.0, 0.0));

        let inf = ChainModel::infinite(0.0, 0.2);
        let got = self_energy(&inf, SheetedEnergy::real(2.0, Sheet::I)).unwrap();
        assert!((got - c(1.0 / r3, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn infinite_chain_derivative_closed_form() {
        let m = ChainModel::infinite(0.0, 0.2).with_v(1.3);
        let z = c(0.4, -0.3);
        for sheet in [Sheet::I, Sheet::II] {
            let sz = SheetedEnergy::new(z, sheet);
            let s = sqrt_branch(sz).unwrap();
            let expected = -z * 1.69 / (s * s * s);
            let got = self_energy_deriv(&m, sz, 1).unwrap();
            assert!((got - expected).norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_order_is_checked() {
        let m = ChainModel::infinite(0.0, 0.2);
        assert!(self_energy_deriv(&m, SheetedEnergy::real(2.0, Sheet::I), 3).is_err());
    }

    #[test]
    fn band_functions() {
        assert!(band_energy(PI / 2.0).unwrap().abs() < 1e-16);
        assert_eq!(band_energy(0.0).unwrap(), -1.0);
        assert!(band_energy(-0.1).is_err());
        assert!(band_energy(3.5).is_err());
        let m = ChainModel::semi_infinite(4, -0.5, 0.2);
        assert!(coupling(&m, PI / 4.0).unwrap().abs() < 1e-15);
        let v = coupling(&m, PI / 8.0).unwrap();
        assert!((v - (2.0 / PI).sqrt()).abs() < 1e-15);
    }
}
