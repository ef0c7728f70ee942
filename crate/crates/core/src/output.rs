//! CSV and JSON serialization of results.
//!
//! Floats in CSV are written in scientific notation with 17 significant
//! digits. JSON uses serde_json's shortest round-trip representation; a
//! non-finite value (an infinite `q` for instance) becomes `null`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::dispersion::{branch_label, DiscreteState, StateClass};
use crate::error::Result;
use crate::model::ChainModel;
use crate::selfenergy::SheetedEnergy;
use crate::spectrum::{BoundLine, SpectrumGrid};
use crate::sweep::{EpResult, Trajectory};

/// `x` with 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

/// One line of the `roots` output.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootRecord {
    /// `i`, `ii`, ... for resonances, empty for other classes.
    pub branch: String,
    #[serde(flatten)]
    pub state: DiscreteState,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootsReport {
    pub model: ChainModel,
    pub states: Vec<RootRecord>,
}

impl RootsReport {
    pub fn new(model: ChainModel, states: Vec<DiscreteState>) -> Self {
        let mut n = 0;
        let states = states
            .into_iter()
            .map(|state| {
                let branch = if state.class == StateClass::Resonance {
                    n += 1;
                    branch_label(n - 1)
                } else {
                    String::new()
                };
                RootRecord { branch, state }
            })
            .collect();
        RootsReport { model, states }
    }

    /// Eigenvalues with their sheets, suitable as Newton seeds.
    pub fn seeds(&self) -> Vec<SheetedEnergy> {
        self.states.iter().map(|r| r.state.z).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn write_roots_csv(out: &mut dyn Write, report: &RootsReport) -> Result<()> {
    writeln!(out, "branch,class,re_z,im_z,re_norm,im_norm,residual")?;
    for r in &report.states {
        let s = &r.state;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.branch,
            s.class.as_str(),
            fmt_float(s.z.value.re),
            fmt_float(s.z.value.im),
            fmt_float(s.norm.re),
            fmt_float(s.norm.im),
            fmt_float(s.residual),
        )?;
    }
    Ok(())
}

pub fn write_bic_csv(out: &mut dyn Write, energies: &[f64]) -> Result<()> {
    writeln!(out, "index,energy")?;
    for (k, e) in energies.iter().enumerate() {
        writeln!(out, "{},{}", k + 1, fmt_float(*e))?;
    }
    Ok(())
}

pub fn write_spectrum_csv(out: &mut dyn Write, grid: &SpectrumGrid) -> Result<()> {
    let mut header = vec!["omega".to_string(), "total".to_string()];
    for r in &grid.resonances {
        header.push(format!("f_{}", r.label));
        header.push(format!("fS_{}", r.label));
        header.push(format!("fA_{}", r.label));
    }
    header.push("continuum_residual".into());
    writeln!(out, "{}", header.join(","))?;
    for (k, w) in grid.omega.iter().enumerate() {
        let mut row = vec![fmt_float(*w), fmt_float(grid.total[k])];
        for r in &grid.resonances {
            row.push(fmt_float(r.component.total[k]));
            row.push(fmt_float(r.component.symmetric[k]));
            row.push(fmt_float(r.component.antisymmetric[k]));
        }
        row.push(fmt_float(grid.continuum_residual[k]));
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

pub fn write_lines_csv(out: &mut dyn Write, lines: &[BoundLine]) -> Result<()> {
    writeln!(out, "energy,weight")?;
    for l in lines {
        writeln!(out, "{},{}", fmt_float(l.energy), fmt_float(l.weight))?;
    }
    Ok(())
}

pub fn write_trajectory_csv(out: &mut dyn Write, trajectory: &Trajectory) -> Result<()> {
    writeln!(out, "param,branch,re_z,im_z")?;
    for (k, param) in trajectory.values.iter().enumerate() {
        for b in &trajectory.branches {
            if let Some(p) = b.points.get(k) {
                writeln!(
                    out,
                    "{},{},{},{}",
                    fmt_float(*param),
                    b.label,
                    fmt_float(p.z.re),
                    fmt_float(p.z.im)
                )?;
            }
        }
    }
    Ok(())
}

pub fn write_ep_csv(out: &mut dyn Write, eps: &[EpResult]) -> Result<()> {
    writeln!(out, "g,ed,re_z,im_z,res_eta,res_etaprime")?;
    for ep in eps {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_float(ep.g),
            fmt_float(ep.e_d),
            fmt_float(ep.z.re),
            fmt_float(ep.z.im),
            fmt_float(ep.res_eta),
            fmt_float(ep.res_eta_prime),
        )?;
    }
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}
