mod common;

use fanochain::spectrum::{
    default_grid, degree_of_asymmetry, fano_amplitude, fano_profile, fano_q, green_spectrum,
    resonance_component, sum_rule, uniform_grid,
};
use fanochain::states::bound_weight;
use fanochain::{decompose, discrete_states, weights, BoundLine, ChainModel, StateClass};

fn coupling_panels() -> Vec<ChainModel> {
    let mut out = Vec::new();
    for g in [0.16, 0.1728, 0.2] {
        for e_d in [-0.6, -0.5, -0.4, -0.3, -0.2] {
            out.push(ChainModel::semi_infinite(4, e_d, g));
        }
    }
    out
}

#[test]
fn spectrum_is_non_negative() {
    let grid = default_grid();
    let mut models = coupling_panels();
    models.push(ChainModel::infinite(-0.6, 0.2));
    models.push(ChainModel::semi_infinite(3, 0.1, 0.6));
    for m in models {
        let f = green_spectrum(&m, &grid).unwrap();
        assert!(f.iter().all(|&x| x >= -1e-12), "{m:?}");
    }
}

#[test]
fn decomposition_closes_pointwise() {
    for m in coupling_panels() {
        let s = decompose(&m, &default_grid()).unwrap();
        let sum = s.resonance_sum();
        for ((t, r), c) in s.total.iter().zip(&sum).zip(&s.continuum_residual) {
            assert!((t - r - c).abs() <= 1e-12 * t.abs().max(1.0));
        }
        for r in &s.resonances {
            for k in 0..s.omega.len() {
                let c = &r.component;
                assert!(
                    (c.total[k] - c.symmetric[k] - c.antisymmetric[k]).abs()
                        <= 1e-12 * c.total[k].abs().max(1.0)
                );
            }
        }
    }
}

#[test]
fn green_spectrum_matches_quadrature_oracle() {
    let grid = uniform_grid(-0.99, 0.99, 199);
    for m in [
        ChainModel::semi_infinite(4, -0.5, 0.2),
        ChainModel::semi_infinite(2, 0.3, 0.35)
            .with_v(0.9)
            .with_transition_weight(3.0),
        ChainModel::infinite(-0.3, 0.2),
    ] {
        let f = green_spectrum(&m, &grid).unwrap();
        for (w, got) in grid.iter().zip(&f) {
            let want = common::spectrum_by_quadrature(&m, *w, 1e-11);
            assert!(
                common::close(*got, want, 1e-6, 1e-14),
                "{m:?} Omega={w}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn sum_rule_holds() {
    for m in [
        ChainModel::semi_infinite(4, -0.4, 0.16),
        ChainModel::semi_infinite(5, 0.6, 0.3),
        ChainModel::semi_infinite(4, 0.0, 0.2),
        ChainModel::infinite(0.0, 0.2).with_transition_weight(4.0),
    ] {
        let s = sum_rule(&m).unwrap();
        assert!(
            (s.total() - m.transition_weight).abs() < 1e-6,
            "{m:?}: {s:?}"
        );
    }
}

#[test]
fn uncoupled_level_is_a_single_line() {
    for e_d in [-0.3, 1.4] {
        let m = ChainModel::semi_infinite(4, e_d, 0.0).with_transition_weight(2.0);
        let s = decompose(&m, &default_grid()).unwrap();
        assert!(s.total.iter().all(|&x| x == 0.0));
        assert!(s.resonances.is_empty());
        assert_eq!(
            s.bound_lines,
            vec![BoundLine {
                energy: e_d,
                weight: 2.0
            }]
        );
    }
}

#[test]
fn bic_line_weight_is_the_residue() {
    // Sigma'(E_b) = -2 n_d / (1 - E_b^2) for V = 1
    let m = ChainModel::semi_infinite(4, 0.0, 0.2);
    let states = discrete_states(&m).unwrap();
    let bic = states.iter().find(|s| s.class == StateClass::Bic).unwrap();
    let expected = 1.0 / (1.0 + 0.04 * 8.0);
    assert!((bound_weight(&m, bic).unwrap() - expected).abs() < 1e-12);
    let s = decompose(&m, &default_grid()).unwrap();
    assert!(s
        .bound_lines
        .iter()
        .any(|l| l.energy == 0.0 && (l.weight - expected).abs() < 1e-12));
}

#[test]
fn fano_numbers_of_the_first_branch() {
    let m = ChainModel::semi_infinite(4, -0.5, 0.2);
    let s = decompose(&m, &default_grid()).unwrap();
    let first = &s.resonances[0];
    assert_eq!(first.label, "i");
    assert!((first.degree_of_asymmetry - 0.664).abs() < 0.664 * 5e-3);
    assert!((first.q - 3.313).abs() < 3.313 * 5e-3);
    // q from the closed form agrees with the quadratic it solves
    let da = first.degree_of_asymmetry;
    let q = (1.0 + (1.0 + da * da).sqrt()) / da;
    assert!((first.q - q).abs() < 1e-12 * q);
}

#[test]
fn second_branch_is_dominated_by_the_antisymmetric_part() {
    let m = ChainModel::semi_infinite(4, -0.5, 0.2);
    let s = decompose(&m, &default_grid()).unwrap();
    let peak = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let c = &s.resonances[0].component;
    assert!(peak(&c.symmetric) > 2.0 * peak(&c.antisymmetric));
    let c = &s.resonances[1].component;
    assert!(peak(&c.antisymmetric) > 2.0 * peak(&c.symmetric));
    let da: Vec<f64> = s
        .resonances
        .iter()
        .map(|r| r.degree_of_asymmetry.abs())
        .collect();
    assert!(da[1] > da[0] && da[2] > da[0], "{da:?}");
}

#[test]
fn weak_side_of_the_exceptional_point() {
    // below the EP the narrow resonance carries the spectrum and the broad
    // partner moves against E_d
    let m = ChainModel::semi_infinite(4, -0.4, 0.16);
    let s = decompose(&m, &default_grid()).unwrap();
    let peak = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let mut near: Vec<_> = s.resonances.iter().filter(|r| r.z.re < 0.0).collect();
    near.sort_by(|a, b| b.z.im.total_cmp(&a.z.im));
    let (narrow, broad) = (near[0], near[1]);
    assert!(peak(&narrow.component.total) > 3.0 * peak(&broad.component.total));
    assert!(broad.norm.re < 0.0 && narrow.norm.re > 0.0);
    assert!(!s.near_exceptional_point);
}

#[test]
fn components_blow_up_and_cancel_at_the_exceptional_point() {
    let template = ChainModel::semi_infinite(4, -0.4, 0.1728);
    let seed = fanochain::EpSeed {
        g: 0.1728,
        e_d: -0.398,
        z: num_complex::Complex64::new(-0.413, -0.151),
        distance: f64::NAN,
    };
    let ep = fanochain::find_ep(&template, &seed).unwrap();
    let m = ep.model(&template).with_e_d(ep.e_d - 1e-7);
    let s = decompose(&m, &default_grid()).unwrap();
    assert!(s.near_exceptional_point);
    let peak = |v: &[f64]| v.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let total = peak(&s.total);
    let pair: Vec<f64> = s.resonances[0]
        .component
        .total
        .iter()
        .zip(&s.resonances[1].component.total)
        .map(|(a, b)| a + b)
        .collect();
    assert!(peak(&s.resonances[0].component.total) > 10.0 * total);
    assert!(peak(&s.resonances[1].component.total) > 10.0 * total);
    assert!(peak(&pair) < 2.0 * total);
}

#[test]
fn resonance_component_is_a_rescaled_fano_profile() {
    for m in coupling_panels() {
        for state in discrete_states(&m)
            .unwrap()
            .iter()
            .filter(|s| s.class == StateClass::Resonance)
        {
            let w = weights(&m, state).unwrap();
            if w.norm.norm() > 1e2 {
                continue;
            }
            let q = fano_q(degree_of_asymmetry(&w), w.d_gamma_d_ed);
            let amp = fano_amplitude(&m, state, &w);
            let (eps, gamma) = (state.energy(), state.width());
            let xs = uniform_grid(-3.0, 3.0, 61);
            let omega: Vec<f64> = xs.iter().map(|x| eps + gamma * x).collect();
            let comp = resonance_component(&m, state, &w, &omega).unwrap();
            let scale = comp.total.iter().fold(0.0f64, |a, v| a.max(v.abs()));
            for (x, f) in xs.iter().zip(&comp.total) {
                let fano = amp * (fano_profile(*x, q) - 1.0);
                assert!(
                    (fano - f).abs() <= 0.02 * scale,
                    "{m:?} x={x}: {fano} vs {f}"
                );
            }
        }
    }
}

#[test]
fn infinite_chain_asymmetry_is_small_but_present() {
    for e_d in [-0.6, -0.3] {
        let m = ChainModel::infinite(e_d, 0.2);
        let s = decompose(&m, &default_grid()).unwrap();
        assert_eq!(s.resonances.len(), 1);
        let da = s.resonances[0].degree_of_asymmetry;
        assert!(da != 0.0 && da.abs() < 0.1, "E_d={e_d}: DA={da}");
        assert_eq!(s.bound_lines.len(), 2);
    }
}

#[test]
fn band_edge_points_are_rejected() {
    let m = ChainModel::semi_infinite(4, -0.5, 0.2);
    assert!(green_spectrum(&m, &[-1.0]).is_err());
    assert!(decompose(&m, &[0.0, 1.0]).is_err());
}
