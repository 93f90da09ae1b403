mod common;

use std::f64::consts::TAU;

use ion_zeno::dynamics::*;
use ion_zeno::fock::{CouplingConstants, ModeVector, SidebandPattern};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn complex(max: f64) -> impl Strategy<Value = C64> {
    (0.0..max, 0.0..TAU).prop_map(|(r, th)| C64::from_polar(r, th))
}

fn block() -> impl Strategy<Value = BlockSystem> {
    (complex(2.0), complex(20.0))
        .prop_map(|(a, b)| BlockSystem::three_level(a + C64::new(0.05, 0.0), b))
}

fn state(dim: usize) -> impl Strategy<Value = VibronicState> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim).prop_filter_map("nonzero", |v| {
        VibronicState::normalized(v.into_iter().map(|(re, im)| C64::new(re, im)).collect()).ok()
    })
}

fn padded(h: &[Vec<C64>]) -> common::Mat3 {
    let mut m = [[C64::new(0.0, 0.0); 3]; 3];
    for (i, row) in h.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            m[i][j] = *c;
        }
    }
    m
}

fn period(b: &BlockSystem) -> f64 {
    TAU / b.omega()
}

proptest! {
    #[test]
    fn closed_form_matches_taylor_exponential(b in block(), u in -3.0..3.0f64) {
        let t = u * period(&b);
        let want = common::taylor_expm(&padded(&b.hamiltonian()), t);
        let got = analytic_evolution(&b, t);
        for i in 0..3 {
            for j in 0..3 {
                prop_assert!((got[i][j] - want[i][j]).norm() <= 1e-9, "{i}{j}: {} vs {}", got[i][j], want[i][j]);
            }
        }
    }

    #[test]
    fn propagators_agree(b in block(), s in state(3), u in -3.0..3.0f64) {
        let t = u * period(&b);
        let fast = propagate_analytic(&b, &s, t).unwrap();
        let slow = propagate_oracle(&b, &s, t).unwrap();
        prop_assert!(fast.max_deviation(&slow) <= 1e-10);
    }

    #[test]
    fn norm_is_preserved(b in block(), s in state(3), u in -3.0..3.0f64) {
        let out = propagate_analytic(&b, &s, u * period(&b)).unwrap();
        prop_assert!((out.norm_sqr().sqrt() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn evolution_is_periodic(b in block(), s in state(3), u in -3.0..3.0f64) {
        let t = u * period(&b);
        let now = propagate_analytic(&b, &s, t).unwrap();
        let later = propagate_analytic(&b, &s, t + period(&b)).unwrap();
        prop_assert!(now.max_deviation(&later) <= 1e-10);
    }

    #[test]
    fn evolution_is_reversible(b in block(), s in state(3), u in -3.0..3.0f64) {
        let t = u * period(&b);
        let there = propagate_analytic(&b, &s, t).unwrap();
        let back = propagate_analytic(&b, &there, -t).unwrap();
        prop_assert!(back.max_deviation(&s) <= 1e-10);
    }

    #[test]
    fn survival_reduces_to_chi_formula(b in block(), u in -3.0..3.0f64) {
        let t = u * period(&b);
        let start = VibronicState::basis_state(3, Level::One).unwrap();
        let out = propagate_analytic(&b, &start, t).unwrap();
        let chi = b.chi().unwrap().norm();
        let p = out.amplitudes()[0].norm_sqr();
        prop_assert!((p - survival_probability(chi, b.omega(), t)).abs() <= 1e-12);
        prop_assert!((p - common::survival_curve(chi, b.omega() * t)).abs() <= 1e-12);
    }

    #[test]
    fn eigenpairs_satisfy_eigen_equation(b in block()) {
        let h = padded(&b.hamiltonian());
        let eps = b.epsilon_tilde();
        let mut values: Vec<f64> = Vec::new();
        for (lambda, v) in eigensystem(&b) {
            let norm: f64 = v.iter().map(|c| c.norm_sqr()).sum();
            prop_assert!((norm - 1.0).abs() <= 1e-12);
            for i in 0..3 {
                let hv: C64 = (0..3).map(|j| h[i][j] * v[j]).sum();
                prop_assert!((hv - v[i] * lambda).norm() <= 1e-12 * (1.0 + eps));
            }
            values.push(lambda);
        }
        values.sort_by(f64::total_cmp);
        prop_assert!((values[0] + eps).abs() <= 1e-12 * eps);
        prop_assert_eq!(values[1], 0.0);
        prop_assert!((values[2] - eps).abs() <= 1e-12 * eps);
    }

    #[test]
    fn two_level_block_is_rabi(a in complex(3.0), s in state(2), t in -10.0..10.0f64) {
        let shape = classify_block(&ModeVector::new(1, 0, 0), &SidebandPattern::new(ModeVector::new(1, 0, 0), ModeVector::new(1, 0, 0)));
        let b = BlockSystem::from_couplings(shape.basis().to_vec(), Some(a), None).unwrap();
        let start = VibronicState::basis_state(2, Level::One).unwrap();
        let p1 = level_probabilities(&propagate_analytic(&b, &start, t).unwrap())[0];
        prop_assert!((p1 - (a.norm() * t).cos().powi(2)).abs() <= 1e-12);
        let fast = propagate_analytic(&b, &s, t).unwrap();
        let slow = propagate_oracle(&b, &s, t).unwrap();
        prop_assert!(fast.max_deviation(&slow) <= 1e-10);
    }
}

#[test]
fn built_blocks_agree_with_taylor_exponential() {
    let g = CouplingConstants::new(C64::new(0.3, -0.4), C64::new(-1.1, 0.2)).unwrap();
    let r = ModeVector::new(1, 0, 1);
    let l = ModeVector::new(0, 2, 0);
    for x in 1..4 {
        for y in 2..5 {
            let n = ModeVector::new(x, y, 1);
            let b = build_block(&n, &SidebandPattern::new(r, l), &g).unwrap();
            assert_eq!(b.dimension(), 3);
            for k in 0..20 {
                let t = 0.37 * k as f64;
                let want = common::taylor_expm(&padded(&b.hamiltonian()), t);
                let got = analytic_evolution(&b, t);
                for i in 0..3 {
                    for j in 0..3 {
                        assert!((got[i][j] - want[i][j]).norm() <= 1e-10);
                    }
                }
            }
        }
    }
}
