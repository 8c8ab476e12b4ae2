use proptest::prelude::*;

use telecloning::channel::{apply_disentanglement, build_channel, disentangle_sequentially, DisentanglementParams};
use telecloning::conversion::{rotation_r, rotation_t};
use telecloning::efficiency::{closed_form_report, cpro_general, moment_average_report};
use telecloning::protocol::{run_protocol, CopySlot, InputState, ModifiedBellBasis, Outcome};
use telecloning::quantum::{QubitLabel, C64};

const EPS: f64 = 1e-12;

fn unit() -> impl Strategy<Value = f64> {
    0.0..=1.0f64
}

fn params() -> impl Strategy<Value = DisentanglementParams> {
    [unit(), unit(), unit(), unit()].prop_map(DisentanglementParams::from_array)
}

fn complex() -> impl Strategy<Value = C64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| C64::new(re, im))
}

fn input() -> impl Strategy<Value = InputState> {
    (0.0..std::f64::consts::PI, 0.0..std::f64::consts::TAU).prop_map(|(t, p)| InputState::from_bloch(t, p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn modified_bell_basis_is_orthonormal(m in complex()) {
        let basis = ModifiedBellBasis::new(m);
        for a in Outcome::ALL {
            for b in Outcome::ALL {
                let ip = basis.state(a).inner(basis.state(b)).unwrap();
                let want = if a == b { 1.0 } else { 0.0 };
                prop_assert!((ip - want).norm() < EPS);
            }
        }
    }

    #[test]
    fn rotations_are_unitary(q in complex()) {
        prop_assert!(rotation_r(q).unitarity_deviation() < EPS);
        prop_assert!(rotation_t(q).unitarity_deviation() < EPS);
    }

    #[test]
    fn channel_is_normalized(p in params()) {
        prop_assert!((build_channel(&p).norm_sqr() - 1.0).abs() < EPS);
    }

    #[test]
    fn disentanglement_order_does_not_matter(p in params().prop_filter("not annihilated", |p| p.port + p.ancilla > 1e-3 || p.copy1 + p.copy2 > 1e-3)) {
        use QubitLabel::*;
        let closed = build_channel(&p);
        for order in [[P, A, C1, C2], [C2, C1, A, P], [A, C2, P, C1]] {
            let seq = disentangle_sequentially(&p, &order).unwrap();
            prop_assert!(seq.approx_eq(&closed, EPS));
        }
    }

    #[test]
    fn disentanglement_filter_preserves_norm(p in params(), n in 0.05..=1.0f64) {
        let s = apply_disentanglement(&build_channel(&p.with(QubitLabel::P, 1.0).unwrap()), QubitLabel::C1, C64::new(n, 0.0)).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < EPS);
    }

    #[test]
    fn run_probabilities_sum_to_one(inp in input(), p in params(), m in unit()) {
        let run = run_protocol(&inp, &p, m).unwrap();
        prop_assert!((run.total_probability() - 1.0).abs() < EPS);
        for r in &run.outcomes {
            for f in r.fidelities.into_iter().flatten() {
                prop_assert!((-EPS..=1.0 + EPS).contains(&f));
            }
        }
    }

    #[test]
    fn swapping_copies_swaps_results(inp in input(), p in params(), m in unit()) {
        let a = run_protocol(&inp, &p, m).unwrap();
        let b = run_protocol(&inp, &p.swap_copies(), m).unwrap();
        for (ra, rb) in a.outcomes.iter().zip(&b.outcomes) {
            prop_assert!((ra.probability - rb.probability).abs() < EPS);
            prop_assert!((ra.weighted_fidelity(CopySlot::First) - rb.weighted_fidelity(CopySlot::Second)).abs() < EPS);
        }
        let swapped = cpro_general(&p.swap_copies(), m, CopySlot::First);
        prop_assert!((cpro_general(&p, m, CopySlot::Second) - swapped).abs() < EPS);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn moment_average_matches_closed_forms(p in params(), m in unit()) {
        let exact = moment_average_report(&p, m).unwrap();
        let closed = closed_form_report(&p, m);
        for k in 0..2 {
            prop_assert!((exact.cpro[k] - closed.cpro[k]).abs() < EPS);
            for j in 0..4 {
                prop_assert!((exact.avg_fp[k][j] - closed.avg_fp[k][j]).abs() < EPS);
            }
        }
    }
}

#[test]
fn probability_normalization_on_grid() {
    let g: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
    let inp = InputState::from_bloch(1.1, 0.4);
    for &a in &g {
        for &b in &g {
            let p = DisentanglementParams::new(a, 1.0 - a * 0.5, b, 1.0 - b);
            for &m in &g {
                let run = run_protocol(&inp, &p, m).unwrap();
                assert!((run.total_probability() - 1.0).abs() < EPS);
            }
        }
    }
}
