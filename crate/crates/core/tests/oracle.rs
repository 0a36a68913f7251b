mod common;

use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qaoa_core::{evaluate_qaoa, MaxCutInstance, QaoaParams, RunMode};

/// Exact energy of the canonical instance at the published p = 5 starting
/// point, frozen from the statevector path and matched by the dense oracle.
const PRESET_P5_ENERGY: f64 = -2.621_928_127_125_46;

/// 100 × 100 grid minimum of the exact p = 1 energy.
const GRID_P1_MIN: f64 = -4.291_613_932_799_14;

#[test]
fn published_start_energy_is_frozen() {
    let g = MaxCutInstance::canonical();
    let p = QaoaParams::from_flat(&common::PRESET_P5).unwrap();
    let e = evaluate_qaoa(&g, &p, &RunMode::Exact, None).unwrap().energy;
    assert_abs_diff_eq!(e, PRESET_P5_ENERGY, epsilon = 1e-12);
    let dense = common::energy(5, &common::canonical_edges(), &common::PRESET_P5[..5], &common::PRESET_P5[5..]);
    assert_abs_diff_eq!(dense, PRESET_P5_ENERGY, epsilon = 1e-12);
}

#[test]
fn grid_minimum_is_frozen() {
    let (e, gamma, beta) = common::grid_minimum_p1(5, &common::canonical_edges());
    assert_abs_diff_eq!(e, GRID_P1_MIN, epsilon = 1e-12);
    let g = MaxCutInstance::canonical();
    let p = QaoaParams::new(vec![beta], vec![gamma]).unwrap();
    let sim = evaluate_qaoa(&g, &p, &RunMode::Exact, None).unwrap().energy;
    assert_abs_diff_eq!(sim, e, epsilon = 1e-12);
}

fn small_graph() -> impl Strategy<Value = (usize, Vec<(usize, usize, f64)>)> {
    (2usize..=5).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let m = pairs.len();
        (
            Just(n),
            proptest::sample::subsequence(pairs, 0..=m),
            proptest::collection::vec(0.25f64..2.0, m),
        )
            .prop_map(|(n, edges, ws)| {
                let edges = edges.into_iter().zip(ws).map(|((u, v), w)| (u, v, w)).collect();
                (n, edges)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simulator_matches_dense_oracle(
        (n, edges) in small_graph(),
        angles in proptest::collection::vec(-7.0f64..7.0, 0..=6),
    ) {
        let p = angles.len() / 2;
        let (betas, gammas) = (&angles[..p], &angles[p..2 * p]);
        let g = MaxCutInstance::new(
            n,
            edges.iter().map(|&(u, v, _)| (u, v)).collect(),
            edges.iter().map(|&(_, _, w)| w).collect(),
        ).unwrap();
        let params = QaoaParams::new(betas.to_vec(), gammas.to_vec()).unwrap();
        let state = qaoa_core::build_qaoa_circuit(&g, &params).simulate().unwrap();
        let reference = common::probabilities(n, &edges, betas, gammas);
        for (a, b) in state.probabilities().iter().zip(&reference) {
            prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }
}
