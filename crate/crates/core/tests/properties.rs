use std::collections::BTreeMap;

use num_complex::Complex64;
use proptest::prelude::*;
use qaoa_core::graph::{complement, index_to_bits};
use qaoa_core::{
    brute_force_maxcut, build_qaoa_circuit, energy_from_counts, graph, Circuit, Counts, Gate, GateOp,
    MaxCutInstance, QaoaParams, StateVector,
};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = MaxCutInstance> {
    (1usize..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let m = pairs.len();
        (
            proptest::sample::subsequence(pairs, 0..=m),
            proptest::collection::vec(0.0f64..3.0, m),
        )
            .prop_map(move |(edges, ws)| {
                let ws = ws[..edges.len()].to_vec();
                MaxCutInstance::new(n, edges, ws).unwrap()
            })
    })
}

fn bits_for(g: &MaxCutInstance, index: usize) -> String {
    index_to_bits(index % (1 << g.n()), g.n())
}

fn gate_strategy(n: usize) -> impl Strategy<Value = Gate<f64>> {
    let q = 0..n;
    prop_oneof![
        q.clone().prop_map(Gate::H),
        q.clone().prop_map(Gate::X),
        q.clone().prop_map(Gate::Y),
        q.clone().prop_map(Gate::Z),
        (q.clone(), -10.0f64..10.0).prop_map(|(q, t)| Gate::Rx(q, t)),
        (q.clone(), -10.0f64..10.0).prop_map(|(q, t)| Gate::Rz(q, t)),
        (q.clone(), 1..n).prop_map(move |(c, off)| Gate::Cnot { control: c, target: (c + off) % n }),
    ]
}

fn random_state(n: usize) -> impl Strategy<Value = StateVector> {
    proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map("zero vector", |v| {
        let norm: f64 = v.iter().map(|(a, b)| a * a + b * b).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| {
            StateVector::from_amplitudes(v.iter().map(|&(a, b)| Complex64::new(a / norm, b / norm)).collect())
                .unwrap()
        })
    })
}

fn max_amp_diff(a: &StateVector, b: &StateVector) -> f64 {
    a.amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

proptest! {
    #[test]
    fn cut_is_complement_symmetric_and_bounded(g in graph_strategy(8), idx in 0usize..256) {
        let b = bits_for(&g, idx);
        let c = g.cut_value(&b).unwrap();
        prop_assert_eq!(c, g.cut_value(&complement(&b)).unwrap());
        prop_assert!(c >= 0.0 && c <= g.total_weight() + 1e-12);
    }

    #[test]
    fn brute_force_matches_reenumeration(g in graph_strategy(10)) {
        let bf = brute_force_maxcut(&g).unwrap();
        let n = g.n();
        let mut best = f64::NEG_INFINITY;
        let mut optima = Vec::new();
        for i in 0..1usize << n {
            let bits: String = (0..n).map(|k| if (i >> (n - 1 - k)) & 1 == 1 { '1' } else { '0' }).collect();
            let mut cut = 0.0;
            for (u, v, w) in g.weighted_edges() {
                if bits.as_bytes()[u] != bits.as_bytes()[v] {
                    cut += w;
                }
            }
            if cut > best {
                best = cut;
                optima.clear();
            }
            if cut == best {
                optima.push(bits);
            }
        }
        prop_assert_eq!(bf.value, best);
        prop_assert_eq!(bf.optima.iter().cloned().collect::<Vec<_>>(), optima);
        for b in &bf.optima {
            prop_assert!(bf.optima.contains(&complement(b)));
        }
    }

    #[test]
    fn edge_list_round_trip(g in graph_strategy(8)) {
        let back = MaxCutInstance::parse_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn gates_preserve_norm(
        state in random_state(4),
        gates in proptest::collection::vec(gate_strategy(4), 1..40),
    ) {
        let mut s = state;
        for g in &gates {
            s.apply(g).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn involutions_restore_state(state in random_state(3), q in 0usize..3, off in 1usize..3) {
        let t = (q + off) % 3;
        for g in [Gate::H(q), Gate::X(q), Gate::Z(q), Gate::Cnot { control: q, target: t }] {
            let mut s = state.clone();
            s.apply(&g).unwrap();
            s.apply(&g).unwrap();
            prop_assert!(max_amp_diff(&s, &state) < 1e-12, "{}", g.name());
        }
    }

    #[test]
    fn rz_keeps_probabilities(state in random_state(3), q in 0usize..3, theta in -20.0f64..20.0) {
        let before = state.probabilities();
        let after = state.apply_gate(&GateOp::new(Gate::Rz(q, theta))).unwrap().probabilities();
        for (a, b) in before.iter().zip(&after) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma_zero_is_neutral(g in graph_strategy(6), betas in proptest::collection::vec(-7.0f64..7.0, 0..4)) {
        let p = betas.len();
        let params = QaoaParams::new(betas, vec![0.0; p]).unwrap();
        let s = build_qaoa_circuit(&g, &params).simulate().unwrap();
        prop_assert!((s.expectation_cut(&g).unwrap() - g.total_weight() / 2.0).abs() < 1e-9);
    }

    #[test]
    fn beta_shift_by_pi_is_invisible(
        g in graph_strategy(5),
        angles in proptest::collection::vec(-4.0f64..4.0, 2..=6),
    ) {
        let p = angles.len() / 2;
        let (betas, gammas) = (angles[..p].to_vec(), angles[p..2 * p].to_vec());
        let shifted: Vec<f64> = betas.iter().map(|b| b + std::f64::consts::PI).collect();
        let a = build_qaoa_circuit(&g, &QaoaParams::new(betas, gammas.clone()).unwrap()).simulate().unwrap();
        let b = build_qaoa_circuit(&g, &QaoaParams::new(shifted, gammas).unwrap()).simulate().unwrap();
        for (x, y) in a.probabilities().iter().zip(&b.probabilities()) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn gate_count_law(g in graph_strategy(7), p in 0usize..5) {
        let params = QaoaParams::new(vec![0.1; p], vec![0.2; p]).unwrap();
        let c = build_qaoa_circuit(&g, &params);
        prop_assert_eq!(c.len(), g.n() + p * (3 * g.edges().len() + g.n()));
    }

    #[test]
    fn energy_bounds_and_complement_invariance(
        g in graph_strategy(6),
        entries in proptest::collection::vec((0usize..64, 1u64..50), 1..20),
    ) {
        let n = g.n();
        let mut map = BTreeMap::new();
        let mut flipped = BTreeMap::new();
        for (i, c) in entries {
            let b = bits_for(&g, i);
            *flipped.entry(complement(&b)).or_insert(0) += c;
            *map.entry(b).or_insert(0) += c;
        }
        let counts = Counts::from_map(n, map).unwrap();
        let e = energy_from_counts(&counts, &g).unwrap();
        let max = brute_force_maxcut(&g).unwrap().value;
        prop_assert!(e <= 1e-12 && e >= -max - 1e-12);
        let e2 = energy_from_counts(&Counts::from_map(n, flipped).unwrap(), &g).unwrap();
        prop_assert!((e - e2).abs() < 1e-12);
    }
}

#[test]
fn canonical_facts() {
    let g = MaxCutInstance::canonical();
    let bf = brute_force_maxcut(&g).unwrap();
    assert_eq!(bf.value, 6.0);
    assert_eq!(bf.optima.iter().map(String::as_str).collect::<Vec<_>>(), ["00011", "11100"]);
    assert_eq!(g.cut_value("00001").unwrap(), 3.0);
    assert!(g.has_edge(0, 3));
    let parsed = MaxCutInstance::parse_edge_list("5\n0 3\n0 4\n1 3\n1 4\n2 3\n2 4\n").unwrap();
    assert_eq!(parsed, g);
    assert!(graph::MaxCutInstance::<f64>::parse_edge_list("2\n0 2\n").is_err());
}

#[test]
fn counts_of_circuit_runs_are_conserved() {
    let g = MaxCutInstance::canonical();
    let c: Circuit = build_qaoa_circuit(&g, &QaoaParams::new(vec![0.3], vec![0.7]).unwrap());
    for shots in [1, 17, 1000] {
        let counts = qaoa_core::run_circuit(&c, &qaoa_core::RunMode::Sampled { shots, seed: 4 })
            .unwrap()
            .into_counts()
            .unwrap();
        assert_eq!(counts.shots(), shots);
        assert_eq!(counts.iter().map(|(_, c)| c).sum::<u64>(), shots);
    }
}
