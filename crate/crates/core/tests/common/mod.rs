//! Independent reference evaluation of the QAOA state.
//!
//! No gate kernels from the crate are used here: the cost layer is a
//! diagonal phase computed from cut values, and the mixer is the full
//! `2^n × 2^n` Kronecker product of `exp(-iβX)` applied as a dense
//! matrix-vector product.

#![allow(dead_code)]

use num_complex::Complex64;

pub const PRESET_P5: [f64; 10] = [2.083, 2.048, 1.792, 1.564, 1.387, 2.281, 5.962, 1.789, 3.563, 5.646];

pub fn canonical_edges() -> Vec<(usize, usize, f64)> {
    [(0, 3), (0, 4), (1, 3), (1, 4), (2, 3), (2, 4)]
        .into_iter()
        .map(|(u, v)| (u, v, 1.0))
        .collect()
}

/// Cut value with node 0 as the most significant bit of `index`.
pub fn cut(n: usize, edges: &[(usize, usize, f64)], index: usize) -> f64 {
    let bit = |q: usize| (index >> (n - 1 - q)) & 1;
    edges
        .iter()
        .filter(|&&(u, v, _)| bit(u) != bit(v))
        .map(|&(_, _, w)| w)
        .sum()
}

fn kron(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let (ra, rb) = (a.len(), b.len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); ra * rb]; ra * rb];
    for i in 0..ra {
        for j in 0..ra {
            for k in 0..rb {
                for l in 0..rb {
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

fn mixer_matrix(n: usize, beta: f64) -> Vec<Vec<Complex64>> {
    let c = Complex64::new(beta.cos(), 0.0);
    let s = Complex64::new(0.0, -beta.sin());
    let single = vec![vec![c, s], vec![s, c]];
    let mut m = vec![vec![Complex64::new(1.0, 0.0)]];
    for _ in 0..n {
        m = kron(&m, &single);
    }
    m
}

/// Probabilities of `exp(-iβ_p B) exp(-iγ_p C) … |+⟩^n` with
/// `C = Σ w (1 - Z_u Z_v) / 2`, the cut operator. The ansatz realizes
/// `exp(-iγ w Z_u Z_v)` per edge, which differs from `exp(+iγ w (1 - Z Z))`
/// only by a global phase; so the reference uses phase `exp(+2iγ cut)`.
pub fn probabilities(n: usize, edges: &[(usize, usize, f64)], betas: &[f64], gammas: &[f64]) -> Vec<f64> {
    let dim = 1usize << n;
    let amp = 1.0 / (dim as f64).sqrt();
    let mut psi = vec![Complex64::new(amp, 0.0); dim];
    let cuts: Vec<f64> = (0..dim).map(|i| cut(n, edges, i)).collect();
    for (&beta, &gamma) in betas.iter().zip(gammas) {
        for (a, &c) in psi.iter_mut().zip(&cuts) {
            *a *= Complex64::from_polar(1.0, 2.0 * gamma * c);
        }
        let m = mixer_matrix(n, beta);
        psi = m
            .iter()
            .map(|row| row.iter().zip(&psi).map(|(x, y)| x * y).sum())
            .collect();
    }
    psi.iter().map(|a| a.norm_sqr()).collect()
}

pub fn energy(n: usize, edges: &[(usize, usize, f64)], betas: &[f64], gammas: &[f64]) -> f64 {
    let probs = probabilities(n, edges, betas, gammas);
    -(0..probs.len()).map(|i| probs[i] * cut(n, edges, i)).sum::<f64>()
}

/// Minimum exact p=1 energy over a 100 × 100 grid on
/// `(γ, β) ∈ [0, 2π) × [0, π)`; returns `(energy, γ, β)`.
pub fn grid_minimum_p1(n: usize, edges: &[(usize, usize, f64)]) -> (f64, f64, f64) {
    let mut best = (f64::INFINITY, 0.0, 0.0);
    for i in 0..100 {
        let gamma = 2.0 * std::f64::consts::PI * i as f64 / 100.0;
        for j in 0..100 {
            let beta = std::f64::consts::PI * j as f64 / 100.0;
            let e = energy(n, edges, &[beta], &[gamma]);
            if e < best.0 {
                best = (e, gamma, beta);
            }
        }
    }
    best
}
