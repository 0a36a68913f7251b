//! Unconstrained linear-approximation trust-region method in the style of
//! COBYLA.
//!
//! The iterate carries a simplex of `d + 1` evaluated points. The linear
//! interpolant through the simplex gives a model gradient; the trial step is
//! the model minimizer on the sphere of radius `ρ` around the best vertex.
//! `ρ` only ever shrinks, and only when the model fails while the simplex
//! geometry is acceptable. Otherwise a geometry step repairs the simplex.

use super::linalg::{norm, Lu};
use super::{drive, Evaluator, MinimizeProblem, MinimizeResult, Options, Status, Step};
use crate::error::Result;
use crate::scalar::Real;

/// Trial steps with actual/predicted decrease below this count as failures.
const ACCEPT_RATIO: f64 = 0.1;
/// Vertices farther than this many radii from the best are replaced.
const FAR_FACTOR: f64 = 2.1;
/// Minimum distance of a vertex from its opposite face, in radii.
const FLAT_FACTOR: f64 = 0.25;
const SINGULAR_TOL: f64 = 1e-12;
/// Re-initializations in a row without progress before giving up.
const MAX_REINITS: usize = 3;

pub fn minimize_cobyla_like<T, F>(problem: MinimizeProblem<T, F>) -> Result<MinimizeResult<T>>
where
    T: Real,
    F: FnMut(&[T]) -> T,
{
    drive(problem, "cobyla", run)
}

struct Simplex<T> {
    points: Vec<Vec<T>>,
    values: Vec<T>,
}

impl<T: Real> Simplex<T> {
    fn best(&self) -> usize {
        (0..self.values.len())
            .min_by(|&a, &b| self.values[a].partial_cmp(&self.values[b]).unwrap())
            .unwrap()
    }

    fn others(&self, best: usize) -> Vec<usize> {
        (0..self.points.len()).filter(|&i| i != best).collect()
    }

    /// Rows `x_i - x_best` for the non-best vertices.
    fn offsets(&self, best: usize, others: &[usize]) -> Vec<Vec<T>> {
        others
            .iter()
            .map(|&i| sub(&self.points[i], &self.points[best]))
            .collect()
    }
}

fn sub<T: Real>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

fn axis_simplex<T: Real, F: FnMut(&[T]) -> T>(
    ev: &mut Evaluator<T, F>,
    center: &[T],
    f_center: T,
    rho: T,
) -> Step<Simplex<T>> {
    let d = center.len();
    let mut points = vec![center.to_vec()];
    let mut values = vec![f_center];
    for i in 0..d {
        let mut p = center.to_vec();
        p[i] = p[i] + rho;
        values.push(ev.eval(&p)?);
        points.push(p);
    }
    Ok(Simplex { points, values })
}

fn run<T: Real, F: FnMut(&[T]) -> T>(
    ev: &mut Evaluator<T, F>,
    x0: &[T],
    opts: &Options<T>,
) -> Step<Status> {
    let d = x0.len();
    let mut rho = opts.rho_start;
    let rho_end = opts.rho_end;
    let f0 = ev.eval(x0)?;
    let mut sim = match &opts.initial_simplex {
        Some(points) => {
            let mut values = Vec::with_capacity(d + 1);
            for p in points {
                values.push(ev.eval(p)?);
            }
            Simplex {
                points: points.clone(),
                values,
            }
        }
        None => axis_simplex(ev, x0, f0, rho)?,
    };
    let mut reinits = 0;

    loop {
        let best = sim.best();
        let others = sim.others(best);
        let xb = sim.points[best].clone();
        let fb = sim.values[best];
        let offsets = sim.offsets(best, &others);
        let scale = rho.max(offsets.iter().map(|r| norm(r)).fold(T::zero(), T::max));
        let lu = Lu::factor(offsets.clone(), T::lit(SINGULAR_TOL).max(T::epsilon() * T::lit(100.0)));
        let Some(lu) = lu.filter(|_| scale.is_finite()) else {
            reinits += 1;
            if reinits > MAX_REINITS {
                return Ok(Status::Stalled);
            }
            sim = axis_simplex(ev, &xb, fb, rho)?;
            continue;
        };

        let diffs: Vec<T> = others.iter().map(|&i| sim.values[i] - fb).collect();
        let grad = lu.solve(&diffs);
        let gnorm = norm(&grad);

        let mut model_ok = false;
        if gnorm > T::zero() && gnorm.is_finite() {
            let step: Vec<T> = grad.iter().map(|&g| -rho * g / gnorm).collect();
            let trial: Vec<T> = xb.iter().zip(&step).map(|(&x, &s)| x + s).collect();
            let f_trial = ev.eval(&trial)?;
            let predicted = rho * gnorm;
            let ratio = (fb - f_trial) / predicted;
            model_ok = ratio >= T::lit(ACCEPT_RATIO);

            // the trial point replaces the vertex whose swap keeps the most volume
            let lambda = lu.solve_transpose(&step);
            let j = (0..others.len())
                .max_by(|&a, &b| {
                    let score = |k: usize| {
                        lambda[k].abs() * (norm(&offsets[k]) / rho).max(T::one())
                    };
                    score(a).partial_cmp(&score(b)).unwrap()
                })
                .unwrap();
            sim.points[others[j]] = trial;
            sim.values[others[j]] = f_trial;
            if f_trial < fb {
                reinits = 0;
            }
        }
        if model_ok {
            continue;
        }

        // model failed: repair geometry if needed, else shrink the radius
        if let Some(repaired) = geometry_step(&sim, rho, &grad)? {
            let (slot, point) = repaired;
            let f = ev.eval(&point)?;
            sim.points[slot] = point;
            sim.values[slot] = f;
            continue;
        }
        if rho <= rho_end {
            return Ok(Status::Converged);
        }
        rho = rho * T::lit(0.5);
        if rho < T::lit(1.5) * rho_end {
            rho = rho_end;
        }
    }
}

/// If a vertex is too far from the best one or too close to the face
/// spanned by the others, propose a replacement point at distance `ρ`
/// that maximizes simplex volume. `Ok(None)` when geometry is acceptable.
#[allow(clippy::type_complexity)]
fn geometry_step<T: Real>(
    sim: &Simplex<T>,
    rho: T,
    grad: &[T],
) -> Step<Option<(usize, Vec<T>)>> {
    let best = sim.best();
    let others = sim.others(best);
    let offsets = sim.offsets(best, &others);
    let Some(lu) = Lu::factor(offsets.clone(), T::lit(SINGULAR_TOL)) else {
        // degenerate: fall back to an axis point on the farthest vertex
        let far = (0..others.len())
            .max_by(|&a, &b| norm(&offsets[a]).partial_cmp(&norm(&offsets[b])).unwrap())
            .unwrap();
        let mut p = sim.points[best].clone();
        p[far] = p[far] + rho;
        return Ok(Some((others[far], p)));
    };
    let d = others.len();
    // column k of the inverse: its norm is 1 / (distance of vertex k to the opposite face)
    let columns: Vec<Vec<T>> = (0..d)
        .map(|k| {
            let mut e = vec![T::zero(); d];
            e[k] = T::one();
            lu.solve(&e)
        })
        .collect();
    let far = (0..d)
        .filter(|&k| norm(&offsets[k]) > T::lit(FAR_FACTOR) * rho)
        .max_by(|&a, &b| norm(&offsets[a]).partial_cmp(&norm(&offsets[b])).unwrap());
    let flat = (0..d)
        .map(|k| (k, T::one() / norm(&columns[k])))
        .filter(|&(_, h)| h < T::lit(FLAT_FACTOR) * rho)
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .map(|(k, _)| k);
    let Some(k) = far.or(flat) else {
        return Ok(None);
    };
    let col = &columns[k];
    let cn = norm(col);
    let mut dir: Vec<T> = col.iter().map(|&c| rho * c / cn).collect();
    let slope: T = dir.iter().zip(grad).map(|(&a, &b)| a * b).sum();
    if slope > T::zero() {
        dir.iter_mut().for_each(|v| *v = -*v);
    }
    let point = sim.points[best]
        .iter()
        .zip(&dir)
        .map(|(&x, &s)| x + s)
        .collect();
    Ok(Some((others[k], point)))
}
