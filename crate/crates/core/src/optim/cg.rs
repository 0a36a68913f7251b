//! Polak–Ribière conjugate gradient on central-difference gradients.

use super::linalg::{dot, norm};
use super::{drive, Evaluator, MinimizeProblem, MinimizeResult, Options, Status, Step};
use crate::error::Result;
use crate::scalar::Real;

/// Armijo constant for the sufficient-decrease test.
const C1: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 30;

/// Gradients come from `2d` objective calls per iterate, so the method needs
/// nothing but function values. The direction resets to steepest descent
/// every `d` iterations, whenever it stops being a descent direction, and
/// after a failed line search.
pub fn minimize_cg_fd<T, F>(problem: MinimizeProblem<T, F>) -> Result<MinimizeResult<T>>
where
    T: Real,
    F: FnMut(&[T]) -> T,
{
    drive(problem, "cg", run)
}

fn gradient<T: Real, F: FnMut(&[T]) -> T>(
    ev: &mut Evaluator<T, F>,
    x: &[T],
    opts: &Options<T>,
) -> Step<Vec<T>> {
    let mut probe = x.to_vec();
    let mut g = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let h = opts.fd_step.step(x[i]);
        let (up, down) = (x[i] + h, x[i] - h);
        probe[i] = up;
        let fp = ev.eval(&probe)?;
        probe[i] = down;
        let fm = ev.eval(&probe)?;
        probe[i] = x[i];
        // realized spacing, not 2h, absorbs rounding in x ± h
        g.push((fp - fm) / (up - down));
    }
    Ok(g)
}

fn run<T: Real, F: FnMut(&[T]) -> T>(
    ev: &mut Evaluator<T, F>,
    x0: &[T],
    opts: &Options<T>,
) -> Step<Status> {
    let d = x0.len();
    let tiny = T::lit(1e-25);
    let mut x = x0.to_vec();
    let mut fx = ev.eval(&x)?;
    let mut g = gradient(ev, &x, opts)?;
    let mut dir: Vec<T> = g.iter().map(|&v| -v).collect();
    let mut alpha_prev: Option<T> = None;
    let mut slope_prev = T::zero();
    let mut since_reset = 0;
    let mut stalled_iters = 0;

    loop {
        let gnorm = norm(&g);
        if gnorm <= opts.gtol {
            return Ok(Status::Converged);
        }
        let mut slope = dot(&g, &dir);
        let mut steepest = since_reset == 0;
        if !(slope < T::zero()) {
            dir = g.iter().map(|&v| -v).collect();
            slope = -gnorm * gnorm;
            steepest = true;
            since_reset = 0;
        }
        let alpha0 = match alpha_prev {
            Some(a) if slope_prev < T::zero() => {
                (a * slope_prev / slope).min(T::lit(100.0) * a)
            }
            _ => T::one().min(T::one() / norm(&dir)),
        };

        let Some((alpha, f_new)) = line_search(ev, &x, fx, &dir, slope, alpha0, opts)? else {
            if steepest {
                return Ok(Status::Stalled);
            }
            since_reset = 0;
            dir = g.iter().map(|&v| -v).collect();
            alpha_prev = None;
            continue;
        };

        for (xi, &di) in x.iter_mut().zip(&dir) {
            *xi = *xi + alpha * di;
        }
        let decrease = fx - f_new;
        fx = f_new;
        if T::lit(2.0) * decrease <= opts.ftol * (fx.abs() + (fx + decrease).abs()) + tiny {
            stalled_iters += 1;
            if stalled_iters >= 2 {
                return Ok(Status::Converged);
            }
        } else {
            stalled_iters = 0;
        }

        let g_new = gradient(ev, &x, opts)?;
        since_reset += 1;
        let beta = if since_reset >= d {
            since_reset = 0;
            T::zero()
        } else {
            let y: Vec<T> = g_new.iter().zip(&g).map(|(&a, &b)| a - b).collect();
            (dot(&g_new, &y) / dot(&g, &g)).max(T::zero())
        };
        for (di, &gi) in dir.iter_mut().zip(&g_new) {
            *di = -gi + beta * *di;
        }
        g = g_new;
        alpha_prev = Some(alpha);
        slope_prev = slope;
    }
}

/// Backtracking line search followed by a few parabolic refinement steps
/// on the evaluated points, so the accepted step is close to the line
/// minimizer. Every accepted point satisfies the Armijo condition. `None`
/// when no sufficient decrease was found.
fn line_search<T: Real, F: FnMut(&[T]) -> T>(
    ev: &mut Evaluator<T, F>,
    x: &[T],
    f0: T,
    dir: &[T],
    slope: T,
    alpha0: T,
    opts: &Options<T>,
) -> Step<Option<(T, T)>> {
    let c1 = T::lit(C1);
    let point = |a: T| -> Vec<T> { x.iter().zip(dir).map(|(&xi, &di)| xi + a * di).collect() };
    let armijo = |a: T, fa: T| fa <= f0 + c1 * a * slope;
    let min_alpha = T::epsilon() * T::lit(10.0) / norm(dir).max(T::epsilon());

    let mut alpha = alpha0;
    let mut fa = ev.eval(&point(alpha))?;
    let mut backtracks = 0;
    while !armijo(alpha, fa) {
        backtracks += 1;
        let next = slope_parabola(f0, slope, alpha, fa).unwrap_or(alpha * T::lit(0.5));
        alpha = next.max(T::lit(0.1) * alpha).min(T::lit(0.5) * alpha);
        if backtracks > MAX_BACKTRACKS || alpha < min_alpha || alpha < opts.xtol * T::lit(1e-6) {
            return Ok(None);
        }
        fa = ev.eval(&point(alpha))?;
    }

    let mut seen = vec![(T::zero(), f0), (alpha, fa)];
    let mut best = (alpha, fa);
    for round in 0..REFINE_STEPS {
        let candidate = if round == 0 {
            slope_parabola(f0, slope, alpha, fa).map(|a| a.min(T::lit(4.0) * alpha))
        } else {
            three_point_vertex(&seen, best.0)
        };
        let Some(a) = candidate.filter(|a| a.is_finite() && *a > T::zero()) else {
            break;
        };
        if seen.iter().any(|&(s, _)| (s - a).abs() <= T::lit(1e-3) * best.0) {
            break;
        }
        let f = ev.eval(&point(a))?;
        seen.push((a, f));
        seen.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
        if f < best.1 && armijo(a, f) {
            let gain = best.1 - f;
            best = (a, f);
            if gain <= opts.ftol * f.abs() {
                break;
            }
        } else if round > 0 {
            break;
        }
    }
    Ok(Some(best))
}

const REFINE_STEPS: usize = 4;

/// Minimizer of the parabola through `f(0)`, `f'(0)` and `f(α)`.
fn slope_parabola<T: Real>(f0: T, slope: T, a: T, fa: T) -> Option<T> {
    let curv = fa - f0 - slope * a;
    (curv > T::zero()).then(|| -slope * a * a / (T::lit(2.0) * curv))
}

/// Vertex of the parabola through `best` and its sorted neighbours, when
/// they bracket a minimum; otherwise an expansion step past the right end.
fn three_point_vertex<T: Real>(seen: &[(T, T)], best: T) -> Option<T> {
    let i = seen.iter().position(|&(a, _)| a == best)?;
    if i + 1 == seen.len() {
        return Some(T::lit(2.0) * best);
    }
    if i == 0 {
        return None;
    }
    let (a, fa) = seen[i - 1];
    let (b, fb) = seen[i];
    let (c, fc) = seen[i + 1];
    let p = (b - a) * (b - a) * (fb - fc) - (b - c) * (b - c) * (fb - fa);
    let q = (b - a) * (fb - fc) - (b - c) * (fb - fa);
    if q == T::zero() {
        return None;
    }
    Some(b - T::lit(0.5) * p / q)
}
