//! Powell's direction-set method.

use super::{drive, Evaluator, MinimizeProblem, MinimizeResult, Options, Status, Step};
use crate::error::Result;
use crate::scalar::Real;

const GOLD: f64 = 1.618_033_988_749_895;
const CGOLD: f64 = 0.381_966_011_250_105;
const GLIMIT: f64 = 100.0;
const MAX_BRENT_ITERS: usize = 100;

/// Sequential line minimization along a direction set that starts as the
/// coordinate axes. After each sweep the net displacement replaces the
/// direction of largest decrease (subject to the usual Powell test).
pub fn minimize_powell<T, F>(problem: MinimizeProblem<T, F>) -> Result<MinimizeResult<T>>
where
    T: Real,
    F: FnMut(&[T]) -> T,
{
    drive(problem, "powell", run)
}

fn run<T: Real, F: FnMut(&[T]) -> T>(
    ev: &mut Evaluator<T, F>,
    x0: &[T],
    opts: &Options<T>,
) -> Step<Status> {
    let d = x0.len();
    let two = T::lit(2.0);
    let tiny = T::lit(1e-25);
    let mut x = x0.to_vec();
    let mut fx = ev.eval(&x)?;
    let mut dirs: Vec<Vec<T>> = (0..d)
        .map(|i| (0..d).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect();
    let line_tol = opts.xtol.max(T::epsilon().sqrt());

    loop {
        let f_start = fx;
        let x_start = x.clone();
        let mut biggest = T::zero();
        let mut ibig = 0;
        for (i, dir) in dirs.iter().enumerate() {
            let f_prev = fx;
            fx = line_minimize(ev, &mut x, dir, fx, line_tol)?;
            if f_prev - fx > biggest {
                biggest = f_prev - fx;
                ibig = i;
            }
        }
        if two * (f_start - fx) <= opts.ftol * (f_start.abs() + fx.abs()) + tiny {
            return Ok(Status::Converged);
        }
        let disp: Vec<T> = x.iter().zip(&x_start).map(|(&a, &b)| a - b).collect();
        let extrapolated: Vec<T> = x.iter().zip(&disp).map(|(&a, &b)| a + b).collect();
        let f_ext = ev.eval(&extrapolated)?;
        if f_ext < f_start {
            let a = f_start - fx - biggest;
            let b = f_start - f_ext;
            let t = two * (f_start - two * fx + f_ext) * a * a - biggest * b * b;
            if t < T::zero() {
                fx = line_minimize(ev, &mut x, &disp, fx, line_tol)?;
                dirs[ibig] = dirs[d - 1].clone();
                dirs[d - 1] = disp;
            }
        }
    }
}

/// Minimize along `dir` from `x` (value `fx`); moves `x` to the minimizer
/// and returns its value. Golden-ratio bracketing, then Brent's method.
fn line_minimize<T: Real, F: FnMut(&[T]) -> T>(
    ev: &mut Evaluator<T, F>,
    x: &mut Vec<T>,
    dir: &[T],
    fx: T,
    tol: T,
) -> Step<T> {
    if dir.iter().all(|&v| v == T::zero()) {
        return Ok(fx);
    }
    let base = x.clone();
    let mut phi = |t: T, ev: &mut Evaluator<T, F>| -> Step<T> {
        let p: Vec<T> = base.iter().zip(dir).map(|(&b, &u)| b + t * u).collect();
        ev.eval(&p)
    };
    let (ax, bx, cx, fb, bracket_best) = bracket(ev, &mut phi, fx)?;
    let (t_min, f_min) = if let Some(best) = bracket_best {
        best
    } else {
        brent(ev, &mut phi, ax, bx, cx, fb, tol)?
    };
    if f_min < fx {
        for (xi, (&b, &u)) in x.iter_mut().zip(base.iter().zip(dir)) {
            *xi = b + t_min * u;
        }
        Ok(f_min)
    } else {
        Ok(fx)
    }
}

type Bracket<T> = (T, T, T, T, Option<(T, T)>);

/// Golden-ratio expansion with parabolic extrapolation until
/// `f(b) ≤ f(a), f(c)`. A flat or unbounded direction returns early with
/// the best point seen.
fn bracket<T: Real, F: FnMut(&[T]) -> T>(
    ev: &mut Evaluator<T, F>,
    phi: &mut impl FnMut(T, &mut Evaluator<T, F>) -> Step<T>,
    fa0: T,
) -> Step<Bracket<T>> {
    let gold = T::lit(GOLD);
    let glimit = T::lit(GLIMIT);
    let tiny = T::lit(1e-20);
    let two = T::lit(2.0);
    let (mut ax, mut bx) = (T::zero(), T::one());
    let (mut fa, mut fb) = (fa0, phi(bx, ev)?);
    if fb > fa {
        std::mem::swap(&mut ax, &mut bx);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut cx = bx + gold * (bx - ax);
    let mut fc = phi(cx, ev)?;
    let mut expansions = 0;
    while fb > fc {
        expansions += 1;
        if expansions > 50 || !fc.is_finite() {
            return Ok((ax, bx, cx, fb, Some((cx, fc))));
        }
        let r = (bx - ax) * (fb - fc);
        let q = (bx - cx) * (fb - fa);
        let denom = two * (q - r).abs().max(tiny).copysign(q - r);
        let mut u = bx - ((bx - cx) * q - (bx - ax) * r) / denom;
        let ulim = bx + glimit * (cx - bx);
        let mut fu;
        if (bx - u) * (u - cx) > T::zero() {
            fu = phi(u, ev)?;
            if fu < fc {
                return Ok((bx, u, cx, fu, None));
            } else if fu > fb {
                return Ok((ax, bx, u, fb, None));
            }
            u = cx + gold * (cx - bx);
            fu = phi(u, ev)?;
        } else if (cx - u) * (u - ulim) > T::zero() {
            fu = phi(u, ev)?;
            if fu < fc {
                bx = cx;
                cx = u;
                u = cx + gold * (cx - bx);
                fb = fc;
                fc = fu;
                fu = phi(u, ev)?;
            }
        } else if (u - ulim) * (ulim - cx) >= T::zero() {
            u = ulim;
            fu = phi(u, ev)?;
        } else {
            u = cx + gold * (cx - bx);
            fu = phi(u, ev)?;
        }
        ax = bx;
        bx = cx;
        cx = u;
        fa = fb;
        fb = fc;
        fc = fu;
    }
    if fb == fa && fb == fc {
        // flat along this direction
        return Ok((ax, bx, cx, fb, Some((ax, fa))));
    }
    Ok((ax, bx, cx, fb, None))
}

/// Brent's one-dimensional minimizer on the bracket `(a, b, c)`.
fn brent<T: Real, F: FnMut(&[T]) -> T>(
    ev: &mut Evaluator<T, F>,
    phi: &mut impl FnMut(T, &mut Evaluator<T, F>) -> Step<T>,
    ax: T,
    bx: T,
    cx: T,
    fb: T,
    tol: T,
) -> Step<(T, T)> {
    let cgold = T::lit(CGOLD);
    let zeps = T::lit(1e-10).max(T::epsilon());
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let mut a = ax.min(cx);
    let mut b = ax.max(cx);
    let (mut x, mut w, mut v) = (bx, bx, bx);
    let (mut fx, mut fw, mut fv) = (fb, fb, fb);
    let mut d = T::zero();
    let mut e = T::zero();
    for _ in 0..MAX_BRENT_ITERS {
        let xm = half * (a + b);
        let tol1 = tol * x.abs() + zeps;
        let tol2 = two * tol1;
        if (x - xm).abs() <= tol2 - half * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = two * (q - r);
            if q > T::zero() {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            if !(p.abs() >= (half * q * etemp).abs() || p <= q * (a - x) || p >= q * (b - x)) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = cgold * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = phi(u, ev)?;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            w = x;
            x = u;
            fv = fw;
            fw = fx;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                w = u;
                fv = fw;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok((x, fx))
}
