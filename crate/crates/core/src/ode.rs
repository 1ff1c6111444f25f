//! Fundamental matrix of the linear system `dY/ds = Z(s) Y`, `Y(s0) = I`.

// float math is not inherent on f64 in core; the lint misfires on the unstable methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Integrates `dY/ds = Z(s) Y` from `Y(s0) = I` to `s` with classical RK4 at
/// fixed step `step`; the final step is shortened to land exactly on `s`.
/// Integration runs backwards when `s < s0`.
pub fn solve_fundamental<Z>(z: Z, n: usize, s0: f64, s: f64, step: f64) -> Result<Matrix>
where
    Z: Fn(f64) -> Matrix,
{
    solve_fundamental_on_mesh(z, n, s0, s, s0, step, &[])
}

/// As [`solve_fundamental`], but the nodes are `anchor + k step` together
/// with every breakpoint strictly inside the interval (the first and last
/// steps are shortened to meet `s0` and `s`). Breakpoints are where `Z` is
/// only piecewise smooth, e.g. interpolation knots; stepping onto them keeps
/// the full order of the method. Running forward and backward over the same
/// interval with a common anchor uses the same mesh in both directions.
pub fn solve_fundamental_on_mesh<Z>(
    z: Z,
    n: usize,
    s0: f64,
    s: f64,
    anchor: f64,
    step: f64,
    breakpoints: &[f64],
) -> Result<Matrix>
where
    Z: Fn(f64) -> Matrix,
{
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidStep(step));
    }
    if !(s0.is_finite() && s.is_finite() && anchor.is_finite()) {
        return Err(Error::NonFinite { s });
    }
    let mut y = Matrix::identity(n);
    let span = s - s0;
    if span == 0.0 {
        return Ok(y);
    }
    let dir = span.signum();
    // nodes closer than this to an end or to each other are merged so that
    // e.g. 1.0 / 1e-3 gives 1000 steps rather than 1000 plus a sliver
    let tol = 1e-9 * span.abs().max(step);
    let inside = |x: f64| (x - s0) * dir > tol && (s - x) * dir > tol;

    let mut k = ((s0 - anchor) / step).floor() as i64;
    if dir < 0.0 {
        k += 1;
    }
    let mut next_mesh = move || loop {
        let node = anchor + k as f64 * step;
        k += dir as i64;
        if (s - node) * dir <= tol {
            return None;
        }
        if (node - s0) * dir > tol {
            return Some(node);
        }
    };
    let mut bps: alloc::boxed::Box<dyn Iterator<Item = f64>> = if dir > 0.0 {
        alloc::boxed::Box::new(breakpoints.iter().copied().filter(|&b| inside(b)))
    } else {
        alloc::boxed::Box::new(breakpoints.iter().rev().copied().filter(|&b| inside(b)))
    };

    let (mut mesh, mut bp) = (next_mesh(), bps.next());
    let mut t = s0;
    loop {
        let t_next = match (mesh, bp) {
            (None, None) => s,
            (Some(m), None) => {
                mesh = next_mesh();
                m
            }
            (None, Some(b)) => {
                bp = bps.next();
                b
            }
            (Some(m), Some(b)) => {
                if ((b - m) * dir).abs() <= tol {
                    mesh = next_mesh();
                    bp = bps.next();
                    b
                } else if (b - m) * dir < 0.0 {
                    bp = bps.next();
                    b
                } else {
                    mesh = next_mesh();
                    m
                }
            }
        };
        // a breakpoint within tol of the previous node
        if (t_next - t) * dir <= tol && t_next != s {
            continue;
        }
        y = rk4_step(&z, &y, t, t_next - t);
        if !y.is_finite() {
            return Err(Error::NonFinite { s: t_next });
        }
        if t_next == s {
            return Ok(y);
        }
        t = t_next;
    }
}

fn rk4_step<Z: Fn(f64) -> Matrix>(z: &Z, y: &Matrix, t: f64, h: f64) -> Matrix {
    let z0 = z(t);
    let zm = z(t + 0.5 * h);
    let z1 = z(t + h);
    let k1 = &z0 * y;
    let mut tmp = y.clone();
    tmp.axpy(0.5 * h, &k1);
    let k2 = &zm * &tmp;
    let mut tmp = y.clone();
    tmp.axpy(0.5 * h, &k2);
    let k3 = &zm * &tmp;
    let mut tmp = y.clone();
    tmp.axpy(h, &k3);
    let k4 = &z1 * &tmp;
    let mut out = y.clone();
    out.axpy(h / 6.0, &k1);
    out.axpy(h / 3.0, &k2);
    out.axpy(h / 3.0, &k3);
    out.axpy(h / 6.0, &k4);
    out
}
