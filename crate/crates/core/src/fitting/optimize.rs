//! Derivative-free minimizers: Brent's scalar method and Nelder-Mead.

use crate::error::Result;

const SQRT_EPS: f64 = 1.490_116_119_384_765_6e-8;
const GOLDEN: f64 = 0.381_966_011_250_105_1;

#[derive(Debug, Clone, Copy)]
pub(crate) struct ScalarMin {
    pub x: f64,
    pub fx: f64,
    pub converged: bool,
    /// Final bracket width.
    pub width: f64,
}

/// Brent's method (golden section with parabolic steps) on `[a, b]`,
/// started from an interior point `x0`.
pub(crate) fn brent<F>(mut a: f64, mut b: f64, x0: f64, tol: f64, max_iter: usize, mut f: F) -> Result<ScalarMin>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut x = x0.clamp(a, b);
    let mut w = x;
    let mut v = x;
    let mut fx = f(x)?;
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..max_iter {
        let mid = 0.5 * (a + b);
        let tol1 = SQRT_EPS * x.abs() + tol / 3.0;
        let tol2 = 2.0 * tol1;
        if (x - mid).abs() <= tol2 - 0.5 * (b - a) {
            return Ok(ScalarMin { x, fx, converged: true, width: b - a });
        }
        let mut golden = true;
        if e.abs() > tol1 {
            // Parabola through (v, w, x).
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if x < mid { tol1 } else { -tol1 };
                }
                golden = false;
            }
        }
        if golden {
            e = if x < mid { b - x } else { a - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else if d > 0.0 { x + tol1 } else { x - tol1 };
        let fu = f(u)?;
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok(ScalarMin { x, fx, converged: false, width: b - a })
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct SimplexMin {
    pub x: [f64; 2],
    pub fx: f64,
    pub converged: bool,
    /// Spread of the final simplex along each coordinate.
    pub spread: [f64; 2],
}

/// Nelder-Mead in two dimensions.
///
/// `done` receives the current best vertex and the per-coordinate spread
/// and decides convergence, so callers can state tolerances in their own
/// parameterization.
pub(crate) fn nelder_mead<F, D>(
    start: [f64; 2],
    steps: [f64; 2],
    max_iter: usize,
    mut f: F,
    mut done: D,
) -> Result<SimplexMin>
where
    F: FnMut([f64; 2]) -> Result<f64>,
    D: FnMut([f64; 2], [f64; 2]) -> bool,
{
    let mut pts = [start, [start[0] + steps[0], start[1]], [start[0], start[1] + steps[1]]];
    let mut vals = [f(pts[0])?, f(pts[1])?, f(pts[2])?];
    let spread_of = |pts: &[[f64; 2]; 3]| {
        let mut s = [0.0f64; 2];
        for p in &pts[1..] {
            for k in 0..2 {
                s[k] = s[k].max((p[k] - pts[0][k]).abs());
            }
        }
        s
    };
    for _ in 0..max_iter {
        // Order best → worst; equal values keep the lexicographically smaller point first.
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| {
            vals[i]
                .partial_cmp(&vals[j])
                .unwrap_or(core::cmp::Ordering::Equal)
                .then(pts[i][0].partial_cmp(&pts[j][0]).unwrap_or(core::cmp::Ordering::Equal))
                .then(pts[i][1].partial_cmp(&pts[j][1]).unwrap_or(core::cmp::Ordering::Equal))
        });
        pts = [pts[order[0]], pts[order[1]], pts[order[2]]];
        vals = [vals[order[0]], vals[order[1]], vals[order[2]]];

        let spread = spread_of(&pts);
        if done(pts[0], spread) {
            return Ok(SimplexMin { x: pts[0], fx: vals[0], converged: true, spread });
        }

        let centroid = [0.5 * (pts[0][0] + pts[1][0]), 0.5 * (pts[0][1] + pts[1][1])];
        let along = |t: f64| {
            [centroid[0] + t * (pts[2][0] - centroid[0]), centroid[1] + t * (pts[2][1] - centroid[1])]
        };
        let reflected = along(-1.0);
        let fr = f(reflected)?;
        if fr < vals[0] {
            let expanded = along(-2.0);
            let fe = f(expanded)?;
            if fe < fr {
                pts[2] = expanded;
                vals[2] = fe;
            } else {
                pts[2] = reflected;
                vals[2] = fr;
            }
            continue;
        }
        if fr < vals[1] {
            pts[2] = reflected;
            vals[2] = fr;
            continue;
        }
        let (contracted, fc) = if fr < vals[2] {
            let c = along(-0.5);
            (c, f(c)?)
        } else {
            let c = along(0.5);
            (c, f(c)?)
        };
        if fc < vals[2].min(fr) {
            pts[2] = contracted;
            vals[2] = fc;
            continue;
        }
        // Shrink toward the best vertex.
        for i in 1..3 {
            pts[i] = [0.5 * (pts[i][0] + pts[0][0]), 0.5 * (pts[i][1] + pts[0][1])];
            vals[i] = f(pts[i])?;
        }
    }
    let spread = spread_of(&pts);
    let best = (0..3)
        .min_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap_or(core::cmp::Ordering::Equal))
        .unwrap_or(0);
    Ok(SimplexMin { x: pts[best], fx: vals[best], converged: false, spread })
}
