//! Quadrature helpers: globally adaptive Gauss-Kronrod 7-15 for scalar
//! integrands and a sliding-cubic cumulative integrator for uniform grids.

use crate::error::{Error, Result};

/// 15-point Kronrod abscissae (positive half, descending).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Embedded 7-point Gauss weights (for the odd Kronrod abscissae).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss-Kronrod panel: returns (kronrod value, error estimate).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Globally adaptive integration of `f` over [a, b] to absolute tolerance
/// `tol`. Bisects the worst panel first.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if a > b {
        return integrate(f, b, a, tol).map(|v| -v);
    }
    let (v, e) = gk15(&f, a, b);
    // (error, a, b, value); binary heap keyed on error via sorted insertion.
    let mut panels = vec![(e, a, b, v)];
    let mut total_err = e;
    let mut total_val = v;
    let max_panels = 4000;
    while total_err > tol && panels.len() < max_panels {
        // Worst panel.
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .0.partial_cmp(&y.1 .0).unwrap())
            .unwrap();
        let (e0, pa, pb, v0) = panels.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // Interval exhausted at machine precision; keep its estimate.
            panels.push((0.0, pa, pb, v0));
            total_err -= e0;
            continue;
        }
        let (vl, el) = gk15(&f, pa, mid);
        let (vr, er) = gk15(&f, mid, pb);
        total_val += vl + vr - v0;
        total_err += el + er - e0;
        panels.push((el, pa, mid, vl));
        panels.push((er, mid, pb, vr));
    }
    if total_err > tol * 100.0 {
        return Err(Error::Convergence {
            reason: format!(
                "adaptive quadrature stalled: err {total_err:.3e} > tol {tol:.3e} after {} panels",
                panels.len()
            ),
        });
    }
    Ok(total_val)
}

/// Values that can be accumulated by the cumulative integrator.
pub trait LinearState: Copy {
    fn zero() -> Self;
    fn add_scaled(&self, other: &Self, w: f64) -> Self;
}

impl LinearState for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add_scaled(&self, other: &Self, w: f64) -> Self {
        self + other * w
    }
}

impl LinearState for num_complex::Complex64 {
    fn zero() -> Self {
        num_complex::Complex64::new(0.0, 0.0)
    }
    fn add_scaled(&self, other: &Self, w: f64) -> Self {
        self + other * w
    }
}

impl LinearState for crate::spinor::Spinor4 {
    fn zero() -> Self {
        crate::spinor::Spinor4::zero()
    }
    fn add_scaled(&self, other: &Self, w: f64) -> Self {
        *self + *other * w
    }
}

/// Cumulative integral of samples `g` on a uniform grid of spacing `h`:
/// returns I with I[k] = integral from node 0 to node k, fourth order via a
/// sliding cubic. Needs at least 4 samples.
pub fn cumulative_integral_uniform<S: LinearState>(g: &[S], h: f64) -> Vec<S> {
    let n = g.len();
    assert!(n >= 4, "cumulative integral needs >= 4 samples");
    let mut out = Vec::with_capacity(n);
    out.push(S::zero());
    for k in 0..n - 1 {
        // Cubic through four neighbouring nodes, integrated over [k, k+1].
        let cell = if k == 0 {
            S::zero()
                .add_scaled(&g[0], 9.0 / 24.0)
                .add_scaled(&g[1], 19.0 / 24.0)
                .add_scaled(&g[2], -5.0 / 24.0)
                .add_scaled(&g[3], 1.0 / 24.0)
        } else if k == n - 2 {
            S::zero()
                .add_scaled(&g[n - 4], 1.0 / 24.0)
                .add_scaled(&g[n - 3], -5.0 / 24.0)
                .add_scaled(&g[n - 2], 19.0 / 24.0)
                .add_scaled(&g[n - 1], 9.0 / 24.0)
        } else {
            S::zero()
                .add_scaled(&g[k - 1], -1.0 / 24.0)
                .add_scaled(&g[k], 13.0 / 24.0)
                .add_scaled(&g[k + 1], 13.0 / 24.0)
                .add_scaled(&g[k + 2], -1.0 / 24.0)
        };
        let prev = out[k];
        out.push(prev.add_scaled(&cell, h));
    }
    out
}

/// Trapezoid weights for an arbitrary monotone grid: w[i] multiplies sample i
/// in the composite rule over the whole grid.
pub fn trapezoid_weights(xs: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut w = vec![0.0; n];
    for k in 0..n.saturating_sub(1) {
        let h = xs[k + 1] - xs[k];
        w[k] += 0.5 * h;
        w[k + 1] += 0.5 * h;
    }
    w
}
