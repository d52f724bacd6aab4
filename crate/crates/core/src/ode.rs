//! Embedded Dormand-Prince 5(4) integrator for the complex 4-component radial
//! system, with fifth-order dense output used to sample solution curves at
//! prescribed grid points.

use crate::error::{Error, Result};
use crate::spinor::Spinor4;
use num_complex::Complex64;

const A: [[f64; 6]; 6] = [
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];

const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];

/// Difference between the 5th- and embedded 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Dense-output weights.
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Debug, Clone, Copy)]
pub struct OdeTolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeTolerances {
    fn default() -> Self {
        OdeTolerances {
            rtol: 1e-10,
            atol: 1e-12,
            max_steps: 4_000_000,
        }
    }
}

/// Dense-output polynomial for one accepted step.
struct DenseSegment {
    x0: f64,
    h: f64,
    cont: [Spinor4; 5],
}

impl DenseSegment {
    fn eval(&self, x: f64) -> Spinor4 {
        let s = (x - self.x0) / self.h;
        let s1 = 1.0 - s;
        // c0 + s*(c1 + s1*(c2 + s*(c3 + s1*c4)))
        let inner3 = self.cont[3] + self.cont[4] * s1;
        let inner2 = self.cont[2] + inner3 * s;
        let inner1 = self.cont[1] + inner2 * s1;
        self.cont[0] + inner1 * s
    }
}

fn err_norm(err: &Spinor4, y0: &Spinor4, y1: &Spinor4, tol: &OdeTolerances) -> f64 {
    let mut acc = 0.0;
    for k in 0..4 {
        let sc = tol.atol + tol.rtol * y0.0[k].norm().max(y1.0[k].norm());
        let r = err.0[k].norm() / sc;
        acc += r * r;
    }
    (acc / 4.0).sqrt()
}

/// Integrate dy/dx = f(x, y) from `x_start` to `x_end` (either direction),
/// recording dense-output samples at the positions in `outputs`, which must be
/// sorted in march direction and lie within [x_start, x_end]. Returns the
/// recorded samples followed by the final state.
pub fn integrate_path<F>(
    f: F,
    x_start: f64,
    x_end: f64,
    y_start: Spinor4,
    outputs: &[f64],
    tol: &OdeTolerances,
) -> Result<(Vec<Spinor4>, Spinor4)>
where
    F: Fn(f64, &Spinor4) -> Spinor4,
{
    if x_start == x_end {
        return Ok((outputs.iter().map(|_| y_start).collect(), y_start));
    }
    let dir = (x_end - x_start).signum();
    let span = (x_end - x_start).abs();
    for w in outputs.windows(2) {
        debug_assert!((w[1] - w[0]) * dir > 0.0, "outputs not sorted in march direction");
    }

    let mut x = x_start;
    let mut y = y_start;
    let mut k1 = f(x, &y);
    // Initial step: conservative fraction of the span, limited by the local
    // derivative scale.
    let scale = y.norm().max(1.0);
    let d0 = k1.norm() / scale;
    let mut h = dir * (1e-4 * span).min(if d0 > 0.0 { 0.01 / d0 } else { 1e-2 * span });
    if h == 0.0 {
        h = dir * 1e-6 * span;
    }

    let mut out = Vec::with_capacity(outputs.len());
    let mut next_out = 0;
    // Record outputs coinciding with the start point.
    while next_out < outputs.len() && (outputs[next_out] - x_start) * dir <= 0.0 {
        out.push(y_start);
        next_out += 1;
    }

    let mut facold: f64 = 1e-4;
    let mut n_steps = 0usize;
    let mut n_rejected_row = 0usize;

    while (x_end - x) * dir > 0.0 {
        n_steps += 1;
        if n_steps > tol.max_steps {
            return Err(Error::Convergence {
                reason: format!("step budget {} exhausted at x = {x:.6e}", tol.max_steps),
            });
        }
        let mut last = false;
        if (x + h - x_end) * dir >= 0.0 {
            h = x_end - x;
            last = true;
        }
        if h.abs() < 1e-14 * (1.0 + x.abs()) && !last {
            return Err(Error::Convergence {
                reason: format!("step size underflow at x = {x:.6e}"),
            });
        }

        let mut k = [Spinor4::zero(); 7];
        k[0] = k1;
        for stage in 0..6 {
            let mut yi = y;
            for l in 0..=stage {
                if A[stage][l] != 0.0 {
                    yi = yi + k[l] * (h * A[stage][l]);
                }
            }
            k[stage + 1] = f(x + C[stage] * h, &yi);
        }
        // 5th-order solution is the stage-6 argument (FSAL): rebuild it.
        let mut y1 = y;
        for l in 0..6 {
            if A[5][l] != 0.0 {
                y1 = y1 + k[l] * (h * A[5][l]);
            }
        }
        let mut err_vec = Spinor4::zero();
        for l in 0..7 {
            if E[l] != 0.0 {
                err_vec = err_vec + k[l] * (h * E[l]);
            }
        }
        let err = err_norm(&err_vec, &y, &y1, tol);

        // PI step controller (Hairer, beta = 0.04).
        let expo = 0.2 - 0.04 * 0.75;
        let fac11 = err.max(1e-30).powf(expo);
        let fac = (fac11 / facold.powf(0.04) / 0.9).clamp(1.0 / 10.0, 1.0 / 0.2);
        let h_new = h / fac;

        if err <= 1.0 {
            // Accept. Build dense output and harvest samples in this step.
            facold = err.max(1e-4);
            n_rejected_row = 0;
            let ydiff = y1 - y;
            let bspl = k[0] * h - ydiff;
            let mut dsum = Spinor4::zero();
            for l in 0..7 {
                if D[l] != 0.0 {
                    dsum = dsum + k[l] * D[l];
                }
            }
            let seg = DenseSegment {
                x0: x,
                h,
                cont: [y, ydiff, bspl, ydiff - k[6] * h - bspl, dsum * h],
            };
            let x_new = if last { x_end } else { x + h };
            while next_out < outputs.len() && (outputs[next_out] - x_new) * dir <= 0.0 {
                out.push(seg.eval(outputs[next_out]));
                next_out += 1;
            }
            x = x_new;
            y = y1;
            k1 = k[6]; // FSAL
            h = h_new;
        } else {
            n_rejected_row += 1;
            if n_rejected_row > 60 {
                return Err(Error::Convergence {
                    reason: format!("60 consecutive step rejections at x = {x:.6e}"),
                });
            }
            h = h / fac.max(1.0);
        }
    }

    // Any trailing outputs equal to the end point.
    while next_out < outputs.len() {
        out.push(y);
        next_out += 1;
    }
    Ok((out, y))
}

/// Convenience wrapper: march to the end point without recording.
pub fn integrate_to<F>(
    f: F,
    x_start: f64,
    x_end: f64,
    y_start: Spinor4,
    tol: &OdeTolerances,
) -> Result<Spinor4>
where
    F: Fn(f64, &Spinor4) -> Spinor4,
{
    integrate_path(f, x_start, x_end, y_start, &[], tol).map(|(_, y)| y)
}

#[allow(dead_code)]
pub fn complex_of(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
