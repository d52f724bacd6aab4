//! Sampled fundamental solutions of the radial system and checks applied to
//! them (finite values, ODE residual by finite differences, twisting).

use crate::error::{Error, Result};
use crate::potentials::PotentialEvaluator;
use crate::spinor::{twist, Spinor4, GAMMA1_SIGNS, I};
use num_complex::Complex64;
use std::sync::Arc;

/// Which end of the half-line a curve is anchored at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AnchorSide {
    Horizon,
    Boundary,
}

/// Record of the exponential prefactor stripped during profile integration.
#[derive(Debug, Clone, Copy)]
pub struct ProfileScaling {
    /// The curve was integrated in the variable M_c(-x) psi(x).
    pub profile_variable: bool,
}

/// A sampled solution curve at one spectral point.
#[derive(Debug, Clone)]
pub struct SolutionCurve {
    pub lambda: Complex64,
    pub anchor: AnchorSide,
    xs: Arc<Vec<f64>>,
    values: Vec<Spinor4>,
    pub profile_scaling: Option<ProfileScaling>,
}

impl SolutionCurve {
    pub fn new(
        lambda: Complex64,
        anchor: AnchorSide,
        xs: Arc<Vec<f64>>,
        values: Vec<Spinor4>,
        profile_scaling: Option<ProfileScaling>,
    ) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::invalid(
                "curve",
                format!("{} grid points vs {} values", xs.len(), values.len()),
            ));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Convergence {
                reason: format!("non-finite curve value at x = {}", xs[bad]),
            });
        }
        Ok(SolutionCurve {
            lambda,
            anchor,
            xs,
            values,
            profile_scaling,
        })
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn grid(&self) -> Arc<Vec<f64>> {
        Arc::clone(&self.xs)
    }

    pub fn values(&self) -> &[Spinor4] {
        &self.values
    }

    pub fn x(&self, k: usize) -> f64 {
        self.xs[k]
    }

    pub fn value(&self, k: usize) -> &Spinor4 {
        &self.values[k]
    }

    /// Value at the grid node nearest to `x`; errs if no node lies within
    /// `tol` of the request.
    pub fn value_near(&self, x: f64, tol: f64) -> Result<(f64, Spinor4)> {
        let k = match self
            .xs
            .binary_search_by(|v| v.partial_cmp(&x).expect("finite grid"))
        {
            Ok(k) => k,
            Err(0) => 0,
            Err(k) if k >= self.xs.len() => self.xs.len() - 1,
            Err(k) => {
                if (self.xs[k] - x).abs() < (x - self.xs[k - 1]).abs() {
                    k
                } else {
                    k - 1
                }
            }
        };
        if (self.xs[k] - x).abs() > tol {
            return Err(Error::Domain {
                name: "x",
                value: x,
                reason: "no curve sample near the requested position",
            });
        }
        Ok((self.xs[k], self.values[k]))
    }

    /// Pointwise twist: again a solution curve of the same spectral point.
    pub fn twisted(&self) -> SolutionCurve {
        SolutionCurve {
            lambda: self.lambda,
            anchor: self.anchor,
            xs: Arc::clone(&self.xs),
            values: self.values.iter().map(twist).collect(),
            profile_scaling: self.profile_scaling,
        }
    }

    /// Maximum ODE residual || d/dx phi - i lambda Gamma^1 phi
    /// + i Gamma^1 V_m phi || / (1 + ||phi|| + ||d/dx phi||) over interior
    /// nodes whose neighbour spacing is at most `h_max`, with the derivative
    /// from a three-point nonuniform stencil. The returned value carries an
    /// O(h^2) discretization floor; nodes sampled too coarsely to resolve the
    /// local solution scale are skipped.
    pub fn ode_residual_max(&self, pot: &PotentialEvaluator, h_max: f64) -> Result<f64> {
        let n = self.len();
        let mut worst = 0.0_f64;
        for k in 1..n - 1 {
            let (x0, x1, x2) = (self.xs[k - 1], self.xs[k], self.xs[k + 1]);
            let (hl, hr) = (x1 - x0, x2 - x1);
            if hl > h_max || hr > h_max {
                continue;
            }
            let (a, b) = pot.ab(x1)?;
            // Local derivative scale; where coefficient * spacing cannot
            // resolve the solution the stencil only measures its own
            // truncation, so such nodes are skipped.
            let coeff_scale = self.lambda.norm()
                + pot.mode().s_plus_half() * a
                + pot.mode().field_mass() * b;
            if coeff_scale * hl.max(hr) > 0.05 || hl.max(hr) > 0.1 * (-x1) {
                continue;
            }
            // Nonuniform centered first derivative.
            let (cl, cc, cr) = (
                -hr / (hl * (hl + hr)),
                (hr - hl) / (hl * hr),
                hl / (hr * (hl + hr)),
            );
            let deriv = self.values[k - 1] * cl + self.values[k] * cc + self.values[k + 1] * cr;
            let rhs = radial_rhs_from_ab(pot, self.lambda, a, b, &self.values[k]);
            let resid =
                (deriv - rhs).norm() / (1.0 + self.values[k].norm() + rhs.norm());
            worst = worst.max(resid);
        }
        Ok(worst)
    }
}

/// Right-hand side of the radial system in physical variables:
/// d/dx phi = i lambda Gamma^1 phi - i Gamma^1 V_m(x) phi, written out
/// componentwise with the scalar potentials.
pub fn radial_rhs(
    pot: &PotentialEvaluator,
    lambda: Complex64,
    x: f64,
    phi: &Spinor4,
) -> Result<Spinor4> {
    let (a, b) = pot.ab(x)?;
    Ok(radial_rhs_from_ab(pot, lambda, a, b, phi))
}

pub fn radial_rhs_from_ab(
    pot: &PotentialEvaluator,
    lambda: Complex64,
    a: f64,
    b: f64,
    phi: &Spinor4,
) -> Spinor4 {
    let sa = pot.mode().s_plus_half() * a;
    let mb = pot.mode().field_mass() * b;
    let il = I * lambda;
    let isa = I * sa;
    Spinor4([
        il * phi[0] + isa * phi[1] - mb * phi[2],
        -il * phi[1] - isa * phi[0] + mb * phi[3],
        -il * phi[2] + isa * phi[3] - mb * phi[0],
        il * phi[3] - isa * phi[2] + mb * phi[1],
    ])
}

/// Right-hand side in the horizon profile variable w = M_c(-x) phi, which
/// removes the free oscillation/growth: d/dx w = -i Gamma^1 Vt(x) w with the
/// conjugated potential Vt = M_c(-x) V_m M_c(x).
pub fn profile_rhs(
    pot: &PotentialEvaluator,
    lambda: Complex64,
    x: f64,
    w: &Spinor4,
) -> Result<Spinor4> {
    let (a, b) = pot.ab(x)?;
    let sa = pot.mode().s_plus_half() * a;
    let mb = pot.mode().field_mass() * b;
    let em = (-2.0 * I * lambda * x).exp();
    let ep = (2.0 * I * lambda * x).exp();
    let isa = I * sa;
    Ok(Spinor4([
        (isa * w[1] - mb * w[2]) * em,
        (-isa * w[0] + mb * w[3]) * ep,
        (-mb * w[0] + isa * w[3]) * ep,
        (mb * w[1] - isa * w[2]) * em,
    ]))
}

/// Sanity accessor for the sign pattern of the free generator.
pub fn mc_sign(component: usize) -> f64 {
    GAMMA1_SIGNS[component]
}
