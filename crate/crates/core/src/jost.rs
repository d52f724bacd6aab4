//! Horizon-anchored Jost solutions: curves normalized to a pure
//! fundamental-matrix column at x -> -infinity, built by adaptive marching of
//! either the profile variable M_c(-x) psi (which strips the free
//! oscillation) or the physical variable, whichever is well conditioned at
//! the given spectral point. The Picard series over the same anchor is kept
//! as an independent oracle.

use crate::curve::{profile_rhs, radial_rhs, AnchorSide, ProfileScaling, SolutionCurve};
use crate::error::{Error, Result};
use crate::ode::{integrate_path, OdeTolerances};
use crate::potentials::PotentialEvaluator;
use crate::quad::cumulative_integral_uniform;
use crate::spinor::{mc_phases, Spinor4, EXP_GUARD, I};
use num_complex::Complex64;
use std::sync::Arc;

/// Which fundamental-matrix column the curve is anchored to at the horizon.
/// Phi2/Phi3 carry the e^{-i lambda x} datum (the family of the upper-half
/// resolvent); Phi1/Phi4 carry e^{+i lambda x} (used for the physical
/// resolvent below the real axis).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JostKind {
    Phi1,
    Phi2,
    Phi3,
    Phi4,
}

impl JostKind {
    pub fn component(self) -> usize {
        match self {
            JostKind::Phi1 => 0,
            JostKind::Phi2 => 1,
            JostKind::Phi3 => 2,
            JostKind::Phi4 => 3,
        }
    }

    /// +1 for the e^{+i lambda x} family, -1 for e^{-i lambda x}.
    pub fn family(self) -> f64 {
        match self {
            JostKind::Phi1 | JostKind::Phi4 => 1.0,
            JostKind::Phi2 | JostKind::Phi3 => -1.0,
        }
    }
}

/// Options shared by the marching solvers.
#[derive(Debug, Clone, Copy)]
pub struct SolverOptions {
    pub tol: OdeTolerances,
    /// Distance kept from the strip edge, as a fraction of kappa.
    pub strip_margin: f64,
    /// Switch from profile to physical marching when the relevant imaginary
    /// part exceeds this fraction of kappa.
    pub profile_threshold: f64,
    /// Test hook: suppress the matrix potential entirely.
    pub zero_potential: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: OdeTolerances::default(),
            strip_margin: 1e-3,
            profile_threshold: 0.25,
            zero_potential: false,
        }
    }
}

impl SolverOptions {
    /// Same options with ODE tolerances tightened by `factor`.
    pub fn tightened(&self, factor: f64) -> SolverOptions {
        let mut o = *self;
        o.tol.rtol /= factor;
        o.tol.atol /= factor;
        o
    }
}

pub struct JostSolver<'a> {
    pot: &'a PotentialEvaluator,
    pub opts: SolverOptions,
}

impl<'a> JostSolver<'a> {
    pub fn new(pot: &'a PotentialEvaluator, opts: SolverOptions) -> Self {
        JostSolver { pot, opts }
    }

    fn kappa(&self) -> f64 {
        self.pot.surface_gravity()
    }

    /// Exponential rate at which the anchor datum dominates the tail for this
    /// family; positive inside the (mirrored) strip.
    fn anchor_rate(&self, lambda: Complex64, kind: JostKind) -> Result<f64> {
        let kappa = self.kappa();
        let adverse = (lambda.im * kind.family()).max(0.0);
        let rate = kappa - 2.0 * adverse;
        let margin = self.opts.strip_margin * kappa;
        if rate <= 2.0 * margin {
            return Err(Error::OutOfStrip {
                lambda,
                limit: -0.5 * kappa,
            });
        }
        Ok(rate)
    }

    /// Depth at which seeding with the bare anchor column leaves a relative
    /// tail error below ~e^{-35}.
    pub fn x_min_for(&self, lambda: Complex64, kind: JostKind) -> Result<f64> {
        let rate = self.anchor_rate(lambda, kind)?;
        let kappa = self.kappa();
        Ok((-35.0 / rate).clamp(-380.0 / kappa, -25.0 / kappa))
    }

    /// March the Jost solution of the given kind, recording on `xs`
    /// (increasing, starting at the seeding depth).
    pub fn solve(&self, lambda: Complex64, kind: JostKind, xs: Arc<Vec<f64>>) -> Result<SolutionCurve> {
        let rate = self.anchor_rate(lambda, kind)?;
        let x_start = xs[0];
        let x_end = *xs.last().unwrap();
        if !(x_end < 0.0) {
            return Err(Error::Domain {
                name: "x",
                value: x_end,
                reason: "Jost march must stay on the exterior x < 0",
            });
        }
        if !self.opts.zero_potential && x_start > -30.0 / rate {
            return Err(Error::invalid(
                "grid",
                format!(
                    "grid starts at {x_start} but the anchor tail needs x <= {};\
                     build the grid with x_min_for",
                    -30.0 / rate
                ),
            ));
        }

        // Profile marching is well conditioned while the conjugated potential
        // stays integrable along the march; once the anchor mode strongly
        // dominates its partner, march physically instead.
        let dominance = -lambda.im * kind.family();
        let use_profile = dominance < self.opts.profile_threshold * self.kappa();

        let comp = kind.component();
        if use_profile {
            let f = |x: f64, w: &Spinor4| -> Spinor4 {
                if self.opts.zero_potential {
                    return Spinor4::zero();
                }
                profile_rhs(self.pot, lambda, x, w).expect("potential evaluation in range")
            };
            let (ws, _) = integrate_path(f, x_start, x_end, Spinor4::basis(comp), &xs, &self.opts.tol)?;
            let values: Vec<Spinor4> = xs
                .iter()
                .zip(ws)
                .map(|(&x, w)| {
                    let ph = mc_phases(x, lambda);
                    let mut v = Spinor4::zero();
                    for k in 0..4 {
                        v.0[k] = ph[k] * w.0[k];
                    }
                    v
                })
                .collect();
            SolutionCurve::new(
                lambda,
                AnchorSide::Horizon,
                xs,
                values,
                Some(ProfileScaling {
                    profile_variable: true,
                }),
            )
        } else {
            let magnitude = (lambda.im * x_start).abs();
            if magnitude > EXP_GUARD {
                return Err(Error::ScaledRepresentation {
                    magnitude,
                    limit: EXP_GUARD,
                });
            }
            // March from a unit seed and restore the anchor amplitude
            // afterwards; keeps the relative error control meaningful when
            // the true seed is exponentially small.
            let amplitude = (I * lambda * kind.family() * x_start).exp();
            let f = |x: f64, y: &Spinor4| -> Spinor4 {
                if self.opts.zero_potential {
                    let mut v = Spinor4::zero();
                    for k in 0..4 {
                        v.0[k] = I * lambda * crate::spinor::GAMMA1_SIGNS[k] * y.0[k];
                    }
                    return v;
                }
                radial_rhs(self.pot, lambda, x, y).expect("potential evaluation in range")
            };
            let (values, _) =
                integrate_path(f, x_start, x_end, Spinor4::basis(comp), &xs, &self.opts.tol)?;
            let values = values.into_iter().map(|v| v * amplitude).collect();
            SolutionCurve::new(lambda, AnchorSide::Horizon, xs, values, None)
        }
    }

    /// Successive Picard layers of the horizon integral equation, evaluated
    /// at `x_eval`: term 0 is the free anchor column, term n+1 the kernel
    /// integral of term n. Uses a fixed fine grid and fourth-order cumulative
    /// quadrature in the profile variable; fully independent of the
    /// adaptive marching above.
    pub fn picard_terms(
        &self,
        lambda: Complex64,
        kind: JostKind,
        x_eval: f64,
        n_terms: usize,
    ) -> Result<Vec<Spinor4>> {
        if n_terms == 0 {
            return Err(Error::invalid("n_terms", "need at least one Picard term"));
        }
        if !(x_eval < 0.0) {
            return Err(Error::Domain {
                name: "x_eval",
                value: x_eval,
                reason: "Picard evaluation point must be negative",
            });
        }
        let rate = self.anchor_rate(lambda, kind)?;
        let t0 = (-42.0 / rate).min(x_eval - 1.0);
        let h_target = (0.002 / (1.0 + lambda.norm())).min(0.002);
        let n_cells = (((x_eval - t0) / h_target).ceil() as usize).max(8);
        let h = (x_eval - t0) / n_cells as f64;
        let ts: Vec<f64> = (0..=n_cells).map(|k| t0 + h * k as f64).collect();

        let mut w_layer: Vec<Spinor4> = vec![Spinor4::basis(kind.component()); ts.len()];
        let mut terms = Vec::with_capacity(n_terms);
        let phases_eval = mc_phases(x_eval, lambda);
        let to_physical = |w: &Spinor4| {
            let mut v = Spinor4::zero();
            for k in 0..4 {
                v.0[k] = phases_eval[k] * w.0[k];
            }
            v
        };
        terms.push(to_physical(w_layer.last().unwrap()));

        for _ in 1..n_terms {
            let integrand: Vec<Spinor4> = ts
                .iter()
                .zip(&w_layer)
                .map(|(&t, w)| profile_rhs(self.pot, lambda, t, w).expect("in range"))
                .collect();
            w_layer = cumulative_integral_uniform(&integrand, h);
            terms.push(to_physical(w_layer.last().unwrap()));
        }
        Ok(terms)
    }

    /// Partial sum of the Picard series at `x_eval`.
    pub fn picard_sum(
        &self,
        lambda: Complex64,
        kind: JostKind,
        x_eval: f64,
        n_terms: usize,
    ) -> Result<Spinor4> {
        let terms = self.picard_terms(lambda, kind, x_eval, n_terms)?;
        Ok(terms
            .into_iter()
            .fold(Spinor4::zero(), |acc, t| acc + t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BlackHoleParams, TortoiseMap};
    use crate::grid::{GridSpec, StandardGrid};
    use crate::potentials::ModeParams;
    use crate::spinor::ZERO;

    fn unit_pot() -> PotentialEvaluator {
        let params = BlackHoleParams::new(1.0, 1.0).unwrap();
        let map = Arc::new(TortoiseMap::new(params).unwrap());
        PotentialEvaluator::new(map, ModeParams::new(0.0, 0.3).unwrap()).unwrap()
    }

    fn grid_for(solver: &JostSolver, lambda: Complex64, kind: JostKind) -> Arc<Vec<f64>> {
        let x_min = solver.x_min_for(lambda, kind).unwrap();
        let g = StandardGrid::build(&GridSpec::with_depth(x_min)).unwrap();
        Arc::new(g.xs().to_vec())
    }

    #[test]
    fn free_equation_matches_fundamental_column() {
        let pot = unit_pot();
        let mut opts = SolverOptions::default();
        opts.zero_potential = true;
        let solver = JostSolver::new(&pot, opts);
        let lambda = Complex64::new(0.7, 0.4);
        for (kind, comp) in [(JostKind::Phi3, 2usize), (JostKind::Phi2, 1usize)] {
            let xs: Vec<f64> = (0..60).map(|k| -12.0 + 0.2 * k as f64).collect();
            let curve = solver.solve(lambda, kind, Arc::new(xs)).unwrap();
            for k in 0..curve.len() {
                let x = curve.x(k);
                let exact = (-I * lambda * x).exp();
                let v = curve.value(k);
                assert!((v.0[comp] - exact).norm() < 1e-9 * exact.norm());
                for j in 0..4 {
                    if j != comp {
                        assert!(v.0[j].norm() < 1e-10 * exact.norm());
                    }
                }
            }
        }
        // Direct branch (large positive Im) on the free equation.
        let lambda = Complex64::new(0.3, 1.5);
        let xs: Vec<f64> = (0..40).map(|k| -10.0 + 0.25 * k as f64).collect();
        let curve = solver.solve(lambda, JostKind::Phi3, Arc::new(xs)).unwrap();
        for k in [0usize, 20, 39] {
            let exact = (-I * lambda * curve.x(k)).exp();
            assert!((curve.value(k).0[2] - exact).norm() < 1e-8 * exact.norm());
        }
    }

    #[test]
    fn out_of_strip_is_rejected() {
        let pot = unit_pot();
        let solver = JostSolver::new(&pot, SolverOptions::default());
        // kappa = 2: the strip is Im > -1.
        let lambda = Complex64::new(1.0, -1.0);
        assert!(matches!(
            solver.x_min_for(lambda, JostKind::Phi3),
            Err(Error::OutOfStrip { .. })
        ));
        // Mirror strip for the plus family.
        let lambda = Complex64::new(1.0, 1.0);
        assert!(solver.x_min_for(lambda, JostKind::Phi1).is_err());
        assert!(solver.x_min_for(lambda, JostKind::Phi3).is_ok());
    }

    #[test]
    fn picard_first_term_is_free_solution() {
        let pot = unit_pot();
        let solver = JostSolver::new(&pot, SolverOptions::default());
        let lambda = Complex64::new(0.9, 0.2);
        let x = -2.5;
        let terms = solver
            .picard_terms(lambda, JostKind::Phi3, x, 1)
            .unwrap();
        let exact = (-I * lambda * x).exp();
        assert_eq!(terms.len(), 1);
        assert!((terms[0].0[2] - exact).norm() < 1e-14 * exact.norm());
        assert!(terms[0].0[0] == ZERO && terms[0].0[1] == ZERO && terms[0].0[3] == ZERO);
    }

    #[test]
    fn picard_term_ratios_obey_factorial_bound() {
        let pot = unit_pot();
        let solver = JostSolver::new(&pot, SolverOptions::default());
        let lambda = Complex64::new(0.0, 1.0);
        let x = -2.0;
        let terms = solver
            .picard_terms(lambda, JostKind::Phi2, x, 6)
            .unwrap();
        let budget = pot.integrated_vm_norm(x).unwrap();
        for n in 0..terms.len() - 1 {
            let ratio = terms[n + 1].norm() / terms[n].norm();
            let bound = budget / (n as f64 + 1.0);
            assert!(
                ratio <= bound * (1.0 + 1e-6),
                "layer {n}: ratio {ratio} > bound {bound}"
            );
        }
        // Term n bounded by e^{Im lambda x} (int ||V||)^n / n!.
        let mut factorial = 1.0;
        for (n, term) in terms.iter().enumerate() {
            if n > 0 {
                factorial *= n as f64;
            }
            let bound = (lambda.im * x).exp() * budget.powi(n as i32) / factorial;
            assert!(term.norm() <= bound * (1.0 + 1e-6), "term {n}");
        }
    }

    #[test]
    fn march_and_picard_agree() {
        let pot = unit_pot();
        let solver = JostSolver::new(&pot, SolverOptions::default());
        let lambda = Complex64::new(0.0, 1.0);
        let grid = grid_for(&solver, lambda, JostKind::Phi3);
        let curve = solver.solve(lambda, JostKind::Phi3, Arc::clone(&grid)).unwrap();
        let (x, marched) = curve.value_near(-3.0, 1e-6).unwrap();
        let series = solver.picard_sum(lambda, JostKind::Phi3, x, 8).unwrap();
        let rel = (marched - series).norm() / series.norm();
        assert!(rel < 1e-6, "marched vs Picard: rel {rel:e}");
    }

    #[test]
    fn growth_bound_holds_on_grid() {
        let pot = unit_pot();
        let solver = JostSolver::new(&pot, SolverOptions::default());
        let lambda = Complex64::new(0.0, 1.0);
        let grid = grid_for(&solver, lambda, JostKind::Phi3);
        let curve = solver.solve(lambda, JostKind::Phi3, grid).unwrap();
        for k in 0..curve.len() {
            let x = curve.x(k);
            let budget = pot.integrated_vm_norm(x).unwrap();
            let bound = (lambda.im * x).exp() * budget.exp();
            assert!(
                curve.value(k).norm() <= bound * (1.0 + 1e-8),
                "x = {x}: {} > {bound}",
                curve.value(k).norm()
            );
        }
    }

    #[test]
    fn twist_of_phi3_is_phi2_by_uniqueness() {
        let pot = unit_pot();
        let solver = JostSolver::new(&pot, SolverOptions::default());
        let lambda = Complex64::new(0.6, 0.35);
        let grid = grid_for(&solver, lambda, JostKind::Phi3);
        let phi3 = solver.solve(lambda, JostKind::Phi3, Arc::clone(&grid)).unwrap();
        let phi2 = solver.solve(lambda, JostKind::Phi2, grid).unwrap();
        let twisted = phi3.twisted();
        let mut worst = 0.0_f64;
        for k in 0..phi2.len() {
            let dev = (*twisted.value(k) - *phi2.value(k)).norm()
                / (1.0 + phi2.value(k).norm());
            worst = worst.max(dev);
        }
        assert!(worst < 1e-6, "twist(Phi3) vs Phi2: {worst:e}");
    }

    #[test]
    fn profile_and_direct_branches_agree_in_overlap() {
        let pot = unit_pot();
        let lambda = Complex64::new(0.8, 0.3); // below 0.25 kappa = 0.5
        let mut profile_opts = SolverOptions::default();
        profile_opts.profile_threshold = 10.0; // force profile
        let mut direct_opts = SolverOptions::default();
        direct_opts.profile_threshold = -10.0; // force direct
        let sp = JostSolver::new(&pot, profile_opts);
        let sd = JostSolver::new(&pot, direct_opts);
        let grid = grid_for(&sp, lambda, JostKind::Phi3);
        let a = sp.solve(lambda, JostKind::Phi3, Arc::clone(&grid)).unwrap();
        let b = sd.solve(lambda, JostKind::Phi3, grid).unwrap();
        assert!(a.profile_scaling.is_some());
        assert!(b.profile_scaling.is_none());
        let (_, va) = a.value_near(-1.0, 1e-9).unwrap();
        let (_, vb) = b.value_near(-1.0, 1e-9).unwrap();
        assert!((va - vb).norm() / vb.norm() < 1e-7);
    }

    #[test]
    fn curve_passes_ode_residual_check() {
        let pot = unit_pot();
        let solver = JostSolver::new(&pot, SolverOptions::default());
        let lambda = Complex64::new(0.0, 1.0);
        let grid = grid_for(&solver, lambda, JostKind::Phi3);
        let curve = solver.solve(lambda, JostKind::Phi3, grid).unwrap();
        let resid = curve.ode_residual_max(&pot, 0.011).unwrap();
        assert!(resid < 1e-3, "residual {resid:e}");
        let twisted = curve.twisted();
        assert!(twisted.ode_residual_max(&pot, 0.011).unwrap() < 1e-3);
    }

    #[test]
    fn profile_variable_converges_to_anchor() {
        let pot = unit_pot();
        let solver = JostSolver::new(&pot, SolverOptions::default());
        let lambda = Complex64::new(1.0, -0.3);
        let grid = grid_for(&solver, lambda, JostKind::Phi3);
        let curve = solver.solve(lambda, JostKind::Phi3, grid).unwrap();
        let kappa = pot.surface_gravity();
        let rate = kappa + 2.0 * lambda.im.min(0.0);
        // ||w(x) - e3|| should decay at least at the tail rate; compare two
        // depths one unit apart.
        let probe = |x: f64| {
            let (xg, v) = curve.value_near(x, 0.5).unwrap();
            let ph = mc_phases(-xg, lambda);
            let mut w = Spinor4::zero();
            for k in 0..4 {
                w.0[k] = ph[k] * v.0[k];
            }
            ((w - Spinor4::basis(2)).norm(), xg)
        };
        let (d1, x1) = probe(-14.0);
        let (d2, x2) = probe(-10.0);
        let fitted = (d2 / d1).ln() / (x2 - x1);
        assert!(
            fitted >= rate * 0.95,
            "tail decay rate {fitted} below {rate}"
        );
    }
}
