//! Exterior Schwarzschild-Anti-de Sitter geometry: horizon root, surface
//! gravity, and the Regge-Wheeler (tortoise) coordinate normalized so that
//! x -> 0 at the conformal boundary and x -> -infinity at the horizon.

use crate::error::{Error, Result};
use crate::quad;

/// Exponent threshold below the horizon-table edge treated as "off the map".
const TABLE_MARGIN: f64 = 1e-9;

/// Switch to the boundary series expansion of r(x) for |x| below this.
pub const X_SERIES: f64 = 1e-6;

/// Black-hole mass and AdS radius with the derived horizon data.
#[derive(Debug, Clone, Copy)]
pub struct BlackHoleParams {
    mass: f64,
    ads_radius: f64,
    r_sads: f64,
    kappa: f64,
}

/// Closed-form horizon radius p_+ + p_- of F(r) = 1 - 2M/r + r^2/l^2,
/// polished by Newton on the monic cubic r^3 + l^2 r - 2 M l^2.
pub fn horizon_radius(mass: f64, ads_radius: f64) -> Result<f64> {
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::invalid("mass", format!("need M > 0, got {mass}")));
    }
    if !(ads_radius > 0.0) || !ads_radius.is_finite() {
        return Err(Error::invalid(
            "ads_radius",
            format!("need l > 0, got {ads_radius}"),
        ));
    }
    let l2 = ads_radius * ads_radius;
    let a = mass * l2;
    let b = (a * a + l2 * l2 * l2 / 27.0).sqrt();
    // Real cube roots; the second argument is negative.
    let mut r = (a + b).cbrt() + (a - b).cbrt();
    // Newton polish so that the factored metric function vanishes at the root
    // to machine precision.
    for _ in 0..4 {
        let c = r * r * r + l2 * r - 2.0 * mass * l2;
        let cp = 3.0 * r * r + l2;
        r -= c / cp;
    }
    Ok(r)
}

impl BlackHoleParams {
    pub fn new(mass: f64, ads_radius: f64) -> Result<Self> {
        let r_sads = horizon_radius(mass, ads_radius)?;
        let l2 = ads_radius * ads_radius;
        let kappa = 0.5 * (2.0 * mass / (r_sads * r_sads) + 2.0 * r_sads / l2);
        Ok(BlackHoleParams {
            mass,
            ads_radius,
            r_sads,
            kappa,
        })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn ads_radius(&self) -> f64 {
        self.ads_radius
    }

    pub fn horizon_radius(&self) -> f64 {
        self.r_sads
    }

    /// kappa = F'(r_SAdS) / 2 > 0.
    pub fn surface_gravity(&self) -> f64 {
        self.kappa
    }

    /// F(r) = 1 - 2M/r + r^2/l^2 in the factored, cancellation-free form
    /// (r - r_h)(r^2 + r_h r + r_h^2 + l^2) / (l^2 r).
    pub fn metric_f(&self, r: f64) -> f64 {
        self.metric_f_from_delta(r - self.r_sads)
    }

    /// Same as `metric_f` but parameterized by delta = r - r_h, which stays
    /// accurate arbitrarily close to the horizon.
    pub fn metric_f_from_delta(&self, delta: f64) -> f64 {
        let l2 = self.ads_radius * self.ads_radius;
        let rh = self.r_sads;
        let r = rh + delta;
        delta * (r * r + rh * r + rh * rh + l2) / (l2 * r)
    }

    pub fn metric_f_prime(&self, r: f64) -> f64 {
        2.0 * self.mass / (r * r) + 2.0 * r / (self.ads_radius * self.ads_radius)
    }

    /// Smooth remainder 1/F(s) - 1/(2 kappa (s - r_h)); algebra reduces it to
    /// (l^2/r_h - (s - r_h)) / (2 kappa (s^2 + r_h s + r_h^2 + l^2)), which has
    /// no cancellation anywhere on the exterior.
    fn inv_f_regular_part(&self, s: f64) -> f64 {
        let l2 = self.ads_radius * self.ads_radius;
        let rh = self.r_sads;
        (l2 / rh - (s - rh)) / (2.0 * self.kappa * (s * s + rh * s + rh * rh + l2))
    }

    /// Far cutoff making the analytic tail estimate l^2/R accurate to ~1e-13.
    fn far_cutoff(&self) -> f64 {
        let l = self.ads_radius;
        let tail_from_error = (l.powi(4) / 3e-13).cbrt();
        tail_from_error.max(100.0 * self.r_sads).max(100.0 * l)
    }

    /// Tortoise coordinate by adaptive quadrature of 1/F up to a far cutoff
    /// plus the analytic l^2/R tail; the simple pole at the horizon is split
    /// off and integrated in closed form.
    pub fn tortoise_quadrature(&self, r: f64) -> Result<f64> {
        if !(r > self.r_sads) {
            return Err(Error::Domain {
                name: "r",
                value: r,
                reason: "tortoise coordinate defined for r > r_SAdS",
            });
        }
        self.tortoise_from_delta(r - self.r_sads)
    }

    /// Tortoise coordinate parameterized by delta = r - r_h > 0.
    pub fn tortoise_from_delta(&self, delta: f64) -> Result<f64> {
        if !(delta > 0.0) {
            return Err(Error::Domain {
                name: "delta",
                value: delta,
                reason: "tortoise coordinate defined for r > r_SAdS",
            });
        }
        let r = self.r_sads + delta;
        let r_far = self.far_cutoff();
        let log_part = ((r_far - self.r_sads) / delta).ln() / (2.0 * self.kappa);
        let scale = 1.0 + log_part.abs();
        let smooth = quad::integrate(
            |s| self.inv_f_regular_part(s),
            r,
            r_far,
            1e-14 * scale,
        )?;
        let tail = self.ads_radius * self.ads_radius / r_far;
        Ok(-(log_part + smooth + tail))
    }

    /// Partial-fraction antiderivative of 1/F, normalized to vanish at
    /// r = infinity. Used as the independent closed-form route.
    pub fn tortoise_closed_form(&self, r: f64) -> Result<f64> {
        if !(r > self.r_sads) {
            return Err(Error::Domain {
                name: "r",
                value: r,
                reason: "tortoise coordinate defined for r > r_SAdS",
            });
        }
        let rh = self.r_sads;
        let l2 = self.ads_radius * self.ads_radius;
        let c2 = rh * rh + l2;
        let a = 1.0 / (2.0 * self.kappa);
        let e = a * c2 / rh;
        let w = (3.0 * rh * rh + 4.0 * l2).sqrt();
        let d = (2.0 / w) * (e + 0.5 * a * rh);
        let log_term = a * ((r - rh) / (r * r + rh * r + c2).sqrt()).ln();
        let atan_term = d * (((2.0 * r + rh) / w).atan() - std::f64::consts::FRAC_PI_2);
        Ok(log_term + atan_term)
    }
}

/// Tabulated inverse of the tortoise map. Two tables anchored at x = -1/2:
/// toward the horizon the state is ln(r - r_h) on a uniform x grid (the map is
/// nearly affine there), toward the boundary it is 1/r on a uniform ln(-x)
/// grid. Filled by marching dx/dr = 1/F with fixed-substep RK4; built once,
/// immutable afterwards.
#[derive(Debug, Clone)]
pub struct TortoiseMap {
    params: BlackHoleParams,
    // Region I (horizon side): q(x) = ln(r - r_h) at x = anchor - k*h, in two
    // spans of different resolution.
    q_fine: UniformTable,  // x in [x_mid, -1/2]
    q_deep: UniformTable,  // x in [x_deep, x_mid]
    // Region II (boundary side): rho(u) = 1/r at u = ln(-x).
    rho_table: UniformTable, // u in [ln(X_SERIES), ln(1/2)]
}

/// Values on a uniform grid `start + k*step` (step may be negative).
#[derive(Debug, Clone)]
struct UniformTable {
    start: f64,
    step: f64,
    values: Vec<f64>,
}

impl UniformTable {
    fn end(&self) -> f64 {
        self.start + self.step * (self.values.len() - 1) as f64
    }

    fn contains(&self, t: f64) -> bool {
        let lo = self.start.min(self.end());
        let hi = self.start.max(self.end());
        (lo - TABLE_MARGIN..=hi + TABLE_MARGIN).contains(&t)
    }

    /// Cubic Lagrange interpolation through the four nodes around `t`.
    fn interpolate(&self, t: f64) -> f64 {
        let n = self.values.len();
        let raw = (t - self.start) / self.step;
        let k = (raw.floor() as isize).clamp(1, n as isize - 3) as usize;
        let s = raw - k as f64; // in [-1, 2] near the clamp edges
        let (f0, f1, f2, f3) = (
            self.values[k - 1],
            self.values[k],
            self.values[k + 1],
            self.values[k + 2],
        );
        // Nodes at local coordinates -1, 0, 1, 2.
        let c0 = -s * (s - 1.0) * (s - 2.0) / 6.0;
        let c1 = (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0;
        let c2 = -(s + 1.0) * s * (s - 2.0) / 2.0;
        let c3 = (s + 1.0) * s * (s - 1.0) / 6.0;
        c0 * f0 + c1 * f1 + c2 * f2 + c3 * f3
    }
}

/// Fixed-substep RK4 on a scalar ODE y' = f(t, y) from t0 over n cells of
/// width h, recording each node.
fn rk4_fill<F: Fn(f64, f64) -> f64>(f: F, t0: f64, y0: f64, h: f64, cells: usize) -> Vec<f64> {
    const SUBSTEPS: usize = 8;
    let mut values = Vec::with_capacity(cells + 1);
    values.push(y0);
    let mut t = t0;
    let mut y = y0;
    let hs = h / SUBSTEPS as f64;
    for _ in 0..cells {
        for _ in 0..SUBSTEPS {
            let k1 = f(t, y);
            let k2 = f(t + 0.5 * hs, y + 0.5 * hs * k1);
            let k3 = f(t + 0.5 * hs, y + 0.5 * hs * k2);
            let k4 = f(t + hs, y + hs * k3);
            y += hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += hs;
        }
        values.push(y);
    }
    values
}

impl TortoiseMap {
    /// Build with the default horizon depth, enough for solves needing
    /// x down to about -380 / kappa.
    pub fn new(params: BlackHoleParams) -> Result<Self> {
        let depth = 400.0 / params.surface_gravity() + 8.0;
        Self::with_depth(params, -depth)
    }

    pub fn with_depth(params: BlackHoleParams, x_deep: f64) -> Result<Self> {
        if !(x_deep < -1.0) {
            return Err(Error::invalid(
                "x_deep",
                format!("need x_deep < -1, got {x_deep}"),
            ));
        }
        let anchor_x = -0.5;
        let r_anchor = invert_by_bisection(&params, anchor_x)?;
        let rh = params.horizon_radius();
        let l2 = params.ads_radius() * params.ads_radius();

        // dq/dx with q = ln(r - r_h): smooth and -> 2 kappa at the horizon
        // even when exp(q) underflows.
        let q_rhs = move |_x: f64, q: f64| {
            let delta = q.exp();
            let r = rh + delta;
            (r * r + rh * r + rh * rh + l2) / (l2 * r)
        };

        let q_anchor = (r_anchor - rh).ln();
        let x_mid = x_deep.max(-6.0).min(anchor_x - 0.5);
        let h_fine = -0.01;
        let fine_cells = ((anchor_x - x_mid) / -h_fine).ceil() as usize;
        let x_mid = anchor_x + h_fine * fine_cells as f64;
        let q_fine = UniformTable {
            start: anchor_x,
            step: h_fine,
            values: rk4_fill(q_rhs, anchor_x, q_anchor, h_fine, fine_cells),
        };

        let h_deep = -0.1;
        let deep_cells = if x_deep < x_mid {
            ((x_mid - x_deep) / -h_deep).ceil() as usize
        } else {
            4
        };
        let q_deep = UniformTable {
            start: x_mid,
            step: h_deep,
            values: rk4_fill(q_rhs, x_mid, *q_fine.values.last().unwrap(), h_deep, deep_cells),
        };

        // d rho / du with rho = 1/r, u = ln(-x): e^u (rho^2 - 2M rho^3 + 1/l^2).
        let mass = params.mass();
        let rho_rhs = move |u: f64, rho: f64| {
            u.exp() * (rho * rho - 2.0 * mass * rho * rho * rho + 1.0 / l2)
        };
        let u_anchor = 0.5_f64.ln();
        let u_min = X_SERIES.ln();
        let h_u = -0.01;
        let u_cells = ((u_anchor - u_min) / -h_u).ceil() as usize;
        let rho_table = UniformTable {
            start: u_anchor,
            step: h_u,
            values: rk4_fill(rho_rhs, u_anchor, 1.0 / r_anchor, h_u, u_cells),
        };

        Ok(TortoiseMap {
            params,
            q_fine,
            q_deep,
            rho_table,
        })
    }

    pub fn params(&self) -> &BlackHoleParams {
        &self.params
    }

    pub fn x_deep(&self) -> f64 {
        self.q_deep.end()
    }

    /// Forward map by the quadrature route.
    pub fn tortoise(&self, r: f64) -> Result<f64> {
        self.params.tortoise_quadrature(r)
    }

    /// Radius and horizon distance at tortoise coordinate x < 0.
    /// Fast path used by the potential evaluator; no polishing.
    pub fn lookup(&self, x: f64) -> Result<RadiusAt> {
        if !(x < 0.0) {
            return Err(Error::Domain {
                name: "x",
                value: x,
                reason: "tortoise coordinate of the exterior is negative",
            });
        }
        let rh = self.params.r_sads;
        if x >= -X_SERIES {
            // Boundary series: r = -l^2/x + x/3 + M x^2 / (2 l^2).
            let l2 = self.params.ads_radius * self.params.ads_radius;
            let r = -l2 / x + x / 3.0 + self.params.mass * x * x / (2.0 * l2);
            return Ok(RadiusAt {
                radius: r,
                delta: r - rh,
                near_boundary: true,
            });
        }
        if x >= -0.5 {
            let u = (-x).ln();
            let rho = self.rho_table.interpolate(u);
            let r = 1.0 / rho;
            return Ok(RadiusAt {
                radius: r,
                delta: r - rh,
                near_boundary: false,
            });
        }
        let table = if x >= self.q_fine.end() {
            &self.q_fine
        } else if x >= self.q_deep.end() - TABLE_MARGIN {
            &self.q_deep
        } else {
            return Err(Error::Domain {
                name: "x",
                value: x,
                reason: "below the tabulated horizon depth; rebuild the map deeper",
            });
        };
        let q = table.interpolate(x);
        let delta = q.exp();
        Ok(RadiusAt {
            radius: rh + delta,
            delta,
            near_boundary: false,
        })
    }

    /// Monotone inverse of the tortoise map with a bracketed Newton polish
    /// against the quadrature forward route.
    pub fn radius_from_tortoise(&self, x: f64) -> Result<f64> {
        let guess = self.lookup(x)?;
        if guess.near_boundary {
            // The series inverse is already beyond quadrature resolution of
            // the forward map near the boundary.
            return Ok(guess.radius);
        }
        let mut r = guess.radius;
        for _ in 0..2 {
            let fx = self.params.tortoise_quadrature(r)? - x;
            let f = self.params.metric_f(r);
            let step = -fx * f;
            let next = r + step;
            if next > self.params.r_sads {
                r = next;
            }
        }
        Ok(r)
    }

    /// Tabulated (x, r) node pairs, monotone in both coordinates. Horizon-side
    /// nodes whose distance to the horizon underflows f64 are dropped.
    fn node_pairs(&self) -> Vec<(f64, f64)> {
        let rh = self.params.r_sads;
        let mut pairs: Vec<(f64, f64)> = Vec::new();
        for (table, skip_first) in [(&self.q_deep, false), (&self.q_fine, true)] {
            let n = table.values.len();
            for k in (0..n).rev() {
                if skip_first && k == n - 1 {
                    continue;
                }
                let q = table.values[k];
                // Below this the radius is no longer a faithful f64
                // coordinate (r_h + delta rounds to r_h); such nodes only
                // exist in the delta parameterization.
                if q < (1e-12 * rh).ln() {
                    continue;
                }
                pairs.push((table.start + table.step * k as f64, rh + q.exp()));
            }
        }
        for k in 1..self.rho_table.values.len() {
            let u = self.rho_table.start + self.rho_table.step * k as f64;
            pairs.push((-u.exp(), 1.0 / self.rho_table.values[k]));
        }
        pairs
    }

    /// Monotone radius samples of the tabulated map (horizon side first).
    pub fn r_grid(&self) -> Vec<f64> {
        self.node_pairs().into_iter().map(|(_, r)| r).collect()
    }

    /// Tortoise samples matching `r_grid`.
    pub fn x_grid(&self) -> Vec<f64> {
        self.node_pairs().into_iter().map(|(x, _)| x).collect()
    }
}

/// Result of a radius lookup.
#[derive(Debug, Clone, Copy)]
pub struct RadiusAt {
    pub radius: f64,
    pub delta: f64,
    /// Set when x was above the tabulated range and the boundary series was
    /// used; the radius then exceeds every tabulated cutoff.
    pub near_boundary: bool,
}

/// Solve tortoise(r) = target by bisection in ln(r - r_h), then Newton.
fn invert_by_bisection(params: &BlackHoleParams, target: f64) -> Result<f64> {
    let rh = params.horizon_radius();
    let mut lo = (1e-12 * rh.max(1.0)).ln();
    let mut hi = (1e3 * (rh + params.ads_radius())).ln();
    let x_of = |t: f64| params.tortoise_from_delta(t.exp());
    if x_of(lo)? > target || x_of(hi)? < target {
        return Err(Error::Convergence {
            reason: format!("anchor target x = {target} outside bisection bracket"),
        });
    }
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if x_of(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut r = rh + (0.5 * (lo + hi)).exp();
    for _ in 0..3 {
        let fx = params.tortoise_quadrature(r)? - target;
        r -= fx * params.metric_f(r);
    }
    Ok(r)
}
