//! Standard sampling grid for solution curves: a deep horizon section with
//! geometrically growing spacing, a uniform mid section where Wronskians are
//! matched and residuals measured, and geometric refinement into the boundary
//! where the system carries the ml/(-x) singularity.

use crate::error::{Error, Result};

/// Grid construction parameters; defaults match the solver conventions.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    /// Deep end of the grid (horizon side).
    pub x_min: f64,
    /// Left edge of the uniform section.
    pub x_uniform_lo: f64,
    /// Right edge of the uniform section; geometric refinement starts here.
    pub x_uniform_hi: f64,
    /// Uniform spacing.
    pub h_uniform: f64,
    /// Boundary-side end of the grid.
    pub x0: f64,
    /// Per-cell spacing growth away from the uniform section.
    pub growth: f64,
}

impl GridSpec {
    pub fn with_depth(x_min: f64) -> Self {
        GridSpec {
            x_min,
            x_uniform_lo: -8.0,
            x_uniform_hi: -0.02,
            h_uniform: 0.01,
            x0: -1e-4,
            growth: 1.12,
        }
    }
}

/// Increasing sample positions shared by the solution curves of one solve.
#[derive(Debug, Clone)]
pub struct StandardGrid {
    xs: Vec<f64>,
    /// Index range [lo, hi] of the uniform section (inclusive).
    uniform: (usize, usize),
    h_uniform: f64,
}

impl StandardGrid {
    pub fn build(spec: &GridSpec) -> Result<StandardGrid> {
        if !(spec.x_min < spec.x_uniform_lo
            && spec.x_uniform_lo < spec.x_uniform_hi
            && spec.x_uniform_hi < spec.x0
            && spec.x0 < 0.0)
        {
            return Err(Error::invalid(
                "grid",
                format!("grid sections out of order: {spec:?}"),
            ));
        }
        let mut xs = Vec::new();

        // Deep section, built leftward from the uniform edge with growing
        // spacing, then reversed.
        let mut deep = Vec::new();
        let mut x = spec.x_uniform_lo;
        let mut h = spec.h_uniform * 4.0;
        while x > spec.x_min + 1e-12 {
            x = (x - h).max(spec.x_min);
            deep.push(x);
            h = (h * spec.growth).min(2.0);
        }
        xs.extend(deep.into_iter().rev());

        // Uniform section, inclusive of both edges.
        let n_uniform = ((spec.x_uniform_hi - spec.x_uniform_lo) / spec.h_uniform).round() as usize;
        let uniform_lo = xs.len();
        for k in 0..=n_uniform {
            xs.push(spec.x_uniform_lo + k as f64 * spec.h_uniform);
        }
        let uniform_hi = xs.len() - 1;

        // Geometric refinement toward the boundary anchor x0.
        let n_geo = 160;
        let ratio = (spec.x0 / spec.x_uniform_hi).powf(1.0 / n_geo as f64);
        let mut x = spec.x_uniform_hi;
        for _ in 0..n_geo {
            x *= ratio;
            xs.push(x);
        }
        let last = xs.len() - 1;
        xs[last] = spec.x0;

        Ok(StandardGrid {
            xs,
            uniform: (uniform_lo, uniform_hi),
            h_uniform: spec.h_uniform,
        })
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn x_min(&self) -> f64 {
        self.xs[0]
    }

    pub fn x0(&self) -> f64 {
        *self.xs.last().unwrap()
    }

    /// Index range (inclusive) of the uniform mid section.
    pub fn uniform_section(&self) -> (usize, usize) {
        self.uniform
    }

    pub fn h_uniform(&self) -> f64 {
        self.h_uniform
    }

    /// Index of the grid node closest to `x`.
    pub fn nearest_index(&self, x: f64) -> usize {
        match self
            .xs
            .binary_search_by(|v| v.partial_cmp(&x).expect("grid is finite"))
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
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_increasing_and_sectioned() {
        let g = StandardGrid::build(&GridSpec::with_depth(-40.0)).unwrap();
        let xs = g.xs();
        for w in xs.windows(2) {
            assert!(w[1] > w[0]);
        }
        assert_eq!(g.x_min(), -40.0);
        assert_eq!(g.x0(), -1e-4);
        let (lo, hi) = g.uniform_section();
        for k in lo..hi {
            let h = xs[k + 1] - xs[k];
            assert!((h - g.h_uniform()).abs() < 1e-9);
        }
        // Matching points sit on (near) uniform nodes.
        for target in [-0.5, -1.0, -2.0] {
            let k = g.nearest_index(target);
            assert!((xs[k] - target).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_spec() {
        let mut spec = GridSpec::with_depth(-40.0);
        spec.x0 = -0.5;
        assert!(StandardGrid::build(&spec).is_err());
    }
}
