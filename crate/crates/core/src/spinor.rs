//! Fixed 4x4 complex matrices of the radial Dirac system: the gamma
//! representation built from Pauli blocks, the diagonal generator of the free
//! equation, the oscillatory and Frobenius fundamental matrices, and the twist
//! that pairs solutions.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Largest exponent fed to `exp` before we refuse to build a fundamental
/// matrix in plain (unscaled) representation.
pub const EXP_GUARD: f64 = 700.0;

/// Complex 4-component state of the radial system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor4(pub [Complex64; 4]);

impl Spinor4 {
    pub const fn zero() -> Self {
        Spinor4([ZERO; 4])
    }

    pub fn basis(k: usize) -> Self {
        let mut v = Self::zero();
        v.0[k] = ONE;
        v
    }

    pub fn from_reals(v: [f64; 4]) -> Self {
        Spinor4([
            Complex64::new(v[0], 0.0),
            Complex64::new(v[1], 0.0),
            Complex64::new(v[2], 0.0),
            Complex64::new(v[3], 0.0),
        ])
    }

    /// Euclidean norm of the 4 complex components.
    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Plain (unconjugated) transpose pairing `self^t other`.
    pub fn dot_t(&self, other: &Spinor4) -> Complex64 {
        (0..4).map(|k| self.0[k] * other.0[k]).sum()
    }

    pub fn conj(&self) -> Spinor4 {
        Spinor4([
            self.0[0].conj(),
            self.0[1].conj(),
            self.0[2].conj(),
            self.0[3].conj(),
        ])
    }

    pub fn scale(&self, c: Complex64) -> Spinor4 {
        Spinor4([self.0[0] * c, self.0[1] * c, self.0[2] * c, self.0[3] * c])
    }
}

impl Index<usize> for Spinor4 {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Spinor4 {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl Add for Spinor4 {
    type Output = Spinor4;
    fn add(self, rhs: Spinor4) -> Spinor4 {
        Spinor4([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
            self.0[3] + rhs.0[3],
        ])
    }
}

impl Sub for Spinor4 {
    type Output = Spinor4;
    fn sub(self, rhs: Spinor4) -> Spinor4 {
        Spinor4([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
            self.0[3] - rhs.0[3],
        ])
    }
}

impl Neg for Spinor4 {
    type Output = Spinor4;
    fn neg(self) -> Spinor4 {
        Spinor4([-self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }
}

impl Mul<Complex64> for Spinor4 {
    type Output = Spinor4;
    fn mul(self, c: Complex64) -> Spinor4 {
        self.scale(c)
    }
}

impl Mul<f64> for Spinor4 {
    type Output = Spinor4;
    fn mul(self, c: f64) -> Spinor4 {
        self.scale(Complex64::new(c, 0.0))
    }
}

/// Dense 4x4 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix4C(pub [[Complex64; 4]; 4]);

impl Matrix4C {
    pub const fn zero() -> Self {
        Matrix4C([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for k in 0..4 {
            m.0[k][k] = ONE;
        }
        m
    }

    pub fn diag(d: [Complex64; 4]) -> Self {
        let mut m = Self::zero();
        for k in 0..4 {
            m.0[k][k] = d[k];
        }
        m
    }

    /// Matrix built from integer entries scaled by `re + i*im` units: entries
    /// are given as (real, imag) integer pairs. Keeps the named constants
    /// bit-for-bit constructible.
    pub fn from_int_entries(entries: [[(i32, i32); 4]; 4]) -> Self {
        let mut m = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = Complex64::new(entries[r][c].0 as f64, entries[r][c].1 as f64);
            }
        }
        m
    }

    pub fn conj_transpose(&self) -> Matrix4C {
        let mut m = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = self.0[c][r].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Matrix4C {
        let mut m = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = self.0[c][r];
            }
        }
        m
    }

    pub fn scale(&self, c: Complex64) -> Matrix4C {
        let mut m = *self;
        for r in 0..4 {
            for k in 0..4 {
                m.0[r][k] = m.0[r][k] * c;
            }
        }
        m
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Supremum of entry moduli (the norm used in the growth estimates).
    pub fn sup_norm(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    pub fn mul_vec(&self, v: &Spinor4) -> Spinor4 {
        let mut out = Spinor4::zero();
        for r in 0..4 {
            let mut acc = ZERO;
            for c in 0..4 {
                acc += self.0[r][c] * v.0[c];
            }
            out.0[r] = acc;
        }
        out
    }

    /// Outer product `a b^t` (no conjugation).
    pub fn outer(a: &Spinor4, b: &Spinor4) -> Matrix4C {
        let mut m = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = a.0[r] * b.0[c];
            }
        }
        m
    }
}

impl Add for Matrix4C {
    type Output = Matrix4C;
    fn add(self, rhs: Matrix4C) -> Matrix4C {
        let mut m = Matrix4C::zero();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = self.0[r][c] + rhs.0[r][c];
            }
        }
        m
    }
}

impl Sub for Matrix4C {
    type Output = Matrix4C;
    fn sub(self, rhs: Matrix4C) -> Matrix4C {
        let mut m = Matrix4C::zero();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = self.0[r][c] - rhs.0[r][c];
            }
        }
        m
    }
}

impl Mul for Matrix4C {
    type Output = Matrix4C;
    fn mul(self, rhs: Matrix4C) -> Matrix4C {
        let mut m = Matrix4C::zero();
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = ZERO;
                for k in 0..4 {
                    acc += self.0[r][k] * rhs.0[k][c];
                }
                m.0[r][c] = acc;
            }
        }
        m
    }
}

impl Mul<Spinor4> for Matrix4C {
    type Output = Spinor4;
    fn mul(self, v: Spinor4) -> Spinor4 {
        self.mul_vec(&v)
    }
}

/// The Dirac matrices of the block-Pauli representation: gamma^0 is Hermitian,
/// gamma^1..3 anti-Hermitian, and the Clifford relation carries the Minkowski
/// signature (+,-,-,-).
pub fn gamma(index: usize) -> Result<Matrix4C> {
    match index {
        // gamma^0 = i [[0, I2], [-I2, 0]]
        0 => Ok(Matrix4C::from_int_entries([
            [(0, 0), (0, 0), (0, 1), (0, 0)],
            [(0, 0), (0, 0), (0, 0), (0, 1)],
            [(0, -1), (0, 0), (0, 0), (0, 0)],
            [(0, 0), (0, -1), (0, 0), (0, 0)],
        ])),
        // gamma^1 = i [[0, s1], [s1, 0]], s1 = diag(1, -1)
        1 => Ok(Matrix4C::from_int_entries([
            [(0, 0), (0, 0), (0, 1), (0, 0)],
            [(0, 0), (0, 0), (0, 0), (0, -1)],
            [(0, 1), (0, 0), (0, 0), (0, 0)],
            [(0, 0), (0, -1), (0, 0), (0, 0)],
        ])),
        // gamma^2 = i [[0, s2], [s2, 0]], s2 = [[0,1],[1,0]]
        2 => Ok(Matrix4C::from_int_entries([
            [(0, 0), (0, 0), (0, 0), (0, 1)],
            [(0, 0), (0, 0), (0, 1), (0, 0)],
            [(0, 0), (0, 1), (0, 0), (0, 0)],
            [(0, 1), (0, 0), (0, 0), (0, 0)],
        ])),
        // gamma^3 = i [[0, s3], [s3, 0]], s3 = [[0,-i],[i,0]]
        3 => Ok(Matrix4C::from_int_entries([
            [(0, 0), (0, 0), (0, 0), (1, 0)],
            [(0, 0), (0, 0), (-1, 0), (0, 0)],
            [(0, 0), (1, 0), (0, 0), (0, 0)],
            [(-1, 0), (0, 0), (0, 0), (0, 0)],
        ])),
        _ => Err(Error::invalid("index", format!("gamma index {index} not in 0..=3"))),
    }
}

/// Product gamma^0 gamma^1 = blockdiag(-s1, s1).
pub fn gamma0_gamma1() -> Matrix4C {
    Matrix4C::from_int_entries([
        [(-1, 0), (0, 0), (0, 0), (0, 0)],
        [(0, 0), (1, 0), (0, 0), (0, 0)],
        [(0, 0), (0, 0), (1, 0), (0, 0)],
        [(0, 0), (0, 0), (0, 0), (-1, 0)],
    ])
}

/// Product gamma^0 gamma^2 = blockdiag(-s2, s2).
pub fn gamma0_gamma2() -> Matrix4C {
    Matrix4C::from_int_entries([
        [(0, 0), (-1, 0), (0, 0), (0, 0)],
        [(-1, 0), (0, 0), (0, 0), (0, 0)],
        [(0, 0), (0, 0), (0, 0), (1, 0)],
        [(0, 0), (0, 0), (1, 0), (0, 0)],
    ])
}

/// Diagonal generator of the free radial equation: diag(1, -1, -1, 1),
/// the unique diagonal matrix commuting with the oscillatory fundamental
/// matrix and equal to -gamma^0 gamma^1.
pub fn big_gamma1() -> Matrix4C {
    Matrix4C::from_int_entries([
        [(1, 0), (0, 0), (0, 0), (0, 0)],
        [(0, 0), (-1, 0), (0, 0), (0, 0)],
        [(0, 0), (0, 0), (-1, 0), (0, 0)],
        [(0, 0), (0, 0), (0, 0), (1, 0)],
    ])
}

/// Sign pattern of `big_gamma1` as plain integers, used by the profile-variable
/// solvers.
pub const GAMMA1_SIGNS: [f64; 4] = [1.0, -1.0, -1.0, 1.0];

/// Diagonal phases of the oscillatory fundamental matrix at (x, lambda):
/// (e^{i lambda x}, e^{-i lambda x}, e^{-i lambda x}, e^{i lambda x}).
pub fn mc_phases(x: f64, lambda: Complex64) -> [Complex64; 4] {
    let plus = (I * lambda * x).exp();
    let minus = (-I * lambda * x).exp();
    [plus, minus, minus, plus]
}

/// Oscillatory fundamental matrix diag(e^{i lambda x}, e^{-i lambda x},
/// e^{-i lambda x}, e^{i lambda x}) with an overflow guard on the exponent.
pub fn fundamental_mc(x: f64, lambda: Complex64) -> Result<Matrix4C> {
    let magnitude = (lambda.im * x).abs();
    if magnitude > EXP_GUARD {
        return Err(Error::ScaledRepresentation {
            magnitude,
            limit: EXP_GUARD,
        });
    }
    Ok(Matrix4C::diag(mc_phases(x, lambda)))
}

/// Eigenvector-basis change for gamma^1: columns split C^4 into the +i and -i
/// eigenspaces of gamma^1.
pub fn diagonalizer_p() -> Matrix4C {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let e = |v: f64| Complex64::new(v, 0.0);
    Matrix4C([
        [e(s), e(0.0), e(s), e(0.0)],
        [e(0.0), e(s), e(0.0), e(s)],
        [e(s), e(0.0), e(-s), e(0.0)],
        [e(0.0), e(-s), e(0.0), e(s)],
    ])
}

pub fn diagonalizer_p_inv() -> Matrix4C {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let e = |v: f64| Complex64::new(v, 0.0);
    Matrix4C([
        [e(s), e(0.0), e(s), e(0.0)],
        [e(0.0), e(s), e(0.0), e(-s)],
        [e(s), e(0.0), e(-s), e(0.0)],
        [e(0.0), e(s), e(0.0), e(s)],
    ])
}

/// Frobenius fundamental matrix of the Coulomb-type boundary system:
/// P diag((-x)^{ml}, (-x)^{ml}, (-x)^{-ml}, (-x)^{-ml}) P^{-1}, written out as
/// the exact half-sum pattern so that `frobenius_m0(-1.0, ml)` is the identity
/// bit for bit.
pub fn frobenius_m0(x: f64, ml: f64) -> Result<Matrix4C> {
    if x >= 0.0 {
        return Err(Error::Domain {
            name: "x",
            value: x,
            reason: "Frobenius matrix defined for x < 0 only",
        });
    }
    if ml <= 0.0 {
        return Err(Error::invalid("ml", format!("need ml > 0, got {ml}")));
    }
    let p = (-x).powf(ml);
    let q = (-x).powf(-ml);
    Ok(m0_from_powers(p, q))
}

/// Half-sum pattern shared by every Frobenius-matrix evaluation: `p` and `q`
/// are the two diagonal powers in the gamma^1 eigenbasis.
pub fn m0_from_powers(p: f64, q: f64) -> Matrix4C {
    let a = Complex64::new(0.5 * (p + q), 0.0);
    let b = Complex64::new(0.5 * (p - q), 0.0);
    Matrix4C([
        [a, ZERO, b, ZERO],
        [ZERO, a, ZERO, -b],
        [b, ZERO, a, ZERO],
        [ZERO, -b, ZERO, a],
    ])
}

/// The constant matrix (-i) gamma^0 gamma^1 gamma^2 = antidiag(-1, 1, 1, -1).
pub fn twist_matrix() -> Matrix4C {
    Matrix4C::from_int_entries([
        [(0, 0), (0, 0), (0, 0), (-1, 0)],
        [(0, 0), (0, 0), (1, 0), (0, 0)],
        [(0, 0), (1, 0), (0, 0), (0, 0)],
        [(-1, 0), (0, 0), (0, 0), (0, 0)],
    ])
}

/// Apply the twist to a state: maps solutions of the radial eigenvalue
/// equation to solutions and preserves the reflecting boundary condition.
pub fn twist(chi: &Spinor4) -> Spinor4 {
    Spinor4([-chi.0[3], chi.0[2], chi.0[1], -chi.0[0]])
}
