//! Fixed-shape complex matrices (2×2 and 4×4) and Hermitian spectral routines.
//!
//! Storage is a row-major `[C64; 16]` with an explicit dimension, so every
//! matrix is `Copy` and lives on the stack. A 2×2 matrix only uses the first
//! four slots.
//!
//! Eigenvalues of 2×2 Hermitian matrices come from the closed-form quadratic;
//! 4×4 matrices (and all eigenvector requests) go through cyclic complex Jacobi
//! rotations.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity tolerance on `|a_ij - conj(a_ji)|`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Off-diagonal Frobenius norm at which Jacobi iteration stops.
pub const EIGEN_TOL: f64 = 1e-12;
/// Tolerance for value comparisons in checks and tests.
pub const EQ_TOL: f64 = 1e-10;

const MAX_SWEEPS: usize = 64;

#[inline]
pub const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub const fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [C64; 16],
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        d => Err(Error::UnsupportedDimension(d)),
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            data: [ZERO; 16],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, ONE);
        }
        Ok(m)
    }

    pub fn from_rows2(rows: [[C64; 2]; 2]) -> Self {
        let mut data = [ZERO; 16];
        for (i, row) in rows.iter().enumerate() {
            data[i * 2..i * 2 + 2].copy_from_slice(row);
        }
        Self { dim: 2, data }
    }

    pub fn from_rows4(rows: [[C64; 4]; 4]) -> Self {
        let mut data = [ZERO; 16];
        for (i, row) in rows.iter().enumerate() {
            data[i * 4..i * 4 + 4].copy_from_slice(row);
        }
        Self { dim: 4, data }
    }

    /// Real 2×2 matrix from row-major entries.
    pub fn real2(a: f64, b: f64, c_: f64, d: f64) -> Self {
        Self::from_rows2([[re(a), re(b)], [re(c_), re(d)]])
    }

    pub fn diag(entries: &[C64]) -> Result<Self> {
        let mut m = Self::zeros(entries.len())?;
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        Ok(m)
    }

    /// Builds `|v⟩⟨v|` for a state vector of length 2 or 4.
    pub fn outer(v: &[C64]) -> Result<Self> {
        let mut m = Self::zeros(v.len())?;
        for i in 0..v.len() {
            for j in 0..v.len() {
                m.set(i, j, v[i] * v[j].conj());
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        debug_assert!(i < self.dim && j < self.dim);
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        debug_assert!(i < self.dim && j < self.dim);
        self.data[i * self.dim + j] = v;
    }

    /// Row-major view of the `dim²` live entries.
    pub fn entries(&self) -> &[C64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut out = Self {
            dim: n,
            data: [ZERO; 16],
        };
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = *self;
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = self.data[j * n + i].conj();
            }
        }
        out
    }

    /// `a ⊗ b` in the basis order |00⟩, |01⟩, |10⟩, |11⟩.
    pub fn kron(a: &Self, b: &Self) -> Result<Self> {
        if a.dim != 2 {
            return Err(Error::DimensionMismatch(a.dim, 2));
        }
        if b.dim != 2 {
            return Err(Error::DimensionMismatch(b.dim, 2));
        }
        let mut out = Self {
            dim: 4,
            data: [ZERO; 16],
        };
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out.data[(2 * i + k) * 4 + 2 * j + l] = a.get(i, j) * b.get(k, l);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `K · self · K†` for same-dimension matrices.
    pub fn conjugate_by(&self, k: &Self) -> Result<Self> {
        Ok(k.multiply(self)?.mul_unchecked(&k.dagger()))
    }

    pub fn scale(&self, s: C64) -> Self {
        let mut out = *self;
        for v in out.data.iter_mut() {
            *v *= s;
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Largest `|a_ij - conj(a_ji)|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        let mut out = *self;
        for (o, b) in out.data.iter_mut().zip(other.data.iter()) {
            *o = f(*o, *b);
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let v = self.get(i, j);
                write!(f, "{:>+.6}{:+.6}i  ", v.re, v.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

// Operator forms panic on dimension mismatch; use the `try_*`/`multiply`
// methods where the shapes are not known statically.
impl Add for ComplexMatrix {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs)
            .expect("dimension mismatch in matrix addition")
    }
}

impl Sub for ComplexMatrix {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs)
            .expect("dimension mismatch in matrix subtraction")
    }
}

impl Mul for ComplexMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.multiply(&rhs)
            .expect("dimension mismatch in matrix product")
    }
}

/// A complex matrix whose Hermiticity has been checked to [`HERMITIAN_TOL`].
#[derive(Clone, Copy, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let defect = m.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self(m))
    }

    /// Wraps a matrix that is Hermitian by construction, averaging away
    /// rounding-level asymmetry.
    pub(crate) fn from_construction(m: ComplexMatrix) -> Self {
        debug_assert!(m.hermiticity_defect() < 1e-9, "{:?}", m);
        let n = m.dim();
        let mut out = m;
        for i in 0..n {
            out.set(i, i, re(m.get(i, i).re));
            for j in i + 1..n {
                let v = (m.get(i, j) + m.get(j, i).conj()) * 0.5;
                out.set(i, j, v);
                out.set(j, i, v.conj());
            }
        }
        Self(out)
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Ok(Self(ComplexMatrix::zeros(dim)?))
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Ok(Self(ComplexMatrix::identity(dim)?))
    }

    pub fn real_diag(entries: &[f64]) -> Result<Self> {
        let v: Vec<C64> = entries.iter().map(|&x| re(x)).collect();
        Ok(Self(ComplexMatrix::diag(&v)?))
    }

    /// `|v⟩⟨v|`.
    pub fn projector(v: &[C64]) -> Result<Self> {
        Ok(Self::from_construction(ComplexMatrix::outer(v)?))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.try_sub(&other.0)?))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.try_add(&other.0)?))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(re(s)))
    }

    /// `Re tr(self · other)`, the Hilbert–Schmidt pairing.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        Ok(self.0.multiply(&other.0)?.trace().re)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(self)
    }

    pub fn trace_norm(&self) -> f64 {
        trace_norm(self)
    }

    /// Density-matrix check: unit trace and PSD within `tol`.
    pub fn check_density(&self, tol: f64) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > tol {
            return Err(Error::NotDensity(format!("trace {tr}")));
        }
        let min = self.eigenvalues()[0];
        if min < -tol {
            return Err(Error::NotDensity(format!("eigenvalue {min:e}")));
        }
        Ok(())
    }
}

impl fmt::Debug for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hermitian{:?}", self.0)
    }
}

/// Eigenvalues in ascending order.
pub fn hermitian_eigenvalues(h: &HermitianMatrix) -> Vec<f64> {
    let m = h.matrix();
    match m.dim() {
        2 => {
            let a = m.get(0, 0).re;
            let d = m.get(1, 1).re;
            let b = m.get(0, 1);
            let mean = 0.5 * (a + d);
            let half_gap = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean - half_gap, mean + half_gap]
        }
        _ => {
            let (mut vals, _) = jacobi(m, false);
            vals.sort_by(f64::total_cmp);
            vals
        }
    }
}

/// Checked entry point: validates Hermiticity first.
pub fn eigenvalues_checked(m: &ComplexMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigenvalues(&HermitianMatrix::new(*m)?))
}

/// Eigenvalues (ascending) with unit eigenvectors stored as the columns of
/// the returned matrix.
pub fn hermitian_eigen(h: &HermitianMatrix) -> (Vec<f64>, ComplexMatrix) {
    let (vals, vecs) = jacobi(h.matrix(), true);
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].total_cmp(&vals[j]));
    let mut sorted = ComplexMatrix::zeros(n).expect("dimension already validated");
    for (col, &src) in order.iter().enumerate() {
        for row in 0..n {
            sorted.set(row, col, vecs.get(row, src));
        }
    }
    (order.iter().map(|&i| vals[i]).collect(), sorted)
}

pub fn trace_norm(h: &HermitianMatrix) -> f64 {
    hermitian_eigenvalues(h).iter().map(|l| l.abs()).sum()
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a.get(i, j).norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Cyclic complex Jacobi. Each rotation first removes the phase of `a_pq`
/// and then applies the classical real symmetric rotation.
fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> (Vec<f64>, ComplexMatrix) {
    let n = m.dim();
    let mut a = *m;
    let mut v = ComplexMatrix::identity(n).expect("dimension already validated");
    let scale = a
        .entries()
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(1.0);
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= EIGEN_TOL * 1e-2 * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a.get(p, q);
                let off = apq.norm();
                if off < 1e-300 {
                    continue;
                }
                let phase = apq / off;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * off);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                // V restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
                let vpp = re(cs);
                let vpq = re(sn);
                let vqp = -phase.conj() * sn;
                let vqq = phase.conj() * cs;
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp * vpp + akq * vqp);
                    a.set(k, q, akp * vpq + akq * vqq);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, vpp.conj() * apk + vqp.conj() * aqk);
                    a.set(q, k, vpq.conj() * apk + vqq.conj() * aqk);
                }
                a.set(p, q, ZERO);
                a.set(q, p, ZERO);
                a.set(p, p, re(app - t * off));
                a.set(q, q, re(aqq + t * off));
                if want_vectors {
                    for k in 0..n {
                        let ekp = v.get(k, p);
                        let ekq = v.get(k, q);
                        v.set(k, p, ekp * vpp + ekq * vqp);
                        v.set(k, q, ekp * vpq + ekq * vqq);
                    }
                }
            }
        }
    }
    ((0..n).map(|i| a.get(i, i).re).collect(), v)
}

/// Pauli matrices, mostly for tests and presets.
pub mod pauli {
    use super::*;

    pub fn x() -> ComplexMatrix {
        ComplexMatrix::real2(0.0, 1.0, 1.0, 0.0)
    }

    pub fn y() -> ComplexMatrix {
        ComplexMatrix::from_rows2([[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]])
    }

    pub fn z() -> ComplexMatrix {
        ComplexMatrix::real2(1.0, 0.0, 0.0, -1.0)
    }

    pub fn i2() -> ComplexMatrix {
        ComplexMatrix::real2(1.0, 0.0, 0.0, 1.0)
    }
}
