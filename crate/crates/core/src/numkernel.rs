//! Dense complex linear algebra for the small matrices that show up everywhere else:
//! differentials, adjoint representations and matrix-group elements.
//!
//! Dimensions stay tiny (at most a handful of rows), so everything is row-major `Vec`s and
//! straightforward loops.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// Default finite-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

const POWER_TOL: f64 = 1e-12;
const POWER_MAX_ITER: usize = 10_000;
const SQUARING_THRESHOLD: f64 = 0.5;
const TAYLOR_DEGREE: usize = 18;

#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!(
                "empty matrix shape {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput("non-finite matrix entry".into()));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        Self::new(
            rows.len(),
            cols,
            rows.iter().flat_map(|r| r.iter().copied()).collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Column matrix from a vector.
    pub fn column_vector(v: &[C64]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            entries: v.to_vec(),
        }
    }

    pub fn from_columns(cols: &[Vec<C64>]) -> Result<Self> {
        let rows = cols.first().map_or(0, |c| c.len());
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::InvalidInput("ragged columns".into()));
        }
        let mut entries = vec![ZERO; rows * cols.len()];
        for (j, c) in cols.iter().enumerate() {
            for (i, &z) in c.iter().enumerate() {
                entries[i * cols.len() + j] = z;
            }
        }
        Self::new(rows, cols.len(), entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|z| z.is_finite())
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn mat_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.cols, "mat_vec dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Maximum absolute column sum.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Hilbert–Schmidt inner product `tr(selfᴴ other)`.
    pub fn hs_inner(&self, other: &Self) -> C64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn lu(&self) -> Result<(Vec<C64>, Vec<usize>, f64)> {
        if !self.is_square() {
            return Err(Error::InvalidInput(format!(
                "LU of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| a[x * n + k].norm().total_cmp(&a[y * n + k].norm()))
                .unwrap_or(k);
            if p != k {
                for c in 0..n {
                    a.swap(k * n + c, p * n + c);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = a[k * n + k];
            if pivot == ZERO {
                continue;
            }
            for r in k + 1..n {
                let factor = a[r * n + k] / pivot;
                a[r * n + k] = factor;
                for c in k + 1..n {
                    let u = a[k * n + c];
                    a[r * n + c] -= factor * u;
                }
            }
        }
        Ok((a, perm, sign))
    }

    pub fn det(&self) -> Result<C64> {
        let n = self.rows;
        match n {
            1 if self.is_square() => Ok(self.entries[0]),
            2 if self.is_square() => {
                Ok(self.entries[0] * self.entries[3] - self.entries[1] * self.entries[2])
            }
            _ => {
                let (lu, _, sign) = self.lu()?;
                Ok((0..n).map(|i| lu[i * n + i]).product::<C64>() * sign)
            }
        }
    }

    /// Solves `self · x = b` by partial-pivot LU.
    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        let (lu, perm, _) = self.lu()?;
        let n = self.rows;
        if b.len() != n {
            return Err(Error::InvalidInput(
                "right-hand side length mismatch".into(),
            ));
        }
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        if (0..n).any(|i| lu[i * n + i].norm() <= 1e-14 * scale) {
            return Err(Error::DegenerateElement("singular matrix in solve".into()));
        }
        let mut y: Vec<C64> = perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for k in 0..i {
                let l = lu[i * n + k];
                y[i] = y[i] - l * y[k];
            }
        }
        for i in (0..n).rev() {
            for k in i + 1..n {
                let u = lu[i * n + k];
                y[i] = y[i] - u * y[k];
            }
            y[i] /= lu[i * n + i];
        }
        Ok(y)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.rows;
        let cols: Vec<Vec<C64>> = (0..n)
            .map(|j| {
                let mut e = vec![ZERO; n];
                e[j] = ONE;
                self.solve(&e)
            })
            .collect::<Result<_>>()?;
        Self::from_columns(&cols)
    }

    fn assert_same_shape(&self, other: &Self) {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch {}x{} vs {}x{}",
            self.rows,
            self.cols,
            other.rows,
            other.cols
        );
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.entries[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.entries[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.assert_same_shape(rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.assert_same_shape(rhs);
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Operator norm of a linear map between Hermitian spaces, in target units per source unit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LinearMapNorm(f64);

impl LinearMapNorm {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value < 0.0 {
            return Err(Error::InvalidInput(format!(
                "invalid operator norm {value}"
            )));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn seed_vector(n: usize) -> Vec<C64> {
    (0..n)
        .map(|k| {
            let k = k as f64;
            C64::new(1.0 + 0.25 * k, 0.3 + 0.17 * k.sqrt())
        })
        .collect()
}

/// Largest singular value of `m` and a unit right-singular vector attaining it.
///
/// Power iteration on `mᴴm` from a fixed seed. Stops once the eigen-residual drops below
/// 1e-12 relative, the Rayleigh quotient stops moving at machine precision, or after
/// 10 000 sweeps.
pub fn top_singular_pair(m: &ComplexMatrix) -> Result<(f64, Vec<C64>)> {
    if !m.is_finite() {
        return Err(Error::InvalidInput(
            "non-finite entries in spectral norm".into(),
        ));
    }
    let n = m.cols;
    if n == 1 {
        let s = vec_norm(&m.column(0));
        return Ok((s, vec![ONE]));
    }
    let gram = &m.adjoint() * m;
    let mut v = seed_vector(n);
    let nv = vec_norm(&v);
    v.iter_mut().for_each(|z| *z /= nv);
    let mut mu = f64::NAN;
    for _ in 0..POWER_MAX_ITER {
        let w = gram.mat_vec(&v);
        let nw = vec_norm(&w);
        if nw == 0.0 {
            // v lies in the kernel; for a zero matrix this is the answer.
            if gram.max_abs() == 0.0 {
                return Ok((0.0, v));
            }
            // Seed fell into the kernel: restart from the heaviest coordinate axis.
            let k = (0..n)
                .max_by(|&a, &b| gram[(a, a)].re.total_cmp(&gram[(b, b)].re))
                .unwrap_or(0);
            v = vec![ZERO; n];
            v[k] = ONE;
            continue;
        }
        let next: Vec<C64> = w.iter().map(|z| z / nw).collect();
        let gw = gram.mat_vec(&next);
        let new_mu = vec_dot(&next, &gw).re;
        let residual = gw
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b * new_mu).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let stalled = (new_mu - mu).abs() <= 4.0 * f64::EPSILON * new_mu.abs();
        v = next;
        mu = new_mu;
        if residual <= POWER_TOL * mu.abs() || stalled {
            break;
        }
    }
    Ok((mu.max(0.0).sqrt(), v))
}

pub fn spectral_norm(m: &ComplexMatrix) -> Result<LinearMapNorm> {
    let (s, _) = top_singular_pair(m)?;
    LinearMapNorm::new(s)
}

/// Matrix exponential by scaling and squaring around a degree-18 Taylor polynomial.
pub fn matrix_exp(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::InvalidInput(format!(
            "matrix_exp of non-square {}x{} matrix",
            m.rows, m.cols
        )));
    }
    if !m.is_finite() {
        return Err(Error::InvalidInput(
            "non-finite entries in matrix_exp".into(),
        ));
    }
    let norm = m.norm_one();
    let mut squarings = 0u32;
    if norm > SQUARING_THRESHOLD {
        squarings = (norm / SQUARING_THRESHOLD).log2().ceil().max(0.0) as u32;
    }
    let a = m.scale_real(0.5f64.powi(squarings as i32));
    // Horner: I + A(I + A/2(I + A/3(...)))
    let n = m.rows;
    let id = ComplexMatrix::identity(n);
    let mut acc = id.clone();
    for k in (1..=TAYLOR_DEGREE).rev() {
        acc = &id + &(&a * &acc).scale_real(1.0 / k as f64);
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    if !acc.is_finite() {
        return Err(Error::Range {
            magnitude: norm,
            limit: f64::MAX.ln(),
        });
    }
    Ok(acc)
}

/// Holomorphic Jacobian of `map` at `x` from the four-point stencil `x ± h e_k`, `x ± i h e_k`.
///
/// For holomorphic maps the even-order error terms cancel between the real and imaginary
/// pairs, so the truncation error is O(h⁴).
pub fn numeric_jacobian<F>(mut map: F, x: &[C64], h: f64) -> Result<ComplexMatrix>
where
    F: FnMut(&[C64]) -> Result<Vec<C64>>,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "finite-difference step {h} must be positive"
        )));
    }
    if x.is_empty() {
        return Err(Error::InvalidInput("empty evaluation point".into()));
    }
    let mut columns = Vec::with_capacity(x.len());
    let mut probe = x.to_vec();
    let mut rows = None;
    for k in 0..x.len() {
        let mut eval = |delta: C64| -> Result<Vec<C64>> {
            probe[k] = x[k] + delta;
            let out = map(&probe);
            probe[k] = x[k];
            out
        };
        let fp = eval(C64::new(h, 0.0))?;
        let fm = eval(C64::new(-h, 0.0))?;
        let gp = eval(C64::new(0.0, h))?;
        let gm = eval(C64::new(0.0, -h))?;
        let len = fp.len();
        if [fm.len(), gp.len(), gm.len()].iter().any(|&l| l != len) || len == 0 {
            return Err(Error::Evaluation("inconsistent map output length".into()));
        }
        if *rows.get_or_insert(len) != len {
            return Err(Error::Evaluation("inconsistent map output length".into()));
        }
        let col: Vec<C64> = (0..len)
            .map(|i| ((fp[i] - fm[i]) - C64::i() * (gp[i] - gm[i])) / (4.0 * h))
            .collect();
        columns.push(col);
    }
    ComplexMatrix::from_columns(&columns)
        .map_err(|_| Error::Evaluation("non-finite value inside finite-difference stencil".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let m = ComplexMatrix::from_diag(&[c(3.0, 0.0), c(0.0, 4.0)]);
        assert!((spectral_norm(&m).unwrap().value() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn spectral_norm_of_zero() {
        let m = ComplexMatrix::zeros(2, 2);
        assert_eq!(spectral_norm(&m).unwrap().value(), 0.0);
    }

    #[test]
    fn spectral_norm_rejects_non_finite() {
        assert!(ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn spectral_norm_of_shear_is_golden_ratio() {
        let m = ComplexMatrix::from_rows(&[&[ONE, ONE], &[ZERO, ONE]]).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let s = spectral_norm(&m).unwrap().value();
        assert!((s - golden).abs() <= 1e-10 * golden, "{s}");
    }

    #[test]
    fn top_singular_vector_attains_norm() {
        let m = ComplexMatrix::from_rows(&[&[c(1.0, 2.0), c(0.5, 0.0), c(0.0, -1.0)]]).unwrap();
        let (s, v) = top_singular_pair(&m).unwrap();
        assert!((vec_norm(&v) - 1.0).abs() < 1e-12);
        assert!((vec_norm(&m.mat_vec(&v)) - s).abs() < 1e-12);
    }

    #[test]
    fn exp_of_nilpotent() {
        let m = ComplexMatrix::from_rows(&[&[ZERO, ONE], &[ZERO, ZERO]]).unwrap();
        let e = matrix_exp(&m).unwrap();
        let want = ComplexMatrix::from_rows(&[&[ONE, ONE], &[ZERO, ONE]]).unwrap();
        assert!((&e - &want).max_abs() < 1e-15);
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let e = matrix_exp(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e, ComplexMatrix::identity(3));
    }

    #[test]
    fn exp_of_diagonal() {
        let a = c(0.3, 0.4);
        let e = matrix_exp(&ComplexMatrix::from_diag(&[a, -a])).unwrap();
        assert!((e[(0, 0)] - a.exp()).norm() < 1e-14);
        assert!((e[(1, 1)] - (-a).exp()).norm() < 1e-14);
        assert!(e[(0, 1)].norm() < 1e-16);
    }

    #[test]
    fn exp_rejects_rectangular() {
        assert!(matches!(
            matrix_exp(&ComplexMatrix::zeros(2, 3)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn jacobian_of_square() {
        let j = numeric_jacobian(|x| Ok(vec![x[0] * x[0]]), &[ONE], 1e-5).unwrap();
        assert!((j[(0, 0)] - c(2.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn jacobian_of_constant() {
        let j = numeric_jacobian(
            |_| Ok(vec![c(3.0, 1.0), c(-2.0, 0.0)]),
            &[c(0.2, 0.1), ONE],
            1e-5,
        )
        .unwrap();
        assert!(j.max_abs() < 1e-9);
    }

    #[test]
    fn jacobian_of_exp() {
        let j = numeric_jacobian(|x| Ok(vec![x[0].exp()]), &[ZERO], 1e-5).unwrap();
        assert!((j[(0, 0)] - ONE).norm() < 1e-8);
    }

    #[test]
    fn jacobian_propagates_evaluation_errors() {
        let r = numeric_jacobian(
            |x| {
                if x[0].re > 0.0 {
                    Err(Error::Evaluation("outside".into()))
                } else {
                    Ok(vec![x[0]])
                }
            },
            &[ZERO],
            1e-5,
        );
        assert!(matches!(r, Err(Error::Evaluation(_))));
    }

    #[test]
    fn inverse_and_det() {
        let m = ComplexMatrix::from_rows(&[
            &[c(2.0, 1.0), c(0.0, 1.0), ONE],
            &[c(0.5, 0.0), c(3.0, 0.0), c(0.0, -1.0)],
            &[ZERO, c(1.0, 1.0), c(1.0, 0.0)],
        ])
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!((&(&m * &inv) - &ComplexMatrix::identity(3)).max_abs() < 1e-14);
        let d = m.det().unwrap();
        let d_inv = inv.det().unwrap();
        assert!((d * d_inv - ONE).norm() < 1e-14);
    }
}
