//! Concrete complex Lie groups.
//!
//! Every instance fixes a basis `ε = (ε₁, …, ε_m)` of its Lie algebra and declares it
//! orthonormal; the left-invariant Hermitian metric is the one that makes this so at every
//! point. Tangent vectors at any `g` are stored in left-trivialized coordinates (the
//! coefficients of `g⁻¹·v` in `ε`), which turns every left-translation differential into the
//! coordinate identity.
//!
//! Instances:
//!
//! | name       | group        | algebra basis                          | dim  |
//! |------------|--------------|----------------------------------------|------|
//! | `additive` | ℂ^m          | coordinate vectors                     | m    |
//! | `torus`    | (ℂ*)^m       | coordinate vectors (`w ↦ w·e^{X}`)     | m    |
//! | `gl`       | GL(n,ℂ)      | elementary matrices `E_ab`             | n²   |
//! | `sl2`      | SL(2,ℂ)      | `H/√2, E, F` (Hilbert–Schmidt unit)    | 3    |

use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{vec_norm, ComplexMatrix, C64, ONE, ZERO};

const GL_DET_FLOOR: f64 = 1e-12;
const SL_DET_TOL: f64 = 1e-9;
const TABLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupKind {
    Additive,
    Torus,
    GeneralLinear,
    SpecialLinear2,
}

impl GroupKind {
    pub fn name(self) -> &'static str {
        match self {
            GroupKind::Additive => "additive",
            GroupKind::Torus => "torus",
            GroupKind::GeneralLinear => "gl",
            GroupKind::SpecialLinear2 => "sl2",
        }
    }

    pub fn is_matrix(self) -> bool {
        matches!(self, GroupKind::GeneralLinear | GroupKind::SpecialLinear2)
    }
}

/// Element of a Lie algebra, in coordinates with respect to the instance basis `ε`.
///
/// Also used for tangent vectors at arbitrary points via left trivialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraVector(Vec<C64>);

impl AlgebraVector {
    pub fn new(coords: Vec<C64>) -> Self {
        Self(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![ZERO; dim])
    }

    pub fn basis(dim: usize, a: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[a] = ONE;
        v
    }

    pub fn from_real_parts(parts: &[f64]) -> Self {
        Self(
            parts
                .chunks(2)
                .map(|p| C64::new(p[0], *p.get(1).unwrap_or(&0.0)))
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[C64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<C64> {
        self.0
    }

    /// Length in the left-invariant metric (ε is orthonormal).
    pub fn norm(&self) -> f64 {
        vec_norm(&self.0)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self(self.0.iter().map(|z| z * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Interleaved `(re, im)` pairs, the real coordinates used by grid scans.
    pub fn real_parts(&self) -> Vec<f64> {
        self.0.iter().flat_map(|z| [z.re, z.im]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementRepr {
    Coords(Vec<C64>),
    Matrix(ComplexMatrix),
}

/// A point of a concrete group instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    kind: GroupKind,
    size: usize,
    repr: ElementRepr,
}

impl GroupElement {
    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn repr(&self) -> &ElementRepr {
        &self.repr
    }

    pub fn coords(&self) -> Option<&[C64]> {
        match &self.repr {
            ElementRepr::Coords(c) => Some(c),
            ElementRepr::Matrix(_) => None,
        }
    }

    pub fn matrix(&self) -> Option<&ComplexMatrix> {
        match &self.repr {
            ElementRepr::Matrix(m) => Some(m),
            ElementRepr::Coords(_) => None,
        }
    }

    /// Flat ambient coordinates: the vector itself, or matrix entries row-major.
    pub fn ambient(&self) -> Vec<C64> {
        match &self.repr {
            ElementRepr::Coords(c) => c.clone(),
            ElementRepr::Matrix(m) => m.entries().to_vec(),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.kind.name())?;
        for (i, z) in self.ambient().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}{:+}i", z.re, z.im)?;
        }
        write!(f, ")")
    }
}

/// A complex Lie group together with its fixed orthonormal algebra basis and bracket table.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupInstance {
    kind: GroupKind,
    size: usize,
    dim: usize,
    basis: Vec<ComplexMatrix>,
    // brackets[a * dim + b] = coordinates of [ε_a, ε_b]
    brackets: Vec<Vec<C64>>,
    abelian: bool,
    bracket_upper: f64,
}

impl GroupInstance {
    pub fn additive(m: usize) -> Self {
        Self::coordinate_group(GroupKind::Additive, m)
    }

    pub fn torus(m: usize) -> Self {
        Self::coordinate_group(GroupKind::Torus, m)
    }

    pub fn general_linear(n: usize) -> Self {
        assert!(n >= 1, "GL(n) needs n ≥ 1");
        let mut basis = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let mut e = ComplexMatrix::zeros(n, n);
                e[(a, b)] = ONE;
                basis.push(e);
            }
        }
        Self::matrix_group(GroupKind::GeneralLinear, n, basis)
    }

    pub fn sl2() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = ComplexMatrix::from_diag(&[C64::new(s, 0.0), C64::new(-s, 0.0)]);
        let mut e = ComplexMatrix::zeros(2, 2);
        e[(0, 1)] = ONE;
        let mut f = ComplexMatrix::zeros(2, 2);
        f[(1, 0)] = ONE;
        Self::matrix_group(GroupKind::SpecialLinear2, 2, vec![h, e, f])
    }

    /// Looks up a built-in instance. `size` is the complex dimension for `additive`/`torus`
    /// and the matrix size for `gl`/`sl2`.
    pub fn by_name(name: &str, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidInput("group size must be positive".into()));
        }
        match name {
            "additive" => Ok(Self::additive(size)),
            "torus" => Ok(Self::torus(size)),
            "gl" => Ok(Self::general_linear(size)),
            "sl2" if size == 2 => Ok(Self::sl2()),
            "sl2" => Err(Error::InvalidInput(format!(
                "sl2 has matrix size 2, got {size}"
            ))),
            other => Err(Error::InvalidInput(format!(
                "unknown group '{other}' (known: {})",
                Self::NAMES.join(", ")
            ))),
        }
    }

    pub const NAMES: [&'static str; 4] = ["additive", "torus", "gl", "sl2"];

    fn coordinate_group(kind: GroupKind, m: usize) -> Self {
        assert!(m >= 1, "group dimension must be positive");
        let inst = Self {
            kind,
            size: m,
            dim: m,
            basis: Vec::new(),
            brackets: vec![vec![ZERO; m]; m * m],
            abelian: true,
            bracket_upper: 0.0,
        };
        inst.validate().expect("abelian bracket table");
        inst
    }

    fn matrix_group(kind: GroupKind, n: usize, basis: Vec<ComplexMatrix>) -> Self {
        let dim = basis.len();
        let mut inst = Self {
            kind,
            size: n,
            dim,
            basis,
            brackets: Vec::new(),
            abelian: false,
            bracket_upper: 0.0,
        };
        let mut table = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                let comm = &(&inst.basis[a] * &inst.basis[b]) - &(&inst.basis[b] * &inst.basis[a]);
                table.push(inst.vee(&comm).into_coords());
            }
        }
        inst.abelian = table.iter().all(|c| c.iter().all(|z| *z == ZERO));
        inst.bracket_upper = table
            .iter()
            .map(|c| vec_norm(c).powi(2))
            .sum::<f64>()
            .sqrt();
        inst.brackets = table;
        inst.validate().expect("built-in bracket table");
        inst
    }

    /// Antisymmetry and Jacobi residuals of the bracket table, plus orthonormality of the
    /// matrix basis.
    pub fn validate(&self) -> Result<()> {
        let (anti, jacobi) = self.bracket_table_residuals();
        if anti > TABLE_TOL || jacobi > TABLE_TOL {
            return Err(Error::Internal(format!(
                "bracket table of {} fails: antisymmetry {anti:e}, Jacobi {jacobi:e}",
                self.name()
            )));
        }
        for (a, ea) in self.basis.iter().enumerate() {
            for (b, eb) in self.basis.iter().enumerate() {
                let want = if a == b { ONE } else { ZERO };
                if (ea.hs_inner(eb) - want).norm() > TABLE_TOL {
                    return Err(Error::Internal("algebra basis not orthonormal".into()));
                }
            }
        }
        Ok(())
    }

    pub fn bracket_table_residuals(&self) -> (f64, f64) {
        let d = self.dim;
        let mut anti: f64 = 0.0;
        let mut jacobi: f64 = 0.0;
        for a in 0..d {
            for b in 0..d {
                let ab = &self.brackets[a * d + b];
                let ba = &self.brackets[b * d + a];
                anti = anti.max(
                    ab.iter()
                        .zip(ba)
                        .map(|(x, y)| (x + y).norm())
                        .fold(0.0, f64::max),
                );
                for c in 0..d {
                    let ea = AlgebraVector::basis(d, a);
                    let eb = AlgebraVector::basis(d, b);
                    let ec = AlgebraVector::basis(d, c);
                    let t1 = self.bracket(&self.bracket(&ea, &eb), &ec);
                    let t2 = self.bracket(&self.bracket(&eb, &ec), &ea);
                    let t3 = self.bracket(&self.bracket(&ec, &ea), &eb);
                    jacobi = jacobi.max(t1.add(&t2).add(&t3).norm());
                }
            }
        }
        (anti, jacobi)
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Complex dimension for coordinate groups, matrix size for matrix groups.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Complex dimension of the group (and of its Lie algebra).
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// `sqrt(Σ_ab ‖[ε_a, ε_b]‖²)`, a certified upper bound for the structure constant.
    pub fn bracket_upper_bound(&self) -> f64 {
        self.bracket_upper
    }

    pub fn identity(&self) -> GroupElement {
        let repr = match self.kind {
            GroupKind::Additive => ElementRepr::Coords(vec![ZERO; self.size]),
            GroupKind::Torus => ElementRepr::Coords(vec![ONE; self.size]),
            _ => ElementRepr::Matrix(ComplexMatrix::identity(self.size)),
        };
        GroupElement {
            kind: self.kind,
            size: self.size,
            repr,
        }
    }

    pub fn element_from_coords(&self, coords: Vec<C64>) -> Result<GroupElement> {
        if self.kind.is_matrix() {
            let n = self.size;
            if coords.len() != n * n {
                return Err(Error::InvalidInput(format!(
                    "{} expects {} matrix entries, got {}",
                    self.name(),
                    n * n,
                    coords.len()
                )));
            }
            return self.element_from_matrix(ComplexMatrix::new(n, n, coords)?);
        }
        if coords.len() != self.size {
            return Err(Error::InvalidInput(format!(
                "{} expects {} coordinates, got {}",
                self.name(),
                self.size,
                coords.len()
            )));
        }
        if coords.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        if self.kind == GroupKind::Torus && coords.contains(&ZERO) {
            return Err(Error::DegenerateElement("torus coordinate is zero".into()));
        }
        Ok(GroupElement {
            kind: self.kind,
            size: self.size,
            repr: ElementRepr::Coords(coords),
        })
    }

    pub fn element_from_matrix(&self, m: ComplexMatrix) -> Result<GroupElement> {
        if !self.kind.is_matrix() {
            return Err(Error::InvalidInput(format!(
                "{} elements are not matrices",
                self.name()
            )));
        }
        if m.rows() != self.size || !m.is_square() {
            return Err(Error::InvalidInput(format!(
                "expected a {}x{} matrix",
                self.size, self.size
            )));
        }
        let det = m.det()?;
        match self.kind {
            GroupKind::GeneralLinear if det.norm() <= GL_DET_FLOOR => {
                Err(Error::DegenerateElement(format!(
                    "|det| = {:e} is below {GL_DET_FLOOR:e}",
                    det.norm()
                )))
            }
            GroupKind::SpecialLinear2 if (det - ONE).norm() > SL_DET_TOL => {
                Err(Error::DegenerateElement(format!("det = {det} is not 1")))
            }
            _ => Ok(GroupElement {
                kind: self.kind,
                size: self.size,
                repr: ElementRepr::Matrix(m),
            }),
        }
    }

    pub fn check_member(&self, g: &GroupElement) -> Result<()> {
        if g.kind != self.kind || g.size != self.size {
            return Err(Error::InvalidInput(format!(
                "element of {}({}) used with {}({})",
                g.kind.name(),
                g.size,
                self.name(),
                self.size
            )));
        }
        Ok(())
    }

    pub fn check_algebra(&self, x: &AlgebraVector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::InvalidInput(format!(
                "algebra vector of length {} for a group of dimension {}",
                x.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check_member(g)?;
        self.check_member(h)?;
        let repr = match (&g.repr, &h.repr) {
            (ElementRepr::Coords(a), ElementRepr::Coords(b)) => match self.kind {
                GroupKind::Additive => {
                    ElementRepr::Coords(a.iter().zip(b).map(|(x, y)| x + y).collect())
                }
                _ => {
                    let prod: Vec<C64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
                    if prod.iter().any(|z| *z == ZERO || !z.is_finite()) {
                        return Err(Error::DegenerateElement("torus product left ℂ*".into()));
                    }
                    ElementRepr::Coords(prod)
                }
            },
            (ElementRepr::Matrix(a), ElementRepr::Matrix(b)) => {
                let prod = a * b;
                return self.finish_matrix(prod);
            }
            _ => return Err(Error::Internal("mixed element representations".into())),
        };
        Ok(GroupElement {
            kind: self.kind,
            size: self.size,
            repr,
        })
    }

    /// Reconditions (SL(2): divide by √det) and re-validates a freshly computed matrix.
    pub(crate) fn finish_matrix(&self, mut m: ComplexMatrix) -> Result<GroupElement> {
        if !m.is_finite() {
            return Err(Error::DegenerateElement("non-finite matrix entry".into()));
        }
        if self.kind == GroupKind::SpecialLinear2 {
            let det = m.det()?;
            if det.norm() <= GL_DET_FLOOR {
                return Err(Error::DegenerateElement("SL(2) product lost rank".into()));
            }
            m = m.scale(ONE / det.sqrt());
        }
        self.element_from_matrix(m)
    }

    pub fn inv(&self, g: &GroupElement) -> Result<GroupElement> {
        self.check_member(g)?;
        let repr = match &g.repr {
            ElementRepr::Coords(c) => match self.kind {
                GroupKind::Additive => ElementRepr::Coords(c.iter().map(|z| -z).collect()),
                _ => {
                    if c.contains(&ZERO) {
                        return Err(Error::DegenerateElement("torus coordinate is zero".into()));
                    }
                    ElementRepr::Coords(c.iter().map(|z| z.inv()).collect())
                }
            },
            ElementRepr::Matrix(m) => {
                let det = m.det()?;
                if det.norm() <= GL_DET_FLOOR {
                    return Err(Error::DegenerateElement(format!(
                        "|det| = {:e}",
                        det.norm()
                    )));
                }
                let inv = if self.kind == GroupKind::SpecialLinear2 {
                    let adj = ComplexMatrix::from_rows(&[
                        &[m[(1, 1)], -m[(0, 1)]],
                        &[-m[(1, 0)], m[(0, 0)]],
                    ])?;
                    adj.scale(ONE / det)
                } else {
                    m.inverse()?
                };
                ElementRepr::Matrix(inv)
            }
        };
        Ok(GroupElement {
            kind: self.kind,
            size: self.size,
            repr,
        })
    }

    /// `Σ x_a ε_a` as a matrix (matrix groups only).
    pub fn hat(&self, x: &AlgebraVector) -> Result<ComplexMatrix> {
        self.check_algebra(x)?;
        if !self.kind.is_matrix() {
            return Err(Error::InvalidInput(format!(
                "{} has no matrix form",
                self.name()
            )));
        }
        let n = self.size;
        let mut out = ComplexMatrix::zeros(n, n);
        for (e, &c) in self.basis.iter().zip(x.coords()) {
            if c != ZERO {
                out = &out + &e.scale(c);
            }
        }
        Ok(out)
    }

    /// Orthogonal projection of a matrix onto the algebra basis.
    pub fn vee(&self, m: &ComplexMatrix) -> AlgebraVector {
        AlgebraVector(self.basis.iter().map(|e| e.hs_inner(m)).collect())
    }

    /// `[X, Y]` through the bracket table.
    pub fn bracket(&self, x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
        let d = self.dim;
        let mut out = vec![ZERO; d];
        if self.abelian {
            return AlgebraVector(out);
        }
        for (a, &xa) in x.coords().iter().enumerate() {
            if xa == ZERO {
                continue;
            }
            for (b, &yb) in y.coords().iter().enumerate() {
                let w = xa * yb;
                if w == ZERO {
                    continue;
                }
                for (o, c) in out.iter_mut().zip(&self.brackets[a * d + b]) {
                    *o += w * c;
                }
            }
        }
        AlgebraVector(out)
    }

    /// Matrix of `ad_X = [X, ·]` in the basis `ε`.
    pub fn bracket_ad(&self, x: &AlgebraVector) -> Result<ComplexMatrix> {
        self.check_algebra(x)?;
        let d = self.dim;
        let cols: Vec<Vec<C64>> = (0..d)
            .map(|b| self.bracket(x, &AlgebraVector::basis(d, b)).into_coords())
            .collect();
        ComplexMatrix::from_columns(&cols)
    }

    /// Left-trivialized tangent vector at `x` from an ambient tangent vector `v ∈ T_x G`.
    pub fn trivialize(&self, x: &GroupElement, ambient_tangent: &[C64]) -> Result<AlgebraVector> {
        self.check_member(x)?;
        match &x.repr {
            ElementRepr::Coords(c) => {
                if ambient_tangent.len() != c.len() {
                    return Err(Error::InvalidInput("tangent length mismatch".into()));
                }
                Ok(AlgebraVector(match self.kind {
                    GroupKind::Additive => ambient_tangent.to_vec(),
                    _ => ambient_tangent.iter().zip(c).map(|(v, w)| v / w).collect(),
                }))
            }
            ElementRepr::Matrix(_) => {
                let n = self.size;
                let v = ComplexMatrix::new(n, n, ambient_tangent.to_vec())?;
                let xinv = self.inv(x)?;
                Ok(self.vee(&(xinv.matrix().expect("matrix element") * &v)))
            }
        }
    }

    /// Ambient form of `(dL_g)_e v`: the tangent vector `g·v̂` at `g` in flat coordinates.
    pub fn ambient_tangent(&self, g: &GroupElement, v: &AlgebraVector) -> Result<Vec<C64>> {
        self.check_member(g)?;
        self.check_algebra(v)?;
        match &g.repr {
            ElementRepr::Coords(c) => Ok(match self.kind {
                GroupKind::Additive => v.coords().to_vec(),
                _ => v.coords().iter().zip(c).map(|(x, w)| x * w).collect(),
            }),
            ElementRepr::Matrix(m) => Ok((m * &self.hat(v)?).into_entries()),
        }
    }

    /// First-order proxy for the left-invariant distance: the metric norm of the
    /// left-trivialized difference `a⁻¹b − e`.
    pub fn distance_proxy(&self, a: &GroupElement, b: &GroupElement) -> Result<f64> {
        self.check_member(a)?;
        self.check_member(b)?;
        match (&a.repr, &b.repr) {
            (ElementRepr::Coords(x), ElementRepr::Coords(y)) => Ok(match self.kind {
                GroupKind::Additive => x
                    .iter()
                    .zip(y)
                    .map(|(p, q)| (q - p).norm_sqr())
                    .sum::<f64>()
                    .sqrt(),
                _ => x
                    .iter()
                    .zip(y)
                    .map(|(p, q)| (q / p - ONE).norm_sqr())
                    .sum::<f64>()
                    .sqrt(),
            }),
            (ElementRepr::Matrix(_), ElementRepr::Matrix(y)) => {
                let ainv = self.inv(a)?;
                let diff = &(ainv.matrix().expect("matrix element") * y)
                    - &ComplexMatrix::identity(self.size);
                Ok(diff.frobenius_norm())
            }
            _ => Err(Error::Internal("mixed element representations".into())),
        }
    }

    /// Uniformly distributed algebra vector in the metric ball of radius `max_norm`.
    pub fn random_algebra<R: Rng + ?Sized>(&self, rng: &mut R, max_norm: f64) -> AlgebraVector {
        let dir = random_unit(rng, self.dim);
        let r = max_norm * rng.random::<f64>().powf(1.0 / (2 * self.dim) as f64);
        dir.scale_real(r)
    }
}

/// Uniform point on the unit sphere of `ℂ^dim`.
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> AlgebraVector {
    loop {
        let v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let n = vec_norm(&v);
        if n > 1e-300 {
            return AlgebraVector(v.into_iter().map(|z| z / n).collect());
        }
    }
}

/// Transports `v ∈ 𝔤` to `(dL_g)_e v ∈ T_g G`.
///
/// In left-trivialized coordinates this is the identity on coordinates; the value changes
/// only in which tangent space it is read.
pub fn left_translate_frame(_g: &GroupElement, v: &AlgebraVector) -> AlgebraVector {
    v.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn additive_product() {
        let g = GroupInstance::additive(2);
        let a = g.element_from_coords(vec![ONE, c(0.0, 1.0)]).unwrap();
        let b = g.element_from_coords(vec![c(2.0, 0.0), ZERO]).unwrap();
        assert_eq!(
            g.mul(&a, &b).unwrap().coords().unwrap(),
            &[c(3.0, 0.0), c(0.0, 1.0)]
        );
    }

    #[test]
    fn torus_product_and_inverse() {
        let t = GroupInstance::torus(1);
        let a = t.element_from_coords(vec![c(2.0, 0.0)]).unwrap();
        let b = t.element_from_coords(vec![c(0.0, 3.0)]).unwrap();
        assert_eq!(t.mul(&a, &b).unwrap().coords().unwrap(), &[c(0.0, 6.0)]);
        let w = t.element_from_coords(vec![c(0.0, 2.0)]).unwrap();
        let inv = t.inv(&w).unwrap();
        assert!((inv.coords().unwrap()[0] - c(0.0, -0.5)).norm() < 1e-16);
    }

    #[test]
    fn torus_rejects_zero() {
        let t = GroupInstance::torus(2);
        assert!(matches!(
            t.element_from_coords(vec![ONE, ZERO]),
            Err(Error::DegenerateElement(_))
        ));
    }

    #[test]
    fn additive_inverse() {
        let g = GroupInstance::additive(2);
        let a = g.element_from_coords(vec![ONE, c(0.0, 1.0)]).unwrap();
        assert_eq!(g.inv(&a).unwrap().coords().unwrap(), &[-ONE, c(0.0, -1.0)]);
    }

    #[test]
    fn gl_inverse_product() {
        let g = GroupInstance::general_linear(2);
        let m =
            ComplexMatrix::from_rows(&[&[c(1.0, 1.0), c(2.0, 0.0)], &[c(0.0, -1.0), c(3.0, 0.5)]])
                .unwrap();
        let a = g.element_from_matrix(m).unwrap();
        let prod = g.mul(&a, &g.inv(&a).unwrap()).unwrap();
        assert!(g.distance_proxy(&prod, &g.identity()).unwrap() < 1e-12);
    }

    #[test]
    fn gl_rejects_singular() {
        let g = GroupInstance::general_linear(2);
        let m = ComplexMatrix::from_rows(&[&[ONE, c(2.0, 0.0)], &[c(0.5, 0.0), ONE]]).unwrap();
        assert!(matches!(
            g.element_from_matrix(m),
            Err(Error::DegenerateElement(_))
        ));
    }

    #[test]
    fn sl2_inverse_is_adjugate() {
        let s = GroupInstance::sl2();
        let (a, b, cc) = (c(2.0, 1.0), c(0.5, -0.5), c(1.0, 0.0));
        let d = (ONE + b * cc) / a;
        let m = ComplexMatrix::from_rows(&[&[a, b], &[cc, d]]).unwrap();
        let g = s.element_from_matrix(m).unwrap();
        let inv = s.inv(&g).unwrap();
        let want = ComplexMatrix::from_rows(&[&[d, -b], &[-cc, a]]).unwrap();
        assert!((inv.matrix().unwrap() - &want).max_abs() < 1e-14);
    }

    #[test]
    fn instance_mismatch_is_rejected() {
        let a = GroupInstance::additive(1);
        let t = GroupInstance::torus(1);
        assert!(matches!(
            a.mul(&a.identity(), &t.identity()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn abelian_ad_vanishes() {
        for inst in [GroupInstance::additive(3), GroupInstance::torus(2)] {
            let x = AlgebraVector::new(vec![c(1.0, 2.0); inst.dim()]);
            assert_eq!(inst.bracket_ad(&x).unwrap().max_abs(), 0.0);
            assert!(inst.is_abelian());
        }
    }

    #[test]
    fn ad_x_kills_x() {
        let s = GroupInstance::sl2();
        let x = AlgebraVector::new(vec![c(0.3, 0.1), c(-1.0, 0.5), c(0.2, 0.0)]);
        let ad = s.bracket_ad(&x).unwrap();
        assert!(vec_norm(&ad.mat_vec(x.coords())) < 1e-15);
    }

    #[test]
    fn tables_are_valid() {
        for inst in [
            GroupInstance::sl2(),
            GroupInstance::general_linear(2),
            GroupInstance::general_linear(3),
        ] {
            let (anti, jac) = inst.bracket_table_residuals();
            assert!(anti <= 1e-12 && jac <= 1e-12);
            assert!(!inst.is_abelian());
        }
    }

    #[test]
    fn left_translation_is_identity_on_coords() {
        let s = GroupInstance::sl2();
        let v = AlgebraVector::new(vec![c(1.0, 0.0), c(0.0, 2.0), c(-0.5, 0.5)]);
        let g = s.identity();
        let w = left_translate_frame(&g, &v);
        assert_eq!(w, v);
        assert_eq!(w.norm(), v.norm());
        let back = left_translate_frame(&s.inv(&g).unwrap(), &w);
        assert_eq!(back, v);
    }

    #[test]
    fn by_name_lists_registry_on_error() {
        let err = GroupInstance::by_name("so3", 3).unwrap_err();
        assert!(err.to_string().contains("additive, torus, gl, sl2"));
        assert!(GroupInstance::by_name("sl2", 3).is_err());
        assert_eq!(GroupInstance::by_name("gl", 2).unwrap().dim(), 4);
    }
}
