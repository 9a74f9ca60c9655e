//! Dense linear operators between finite-dimensional inner-product spaces.
//!
//! Every [`Operator`] stores complex entries and carries a [`Field`] tag. A
//! real operator is a complex matrix whose imaginary parts are exactly zero;
//! arithmetic between real operators keeps them exactly zero, and the
//! factorizations below clear the rounding residue they can leave behind.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Scalar = Complex64;
pub type Vector = DVector<Complex64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinopsError {
    #[error("operator is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("operator is not Hermitian: |A - A*| = {violation:e} exceeds {allowed:e}")]
    NotHermitian { violation: f64, allowed: f64 },
    #[error("operator is not positive definite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("all spanning vectors are numerically zero")]
    ZeroSubspace,
    #[error("basis columns are not orthonormal: |B*B - I| = {residual:e}")]
    NotOrthonormal { residual: f64 },
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },
    #[error("leading coefficient of the quadratic is zero")]
    ZeroLeadingCoefficient,
    #[error("operator has non-finite or malformed entries: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, LinopsError>;

/// Scalar field of a space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// The smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Real && other == Field::Real {
            Field::Real
        } else {
            Field::Complex
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "real" => Ok(Field::Real),
            "complex" => Ok(Field::Complex),
            other => Err(format!("unknown field `{other}` (expected real|complex)")),
        }
    }
}

/// Numerical tolerances for the operator core.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinTol {
    /// Relative residual tolerance.
    pub rtol: f64,
    /// Relative Hermitian-violation tolerance.
    pub htol: f64,
    /// Positive-definiteness margin.
    pub pdtol: f64,
    /// Relative singular-value threshold for numerical rank.
    pub rktol: f64,
}

impl Default for LinTol {
    fn default() -> Self {
        LinTol {
            rtol: 1e-9,
            htol: 1e-10,
            pdtol: 1e-10,
            rktol: 1e-10,
        }
    }
}

/// Inner product, linear in the first argument.
pub fn inner(x: &Vector, y: &Vector) -> Scalar {
    y.dotc(x)
}

pub fn norm_sq(x: &Vector) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Dense linear map from a `cols`-dimensional space to a `rows`-dimensional one.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    field: Field,
    mat: DMatrix<Scalar>,
}

impl Operator {
    pub fn new(field: Field, mat: DMatrix<Scalar>) -> Result<Self> {
        if mat.nrows() == 0 || mat.ncols() == 0 {
            return Err(LinopsError::Malformed("empty operator".into()));
        }
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(LinopsError::Malformed("non-finite entry".into()));
        }
        if field == Field::Real && mat.iter().any(|z| z.im != 0.0) {
            return Err(LinopsError::Malformed(
                "real operator with nonzero imaginary part".into(),
            ));
        }
        Ok(Operator { field, mat })
    }

    /// Wraps a matrix produced by arithmetic on well-formed operators.
    pub(crate) fn from_parts(field: Field, mut mat: DMatrix<Scalar>) -> Self {
        if field == Field::Real {
            mat.iter_mut().for_each(|z| z.im = 0.0);
        }
        Operator { field, mat }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinopsError::Malformed("ragged rows".into()));
        }
        Operator::new(
            Field::Real,
            DMatrix::from_fn(r, c, |i, j| Scalar::new(rows[i][j], 0.0)),
        )
    }

    pub fn from_complex_rows(rows: &[&[Scalar]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinopsError::Malformed("ragged rows".into()));
        }
        Operator::new(Field::Complex, DMatrix::from_fn(r, c, |i, j| rows[i][j]))
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Operator::from_parts(field, DMatrix::identity(n, n))
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Operator::from_parts(field, DMatrix::zeros(rows, cols))
    }

    pub fn diag(field: Field, values: &[f64]) -> Self {
        let n = values.len();
        Operator::from_parts(
            field,
            DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Scalar::new(values[i], 0.0)
                } else {
                    Scalar::new(0.0, 0.0)
                }
            }),
        )
    }

    /// Operator whose columns are the given vectors.
    pub fn from_columns(field: Field, columns: &[Vector]) -> Result<Self> {
        let n = columns.first().map_or(0, |c| c.len());
        if columns.iter().any(|c| c.len() != n) {
            return Err(LinopsError::ShapeMismatch {
                expected: format!("columns of length {n}"),
                found: "ragged columns".into(),
            });
        }
        let mat = DMatrix::from_fn(n, columns.len(), |i, j| columns[j][i]);
        Operator::new(field, mat)
    }

    /// Stacks operators with a common domain on top of each other.
    pub fn vstack(blocks: &[&Operator]) -> Result<Self> {
        let first = blocks
            .first()
            .ok_or_else(|| LinopsError::Malformed("nothing to stack".into()))?;
        let cols = first.cols();
        if let Some(bad) = blocks.iter().find(|b| b.cols() != cols) {
            return Err(LinopsError::ShapeMismatch {
                expected: format!("{cols} columns"),
                found: format!("{} columns", bad.cols()),
            });
        }
        let rows: usize = blocks.iter().map(|b| b.rows()).sum();
        let field = blocks.iter().fold(Field::Real, |f, b| f.join(b.field));
        let mut mat = DMatrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            mat.view_mut((offset, 0), (b.rows(), cols)).copy_from(&b.mat);
            offset += b.rows();
        }
        Ok(Operator::from_parts(field, mat))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.mat.nrows()
    }

    pub fn cols(&self) -> usize {
        self.mat.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn matrix(&self) -> &DMatrix<Scalar> {
        &self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.mat[(i, j)]
    }

    pub fn column(&self, j: usize) -> Vector {
        self.mat.column(j).into_owned()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols()).map(|j| self.column(j)).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Operator {
        Operator {
            field: self.field,
            mat: self.mat.adjoint(),
        }
    }

    pub fn scale(&self, s: f64) -> Operator {
        Operator::from_parts(self.field, self.mat.map(|z| z * s))
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        if x.len() != self.cols() {
            return Err(LinopsError::ShapeMismatch {
                expected: format!("vector of length {}", self.cols()),
                found: format!("length {}", x.len()),
            });
        }
        Ok(&self.mat * x)
    }

    /// (A + A*)/2.
    pub fn hermitian_part(&self) -> Operator {
        Operator::from_parts(self.field, (&self.mat + self.mat.adjoint()) * Scalar::new(0.5, 0.0))
    }

    pub fn fro_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Spectral (operator 2-) norm.
    pub fn norm(&self) -> f64 {
        let svd = SVD::new(self.mat.clone(), false, false);
        svd.singular_values.iter().copied().fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Scalar {
        self.mat.trace()
    }

    pub fn try_add(&self, other: &Operator) -> Result<Operator> {
        same_shape(self, other)?;
        Ok(Operator::from_parts(
            self.field.join(other.field),
            &self.mat + &other.mat,
        ))
    }

    pub fn try_sub(&self, other: &Operator) -> Result<Operator> {
        same_shape(self, other)?;
        Ok(Operator::from_parts(
            self.field.join(other.field),
            &self.mat - &other.mat,
        ))
    }

    pub fn try_mul(&self, other: &Operator) -> Result<Operator> {
        if self.cols() != other.rows() {
            return Err(LinopsError::ShapeMismatch {
                expected: format!("left operand with {} columns", other.rows()),
                found: format!("{} columns", self.cols()),
            });
        }
        Ok(Operator::from_parts(
            self.field.join(other.field),
            &self.mat * &other.mat,
        ))
    }
}

fn same_shape(a: &Operator, b: &Operator) -> Result<()> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(LinopsError::ShapeMismatch {
            expected: format!("{}x{}", a.rows(), a.cols()),
            found: format!("{}x{}", b.rows(), b.cols()),
        });
    }
    Ok(())
}

// The panicking operator impls are for internal use where shapes are known
// to agree by construction.
impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.try_add(rhs).expect("operator shapes agree")
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self.try_sub(rhs).expect("operator shapes agree")
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.try_mul(rhs).expect("operator shapes agree")
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        self.scale(-1.0)
    }
}

/// Hermitian eigendecomposition A = U diag(λ) U*, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Operator,
}

impl SpectralDecomposition {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// U diag(g(λ)) U*.
    pub fn map(&self, g: impl Fn(f64) -> f64) -> Operator {
        let u = self.eigenvectors.matrix();
        let n = u.nrows();
        let scaled = DMatrix::from_fn(n, n, |i, j| u[(i, j)] * g(self.eigenvalues[j]));
        Operator::from_parts(self.eigenvectors.field, scaled * u.adjoint())
    }

    pub fn reconstruct(&self) -> Operator {
        self.map(|x| x)
    }
}

fn hermitian_violation(a: &Operator) -> f64 {
    (&a.mat - a.mat.adjoint()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn ensure_hermitian(a: &Operator, tol: &LinTol) -> Result<()> {
    if !a.is_square() {
        return Err(LinopsError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let violation = hermitian_violation(a);
    let allowed = tol.htol * a.fro_norm();
    if violation > allowed {
        return Err(LinopsError::NotHermitian { violation, allowed });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian operator; the input is symmetrized first.
pub fn hermitian_eig(a: &Operator, tol: &LinTol) -> Result<SpectralDecomposition> {
    ensure_hermitian(a, tol)?;
    let sym = a.hermitian_part();
    let eig = SymmetricEigen::new(sym.mat);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = a.rows();
    let u = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors: Operator::from_parts(a.field, u),
    })
}

/// Exponents supported by [`psd_power`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Power {
    Inverse,
    Sqrt,
    InvSqrt,
}

impl Power {
    pub fn exponent(self) -> f64 {
        match self {
            Power::Inverse => -1.0,
            Power::Sqrt => 0.5,
            Power::InvSqrt => -0.5,
        }
    }
}

/// U diag(λ^p) U* for Hermitian positive definite A.
pub fn psd_power(a: &Operator, p: Power, tol: &LinTol) -> Result<Operator> {
    let eig = hermitian_eig(a, tol)?;
    power_of(&eig, p, tol)
}

pub(crate) fn power_of(eig: &SpectralDecomposition, p: Power, tol: &LinTol) -> Result<Operator> {
    if eig.min() <= tol.pdtol {
        return Err(LinopsError::NotPositiveDefinite {
            min_eigenvalue: eig.min(),
        });
    }
    let op = match p {
        Power::Inverse => eig.map(|x| 1.0 / x),
        Power::Sqrt => eig.map(f64::sqrt),
        Power::InvSqrt => eig.map(|x| 1.0 / x.sqrt()),
    };
    Ok(op.hermitian_part())
}

/// Orthonormal basis of the span of `vectors`, compressed to numerical rank.
pub fn orthonormal_basis(field: Field, vectors: &[Vector], tol: &LinTol) -> Result<Operator> {
    if vectors.is_empty() {
        return Err(LinopsError::ZeroSubspace);
    }
    let spanning = Operator::from_columns(field, vectors)?;
    range_basis(&spanning, tol)
}

/// Orthonormal basis of the column space of `a`.
pub fn range_basis(a: &Operator, tol: &LinTol) -> Result<Operator> {
    let svd = SVD::new(a.mat.clone(), true, false);
    let sigma = &svd.singular_values;
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    if smax.is_nan() || smax <= tol.rktol {
        return Err(LinopsError::ZeroSubspace);
    }
    let u = svd.u.expect("left singular vectors requested");
    let mut keep: Vec<usize> = (0..sigma.len())
        .filter(|&i| sigma[i] > tol.rktol * smax)
        .collect();
    keep.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]));
    let n = a.rows();
    let basis = DMatrix::from_fn(n, keep.len(), |r, c| u[(r, keep[c])]);
    Ok(Operator::from_parts(a.field, basis))
}

/// |B*B - I| (spectral norm).
pub fn orthonormality_residual(basis: &Operator) -> f64 {
    let gram = &basis.adjoint() * basis;
    let gram = &gram - &Operator::identity(basis.field, basis.cols());
    gram.norm()
}

/// Orthogonal projection B B* onto the span of orthonormal columns B.
pub fn projection(basis: &Operator, tol: &LinTol) -> Result<Operator> {
    let residual = orthonormality_residual(basis);
    if residual > tol.rtol {
        return Err(LinopsError::NotOrthonormal { residual });
    }
    Ok(projector(basis))
}

pub(crate) fn projector(basis: &Operator) -> Operator {
    (basis * &basis.adjoint()).hermitian_part()
}

/// Smallest eigenvalues of T - L and U - T.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoewnerMargin {
    pub lower_margin: f64,
    pub upper_margin: f64,
    pub tol: f64,
}

impl LoewnerMargin {
    /// L ⪯ T ⪯ U up to the tolerance.
    pub fn holds(&self) -> bool {
        self.lower_margin >= -self.tol && self.upper_margin >= -self.tol
    }

    pub fn min_margin(&self) -> f64 {
        self.lower_margin.min(self.upper_margin)
    }
}

pub fn loewner_check(
    t: &Operator,
    l: &Operator,
    u: &Operator,
    tol: f64,
    lin: &LinTol,
) -> Result<LoewnerMargin> {
    for other in [l, u] {
        if !t.is_square() || t.rows() != other.rows() || t.cols() != other.cols() {
            return Err(LinopsError::ShapeMismatch {
                expected: format!("{}x{}", t.rows(), t.rows()),
                found: format!("{}x{}", other.rows(), other.cols()),
            });
        }
    }
    // Hermitian tolerance is taken relative to the operands, not the
    // (possibly tiny) differences.
    let scale = t.fro_norm().max(l.fro_norm()).max(u.fro_norm());
    let lower = t - l;
    let upper = u - t;
    for d in [&lower, &upper] {
        let violation = hermitian_violation(d);
        let allowed = lin.htol * scale;
        if violation > allowed {
            return Err(LinopsError::NotHermitian { violation, allowed });
        }
    }
    let loose = LinTol {
        htol: f64::INFINITY,
        ..*lin
    };
    Ok(LoewnerMargin {
        lower_margin: hermitian_eig(&lower, &loose)?.min(),
        upper_margin: hermitian_eig(&upper, &loose)?.min(),
        tol,
    })
}

/// Extremal value (4ac - b²)/(4a) of ⟨(a u² + b u + c) f, f⟩ over unit f.
///
/// A lower bound when `a > 0`, an upper bound when `a < 0`.
pub fn quad_bound(a: f64, b: f64, c: f64) -> Result<f64> {
    if a == 0.0 {
        return Err(LinopsError::ZeroLeadingCoefficient);
    }
    Ok((4.0 * a * c - b * b) / (4.0 * a))
}

/// |π_V T* − π_V T* π_{TV}| for a square T and orthonormal V basis.
pub fn lemma_l0_residual(v_basis: &Operator, t: &Operator, tol: &LinTol) -> Result<f64> {
    if !t.is_square() {
        return Err(LinopsError::NotSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    if v_basis.rows() != t.rows() {
        return Err(LinopsError::ShapeMismatch {
            expected: format!("basis with {} rows", t.rows()),
            found: format!("{} rows", v_basis.rows()),
        });
    }
    let field = t.field().join(v_basis.field());
    let p_v = projection(v_basis, tol)?;
    let image = t * v_basis;
    let p_tv = match range_basis(&image, tol) {
        Ok(b) => projector(&b),
        // T annihilates V.
        Err(LinopsError::ZeroSubspace) => Operator::zeros(field, t.rows(), t.rows()),
        Err(e) => return Err(e),
    };
    let lhs = &p_v * &t.adjoint();
    let rhs = &lhs * &p_tv;
    Ok((&lhs - &rhs).norm())
}
