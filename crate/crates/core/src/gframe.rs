//! g-frames {Λ_j : H → H_j}: analysis/synthesis, frame operator, canonical
//! dual and the partial reconstruction operators S_I.

use thiserror::Error;

use crate::index::IndexSubset;
use crate::linops::{
    self, hermitian_eig, inner, norm_sq, Field, LinTol, LinopsError, Operator, Power, Scalar,
    SpectralDecomposition, Vector,
};

/// Frame operators within this distance of the identity (spectral norm) are
/// treated as Parseval.
pub const PARSEVAL_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error(transparent)]
    Linops(#[from] LinopsError),
    #[error("not a frame: lower bound {lower_bound:e} is not positive")]
    NotAFrame { lower_bound: f64 },
    #[error("index {index} out of range for {len} components")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("weight {0} is not a positive finite number")]
    InvalidWeight(f64),
    #[error("frame has no components")]
    Empty,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

pub type Result<T> = std::result::Result<T, FrameError>;

/// Element of the direct sum ⊕_j H_j.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockVector {
    pub blocks: Vec<Vector>,
}

impl BlockVector {
    pub fn new(blocks: Vec<Vector>) -> Self {
        BlockVector { blocks }
    }

    pub fn norm_sq(&self) -> f64 {
        self.blocks.iter().map(norm_sq).sum()
    }

    pub fn inner(&self, other: &BlockVector) -> Result<Scalar> {
        if self.blocks.len() != other.blocks.len()
            || self
                .blocks
                .iter()
                .zip(&other.blocks)
                .any(|(a, b)| a.len() != b.len())
        {
            return Err(FrameError::ShapeMismatch("block vectors differ in shape".into()));
        }
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| inner(a, b))
            .sum())
    }
}

pub(crate) fn check_subset(i: &IndexSubset, len: usize) -> Result<()> {
    match i.out_of_range(len) {
        Some(index) => Err(FrameError::IndexOutOfRange { index, len }),
        None => Ok(()),
    }
}

pub(crate) fn check_vector(f: &Vector, dim: usize) -> Result<()> {
    if f.len() != dim {
        return Err(FrameError::ShapeMismatch(format!(
            "vector of length {} in a space of dimension {dim}",
            f.len()
        )));
    }
    Ok(())
}

/// A finite g-frame with its frame operator and optimal bounds cached.
#[derive(Debug, Clone)]
pub struct GFrame {
    dim_h: usize,
    field: Field,
    blocks: Vec<Operator>,
    frame_operator: Operator,
    spectrum: SpectralDecomposition,
    inverse: Option<Operator>,
    tol: LinTol,
}

impl GFrame {
    /// Builds the family; a family with a singular frame operator is a valid
    /// value but not a frame (see [`GFrame::is_frame`]).
    pub fn new(blocks: Vec<Operator>, tol: LinTol) -> Result<Self> {
        let first = blocks.first().ok_or(FrameError::Empty)?;
        let dim_h = first.cols();
        if let Some(bad) = blocks.iter().find(|b| b.cols() != dim_h) {
            return Err(FrameError::ShapeMismatch(format!(
                "block with {} columns in a frame for dimension {dim_h}",
                bad.cols()
            )));
        }
        let field = blocks.iter().fold(Field::Real, |f, b| f.join(b.field()));
        let mut s = Operator::zeros(field, dim_h, dim_h);
        for b in &blocks {
            s = &s + &(&b.adjoint() * b);
        }
        let frame_operator = s.hermitian_part();
        let spectrum = hermitian_eig(&frame_operator, &tol)?;
        let inverse = if spectrum.min() > tol.pdtol {
            Some(linops::power_of(&spectrum, Power::Inverse, &tol)?)
        } else {
            None
        };
        Ok(GFrame {
            dim_h,
            field,
            blocks,
            frame_operator,
            spectrum,
            inverse,
            tol,
        })
    }

    pub fn dim_h(&self) -> usize {
        self.dim_h
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[Operator] {
        &self.blocks
    }

    pub fn tol(&self) -> &LinTol {
        &self.tol
    }

    pub fn frame_operator(&self) -> &Operator {
        &self.frame_operator
    }

    /// Optimal bounds (A, B): extreme eigenvalues of S.
    pub fn bounds(&self) -> (f64, f64) {
        (self.spectrum.min(), self.spectrum.max())
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn is_frame(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn is_parseval(&self) -> bool {
        let (a, b) = self.bounds();
        (a - 1.0).abs().max((b - 1.0).abs()) <= PARSEVAL_THRESHOLD
    }

    pub fn frame_operator_inverse(&self) -> Result<&Operator> {
        self.inverse.as_ref().ok_or(FrameError::NotAFrame {
            lower_bound: self.spectrum.min(),
        })
    }

    /// T*f = {Λ_j f}.
    pub fn analysis(&self, f: &Vector) -> Result<BlockVector> {
        check_vector(f, self.dim_h)?;
        Ok(BlockVector::new(
            self.blocks.iter().map(|b| b.matrix() * f).collect(),
        ))
    }

    /// T{g_j} = Σ Λ_j* g_j.
    pub fn synthesis(&self, g: &BlockVector) -> Result<Vector> {
        if g.blocks.len() != self.blocks.len() {
            return Err(FrameError::ShapeMismatch(format!(
                "{} blocks for a frame with {} components",
                g.blocks.len(),
                self.blocks.len()
            )));
        }
        let mut out = Vector::zeros(self.dim_h);
        for (b, gj) in self.blocks.iter().zip(&g.blocks) {
            out += b.adjoint().apply(gj)?;
        }
        Ok(out)
    }

    /// Analysis operator as one dense matrix (blocks stacked).
    pub fn analysis_matrix(&self) -> Operator {
        let refs: Vec<&Operator> = self.blocks.iter().collect();
        Operator::vstack(&refs).expect("blocks share a domain")
    }

    /// T T* from the stacked analysis matrix, independent of the cached sum.
    pub fn dense_frame_operator(&self) -> Operator {
        let t_star = self.analysis_matrix();
        &t_star.adjoint() * &t_star
    }

    /// Λ̃_j = Λ_j S⁻¹.
    pub fn canonical_dual(&self) -> Result<GFrame> {
        let s_inv = self.frame_operator_inverse()?;
        let blocks = self.blocks.iter().map(|b| b * s_inv).collect();
        GFrame::new(blocks, self.tol)
    }

    /// Λ_j S^{-1/2}, a Parseval g-frame.
    pub fn parsevalize(&self) -> Result<GFrame> {
        self.frame_operator_inverse()?;
        let root = linops::power_of(&self.spectrum, Power::InvSqrt, &self.tol)?;
        GFrame::new(self.blocks.iter().map(|b| b * &root).collect(), self.tol)
    }

    fn dual_block(&self, j: usize) -> Result<Operator> {
        Ok(&self.blocks[j] * self.frame_operator_inverse()?)
    }

    /// S_I = Σ_{j∈I} Λ_j* Λ̃_j.
    pub fn partial_sum(&self, i: &IndexSubset) -> Result<Operator> {
        check_subset(i, self.len())?;
        let mut s = Operator::zeros(self.field, self.dim_h, self.dim_h);
        let s_inv = self.frame_operator_inverse()?;
        for &j in i.members() {
            s = &s + &(&self.blocks[j].adjoint() * &(&self.blocks[j] * s_inv));
        }
        Ok(s)
    }

    /// Both sides of the partial-sum identity, evaluated term by term.
    pub fn thm_t1(&self, i: &IndexSubset, f: &Vector) -> Result<T1Evaluation> {
        check_subset(i, self.len())?;
        check_vector(f, self.dim_h)?;
        let ic = i.complement(self.len());
        let side = |set: &IndexSubset, conjugate: bool| -> Result<Scalar> {
            let mut sum = Scalar::new(0.0, 0.0);
            let mut s_f = Vector::zeros(self.dim_h);
            for &j in set.members() {
                let dual_f = self.dual_block(j)?.apply(f)?;
                let lam_f = self.blocks[j].apply(f)?;
                let term = inner(&dual_f, &lam_f);
                sum += if conjugate { term.conj() } else { term };
                s_f += self.blocks[j].adjoint().apply(&dual_f)?;
            }
            Ok(sum - norm_sq(&s_f))
        };
        let lhs = side(i, false)?;
        let rhs = side(&ic, true)?;
        let parseval = if self.is_parseval() {
            let side = |set: &IndexSubset| -> Result<f64> {
                let mut sum = 0.0;
                let mut s_f = Vector::zeros(self.dim_h);
                for &j in set.members() {
                    let lam_f = self.blocks[j].apply(f)?;
                    sum += norm_sq(&lam_f);
                    s_f += self.blocks[j].adjoint().apply(&lam_f)?;
                }
                Ok(sum - norm_sq(&s_f))
            };
            Some((side(i)?, side(&ic)?))
        } else {
            None
        };
        Ok(T1Evaluation {
            lhs,
            rhs,
            residual: (lhs - rhs).norm(),
            parseval,
        })
    }

    /// The same family viewed as a g-fusion frame with W_j = H and v_j = 1.
    pub fn to_gfusion(&self) -> Result<crate::gfusion::GFusionFrame> {
        let id = Operator::identity(Field::Real, self.dim_h);
        let comps = self
            .blocks
            .iter()
            .map(|b| crate::gfusion::FusionComponent::new(id.clone(), b.clone(), 1.0, &self.tol))
            .collect::<Result<Vec<_>>>()?;
        crate::gfusion::GFusionFrame::new(comps, self.tol)
    }
}

/// Result of evaluating both sides of the g-frame partial-sum identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct T1Evaluation {
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub residual: f64,
    /// Both sides of the Parseval specialization (‖Λ_j f‖² terms), for
    /// Parseval frames only.
    pub parseval: Option<(f64, f64)>,
}
