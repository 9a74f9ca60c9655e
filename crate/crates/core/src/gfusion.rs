//! g-fusion frames (W_j, Λ_j, v_j).
//!
//! Subspaces are stored as orthonormal column bases; projections are derived
//! from them at construction. The canonical dual and the Parseval frame
//! obtained by conjugating with S^{-1/2} are new values built from the
//! original triple.

use crate::gframe::{
    check_subset, check_vector, BlockVector, FrameError, Result, T1Evaluation, PARSEVAL_THRESHOLD,
};
use crate::index::IndexSubset;
use crate::linops::{
    self, hermitian_eig, norm_sq, orthonormality_residual, projector, range_basis, Field, LinTol,
    Operator, Power, Scalar, SpectralDecomposition, Vector,
};

/// One triple (W_j, Λ_j, v_j).
#[derive(Debug, Clone)]
pub struct FusionComponent {
    basis: Operator,
    lambda: Operator,
    weight: f64,
    projection: Operator,
    lambda_pi: Operator,
}

impl FusionComponent {
    pub fn new(basis: Operator, lambda: Operator, weight: f64, tol: &LinTol) -> Result<Self> {
        if !(weight.is_finite() && weight > 0.0) {
            return Err(FrameError::InvalidWeight(weight));
        }
        if basis.rows() != lambda.cols() {
            return Err(FrameError::ShapeMismatch(format!(
                "subspace of a {}-dimensional space with an operator on dimension {}",
                basis.rows(),
                lambda.cols()
            )));
        }
        if basis.cols() > basis.rows() {
            return Err(FrameError::ShapeMismatch(format!(
                "{} basis vectors in dimension {}",
                basis.cols(),
                basis.rows()
            )));
        }
        let residual = orthonormality_residual(&basis);
        if residual > tol.rtol {
            return Err(linops::LinopsError::NotOrthonormal { residual }.into());
        }
        let projection = projector(&basis);
        let lambda_pi = &lambda * &projection;
        Ok(FusionComponent {
            basis,
            lambda,
            weight,
            projection,
            lambda_pi,
        })
    }

    pub fn basis(&self) -> &Operator {
        &self.basis
    }

    pub fn lambda(&self) -> &Operator {
        &self.lambda
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// π_{W_j}.
    pub fn projection(&self) -> &Operator {
        &self.projection
    }

    /// Λ_j π_{W_j}.
    pub fn lambda_pi(&self) -> &Operator {
        &self.lambda_pi
    }

    /// v_j² π_{W_j} Λ_j* Λ_j π_{W_j}.
    fn weighted_gram(&self) -> Operator {
        (&self.lambda_pi.adjoint() * &self.lambda_pi).scale(self.weight * self.weight)
    }
}

#[derive(Debug, Clone)]
pub struct GFusionFrame {
    dim_h: usize,
    field: Field,
    components: Vec<FusionComponent>,
    frame_operator: Operator,
    spectrum: SpectralDecomposition,
    inverse: Option<Operator>,
    tol: LinTol,
}

impl GFusionFrame {
    /// Builds the triple family; frame-ness is reported by [`GFusionFrame::is_frame`].
    pub fn new(components: Vec<FusionComponent>, tol: LinTol) -> Result<Self> {
        let first = components.first().ok_or(FrameError::Empty)?;
        let dim_h = first.basis.rows();
        if let Some(bad) = components.iter().find(|c| c.basis.rows() != dim_h) {
            return Err(FrameError::ShapeMismatch(format!(
                "component on dimension {} in a frame for dimension {dim_h}",
                bad.basis.rows()
            )));
        }
        let field = components.iter().fold(Field::Real, |f, c| {
            f.join(c.basis.field()).join(c.lambda.field())
        });
        let frame_operator = sum_grams(field, dim_h, components.iter()).hermitian_part();
        let spectrum = hermitian_eig(&frame_operator, &tol)?;
        let inverse = if spectrum.min() > tol.pdtol {
            Some(linops::power_of(&spectrum, Power::Inverse, &tol)?)
        } else {
            None
        };
        Ok(GFusionFrame {
            dim_h,
            field,
            components,
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
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn components(&self) -> &[FusionComponent] {
        &self.components
    }

    pub fn tol(&self) -> &LinTol {
        &self.tol
    }

    /// S_Λ = Σ v_j² π_{W_j} Λ_j* Λ_j π_{W_j}.
    pub fn frame_operator(&self) -> &Operator {
        &self.frame_operator
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.spectrum.min(), self.spectrum.max())
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

    pub fn frame_operator_power(&self, p: Power) -> Result<Operator> {
        self.frame_operator_inverse()?;
        Ok(linops::power_of(&self.spectrum, p, &self.tol)?)
    }

    /// {v_j Λ_j π_{W_j} f}.
    pub fn analysis(&self, f: &Vector) -> Result<BlockVector> {
        check_vector(f, self.dim_h)?;
        Ok(BlockVector::new(
            self.components
                .iter()
                .map(|c| c.lambda_pi.matrix() * f * Scalar::from(c.weight))
                .collect(),
        ))
    }

    /// Σ v_j π_{W_j} Λ_j* g_j.
    pub fn synthesis(&self, g: &BlockVector) -> Result<Vector> {
        if g.blocks.len() != self.components.len() {
            return Err(FrameError::ShapeMismatch(format!(
                "{} blocks for a frame with {} components",
                g.blocks.len(),
                self.components.len()
            )));
        }
        let mut out = Vector::zeros(self.dim_h);
        for (c, gj) in self.components.iter().zip(&g.blocks) {
            out += c.lambda_pi.adjoint().apply(gj)? * Scalar::from(c.weight);
        }
        Ok(out)
    }

    /// Analysis operator as one dense matrix with blocks v_j Λ_j π_{W_j}.
    pub fn analysis_matrix(&self) -> Operator {
        let scaled: Vec<Operator> = self
            .components
            .iter()
            .map(|c| c.lambda_pi.scale(c.weight))
            .collect();
        let refs: Vec<&Operator> = scaled.iter().collect();
        Operator::vstack(&refs).expect("components share a domain")
    }

    /// T T* from the stacked analysis matrix.
    pub fn dense_frame_operator(&self) -> Operator {
        let t_star = self.analysis_matrix();
        &t_star.adjoint() * &t_star
    }

    /// M_I = Σ_{j∈I} v_j² π_{W_j} Λ_j* Λ_j π_{W_j}.
    pub fn m_partial(&self, i: &IndexSubset) -> Result<Operator> {
        check_subset(i, self.len())?;
        Ok(sum_grams(
            self.field,
            self.dim_h,
            i.members().iter().map(|&j| &self.components[j]),
        ))
    }

    /// W̃_j = S⁻¹W_j, Λ̃_j = Λ_j π_{W_j} S⁻¹, same weights.
    pub fn canonical_dual(&self) -> Result<DualGFusionFrame> {
        let s_inv = self.frame_operator_inverse()?.clone();
        let components = self
            .components
            .iter()
            .map(|c| {
                let basis = range_basis(&(&s_inv * &c.basis), &self.tol)?;
                let lambda = &c.lambda_pi * &s_inv;
                FusionComponent::new(basis, lambda, c.weight, &self.tol)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DualGFusionFrame { components, s_inv })
    }

    /// S_I = Σ_{j∈I} v_j² π_{W_j} Λ_j* Λ̃_j π_{W̃_j}.
    pub fn s_partial(&self, dual: &DualGFusionFrame, i: &IndexSubset) -> Result<Operator> {
        check_subset(i, self.len())?;
        self.check_dual(dual)?;
        let mut s = Operator::zeros(self.field, self.dim_h, self.dim_h);
        for &j in i.members() {
            let (c, d) = (&self.components[j], &dual.components[j]);
            let term = &c.lambda_pi.adjoint() * &d.lambda_pi;
            s = &s + &term.scale(c.weight * c.weight);
        }
        Ok(s)
    }

    /// Both orderings of f = Σ v² π Λ*Λ π S⁻¹ f = Σ v² S⁻¹ π Λ*Λ π f.
    pub fn reconstruct(&self, f: &Vector) -> Result<[Vector; 2]> {
        check_vector(f, self.dim_h)?;
        let s_inv = self.frame_operator_inverse()?;
        let g = s_inv.apply(f)?;
        let mut first = Vector::zeros(self.dim_h);
        let mut second = Vector::zeros(self.dim_h);
        for c in &self.components {
            let w2 = c.weight * c.weight;
            first += c.weighted_gram_apply(&g)? * Scalar::from(w2);
            second += s_inv.apply(&c.weighted_gram_apply(f)?)? * Scalar::from(w2);
        }
        Ok([first, second])
    }

    /// Both orderings of f = Σ v² π_W Λ* Λ̃ π_W̃ f = Σ v² π_W̃ Λ̃* Λ π_W f.
    pub fn dual_reconstruct(&self, dual: &DualGFusionFrame, f: &Vector) -> Result<[Vector; 2]> {
        check_vector(f, self.dim_h)?;
        self.check_dual(dual)?;
        let mut first = Vector::zeros(self.dim_h);
        let mut second = Vector::zeros(self.dim_h);
        for (c, d) in self.components.iter().zip(&dual.components) {
            let w2 = c.weight * c.weight;
            first += c.lambda_pi.adjoint().apply(&d.lambda_pi.apply(f)?)? * Scalar::from(w2);
            second += d.lambda_pi.adjoint().apply(&c.lambda_pi.apply(f)?)? * Scalar::from(w2);
        }
        Ok([first, second])
    }

    /// |⟨S⁻¹f, f⟩ − Σ v_j² ‖Λ̃_j π_{W̃_j} f‖²|.
    pub fn inverse_quadratic_residual(&self, dual: &DualGFusionFrame, f: &Vector) -> Result<f64> {
        check_vector(f, self.dim_h)?;
        self.check_dual(dual)?;
        let lhs = linops::inner(&dual.s_inv.apply(f)?, f);
        let rhs: f64 = dual
            .components
            .iter()
            .map(|d| Ok(d.weight * d.weight * norm_sq(&d.lambda_pi.apply(f)?)))
            .sum::<Result<f64>>()?;
        Ok((lhs - rhs).norm())
    }

    /// Both sides of the g-fusion partial-sum identity, term by term:
    /// Σ_{I} v² ⟨Λ̃π̃f, Λπf⟩ − ‖S_I f‖² against the conjugated sum over I^c.
    pub fn thm_tg1(&self, dual: &DualGFusionFrame, i: &IndexSubset, f: &Vector) -> Result<T1Evaluation> {
        check_subset(i, self.len())?;
        check_vector(f, self.dim_h)?;
        self.check_dual(dual)?;
        let side = |set: &IndexSubset, conjugate: bool| -> Result<Scalar> {
            let mut sum = Scalar::new(0.0, 0.0);
            let mut s_f = Vector::zeros(self.dim_h);
            for &j in set.members() {
                let (c, d) = (&self.components[j], &dual.components[j]);
                let w2 = c.weight * c.weight;
                let dual_f = d.lambda_pi.apply(f)?;
                let term = linops::inner(&dual_f, &c.lambda_pi.apply(f)?) * w2;
                sum += if conjugate { term.conj() } else { term };
                s_f += c.lambda_pi.adjoint().apply(&dual_f)? * Scalar::from(w2);
            }
            Ok(sum - norm_sq(&s_f))
        };
        let lhs = side(i, false)?;
        let rhs = side(&i.complement(self.len()), true)?;
        Ok(T1Evaluation {
            lhs,
            rhs,
            residual: (lhs - rhs).norm(),
            parseval: None,
        })
    }

    /// (S^{-1/2}W_j, Λ_j π_{W_j} S^{-1/2}, v_j), a Parseval g-fusion frame.
    pub fn parsevalize(&self) -> Result<GFusionFrame> {
        let root = self.frame_operator_power(Power::InvSqrt)?;
        let components = self
            .components
            .iter()
            .map(|c| {
                let basis = range_basis(&(&root * &c.basis), &self.tol)?;
                FusionComponent::new(basis, &c.lambda_pi * &root, c.weight, &self.tol)
            })
            .collect::<Result<Vec<_>>>()?;
        GFusionFrame::new(components, self.tol)
    }

    fn check_dual(&self, dual: &DualGFusionFrame) -> Result<()> {
        if dual.components.len() != self.components.len() || dual.s_inv.rows() != self.dim_h {
            return Err(FrameError::ShapeMismatch(
                "dual frame does not belong to this frame".into(),
            ));
        }
        Ok(())
    }
}

impl FusionComponent {
    fn weighted_gram_apply(&self, f: &Vector) -> Result<Vector> {
        let y = self.lambda_pi.apply(f)?;
        Ok(self.lambda_pi.adjoint().apply(&y)?)
    }
}

fn sum_grams<'a>(
    field: Field,
    dim: usize,
    components: impl Iterator<Item = &'a FusionComponent>,
) -> Operator {
    components.fold(Operator::zeros(field, dim, dim), |acc, c| {
        &acc + &c.weighted_gram()
    })
}

/// Canonical dual triple (S⁻¹W_j, Λ_j π_{W_j} S⁻¹, v_j).
#[derive(Debug, Clone)]
pub struct DualGFusionFrame {
    components: Vec<FusionComponent>,
    s_inv: Operator,
}

impl DualGFusionFrame {
    pub fn components(&self) -> &[FusionComponent] {
        &self.components
    }

    /// S_Λ⁻¹ of the primal frame.
    pub fn frame_operator_inverse(&self) -> &Operator {
        &self.s_inv
    }

    /// The dual triple as a g-fusion frame in its own right.
    pub fn as_gfusion(&self, tol: LinTol) -> Result<GFusionFrame> {
        GFusionFrame::new(self.components.clone(), tol)
    }
}
