//! Dense reference computations written directly against nalgebra.
//!
//! Inverses go through LU, projections onto a column space through
//! Householder QR, and PSD certificates through Cholesky, so none of
//! this shares the eigen/SVD paths of the library under test.

#![allow(dead_code)]

use framekit::gframe::GFrame;
use framekit::gfusion::GFusionFrame;
use framekit::index::IndexSubset;
use framekit::linops::Field;
use framekit::verify::{Instance, SuitePlan};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type M = DMatrix<Complex64>;
pub type V = DVector<Complex64>;

pub fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn inv(m: &M) -> M {
    m.clone().try_inverse().expect("invertible")
}

/// Orthogonal projector onto the column space of a full-column-rank `b`,
/// from a Householder QR (stable where the normal equations are not).
pub fn col_projector(b: &M) -> M {
    let q = b.clone().qr().q();
    &q * q.adjoint()
}

pub fn rel(a: &M, b: &M) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

/// ⟨x, y⟩, linear in x.
pub fn ip(x: &V, y: &V) -> Complex64 {
    y.dotc(x)
}

/// True when the Hermitian part of `t` plus `eps·I` admits a Cholesky
/// factorization, i.e. t ⪰ -eps.
///
/// Runs on the real embedding [[A, -B], [B, A]] of A + iB: complex Cholesky
/// in nalgebra takes complex square roots and accepts indefinite input.
pub fn psd_up_to(t: &M, eps: f64) -> bool {
    let h = (t + t.adjoint()) * c(0.5);
    let n = h.nrows();
    let mut r = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = h[(i, j)];
            r[(i, j)] = z.re;
            r[(i + n, j + n)] = z.re;
            r[(i, j + n)] = -z.im;
            r[(i + n, j)] = z.im;
        }
    }
    for i in 0..2 * n {
        r[(i, i)] += eps;
    }
    nalgebra::linalg::Cholesky::new(r).is_some()
}

pub fn hermitian_eigenvalues(t: &M) -> Vec<f64> {
    let h = (t + t.adjoint()) * c(0.5);
    nalgebra::linalg::SymmetricEigen::new(h).eigenvalues.iter().copied().collect()
}

/// Hermitian functional calculus via an explicit eigendecomposition.
pub fn psd_map(t: &M, g: impl Fn(f64) -> f64) -> M {
    let h = (t + t.adjoint()) * c(0.5);
    let eig = nalgebra::linalg::SymmetricEigen::new(h);
    let d = M::from_diagonal(&eig.eigenvalues.map(|x| c(g(x))));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// A g-fusion frame with everything the identities need, recomputed densely.
pub struct FusionOracle {
    pub n: usize,
    pub weights: Vec<f64>,
    /// Λ_j π_{W_j}.
    pub lambda_pi: Vec<M>,
    pub proj: Vec<M>,
    pub s: M,
    pub s_inv: M,
    /// π_{S⁻¹W_j}.
    pub dual_proj: Vec<M>,
    /// Λ_j π_{W_j} S⁻¹ π_{S⁻¹W_j}.
    pub dual_lambda_pi: Vec<M>,
}

impl FusionOracle {
    pub fn new(frame: &GFusionFrame) -> Self {
        let n = frame.dim_h();
        let mut weights = Vec::new();
        let mut lambda_pi = Vec::new();
        let mut proj = Vec::new();
        for comp in frame.components() {
            let b = comp.basis().matrix().clone();
            let p = col_projector(&b);
            lambda_pi.push(comp.lambda().matrix() * &p);
            proj.push(p);
            weights.push(comp.weight());
        }
        let mut s = M::zeros(n, n);
        for (lp, w) in lambda_pi.iter().zip(&weights) {
            s += lp.adjoint() * lp * c(w * w);
        }
        let s_inv = inv(&s);
        let mut dual_proj = Vec::new();
        let mut dual_lambda_pi = Vec::new();
        for (comp, lp) in frame.components().iter().zip(&lambda_pi) {
            let dp = col_projector(&(&s_inv * comp.basis().matrix()));
            dual_lambda_pi.push(lp * &s_inv * &dp);
            dual_proj.push(dp);
        }
        FusionOracle {
            n,
            weights,
            lambda_pi,
            proj,
            s,
            s_inv,
            dual_proj,
            dual_lambda_pi,
        }
    }

    pub fn m_partial(&self, i: &IndexSubset) -> M {
        let mut m = M::zeros(self.n, self.n);
        for &j in i.members() {
            let w2 = self.weights[j] * self.weights[j];
            m += self.lambda_pi[j].adjoint() * &self.lambda_pi[j] * c(w2);
        }
        m
    }

    /// Σ_{I} v² π_W Λ* Λ̃ π_{W̃}.
    pub fn s_partial(&self, i: &IndexSubset) -> M {
        let mut m = M::zeros(self.n, self.n);
        for &j in i.members() {
            let w2 = self.weights[j] * self.weights[j];
            m += self.lambda_pi[j].adjoint() * &self.dual_lambda_pi[j] * c(w2);
        }
        m
    }

    pub fn energy(&self, i: &IndexSubset, f: &V) -> f64 {
        i.members()
            .iter()
            .map(|&j| self.weights[j].powi(2) * (&self.lambda_pi[j] * f).norm_squared())
            .sum()
    }

    pub fn dual_energy(&self, f: &V) -> f64 {
        (0..self.weights.len())
            .map(|j| self.weights[j].powi(2) * (&self.dual_lambda_pi[j] * f).norm_squared())
            .sum()
    }

    pub fn dense_synthesis_operator(&self) -> M {
        let blocks: Vec<M> = self
            .lambda_pi
            .iter()
            .zip(&self.weights)
            .map(|(lp, w)| lp * c(*w))
            .collect();
        let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
        let mut t_star = M::zeros(rows, self.n);
        let mut r = 0;
        for b in &blocks {
            t_star.view_mut((r, 0), (b.nrows(), self.n)).copy_from(b);
            r += b.nrows();
        }
        t_star.adjoint()
    }
}

pub struct GFrameOracle {
    pub n: usize,
    pub blocks: Vec<M>,
    pub s: M,
    pub s_inv: M,
    /// Λ_j S⁻¹.
    pub dual: Vec<M>,
}

impl GFrameOracle {
    pub fn new(g: &GFrame) -> Self {
        let n = g.dim_h();
        let blocks: Vec<M> = g.blocks().iter().map(|b| b.matrix().clone()).collect();
        let mut s = M::zeros(n, n);
        for b in &blocks {
            s += b.adjoint() * b;
        }
        let s_inv = inv(&s);
        let dual = blocks.iter().map(|b| b * &s_inv).collect();
        GFrameOracle {
            n,
            blocks,
            s,
            s_inv,
            dual,
        }
    }

    pub fn s_partial(&self, i: &IndexSubset) -> M {
        let mut m = M::zeros(self.n, self.n);
        for &j in i.members() {
            m += self.blocks[j].adjoint() * &self.dual[j];
        }
        m
    }
}

/// The instances of the acceptance grid: dims 2, 3, 5, 8, both fields,
/// seeds 0..10, 3, 4 and 6 components.
pub fn grid() -> Vec<Instance> {
    let mut out = Vec::new();
    for components in [3, 4, 6] {
        let plan = SuitePlan {
            components,
            ..SuitePlan::default()
        };
        for &dim in &plan.dims {
            for &field in &[Field::Real, Field::Complex] {
                for seed in 0..plan.seeds {
                    out.push(Instance::generate(dim, field, seed, &plan).expect("instance"));
                }
            }
        }
    }
    out
}
