//! Seeded random g-frames and g-fusion frames.
//!
//! Randomness comes from ChaCha20 (`rand_chacha`) seeded with
//! `seed_from_u64(seed)`; attempt `k` of a construction runs on stream `k`
//! of that generator, so a retry never perturbs the draws of earlier
//! attempts. Gaussian scalars use `rand_distr::StandardNormal`; a complex
//! Gaussian has independent real and imaginary parts, each N(0, 1/2).
//! Matrices are filled row by row.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gframe::{FrameError, GFrame};
use crate::gfusion::{FusionComponent, GFusionFrame};
use crate::linops::{range_basis, Field, LinTol, Operator, Scalar, Vector};

/// Attempts made before a construction is abandoned (one initial draw plus 16 retries).
pub const MAX_ATTEMPTS: u64 = 17;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
    #[error("no frame obtained after {attempts} attempts (last lower bound {last_lower_bound:e})")]
    GenerationFailed { attempts: u64, last_lower_bound: f64 },
    #[error(transparent)]
    Frame(#[from] FrameError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentSpec {
    pub subspace_dim: usize,
    pub codomain_dim: usize,
    pub weight_lo: f64,
    pub weight_hi: f64,
}

impl ComponentSpec {
    pub fn new(subspace_dim: usize, codomain_dim: usize, weight: f64) -> Self {
        ComponentSpec {
            subspace_dim,
            codomain_dim,
            weight_lo: weight,
            weight_hi: weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub dim_h: usize,
    pub components: Vec<ComponentSpec>,
    pub field: Field,
    pub seed: u64,
}

impl GenSpec {
    /// The component layout used by the verification suite: subspaces of
    /// dimension about half of `dim_h` alternating with slightly larger ones,
    /// weights drawn from [0.5, 2].
    pub fn standard(dim_h: usize, components: usize, field: Field, seed: u64) -> Self {
        let comps = (0..components)
            .map(|j| {
                let sub = (dim_h / 2 + j % 2).clamp(1, dim_h.max(1));
                let codim = if j % 3 == 2 { sub.saturating_sub(1).max(1) } else { sub };
                ComponentSpec {
                    subspace_dim: sub,
                    codomain_dim: codim,
                    weight_lo: 0.5,
                    weight_hi: 2.0,
                }
            })
            .collect();
        GenSpec {
            dim_h,
            components: comps,
            field,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.dim_h == 0 {
            return Err(GenError::InvalidSpec("dim_h must be at least 1".into()));
        }
        if self.components.is_empty() {
            return Err(GenError::InvalidSpec("at least one component is required".into()));
        }
        for (j, c) in self.components.iter().enumerate() {
            if c.subspace_dim == 0 || c.subspace_dim > self.dim_h {
                return Err(GenError::InvalidSpec(format!(
                    "component {j}: subspace dimension {} not in 1..={}",
                    c.subspace_dim, self.dim_h
                )));
            }
            if c.codomain_dim == 0 {
                return Err(GenError::InvalidSpec(format!(
                    "component {j}: codomain dimension must be at least 1"
                )));
            }
            if !(c.weight_lo.is_finite() && c.weight_hi.is_finite())
                || c.weight_lo <= 0.0
                || c.weight_lo > c.weight_hi
            {
                return Err(GenError::InvalidSpec(format!(
                    "component {j}: weight range [{}, {}] must satisfy 0 < lo <= hi",
                    c.weight_lo, c.weight_hi
                )));
            }
        }
        Ok(())
    }
}

/// Deterministic generator for one construction attempt.
#[derive(Debug, Clone)]
pub struct FrameRng {
    inner: ChaCha20Rng,
}

impl FrameRng {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha20Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        FrameRng { inner }
    }

    pub fn gaussian(&mut self, field: Field) -> Scalar {
        match field {
            Field::Real => Scalar::new(StandardNormal.sample(&mut self.inner), 0.0),
            Field::Complex => {
                let re: f64 = StandardNormal.sample(&mut self.inner);
                let im: f64 = StandardNormal.sample(&mut self.inner);
                Scalar::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            }
        }
    }

    pub fn gaussian_vector(&mut self, field: Field, n: usize) -> Vector {
        Vector::from_iterator(n, (0..n).map(|_| self.gaussian(field)))
    }

    pub fn gaussian_operator(&mut self, field: Field, rows: usize, cols: usize) -> Operator {
        let mut entries = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            entries.push(self.gaussian(field));
        }
        let mat = nalgebra::DMatrix::from_row_slice(rows, cols, &entries);
        Operator::new(field, mat).expect("gaussian entries are finite")
    }

    /// Orthonormal basis of the span of `k` Gaussian vectors.
    pub fn subspace(&mut self, field: Field, n: usize, k: usize, tol: &LinTol) -> Operator {
        let spanning = self.gaussian_operator(field, n, k);
        range_basis(&spanning, tol).expect("gaussian vectors are nonzero")
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            return lo;
        }
        Uniform::new_inclusive(lo, hi)
            .expect("valid range")
            .sample(&mut self.inner)
    }

    pub fn rng(&mut self) -> &mut impl Rng {
        &mut self.inner
    }
}

fn with_retries<T>(
    seed: u64,
    mut build: impl FnMut(&mut FrameRng) -> Result<T, GenError>,
    lower_bound: impl Fn(&T) -> f64,
    accept: impl Fn(&T) -> bool,
) -> Result<T, GenError> {
    let mut last = f64::NAN;
    for attempt in 0..MAX_ATTEMPTS {
        let mut rng = FrameRng::new(seed, attempt);
        let candidate = build(&mut rng)?;
        if accept(&candidate) {
            return Ok(candidate);
        }
        last = lower_bound(&candidate);
    }
    Err(GenError::GenerationFailed {
        attempts: MAX_ATTEMPTS,
        last_lower_bound: last,
    })
}

fn draw_gfusion(spec: &GenSpec, rng: &mut FrameRng, tol: &LinTol) -> Result<GFusionFrame, GenError> {
    let comps = spec
        .components
        .iter()
        .map(|c| {
            let basis = rng.subspace(spec.field, spec.dim_h, c.subspace_dim, tol);
            let lambda = rng.gaussian_operator(spec.field, c.codomain_dim, spec.dim_h);
            let weight = rng.uniform(c.weight_lo, c.weight_hi);
            FusionComponent::new(basis, lambda, weight, tol)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GFusionFrame::new(comps, *tol)?)
}

/// Gaussian g-fusion frame; redrawn on a fresh stream until S_Λ is positive definite.
pub fn random_gfusion(spec: &GenSpec, tol: &LinTol) -> Result<GFusionFrame, GenError> {
    spec.validate()?;
    with_retries(
        spec.seed,
        |rng| draw_gfusion(spec, rng, tol),
        |f| f.bounds().0,
        |f| f.is_frame(),
    )
}

/// A random g-fusion frame conjugated by S^{-1/2}.
pub fn random_parseval_gfusion(spec: &GenSpec, tol: &LinTol) -> Result<GFusionFrame, GenError> {
    spec.validate()?;
    with_retries(
        spec.seed,
        |rng| {
            let f = draw_gfusion(spec, rng, tol)?;
            if f.is_frame() {
                Ok(Some(f.parsevalize()?))
            } else {
                Ok(None)
            }
        },
        |f| f.as_ref().map_or(0.0, |f| f.bounds().0),
        |f| f.as_ref().is_some_and(|f| f.is_parseval()),
    )
    .map(|f| f.expect("accepted candidates exist"))
}

fn draw_gframe(spec: &GenSpec, rng: &mut FrameRng, tol: &LinTol) -> Result<GFrame, GenError> {
    let blocks = spec
        .components
        .iter()
        .map(|c| rng.gaussian_operator(spec.field, c.codomain_dim, spec.dim_h))
        .collect();
    Ok(GFrame::new(blocks, *tol)?)
}

/// Gaussian g-frame with blocks of the spec's codomain dimensions; subspace
/// dimensions and weights are ignored.
pub fn random_gframe(spec: &GenSpec, tol: &LinTol) -> Result<GFrame, GenError> {
    spec.validate()?;
    with_retries(
        spec.seed,
        |rng| draw_gframe(spec, rng, tol),
        |f| f.bounds().0,
        |f| f.is_frame(),
    )
}

pub fn random_parseval_gframe(spec: &GenSpec, tol: &LinTol) -> Result<GFrame, GenError> {
    spec.validate()?;
    with_retries(
        spec.seed,
        |rng| {
            let f = draw_gframe(spec, rng, tol)?;
            if f.is_frame() {
                Ok(Some(f.parsevalize()?))
            } else {
                Ok(None)
            }
        },
        |f| f.as_ref().map_or(0.0, |f| f.bounds().0),
        |f| f.as_ref().is_some_and(|f| f.is_parseval()),
    )
    .map(|f| f.expect("accepted candidates exist"))
}

/// Classical fusion frame: Λ_j = id_H, so S_Λ = Σ v_j² π_{W_j}.
pub fn fusion_frame_from_bases(
    bases: Vec<Operator>,
    weights: &[f64],
    tol: &LinTol,
) -> Result<GFusionFrame, GenError> {
    if bases.len() != weights.len() {
        return Err(GenError::InvalidSpec(format!(
            "{} subspaces but {} weights",
            bases.len(),
            weights.len()
        )));
    }
    let comps = bases
        .into_iter()
        .zip(weights)
        .map(|(b, &w)| {
            let id = Operator::identity(b.field(), b.rows());
            FusionComponent::new(b, id, w, tol)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GFusionFrame::new(comps, *tol)?)
}

/// Classical fusion frame on random subspaces of the given dimensions.
///
/// No retry: the caller inspects [`GFusionFrame::is_frame`].
pub fn fusion_special_case(
    dim_h: usize,
    subspace_dims: &[usize],
    weights: &[f64],
    field: Field,
    seed: u64,
    tol: &LinTol,
) -> Result<GFusionFrame, GenError> {
    if dim_h == 0 || subspace_dims.iter().any(|&k| k == 0 || k > dim_h) {
        return Err(GenError::InvalidSpec(format!(
            "subspace dimensions {subspace_dims:?} invalid for dimension {dim_h}"
        )));
    }
    let mut rng = FrameRng::new(seed, 0);
    let bases = subspace_dims
        .iter()
        .map(|&k| rng.subspace(field, dim_h, k, tol))
        .collect();
    fusion_frame_from_bases(bases, weights, tol)
}

fn coordinate_line(field: Field, dim_h: usize, j: usize) -> Operator {
    let mut b = Operator::zeros(field, dim_h, 1).matrix().clone();
    b[(j, 0)] = Scalar::new(1.0, 0.0);
    Operator::new(field, b).expect("finite")
}

/// W_j = span e_j, Λ_j = id_H, v_j = 1: exactly Parseval.
pub fn coordinate_parseval_gfusion(dim_h: usize, field: Field) -> GFusionFrame {
    let bases = (0..dim_h).map(|j| coordinate_line(field, dim_h, j)).collect();
    fusion_frame_from_bases(bases, &vec![1.0; dim_h], &LinTol::default())
        .expect("coordinate frame is well formed")
}

/// Λ_j = e_j*: exactly Parseval.
pub fn coordinate_parseval_gframe(dim_h: usize, field: Field) -> GFrame {
    let blocks = (0..dim_h)
        .map(|j| coordinate_line(field, dim_h, j).adjoint())
        .collect();
    GFrame::new(blocks, LinTol::default()).expect("coordinate frame is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_frame() {
        let tol = LinTol::default();
        let spec = GenSpec::standard(4, 3, Field::Complex, 42);
        let a = random_gfusion(&spec, &tol).unwrap();
        let b = random_gfusion(&spec, &tol).unwrap();
        for (x, y) in a.components().iter().zip(b.components()) {
            assert_eq!(x.basis(), y.basis());
            assert_eq!(x.lambda(), y.lambda());
            assert_eq!(x.weight().to_bits(), y.weight().to_bits());
        }
        let c = random_gfusion(&GenSpec { seed: 43, ..spec }, &tol).unwrap();
        assert_ne!(a.components()[0].lambda(), c.components()[0].lambda());
    }

    #[test]
    fn streams_are_independent() {
        let mut a = FrameRng::new(9, 0);
        let mut b = FrameRng::new(9, 1);
        assert_ne!(a.gaussian(Field::Real), b.gaussian(Field::Real));
    }

    #[test]
    fn full_space_component_frame_iff_injective() {
        let tol = LinTol::default();
        let spec = GenSpec {
            dim_h: 2,
            components: vec![ComponentSpec::new(2, 2, 1.0)],
            field: Field::Real,
            seed: 3,
        };
        let f = random_gfusion(&spec, &tol).unwrap();
        let lp = f.components()[0].lambda_pi();
        let smallest_sv = nalgebra::SVD::new(lp.matrix().clone(), false, false)
            .singular_values
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        assert_eq!(f.is_frame(), smallest_sv * smallest_sv > tol.pdtol);
        assert!((f.bounds().0 - smallest_sv * smallest_sv).abs() < 1e-12);
    }

    #[test]
    fn undercovering_spec_fails() {
        let tol = LinTol::default();
        let spec = GenSpec {
            dim_h: 3,
            components: vec![ComponentSpec::new(1, 1, 1.0)],
            field: Field::Real,
            seed: 1,
        };
        assert!(matches!(
            random_gfusion(&spec, &tol),
            Err(GenError::GenerationFailed { attempts: MAX_ATTEMPTS, .. })
        ));
        let spec = GenSpec {
            dim_h: 4,
            components: vec![ComponentSpec::new(1, 3, 1.0), ComponentSpec::new(2, 3, 1.0)],
            field: Field::Complex,
            seed: 1,
        };
        assert!(random_parseval_gfusion(&spec, &tol).is_err());
    }

    #[test]
    fn invalid_specs_rejected() {
        let tol = LinTol::default();
        let mut spec = GenSpec::standard(3, 2, Field::Real, 0);
        spec.components[0].weight_lo = 0.0;
        assert!(matches!(random_gfusion(&spec, &tol), Err(GenError::InvalidSpec(_))));
        let mut spec = GenSpec::standard(3, 2, Field::Real, 0);
        spec.components[1].subspace_dim = 4;
        assert!(matches!(random_gframe(&spec, &tol), Err(GenError::InvalidSpec(_))));
        let spec = GenSpec { components: vec![], ..GenSpec::standard(3, 2, Field::Real, 0) };
        assert!(spec.validate().is_err());
    }

    #[test]
    fn parseval_outputs() {
        let tol = LinTol::default();
        let spec = GenSpec::standard(5, 4, Field::Complex, 7);
        let p = random_parseval_gfusion(&spec, &tol).unwrap();
        let dev = (p.frame_operator() - &Operator::identity(Field::Complex, 5)).norm();
        assert!(dev <= 1e-8, "{dev}");
        let again = p.parsevalize().unwrap();
        for (x, y) in p.components().iter().zip(again.components()) {
            assert!((x.lambda_pi() - y.lambda_pi()).norm() <= tol.rtol);
            assert!((x.projection() - y.projection()).norm() <= tol.rtol);
        }
        assert!(coordinate_parseval_gfusion(2, Field::Real).is_parseval());
        assert!(coordinate_parseval_gframe(3, Field::Complex).is_parseval());
        let g = random_parseval_gframe(&spec, &tol).unwrap();
        assert!(g.is_parseval());
    }

    #[test]
    fn fusion_special_cases() {
        let tol = LinTol::default();
        let e1 = Operator::from_real_rows(&[&[1.0], &[0.0]]).unwrap();
        let e2 = Operator::from_real_rows(&[&[0.0], &[1.0]]).unwrap();
        let f = fusion_frame_from_bases(vec![e1.clone(), e2], &[1.0, 1.0], &tol).unwrap();
        assert_eq!(f.frame_operator(), &Operator::identity(Field::Real, 2));

        // One line counted twice: S = 2π with eigenvalues {0, 2}.
        let f = fusion_frame_from_bases(vec![e1.clone(), e1], &[1.0, 1.0], &tol).unwrap();
        assert!(!f.is_frame());
        assert_eq!(f.bounds(), (0.0, 2.0));

        let planes = [[0usize, 1], [1, 2], [0, 2]]
            .iter()
            .map(|pair| {
                let mut m = nalgebra::DMatrix::zeros(3, 2);
                m[(pair[0], 0)] = Scalar::new(1.0, 0.0);
                m[(pair[1], 1)] = Scalar::new(1.0, 0.0);
                Operator::new(Field::Real, m).unwrap()
            })
            .collect();
        let f = fusion_frame_from_bases(planes, &[1.0; 3], &tol).unwrap();
        assert_eq!(f.frame_operator(), &Operator::identity(Field::Real, 3).scale(2.0));

        let f = fusion_special_case(4, &[2, 3], &[1.0, 0.5], Field::Complex, 5, &tol).unwrap();
        let expected = &f.components()[0].projection().clone()
            + &f.components()[1].projection().scale(0.25);
        assert!((f.frame_operator() - &expected).norm() < 1e-14);
        assert!(f.components().iter().all(|c| c.lambda().rows() == 4));
    }
}
