//! Catalog of named checks over g-frames and g-fusion frames, and the suite
//! runner that evaluates them over seeded random instances.
//!
//! Identity checks report residuals normalized by `max(1, ‖f‖²)` (operator
//! identities by the operator scale, reconstructions relative to `‖f‖`).
//! Inequality checks report margins normalized by `‖S_Λ‖` (and by `‖f‖²`
//! for pointwise bounds), so a check passes iff every residual is at most
//! `tol_residual` and every margin is at least `-tol_margin`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gen::{self, FrameRng, GenError, GenSpec};
use crate::gframe::{FrameError, GFrame};
use crate::gfusion::GFusionFrame;
use crate::index::IndexSubset;
use crate::linops::{
    hermitian_eig, lemma_l0_residual, loewner_check, norm_sq, quad_bound, Field, LinTol,
    LinopsError, Operator, Power, Vector,
};

/// Environment variable overriding the default tolerances.
pub const TOLERANCE_ENV: &str = "FRAMEKIT_TOLERANCE";

/// Witnesses kept per check in a report; the full count is reported separately.
pub const MAX_WITNESSES: usize = 16;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("{check} cannot run on this frame: {reason}")]
    WrongFrameKind { check: CheckId, reason: String },
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl From<LinopsError> for VerifyError {
    fn from(e: LinopsError) -> Self {
        VerifyError::Frame(e.into())
    }
}

pub type Result<T> = std::result::Result<T, VerifyError>;

macro_rules! check_ids {
    ($($variant:ident => $name:literal),+ $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum CheckId {
            $(#[serde(rename = $name)] $variant),+
        }

        impl CheckId {
            pub const ALL: &'static [CheckId] = &[$(CheckId::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(CheckId::$variant => $name),+
                }
            }
        }

        impl FromStr for CheckId {
            type Err = VerifyError;

            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(CheckId::$variant),)+
                    other => Err(VerifyError::Config(format!("unknown check id `{other}`"))),
                }
            }
        }
    };
}

check_ids! {
    ThmT1 => "THM_T1",
    FamousParseval => "FAMOUS_PARSEVAL",
    ThmTg1 => "THM_TG1",
    Cor1Identity => "COR1_IDENTITY",
    Cor1ThreeQuarterBound => "COR1_34BOUND",
    Cor2Sandwich => "COR2_SANDWICH",
    ThmT33 => "THM_T33",
    Cor3Sandwich => "COR3_SANDWICH",
    Cor34SInv => "COR_34_SINV",
    Thm38I => "THM38_I",
    Thm38II => "THM38_II",
    Cor39Plus => "COR39_PLUS",
    Cor39MinusProbe => "COR39_MINUS_PROBE",
    Eq4Recon => "EQ4_RECON",
    Eq5DualRecon => "EQ5_DUAL_RECON",
    Eq6QuadForm => "EQ6_QUADFORM",
    SpectrumRemark => "SPECTRUM_REMARK",
    LemmaL0 => "LEMMA_L0",
    LemmaL2 => "LEMMA_L2",
    ThmFinalMi => "THM_FINAL_MI",
}

/// Which kind of frame a check consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    GFrame,
    GFusion,
}

impl CheckId {
    pub fn target(self) -> Target {
        match self {
            CheckId::ThmT1 | CheckId::FamousParseval | CheckId::LemmaL2 => Target::GFrame,
            _ => Target::GFusion,
        }
    }

    pub fn parseval_only(self) -> bool {
        matches!(
            self,
            CheckId::FamousParseval
                | CheckId::Cor1Identity
                | CheckId::Cor1ThreeQuarterBound
                | CheckId::Cor2Sandwich
                | CheckId::Thm38I
                | CheckId::Thm38II
                | CheckId::SpectrumRemark
        )
    }

    /// Probes record counterexamples and never affect the overall verdict.
    pub fn is_probe(self) -> bool {
        self == CheckId::Cor39MinusProbe
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tol_residual: f64,
    pub tol_margin: f64,
    pub lin: LinTol,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            tol_residual: 1e-8,
            tol_margin: 1e-8,
            lin: LinTol::default(),
        }
    }
}

impl Tolerances {
    /// Applies an override string: either one number (both check
    /// tolerances) or `key=value` pairs separated by commas, with keys
    /// `tol_residual`, `tol_margin`, `rtol`, `htol`, `pdtol`, `rktol`.
    pub fn with_overrides(mut self, spec: &str) -> Result<Self> {
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s
                .trim()
                .parse()
                .map_err(|_| VerifyError::Config(format!("`{s}` is not a number")))?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(VerifyError::Config(format!("tolerance {v} must be finite and >= 0")));
            }
            Ok(v)
        };
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(self);
        }
        if !spec.contains('=') {
            let v = parse(spec)?;
            self.tol_residual = v;
            self.tol_margin = v;
            return Ok(self);
        }
        for pair in spec.split(',') {
            let (key, value) = pair
                .split_once('=')
                .ok_or_else(|| VerifyError::Config(format!("expected key=value, got `{pair}`")))?;
            let v = parse(value)?;
            match key.trim() {
                "tol_residual" => self.tol_residual = v,
                "tol_margin" => self.tol_margin = v,
                "rtol" => self.lin.rtol = v,
                "htol" => self.lin.htol = v,
                "pdtol" => self.lin.pdtol = v,
                "rktol" => self.lin.rktol = v,
                other => {
                    return Err(VerifyError::Config(format!("unknown tolerance `{other}`")))
                }
            }
        }
        Ok(self)
    }

    /// Defaults overridden by `FRAMEKIT_TOLERANCE` when it is set.
    pub fn from_env() -> Result<Self> {
        match std::env::var(TOLERANCE_ENV) {
            Ok(v) => Tolerances::default().with_overrides(&v),
            Err(_) => Ok(Tolerances::default()),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all = [
            self.tol_residual,
            self.tol_margin,
            self.lin.rtol,
            self.lin.htol,
            self.lin.pdtol,
            self.lin.rktol,
        ];
        if all.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(VerifyError::Config(
                "tolerances must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Data needed to reproduce a failing (or probe-violating) evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// Generator seed of the instance; absent for frames loaded from files.
    pub seed: Option<u64>,
    pub dim_h: usize,
    pub field: Field,
    pub subset: IndexSubset,
    /// Sample vector as [re, im] pairs, for pointwise checks.
    pub vector: Option<Vec<[f64; 2]>>,
    /// The offending normalized residual or margin.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: CheckId,
    pub residuals: Vec<f64>,
    pub margins: Vec<f64>,
    pub pass: bool,
    pub witness: Option<Witness>,
    /// Largest spectral radius seen (SPECTRUM_REMARK only).
    pub observed: Option<f64>,
}

impl CheckResult {
    pub fn max_residual(&self) -> Option<f64> {
        self.residuals.iter().copied().reduce(f64::max)
    }

    pub fn min_margin(&self) -> Option<f64> {
        self.margins.iter().copied().reduce(f64::min)
    }
}

/// Frame handed to [`run_check`].
#[derive(Debug, Clone, Copy)]
pub enum FrameRef<'a> {
    GFrame(&'a GFrame),
    GFusion(&'a GFusionFrame),
}

impl FrameRef<'_> {
    fn dim_h(&self) -> usize {
        match self {
            FrameRef::GFrame(g) => g.dim_h(),
            FrameRef::GFusion(f) => f.dim_h(),
        }
    }

    fn field(&self) -> Field {
        match self {
            FrameRef::GFrame(g) => g.field(),
            FrameRef::GFusion(f) => f.field(),
        }
    }

    fn is_parseval(&self) -> bool {
        match self {
            FrameRef::GFrame(g) => g.is_parseval(),
            FrameRef::GFusion(f) => f.is_parseval(),
        }
    }
}

fn vector_pairs(f: &Vector) -> Vec<[f64; 2]> {
    f.iter().map(|z| [z.re, z.im]).collect()
}

struct Acc<'t> {
    id: CheckId,
    tol: &'t Tolerances,
    dim_h: usize,
    field: Field,
    residuals: Vec<f64>,
    margins: Vec<f64>,
    witness: Option<Witness>,
    worst: f64,
    observed: Option<f64>,
}

impl<'t> Acc<'t> {
    fn new(id: CheckId, frame: FrameRef<'_>, tol: &'t Tolerances) -> Self {
        Acc {
            id,
            tol,
            dim_h: frame.dim_h(),
            field: frame.field(),
            residuals: Vec::new(),
            margins: Vec::new(),
            witness: None,
            worst: 0.0,
            observed: None,
        }
    }

    fn note(&mut self, excess: f64, value: f64, subset: &IndexSubset, f: Option<&Vector>) {
        if excess > self.worst || (excess.is_nan() && self.witness.is_none()) {
            self.worst = excess;
            self.witness = Some(Witness {
                seed: None,
                dim_h: self.dim_h,
                field: self.field,
                subset: subset.clone(),
                vector: f.map(vector_pairs),
                value,
            });
        }
    }

    // Negated comparisons so that NaN counts as a failure.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn residual(&mut self, r: f64, subset: &IndexSubset, f: Option<&Vector>) {
        self.residuals.push(r);
        if !(r <= self.tol.tol_residual) {
            self.note(r - self.tol.tol_residual, r, subset, f);
        }
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn margin(&mut self, m: f64, subset: &IndexSubset, f: Option<&Vector>) {
        self.margins.push(m);
        if !(m >= -self.tol.tol_margin) {
            self.note(-self.tol.tol_margin - m, m, subset, f);
        }
    }

    fn finish(self) -> CheckResult {
        let pass = self.residuals.iter().all(|&r| r <= self.tol.tol_residual)
            && self.margins.iter().all(|&m| m >= -self.tol.tol_margin);
        CheckResult {
            id: self.id,
            residuals: self.residuals,
            margins: self.margins,
            pass,
            witness: self.witness,
            observed: self.observed,
        }
    }
}

fn unit_scale(f: &Vector) -> f64 {
    norm_sq(f).max(1.0)
}

fn relative_error(approx: &Vector, f: &Vector) -> f64 {
    let nf = f.norm();
    let err = (approx - f).norm();
    if nf > 0.0 {
        err / nf
    } else {
        err
    }
}

/// Σ_{j∈I} v_j² ‖Λ_j π_{W_j} f‖².
fn weighted_energy(frame: &GFusionFrame, i: &IndexSubset, f: &Vector) -> Result<f64> {
    i.members()
        .iter()
        .map(|&j| {
            let c = &frame.components()[j];
            Ok(c.weight() * c.weight() * norm_sq(&c.lambda_pi().apply(f)?))
        })
        .sum()
}

fn require_gfusion(id: CheckId, frame: FrameRef<'_>) -> Result<&GFusionFrame> {
    match frame {
        FrameRef::GFusion(f) => Ok(f),
        FrameRef::GFrame(_) => Err(VerifyError::WrongFrameKind {
            check: id,
            reason: "requires a g-fusion frame".into(),
        }),
    }
}

fn require_gframe(id: CheckId, frame: FrameRef<'_>) -> Result<&GFrame> {
    match frame {
        FrameRef::GFrame(g) => Ok(g),
        FrameRef::GFusion(_) => Err(VerifyError::WrongFrameKind {
            check: id,
            reason: "requires a g-frame".into(),
        }),
    }
}

/// Runs one catalog check over every subset and sample vector.
pub fn run_check(
    id: CheckId,
    frame: FrameRef<'_>,
    subsets: &[IndexSubset],
    fs: &[Vector],
    tol: &Tolerances,
) -> Result<CheckResult> {
    if id.parseval_only() && !frame.is_parseval() {
        return Err(VerifyError::WrongFrameKind {
            check: id,
            reason: "requires a Parseval frame".into(),
        });
    }
    let mut acc = Acc::new(id, frame, tol);
    match id.target() {
        Target::GFrame => run_gframe_check(&mut acc, require_gframe(id, frame)?, subsets, fs)?,
        Target::GFusion => run_gfusion_check(&mut acc, require_gfusion(id, frame)?, subsets, fs)?,
    }
    Ok(acc.finish())
}

fn run_gframe_check(
    acc: &mut Acc<'_>,
    g: &GFrame,
    subsets: &[IndexSubset],
    fs: &[Vector],
) -> Result<()> {
    match acc.id {
        CheckId::ThmT1 => {
            for i in subsets {
                for f in fs {
                    let ev = g.thm_t1(i, f)?;
                    let scale = unit_scale(f);
                    acc.residual(ev.residual / scale, i, Some(f));
                    acc.residual((ev.lhs - ev.rhs).im.abs() / scale, i, Some(f));
                }
            }
        }
        CheckId::FamousParseval => {
            for i in subsets {
                for f in fs {
                    let ev = g.thm_t1(i, f)?;
                    let (lhs, rhs) = ev.parseval.expect("frame is Parseval");
                    acc.residual((lhs - rhs).abs() / unit_scale(f), i, Some(f));
                }
            }
        }
        CheckId::LemmaL2 => {
            let id = Operator::identity(g.field(), g.dim_h());
            for i in subsets {
                let u = g.partial_sum(i)?;
                let v = &id - &u;
                let lhs = &u - &v;
                let rhs = &(&u * &u) - &(&v * &v);
                let scale = u.norm().powi(2).max(1.0);
                acc.residual((&lhs - &rhs).norm() / scale, i, None);
            }
        }
        other => unreachable!("{other} is not a g-frame check"),
    }
    Ok(())
}

fn run_gfusion_check(
    acc: &mut Acc<'_>,
    frame: &GFusionFrame,
    subsets: &[IndexSubset],
    fs: &[Vector],
) -> Result<()> {
    let n = frame.len();
    let lin = *frame.tol();
    let tol_margin = acc.tol.tol_margin;
    let s = frame.frame_operator();
    let s_norm = s.norm();
    let s_inv = frame.frame_operator_inverse()?.clone();
    let field = frame.field();
    let dim = frame.dim_h();
    let id_op = Operator::identity(field, dim);
    let zero = Operator::zeros(field, dim, dim);
    let everything = IndexSubset::full(n);
    match acc.id {
        CheckId::ThmTg1 => {
            let dual = frame.canonical_dual()?;
            for i in subsets {
                for f in fs {
                    let ev = frame.thm_tg1(&dual, i, f)?;
                    let scale = unit_scale(f);
                    acc.residual(ev.residual / scale, i, Some(f));
                    acc.residual((ev.lhs - ev.rhs).im.abs() / scale, i, Some(f));
                }
            }
        }
        CheckId::Cor1Identity => {
            for i in subsets {
                let ic = i.complement(n);
                let (m_i, m_ic) = (frame.m_partial(i)?, frame.m_partial(&ic)?);
                for f in fs {
                    let lhs = weighted_energy(frame, i, f)? - norm_sq(&m_i.apply(f)?);
                    let rhs = weighted_energy(frame, &ic, f)? - norm_sq(&m_ic.apply(f)?);
                    acc.residual((lhs - rhs).abs() / unit_scale(f), i, Some(f));
                }
            }
        }
        CheckId::Cor1ThreeQuarterBound => {
            let bound = quad_bound(1.0, -1.0, 1.0)?;
            for i in subsets {
                let m_ic = frame.m_partial(&i.complement(n))?;
                for f in fs {
                    let lhs = weighted_energy(frame, i, f)? + norm_sq(&m_ic.apply(f)?);
                    let margin = lhs - bound * norm_sq(f);
                    acc.margin(margin / (s_norm * unit_scale(f)), i, Some(f));
                }
            }
        }
        CheckId::Cor2Sandwich => {
            // u - u² has a = -1, b = 1, c = 0.
            let upper = id_op.scale(quad_bound(-1.0, 1.0, 0.0)?);
            let dual = frame.canonical_dual()?;
            for i in subsets {
                let s_i = frame.s_partial(&dual, i)?.hermitian_part();
                let t = &s_i - &(&s_i * &s_i);
                let m = loewner_check(&t, &zero, &upper, tol_margin, &lin)?;
                acc.margin(m.lower_margin / s_norm, i, None);
                acc.margin(m.upper_margin / s_norm, i, None);
            }
        }
        CheckId::Thm38I => {
            let upper = id_op.scale(quad_bound(-1.0, 1.0, 0.0)?);
            let dual = frame.canonical_dual()?;
            for i in subsets {
                let s_i = frame.s_partial(&dual, i)?.hermitian_part();
                let s_ic = frame.s_partial(&dual, &i.complement(n))?.hermitian_part();
                let prod = &s_i * &s_ic;
                let scale = s_i.norm().max(s_ic.norm()).powi(2).max(1.0);
                acc.residual((&prod - &(&s_ic * &s_i)).norm() / scale, i, None);
                acc.residual((&prod - &(&s_i - &(&s_i * &s_i))).norm() / scale, i, None);
                let m = loewner_check(&prod.hermitian_part(), &zero, &upper, tol_margin, &lin)?;
                acc.margin(m.lower_margin / s_norm, i, None);
                acc.margin(m.upper_margin / s_norm, i, None);
            }
        }
        CheckId::Thm38II => {
            let lower = id_op.scale(quad_bound(2.0, -2.0, 1.0)?);
            let upper = id_op.scale(1.5);
            let dual = frame.canonical_dual()?;
            for i in subsets {
                let s_i = frame.s_partial(&dual, i)?.hermitian_part();
                let s_ic = frame.s_partial(&dual, &i.complement(n))?.hermitian_part();
                let t = &(&s_i * &s_i) + &(&s_ic * &s_ic);
                let m = loewner_check(&t, &lower, &upper, tol_margin, &lin)?;
                acc.margin(m.lower_margin / s_norm, i, None);
                acc.margin(m.upper_margin / s_norm, i, None);
            }
        }
        CheckId::SpectrumRemark => {
            let dual = frame.canonical_dual()?;
            let mut radius: f64 = 0.0;
            for i in subsets {
                let s_i = frame.s_partial(&dual, i)?.hermitian_part();
                let eig = hermitian_eig(&s_i, &lin)?;
                radius = radius.max(eig.min().abs()).max(eig.max().abs());
                acc.margin(eig.min(), i, None);
                acc.margin(1.0 - eig.max(), i, None);
            }
            acc.observed = Some(radius);
        }
        CheckId::ThmT33 => {
            let root = frame.frame_operator_power(Power::InvSqrt)?;
            for i in subsets {
                let ic = i.complement(n);
                let (m_i, m_ic) = (frame.m_partial(i)?, frame.m_partial(&ic)?);
                for f in fs {
                    let lhs = weighted_energy(frame, i, f)? + norm_sq(&root.apply(&m_ic.apply(f)?)?);
                    let rhs = weighted_energy(frame, &ic, f)? + norm_sq(&root.apply(&m_i.apply(f)?)?);
                    acc.residual((lhs - rhs).abs() / unit_scale(f), i, Some(f));
                }
            }
        }
        CheckId::Cor3Sandwich => {
            let upper = s.scale(quad_bound(-1.0, 1.0, 0.0)?);
            for i in subsets {
                let m_i = frame.m_partial(i)?;
                let t = &m_i - &(&(&m_i * &s_inv) * &m_i);
                let m = loewner_check(&t, &zero, &upper, tol_margin, &lin)?;
                acc.margin(m.lower_margin / s_norm, i, None);
                acc.margin(m.upper_margin / s_norm, i, None);
            }
        }
        CheckId::Cor34SInv => {
            let root = frame.frame_operator_power(Power::InvSqrt)?;
            let lower = quad_bound(1.0, -1.0, 1.0)? / s_inv.norm();
            for i in subsets {
                let m_ic = frame.m_partial(&i.complement(n))?;
                for f in fs {
                    let lhs = weighted_energy(frame, i, f)? + norm_sq(&root.apply(&m_ic.apply(f)?)?);
                    let margin = lhs - lower * norm_sq(f);
                    acc.margin(margin / (s_norm * unit_scale(f)), i, Some(f));
                }
            }
        }
        CheckId::Cor39Plus | CheckId::Cor39MinusProbe => {
            let lower = s.scale(quad_bound(2.0, -2.0, 1.0)?);
            let upper = s.scale(1.5);
            for i in subsets {
                let m_i = frame.m_partial(i)?;
                let m_ic = frame.m_partial(&i.complement(n))?;
                let a = &(&m_i * &s_inv) * &m_i;
                let b = &(&m_ic * &s_inv) * &m_ic;
                let t = if acc.id == CheckId::Cor39Plus { &a + &b } else { &a - &b };
                let m = loewner_check(&t, &lower, &upper, tol_margin, &lin)?;
                acc.margin(m.lower_margin / s_norm, i, None);
                acc.margin(m.upper_margin / s_norm, i, None);
            }
        }
        CheckId::Eq4Recon => {
            for f in fs {
                for r in frame.reconstruct(f)? {
                    acc.residual(relative_error(&r, f), &everything, Some(f));
                }
            }
        }
        CheckId::Eq5DualRecon => {
            let dual = frame.canonical_dual()?;
            for f in fs {
                for r in frame.dual_reconstruct(&dual, f)? {
                    acc.residual(relative_error(&r, f), &everything, Some(f));
                }
            }
        }
        CheckId::Eq6QuadForm => {
            let dual = frame.canonical_dual()?;
            for f in fs {
                let r = frame.inverse_quadratic_residual(&dual, f)?;
                let nf = norm_sq(f);
                acc.residual(if nf > 0.0 { r / nf } else { r }, &everything, Some(f));
            }
        }
        CheckId::LemmaL0 => {
            let root = frame.frame_operator_power(Power::InvSqrt)?;
            let dual = frame.canonical_dual()?;
            for (j, (c, d)) in frame.components().iter().zip(dual.components()).enumerate() {
                let single = IndexSubset::new(vec![j]);
                for t in [&s_inv, &root] {
                    let r = lemma_l0_residual(c.basis(), t, &lin)?;
                    acc.residual(r / t.norm(), &single, None);
                }
                // π_{W̃_j} S⁻¹ π_{W_j} = S⁻¹ π_{W_j}
                let rhs = &s_inv * c.projection();
                let lhs = d.projection() * &rhs;
                acc.residual((&lhs - &rhs).norm() / s_inv.norm(), &single, None);
            }
        }
        CheckId::ThmFinalMi => {
            let dual = frame.canonical_dual()?;
            let dual_energy = |g: &Vector| -> Result<f64> {
                dual.components()
                    .iter()
                    .map(|d| Ok(d.weight() * d.weight() * norm_sq(&d.lambda_pi().apply(g)?)))
                    .sum()
            };
            for i in subsets {
                let ic = i.complement(n);
                let (m_i, m_ic) = (frame.m_partial(i)?, frame.m_partial(&ic)?);
                for f in fs {
                    let lhs = weighted_energy(frame, i, f)? - dual_energy(&m_i.apply(f)?)?;
                    let rhs = weighted_energy(frame, &ic, f)? - dual_energy(&m_ic.apply(f)?)?;
                    acc.residual((lhs - rhs).abs() / unit_scale(f), i, Some(f));
                }
            }
        }
        other => unreachable!("{other} is not a g-fusion check"),
    }
    Ok(())
}

/// Configuration of a verification run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuitePlan {
    pub dims: Vec<usize>,
    pub fields: Vec<Field>,
    /// Number of seeds per (dimension, field); instance seeds are
    /// `base_seed..base_seed + seeds`.
    pub seeds: u64,
    pub base_seed: u64,
    pub components: usize,
    pub vectors: usize,
    /// Enumerate all subsets up to this many components, otherwise sample.
    pub max_exhaustive: usize,
    pub subset_sample: usize,
    pub checks: Vec<CheckId>,
    pub tolerances: Tolerances,
}

impl Default for SuitePlan {
    fn default() -> Self {
        SuitePlan {
            dims: vec![2, 3, 5, 8],
            fields: vec![Field::Real, Field::Complex],
            seeds: 10,
            base_seed: 0,
            components: 4,
            vectors: 8,
            max_exhaustive: 12,
            subset_sample: 256,
            checks: CheckId::ALL.to_vec(),
            tolerances: Tolerances::default(),
        }
    }
}

impl SuitePlan {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(VerifyError::Config("dimensions must be a nonempty list of positive integers".into()));
        }
        if self.fields.is_empty() {
            return Err(VerifyError::Config("at least one field is required".into()));
        }
        if self.seeds == 0 {
            return Err(VerifyError::Config("seed count must be positive".into()));
        }
        if self.components == 0 {
            return Err(VerifyError::Config("component count must be positive".into()));
        }
        if self.vectors == 0 {
            return Err(VerifyError::Config("at least one sample vector is required".into()));
        }
        if self.checks.is_empty() {
            return Err(VerifyError::Config("no checks selected".into()));
        }
        self.tolerances.validate()
    }
}

/// One seeded instance: generic and Parseval versions of a g-frame and a
/// g-fusion frame, plus the subsets and sample vectors checks run over.
#[derive(Debug, Clone)]
pub struct Instance {
    pub seed: u64,
    pub dim_h: usize,
    pub field: Field,
    pub gframe: GFrame,
    pub parseval_gframe: GFrame,
    pub gfusion: GFusionFrame,
    pub parseval_gfusion: GFusionFrame,
    pub subsets: Vec<IndexSubset>,
    pub vectors: Vec<Vector>,
}

/// Generator streams for sample vectors and sampled subsets; construction
/// attempts use streams below `MAX_ATTEMPTS`.
pub const VECTOR_STREAM: u64 = 1 << 32;
pub const SUBSET_STREAM: u64 = (1 << 32) + 1;

impl Instance {
    pub fn generate(dim_h: usize, field: Field, seed: u64, plan: &SuitePlan) -> Result<Self> {
        let lin = plan.tolerances.lin;
        let spec = GenSpec::standard(dim_h, plan.components, field, seed);
        let mut vrng = FrameRng::new(seed, VECTOR_STREAM);
        let vectors = (0..plan.vectors)
            .map(|_| vrng.gaussian_vector(field, dim_h))
            .collect();
        let mut srng = FrameRng::new(seed, SUBSET_STREAM);
        let subsets = IndexSubset::enumerate(
            plan.components,
            plan.max_exhaustive,
            plan.subset_sample,
            srng.rng(),
        );
        Ok(Instance {
            seed,
            dim_h,
            field,
            gframe: gen::random_gframe(&spec, &lin)?,
            parseval_gframe: gen::random_parseval_gframe(&spec, &lin)?,
            gfusion: gen::random_gfusion(&spec, &lin)?,
            parseval_gfusion: gen::random_parseval_gfusion(&spec, &lin)?,
            subsets,
            vectors,
        })
    }

    /// The frame a check is routed to.
    pub fn frame_for(&self, id: CheckId) -> FrameRef<'_> {
        match (id.target(), id.parseval_only()) {
            (Target::GFrame, false) => FrameRef::GFrame(&self.gframe),
            (Target::GFrame, true) => FrameRef::GFrame(&self.parseval_gframe),
            (Target::GFusion, false) => FrameRef::GFusion(&self.gfusion),
            (Target::GFusion, true) => FrameRef::GFusion(&self.parseval_gfusion),
        }
    }

    pub fn run(&self, checks: &[CheckId], tol: &Tolerances) -> Result<Vec<CheckResult>> {
        checks
            .iter()
            .map(|&id| {
                let mut r = run_check(id, self.frame_for(id), &self.subsets, &self.vectors, tol)?;
                if let Some(w) = r.witness.as_mut() {
                    w.seed = Some(self.seed);
                }
                Ok(r)
            })
            .collect()
    }
}

/// Aggregate of one check over all instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub id: CheckId,
    pub probe: bool,
    pub instances: usize,
    pub max_residual: Option<f64>,
    pub min_margin: Option<f64>,
    pub pass: bool,
    pub witness_count: usize,
    pub witnesses: Vec<Witness>,
    pub max_observed: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub format_version: u32,
    pub plan: SuitePlan,
    /// Frame file the checks ran on, when not generated from the plan.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame: Option<String>,
    pub checks: Vec<CheckSummary>,
    pub pass: bool,
    pub wall_time_s: f64,
}

pub const REPORT_FORMAT_VERSION: u32 = 1;

fn fold_opt(acc: Option<f64>, v: Option<f64>, f: fn(f64, f64) -> f64) -> Option<f64> {
    match (acc, v) {
        (Some(a), Some(b)) => Some(f(a, b)),
        (a, b) => a.or(b),
    }
}

/// Aggregates per-instance results; `results` must already be in a
/// deterministic order.
pub fn summarize(checks: &[CheckId], results: &[(u64, CheckResult)]) -> Vec<CheckSummary> {
    let mut by_id: BTreeMap<CheckId, CheckSummary> = checks
        .iter()
        .map(|&id| {
            (
                id,
                CheckSummary {
                    id,
                    probe: id.is_probe(),
                    instances: 0,
                    max_residual: None,
                    min_margin: None,
                    pass: true,
                    witness_count: 0,
                    witnesses: Vec::new(),
                    max_observed: None,
                },
            )
        })
        .collect();
    for (_, r) in results {
        let s = by_id.get_mut(&r.id).expect("result for a selected check");
        s.instances += 1;
        s.max_residual = fold_opt(s.max_residual, r.max_residual(), f64::max);
        s.min_margin = fold_opt(s.min_margin, r.min_margin(), f64::min);
        s.max_observed = fold_opt(s.max_observed, r.observed, f64::max);
        s.pass &= r.pass;
        if let Some(w) = &r.witness {
            s.witness_count += 1;
            if s.witnesses.len() < MAX_WITNESSES {
                s.witnesses.push(w.clone());
            }
        }
    }
    by_id.into_values().collect()
}

/// Overall verdict: every non-probe check passed.
pub fn verdict(summaries: &[CheckSummary]) -> bool {
    summaries.iter().filter(|s| !s.probe).all(|s| s.pass)
}

/// Generates every instance of the plan and runs the selected checks.
pub fn run_suite(plan: &SuitePlan) -> Result<RunReport> {
    plan.validate()?;
    let start = Instant::now();
    let mut keys = Vec::new();
    for &dim in &plan.dims {
        for &field in &plan.fields {
            for k in 0..plan.seeds {
                keys.push((dim, field, plan.base_seed + k));
            }
        }
    }
    let per_instance = keys
        .par_iter()
        .map(|&(dim, field, seed)| {
            let inst = Instance::generate(dim, field, seed, plan)?;
            Ok(((dim, field, seed), inst.run(&plan.checks, &plan.tolerances)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut flat: Vec<((CheckId, u64, usize, Field), CheckResult)> = per_instance
        .into_iter()
        .flat_map(|((dim, field, seed), results)| {
            results
                .into_iter()
                .map(move |r| ((r.id, seed, dim, field), r))
        })
        .collect();
    flat.sort_by_key(|e| e.0);
    let ordered: Vec<(u64, CheckResult)> = flat.into_iter().map(|(k, r)| (k.1, r)).collect();
    let checks = summarize(&plan.checks, &ordered);
    Ok(RunReport {
        format_version: REPORT_FORMAT_VERSION,
        plan: plan.clone(),
        frame: None,
        pass: verdict(&checks),
        checks,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Runs checks on one frame loaded from disk. A g-frame also serves the
/// g-fusion checks through its (W_j = H, v_j = 1) embedding. Checks that
/// do not apply to the frame are skipped when `skip_inapplicable` is set
/// and are configuration errors otherwise.
pub fn run_on_frame(
    frame: &LoadedFrame,
    checks: &[CheckId],
    subsets: &[IndexSubset],
    fs: &[Vector],
    tol: &Tolerances,
    skip_inapplicable: bool,
) -> Result<Vec<CheckResult>> {
    let embedded = match frame {
        LoadedFrame::GFrame(g) => Some(g.to_gfusion()?),
        LoadedFrame::GFusion(_) => None,
    };
    let mut out = Vec::new();
    for &id in checks {
        let target = match (id.target(), frame) {
            (Target::GFrame, LoadedFrame::GFrame(g)) => Some(FrameRef::GFrame(g)),
            (Target::GFrame, LoadedFrame::GFusion(_)) => None,
            (Target::GFusion, LoadedFrame::GFusion(f)) => Some(FrameRef::GFusion(f)),
            (Target::GFusion, LoadedFrame::GFrame(_)) => embedded.as_ref().map(FrameRef::GFusion),
        };
        let applicable = target.filter(|t| !id.parseval_only() || t.is_parseval());
        match applicable {
            Some(t) => out.push(run_check(id, t, subsets, fs, tol)?),
            None if skip_inapplicable => {}
            None => {
                return Err(VerifyError::WrongFrameKind {
                    check: id,
                    reason: "not applicable to the loaded frame".into(),
                })
            }
        }
    }
    Ok(out)
}

/// A frame of either kind, as read from a frame file.
#[derive(Debug, Clone)]
pub enum LoadedFrame {
    GFrame(GFrame),
    GFusion(GFusionFrame),
}

impl LoadedFrame {
    pub fn dim_h(&self) -> usize {
        match self {
            LoadedFrame::GFrame(g) => g.dim_h(),
            LoadedFrame::GFusion(f) => f.dim_h(),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            LoadedFrame::GFrame(g) => g.field(),
            LoadedFrame::GFusion(f) => f.field(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            LoadedFrame::GFrame(g) => g.len(),
            LoadedFrame::GFusion(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_gfusion(&self) -> Result<GFusionFrame> {
        match self {
            LoadedFrame::GFrame(g) => Ok(g.to_gfusion()?),
            LoadedFrame::GFusion(f) => Ok(f.clone()),
        }
    }
}
