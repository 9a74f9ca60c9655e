//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Every criterion is evaluated twice: through the library's check catalog
//! and through the dense reference computations in `common`. Both must meet
//! the stated bound.

mod common;

use std::process::{Command, ExitCode};

use common::*;
use framekit::framefile::FrameFile;
use framekit::gen::{self, FrameRng, GenSpec};
use framekit::linops::{lemma_l0_residual, quad_bound, Field, LinTol, Operator};
use framekit::verify::{
    run_check, run_suite, CheckId, FrameRef, Instance, LoadedFrame, SuitePlan, Tolerances,
};

struct Verdict {
    pass: bool,
    detail: String,
}

/// Running maximum of a family of normalized errors against one bound.
struct Bound {
    label: &'static str,
    limit: f64,
    worst: f64,
}

impl Bound {
    fn new(label: &'static str, limit: f64) -> Self {
        Bound {
            label,
            limit,
            worst: 0.0,
        }
    }

    fn see(&mut self, x: f64) {
        if x.is_nan() || x > self.worst {
            self.worst = if x.is_nan() { f64::INFINITY } else { x };
        }
    }

    fn ok(&self) -> bool {
        self.worst <= self.limit
    }

    fn describe(&self) -> String {
        format!("{} {:.2e} (limit {:.0e})", self.label, self.worst, self.limit)
    }
}

fn combine(bounds: &[&Bound], library: &[(CheckId, bool)], extra: &[(String, bool)]) -> Verdict {
    let mut pass = bounds.iter().all(|b| b.ok());
    let mut parts: Vec<String> = bounds.iter().map(|b| b.describe()).collect();
    let failing: Vec<&str> = library
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(id, _)| id.as_str())
        .collect();
    pass &= failing.is_empty();
    if !failing.is_empty() {
        parts.push(format!("library checks failing: {}", failing.join(" ")));
    }
    for (msg, ok) in extra {
        pass &= ok;
        parts.push(msg.clone());
    }
    Verdict {
        pass,
        detail: parts.join("; "),
    }
}

fn tol(residual: f64, margin: f64) -> Tolerances {
    Tolerances {
        tol_residual: residual,
        tol_margin: margin,
        ..Tolerances::default()
    }
}

/// Runs a catalog check on an instance's routed frame and records the verdict.
fn library(
    acc: &mut Vec<(CheckId, bool)>,
    inst: &Instance,
    id: CheckId,
    frame: FrameRef<'_>,
    t: &Tolerances,
) {
    let r = run_check(id, frame, &inst.subsets, &inst.vectors, t).expect("check runs");
    match acc.iter_mut().find(|(k, _)| *k == id) {
        Some(entry) => entry.1 &= r.pass,
        None => acc.push((id, r.pass)),
    }
}

fn g_partial_sum_identity(grid: &[Instance]) -> Verdict {
    let mut res = Bound::new("max |lhs-rhs|/max(1,|f|^2)", 1e-8);
    let mut imag = Bound::new("max |Im(lhs-rhs)|/max(1,|f|^2)", 1e-8);
    let mut lib = Vec::new();
    let t = tol(1e-8, 1e-8);
    for inst in grid {
        for g in [&inst.gframe, &inst.parseval_gframe] {
            let o = GFrameOracle::new(g);
            let n = g.len();
            for i in &inst.subsets {
                let ic = i.complement(n);
                let (s_i, s_ic) = (o.s_partial(i), o.s_partial(&ic));
                for f in &inst.vectors {
                    let pair = |j: usize| ip(&(&o.dual[j] * f), &(&o.blocks[j] * f));
                    let lhs: num_complex::Complex64 =
                        i.members().iter().map(|&j| pair(j)).sum::<num_complex::Complex64>()
                            - c((&s_i * f).norm_squared());
                    let rhs: num_complex::Complex64 =
                        ic.members().iter().map(|&j| pair(j).conj()).sum::<num_complex::Complex64>()
                            - c((&s_ic * f).norm_squared());
                    let scale = f.norm_squared().max(1.0);
                    res.see((lhs - rhs).norm() / scale);
                    imag.see((lhs - rhs).im.abs() / scale);
                }
            }
            library(&mut lib, inst, CheckId::ThmT1, FrameRef::GFrame(g), &t);
        }
        library(&mut lib, inst, CheckId::FamousParseval, FrameRef::GFrame(&inst.parseval_gframe), &t);
    }
    combine(&[&res, &imag], &lib, &[])
}

fn gfusion_partial_sum_identities(grid: &[Instance]) -> Verdict {
    let mut tg = Bound::new("dual-pairing identity max residual", 1e-8);
    let mut tg_im = Bound::new("its max imaginary part", 1e-8);
    let mut mi = Bound::new("M_I identity max residual", 1e-8);
    let mut lib = Vec::new();
    let t = tol(1e-8, 1e-8);
    for inst in grid {
        for fr in [&inst.gfusion, &inst.parseval_gfusion] {
            let o = FusionOracle::new(fr);
            let n = fr.len();
            for i in &inst.subsets {
                let ic = i.complement(n);
                let (s_i, s_ic) = (o.s_partial(i), o.s_partial(&ic));
                let (m_i, m_ic) = (o.m_partial(i), o.m_partial(&ic));
                for f in &inst.vectors {
                    let pair = |j: usize| {
                        ip(&(&o.dual_lambda_pi[j] * f), &(&o.lambda_pi[j] * f)) * c(o.weights[j].powi(2))
                    };
                    let lhs = i.members().iter().map(|&j| pair(j)).sum::<num_complex::Complex64>()
                        - c((&s_i * f).norm_squared());
                    let rhs = ic.members().iter().map(|&j| pair(j).conj()).sum::<num_complex::Complex64>()
                        - c((&s_ic * f).norm_squared());
                    let scale = f.norm_squared().max(1.0);
                    tg.see((lhs - rhs).norm() / scale);
                    tg_im.see((lhs - rhs).im.abs() / scale);
                    let l = o.energy(i, f) - o.dual_energy(&(&m_i * f));
                    let r = o.energy(&ic, f) - o.dual_energy(&(&m_ic * f));
                    mi.see((l - r).abs() / scale);
                }
            }
            library(&mut lib, inst, CheckId::ThmTg1, FrameRef::GFusion(fr), &t);
            library(&mut lib, inst, CheckId::ThmFinalMi, FrameRef::GFusion(fr), &t);
        }
    }
    combine(&[&tg, &tg_im, &mi], &lib, &[])
}

fn reconstruction(grid: &[Instance]) -> Verdict {
    let mut g_rec = Bound::new("g-frame dual reconstruction rel err", 1e-9);
    let mut f_rec = Bound::new("frame-operator reconstruction rel err", 1e-9);
    let mut d_rec = Bound::new("dual g-fusion reconstruction rel err", 1e-9);
    let mut quad = Bound::new("inverse quadratic form residual/|f|^2", 1e-8);
    let mut lib = Vec::new();
    let recon_tol = tol(1e-9, 1e-8);
    let quad_tol = tol(1e-8, 1e-8);
    for inst in grid {
        for g in [&inst.gframe, &inst.parseval_gframe] {
            let o = GFrameOracle::new(g);
            for f in &inst.vectors {
                let mut a = V::zeros(o.n);
                let mut b = V::zeros(o.n);
                for (lam, dual) in o.blocks.iter().zip(&o.dual) {
                    a += dual.adjoint() * (lam * f);
                    b += lam.adjoint() * (dual * f);
                }
                g_rec.see((a - f).norm() / f.norm());
                g_rec.see((b - f).norm() / f.norm());
            }
        }
        for fr in [&inst.gfusion, &inst.parseval_gfusion] {
            let o = FusionOracle::new(fr);
            for f in &inst.vectors {
                let mut a = V::zeros(o.n);
                let mut b = V::zeros(o.n);
                let mut d1 = V::zeros(o.n);
                let mut d2 = V::zeros(o.n);
                let g = &o.s_inv * f;
                for j in 0..o.weights.len() {
                    let w2 = c(o.weights[j].powi(2));
                    let (lp, dlp) = (&o.lambda_pi[j], &o.dual_lambda_pi[j]);
                    a += lp.adjoint() * (lp * &g) * w2;
                    b += &o.s_inv * (lp.adjoint() * (lp * f)) * w2;
                    d1 += lp.adjoint() * (dlp * f) * w2;
                    d2 += dlp.adjoint() * (lp * f) * w2;
                }
                let nf = f.norm();
                f_rec.see((a - f).norm() / nf);
                f_rec.see((b - f).norm() / nf);
                d_rec.see((d1 - f).norm() / nf);
                d_rec.see((d2 - f).norm() / nf);
                let lhs = ip(&(&o.s_inv * f), f);
                quad.see((lhs - c(o.dual_energy(f))).norm() / f.norm_squared());
            }
            library(&mut lib, inst, CheckId::Eq4Recon, FrameRef::GFusion(fr), &recon_tol);
            library(&mut lib, inst, CheckId::Eq5DualRecon, FrameRef::GFusion(fr), &recon_tol);
            library(&mut lib, inst, CheckId::Eq6QuadForm, FrameRef::GFusion(fr), &quad_tol);
        }
    }
    combine(&[&g_rec, &f_rec, &d_rec, &quad], &lib, &[])
}

fn parseval_inequalities(grid: &[Instance]) -> Verdict {
    let eps = 1e-8;
    let mut violations = 0usize;
    let mut pointwise = Bound::new("worst pointwise 3/4 deficit/|f|^2", eps);
    let mut lib = Vec::new();
    let t = tol(1e-8, eps);
    for inst in grid {
        let fr = &inst.parseval_gfusion;
        let o = FusionOracle::new(fr);
        let id = M::identity(o.n, o.n);
        for i in &inst.subsets {
            let ic = i.complement(fr.len());
            let s_i = o.s_partial(i);
            let s_ic = o.s_partial(&ic);
            let t1 = &s_i - &s_i * &s_i;
            let t2 = &s_i * &s_i + &s_ic * &s_ic;
            let certs = [
                psd_up_to(&t1, eps),
                psd_up_to(&(&id * c(0.25) - &t1), eps),
                psd_up_to(&(&t2 - &id * c(0.5)), eps),
                psd_up_to(&(&id * c(1.5) - &t2), eps),
            ];
            violations += certs.iter().filter(|ok| !**ok).count();
            let m_ic = o.m_partial(&ic);
            for f in &inst.vectors {
                let lhs = o.energy(i, f) + (&m_ic * f).norm_squared();
                pointwise.see((0.75 * f.norm_squared() - lhs) / f.norm_squared());
            }
        }
        for id in [CheckId::Cor2Sandwich, CheckId::Thm38II, CheckId::Cor1ThreeQuarterBound] {
            library(&mut lib, inst, id, FrameRef::GFusion(fr), &t);
        }
    }
    combine(
        &[&pointwise],
        &lib,
        &[(format!("{violations} failed Cholesky certificates"), violations == 0)],
    )
}

fn general_inequalities(grid: &[Instance]) -> Verdict {
    let mut violations = 0usize;
    let mut t33 = Bound::new("S^{-1/2} norm identity max residual", 1e-8);
    let mut lower = Bound::new("worst lower-bound deficit/(|S| |f|^2)", 1e-8);
    let mut lib = Vec::new();
    let t = tol(1e-8, 1e-8);
    for inst in grid {
        let fr = &inst.gfusion;
        let o = FusionOracle::new(fr);
        let s_norm = hermitian_eigenvalues(&o.s).into_iter().fold(0.0, f64::max);
        let eps = 1e-8 * s_norm;
        let root = psd_map(&o.s, |x| 1.0 / x.sqrt());
        let a_bound = 1.0 / hermitian_eigenvalues(&o.s_inv).into_iter().fold(0.0, f64::max);
        for i in &inst.subsets {
            let ic = i.complement(fr.len());
            let (m_i, m_ic) = (o.m_partial(i), o.m_partial(&ic));
            let d = &m_i - &m_i * &o.s_inv * &m_i;
            if !psd_up_to(&d, eps) {
                violations += 1;
            }
            if !psd_up_to(&(&o.s * c(0.25) - &d), eps) {
                violations += 1;
            }
            for f in &inst.vectors {
                let l = o.energy(i, f) + (&root * (&m_ic * f)).norm_squared();
                let r = o.energy(&ic, f) + (&root * (&m_i * f)).norm_squared();
                t33.see((l - r).abs() / f.norm_squared().max(1.0));
                lower.see((0.75 * a_bound * f.norm_squared() - l) / (s_norm * f.norm_squared()));
            }
        }
        for id in [CheckId::Cor3Sandwich, CheckId::ThmT33, CheckId::Cor34SInv] {
            library(&mut lib, inst, id, FrameRef::GFusion(fr), &t);
        }
    }
    combine(
        &[&t33, &lower],
        &lib,
        &[(format!("{violations} failed Cholesky certificates"), violations == 0)],
    )
}

fn corrected_sandwich(grid: &[Instance]) -> Verdict {
    let mut violations = 0usize;
    let mut empty_subset_violates = true;
    let mut lib = Vec::new();
    let t = tol(1e-8, 1e-8);
    for inst in grid {
        for fr in [&inst.gfusion, &inst.parseval_gfusion] {
            let o = FusionOracle::new(fr);
            let s_norm = hermitian_eigenvalues(&o.s).into_iter().fold(0.0, f64::max);
            let eps = 1e-8 * s_norm;
            for i in &inst.subsets {
                let ic = i.complement(fr.len());
                let (m_i, m_ic) = (o.m_partial(i), o.m_partial(&ic));
                let a = &m_i * &o.s_inv * &m_i;
                let b = &m_ic * &o.s_inv * &m_ic;
                let plus = &a + &b;
                if !psd_up_to(&(&plus - &o.s * c(0.5)), eps) || !psd_up_to(&(&o.s * c(1.5) - &plus), eps) {
                    violations += 1;
                }
                if i.is_empty() {
                    let minus = &a - &b;
                    empty_subset_violates &= !psd_up_to(&(&minus - &o.s * c(0.5)), eps);
                }
            }
            library(&mut lib, inst, CheckId::Cor39Plus, FrameRef::GFusion(fr), &t);
        }
    }
    let report = run_suite(&SuitePlan {
        checks: vec![CheckId::Cor39MinusProbe],
        ..SuitePlan::default()
    })
    .expect("default plan runs");
    let probe = &report.checks[0];
    let has_empty = probe.witnesses.iter().any(|w| w.subset.is_empty());
    combine(
        &[],
        &lib,
        &[
            (format!("{violations} failed certificates for the plus form"), violations == 0),
            (
                format!(
                    "minus form: {} witnesses in the default plan, I = {{}} among them: {has_empty}",
                    probe.witness_count
                ),
                probe.witness_count >= 1 && report.pass,
            ),
            (
                format!("I = {{}} violates the minus form on every instance: {empty_subset_violates}"),
                empty_subset_violates,
            ),
        ],
    )
}

fn operator_oracles(grid: &[Instance]) -> Verdict {
    let mut sum_vs_dense = Bound::new("component sum vs stacked product", 1e-10);
    let mut vs_oracle = Bound::new("library vs reference", 1e-10);
    for inst in grid {
        for g in [&inst.gframe, &inst.parseval_gframe] {
            let o = GFrameOracle::new(g);
            let s = g.frame_operator().matrix();
            sum_vs_dense.see(rel(s, g.dense_frame_operator().matrix()));
            vs_oracle.see(rel(s, &o.s));
        }
        for fr in [&inst.gfusion, &inst.parseval_gfusion] {
            let o = FusionOracle::new(fr);
            let s = fr.frame_operator().matrix();
            sum_vs_dense.see(rel(s, fr.dense_frame_operator().matrix()));
            vs_oracle.see(rel(s, &o.s));
            let t = o.dense_synthesis_operator();
            vs_oracle.see(rel(s, &(&t * t.adjoint())));
        }
    }
    combine(&[&sum_vs_dense, &vs_oracle], &[], &[])
}

fn spectrum(grid: &[Instance]) -> Verdict {
    let mut outside = Bound::new("max distance of a spectrum point outside [0,1]", 1e-8);
    let mut radius: f64 = 0.0;
    let mut lib = Vec::new();
    let t = tol(1e-8, 1e-8);
    for inst in grid {
        let o = FusionOracle::new(&inst.parseval_gfusion);
        for i in &inst.subsets {
            for x in hermitian_eigenvalues(&o.s_partial(i)) {
                outside.see((-x).max(x - 1.0).max(0.0));
                radius = radius.max(x.abs());
            }
        }
        library(&mut lib, inst, CheckId::SpectrumRemark, FrameRef::GFusion(&inst.parseval_gfusion), &t);
    }
    combine(&[&outside], &lib, &[(format!("max spectral radius {radius:.12}"), true)])
}

fn lemmas(grid: &[Instance]) -> Verdict {
    let lin = LinTol::default();
    let mut l0 = Bound::new("projection lemma residual/|T|", 1e-10);
    let mut l0_oracle = Bound::new("reference residual/|T|", 1e-10);
    for field in [Field::Real, Field::Complex] {
        for k in 0..100u64 {
            let mut rng = FrameRng::new(k, 7);
            let n = 2 + (k as usize) % 5;
            let dim_v = 1 + (k as usize / 5) % n;
            let t = rng.gaussian_operator(field, n, n);
            let v = rng.subspace(field, n, dim_v, &lin);
            let t_norm = nalgebra::linalg::SVD::new(t.matrix().clone(), false, false)
                .singular_values
                .max();
            l0.see(lemma_l0_residual(&v, &t, &lin).expect("residual") / t_norm);
            let (tm, vm) = (t.matrix(), v.matrix());
            let pv = col_projector(vm);
            let ptv = col_projector(&(tm * vm));
            let lhs = &pv * tm.adjoint();
            let r = (&lhs - &lhs * &ptv).norm();
            l0_oracle.see(r / t_norm);
        }
    }

    let mut l2 = Bound::new("u-v = u^2-v^2 residual/max(1,|u|^2)", 1e-10);
    let mut lib = Vec::new();
    let t = tol(1e-10, 1e-8);
    for inst in grid {
        let o = GFrameOracle::new(&inst.gframe);
        let id = M::identity(o.n, o.n);
        for i in &inst.subsets {
            let u = o.s_partial(i);
            let v = &id - &u;
            let r = ((&u - &v) - (&u * &u - &v * &v)).norm();
            l2.see(r / u.norm_squared().max(1.0));
        }
        library(&mut lib, inst, CheckId::LemmaL2, FrameRef::GFrame(&inst.gframe), &t);
    }

    let mut quad_fail = 0usize;
    let mut rng = FrameRng::new(2024, 0);
    for _ in 0..1000 {
        let field = if rng.uniform(0.0, 1.0) < 0.5 { Field::Real } else { Field::Complex };
        let n = 1 + (rng.uniform(0.0, 6.0) as usize).min(5);
        let g = rng.gaussian_operator(field, n, n);
        let h = (g.matrix() + g.matrix().adjoint()) * c(0.5);
        let h_norm = hermitian_eigenvalues(&h).into_iter().fold(0.0, |m: f64, x| m.max(x.abs()));
        let u = &h * c(rng.uniform(0.0, 10.0) / h_norm.max(f64::MIN_POSITIVE));
        let f = rng.gaussian_vector(field, n);
        let f = &f / c(f.norm());
        let mut a = rng.uniform(-3.0, 3.0);
        if a == 0.0 {
            a = 1.0;
        }
        let (b, cc) = (rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0));
        let vq = &u * &u * c(a) + &u * c(b) + M::identity(n, n) * c(cc);
        let value = ip(&(&vq * &f), &f).re;
        let bound = quad_bound(a, b, cc).expect("a != 0");
        let slack = 1e-9 * (a.abs() * 100.0 + b.abs() * 10.0 + cc.abs() + bound.abs());
        let ok = if a > 0.0 { value >= bound - slack } else { value <= bound + slack };
        if !ok {
            quad_fail += 1;
        }
    }
    combine(
        &[&l0, &l0_oracle, &l2],
        &lib,
        &[(format!("quadratic bound violated on {quad_fail} of 1000 samples"), quad_fail == 0)],
    )
}

fn same_bits(a: &Operator, b: &Operator) -> bool {
    a.rows() == b.rows()
        && a.cols() == b.cols()
        && a.matrix()
            .iter()
            .zip(b.matrix().iter())
            .all(|(x, y)| x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits())
}

fn frames_same_bits(a: &LoadedFrame, b: &LoadedFrame) -> bool {
    match (a, b) {
        (LoadedFrame::GFrame(x), LoadedFrame::GFrame(y)) => {
            x.len() == y.len() && x.blocks().iter().zip(y.blocks()).all(|(p, q)| same_bits(p, q))
        }
        (LoadedFrame::GFusion(x), LoadedFrame::GFusion(y)) => {
            x.len() == y.len()
                && x.components().iter().zip(y.components()).all(|(p, q)| {
                    same_bits(p.basis(), q.basis())
                        && same_bits(p.lambda(), q.lambda())
                        && p.weight().to_bits() == q.weight().to_bits()
                })
        }
        _ => false,
    }
}

fn determinism_and_round_trip(_: &[Instance]) -> Verdict {
    let lin = LinTol::default();
    let dir = tempfile::tempdir().expect("temp dir");
    let mut regen_mismatch = 0;
    let mut reload_mismatch = 0;
    let mut total = 0;
    for dim in [2usize, 3, 5, 8] {
        for field in [Field::Real, Field::Complex] {
            for seed in 0..5u64 {
                let spec = GenSpec::standard(dim, 4, field, seed);
                let build = || -> Vec<LoadedFrame> {
                    vec![
                        LoadedFrame::GFrame(gen::random_gframe(&spec, &lin).unwrap()),
                        LoadedFrame::GFrame(gen::random_parseval_gframe(&spec, &lin).unwrap()),
                        LoadedFrame::GFusion(gen::random_gfusion(&spec, &lin).unwrap()),
                        LoadedFrame::GFusion(gen::random_parseval_gfusion(&spec, &lin).unwrap()),
                    ]
                };
                for (k, (a, b)) in build().iter().zip(build().iter()).enumerate() {
                    total += 1;
                    if !frames_same_bits(a, b) {
                        regen_mismatch += 1;
                    }
                    let path = dir.path().join(format!("{dim}-{field}-{seed}-{k}.frame"));
                    FrameFile::from_frame(a).save(&path).expect("save");
                    let back = FrameFile::load(&path).and_then(|f| f.to_frame(&lin));
                    if !back.is_ok_and(|b| frames_same_bits(a, &b)) {
                        reload_mismatch += 1;
                    }
                }
            }
        }
    }
    let small = SuitePlan {
        dims: vec![3],
        seeds: 3,
        ..SuitePlan::default()
    };
    let (r1, r2) = (run_suite(&small).unwrap(), run_suite(&small).unwrap());
    let reports_equal = r1.checks == r2.checks && r1.pass == r2.pass;
    let out = Command::new(env!("CARGO_BIN_EXE_framekit"))
        .arg("verify")
        .output()
        .expect("binary runs");
    let code = out.status.code();
    combine(
        &[],
        &[],
        &[
            (format!("{regen_mismatch} of {total} regenerated frames differ"), regen_mismatch == 0),
            (format!("{reload_mismatch} of {total} reloaded frames differ"), reload_mismatch == 0),
            (format!("repeated suite reports identical: {reports_equal}"), reports_equal),
            (format!("default `verify` exit code {code:?}"), code == Some(0)),
        ],
    )
}

type Criterion = (&'static str, fn(&[Instance]) -> Verdict);

fn main() -> ExitCode {
    let grid = grid();
    let criteria: [Criterion; 10] = [
        ("g-frame partial-sum identity", g_partial_sum_identity),
        ("g-fusion partial-sum identities", gfusion_partial_sum_identities),
        ("reconstruction formulas", reconstruction),
        ("Parseval operator inequalities", parseval_inequalities),
        ("general-frame inequalities", general_inequalities),
        ("corrected sandwich and minus-form probe", corrected_sandwich),
        ("frame operator oracle equivalence", operator_oracles),
        ("partial operator spectrum in [0,1]", spectrum),
        ("projection, complement and quadratic lemmas", lemmas),
        ("determinism and frame-file round trip", determinism_and_round_trip),
    ];
    println!("acceptance grid: {} instances", grid.len());
    let mut failed = 0;
    for (name, run) in criteria {
        let v = run(&grid);
        println!("{} {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail);
        if !v.pass {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}
