//! Seeded oracle suite: one routine per acceptance property, each comparing two independent routes.

use serde::Serialize;

use crate::admissibility::{admissible, langer_textorius, mt_admissibility, LimitProbe};
use crate::boundary::{lambda_samples, von_neumann_triplet, BoundaryRelation, OrdinaryTriplet};
use crate::coupling::{couple, induced_chi, krein_rhs, tau_of_extension, CouplingScene};
use crate::kreinspace::{inverse_main_transform, main_transform, KreinRelation};
use crate::linalg::{c, max_abs, C64};
use crate::linrel::{LinearRelation, Tol};
use crate::models::{self, dirichlet_spectrum, fix_b_scene, identity_triplet, periodic_spectrum, random_admissibility_case, random_scene, SlModel};
use crate::nevanlinna::{check_pair, classify_family, herglotz_eval, HerglotzModel, NevError, PairFamily, RelationFamily};
use crate::random;
use crate::transforms::{block_compress, schur_complement, shmulyan, sum_weyl, t_transform, weyl_block, weyl_schur, weyl_t, SpaceSplit};

/// Result of one oracle property over a batch of seeded cases.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub cases: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub disagreements: usize,
    pub passed: bool,
    pub detail: String,
}

impl CriterionOutcome {
    fn finish(id: u8, name: &'static str, cases: usize, max_residual: f64, threshold: f64, disagreements: usize, detail: String) -> Self {
        CriterionOutcome {
            id,
            name,
            cases,
            max_residual,
            threshold,
            disagreements,
            passed: disagreements == 0 && max_residual < threshold,
            detail,
        }
    }

    /// One-line summary.
    pub fn line(&self) -> String {
        format!(
            "[{}] {}. {}: cases={} max_residual={:.3e} (< {:.0e}) disagreements={}{}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.cases,
            self.max_residual,
            self.threshold,
            self.disagreements,
            if self.detail.is_empty() { String::new() } else { format!(" | {}", self.detail) }
        )
    }
}

/// Default number of cases per property.
pub fn default_cases(id: u8) -> usize {
    match id {
        1 | 2 => 100,
        3..=5 | 7 => 30,
        6 | 9 => 20,
        _ => 1,
    }
}

pub const NAMES: [&str; 9] = [
    "relation-calculus laws",
    "main-transform equivalence",
    "Green identity and unitarity of constructed triplets",
    "Krein-Naimark resolvent formula",
    "coupling round trip",
    "transform two-route equality",
    "admissibility oracle agreement",
    "Sturm-Liouville periodic and Dirichlet spectra",
    "class invariance under standard J-unitary transforms",
];

/// Runs property `id` (1..=9) over `cases` seeded cases.
pub fn run_criterion(id: u8, seed: u64, cases: Option<usize>) -> CriterionOutcome {
    let n = cases.unwrap_or_else(|| default_cases(id));
    let name = NAMES[(id as usize).clamp(1, 9) - 1];
    let (res, thr, dis, detail) = match id {
        1 => relation_laws(seed, n),
        2 => main_transform_equivalence(seed, n),
        3 => triplet_unitarity(seed, n),
        4 => krein_naimark(seed, n),
        5 => coupling_round_trip(seed, n),
        6 => transform_routes(seed, n),
        7 => admissibility_agreement(seed, n),
        8 => sl_spectra(),
        9 => class_invariance(seed, n),
        _ => (f64::INFINITY, 0.0, 1, format!("unknown property {id}")),
    };
    CriterionOutcome::finish(id, name, n, res, thr, dis, detail)
}

pub fn run_all(seed: u64, cases: Option<usize>) -> Vec<CriterionOutcome> {
    (1..=9).map(|id| run_criterion(id, seed, cases)).collect()
}

type Partial = (f64, f64, usize, String);

fn tol() -> Tol {
    Tol::default()
}

fn case_rng(seed: u64, k: usize) -> random::SeededRng {
    random::rng(seed.wrapping_mul(1_000_003).wrapping_add(k as u64))
}

fn relation_laws(seed: u64, cases: usize) -> Partial {
    let mut worst = 0.0f64;
    let mut bad = 0;
    for k in 0..cases {
        let mut g = case_rng(seed, k);
        let dims = |g: &mut random::SeededRng| 1 + (random::complex_normal(g).re.abs() * 3.0) as usize % 5;
        let (n, p, q) = (dims(&mut g), dims(&mut g), dims(&mut g));
        let kr = (k * 7) % (n + p + 1);
        let r = random::relation(&mut g, n, p, kr);
        let a = random::relation(&mut g, p, q, (k * 3) % (p + q + 1));
        let b = random::relation(&mut g, n, p, (k * 5) % (n + p + 1));
        worst = worst.max(r.inverse().inverse().gap(&r));
        worst = worst.max(r.adjoint().inverse().gap(&r.inverse().adjoint()));
        let ab = a.product(&b).expect("compatible");
        let lhs = ab.inverse();
        let rhs = b.inverse().product(&a.inverse()).expect("compatible");
        worst = worst.max(lhs.gap(&rhs));
        let adj = b.adjoint().product(&a.adjoint()).expect("compatible");
        worst = worst.max(ab.adjoint().graph().excess(adj.graph()));
        if adj.dim() > ab.adjoint().dim() {
            bad += 1;
        }
        if r.dim() != r.dom().dim() + r.mul().dim() || r.dim() != r.ran().dim() + r.ker().dim() {
            bad += 1;
        }
        if r.adjoint().dim() + r.dim() != n + p {
            bad += 1;
        }
    }
    (worst, 1e-8, bad, String::new())
}

fn main_transform_equivalence(seed: u64, cases: usize) -> Partial {
    let t = tol();
    let mut bad = 0;
    let mut kinds = [0usize; 4];
    for k in 0..cases {
        let mut g = case_rng(seed, k);
        let m = 1 + k % 3;
        let n = 1 + (k / 3) % 3;
        let rel = match k % 4 {
            0 => inverse_main_transform(&random::selfadjoint_relation(&mut g, n + m, k % 2), n).expect("shape").into_rel(),
            1 => inverse_main_transform(&random::symmetric_operator(&mut g, n + m, 1 + k % (n + m - 1).max(1)), n).expect("shape").into_rel(),
            2 => LinearRelation::graph_of(&random::standard_j_unitary(&mut g, m)),
            _ => random::relation(&mut g, 2 * n, 2 * m, 1 + k % (2 * n + 2 * m)),
        };
        let kr = KreinRelation::new(rel).expect("even dimensions");
        let cl = main_transform(&kr).classify(&t);
        let (u, i) = (kr.is_unitary(&t), kr.is_isometric(&t));
        if u != cl.selfadjoint || i != cl.symmetric {
            bad += 1;
        }
        kinds[(u as usize) * 2 + i as usize] += 1;
    }
    let detail = format!(
        "unitary={} isometric-only={} neither={}",
        kinds[3],
        kinds[1],
        kinds[0] + kinds[2]
    );
    (0.0, 1.0, bad, detail)
}

fn triplet_unitarity(seed: u64, cases: usize) -> Partial {
    let t = tol();
    let mut worst = 0.0f64;
    let mut bad = 0;
    for k in 0..cases {
        let mut g = case_rng(seed, k);
        let n = 2 + k % 5;
        let s = if k % 3 == 2 {
            let a = random::selfadjoint_relation(&mut g, n, 1 + k % (n - 1));
            let sub = a.basis() * random::gaussian(&mut g, n, n - 1);
            LinearRelation::from_generators(n, n, &sub).expect("shape")
        } else {
            random::symmetric_operator(&mut g, n, 1 + k % (n - 1))
        };
        let u = if k % 2 == 0 { Some(random::unitary(&mut g, n - s.dim())) } else { None };
        let pi = match von_neumann_triplet(&s, u.as_ref(), &t) {
            Ok(p) => p,
            Err(_) => {
                bad += 1;
                continue;
            }
        };
        let b = pi.base();
        worst = worst.max(b.green_residual());
        if BoundaryRelation::validate(b.gamma().clone(), &t).is_err() || !b.s_rel().equals(&s, &t) {
            bad += 1;
        }
        let pc = check_pair(&b.weyl_pair(), &lambda_samples()).expect("nonreal samples");
        if !pc.passes(&t) {
            bad += 1;
        }
        worst = worst.max(pc.n2_residual);
        for l in lambda_samples() {
            let m = b.weyl_matrix(l).expect("ordinary");
            let mc = b.weyl_matrix(l.conj()).expect("ordinary");
            worst = worst.max(max_abs(&(mc - m.adjoint())));
        }
    }
    (worst, 1e-9, bad, String::new())
}

fn scenes(seed: u64, cases: usize) -> Vec<(CouplingScene, OrdinaryTriplet)> {
    let t = tol();
    (0..cases)
        .map(|k| {
            let n1 = 1 + k % 5;
            let n2 = 1 + (k / 5) % (8 - n1);
            let sc = random_scene(seed.wrapping_add(k as u64), n1, n2, &t).expect("Hermitian scene");
            let pi = von_neumann_triplet(&sc.s1, None, &t).expect("symmetric S1");
            (sc, pi)
        })
        .collect()
}

fn krein_naimark(seed: u64, cases: usize) -> Partial {
    let t = tol();
    let mut worst = 0.0f64;
    let mut bad = 0;
    for (sc, pi) in scenes(seed, cases) {
        let tau = tau_of_extension(&sc, &pi, &t).expect("matching triplet");
        for l in lambda_samples() {
            match (sc.generalized_resolvent(l), krein_rhs(&pi, &tau, l)) {
                (Ok(lhs), Ok(rhs)) => worst = worst.max(max_abs(&(lhs.compressed - rhs))),
                _ => bad += 1,
            }
        }
    }
    let fb = fix_b_scene(&t);
    let pi = identity_triplet(&t);
    let tau = tau_of_extension(&fb, &pi, &t).expect("matching triplet");
    let i = c(0.0, 1.0);
    let lhs = fb.generalized_resolvent(i).expect("nonreal").compressed[(0, 0)];
    let rhs = krein_rhs(&pi, &tau, i).expect("nonreal")[(0, 0)];
    let hand = (lhs - c(0.0, 0.5)).norm().max((rhs - c(0.0, 0.5)).norm());
    if hand > 1e-12 {
        bad += 1;
    }
    (worst, 1e-8, bad, format!("FIX-B at i: lhs={:.3e}{:+.3e}i, |err|={hand:.1e}", lhs.re, lhs.im))
}

fn coupling_round_trip(seed: u64, cases: usize) -> Partial {
    let t = tol();
    let mut worst = 0.0f64;
    let mut bad = 0;
    for (sc, pi) in scenes(seed, cases) {
        let chi = match induced_chi(&sc, &pi, &t) {
            Ok(x) => x,
            Err(_) => {
                bad += 1;
                continue;
            }
        };
        let a = couple(&pi, &chi, &t).expect("valid χ");
        worst = worst.max(a.gap(&sc.a_tilde));
        let sc2 = CouplingScene::new(a, sc.h1, &t).expect("selfadjoint");
        let chi2 = induced_chi(&sc2, &pi, &t).expect("matching triplet");
        worst = worst.max(chi2.gamma().gap(chi.gamma()));
    }
    (worst, 1e-8, bad, String::new())
}

fn transform_routes(seed: u64, cases: usize) -> Partial {
    let t = tol();
    let mut worst = 0.0f64;
    let mut bad = 0;
    for k in 0..cases {
        let mut g = case_rng(seed, k);
        let (d1, d2) = (1 + k % 2, 1 + (k / 2) % 2);
        let n = 1 + k % 3;
        let a = LinearRelation::graph_of(&random::hermitian(&mut g, n + d1 + d2));
        let gm = BoundaryRelation::from_selfadjoint(&a, n, &t).expect("Hermitian split");
        let split = SpaceSplit::new(d1, d2);
        let tm = random::gaussian(&mut g, d1, d2);
        let routes = (
            block_compress(&gm, &split, 1, &t),
            block_compress(&gm, &split, 2, &t),
            schur_complement(&gm, &split, &t),
            t_transform(&gm, &split, &tm, &t),
        );
        let a2 = LinearRelation::graph_of(&random::hermitian(&mut g, 2 + d1 + d2));
        let g2 = BoundaryRelation::from_selfadjoint(&a2, 2, &t).expect("Hermitian split");
        let (c1, c2, sc, tt) = match routes {
            (Ok(a), Ok(b), Ok(c), Ok(d)) => (a, b, c, d),
            _ => {
                bad += 1;
                continue;
            }
        };
        let sm = sum_weyl(&gm, &g2, &t).expect("equal boundary spaces");
        for l in lambda_samples() {
            let m = gm.weyl_matrix(l).expect("ordinary");
            let w = |x: &BoundaryRelation| x.weyl_matrix(l).expect("operator valued");
            let schur = weyl_schur(&m, &split).expect("invertible M22");
            for (got, want) in [
                (w(&c1.gamma), weyl_block(&m, &split, 1)),
                (w(&c2.gamma), weyl_block(&m, &split, 2)),
                (w(&sc.gamma), schur),
                (w(&tt.gamma), weyl_t(&m, &split, &tm)),
                (w(&sm.gamma), &m + w(&g2)),
            ] {
                worst = worst.max(max_abs(&(got - want)));
            }
        }
    }
    let v = models::sl_weyl(&SlModel::new(1.0).expect("positive"), c(-1.0, 0.0)).expect("off poles");
    let s = weyl_schur(&v, &SpaceSplit::new(1, 1)).expect("invertible");
    let err = (s[(0, 0)] + c(1f64.tanh(), 0.0)).norm();
    if err > 1e-9 {
        bad += 1;
    }
    (worst, 1e-9, bad, format!("interval Schur at -1: {:.6} (|err|={err:.1e})", s[(0, 0)].re))
}

fn admissibility_agreement(seed: u64, cases: usize) -> Partial {
    let t = tol();
    let (mut bad, mut adm, mut inadm) = (0, 0, 0);
    let mut tally = |r: Option<(usize, bool)>| match r {
        Some((d, exact)) => {
            bad += d;
            if exact {
                adm += 1;
            } else {
                inadm += 1;
            }
        }
        None => bad += 1,
    };
    let fixed = fixed_admissibility_cases(&t);
    for (pi, tau, chi) in &fixed {
        tally(admissibility_case(pi, tau, chi, &t));
    }
    for k in 0..cases.saturating_sub(fixed.len()) {
        let case = random_admissibility_case(seed.wrapping_add(k as u64), &t).ok();
        tally(case.and_then(|cs| admissibility_case(&cs.pi, &cs.tau, &cs.chi, &t)));
    }
    (0.0, 1.0, bad, format!("admissible={adm} inadmissible={inadm}"))
}

/// Disagreements of the limit criteria with the exact verdict, and the exact verdict.
fn admissibility_case(pi: &OrdinaryTriplet, tau: &models::ParamModel, chi: &BoundaryRelation, t: &Tol) -> Option<(usize, bool)> {
    let p = LimitProbe::standard(pi.base().m());
    let r = admissible(pi, tau, Some(chi), &p, t).ok()?;
    let exact = r.exact_verdict()?;
    let mut d = (r.limit_verdict() != exact) as usize;
    let m0 = pi.base().weyl_matrix(c(0.0, 1.0)).ok()?;
    d += (mt_admissibility(pi, tau, &m0, &p).ok().and_then(|mt| mt.verdict()) != Some(exact)) as usize;
    for z in [c(0.0, 1.0), c(0.0, 2.0), c(1.0, 1.0)] {
        d += (langer_textorius(pi, tau, z, &p).ok() != Some(exact)) as usize;
    }
    Some((d, exact))
}

/// FIX-B with `τ = -1/λ` and FIX-A steered to FIX-∞.
fn fixed_admissibility_cases(t: &Tol) -> Vec<(OrdinaryTriplet, models::ParamModel, BoundaryRelation)> {
    let mut out = vec![];
    let pi = identity_triplet(t);
    let tau = models::ParamModel::Herglotz(HerglotzModel::scalar(0.0, 0.0, &[(0.0, 1.0)]).expect("valid"));
    let chi = tau.realize(t).expect("realizable");
    out.push((pi, tau, chi));
    let pi = von_neumann_triplet(&models::fix_a(), None, t).expect("symmetric");
    let theta = models::steer_to_mul(&pi, 0, t).expect("nondensely defined");
    let tau = models::ParamModel::Constant(theta.scale(c(-1.0, 0.0)));
    let chi = tau.realize(t).expect("selfadjoint");
    out.push((pi, tau, chi));
    out
}

fn sl_spectra() -> Partial {
    let m = SlModel::new(1.0).expect("positive");
    let pi2 = std::f64::consts::PI.powi(2);
    let mut worst = 0.0f64;
    let mut bad = 0;
    let mut check = |got: Result<Vec<f64>, models::ModelError>, want: &[f64]| match got {
        Ok(v) if v.len() == want.len() => {
            for (x, w) in v.iter().zip(want) {
                worst = worst.max((x - w).abs() / w.abs().max(1.0));
            }
        }
        _ => bad += 1,
    };
    check(periodic_spectrum(&m, (-1.0, 50.0)), &[0.0, pi2, 4.0 * pi2]);
    let d: Vec<f64> = (1..=4).map(|k| (k as f64).powi(2) * pi2 / 4.0).collect();
    check(dirichlet_spectrum(&m, (-1.0, 50.0)), &d);
    (worst, 1e-6, bad, String::new())
}

fn class_invariance(seed: u64, cases: usize) -> Partial {
    let t = tol();
    let mut bad = 0;
    let (mut strict, mut uniform) = (0, 0);
    struct Transformed {
        w: LinearRelation,
        model: HerglotzModel,
    }
    impl RelationFamily for Transformed {
        fn dim(&self) -> usize {
            self.model.dim()
        }
        fn eval(&self, l: C64) -> Result<LinearRelation, NevError> {
            let v = LinearRelation::graph_of(&herglotz_eval(&self.model, l)?);
            shmulyan(&self.w, &v).map_err(|e| NevError::Invalid(e.to_string()))
        }
    }
    for k in 0..cases {
        let mut g = case_rng(seed, k);
        let m = 2;
        let masses = if k % 4 == 3 { vec![] } else { vec![(0.3, random::psd(&mut g, m, 1 + k % 2))] };
        let b = random::psd(&mut g, m, k % 3);
        let model = HerglotzModel::new(random::hermitian(&mut g, m), b, masses).expect("valid");
        let w = LinearRelation::graph_of(&random::standard_j_unitary(&mut g, m));
        let before = classify_family(&PairFamily(model.clone()), c(0.0, 1.0), &t).expect("nonreal");
        let after = classify_family(&Transformed { w, model }, c(0.0, 1.0), &t).expect("nonreal");
        if before.rs_h != after.rs_h || before.ru_h != after.ru_h {
            bad += 1;
        }
        strict += before.rs_h as usize;
        uniform += before.ru_h as usize;
    }
    (0.0, 1.0, bad, format!("in R^s={strict} in R^u={uniform} of {cases}"))
}
