//! Orthogonal couplings, induced boundary relations, generalized resolvents and the double Weyl function.
//!
//! Relations in `C^{h1} ⊕ C^{h2}` use the layout `(f1, f2, f1', f2')`.

use thiserror::Error;

use crate::boundary::{BoundaryError, BoundaryRelation, OrdinaryTriplet};
use crate::linalg::{block_diag, eye, hstack, inverse, max_abs, null_space, pinv_with, rows, vstack, zeros, CMat, CVec, C64};
use crate::linrel::{is_simple_default, LinearRelation, RelError, Tol};
use crate::nevanlinna::{require_nonreal, NevError, RelationFamily};
use crate::transforms::{block_compress, Compressed, SpaceSplit, TransformError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CouplingError {
    #[error("relation is not selfadjoint")]
    NotSelfadjoint,
    #[error("the triplet does not match the scene: ker Γ must lie in S1")]
    TripletMismatch,
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("lambda = {0} is not in the resolvent set")]
    SingularAtLambda(C64),
    #[error("M(λ) + τ(λ) has no bounded everywhere defined inverse")]
    RelationSumSingular,
    #[error("Ψ + MΦ is singular at lambda = {0}")]
    Omega0Singular(C64),
    #[error("boundary value problem has no solution")]
    NoSolution,
    #[error("boundary value problem has no unique solution")]
    NonUnique,
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Nev(#[from] NevError),
}

/// Row indices of `(f_j, f_j')` inside the layout `(f1, f2, f1', f2')`.
fn part_rows(h1: usize, h2: usize, j: usize) -> Vec<usize> {
    let n = h1 + h2;
    let (off, d) = if j == 1 { (0, h1) } else { (h1, h2) };
    (off..off + d).chain(n + off..n + off + d).collect()
}

fn select_rows(m: &CMat, idx: &[usize]) -> CMat {
    CMat::from_fn(idx.len(), m.ncols(), |i, j| m[(idx[i], j)])
}

/// Assembles `f̂1 ⊕ f̂2` generators given as `(f1, f1')` and `(f2, f2')` blocks.
fn assemble(x1: &CMat, x2: &CMat, h1: usize, h2: usize) -> CMat {
    vstack(&[&rows(x1, 0, h1), &rows(x2, 0, h2), &rows(x1, h1, h1), &rows(x2, h2, h2)])
}

/// A selfadjoint `Ã` in `C^{h1} ⊕ C^{h2}` with `S_j = Ã ∩ H_j²` and `T_j = P_j Ã`.
#[derive(Clone, Debug)]
pub struct CouplingScene {
    pub h1: usize,
    pub h2: usize,
    pub a_tilde: LinearRelation,
    pub s1: LinearRelation,
    pub s2: LinearRelation,
    pub t1: LinearRelation,
    pub t2: LinearRelation,
}

impl CouplingScene {
    pub fn new(a_tilde: LinearRelation, h1: usize, tol: &Tol) -> Result<Self, CouplingError> {
        let n = a_tilde.dim_in();
        if a_tilde.dim_out() != n || h1 > n {
            return Err(CouplingError::DimMismatch("Ã must be a relation in C^{h1+h2}".into()));
        }
        if !a_tilde.classify(tol).selfadjoint {
            return Err(CouplingError::NotSelfadjoint);
        }
        let h2 = n - h1;
        let b = a_tilde.basis();
        let part = |j: usize| -> Result<(LinearRelation, LinearRelation), CouplingError> {
            let own = part_rows(h1, h2, j);
            let other = part_rows(h1, h2, 3 - j);
            let d = own.len() / 2;
            let k = null_space(&select_rows(b, &other));
            let s = LinearRelation::from_generators(d, d, &(select_rows(b, &own) * k))?;
            let t = LinearRelation::from_generators(d, d, &select_rows(b, &own))?;
            Ok((s, t))
        };
        let (s1, t1) = part(1)?;
        let (s2, t2) = part(2)?;
        Ok(CouplingScene { h1, h2, a_tilde, s1, s2, t1, t2 })
    }

    /// Minimality of `Ã` with respect to `H1`, i.e. simplicity of `S2`.
    pub fn is_minimal(&self) -> Result<bool, CouplingError> {
        Ok(is_simple_default(&self.s2)?)
    }

    /// `(n+(S1), n-(S1), n+(S2), n-(S2))`.
    pub fn defect_numbers(&self) -> Result<(usize, usize, usize, usize), CouplingError> {
        let d = |s: &LinearRelation, l: C64| -> Result<usize, CouplingError> { Ok(s.adjoint().eigenspace(l)?.0.dim()) };
        let (i, mi) = (C64::new(0.0, 1.0), C64::new(0.0, -1.0));
        Ok((d(&self.s1, i)?, d(&self.s1, mi)?, d(&self.s2, i)?, d(&self.s2, mi)?))
    }

    /// `P_H (Ã - λ)^{-1}|_H`.
    pub fn generalized_resolvent(&self, lambda: C64) -> Result<GeneralizedResolventSample, CouplingError> {
        require_nonreal(lambda)?;
        let r = self.a_tilde.resolvent(lambda).map_err(|_| CouplingError::SingularAtLambda(lambda))?;
        Ok(GeneralizedResolventSample {
            lambda,
            compressed: r.view((0, 0), (self.h1, self.h1)).into_owned(),
        })
    }
}

/// Compressed resolvent at one point.
#[derive(Clone, Debug)]
pub struct GeneralizedResolventSample {
    pub lambda: C64,
    pub compressed: CMat,
}

fn check_triplet(scene: &CouplingScene, pi: &OrdinaryTriplet, tol: &Tol) -> Result<(), CouplingError> {
    let b = pi.base();
    if b.n() != scene.h1 || !scene.s1.graph().contains(b.s_rel().graph(), tol) {
        return Err(CouplingError::TripletMismatch);
    }
    Ok(())
}

/// `D Γ` with `D = diag(I, -I)`: the map `f̂1 ↦ (Γ0 f̂1, -Γ1 f̂1)`.
fn signed_boundary_map(pi: &OrdinaryTriplet) -> CMat {
    let m = pi.base().m();
    block_diag(&eye(m), &(-eye(m))) * pi.map()
}

/// `χ = {(f̂2, (Γ0 f̂1, -Γ1 f̂1)) : f̂1 ⊕ f̂2 ∈ Ã}`.
pub fn induced_chi(scene: &CouplingScene, pi: &OrdinaryTriplet, tol: &Tol) -> Result<BoundaryRelation, CouplingError> {
    check_triplet(scene, pi, tol)?;
    let (h1, h2) = (scene.h1, scene.h2);
    let m = pi.base().m();
    let b = scene.a_tilde.basis();
    let x1 = select_rows(b, &part_rows(h1, h2, 1));
    let x2 = select_rows(b, &part_rows(h1, h2, 2));
    let gens = vstack(&[&x2, &(signed_boundary_map(pi) * x1)]);
    let chi = LinearRelation::from_generators(2 * h2, 2 * m, &gens)?;
    Ok(BoundaryRelation::validate(chi, tol)?)
}

/// `Ã = {f̂1 ⊕ f̂2 ∈ A* ⊕ S2* : (f̂2, (Γ0 f̂1, -Γ1 f̂1)) ∈ χ}`.
pub fn couple(pi: &OrdinaryTriplet, chi: &BoundaryRelation, tol: &Tol) -> Result<LinearRelation, CouplingError> {
    let m = pi.base().m();
    if chi.m() != m {
        return Err(CouplingError::DimMismatch(format!("triplet into C^{}, χ into C^{}", m, chi.m())));
    }
    let (h1, h2) = (pi.base().n(), chi.n());
    let q = pi.base().t_rel().basis().clone();
    let dg = signed_boundary_map(pi) * &q;
    let k = null_space(&hstack(&[&dg, &(-chi.gamma().bottom())]));
    let x = rows(&k, 0, q.ncols());
    let y = rows(&k, q.ncols(), chi.gamma().dim());
    let gens = assemble(&(&q * x), &(chi.gamma().top() * y), h1, h2);
    let a = LinearRelation::from_generators(h1 + h2, h1 + h2, &gens)?;
    if !a.classify(tol).selfadjoint {
        return Err(CouplingError::NotSelfadjoint);
    }
    Ok(a)
}

/// `τ(λ) = {(Γ0 f̂1, -Γ1 f̂1) : f̂ ∈ Ã, P2(f' - λ f) = 0}`.
#[derive(Clone, Debug)]
pub struct TauFamily {
    scene: CouplingScene,
    pi: OrdinaryTriplet,
}

pub fn tau_of_extension(scene: &CouplingScene, pi: &OrdinaryTriplet, tol: &Tol) -> Result<TauFamily, CouplingError> {
    check_triplet(scene, pi, tol)?;
    Ok(TauFamily {
        scene: scene.clone(),
        pi: pi.clone(),
    })
}

impl TauFamily {
    pub fn value(&self, lambda: C64) -> Result<LinearRelation, CouplingError> {
        require_nonreal(lambda)?;
        let (h1, h2) = (self.scene.h1, self.scene.h2);
        let n = h1 + h2;
        let b = self.scene.a_tilde.basis();
        let f2 = rows(b, h1, h2);
        let f2p = rows(b, n + h1, h2);
        let k = null_space(&(f2p - f2 * lambda));
        let x1 = select_rows(b, &part_rows(h1, h2, 1)) * k;
        let m = self.pi.base().m();
        let out = signed_boundary_map(&self.pi) * x1;
        Ok(LinearRelation::from_generators(m, m, &out)?)
    }
}

impl RelationFamily for TauFamily {
    fn dim(&self) -> usize {
        self.pi.base().m()
    }
    fn eval(&self, lambda: C64) -> Result<LinearRelation, NevError> {
        self.value(lambda).map_err(|e| match e {
            CouplingError::Nev(n) => n,
            CouplingError::Rel(r) => NevError::Rel(r),
            other => NevError::Invalid(other.to_string()),
        })
    }
}

/// `(M(λ) + τ(λ))^{-1}` computed as a relation sum followed by inversion.
pub fn weyl_tau_inverse(m: &LinearRelation, tau: &LinearRelation) -> Result<CMat, CouplingError> {
    let s = m.sum(tau)?;
    s.inverse().as_matrix().map_err(|_| CouplingError::RelationSumSingular)
}

/// `(A0 - λ)^{-1} - γ(λ)(M(λ) + τ(λ))^{-1} γ(λ̄)*`.
pub fn krein_rhs<F: RelationFamily + ?Sized>(pi: &OrdinaryTriplet, tau: &F, lambda: C64) -> Result<CMat, CouplingError> {
    require_nonreal(lambda)?;
    let b = pi.base();
    let r0 = b.a0()?.resolvent(lambda).map_err(|_| CouplingError::SingularAtLambda(lambda))?;
    let g = b.gamma_matrix(lambda)?;
    let gb = b.gamma_matrix(lambda.conj())?;
    let inv = weyl_tau_inverse(&b.weyl(lambda)?, &tau.eval(lambda)?)?;
    Ok(r0 - g * inv * gb.adjoint())
}

/// Solves `f1' - λ f1 = h`, `f̂1 ∈ A*`, `(Γ0 f̂1, -Γ1 f̂1) ∈ τ(λ)` and returns `f1`.
pub fn straus_solve<F: RelationFamily + ?Sized>(
    pi: &OrdinaryTriplet,
    tau: &F,
    h: &CVec,
    lambda: C64,
    tol: &Tol,
) -> Result<CVec, CouplingError> {
    require_nonreal(lambda)?;
    let b = pi.base();
    let n = b.n();
    if h.len() != n {
        return Err(CouplingError::DimMismatch("h must lie in H".into()));
    }
    let m = b.m();
    let q = b.t_rel().basis().clone();
    let f = rows(&q, 0, n);
    let fp = rows(&q, n, n);
    let t = tau.eval(lambda)?;
    let kq = q.ncols();
    let kt = t.dim();
    let a = vstack(&[
        &hstack(&[&(fp - &f * lambda), &zeros(n, kt)]),
        &hstack(&[&(signed_boundary_map(pi) * &q), &(-t.basis())]),
    ]);
    let rhs = vstack(&[&CMat::from_column_slice(n, 1, h.as_slice()), &zeros(2 * m, 1)]);
    let sol = pinv_with(&a, 1e-12 * crate::linalg::norm2(&a).max(1.0)) * &rhs;
    let scale = 1.0 + h.norm();
    if max_abs(&(&a * &sol - &rhs)) > tol.residual * scale {
        return Err(CouplingError::NoSolution);
    }
    let kern = null_space(&a);
    let kf = &f * rows(&kern, 0, kq);
    if kern.ncols() > 0 && max_abs(&kf) > tol.residual {
        return Err(CouplingError::NonUnique);
    }
    let f1 = &f * rows(&sol, 0, kq);
    Ok(CVec::from_column_slice(f1.as_slice()))
}

/// `Γ^coupl` for `A* ⊕ S2*` into `(C^m ⊕ C^m)²`: `Γ0 = (h' + Γ1 f̂1, h - Γ0 f̂1)`, `Γ1 = (-Γ0 f̂1, h')`.
pub fn double_weyl(pi: &OrdinaryTriplet, chi: &BoundaryRelation, tol: &Tol) -> Result<BoundaryRelation, CouplingError> {
    let m = pi.base().m();
    if chi.m() != m {
        return Err(CouplingError::DimMismatch(format!("triplet into C^{}, χ into C^{}", m, chi.m())));
    }
    let (h1, h2) = (pi.base().n(), chi.n());
    let q = pi.base().t_rel().basis().clone();
    let g0 = pi.gamma0() * &q;
    let g1 = pi.gamma1() * &q;
    let cb = chi.gamma().basis();
    let ch = rows(cb, 2 * h2, m);
    let chp = rows(cb, 2 * h2 + m, m);
    let (k1, k2) = (q.ncols(), chi.gamma().dim());
    let z = |r: usize, c: usize| zeros(r, c);
    let f1part = hstack(&[&q, &z(2 * h1, k2)]);
    let f2part = hstack(&[&z(2 * h2, k1), &rows(cb, 0, 2 * h2)]);
    let gens = vstack(&[
        &assemble(&f1part, &f2part, h1, h2),
        &hstack(&[&g1, &chp]),
        &hstack(&[&(-&g0), &ch]),
        &hstack(&[&(-&g0), &z(m, k2)]),
        &hstack(&[&z(m, k1), &chp]),
    ]);
    let gamma = LinearRelation::from_generators(2 * (h1 + h2), 4 * m, &gens)?;
    Ok(BoundaryRelation::validate(gamma, tol)?)
}

/// Block formula for the double Weyl function from `M` and a pair `(Φ, Ψ)` of `τ`.
pub fn coupling_weyl_formula(m: &CMat, phi: &CMat, psi: &CMat, lambda: C64) -> Result<CMat, CouplingError> {
    let w = inverse(&(psi + m * phi)).ok_or(CouplingError::Omega0Singular(lambda))?;
    let d = m.nrows();
    let a = -(phi * &w);
    let b = eye(d) - phi * &w * m;
    let c = psi * &w;
    let e = psi * &w * m;
    Ok(crate::linalg::block2(&a, &b, &c, &e))
}

/// `H^(1)`, its boundary relation and Weyl function `-Φ(Ψ + MΦ)^{-1}`.
pub fn intermediate_h1(pi: &OrdinaryTriplet, chi: &BoundaryRelation, tol: &Tol) -> Result<Compressed, CouplingError> {
    let g = double_weyl(pi, chi, tol)?;
    let m = pi.base().m();
    Ok(block_compress(&g, &SpaceSplit::new(m, m), 1, tol)?)
}

/// `H^(2)`, its boundary relation and Weyl function `Ψ(Ψ + MΦ)^{-1} M`.
pub fn intermediate_h2(pi: &OrdinaryTriplet, chi: &BoundaryRelation, tol: &Tol) -> Result<Compressed, CouplingError> {
    let g = double_weyl(pi, chi, tol)?;
    let m = pi.base().m();
    Ok(block_compress(&g, &SpaceSplit::new(m, m), 2, tol)?)
}

/// `dim S1 - dim A` for a scene whose `S1` contains `A = ker Γ`.
pub fn s1_excess(scene: &CouplingScene, pi: &OrdinaryTriplet) -> usize {
    scene.s1.dim() - pi.base().s_rel().dim()
}

/// Embeds a relation in `C^{h1}` as the `H1`-part of `C^{h1+h2}` acting trivially on `H2`.
pub fn embed_first(a: &LinearRelation, h2: usize) -> LinearRelation {
    let h1 = a.dim_in();
    let gens = assemble(a.basis(), &zeros(2 * h2, a.dim()), h1, h2);
    LinearRelation::from_generators(h1 + h2, h1 + h2, &gens).expect("shape")
}

/// Whether `A ⊕ {0} ⊆ Ã`.
pub fn extends(a_tilde: &LinearRelation, a: &LinearRelation, tol: &Tol) -> bool {
    let h2 = a_tilde.dim_in() - a.dim_in();
    a_tilde.contains(&embed_first(a, h2), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boundary::{lambda_samples, realize_constant, realize_herglotz, von_neumann_triplet};
    use crate::linalg::c;
    use crate::models::fix_b_matrix;
    use crate::linrel::Subspace;
    use crate::nevanlinna::{check_pair, kernel_nullity, nev_kernel, FamilyPair, HerglotzModel};
    use crate::random;
    use proptest::prelude::*;

    fn tol() -> Tol {
        Tol::default()
    }

    fn i() -> C64 {
        c(0.0, 1.0)
    }

    /// `Γ0{f, f'} = f`, `Γ1{f, f'} = f'` on `C^1`.
    fn identity_triplet() -> OrdinaryTriplet {
        let g = LinearRelation::graph_of(&eye(2));
        OrdinaryTriplet::new(BoundaryRelation::validate(g, &tol()).unwrap(), &tol()).unwrap()
    }

    fn fix_b_scene() -> CouplingScene {
        CouplingScene::new(LinearRelation::graph_of(&fix_b_matrix()), 1, &tol()).unwrap()
    }

    fn random_scene(seed: u64, h1: usize, h2: usize) -> (CouplingScene, OrdinaryTriplet) {
        let mut g = random::rng(seed);
        let a = LinearRelation::graph_of(&random::hermitian(&mut g, h1 + h2));
        let sc = CouplingScene::new(a, h1, &tol()).unwrap();
        let pi = von_neumann_triplet(&sc.s1, None, &tol()).unwrap();
        (sc, pi)
    }

    #[test]
    fn fix_b_chi_and_tau() {
        let t = tol();
        let sc = fix_b_scene();
        assert_eq!((sc.s1.dim(), sc.s2.dim()), (0, 0));
        let pi = identity_triplet();
        let chi = induced_chi(&sc, &pi, &t).unwrap();
        // χ = {((f2, f1), (f1, -f2))}
        let want = CMat::from_row_slice(4, 2, &[
            c(1.0, 0.0), c(0.0, 0.0),
            c(0.0, 0.0), c(1.0, 0.0),
            c(0.0, 0.0), c(1.0, 0.0),
            c(-1.0, 0.0), c(0.0, 0.0),
        ]);
        assert!(chi.gamma().equals(&LinearRelation::from_generators(2, 2, &want).unwrap(), &t));
        let tau = tau_of_extension(&sc, &pi, &t).unwrap();
        for l in lambda_samples() {
            let tv = tau.value(l).unwrap().as_matrix().unwrap()[(0, 0)];
            assert!((tv + l.inv()).norm() < 1e-12);
            assert!(tau.value(l).unwrap().equals(&chi.weyl(l).unwrap(), &t));
        }
        assert!(couple(&pi, &chi, &t).unwrap().equals(&sc.a_tilde, &t));
    }

    #[test]
    fn fix_b_resolvent_both_routes() {
        let t = tol();
        let sc = fix_b_scene();
        let pi = identity_triplet();
        let tau = tau_of_extension(&sc, &pi, &t).unwrap();
        let lhs = sc.generalized_resolvent(i()).unwrap().compressed[(0, 0)];
        let rhs = krein_rhs(&pi, &tau, i()).unwrap()[(0, 0)];
        assert!((lhs - c(0.0, 0.5)).norm() < 1e-12);
        assert!((rhs - c(0.0, 0.5)).norm() < 1e-12);
        let f = straus_solve(&pi, &tau, &CVec::from_element(1, c(1.0, 0.0)), i(), &t).unwrap();
        assert!((f[0] - c(0.0, 0.5)).norm() < 1e-12);
        let z = straus_solve(&pi, &tau, &CVec::zeros(1), i(), &t).unwrap();
        assert!(z.norm() < 1e-14);
    }

    #[test]
    fn canonical_scene_reduces_to_constant_parameter() {
        let t = tol();
        // S = {0} in C with Γ0 = f, Γ1 = f'; Θ = 0 gives Ã = {(f, 0)}
        let pi = identity_triplet();
        let theta = LinearRelation::graph_of(&zeros(1, 1));
        let a = pi.base().extension(&theta).unwrap();
        let sc = CouplingScene::new(a, 1, &t).unwrap();
        assert_eq!(sc.h2, 0);
        let tau = tau_of_extension(&sc, &pi, &t).unwrap();
        assert!(tau.value(i()).unwrap().equals(&theta.scale(c(-1.0, 0.0)), &t));
        for l in lambda_samples() {
            let lhs = sc.generalized_resolvent(l).unwrap().compressed[(0, 0)];
            let rhs = krein_rhs(&pi, &tau, l).unwrap()[(0, 0)];
            assert!((lhs + l.inv()).norm() < 1e-12);
            assert!((rhs + l.inv()).norm() < 1e-12);
        }
    }

    #[test]
    fn block_diagonal_scene_is_not_minimal() {
        let t = tol();
        let pi = von_neumann_triplet(&crate::models::fix_a(), None, &t).unwrap();
        let a0 = pi.base().a0().unwrap();
        let h = LinearRelation::graph_of(&CMat::from_element(1, 1, c(0.5, 0.0)));
        let sc = CouplingScene::new(a0.direct_sum(&h), 2, &t).unwrap();
        assert!(!sc.is_minimal().unwrap());
        let chi = induced_chi(&sc, &pi, &t).unwrap();
        let tau = chi.weyl(i()).unwrap();
        assert!(tau.equals(&LinearRelation::pure_mul(1, &Subspace::full(1)), &t));
    }

    #[test]
    fn random_scene_round_trip() {
        let t = tol();
        let (sc, pi) = random_scene(5, 3, 2);
        assert!(sc.is_minimal().unwrap());
        let (a, b, cc, d) = sc.defect_numbers().unwrap();
        assert_eq!((a, b), (d, cc));
        let chi = induced_chi(&sc, &pi, &t).unwrap();
        assert!(chi.green_residual() < 1e-10);
        assert!(chi.s_rel().equals(&sc.s2, &t));
        let back = couple(&pi, &chi, &t).unwrap();
        assert!(back.equals(&sc.a_tilde, &t));
        let sc2 = CouplingScene::new(back, 3, &t).unwrap();
        assert!(induced_chi(&sc2, &pi, &t).unwrap().gamma().equals(chi.gamma(), &t));
    }

    #[test]
    fn multivalued_chi_enlarges_s1() {
        let t = tol();
        let pi = von_neumann_triplet(&crate::models::fix_a(), None, &t).unwrap();
        let chi = realize_constant(&LinearRelation::pure_mul(1, &Subspace::full(1)), &t).unwrap();
        let a = couple(&pi, &chi, &t).unwrap();
        let sc = CouplingScene::new(a, 2, &t).unwrap();
        assert_eq!(s1_excess(&sc, &pi), chi.gamma().mul().dim());
        let model = HerglotzModel::new(zeros(2, 2), crate::linalg::block_diag(&eye(1), &zeros(1, 1)), vec![(0.0, eye(2))]).unwrap();
        let pi2 = von_neumann_triplet(&LinearRelation::trivial(2, 2), None, &t).unwrap();
        let chi2 = realize_herglotz(&model, &t).unwrap();
        let sc2 = CouplingScene::new(couple(&pi2, &chi2, &t).unwrap(), 2, &t).unwrap();
        let k = nev_kernel(&model, i(), i()).unwrap();
        assert_eq!(s1_excess(&sc2, &pi2), chi2.gamma().mul().dim());
        assert_eq!(s1_excess(&sc2, &pi2), kernel_nullity(&k, &t));
    }

    #[test]
    fn double_weyl_fix_b() {
        let t = tol();
        let sc = fix_b_scene();
        let pi = identity_triplet();
        let chi = induced_chi(&sc, &pi, &t).unwrap();
        let g = double_weyl(&pi, &chi, &t).unwrap();
        assert!(crate::boundary::check_b123(g.gamma(), &t).unwrap().all());
        let mc = g.weyl_matrix(i()).unwrap();
        assert!((mc[(0, 0)] - c(0.0, 0.5)).norm() < 1e-12);
        let h1 = intermediate_h1(&pi, &chi, &t).unwrap();
        assert!((h1.gamma.weyl_matrix(i()).unwrap()[(0, 0)] - c(0.0, 0.5)).norm() < 1e-12);
        let l = c(0.3, 1.7);
        let m = pi.base().weyl_matrix(l).unwrap();
        let (phi, psi) = (CMat::from_element(1, 1, l), CMat::from_element(1, 1, c(-1.0, 0.0)));
        let f = coupling_weyl_formula(&m, &phi, &psi, l).unwrap();
        assert!(max_abs(&(g.weyl_matrix(l).unwrap() - f)) < 1e-12);
    }

    #[test]
    fn tau_infinity_degenerates() {
        let t = tol();
        let pi = von_neumann_triplet(&crate::models::fix_a(), None, &t).unwrap();
        let chi = realize_constant(&LinearRelation::pure_mul(1, &Subspace::full(1)), &t).unwrap();
        let l = c(0.4, 0.9);
        let h1 = intermediate_h1(&pi, &chi, &t).unwrap();
        let h2 = intermediate_h2(&pi, &chi, &t).unwrap();
        assert!(h1.gamma.weyl_matrix(l).unwrap().norm() < 1e-12);
        assert!(max_abs(&(h2.gamma.weyl_matrix(l).unwrap() - pi.base().weyl_matrix(l).unwrap())) < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn resolvent_formula_and_round_trip(seed in 0u64..10_000, h1 in 2usize..5, h2 in 1usize..4) {
            let t = tol();
            let (sc, pi) = random_scene(seed, h1, h2);
            let chi = induced_chi(&sc, &pi, &t).unwrap();
            prop_assert!(couple(&pi, &chi, &t).unwrap().equals(&sc.a_tilde, &t));
            prop_assert_eq!(sc.is_minimal().unwrap(), crate::linrel::is_simple_default(chi.s_rel()).unwrap());
            let tau = tau_of_extension(&sc, &pi, &t).unwrap();
            prop_assert!(check_pair(&FamilyPair(tau.clone()), &lambda_samples()).unwrap().passes(&t));
            let mut rng = random::rng(seed + 1);
            for l in lambda_samples() {
                let lhs = sc.generalized_resolvent(l).unwrap().compressed;
                let rhs = krein_rhs(&pi, &tau, l).unwrap();
                prop_assert!(max_abs(&(&lhs - &rhs)) < 1e-8);
                let lb = sc.generalized_resolvent(l.conj()).unwrap().compressed;
                prop_assert!(max_abs(&(lb - lhs.adjoint())) < 1e-10);
                prop_assert!(tau.value(l).unwrap().equals(&chi.weyl(l).unwrap(), &t));
                let h = CVec::from_column_slice(random::gaussian(&mut rng, h1, 1).as_slice());
                let f = straus_solve(&pi, &tau, &h, l, &t).unwrap();
                prop_assert!((&lhs * &h - f).norm() < 1e-9);
            }
        }

        #[test]
        fn double_weyl_blocks(seed in 0u64..10_000) {
            let t = tol();
            let (sc, pi) = random_scene(seed, 3, 2);
            let chi = induced_chi(&sc, &pi, &t).unwrap();
            let g = double_weyl(&pi, &chi, &t).unwrap();
            prop_assert!(crate::boundary::check_b123(g.gamma(), &t).unwrap().all());
            let h1 = intermediate_h1(&pi, &chi, &t).unwrap();
            let h2 = intermediate_h2(&pi, &chi, &t).unwrap();
            prop_assert!(h1.h.classify(&t).symmetric && h2.h.classify(&t).symmetric);
            let m = pi.base().m();
            for l in lambda_samples() {
                let mm = pi.base().weyl_matrix(l).unwrap();
                let tv = chi.weyl(l).unwrap();
                let (phi, psi) = (tv.top(), tv.bottom());
                let f = coupling_weyl_formula(&mm, &phi, &psi, l).unwrap();
                let mc = g.weyl_matrix(l).unwrap();
                prop_assert!(max_abs(&(&mc - &f)) < 1e-8);
                prop_assert!(max_abs(&(h1.gamma.weyl_matrix(l).unwrap() - f.view((0, 0), (m, m)))) < 1e-8);
                prop_assert!(max_abs(&(h2.gamma.weyl_matrix(l).unwrap() - f.view((m, m), (m, m)))) < 1e-8);
                // (B - diag(M, -τ^{-1}))^{-1} for τ with invertible values
                let tm = tv.as_matrix().unwrap();
                let bm = crate::linalg::block2(&zeros(m, m), &eye(m), &eye(m), &zeros(m, m));
                let tt = crate::linalg::block_diag(&mm, &(-inverse(&tm).unwrap()));
                prop_assert!(max_abs(&(inverse(&(bm - tt)).unwrap() - &mc)) < 1e-8);
            }
        }
    }
}
