//! Boundary relations and triplets: validation, Weyl families, γ-fields and extensions.
//!
//! A boundary relation `Γ: C^{2n} -> C^{2m}` is stored with the coordinate order
//! `(f, f', h, h')`.

use thiserror::Error;

use crate::kreinspace::{inverse_main_transform, KreinError, KreinRelation};
use crate::linalg::{
    block_diag, block2, c, eye, herm_eigvals, hstack, max_abs, norm2, null_space, pinv_with, rows, svd, vstack,
    zeros, CMat, C64,
};
use crate::linrel::{LinearRelation, RelError, Subspace, Tol};
use crate::nevanlinna::{
    kernel_nullity, nev_kernel, require_nonreal, FamilyPair, HerglotzModel, NevError, NevanlinnaPair,
    RelationFamily,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundaryError {
    #[error("Green identity fails with residual {0:e}")]
    NotIsometric(f64),
    #[error("relation is isometric but not maximal: dimension {0}, expected {1}")]
    NotMaximal(usize, usize),
    #[error("defect numbers differ: n+ = {0}, n- = {1}")]
    UnequalDefect(usize, usize),
    #[error("U is not a unitary map between the defect subspaces")]
    NotIsometryU,
    #[error("relation is not symmetric")]
    NotSymmetric,
    #[error("boundary relation is not an ordinary triplet")]
    NotOrdinary,
    #[error("the generalized triplet conditions fail")]
    NotB123,
    #[error("K does not extend the multivalued part: {0}")]
    KNotExtending(String),
    #[error("no finite realization available: {0}")]
    RealizationUnavailable(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Krein(#[from] KreinError),
    #[error(transparent)]
    Nev(#[from] NevError),
}

/// Sample points used for "some and hence all λ" checks.
pub fn lambda_samples() -> [C64; 5] {
    [c(0.0, 1.0), c(0.0, 2.0), c(0.0, -1.0), c(1.0, 1.0), c(1.0, -1.0)]
}

/// Gram residual of the Green identity on a graph basis of `Γ: C^{2n} -> C^{2m}`.
pub fn green_residual(gamma: &LinearRelation) -> f64 {
    match KreinRelation::new(gamma.clone()) {
        Ok(k) => k.isometry_residual(),
        Err(_) => f64::INFINITY,
    }
}

struct Blocks {
    f: CMat,
    fp: CMat,
    h: CMat,
    hp: CMat,
}

fn blocks(gamma: &LinearRelation) -> Blocks {
    let n = gamma.dim_in() / 2;
    let m = gamma.dim_out() / 2;
    let b = gamma.basis();
    Blocks {
        f: rows(b, 0, n),
        fp: rows(b, n, n),
        h: rows(b, 2 * n, m),
        hp: rows(b, 2 * n + m, m),
    }
}

/// Coefficients (in graph-basis coordinates) of the elements with `f' = λ f`.
fn defect_coefficients(gamma: &LinearRelation, lambda: C64) -> CMat {
    let b = blocks(gamma);
    null_space(&(&b.fp - &b.f * lambda))
}

/// `Γ(N̂_λ(T))` for any relation `Γ: C^{2n} -> C^{2m}`.
pub fn weyl_of(gamma: &LinearRelation, lambda: C64) -> Result<LinearRelation, BoundaryError> {
    require_nonreal(lambda)?;
    let m = gamma.dim_out() / 2;
    let k = defect_coefficients(gamma, lambda);
    let b = blocks(gamma);
    Ok(LinearRelation::from_generators(m, m, &vstack(&[&(&b.h * &k), &(&b.hp * &k)]))?)
}

/// `γ(λ) = {(Γ0 f̂_λ, f_λ) : f̂_λ ∈ N̂_λ(T)}` for any relation `Γ: C^{2n} -> C^{2m}`.
pub fn gamma_field_of(gamma: &LinearRelation, lambda: C64) -> Result<LinearRelation, BoundaryError> {
    require_nonreal(lambda)?;
    let n = gamma.dim_in() / 2;
    let m = gamma.dim_out() / 2;
    let k = defect_coefficients(gamma, lambda);
    let b = blocks(gamma);
    Ok(LinearRelation::from_generators(m, n, &vstack(&[&(&b.h * &k), &(&b.f * &k)]))?)
}

/// `{f̂ : (f̂, ĥ) ∈ Γ for some ĥ ∈ Θ}` as a relation in `C^n`.
pub fn preimage(gamma: &LinearRelation, theta: &Subspace) -> Result<LinearRelation, BoundaryError> {
    let n = gamma.dim_in() / 2;
    if theta.ambient() != gamma.dim_out() {
        return Err(BoundaryError::DimMismatch("Θ must live in C^{2m}".into()));
    }
    let k = null_space(&hstack(&[&gamma.bottom(), &(-theta.basis())]));
    let coef = rows(&k, 0, gamma.dim());
    Ok(LinearRelation::from_generators(n, n, &(gamma.top() * coef))?)
}

/// `ker Γ0 = {f̂ : Γ f̂ ∈ {0} x C^m}` for any relation `Γ`.
pub fn kernel_gamma0(gamma: &LinearRelation) -> Result<LinearRelation, BoundaryError> {
    let m = gamma.dim_out() / 2;
    let theta = Subspace::from_columns(&vstack(&[&zeros(m, m), &eye(m)]));
    preimage(gamma, &theta)
}

/// A validated boundary relation for `S*` together with `S = ker Γ` and `T = dom Γ`.
#[derive(Clone, Debug)]
pub struct BoundaryRelation {
    gamma: LinearRelation,
    s_rel: LinearRelation,
    t_rel: LinearRelation,
}

impl BoundaryRelation {
    /// Checks the Green identity and maximality.
    pub fn validate(gamma: LinearRelation, tol: &Tol) -> Result<Self, BoundaryError> {
        if !gamma.dim_in().is_multiple_of(2) || !gamma.dim_out().is_multiple_of(2) {
            return Err(BoundaryError::DimMismatch("boundary relation needs even dimensions".into()));
        }
        let res = green_residual(&gamma);
        if res > tol.residual {
            return Err(BoundaryError::NotIsometric(res));
        }
        let (n, m) = (gamma.dim_in() / 2, gamma.dim_out() / 2);
        if gamma.dim() != n + m {
            return Err(BoundaryError::NotMaximal(gamma.dim(), n + m));
        }
        let s = gamma.ker();
        let t = gamma.dom();
        Ok(BoundaryRelation {
            s_rel: LinearRelation::new(n, n, s)?,
            t_rel: LinearRelation::new(n, n, t)?,
            gamma,
        })
    }

    /// Boundary relation `J^{-1}(Ã)` of a selfadjoint relation on `C^{n+m}`.
    pub fn from_selfadjoint(a: &LinearRelation, n: usize, tol: &Tol) -> Result<Self, BoundaryError> {
        Self::validate(inverse_main_transform(a, n)?.into_rel(), tol)
    }

    pub fn gamma(&self) -> &LinearRelation {
        &self.gamma
    }

    pub fn n(&self) -> usize {
        self.gamma.dim_in() / 2
    }

    pub fn m(&self) -> usize {
        self.gamma.dim_out() / 2
    }

    /// `S = ker Γ`.
    pub fn s_rel(&self) -> &LinearRelation {
        &self.s_rel
    }

    /// `T = dom Γ`.
    pub fn t_rel(&self) -> &LinearRelation {
        &self.t_rel
    }

    pub fn green_residual(&self) -> f64 {
        green_residual(&self.gamma)
    }

    pub fn weyl(&self, lambda: C64) -> Result<LinearRelation, BoundaryError> {
        weyl_of(&self.gamma, lambda)
    }

    pub fn gamma_field(&self, lambda: C64) -> Result<LinearRelation, BoundaryError> {
        gamma_field_of(&self.gamma, lambda)
    }

    pub fn weyl_sample(&self, lambda: C64) -> Result<WeylSample, BoundaryError> {
        Ok(WeylSample {
            lambda,
            family_value: self.weyl(lambda)?,
            gamma_field: self.gamma_field(lambda)?,
        })
    }

    /// `M(λ)` as an `m x m` matrix.
    pub fn weyl_matrix(&self, lambda: C64) -> Result<CMat, BoundaryError> {
        Ok(self.weyl(lambda)?.as_matrix()?)
    }

    /// `γ(λ)` as an `n x m` matrix.
    pub fn gamma_matrix(&self, lambda: C64) -> Result<CMat, BoundaryError> {
        Ok(self.gamma_field(lambda)?.as_matrix()?)
    }

    /// `ker Γ0`.
    pub fn a0(&self) -> Result<LinearRelation, BoundaryError> {
        kernel_gamma0(&self.gamma)
    }

    /// `ker Γ1`.
    pub fn a1(&self) -> Result<LinearRelation, BoundaryError> {
        let m = self.m();
        preimage(&self.gamma, &Subspace::from_columns(&vstack(&[&eye(m), &zeros(m, m)])))
    }

    /// `Ã_Θ = {f̂ ∈ T : Γ f̂ ∈ Θ}`.
    pub fn extension(&self, theta: &LinearRelation) -> Result<LinearRelation, BoundaryError> {
        if theta.dim_in() != self.m() || theta.dim_out() != self.m() {
            return Err(BoundaryError::DimMismatch("Θ must be a relation in C^m".into()));
        }
        preimage(&self.gamma, theta.graph())
    }

    /// The Weyl family read as a pair through graph bases.
    pub fn weyl_pair(&self) -> FamilyPair<BoundaryRelation> {
        FamilyPair(self.clone())
    }

    /// Selfadjoint relation `J(Γ)` on `C^{n+m}`.
    pub fn main_transform(&self) -> LinearRelation {
        crate::kreinspace::main_transform(&KreinRelation::new(self.gamma.clone()).expect("even dimensions"))
    }
}

impl RelationFamily for BoundaryRelation {
    fn dim(&self) -> usize {
        self.m()
    }
    fn eval(&self, lambda: C64) -> Result<LinearRelation, NevError> {
        self.weyl(lambda).map_err(|e| match e {
            BoundaryError::Nev(n) => n,
            BoundaryError::Rel(r) => NevError::Rel(r),
            other => NevError::Invalid(other.to_string()),
        })
    }
}

/// `M(λ)` and `γ(λ)` at one point.
#[derive(Clone, Debug)]
pub struct WeylSample {
    pub lambda: C64,
    pub family_value: LinearRelation,
    pub gamma_field: LinearRelation,
}

/// Single-valued boundary relation with `ran Γ = C^{2m}`.
#[derive(Clone, Debug)]
pub struct OrdinaryTriplet {
    base: BoundaryRelation,
    map: CMat,
}

impl OrdinaryTriplet {
    pub fn new(base: BoundaryRelation, tol: &Tol) -> Result<Self, BoundaryError> {
        let g = base.gamma();
        if g.mul().dim() != 0 || g.ran().dim() != g.dim_out() {
            return Err(BoundaryError::NotOrdinary);
        }
        let _ = tol;
        let map = g.bottom() * pinv_with(&g.top(), 1e-12);
        Ok(OrdinaryTriplet { base, map })
    }

    pub fn base(&self) -> &BoundaryRelation {
        &self.base
    }

    /// `2m x 2n` matrix acting as `Γ` on `T`.
    pub fn map(&self) -> &CMat {
        &self.map
    }

    pub fn gamma0(&self) -> CMat {
        rows(&self.map, 0, self.base.m())
    }

    pub fn gamma1(&self) -> CMat {
        rows(&self.map, self.base.m(), self.base.m())
    }
}

/// Boundary triplet built from the decomposition `S* = S ⊕ N̂_i ⊕ N̂_{-i}`.
///
/// `u` maps coordinates of an orthonormal basis of `N_i` to those of `N_{-i}`;
/// the identity is used when omitted.
pub fn von_neumann_triplet(s: &LinearRelation, u: Option<&CMat>, tol: &Tol) -> Result<OrdinaryTriplet, BoundaryError> {
    let n = s.dim_in();
    if s.dim_out() != n || !s.classify(tol).symmetric {
        return Err(BoundaryError::NotSymmetric);
    }
    let i = c(0.0, 1.0);
    let sa = s.adjoint();
    let (np, _) = sa.eigenspace(i)?;
    let (nm, _) = sa.eigenspace(-i)?;
    let (dp, dm) = (np.dim(), nm.dim());
    if dp != dm {
        return Err(BoundaryError::UnequalDefect(dp, dm));
    }
    let d = dp;
    let u = match u {
        Some(u) => {
            if u.shape() != (d, d) || max_abs(&(u.adjoint() * u - eye(d))) > tol.residual {
                return Err(BoundaryError::NotIsometryU);
            }
            u.clone()
        }
        None => eye(d),
    };
    let qp = np.basis();
    let qm = nm.basis() * &u;
    let k = s.dim();
    let bin = hstack(&[s.basis(), &vstack(&[qp, &(qp * i)]), &vstack(&[&qm, &(&qm * -i)])]);
    let bout = hstack(&[
        &zeros(2 * d, k),
        &vstack(&[&eye(d), &(eye(d) * i)]),
        &vstack(&[&eye(d), &(eye(d) * -i)]),
    ]);
    let gamma = LinearRelation::from_generators(2 * n, 2 * d, &vstack(&[&bin, &bout]))?;
    OrdinaryTriplet::new(BoundaryRelation::validate(gamma, tol)?, tol)
}

/// Residuals of the two resolvent-type identities linking `γ`, `M` and `A0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeylIdentityReport {
    /// `γ(λ) = [I + (λ-μ)(A0-λ)^{-1}] γ(μ)`.
    pub gamma_residual: f64,
    /// `M(λ) - M(μ)* = (λ-μ̄) γ(μ)* [I + (λ-μ)(A0-λ)^{-1}] γ(μ)`.
    pub weyl_residual: f64,
}

pub fn check_weyl_identities(g: &BoundaryRelation, lambda: C64, mu: C64) -> Result<WeylIdentityReport, BoundaryError> {
    require_nonreal(lambda)?;
    require_nonreal(mu)?;
    let a0 = g.a0()?;
    let r = a0.resolvent(lambda)?;
    let gl = g.gamma_matrix(lambda)?;
    let gm = g.gamma_matrix(mu)?;
    let ml = g.weyl_matrix(lambda)?;
    let mm = g.weyl_matrix(mu)?;
    let n = g.n();
    let shifted = (eye(n) + r * (lambda - mu)) * &gm;
    let gamma_residual = max_abs(&(&gl - &shifted));
    let rhs = mm.adjoint() + gm.adjoint() * &shifted * (lambda - mu.conj());
    Ok(WeylIdentityReport {
        gamma_residual,
        weyl_residual: max_abs(&(ml - rhs)),
    })
}

/// Defect numbers of `S` versus the multivalued part of `Γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DefectReport {
    pub n_plus: usize,
    pub n_minus: usize,
    pub m: usize,
    pub mul_dim: usize,
    /// `m - n± = dim mul Γ` (vacuous when the defects differ).
    pub identity_holds: bool,
}

pub fn defect_report(g: &BoundaryRelation) -> Result<DefectReport, BoundaryError> {
    let sa = g.s_rel().adjoint();
    let n_plus = sa.eigenspace(c(0.0, 1.0))?.0.dim();
    let n_minus = sa.eigenspace(c(0.0, -1.0))?.0.dim();
    let mul_dim = g.gamma().mul().dim();
    let m = g.m();
    Ok(DefectReport {
        n_plus,
        n_minus,
        m,
        mul_dim,
        identity_holds: n_plus != n_minus || m == n_plus + mul_dim,
    })
}

/// Compares `dim mul Γ` with `dim ker N(λ, λ)` of a pair representing the Weyl family.
pub fn mul_via_kernel<P: NevanlinnaPair + ?Sized>(
    g: &BoundaryRelation,
    p: &P,
    lambda: C64,
    tol: &Tol,
) -> Result<(usize, usize, bool), BoundaryError> {
    let k = nev_kernel(p, lambda, lambda)?;
    let a = g.gamma().mul().dim();
    let b = kernel_nullity(&k, tol);
    Ok((a, b, a == b))
}

/// `Ã_Θ` for an ordinary triplet.
pub fn intermediate_extension(t: &OrdinaryTriplet, theta: &LinearRelation) -> Result<LinearRelation, BoundaryError> {
    t.base().extension(theta)
}

/// Outcome of the generalized triplet conditions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct B123Report {
    /// Green identity.
    pub b1: bool,
    /// `ran Γ0 = C^m`.
    pub b2: bool,
    /// `ker Γ0` selfadjoint.
    pub b3: bool,
    /// `dom M(λ) = C^m` at `±i`.
    pub weyl_bounded: bool,
}

impl B123Report {
    pub fn all(&self) -> bool {
        self.b1 && self.b2 && self.b3
    }
}

pub fn check_b123(gamma: &LinearRelation, tol: &Tol) -> Result<B123Report, BoundaryError> {
    if !gamma.dim_in().is_multiple_of(2) || !gamma.dim_out().is_multiple_of(2) {
        return Err(BoundaryError::DimMismatch("boundary relation needs even dimensions".into()));
    }
    let m = gamma.dim_out() / 2;
    let b1 = green_residual(gamma) <= tol.residual;
    let h = rows(&gamma.bottom(), 0, m);
    let b2 = Subspace::from_columns(&h).dim() == m;
    let b3 = kernel_gamma0(gamma)?.classify(tol).selfadjoint;
    let mut weyl_bounded = true;
    for l in [c(0.0, 1.0), c(0.0, -1.0)] {
        let w = weyl_of(gamma, l)?;
        weyl_bounded &= w.dom().dim() == m && w.mul().dim() == 0;
    }
    Ok(B123Report { b1, b2, b3, weyl_bounded })
}

/// Single-valued boundary relation obtained by splitting off `mul Γ`.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub gamma: BoundaryRelation,
    /// Orthonormal basis of `H1 = H ⊖ π1 mul Γ`.
    pub h1: CMat,
    pub k: CMat,
}

impl Reduced {
    /// `max |M(λ) - K - Q1 M1(λ) Q1*|`.
    pub fn block_identity_residual(&self, original: &BoundaryRelation, lambda: C64) -> Result<f64, BoundaryError> {
        let m = original.weyl_matrix(lambda)?;
        let m1 = self.gamma.weyl_matrix(lambda)?;
        Ok(max_abs(&(m - &self.k - &self.h1 * m1 * self.h1.adjoint())))
    }
}

/// Splits `M(λ) = K + diag(0, M1(λ))` for `Γ` with (B1)-(B3); `K` is Hermitian and extends
/// the symmetric operator whose graph is `mul Γ`.
pub fn reduce_multivalued(g: &BoundaryRelation, k: &CMat, tol: &Tol) -> Result<Reduced, BoundaryError> {
    let m = g.m();
    let n = g.n();
    if !check_b123(g.gamma(), tol)?.all() {
        return Err(BoundaryError::NotB123);
    }
    if k.shape() != (m, m) {
        return Err(BoundaryError::KNotExtending("K must be m x m".into()));
    }
    let scale = 1.0 + max_abs(k);
    if max_abs(&(k - k.adjoint())) > tol.residual * scale {
        return Err(BoundaryError::KNotExtending("K is not Hermitian".into()));
    }
    let mul = g.gamma().mul();
    let hm = rows(mul.basis(), 0, m);
    let hpm = rows(mul.basis(), m, m);
    if mul.dim() > 0 && norm2(&(&hpm - k * &hm)) > tol.residual * scale {
        return Err(BoundaryError::KNotExtending("K h != h' on mul Γ".into()));
    }
    let h0 = Subspace::from_columns(&hm);
    let q1 = h0.complement().basis().clone();
    let m1 = q1.ncols();
    let q1h = q1.adjoint();
    let out = block2(&q1h, &zeros(m1, m), &(-(&q1h * k)), &q1h);
    let map = block_diag(&eye(2 * n), &out);
    let reduced = g.gamma().transform(&map, 2 * n, 2 * m1)?;
    Ok(Reduced {
        gamma: BoundaryRelation::validate(reduced, tol)?,
        h1: q1,
        k: k.clone(),
    })
}

/// Boundary relation on `C^{N+r}` whose Weyl function is the discrete Herglotz model.
pub fn realize_herglotz(model: &HerglotzModel, tol: &Tol) -> Result<BoundaryRelation, BoundaryError> {
    let m = model.dim();
    let mut q_rows: Vec<CMat> = vec![];
    let mut t_vals: Vec<f64> = vec![];
    let mut r = model.a.clone();
    for (t, sig) in &model.masses {
        r -= sig * c(t / (t * t + 1.0), 0.0);
        for (u, s) in psd_factor(sig) {
            q_rows.push(u.adjoint() * c(s.sqrt(), 0.0));
            t_vals.push(*t);
        }
    }
    let r = -r;
    let big_n = t_vals.len();
    let q = if big_n == 0 {
        zeros(0, m)
    } else {
        vstack(&q_rows.iter().collect::<Vec<_>>())
    };
    let v = {
        let f = psd_factor(&model.b);
        let cols: Vec<CMat> = f.iter().map(|(u, s)| u * c(s.sqrt(), 0.0)).collect();
        if cols.is_empty() {
            zeros(m, 0)
        } else {
            hstack(&cols.iter().collect::<Vec<_>>())
        }
    };
    let rr = v.ncols();
    let p = CMat::from_diagonal(&crate::linalg::CVec::from_iterator(big_n, t_vals.iter().map(|&t| c(t, 0.0))));
    let np = big_n + rr;
    let params = big_n + m + rr;
    // parameters (x, h, y')
    let mut g = zeros(2 * np + 2 * m, params);
    let (xo, ho, yo) = (0, big_n, big_n + m);
    g.view_mut((0, xo), (big_n, big_n)).copy_from(&eye(big_n));
    g.view_mut((big_n, ho), (rr, m)).copy_from(&v.adjoint());
    g.view_mut((np, xo), (big_n, big_n)).copy_from(&p);
    g.view_mut((np, ho), (big_n, m)).copy_from(&q);
    g.view_mut((np + big_n, yo), (rr, rr)).copy_from(&eye(rr));
    g.view_mut((2 * np, ho), (m, m)).copy_from(&eye(m));
    g.view_mut((2 * np + m, xo), (m, big_n)).copy_from(&(-q.adjoint()));
    g.view_mut((2 * np + m, ho), (m, m)).copy_from(&(-&r));
    g.view_mut((2 * np + m, yo), (m, rr)).copy_from(&v);
    let gamma = LinearRelation::from_generators(2 * np, 2 * m, &g)?;
    BoundaryRelation::validate(gamma, tol)
}

/// Boundary relation from `C^0` whose Weyl family is the selfadjoint constant `Θ`.
pub fn realize_constant(theta: &LinearRelation, tol: &Tol) -> Result<BoundaryRelation, BoundaryError> {
    if theta.dim_in() != theta.dim_out() {
        return Err(BoundaryError::DimMismatch("Θ must be a relation in C^m".into()));
    }
    let m = theta.dim_in();
    let gamma = LinearRelation::new(0, 2 * m, theta.graph().clone())?;
    BoundaryRelation::validate(gamma, tol).map_err(|e| match e {
        BoundaryError::NotIsometric(_) | BoundaryError::NotMaximal(..) => {
            BoundaryError::RealizationUnavailable("Θ is not selfadjoint".into())
        }
        other => other,
    })
}

/// Rank-one factors `(u, s)` of a positive semidefinite matrix, `X = Σ s u u*`.
fn psd_factor(x: &CMat) -> Vec<(CMat, f64)> {
    let d = svd(x);
    let top = d.s.first().copied().unwrap_or(0.0);
    let cut = 1e-12 * top.max(1.0) * x.nrows().max(1) as f64;
    (0..d.s.len())
        .filter(|&j| d.s[j] > cut)
        .map(|j| (d.u.columns(j, 1).into_owned(), d.s[j]))
        .collect()
}

/// Smallest eigenvalue of `Im M(i)`; positive for ordinary triplets.
pub fn im_weyl_min_eig(g: &BoundaryRelation) -> Result<f64, BoundaryError> {
    let w = g.weyl_matrix(c(0.0, 1.0))?;
    Ok(herm_eigvals(&crate::linalg::im_part(&w)).first().copied().unwrap_or(f64::INFINITY))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kreinspace::inverse_main_transform;
    use crate::models::{fix_a, fix_b_gamma, fix_b_matrix};
    use crate::nevanlinna::{check_pair, classify_family, herglotz_eval};
    use crate::random;
    use proptest::prelude::*;

    fn i() -> C64 {
        c(0.0, 1.0)
    }

    fn tol() -> Tol {
        Tol::default()
    }

    /// Γ from a random Hermitian matrix on `C^1 ⊕ C^2`.
    fn c1c2(seed: u64) -> BoundaryRelation {
        let mut g = random::rng(seed);
        let a = LinearRelation::graph_of(&random::hermitian(&mut g, 3));
        BoundaryRelation::from_selfadjoint(&a, 1, &tol()).unwrap()
    }

    #[test]
    fn fix_b_is_valid_with_weyl_minus_inverse() {
        let g = BoundaryRelation::validate(fix_b_gamma(), &tol()).unwrap();
        assert_eq!(g.s_rel().dim(), 0);
        let m = g.weyl_matrix(i()).unwrap();
        assert!((m[(0, 0)] - i()).norm() < 1e-12);
        let l = c(0.3, -0.7);
        assert!((g.weyl_matrix(l).unwrap()[(0, 0)] + l.inv()).norm() < 1e-12);
        let viat = BoundaryRelation::from_selfadjoint(&LinearRelation::graph_of(&fix_b_matrix()), 1, &tol()).unwrap();
        assert!(viat.gamma().equals(g.gamma(), &tol()));
    }

    #[test]
    fn dropping_a_generator_is_not_maximal() {
        let b = fix_b_gamma().basis().columns(0, 1).into_owned();
        let r = LinearRelation::from_generators(2, 2, &b).unwrap();
        assert!(matches!(BoundaryRelation::validate(r, &tol()), Err(BoundaryError::NotMaximal(1, 2))));
    }

    #[test]
    fn random_hermitian_split_is_valid() {
        let mut g = random::rng(5);
        let a = LinearRelation::graph_of(&random::hermitian(&mut g, 5));
        let b = BoundaryRelation::from_selfadjoint(&a, 3, &tol()).unwrap();
        assert!(b.green_residual() < 1e-12);
        assert!(b.main_transform().equals(&a, &tol()));
    }

    #[test]
    fn fix_a_von_neumann() {
        let t = von_neumann_triplet(&fix_a(), None, &tol()).unwrap();
        let b = t.base();
        assert!(b.s_rel().equals(&fix_a(), &tol()));
        assert!(b.a0().unwrap().classify(&tol()).selfadjoint);
        assert!(b.a1().unwrap().classify(&tol()).selfadjoint);
        assert!((b.weyl_matrix(i()).unwrap()[(0, 0)] - i()).norm() < 1e-12);
        assert!(b.t_rel().equals(&fix_a().adjoint(), &tol()));
        let rep = check_weyl_identities(b, i(), c(0.0, 2.0)).unwrap();
        assert!(rep.gamma_residual < 1e-10 && rep.weyl_residual < 1e-10);
        let same = check_weyl_identities(b, c(0.5, 1.0), c(0.5, 1.0)).unwrap();
        assert!(same.gamma_residual < 1e-12);
    }

    #[test]
    fn von_neumann_edge_cases() {
        let s0 = LinearRelation::trivial(1, 1);
        let t = von_neumann_triplet(&s0, Some(&eye(1)), &tol()).unwrap();
        let w = t.base().weyl_matrix(c(0.2, 0.9)).unwrap();
        assert!(w[(0, 0)].im > 0.0);
        let sa = LinearRelation::graph_of(&CMat::from_element(1, 1, c(2.0, 0.0)));
        let t = von_neumann_triplet(&sa, None, &tol()).unwrap();
        assert_eq!(t.base().m(), 0);
        let bad = CMat::from_element(1, 1, c(2.0, 0.0));
        assert_eq!(von_neumann_triplet(&s0, Some(&bad), &tol()).unwrap_err(), BoundaryError::NotIsometryU);
    }

    #[test]
    fn defect_and_kernel_reports() {
        let g = BoundaryRelation::validate(fix_b_gamma(), &tol()).unwrap();
        let d = defect_report(&g).unwrap();
        assert_eq!((d.n_plus, d.n_minus, d.m, d.mul_dim, d.identity_holds), (1, 1, 1, 0, true));
        let g = c1c2(3);
        let d = defect_report(&g).unwrap();
        assert_eq!((d.n_plus, d.mul_dim, d.identity_holds), (1, 1, true));
        let (a, b, ok) = mul_via_kernel(&g, &g.weyl_pair(), i(), &tol()).unwrap();
        assert_eq!((a, b, ok), (1, 1, true));
        let t = von_neumann_triplet(&fix_a(), None, &tol()).unwrap();
        assert_eq!(mul_via_kernel(t.base(), &t.base().weyl_pair(), i(), &tol()).unwrap(), (0, 0, true));
    }

    #[test]
    fn intermediate_extensions() {
        let t = von_neumann_triplet(&fix_a(), None, &tol()).unwrap();
        let full = LinearRelation::product_space(&Subspace::full(1), &Subspace::full(1));
        assert!(intermediate_extension(&t, &full).unwrap().equals(&fix_a().adjoint(), &tol()));
        let inf = LinearRelation::pure_mul(1, &Subspace::full(1));
        assert!(intermediate_extension(&t, &inf).unwrap().equals(&t.base().a0().unwrap(), &tol()));
        for x in [-2.0, 0.0, 0.7] {
            let th = LinearRelation::graph_of(&CMat::from_element(1, 1, c(x, 0.0)));
            assert!(intermediate_extension(&t, &th).unwrap().classify(&tol()).selfadjoint);
        }
        let th = LinearRelation::graph_of(&CMat::from_element(1, 1, c(0.0, 1.0)));
        let e = intermediate_extension(&t, &th).unwrap().classify(&tol());
        assert!(!e.symmetric && e.maximal_dissipative);
    }

    #[test]
    fn b123_and_reduction() {
        let t = von_neumann_triplet(&fix_a(), None, &tol()).unwrap();
        assert!(check_b123(t.base().gamma(), &tol()).unwrap().all());
        assert!(check_b123(&fix_b_gamma(), &tol()).unwrap().all());
        let g = c1c2(11);
        let rep = check_b123(g.gamma(), &tol()).unwrap();
        assert!(rep.all() && rep.weyl_bounded);
        let mul = g.gamma().mul();
        let h = rows(mul.basis(), 0, 2);
        let hp = rows(mul.basis(), 2, 2);
        let nh = h.norm();
        let u = &h / c(nh, 0.0);
        let w = &hp / c(nh, 0.0);
        let p0 = &u * u.adjoint();
        let q = eye(2) - &p0;
        let k1 = &w * u.adjoint() + &u * w.adjoint() - &p0 * (u.adjoint() * &w)[(0, 0)];
        let k2 = &k1 + &q * c(3.0, 0.0);
        let r1 = reduce_multivalued(&g, &k1, &tol()).unwrap();
        let r2 = reduce_multivalued(&g, &k2, &tol()).unwrap();
        assert_eq!(r1.gamma.m(), 1);
        assert_eq!(r1.gamma.gamma().mul().dim(), 0);
        for l in lambda_samples() {
            assert!(r1.block_identity_residual(&g, l).unwrap() < 1e-9);
            assert!(r2.block_identity_residual(&g, l).unwrap() < 1e-9);
            let d = r1.gamma.weyl_matrix(l).unwrap() - r2.gamma.weyl_matrix(l).unwrap();
            // the strict part differs by the constant H1 block of K
            assert!((d[(0, 0)] - c(3.0, 0.0)).norm() < 1e-9);
        }
        let bad = &k1 + &p0;
        assert!(matches!(reduce_multivalued(&g, &bad, &tol()), Err(BoundaryError::KNotExtending(_))));
        let single = reduce_multivalued(t.base(), &zeros(1, 1), &tol()).unwrap();
        assert_eq!(single.gamma.m(), 1);
        assert!(single.block_identity_residual(t.base(), i()).unwrap() < 1e-10);
    }

    #[test]
    fn transpose_with_singular_weyl_fails_b2() {
        // FIX-B next to the constant family 0: M(λ) = diag(-1/λ, 0)
        let r = |x: f64| c(x, 0.0);
        let g = CMat::from_column_slice(
            6,
            3,
            &[
                r(1.0), r(0.0), r(0.0), r(0.0), r(-1.0), r(0.0),
                r(0.0), r(1.0), r(1.0), r(0.0), r(0.0), r(0.0),
                r(0.0), r(0.0), r(0.0), r(1.0), r(0.0), r(0.0),
            ],
        );
        let gamma = LinearRelation::from_generators(2, 4, &g).unwrap();
        let rep = check_b123(&gamma, &tol()).unwrap();
        assert!(rep.all() && rep.weyl_bounded);
        let flip = block2(&zeros(2, 2), &eye(2), &(-eye(2)), &zeros(2, 2));
        let gt = gamma.transform(&block_diag(&eye(2), &flip), 2, 4).unwrap();
        let rep = check_b123(&gt, &tol()).unwrap();
        assert!(rep.b1 && !rep.b2);
    }

    #[test]
    fn herglotz_realization_matches_formula() {
        let mut g = random::rng(7);
        let model = HerglotzModel::new(
            random::hermitian(&mut g, 2),
            random::psd(&mut g, 2, 1),
            vec![(-1.0, random::psd(&mut g, 2, 1)), (0.5, random::psd(&mut g, 2, 2))],
        )
        .unwrap();
        let b = realize_herglotz(&model, &tol()).unwrap();
        for l in lambda_samples() {
            let w = b.weyl_matrix(l).unwrap();
            assert!(max_abs(&(w - herglotz_eval(&model, l).unwrap())) < 1e-9);
        }
        let theta = LinearRelation::pure_mul(1, &Subspace::full(1));
        let cb = realize_constant(&theta, &tol()).unwrap();
        assert!(cb.weyl(i()).unwrap().equals(&theta, &tol()));
        let bad = LinearRelation::graph_of(&CMat::from_element(1, 1, c(0.0, 1.0)));
        assert!(matches!(realize_constant(&bad, &tol()), Err(BoundaryError::RealizationUnavailable(_))));
    }

    fn random_triplet(seed: u64) -> OrdinaryTriplet {
        let mut g = random::rng(seed);
        let n = 2 + (seed % 4) as usize;
        let k = 1 + (seed % (n as u64 - 1)) as usize;
        let s = random::symmetric_operator(&mut g, n, k);
        von_neumann_triplet(&s, None, &tol()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn weyl_family_invariants(seed in 0u64..10_000) {
            let t = random_triplet(seed);
            let b = t.base();
            prop_assert!(b.green_residual() < 1e-9);
            prop_assert!(b.a0().unwrap().classify(&tol()).selfadjoint);
            prop_assert!(b.a1().unwrap().classify(&tol()).selfadjoint);
            prop_assert!(im_weyl_min_eig(b).unwrap() > 1e-9);
            prop_assert!(classify_family(b, i(), &tol()).unwrap().ru_bounded);
            for l in lambda_samples() {
                let w = b.weyl(l).unwrap();
                prop_assert!(b.weyl(l.conj()).unwrap().equals(&w.adjoint(), &tol()));
            }
            let pc = check_pair(&b.weyl_pair(), &lambda_samples()).unwrap();
            prop_assert!(pc.passes(&tol()));
        }

        #[test]
        fn gamma_field_reproduces_boundary_values(seed in 0u64..10_000, re in -2.0f64..2.0, im in 0.2f64..3.0) {
            let t = random_triplet(seed);
            let l = c(re, im);
            let gm = t.base().gamma_matrix(l).unwrap();
            let m = t.base().m();
            let lifted = vstack(&[&gm, &(&gm * l)]);
            prop_assert!(max_abs(&(t.gamma0() * lifted - eye(m))) < 1e-8);
            let rep = check_weyl_identities(t.base(), l, c(-re, 1.5 * im)).unwrap();
            prop_assert!(rep.gamma_residual < 1e-8 && rep.weyl_residual < 1e-8);
        }

        #[test]
        fn defect_identity(seed in 0u64..10_000, n in 1usize..4, m in 1usize..4) {
            let mut g = random::rng(seed);
            let a = random::selfadjoint_relation(&mut g, n + m, (seed % 2) as usize);
            let b = BoundaryRelation::from_selfadjoint(&a, n, &tol()).unwrap();
            let d = defect_report(&b).unwrap();
            prop_assert!(d.identity_holds);
            let k = KreinRelation::new(b.gamma().clone()).unwrap();
            prop_assert!(k.is_unitary(&tol()));
            prop_assert!(inverse_main_transform(&b.main_transform(), n).unwrap().rel().equals(b.gamma(), &tol()));
        }
    }
}
