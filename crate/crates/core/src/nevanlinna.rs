//! Nevanlinna pairs and families, their kernels, subclasses and discrete Herglotz models.

use std::sync::Arc;

use thiserror::Error;

use crate::linalg::{c, eye, herm_eigvals, im_part, max_abs, sigma_min, vstack, zeros, CMat, C64};
use crate::linrel::{LinearRelation, RelError, Subspace, Tol};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NevError {
    #[error("lambda = {0} lies on the real axis")]
    RealAxis(C64),
    #[error("lambda coincides with the conjugate of mu")]
    ConjugateCoincidence,
    #[error("lambda hits the pole t = {0}")]
    PoleHit(f64),
    #[error("lambda = {0} is within the rejection radius of a pole")]
    NearPole(C64),
    #[error("invalid model: {0}")]
    Invalid(String),
    #[error(transparent)]
    Rel(#[from] RelError),
}

/// Points closer to the real axis than this are rejected.
pub const REAL_AXIS_TOL: f64 = 1e-14;

pub fn require_nonreal(lambda: C64) -> Result<(), NevError> {
    if lambda.im.abs() <= REAL_AXIS_TOL * lambda.norm().max(1.0) {
        Err(NevError::RealAxis(lambda))
    } else {
        Ok(())
    }
}

/// `λ ↦ (Φ(λ), Ψ(λ))` with values `m x m`.
pub trait NevanlinnaPair: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, lambda: C64) -> Result<(CMat, CMat), NevError>;
}

/// `λ ↦ M(λ)`, a relation in `C^m`.
pub trait RelationFamily: Send + Sync {
    fn dim(&self) -> usize;
    fn eval(&self, lambda: C64) -> Result<LinearRelation, NevError>;
}

impl<T: NevanlinnaPair + ?Sized> NevanlinnaPair for Arc<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, lambda: C64) -> Result<(CMat, CMat), NevError> {
        (**self).eval(lambda)
    }
}

impl<T: NevanlinnaPair + ?Sized> NevanlinnaPair for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, lambda: C64) -> Result<(CMat, CMat), NevError> {
        (**self).eval(lambda)
    }
}

impl<T: RelationFamily + ?Sized> RelationFamily for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, lambda: C64) -> Result<LinearRelation, NevError> {
        (**self).eval(lambda)
    }
}

/// Pair given by a closure.
pub struct FnPair<F> {
    pub dim: usize,
    pub f: F,
}

impl<F> NevanlinnaPair for FnPair<F>
where
    F: Fn(C64) -> (CMat, CMat) + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn eval(&self, lambda: C64) -> Result<(CMat, CMat), NevError> {
        require_nonreal(lambda)?;
        Ok((self.f)(lambda))
    }
}

/// Constant pair `(Φ, Ψ)`, e.g. a selfadjoint relation.
#[derive(Clone, Debug)]
pub struct ConstantPair {
    pub phi: CMat,
    pub psi: CMat,
}

impl ConstantPair {
    /// Pair spanning a selfadjoint relation `Θ` in `C^m`.
    pub fn from_relation(theta: &LinearRelation) -> Result<Self, NevError> {
        if theta.dim_in() != theta.dim_out() || theta.dim() != theta.dim_in() {
            return Err(NevError::Invalid("constant relation must have dimension m".into()));
        }
        Ok(ConstantPair {
            phi: theta.top(),
            psi: theta.bottom(),
        })
    }
}

impl NevanlinnaPair for ConstantPair {
    fn dim(&self) -> usize {
        self.phi.nrows()
    }
    fn eval(&self, lambda: C64) -> Result<(CMat, CMat), NevError> {
        require_nonreal(lambda)?;
        Ok((self.phi.clone(), self.psi.clone()))
    }
}

/// The relation-valued view `{Φ(λ)h, Ψ(λ)h}` of a pair.
pub struct PairFamily<P>(pub P);

impl<P: NevanlinnaPair> RelationFamily for PairFamily<P> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, lambda: C64) -> Result<LinearRelation, NevError> {
        family_from_pair(&self.0, lambda)
    }
}

/// A pair read off from a graph basis of each family value.
pub struct FamilyPair<F>(pub F);

impl<F: RelationFamily> NevanlinnaPair for FamilyPair<F> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, lambda: C64) -> Result<(CMat, CMat), NevError> {
        let r = self.0.eval(lambda)?;
        if r.dim() != r.dim_in() {
            return Err(NevError::Invalid(format!(
                "family value has dimension {} in C^{}",
                r.dim(),
                r.dim_in()
            )));
        }
        Ok((r.top(), r.bottom()))
    }
}

/// `{(Φ(λ)h, Ψ(λ)h) : h ∈ C^m}`.
pub fn family_from_pair<P: NevanlinnaPair + ?Sized>(p: &P, lambda: C64) -> Result<LinearRelation, NevError> {
    require_nonreal(lambda)?;
    let (phi, psi) = p.eval(lambda)?;
    let m = p.dim();
    Ok(LinearRelation::from_generators(m, m, &vstack(&[&phi, &psi]))?)
}

/// `(Φ(μ)* Ψ(λ) − Ψ(μ)* Φ(λ)) / (λ − μ̄)`.
pub fn nev_kernel<P: NevanlinnaPair + ?Sized>(p: &P, lambda: C64, mu: C64) -> Result<CMat, NevError> {
    let d = lambda - mu.conj();
    if d.norm() <= 1e-14 * lambda.norm().max(1.0) {
        return Err(NevError::ConjugateCoincidence);
    }
    let (pl, sl) = p.eval(lambda)?;
    let (pm, sm) = p.eval(mu)?;
    Ok((pm.adjoint() * sl - sm.adjoint() * pl) / d)
}

/// Sampled checks of the three defining conditions of a Nevanlinna pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairCheck {
    /// Smallest eigenvalue of `Im(Φ*Ψ)/Im λ` over the samples.
    pub n1_min_eig: f64,
    /// Largest residual of `Ψ(λ̄)*Φ(λ) − Φ(λ̄)*Ψ(λ)`.
    pub n2_residual: f64,
    /// Smallest singular value of `Ψ ± iΦ` over the samples.
    pub n3_min_sigma: f64,
}

impl PairCheck {
    pub fn passes(&self, tol: &Tol) -> bool {
        self.n1_min_eig >= -tol.residual && self.n2_residual <= tol.residual && self.n3_min_sigma > tol.residual
    }
}

pub fn check_pair<P: NevanlinnaPair + ?Sized>(p: &P, samples: &[C64]) -> Result<PairCheck, NevError> {
    let mut out = PairCheck {
        n1_min_eig: f64::INFINITY,
        n2_residual: 0.0,
        n3_min_sigma: f64::INFINITY,
    };
    let i = c(0.0, 1.0);
    for &l in samples {
        require_nonreal(l)?;
        let (phi, psi) = p.eval(l)?;
        let (phib, psib) = p.eval(l.conj())?;
        let form = im_part(&(phi.adjoint() * &psi)) / c(l.im, 0.0);
        if let Some(&e) = herm_eigvals(&form).first() {
            out.n1_min_eig = out.n1_min_eig.min(e);
        }
        let n2 = psib.adjoint() * &phi - phib.adjoint() * &psi;
        out.n2_residual = out.n2_residual.max(max_abs(&n2));
        let sign = if l.im > 0.0 { i } else { -i };
        if p.dim() > 0 {
            out.n3_min_sigma = out.n3_min_sigma.min(sigma_min(&(&psi + &phi * sign)));
        }
    }
    Ok(out)
}

/// `A + Bλ + Σ_k [1/(t_k − λ) − t_k/(t_k² + 1)] Σ_k` with finitely many point masses.
#[derive(Clone, Debug)]
pub struct HerglotzModel {
    pub a: CMat,
    pub b: CMat,
    pub masses: Vec<(f64, CMat)>,
}

impl HerglotzModel {
    pub fn new(a: CMat, b: CMat, masses: Vec<(f64, CMat)>) -> Result<Self, NevError> {
        let m = a.nrows();
        let tol = 1e-10 * (1.0 + max_abs(&a) + max_abs(&b));
        if a.ncols() != m || b.shape() != (m, m) || masses.iter().any(|(_, s)| s.shape() != (m, m)) {
            return Err(NevError::Invalid("matrix shapes".into()));
        }
        if max_abs(&(&a - a.adjoint())) > tol {
            return Err(NevError::Invalid("A is not Hermitian".into()));
        }
        let psd = |x: &CMat| max_abs(&(x - x.adjoint())) <= tol && herm_eigvals(x).first().is_none_or(|&e| e >= -tol);
        if !psd(&b) {
            return Err(NevError::Invalid("B is not positive semidefinite".into()));
        }
        if masses.iter().any(|(_, s)| !psd(s)) {
            return Err(NevError::Invalid("a mass is not positive semidefinite".into()));
        }
        for (i, (ti, _)) in masses.iter().enumerate() {
            if masses[..i].iter().any(|(tj, _)| tj == ti) {
                return Err(NevError::Invalid("mass locations are not distinct".into()));
            }
        }
        Ok(HerglotzModel { a, b, masses })
    }

    /// Scalar model.
    pub fn scalar(a: f64, b: f64, masses: &[(f64, f64)]) -> Result<Self, NevError> {
        let s = |x: f64| CMat::from_element(1, 1, c(x, 0.0));
        Self::new(s(a), s(b), masses.iter().map(|&(t, w)| (t, s(w))).collect())
    }

    pub fn dim(&self) -> usize {
        self.a.nrows()
    }
}

pub fn herglotz_eval(model: &HerglotzModel, lambda: C64) -> Result<CMat, NevError> {
    let mut out = &model.a + &model.b * lambda;
    for (t, s) in &model.masses {
        let d = c(*t, 0.0) - lambda;
        if d.norm() <= 1e-14 * t.abs().max(1.0) {
            return Err(NevError::PoleHit(*t));
        }
        out += s * (d.inv() - c(t / (t * t + 1.0), 0.0));
    }
    Ok(out)
}

impl NevanlinnaPair for HerglotzModel {
    fn dim(&self) -> usize {
        self.a.nrows()
    }
    fn eval(&self, lambda: C64) -> Result<(CMat, CMat), NevError> {
        require_nonreal(lambda)?;
        Ok((eye(self.dim()), herglotz_eval(self, lambda)?))
    }
}

/// Subclass flags of a Nevanlinna family at one point.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FamilyClass {
    /// `mul M = {0}`.
    pub r_h: bool,
    /// `M ∩ M* = {0}`.
    pub rs_h: bool,
    /// `M ∔ M* = C^{2m}`.
    pub ru_h: bool,
    /// Everywhere defined operator values.
    pub r_bounded: bool,
    /// Additionally `ker Im M = {0}`.
    pub rs_bounded: bool,
    /// Additionally `Im M` invertible; equal to `rs_bounded` in finite dimension.
    pub ru_bounded: bool,
    /// `M = M*`, i.e. a constant family.
    pub constant: bool,
}

pub fn classify_family<F: RelationFamily + ?Sized>(f: &F, lambda: C64, tol: &Tol) -> Result<FamilyClass, NevError> {
    require_nonreal(lambda)?;
    let m = f.dim();
    let v = f.eval(lambda)?;
    let va = v.adjoint();
    let r_h = v.mul().dim() == 0;
    let rs_h = v.intersect(&va)?.dim() == 0;
    let ru_h = v.comp_sum(&va)?.dim() == 2 * m;
    let r_bounded = r_h && v.dom().dim() == m;
    let rs_bounded = r_bounded && {
        let mat = v.as_matrix()?;
        let ev = herm_eigvals(&im_part(&mat));
        let lo = ev.iter().map(|e| e.abs()).fold(f64::INFINITY, f64::min);
        m == 0 || lo > tol.residual
    };
    Ok(FamilyClass {
        r_h,
        rs_h,
        ru_h,
        r_bounded,
        rs_bounded,
        ru_bounded: rs_bounded,
        constant: v.equals(&va, tol),
    })
}

/// Operator part and multivalued part of a family value.
#[derive(Clone, Debug)]
pub struct FamilySplit {
    pub operator_part: LinearRelation,
    pub mul: Subspace,
    /// Whether `mul M(λ)` agrees with `mul M(2λ)`.
    pub mul_stable: bool,
}

pub fn decompose_family<F: RelationFamily + ?Sized>(f: &F, lambda: C64, tol: &Tol) -> Result<FamilySplit, NevError> {
    require_nonreal(lambda)?;
    let (ms, mul) = f.eval(lambda)?.operator_part(tol)?;
    let mul2 = f.eval(lambda * c(2.0, 0.0))?.mul();
    Ok(FamilySplit {
        operator_part: ms,
        mul_stable: mul.equals(&mul2, tol),
        mul,
    })
}

/// Dimension of the kernel of a positive semidefinite kernel matrix.
pub fn kernel_nullity(k: &CMat, tol: &Tol) -> usize {
    let scale = max_abs(k).max(1.0);
    herm_eigvals(k).iter().filter(|&&e| e.abs() <= tol.residual * scale).count()
}

/// Zero matrix helper for pair constructions.
pub fn zero_pair(m: usize) -> (CMat, CMat) {
    (zeros(m, m), zeros(m, m))
}
