//! Shared fixtures, closed-form models and seeded random scenes.

use thiserror::Error;

use crate::boundary::{realize_constant, realize_herglotz, von_neumann_triplet, BoundaryError, BoundaryRelation, OrdinaryTriplet};
use crate::coupling::{CouplingError, CouplingScene};
use crate::linalg::{block2, c, eye, hstack, sigma_min, vstack, zeros, CMat, C64};
use crate::linrel::{LinearRelation, Tol};
use crate::nevanlinna::{require_nonreal, ConstantPair, HerglotzModel, NevError, NevanlinnaPair};
use crate::random;

fn r(x: f64) -> C64 {
    c(x, 0.0)
}

/// `S = {(α e1, α e2)}` in `C^2`.
pub fn fix_a() -> LinearRelation {
    let g = CMat::from_column_slice(4, 1, &[r(1.0), r(0.0), r(0.0), r(1.0)]);
    LinearRelation::from_generators(2, 2, &g).expect("shape")
}

/// Selfadjoint extension of [`fix_a`] with `mul = span{e2}`: `{(h, k) : h2 = 0, k1 = 0}`.
pub fn fix_inf() -> LinearRelation {
    let g = CMat::from_column_slice(4, 2, &[r(1.0), r(0.0), r(0.0), r(1.0), r(0.0), r(0.0), r(0.0), r(1.0)]);
    LinearRelation::from_generators(2, 2, &g).expect("shape")
}

/// The Hermitian matrix `[[0,1],[1,0]]` on `C^1 ⊕ C^1`.
pub fn fix_b_matrix() -> CMat {
    CMat::from_row_slice(2, 2, &[r(0.0), r(1.0), r(1.0), r(0.0)])
}

/// `Γ{f, f'} = {f', -f}` from `C^2` to `C^2`.
pub fn fix_b_gamma() -> LinearRelation {
    let top = eye(2);
    let bottom = CMat::from_row_slice(2, 2, &[r(0.0), r(1.0), r(-1.0), r(0.0)]);
    LinearRelation::from_generators(2, 2, &vstack(&[&top, &bottom])).expect("shape")
}

/// The FIX-B scene `Ã = [[0,1],[1,0]]` on `C^1 ⊕ C^1`.
pub fn fix_b_scene(tol: &Tol) -> CouplingScene {
    CouplingScene::new(LinearRelation::graph_of(&fix_b_matrix()), 1, tol).expect("FIX-B is selfadjoint")
}

/// Ordinary triplet `Γ0{f, f'} = f`, `Γ1{f, f'} = f'` for `S = {0}` in `C^1`; `M(λ) = λ`.
pub fn identity_triplet(tol: &Tol) -> OrdinaryTriplet {
    let g = LinearRelation::graph_of(&eye(2));
    OrdinaryTriplet::new(BoundaryRelation::validate(g, tol).expect("unitary"), tol).expect("ordinary")
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("interval length must be positive")]
    BadLength,
    #[error("lambda = {0} is within 1e-6 of a pole")]
    NearPole(C64),
    #[error("search window must be a bounded interval")]
    BadWindow,
}

/// `-D²` on `[0, ℓ]` with `Γ0 f = (f(0), f(ℓ))`, `Γ1 f = (f'(0), -f'(ℓ))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlModel {
    pub length: f64,
}

impl SlModel {
    pub fn new(length: f64) -> Result<Self, ModelError> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(ModelError::BadLength);
        }
        Ok(SlModel { length })
    }
}

/// `(cos ωx, sin(ωx)/ω, ω sin ωx)` at `x`, entire in `λ = ω²`.
fn trig_entire(lambda: C64, x: f64) -> (C64, C64, C64) {
    let z2 = lambda * x * x;
    if z2.norm() < 1e-6 {
        let cos = r(1.0) - z2 / 2.0 + z2 * z2 / 24.0;
        let sinc = r(1.0) - z2 / 6.0 + z2 * z2 / 120.0;
        return (cos, sinc * x, lambda * x * sinc);
    }
    let mut w = lambda.sqrt();
    if w.im < 0.0 {
        w = -w;
    }
    let (s, co) = ((w * x).sin(), (w * x).cos());
    (co, s / w, w * s)
}

/// Distance from `λ` to the nearest Dirichlet eigenvalue `(kπ/ℓ)²`, `k ≥ 1`.
fn pole_distance(model: &SlModel, lambda: C64) -> f64 {
    let base = std::f64::consts::PI / model.length;
    let k0 = (lambda.re.max(0.0).sqrt() / base).round().max(1.0);
    [k0 - 1.0, k0, k0 + 1.0]
        .iter()
        .filter(|&&k| k >= 1.0)
        .map(|&k| (lambda - r((k * base).powi(2))).norm())
        .fold(f64::INFINITY, f64::min)
}

/// `M(λ) = (ω/sin ωℓ) [[-cos ωℓ, 1], [1, -cos ωℓ]]`, evaluated through `q = e^{iωℓ}` with `Im ω ≥ 0`.
pub fn sl_weyl(model: &SlModel, lambda: C64) -> Result<CMat, ModelError> {
    if pole_distance(model, lambda) < 1e-6 {
        return Err(ModelError::NearPole(lambda));
    }
    let l = model.length;
    let (diag, off) = if (lambda * l * l).norm() < 1e-6 {
        let (co, sinc, _) = trig_entire(lambda, l);
        (-co / sinc, sinc.inv())
    } else {
        let mut w = lambda.sqrt();
        if w.im < 0.0 {
            w = -w;
        }
        let q = (c(0.0, 1.0) * w * l).exp();
        let d = q * q - r(1.0);
        (-w * c(0.0, 1.0) * (q * q + r(1.0)) / d, w * c(0.0, 2.0) * q / d)
    };
    Ok(CMat::from_row_slice(2, 2, &[diag, off, off, diag]))
}

/// Entire pair `(Φ, Ψ)` with `M = ΨΦ^{-1}`, parametrized by `(f(0), f'(0))`.
pub fn sl_pair(model: &SlModel, lambda: C64) -> (CMat, CMat) {
    let (co, sinc, wsin) = trig_entire(lambda, model.length);
    let phi = CMat::from_row_slice(2, 2, &[r(1.0), r(0.0), co, sinc]);
    let psi = CMat::from_row_slice(2, 2, &[r(0.0), r(1.0), wsin, -co]);
    (phi, psi)
}

/// Entire pair of `-D²` on `[0, ℓ]` with `f(ℓ) = 0`, `Γ0 f = f(0)`, `Γ1 f = f'(0)`; `M = -ω cot ωℓ`.
pub fn sl_dirichlet_pair(model: &SlModel, lambda: C64) -> (CMat, CMat) {
    let (co, sinc, _) = trig_entire(lambda, model.length);
    (CMat::from_element(1, 1, sinc), CMat::from_element(1, 1, -co))
}

/// Interface matrix `[[Φ1, -Φ2], [Ψ1, Ψ2]]`: continuity of `Γ0` and vanishing total flux `Γ1`.
pub fn interface_matrix(p1: &(CMat, CMat), p2: &(CMat, CMat)) -> CMat {
    block2(&p1.0, &(-&p2.0), &p1.1, &p2.1)
}

/// Real zeros of `λ ↦ σ_min(C(λ))` in a window: grid minima refined by golden-section search.
pub fn real_spectrum<F>(char_matrix: F, window: (f64, f64)) -> Result<Vec<f64>, ModelError>
where
    F: Fn(f64) -> CMat,
{
    let (a, b) = window;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(ModelError::BadWindow);
    }
    let f = |x: f64| {
        let m = char_matrix(x);
        sigma_min(&m) / crate::linalg::norm2(&m).max(1.0)
    };
    let n = ((b - a) * 100.0).ceil().max(400.0) as usize;
    let h = (b - a) / n as f64;
    let xs: Vec<f64> = (0..=n).map(|k| a + h * k as f64).collect();
    let vs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut out: Vec<f64> = vec![];
    for k in 0..=n {
        let left = if k == 0 { f64::INFINITY } else { vs[k - 1] };
        let right = if k == n { f64::INFINITY } else { vs[k + 1] };
        if !(vs[k] <= left && vs[k] < right) {
            continue;
        }
        let (lo, hi) = ((xs[k] - h).max(a), (xs[k] + h).min(b));
        let x = golden_min(&f, lo, hi);
        if f(x) < 1e-9 && out.last().is_none_or(|&p| (x - p).abs() > 1e-6 * x.abs().max(1.0)) {
            out.push(x);
        }
    }
    Ok(out)
}

fn golden_min<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if (hi - lo) <= 1e-13 * hi.abs().max(1.0) {
            break;
        }
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    (lo + hi) / 2.0
}

/// Eigenvalues of `-D²` on the circle formed by two copies of the interval glued at both ends.
pub fn periodic_spectrum(model: &SlModel, window: (f64, f64)) -> Result<Vec<f64>, ModelError> {
    real_spectrum(
        |x| {
            let p = sl_pair(model, r(x));
            interface_matrix(&p, &p)
        },
        window,
    )
}

/// Eigenvalues of `-D²` on `[-ℓ, ℓ]` with Dirichlet ends, as two halves coupled at `0`.
pub fn dirichlet_spectrum(model: &SlModel, window: (f64, f64)) -> Result<Vec<f64>, ModelError> {
    real_spectrum(
        |x| {
            let p = sl_dirichlet_pair(model, r(x));
            interface_matrix(&p, &p)
        },
        window,
    )
}

/// A Nevanlinna parameter given in closed form.
#[derive(Clone, Debug)]
pub enum ParamModel {
    Herglotz(HerglotzModel),
    Constant(LinearRelation),
    SlInterval(SlModel),
}

impl ParamModel {
    /// A boundary relation with this Weyl family.
    pub fn realize(&self, tol: &Tol) -> Result<BoundaryRelation, BoundaryError> {
        match self {
            ParamModel::Herglotz(h) => realize_herglotz(h, tol),
            ParamModel::Constant(t) => realize_constant(t, tol),
            ParamModel::SlInterval(_) => Err(BoundaryError::RealizationUnavailable(
                "the interval model has no finite-dimensional realization".into(),
            )),
        }
    }
}

impl NevanlinnaPair for ParamModel {
    fn dim(&self) -> usize {
        match self {
            ParamModel::Herglotz(h) => h.dim(),
            ParamModel::Constant(t) => t.dim_in(),
            ParamModel::SlInterval(_) => 2,
        }
    }
    fn eval(&self, lambda: C64) -> Result<(CMat, CMat), NevError> {
        match self {
            ParamModel::Herglotz(h) => h.eval(lambda),
            ParamModel::Constant(t) => ConstantPair::from_relation(t)?.eval(lambda),
            ParamModel::SlInterval(m) => {
                require_nonreal(lambda)?;
                let v = sl_weyl(m, lambda).map_err(|_| NevError::NearPole(lambda))?;
                Ok((eye(2), v))
            }
        }
    }
}

/// Seeded scene with a Hermitian `Ã` on `C^{n1} ⊕ C^{n2}`.
pub fn random_scene(seed: u64, n1: usize, n2: usize, tol: &Tol) -> Result<CouplingScene, CouplingError> {
    let mut g = random::rng(seed);
    CouplingScene::new(LinearRelation::graph_of(&random::hermitian(&mut g, n1 + n2)), n1, tol)
}

/// Selfadjoint `Θ` with `A_Θ ∩ ({0} × mul A*) ≠ {0}`: contains `Γ(0, g)` for a unit `g ∈ mul A*`.
pub fn steer_to_mul(pi: &OrdinaryTriplet, seed: u64, tol: &Tol) -> Result<LinearRelation, BoundaryError> {
    let base = pi.base();
    let (n, m) = (base.n(), base.m());
    let mul = base.t_rel().mul();
    if mul.dim() == 0 {
        return Err(BoundaryError::DimMismatch("A* is an operator".into()));
    }
    let fh = vstack(&[&zeros(n, 1), &mul.basis().columns(0, 1).into_owned()]);
    let v = pi.map() * fh;
    let (a, b) = (v.rows(0, m).into_owned(), v.rows(m, m).into_owned());
    let mut g = random::rng(seed);
    let rr = random::hermitian(&mut g, m);
    let an = a.norm();
    let theta = if an > 1e-8 * b.norm().max(1.0) {
        let a2 = an * an;
        let ab = (a.adjoint() * &b)[(0, 0)];
        let p = eye(m) - &a * a.adjoint() / r(a2);
        let h = (&b * a.adjoint() + &a * b.adjoint()) / r(a2) - &a * a.adjoint() * (ab / r(a2 * a2)) + &p * rr * &p;
        LinearRelation::graph_of(&h)
    } else {
        let q = crate::linalg::complement(&(&b / r(b.norm())));
        let top = hstack(&[&zeros(m, 1), &q]);
        let bottom = hstack(&[&b, &(&q * (q.adjoint() * rr * &q))]);
        LinearRelation::from_generators(m, m, &vstack(&[&top, &bottom]))?
    };
    debug_assert!(theta.classify(tol).selfadjoint);
    Ok(theta)
}

/// A triplet, a realizable parameter `τ` and its realization `χ`.
#[derive(Clone, Debug)]
pub struct AdmissibilityCase {
    pub pi: OrdinaryTriplet,
    pub tau: ParamModel,
    pub chi: BoundaryRelation,
}

/// Seeded case; the variant cycles through Herglotz parameters with and without linear term,
/// constant selfadjoint relations and constants steered to a multivalued extension.
pub fn random_admissibility_case(seed: u64, tol: &Tol) -> Result<AdmissibilityCase, BoundaryError> {
    let mut g = random::rng(seed.wrapping_mul(0x9e37_79b9) ^ 0xad);
    let n = 2 + (seed % 4) as usize;
    let k = 1 + ((seed / 4) as usize) % (n - 1);
    let m = n - k;
    let s = random::symmetric_operator(&mut g, n, k);
    let pi = von_neumann_triplet(&s, None, tol)?;
    let herglotz = |g: &mut random::SeededRng, b: CMat| -> Result<ParamModel, BoundaryError> {
        let masses = (0..1 + (seed as usize) % 2)
            .map(|j| (j as f64 - 0.5, random::psd(g, m, 1 + j.min(m - 1))))
            .collect();
        Ok(ParamModel::Herglotz(
            HerglotzModel::new(random::hermitian(g, m), b, masses).map_err(|e| BoundaryError::RealizationUnavailable(e.to_string()))?,
        ))
    };
    let tau = match seed % 5 {
        0 => herglotz(&mut g, zeros(m, m))?,
        1 => {
            let b = random::psd(&mut g, m, 1);
            herglotz(&mut g, b)?
        }
        2 => {
            let p = (seed as usize / 5) % (m + 1);
            ParamModel::Constant(random::selfadjoint_relation(&mut g, m, p))
        }
        3 => ParamModel::Constant(steer_to_mul(&pi, seed, tol)?.scale(r(-1.0))),
        _ => {
            let b = random::psd(&mut g, m, m);
            herglotz(&mut g, b)?
        }
    };
    let chi = tau.realize(tol)?;
    Ok(AdmissibilityCase { pi, tau, chi })
}
