//! Whether the exit-space extension behind a parameter `τ` is an operator: exact multivalued part and
//! limit criteria along the imaginary axis.

use thiserror::Error;

use crate::boundary::{BoundaryError, BoundaryRelation, OrdinaryTriplet};
use crate::coupling::{couple, coupling_weyl_formula, CouplingError};
use crate::linalg::{c, inverse, norm2, rows, CMat, CVec, C64};
use crate::linrel::{LinearRelation, RelError, Subspace, Tol};
use crate::nevanlinna::{NevError, NevanlinnaPair, RelationFamily};
use crate::random;
use crate::transforms::{weyl_t, SpaceSplit};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdmissibilityError {
    #[error("probe grid must be strictly increasing with at least 4 points")]
    BadGrid,
    #[error("Ψ + MΦ is singular at lambda = {0}")]
    Omega0Singular(C64),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("z0 must lie in the upper half-plane")]
    LowerHalfPlane,
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Coupling(#[from] CouplingError),
    #[error(transparent)]
    Rel(#[from] RelError),
    #[error(transparent)]
    Nev(#[from] NevError),
}

/// Grid of `y` values and probe vectors for limits as `y → ∞` along `iy`.
#[derive(Clone, Debug)]
pub struct LimitProbe {
    pub y_grid: Vec<f64>,
    /// Decay exponent below which a sequence is read as tending to zero.
    pub slope_tol: f64,
    /// Values at the top of the grid below this bound are read as tending to zero.
    pub top_tol: f64,
    pub probes: Vec<CVec>,
}

impl LimitProbe {
    /// Grid `1e2, 1e3, …, 1e8`, the standard basis of `C^m` and 5 seeded random unit vectors.
    pub fn standard(m: usize) -> Self {
        let mut g = random::rng(0x5eed ^ m as u64);
        let mut probes: Vec<CVec> = (0..m)
            .map(|k| {
                let mut v = CVec::zeros(m);
                v[k] = c(1.0, 0.0);
                v
            })
            .collect();
        for _ in 0..5 {
            let v = CVec::from_column_slice(random::gaussian(&mut g, m, 1).as_slice());
            let n = v.norm();
            if n > 0.0 {
                probes.push(v / c(n, 0.0));
            }
        }
        LimitProbe {
            y_grid: (2..=8).map(|k| 10f64.powi(k)).collect(),
            slope_tol: -0.25,
            top_tol: 1e-3,
            probes,
        }
    }

    fn check(&self) -> Result<(), AdmissibilityError> {
        if self.y_grid.len() < 4 || self.y_grid.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) || self.y_grid[0] <= 0.0 {
            return Err(AdmissibilityError::BadGrid);
        }
        Ok(())
    }
}

/// Log-log fit over the top four grid points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Trend {
    pub exponent: f64,
    pub top: f64,
}

/// Values below this are exact zeros up to round-off.
const FLOOR: f64 = 1e-12;

impl Trend {
    pub fn fit(ys: &[f64], vals: &[f64]) -> Self {
        let k = ys.len().min(4);
        let (ys, vals) = (&ys[ys.len() - k..], &vals[vals.len() - k..]);
        let top = vals.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        if top < FLOOR {
            return Trend { exponent: f64::NEG_INFINITY, top };
        }
        let xs: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
        let ls: Vec<f64> = vals.iter().map(|v| v.abs().max(FLOOR * 1e-4).ln()).collect();
        let mx = xs.iter().sum::<f64>() / k as f64;
        let ml = ls.iter().sum::<f64>() / k as f64;
        let sxy: f64 = xs.iter().zip(&ls).map(|(x, l)| (x - mx) * (l - ml)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        Trend { exponent: sxy / sxx, top: vals[k - 1].abs() }
    }

    pub fn to_zero(&self, probe: &LimitProbe) -> bool {
        self.top < FLOOR || (self.exponent < probe.slope_tol && self.top < probe.top_tol)
    }

    pub fn to_infinity(&self) -> bool {
        self.exponent > 0.5
    }
}

/// Fits `|g(y)|` for every probe vector and reports whether all tend to zero.
fn all_to_zero<G>(probe: &LimitProbe, mut g: G) -> Result<bool, AdmissibilityError>
where
    G: FnMut(f64, &CVec) -> Result<f64, AdmissibilityError>,
{
    probe.check()?;
    for h in &probe.probes {
        let vals = probe.y_grid.iter().map(|&y| g(y, h)).collect::<Result<Vec<_>, _>>()?;
        if !Trend::fit(&probe.y_grid, &vals).to_zero(probe) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn form(x: &CMat, h: &CVec) -> C64 {
    h.dotc(&(x * h))
}

/// `mul Ã = {f' : (0, f') ∈ Ã}`.
pub fn exact_mul(a: &LinearRelation) -> Subspace {
    a.mul()
}

/// `P0 M_s P0` on `H0 = (mul M)^⊥` in coordinates of an orthonormal basis `Q0`.
fn operator_compression(r: &LinearRelation) -> Result<(CMat, CMat), AdmissibilityError> {
    let q0 = r.mul().complement().basis().clone();
    let gens = crate::linalg::vstack(&[&(q0.adjoint() * r.top()), &(q0.adjoint() * r.bottom())]);
    let k = q0.ncols();
    let ms = LinearRelation::from_generators(k, k, &gens)?.as_matrix()?;
    Ok((ms, q0))
}

/// `(M_s(iy)h, h)/(iy) → 0` for every probe, i.e. `mul A0 = {0}`.
pub fn mul_a0_limit<F: RelationFamily + ?Sized>(m: &F, probe: &LimitProbe) -> Result<bool, AdmissibilityError> {
    all_to_zero(probe, |y, h| {
        let (ms, q0) = operator_compression(&m.eval(c(0.0, y))?)?;
        let hp = q0.adjoint() * h;
        Ok(form(&ms, &hp).norm() / y)
    })
}

/// `y Im(M(iy)h, h) → ∞` for every probe orthogonal to `H0`, i.e. `mul T = {0}` given `mul A0 = {0}`.
/// Directions inside `mul M(iy)` count as divergent.
pub fn mul_t_limit<F: RelationFamily + ?Sized>(m: &F, probe: &LimitProbe, h0: &Subspace) -> Result<bool, AdmissibilityError> {
    probe.check()?;
    let p = h0.complement().projector();
    for h in &probe.probes {
        let v = &p * h;
        if v.norm() < 1e-8 {
            continue;
        }
        let mut vals = Vec::with_capacity(probe.y_grid.len());
        let mut in_mul = true;
        for &y in &probe.y_grid {
            let r = m.eval(c(0.0, y))?;
            let mul = r.mul();
            let inside = (mul.projector() * &v).norm() > 1e-8 * v.norm();
            in_mul &= inside;
            let (ms, q0) = operator_compression(&r)?;
            vals.push(y * form(&ms, &(q0.adjoint() * &v)).im.abs());
        }
        if in_mul {
            continue;
        }
        if !Trend::fit(&probe.y_grid, &vals).to_infinity() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `π1 mul Γ`.
pub fn boundary_h0(g: &BoundaryRelation) -> Subspace {
    let mul = g.gamma().mul();
    Subspace::from_columns(&rows(mul.basis(), 0, g.m()))
}

/// `(M(iy), Φ(iy), Ψ(iy), (Ψ + MΦ)^{-1})`.
fn omega_parts<P: NevanlinnaPair + ?Sized>(
    pi: &OrdinaryTriplet,
    tau: &P,
    y: f64,
) -> Result<(CMat, CMat, CMat, CMat), AdmissibilityError> {
    let l = c(0.0, y);
    let m = pi.base().weyl_matrix(l)?;
    let (phi, psi) = tau.eval(l)?;
    let w = inverse(&(&psi + &m * &phi)).ok_or(AdmissibilityError::Omega0Singular(l))?;
    Ok((m, phi, psi, w))
}

/// Limit verdicts together with the exact verdict when a realization of `τ` is supplied.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub exact_mul_dim: Option<usize>,
    pub adm1_pass: bool,
    pub adm2_pass: bool,
    pub qlt_pass: bool,
    pub a0_operator: bool,
    pub a1_operator: bool,
    /// Limit verdict matches the exact one; `None` without a realization.
    pub agreement: Option<bool>,
}

impl AdmissibilityReport {
    /// Both limit conditions.
    pub fn limit_verdict(&self) -> bool {
        self.adm1_pass && self.adm2_pass
    }

    /// The single condition that decides when `A0` or `A1` is an operator.
    pub fn refined_verdict(&self) -> Option<bool> {
        if self.a0_operator {
            Some(self.adm1_pass)
        } else if self.a1_operator {
            Some(self.adm2_pass)
        } else {
            None
        }
    }

    pub fn exact_verdict(&self) -> Option<bool> {
        self.exact_mul_dim.map(|d| d == 0)
    }
}

/// `Φ(iy)(Ψ(iy) + M(iy)Φ(iy))^{-1}/y → 0` weakly.
pub fn adm1_limit<P: NevanlinnaPair + ?Sized>(pi: &OrdinaryTriplet, tau: &P, probe: &LimitProbe) -> Result<bool, AdmissibilityError> {
    all_to_zero(probe, |y, h| {
        let (_, phi, _, w) = omega_parts(pi, tau, y)?;
        Ok(form(&(phi * w), h).norm() / y)
    })
}

/// `Ψ(iy)(Ψ(iy) + M(iy)Φ(iy))^{-1}M(iy)/y → 0`.
pub fn adm2_limit<P: NevanlinnaPair + ?Sized>(pi: &OrdinaryTriplet, tau: &P, probe: &LimitProbe) -> Result<bool, AdmissibilityError> {
    all_to_zero(probe, |y, h| {
        let (m, _, psi, w) = omega_parts(pi, tau, y)?;
        Ok(form(&(psi * w * m), h).norm() / y)
    })
}

/// Limit criteria for `τ`; `chi`, a boundary relation with Weyl family `τ`, enables the exact check.
pub fn admissible<P: NevanlinnaPair + ?Sized>(
    pi: &OrdinaryTriplet,
    tau: &P,
    chi: Option<&BoundaryRelation>,
    probe: &LimitProbe,
    tol: &Tol,
) -> Result<AdmissibilityReport, AdmissibilityError> {
    let m = pi.base().m();
    if tau.dim() != m {
        return Err(AdmissibilityError::DimMismatch(format!("τ in C^{}, triplet into C^{}", tau.dim(), m)));
    }
    let adm1_pass = adm1_limit(pi, tau, probe)?;
    let adm2_pass = adm2_limit(pi, tau, probe)?;
    let qlt_pass = langer_textorius(pi, tau, c(0.0, 1.0), probe)?;
    let exact_mul_dim = match chi {
        Some(chi) => Some(exact_mul(&couple(pi, chi, tol)?).dim()),
        None => None,
    };
    let mut r = AdmissibilityReport {
        exact_mul_dim,
        adm1_pass,
        adm2_pass,
        qlt_pass,
        a0_operator: pi.base().a0()?.is_operator(),
        a1_operator: pi.base().a1()?.is_operator(),
        agreement: None,
    };
    r.agreement = r.exact_verdict().map(|e| e == r.limit_verdict());
    Ok(r)
}

/// `M_T = -T*(M+τ)^{-1}T - T*(M+τ)^{-1}τ - τ(M+τ)^{-1}T + τ(M+τ)^{-1}M` through a pair of `τ`.
pub fn mt_weyl(m: &CMat, phi: &CMat, psi: &CMat, t: &CMat, lambda: C64) -> Result<CMat, AdmissibilityError> {
    let omega = coupling_weyl_formula(m, phi, psi, lambda).map_err(|_| AdmissibilityError::Omega0Singular(lambda))?;
    let d = m.nrows();
    Ok(weyl_t(&omega, &SpaceSplit::new(d, d), &(-t)))
}

/// Outcome of the `M_T` criterion.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MtReport {
    pub limit_pass: bool,
    /// `ker(Γ1 - T*Γ0)` is an operator, so a passing limit is sufficient.
    pub sufficient: bool,
}

impl MtReport {
    /// Verdict implied by the criterion, if any.
    pub fn verdict(&self) -> Option<bool> {
        if !self.limit_pass {
            Some(false)
        } else if self.sufficient {
            Some(true)
        } else {
            None
        }
    }
}

/// `M_T(iy)/y → 0` strongly.
pub fn mt_admissibility<P: NevanlinnaPair + ?Sized>(
    pi: &OrdinaryTriplet,
    tau: &P,
    t: &CMat,
    probe: &LimitProbe,
) -> Result<MtReport, AdmissibilityError> {
    let m = pi.base().m();
    if t.shape() != (m, m) {
        return Err(AdmissibilityError::DimMismatch("T must be m x m".into()));
    }
    let limit_pass = all_to_zero(probe, |y, h| {
        let (mm, phi, psi, _) = omega_parts(pi, tau, y)?;
        Ok((mt_weyl(&mm, &phi, &psi, t, c(0.0, y))? * h).norm() / y)
    })?;
    let theta = LinearRelation::graph_of(&t.adjoint());
    let sufficient = pi.base().extension(&theta)?.is_operator();
    Ok(MtReport { limit_pass, sufficient })
}

/// `Q_LT(λ; z0) = M(λ) - (M(λ) - M(z0)*)(M(λ) + τ(λ))^{-1}(M(λ) - M(z0))`.
pub fn q_lt<P: NevanlinnaPair + ?Sized>(pi: &OrdinaryTriplet, tau: &P, z0: C64, lambda: C64) -> Result<CMat, AdmissibilityError> {
    let m0 = pi.base().weyl_matrix(z0)?;
    let m = pi.base().weyl_matrix(lambda)?;
    let (phi, psi) = tau.eval(lambda)?;
    let w = inverse(&(&psi + &m * &phi)).ok_or(AdmissibilityError::Omega0Singular(lambda))?;
    Ok(&m - (&m - m0.adjoint()) * phi * w * (&m - &m0))
}

/// `(Q_LT(iy; z0)h, h)/y → 0` for every probe.
pub fn langer_textorius<P: NevanlinnaPair + ?Sized>(
    pi: &OrdinaryTriplet,
    tau: &P,
    z0: C64,
    probe: &LimitProbe,
) -> Result<bool, AdmissibilityError> {
    if z0.im <= 0.0 {
        return Err(AdmissibilityError::LowerHalfPlane);
    }
    all_to_zero(probe, |y, h| Ok(form(&q_lt(pi, tau, z0, c(0.0, y))?, h).norm() / y))
}

/// Relative size of `M_T - (Q_LT - 2 Re M(z0))` at `λ` for `T = M(z0)`.
pub fn lt_shift_residual<P: NevanlinnaPair + ?Sized>(pi: &OrdinaryTriplet, tau: &P, z0: C64, lambda: C64) -> Result<f64, AdmissibilityError> {
    let m0 = pi.base().weyl_matrix(z0)?;
    let m = pi.base().weyl_matrix(lambda)?;
    let (phi, psi) = tau.eval(lambda)?;
    let mt = mt_weyl(&m, &phi, &psi, &m0, lambda)?;
    let re = (&m0 + m0.adjoint()) * c(0.5, 0.0);
    let q = q_lt(pi, tau, z0, lambda)?;
    Ok(norm2(&(mt - (q - re * c(2.0, 0.0)))) / norm2(&m).max(1.0))
}
