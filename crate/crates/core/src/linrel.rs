//! Subspaces and linear relations in finite-dimensional complex spaces.
//!
//! A relation `R: C^n -> C^m` is stored as an orthonormal basis of its graph
//! in `C^{n+m}`; the first `n` coordinates hold the input component. In finite
//! dimension every relation is closed, so closures are never formed.

use std::f64::consts::FRAC_PI_2;

use thiserror::Error;

use crate::linalg::{
    c, complement, eye, herm_eigvals, hstack, im_part, null_space, null_space_with, orth, rows,
    sigma_min, solve, svd, vstack, zeros, CMat, C64, RANK_TOL,
};

/// Tolerance context for predicates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tol {
    /// Relative rank cutoff used when orthonormalizing user data.
    pub rank: f64,
    /// Largest principal angle (radians) accepted for subspace equality or inclusion.
    pub angle: f64,
    /// Residual cutoff for identities and semidefiniteness checks.
    pub residual: f64,
}

impl Default for Tol {
    fn default() -> Self {
        Tol {
            rank: RANK_TOL,
            angle: 1e-8,
            residual: 1e-9,
        }
    }
}

impl Tol {
    /// Uses `t` for both the angle and residual checks.
    pub fn with_check(t: f64) -> Self {
        Tol {
            angle: t,
            residual: t,
            ..Tol::default()
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RelError {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("relation is neither dissipative nor accumulative")]
    NotDissipative,
    #[error("lambda = {0} is not in the resolvent set")]
    SingularAtLambda(C64),
    #[error("relation is not an everywhere defined operator")]
    NotOperator,
}

fn dim_check(ok: bool, what: &str) -> Result<(), RelError> {
    if ok {
        Ok(())
    } else {
        Err(RelError::DimMismatch(what.to_string()))
    }
}

/// Subspace of `C^n` carried by an orthonormal basis.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: CMat,
}

impl Subspace {
    /// Column span of `m`; singular values below `rel_tol * sigma_max` are dropped.
    pub fn from_columns_tol(m: &CMat, rel_tol: f64) -> Self {
        let d = svd(m);
        let smax = d.s.first().copied().unwrap_or(0.0);
        let r = d.s.iter().filter(|&&s| s > rel_tol * smax && s > 0.0).count();
        Subspace {
            basis: d.u.columns(0, r).into_owned(),
        }
    }

    /// Column span of `m` with the default cutoff `1e-10 * max(rows, cols)`.
    pub fn from_columns(m: &CMat) -> Self {
        let k = m.nrows().max(m.ncols()).max(1) as f64;
        Self::from_columns_tol(m, RANK_TOL * k)
    }

    /// Wraps a matrix whose columns are already orthonormal.
    pub fn from_orthonormal(q: CMat) -> Self {
        Subspace { basis: q }
    }

    /// Column span of internally generated data (absolute cutoff on unit scale).
    pub(crate) fn span(m: &CMat) -> Self {
        Subspace { basis: orth(m) }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { basis: zeros(n, 0) }
    }

    pub fn full(n: usize) -> Self {
        Subspace { basis: eye(n) }
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn projector(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    pub fn complement(&self) -> Subspace {
        Subspace {
            basis: complement(&self.basis),
        }
    }

    /// `sin` of the largest angle between vectors of `other` and this subspace.
    pub fn excess(&self, other: &Subspace) -> f64 {
        crate::linalg::residual_outside(&self.basis, &other.basis)
    }

    /// Whether `other` is contained in this subspace.
    pub fn contains(&self, other: &Subspace, tol: &Tol) -> bool {
        other.dim() <= self.dim() && self.excess(other) <= tol.angle.sin()
    }

    pub fn contains_vector(&self, v: &CMat, tol: &Tol) -> bool {
        let nv = v.norm();
        if nv == 0.0 {
            return true;
        }
        crate::linalg::residual_outside(&self.basis, &(v / c(nv, 0.0))) <= tol.angle.sin()
    }

    /// Largest principal angle when dimensions agree, `pi/2` otherwise.
    pub fn gap(&self, other: &Subspace) -> f64 {
        if self.dim() != other.dim() || self.ambient() != other.ambient() {
            return FRAC_PI_2;
        }
        self.excess(other).min(1.0).asin()
    }

    pub fn equals(&self, other: &Subspace, tol: &Tol) -> bool {
        self.gap(other) <= tol.angle
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        let k = null_space(&hstack(&[&self.basis, &(-&other.basis)]));
        let g = &self.basis * rows(&k, 0, self.dim());
        Subspace::span(&g)
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(&hstack(&[&self.basis, &other.basis]))
    }

    /// Image under a linear map.
    pub fn map(&self, a: &CMat) -> Subspace {
        Subspace::span(&(a * &self.basis))
    }
}

/// Principal angles between two subspaces in ascending order.
pub fn principal_angles(a: &Subspace, b: &Subspace) -> Vec<f64> {
    let (p, q) = if a.dim() >= b.dim() { (a, b) } else { (b, a) };
    let k = q.dim();
    if k == 0 {
        return vec![];
    }
    let cos = svd(&(p.basis.adjoint() * &q.basis)).s;
    let r = &q.basis - &p.basis * (p.basis.adjoint() * &q.basis);
    let mut sin = svd(&r).s;
    sin.reverse();
    (0..k)
        .map(|i| {
            let ci = cos[i].min(1.0);
            let si = sin.get(i).copied().unwrap_or(0.0).min(1.0);
            if ci * ci >= 0.5 {
                si.asin()
            } else {
                ci.acos()
            }
        })
        .collect()
}

/// Flags returned by [`LinearRelation::classify`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Classification {
    pub symmetric: bool,
    pub selfadjoint: bool,
    pub dissipative: bool,
    pub accumulative: bool,
    pub maximal_dissipative: bool,
    pub maximal_accumulative: bool,
}

/// A linear relation `C^n -> C^m`.
#[derive(Clone, Debug)]
pub struct LinearRelation {
    n: usize,
    m: usize,
    graph: Subspace,
}

impl LinearRelation {
    pub fn new(n: usize, m: usize, graph: Subspace) -> Result<Self, RelError> {
        dim_check(graph.ambient() == n + m, "graph ambient dimension")?;
        Ok(LinearRelation { n, m, graph })
    }

    /// Span of generator columns `(f; f')`; columns are normalized before the rank decision.
    pub fn from_generators(n: usize, m: usize, gens: &CMat) -> Result<Self, RelError> {
        dim_check(gens.nrows() == n + m, "generator rows")?;
        let norms: Vec<f64> = gens.column_iter().map(|col| col.norm()).collect();
        let top = norms.iter().copied().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..gens.ncols())
            .filter(|&j| norms[j] > RANK_TOL * top && norms[j] > 0.0)
            .collect();
        let mut g = zeros(n + m, keep.len());
        for (k, &j) in keep.iter().enumerate() {
            g.set_column(k, &(gens.column(j) / c(norms[j], 0.0)));
        }
        Ok(LinearRelation {
            n,
            m,
            graph: Subspace::from_columns(&g),
        })
    }

    pub(crate) fn from_span(n: usize, m: usize, gens: &CMat) -> Self {
        debug_assert_eq!(gens.nrows(), n + m);
        LinearRelation {
            n,
            m,
            graph: Subspace::span(gens),
        }
    }

    /// Graph of the `m x n` matrix `a`.
    pub fn graph_of(a: &CMat) -> Self {
        let (m, n) = a.shape();
        let g = vstack(&[&eye(n), a]);
        let q = if n == 0 {
            zeros(n + m, 0)
        } else {
            g.qr().q()
        };
        LinearRelation {
            n,
            m,
            graph: Subspace { basis: q },
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::graph_of(&eye(n))
    }

    /// The zero relation `{(0, 0)}`.
    pub fn trivial(n: usize, m: usize) -> Self {
        LinearRelation {
            n,
            m,
            graph: Subspace::zero(n + m),
        }
    }

    /// `{(0, g) : g in mul}`.
    pub fn pure_mul(n: usize, mul: &Subspace) -> Self {
        let g = vstack(&[&zeros(n, mul.dim()), mul.basis()]);
        LinearRelation {
            n,
            m: mul.ambient(),
            graph: Subspace { basis: g },
        }
    }

    /// `dom x ran`, the relation of all pairs with components in the given subspaces.
    pub fn product_space(dom: &Subspace, ran: &Subspace) -> Self {
        let g = crate::linalg::block_diag(dom.basis(), ran.basis());
        LinearRelation {
            n: dom.ambient(),
            m: ran.ambient(),
            graph: Subspace { basis: g },
        }
    }

    pub fn dim_in(&self) -> usize {
        self.n
    }

    pub fn dim_out(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.graph.dim()
    }

    pub fn graph(&self) -> &Subspace {
        &self.graph
    }

    pub fn basis(&self) -> &CMat {
        self.graph.basis()
    }

    /// Input block of the graph basis.
    pub fn top(&self) -> CMat {
        rows(self.basis(), 0, self.n)
    }

    /// Output block of the graph basis.
    pub fn bottom(&self) -> CMat {
        rows(self.basis(), self.n, self.m)
    }

    pub fn dom(&self) -> Subspace {
        Subspace::span(&self.top())
    }

    pub fn ran(&self) -> Subspace {
        Subspace::span(&self.bottom())
    }

    pub fn ker(&self) -> Subspace {
        let k = null_space(&self.bottom());
        Subspace::span(&(self.top() * k))
    }

    pub fn mul(&self) -> Subspace {
        let k = null_space(&self.top());
        Subspace::span(&(self.bottom() * k))
    }

    pub fn inverse(&self) -> Self {
        LinearRelation {
            n: self.m,
            m: self.n,
            graph: Subspace {
                basis: vstack(&[&self.bottom(), &self.top()]),
            },
        }
    }

    /// `R* = {(h, k) : (k, f) = (h, g) for all (f, g) in R}`.
    pub fn adjoint(&self) -> Self {
        let rot = vstack(&[&(-self.bottom()), &self.top()]);
        LinearRelation {
            n: self.m,
            m: self.n,
            graph: Subspace {
                basis: complement(&rot),
            },
        }
    }

    /// Image of the graph under a linear map of `C^{n+m}` onto `C^{n2+m2}`.
    pub fn transform(&self, map: &CMat, n2: usize, m2: usize) -> Result<Self, RelError> {
        dim_check(map.ncols() == self.n + self.m && map.nrows() == n2 + m2, "transform shape")?;
        Ok(LinearRelation::from_span(n2, m2, &(map * self.basis())))
    }

    /// `{(f, z g)}`.
    pub fn scale(&self, z: C64) -> Self {
        let g = vstack(&[&self.top(), &(self.bottom() * z)]);
        LinearRelation::from_span(self.n, self.m, &g)
    }

    /// `R - lambda = {(f, g - lambda f)}`.
    pub fn shift(&self, lambda: C64) -> Result<Self, RelError> {
        dim_check(self.n == self.m, "shift needs a square relation")?;
        let g = vstack(&[&self.top(), &(self.bottom() - self.top() * lambda)]);
        Ok(LinearRelation::from_span(self.n, self.m, &g))
    }

    /// Operator sum `{(f, g + h) : (f, g) in self, (f, h) in other}`.
    pub fn sum(&self, other: &Self) -> Result<Self, RelError> {
        dim_check(self.n == other.n && self.m == other.m, "sum dimensions")?;
        let k = null_space(&hstack(&[&self.top(), &(-other.top())]));
        let k1 = rows(&k, 0, self.dim());
        let k2 = rows(&k, self.dim(), other.dim());
        let g = vstack(&[&(self.top() * &k1), &(self.bottom() * &k1 + other.bottom() * &k2)]);
        Ok(LinearRelation::from_span(self.n, self.m, &g))
    }

    /// Componentwise sum `{(f + h, g + k)}`.
    pub fn comp_sum(&self, other: &Self) -> Result<Self, RelError> {
        dim_check(self.n == other.n && self.m == other.m, "componentwise sum dimensions")?;
        Ok(LinearRelation::from_span(
            self.n,
            self.m,
            &hstack(&[self.basis(), other.basis()]),
        ))
    }

    /// Product `self * other = {(f, k) : (f, g) in other, (g, k) in self}`.
    pub fn product(&self, other: &Self) -> Result<Self, RelError> {
        dim_check(other.m == self.n, "product inner dimension")?;
        let k = null_space(&hstack(&[&other.bottom(), &(-self.top())]));
        let kb = rows(&k, 0, other.dim());
        let ka = rows(&k, other.dim(), self.dim());
        let g = vstack(&[&(other.top() * kb), &(self.bottom() * ka)]);
        Ok(LinearRelation::from_span(other.n, self.m, &g))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, RelError> {
        dim_check(self.n == other.n && self.m == other.m, "intersection dimensions")?;
        Ok(LinearRelation {
            n: self.n,
            m: self.m,
            graph: self.graph.intersect(&other.graph),
        })
    }

    /// Orthogonal sum of relations acting on `C^{n1+n2} -> C^{m1+m2}`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (n1, m1, n2, m2) = (self.n, self.m, other.n, other.m);
        let mut g = zeros(n1 + n2 + m1 + m2, self.dim() + other.dim());
        let d1 = self.dim();
        g.view_mut((0, 0), (n1, d1)).copy_from(&self.top());
        g.view_mut((n1 + n2, 0), (m1, d1)).copy_from(&self.bottom());
        g.view_mut((n1, d1), (n2, other.dim())).copy_from(&other.top());
        g.view_mut((n1 + n2 + m1, d1), (m2, other.dim()))
            .copy_from(&other.bottom());
        LinearRelation {
            n: n1 + n2,
            m: m1 + m2,
            graph: Subspace { basis: g },
        }
    }

    /// `N_lambda = ker(R - lambda)` and `N^_lambda = {(f, lambda f) in R}`.
    pub fn eigenspace(&self, lambda: C64) -> Result<(Subspace, LinearRelation), RelError> {
        dim_check(self.n == self.m, "eigenspace needs a square relation")?;
        let x = self.bottom() - self.top() * lambda;
        let smax = crate::linalg::norm2(&x).max(1.0);
        let k = null_space_with(&x, RANK_TOL * (self.n + self.dim()).max(1) as f64 * smax);
        let nl = Subspace::span(&(self.top() * k));
        let scale = 1.0 / (1.0 + lambda.norm_sqr()).sqrt();
        let g = vstack(&[nl.basis(), &(nl.basis() * lambda)]) * c(scale, 0.0);
        let hat = LinearRelation {
            n: self.n,
            m: self.n,
            graph: Subspace { basis: g },
        };
        Ok((nl, hat))
    }

    /// Whether `other` is contained in this relation.
    pub fn contains(&self, other: &Self, tol: &Tol) -> bool {
        self.n == other.n && self.m == other.m && self.graph.contains(&other.graph, tol)
    }

    pub fn equals(&self, other: &Self, tol: &Tol) -> bool {
        self.n == other.n && self.m == other.m && self.graph.equals(&other.graph, tol)
    }

    /// Largest principal angle between graphs (`pi/2` on dimension mismatch).
    pub fn gap(&self, other: &Self) -> f64 {
        if self.n != other.n || self.m != other.m {
            return FRAC_PI_2;
        }
        self.graph.gap(&other.graph)
    }

    /// Hermitian matrix of the form `Im (g, f)` in graph-basis coordinates.
    pub fn dissipation_form(&self) -> CMat {
        im_part(&(self.top().adjoint() * self.bottom()))
    }

    pub fn classify(&self, tol: &Tol) -> Classification {
        if self.n != self.m {
            return Classification::default();
        }
        let symmetric = self.adjoint().contains(self, tol);
        let ev = herm_eigvals(&self.dissipation_form());
        let lo = ev.first().copied().unwrap_or(0.0);
        let hi = ev.last().copied().unwrap_or(0.0);
        let dissipative = lo >= -tol.residual;
        let accumulative = hi <= tol.residual;
        let full = self.dim() == self.n;
        Classification {
            symmetric,
            selfadjoint: symmetric && full,
            dissipative,
            accumulative,
            maximal_dissipative: dissipative && full,
            maximal_accumulative: accumulative && full,
        }
    }

    /// Splits `R = R_s (+) ({0} x mul R)` for dissipative or accumulative `R`.
    pub fn operator_part(&self, tol: &Tol) -> Result<(LinearRelation, Subspace), RelError> {
        let cl = self.classify(tol);
        if !(cl.dissipative || cl.accumulative) {
            return Err(RelError::NotDissipative);
        }
        let mul = self.mul();
        let cut = LinearRelation::product_space(&Subspace::full(self.n), &mul.complement());
        Ok((self.intersect(&cut)?, mul))
    }

    /// Matrix of `(R - lambda)^{-1}`.
    pub fn resolvent(&self, lambda: C64) -> Result<CMat, RelError> {
        dim_check(self.n == self.m, "resolvent needs a square relation")?;
        if self.dim() != self.n {
            return Err(RelError::SingularAtLambda(lambda));
        }
        let x = self.bottom() - self.top() * lambda;
        let t = RANK_TOL * (self.n.max(1) as f64) * lambda.norm().max(1.0);
        if self.n > 0 && sigma_min(&x) <= t {
            return Err(RelError::SingularAtLambda(lambda));
        }
        let xt = x.transpose();
        let yt = self.top().transpose();
        // Y X^{-1} = (X^T \ Y^T)^T
        solve(&xt, &yt)
            .map(|s| s.transpose())
            .ok_or(RelError::SingularAtLambda(lambda))
    }

    /// Matrix of the relation when it is an everywhere defined operator.
    pub fn as_matrix(&self) -> Result<CMat, RelError> {
        if self.dim() != self.n {
            return Err(RelError::NotOperator);
        }
        if self.n == 0 {
            return Ok(zeros(self.m, 0));
        }
        let t = self.top();
        if sigma_min(&t) <= RANK_TOL * self.n as f64 {
            return Err(RelError::NotOperator);
        }
        solve(&t.transpose(), &self.bottom().transpose())
            .map(|s| s.transpose())
            .ok_or(RelError::NotOperator)
    }

    /// Whether the relation is single valued (`mul = {0}`).
    pub fn is_operator(&self) -> bool {
        self.mul().dim() == 0
    }
}

/// Sample set `{±i, 1±i, 2±i, ...}` with `2k` points.
pub fn simplicity_samples(k: usize) -> Vec<C64> {
    (0..k)
        .flat_map(|j| [c(j as f64, 1.0), c(j as f64, -1.0)])
        .collect()
}

/// Whether the defect spaces of `S*` at the sample points span the whole space.
pub fn is_simple(s: &LinearRelation, samples: &[C64]) -> Result<bool, RelError> {
    dim_check(s.dim_in() == s.dim_out(), "simplicity needs a square relation")?;
    let n = s.dim_in();
    let sa = s.adjoint();
    let mut span = Subspace::zero(n);
    for &l in samples {
        let (nl, _) = sa.eigenspace(l)?;
        span = span.sum(&nl);
    }
    Ok(span.dim() == n)
}

/// Simplicity test with the default sample set of size `2n`.
pub fn is_simple_default(s: &LinearRelation) -> Result<bool, RelError> {
    is_simple(s, &simplicity_samples(s.dim_in()))
}

/// Maximal residual of the defining pairing `(k, f) - (h, g)` of `adj` against `r`.
pub fn adjoint_pairing_residual(r: &LinearRelation, adj: &LinearRelation) -> f64 {
    let p = adj.bottom().adjoint() * r.top() - adj.top().adjoint() * r.bottom();
    crate::linalg::max_abs(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;

    fn r(x: f64) -> C64 {
        c(x, 0.0)
    }

    fn fix_a() -> LinearRelation {
        LinearRelation::from_generators(2, 2, &CMat::from_column_slice(4, 1, &[r(1.0), r(0.0), r(0.0), r(1.0)]))
            .unwrap()
    }

    fn fix_inf() -> LinearRelation {
        // h = (a, 0), k = (0, b)
        let g = CMat::from_column_slice(
            4,
            2,
            &[r(1.0), r(0.0), r(0.0), r(0.0), r(0.0), r(0.0), r(0.0), r(1.0)],
        );
        LinearRelation::from_generators(2, 2, &g).unwrap()
    }

    fn span_of(v: &[C64]) -> Subspace {
        Subspace::from_columns(&CMat::from_column_slice(v.len(), 1, v))
    }

    #[test]
    fn from_columns_rank_decisions() {
        assert_eq!(Subspace::from_columns(&eye(3)).dim(), 3);
        assert_eq!(Subspace::from_columns(&zeros(3, 3)).dim(), 0);
        let m = CMat::from_row_slice(2, 2, &[r(1.0), r(1.0), r(0.0), r(1e-14)]);
        let s = Subspace::from_columns_tol(&m, 1e-10);
        assert_eq!(s.dim(), 1);
        assert!(s.equals(&span_of(&[r(1.0), r(0.0)]), &Tol::default()));
    }

    #[test]
    fn parts_of_fixtures() {
        let tol = Tol::default();
        let a = fix_a();
        assert!(a.dom().equals(&span_of(&[r(1.0), r(0.0)]), &tol));
        assert!(a.ran().equals(&span_of(&[r(0.0), r(1.0)]), &tol));
        assert_eq!(a.ker().dim(), 0);
        assert_eq!(a.mul().dim(), 0);
        let id = LinearRelation::identity(2);
        assert_eq!((id.dom().dim(), id.ran().dim(), id.ker().dim(), id.mul().dim()), (2, 2, 0, 0));
        assert!(fix_inf().mul().equals(&span_of(&[r(0.0), r(1.0)]), &tol));
    }

    #[test]
    fn inverse_examples() {
        let tol = Tol::default();
        let two = LinearRelation::graph_of(&CMat::from_element(1, 1, r(2.0)));
        assert!(two.inverse().equals(&LinearRelation::graph_of(&CMat::from_element(1, 1, r(0.5))), &tol));
        let inv = fix_a().inverse();
        let expect = LinearRelation::from_generators(2, 2, &CMat::from_column_slice(4, 1, &[r(0.0), r(1.0), r(1.0), r(0.0)]))
            .unwrap();
        assert!(inv.equals(&expect, &tol));
    }

    #[test]
    fn adjoint_examples() {
        let tol = Tol::default();
        let z = LinearRelation::graph_of(&zeros(3, 3));
        assert!(z.adjoint().equals(&z, &tol));
        let sa = fix_a().adjoint();
        assert_eq!(sa.dim(), 3);
        // k1 = h2: vectors (h1, h2, k1, k2)
        let g = CMat::from_column_slice(
            4,
            3,
            &[r(1.0), r(0.0), r(0.0), r(0.0), r(0.0), r(1.0), r(1.0), r(0.0), r(0.0), r(0.0), r(0.0), r(1.0)],
        );
        assert!(sa.equals(&LinearRelation::from_generators(2, 2, &g).unwrap(), &tol));
        let h = CMat::from_row_slice(2, 2, &[r(2.0), c(1.0, -1.0), c(1.0, 1.0), r(-3.0)]);
        let gh = LinearRelation::graph_of(&h);
        assert!(gh.adjoint().equals(&gh, &tol));
        let a = CMat::from_row_slice(2, 2, &[r(1.0), r(2.0), r(3.0), r(4.0)]);
        assert!(LinearRelation::graph_of(&a)
            .adjoint()
            .equals(&LinearRelation::graph_of(&a.adjoint()), &tol));
        assert!(adjoint_pairing_residual(&fix_a(), &sa) < 1e-12);
    }

    #[test]
    fn sums() {
        let tol = Tol::default();
        let a = CMat::from_row_slice(2, 2, &[r(1.0), r(2.0), c(0.0, 1.0), r(4.0)]);
        let b = CMat::from_row_slice(2, 2, &[r(-1.0), r(0.5), r(3.0), c(1.0, 1.0)]);
        let s = LinearRelation::graph_of(&a).sum(&LinearRelation::graph_of(&b)).unwrap();
        assert!(s.equals(&LinearRelation::graph_of(&(&a + &b)), &tol));
        let f = fix_a();
        assert!(f.comp_sum(&LinearRelation::trivial(2, 2)).unwrap().equals(&f, &tol));
        let (_, ni) = f.adjoint().eigenspace(c(0.0, 1.0)).unwrap();
        assert_eq!(f.comp_sum(&ni).unwrap().dim(), 2);
    }

    #[test]
    fn product_and_intersection() {
        let tol = Tol::default();
        let f = fix_a();
        assert!(LinearRelation::identity(2).product(&f).unwrap().equals(&f, &tol));
        let swap = LinearRelation::graph_of(&CMat::from_row_slice(2, 2, &[r(0.0), r(1.0), r(1.0), r(0.0)]));
        assert!(f.intersect(&swap).unwrap().equals(&f, &tol));
        assert!(f.intersect(&f).unwrap().equals(&f, &tol));
        let g1 = LinearRelation::graph_of(&CMat::from_element(1, 1, r(1.0)));
        let g2 = LinearRelation::graph_of(&CMat::from_element(1, 1, r(2.0)));
        assert_eq!(g1.intersect(&g2).unwrap().dim(), 0);
    }

    #[test]
    fn eigenspaces() {
        let tol = Tol::default();
        let i = c(0.0, 1.0);
        let (n, _) = fix_a().adjoint().eigenspace(i).unwrap();
        assert!(n.equals(&span_of(&[r(1.0), i]), &tol));
        let d = LinearRelation::graph_of(&CMat::from_diagonal(&crate::linalg::CVec::from_vec(vec![r(1.0), r(2.0)])));
        assert_eq!(d.eigenspace(r(1.5)).unwrap().0.dim(), 0);
        assert!(d.eigenspace(r(1.0)).unwrap().0.equals(&span_of(&[r(1.0), r(0.0)]), &tol));
    }

    #[test]
    fn classification() {
        let tol = Tol::default();
        let a = fix_a().classify(&tol);
        assert!(a.symmetric && !a.selfadjoint);
        let h = CMat::from_row_slice(2, 2, &[r(1.0), c(0.0, 2.0), c(0.0, -2.0), r(0.0)]);
        assert!(LinearRelation::graph_of(&h).classify(&tol).selfadjoint);
        let inf = fix_inf();
        assert!(inf.classify(&tol).selfadjoint);
        assert_eq!(inf.mul().dim(), 1);
        assert!(inf.contains(&fix_a(), &tol));
        // {(h, k) : k1 = h2, h1 = 0} is not symmetric
        let g = CMat::from_column_slice(4, 2, &[r(0.0), r(1.0), r(1.0), r(0.0), r(0.0), r(0.0), r(0.0), r(1.0)]);
        assert!(!LinearRelation::from_generators(2, 2, &g).unwrap().classify(&tol).symmetric);
    }

    #[test]
    fn operator_parts() {
        let tol = Tol::default();
        let h = CMat::from_row_slice(2, 2, &[r(1.0), r(2.0), r(2.0), r(0.0)]);
        let g = LinearRelation::graph_of(&h);
        let (rs, mul) = g.operator_part(&tol).unwrap();
        assert!(rs.equals(&g, &tol) && mul.dim() == 0);
        let (rs, mul) = fix_inf().operator_part(&tol).unwrap();
        let expect = LinearRelation::from_generators(2, 2, &CMat::from_column_slice(4, 1, &[r(1.0), r(0.0), r(0.0), r(0.0)]))
            .unwrap();
        assert!(rs.equals(&expect, &tol));
        assert!(mul.equals(&span_of(&[r(0.0), r(1.0)]), &tol));
        let pure = LinearRelation::pure_mul(3, &Subspace::full(3));
        let (rs, mul) = pure.operator_part(&tol).unwrap();
        assert_eq!((rs.dim(), mul.dim()), (0, 3));
        let bad = LinearRelation::graph_of(&CMat::from_row_slice(2, 2, &[c(0.0, 1.0), r(0.0), r(0.0), c(0.0, -1.0)]));
        assert_eq!(bad.operator_part(&tol).unwrap_err(), RelError::NotDissipative);
    }

    #[test]
    fn simplicity() {
        let i = c(0.0, 1.0);
        assert!(is_simple(&fix_a(), &[i, -i]).unwrap());
        let h = LinearRelation::graph_of(&CMat::from_row_slice(2, 2, &[r(1.0), r(2.0), r(2.0), r(0.0)]));
        assert!(!is_simple_default(&h).unwrap());
        let sum = fix_a().direct_sum(&LinearRelation::graph_of(&CMat::from_element(1, 1, r(3.0))));
        assert!(!is_simple_default(&sum).unwrap());
    }

    #[test]
    fn resolvents() {
        let pure = LinearRelation::pure_mul(1, &Subspace::full(1));
        let rr = pure.resolvent(c(0.0, 1.0)).unwrap();
        assert!(rr[(0, 0)].norm() < 1e-15);
        let d = LinearRelation::graph_of(&CMat::from_diagonal(&crate::linalg::CVec::from_vec(vec![r(1.0), r(2.0)])));
        let rr = d.resolvent(r(0.0)).unwrap();
        assert!((rr[(0, 0)] - r(1.0)).norm() < 1e-14 && (rr[(1, 1)] - r(0.5)).norm() < 1e-14);
        assert!(matches!(d.resolvent(r(1.0)), Err(RelError::SingularAtLambda(_))));
        assert!(max_abs(&(rr.clone() - rr)) == 0.0);
    }

    #[test]
    fn reorthonormalized_graph_is_equal() {
        let a = CMat::from_row_slice(2, 2, &[r(1.0), c(2.0, 1.0), r(0.0), r(-1.0)]);
        let g = LinearRelation::graph_of(&a);
        let mixed = g.basis() * CMat::from_row_slice(2, 2, &[r(2.0), r(1.0), c(0.0, 1.0), r(1.0)]);
        let h = LinearRelation::from_generators(2, 2, &mixed).unwrap();
        assert!(g.equals(&h, &Tol::default()));
    }

    #[test]
    fn angles_of_lines() {
        let a = span_of(&[r(1.0), r(0.0)]);
        let b = span_of(&[r(1.0), r(1.0)]);
        let th = principal_angles(&a, &b);
        assert!((th[0] - std::f64::consts::FRAC_PI_4).abs() < 1e-14);
    }
}
