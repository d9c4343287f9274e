//! Kreĭn space structure on `C^{2n}` and the main transform.
//!
//! `C^{2n}` carries the indefinite form `[x, y] = (J x, y)` with
//! `J = [[0, -iI], [iI, 0]]`.

use thiserror::Error;

use crate::linalg::{block_diag, block2, c, eye, zeros, CMat};
use crate::linrel::{LinearRelation, RelError, Subspace, Tol};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KreinError {
    #[error("relation dimensions {0}x{1} are not both even")]
    OddDimension(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("relation is not unitary")]
    NotUnitary,
    #[error(transparent)]
    Rel(#[from] RelError),
}

/// The fundamental symmetry on `C^{2n}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FundamentalSymmetry {
    pub half_dim: usize,
}

impl FundamentalSymmetry {
    pub fn new(half_dim: usize) -> Self {
        FundamentalSymmetry { half_dim }
    }

    pub fn matrix(&self) -> CMat {
        j_matrix(self.half_dim)
    }
}

pub fn j_matrix(n: usize) -> CMat {
    let i = eye(n);
    block2(&zeros(n, n), &(&i * c(0.0, -1.0)), &(&i * c(0.0, 1.0)), &zeros(n, n))
}

/// Kreĭn-orthogonal complement `L^[⊥] = (J L)^⊥`.
pub fn j_complement(l: &Subspace) -> Subspace {
    let n = l.ambient() / 2;
    l.map(&j_matrix(n)).complement()
}

/// A relation between the Kreĭn spaces `C^{2n}` and `C^{2m}`.
#[derive(Clone, Debug)]
pub struct KreinRelation {
    rel: LinearRelation,
}

impl KreinRelation {
    pub fn new(rel: LinearRelation) -> Result<Self, KreinError> {
        let (a, b) = (rel.dim_in(), rel.dim_out());
        if a % 2 != 0 || b % 2 != 0 {
            return Err(KreinError::OddDimension(a, b));
        }
        Ok(KreinRelation { rel })
    }

    /// Graph of a matrix acting from `C^{2n}` to `C^{2m}`.
    pub fn from_matrix(w: &CMat) -> Result<Self, KreinError> {
        Self::new(LinearRelation::graph_of(w))
    }

    pub fn rel(&self) -> &LinearRelation {
        &self.rel
    }

    pub fn into_rel(self) -> LinearRelation {
        self.rel
    }

    /// Half dimension of the input space.
    pub fn n(&self) -> usize {
        self.rel.dim_in() / 2
    }

    /// Half dimension of the output space.
    pub fn m(&self) -> usize {
        self.rel.dim_out() / 2
    }

    pub fn inverse(&self) -> Self {
        KreinRelation {
            rel: self.rel.inverse(),
        }
    }

    /// `T^[*] = J_in T* J_out`.
    pub fn krein_adjoint(&self) -> Self {
        let adj = self.rel.adjoint();
        let map = block_diag(&j_matrix(self.m()), &j_matrix(self.n()));
        KreinRelation {
            rel: adj
                .transform(&map, adj.dim_in(), adj.dim_out())
                .expect("shapes agree"),
        }
    }

    /// `T^{-1} ⊆ T^[*]`.
    pub fn is_isometric(&self, tol: &Tol) -> bool {
        self.krein_adjoint().rel.contains(&self.rel.inverse(), tol)
    }

    /// `T^{-1} = T^[*]`.
    pub fn is_unitary(&self, tol: &Tol) -> bool {
        self.krein_adjoint().rel.equals(&self.rel.inverse(), tol)
    }

    /// Maximal entry of `[h', f'] - [h, f]`-type residuals: the Gram matrix of
    /// `(J_out g) , g'` minus `(J_in f), f'` over graph basis pairs.
    pub fn isometry_residual(&self) -> f64 {
        let top = self.rel.top();
        let bottom = self.rel.bottom();
        let gin = top.adjoint() * j_matrix(self.n()) * &top;
        let gout = bottom.adjoint() * j_matrix(self.m()) * &bottom;
        crate::linalg::max_abs(&(gout - gin))
    }

    /// `S T` as a Kreĭn relation.
    pub fn product(&self, t: &KreinRelation) -> Result<Self, KreinError> {
        if t.rel.dim_out() != self.rel.dim_in() {
            return Err(KreinError::DimMismatch("product inner dimension".into()));
        }
        Ok(KreinRelation {
            rel: self.rel.product(&t.rel)?,
        })
    }
}

/// `{(f,f'),(h,h')} -> {(f,h),(f',-h')}` from `C^{2n} -> C^{2m}` to a relation on `C^{n+m}`.
pub fn main_transform(gamma: &KreinRelation) -> LinearRelation {
    let (n, m) = (gamma.n(), gamma.m());
    let p = main_shuffle(n, m);
    gamma
        .rel
        .transform(&p, n + m, n + m)
        .expect("shapes agree")
}

/// Inverse of [`main_transform`]; `n` is the dimension of the first summand.
pub fn inverse_main_transform(a: &LinearRelation, n: usize) -> Result<KreinRelation, KreinError> {
    if a.dim_in() != a.dim_out() || a.dim_in() < n {
        return Err(KreinError::DimMismatch("main transform split".into()));
    }
    let m = a.dim_in() - n;
    let p = main_shuffle(n, m).adjoint();
    KreinRelation::new(a.transform(&p, 2 * n, 2 * m)?)
}

/// Signed permutation taking `(f, f', h, h')` to `(f, h, f', -h')`.
fn main_shuffle(n: usize, m: usize) -> CMat {
    let d = 2 * (n + m);
    let mut p = zeros(d, d);
    let one = c(1.0, 0.0);
    for i in 0..n {
        p[(i, i)] = one;
        p[(n + m + i, n + i)] = one;
    }
    for j in 0..m {
        p[(n + j, 2 * n + j)] = one;
        p[(2 * n + m + j, 2 * n + m + j)] = -one;
    }
    p
}

/// Residual angles of `ker T = (dom T)^[⊥]` and `mul T = (ran T)^[⊥]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DomainIdentities {
    pub ker_residual: f64,
    pub mul_residual: f64,
}

pub fn unitary_domain_identities(t: &KreinRelation, tol: &Tol) -> Result<DomainIdentities, KreinError> {
    if !t.is_unitary(tol) {
        return Err(KreinError::NotUnitary);
    }
    let r = t.rel();
    Ok(DomainIdentities {
        ker_residual: r.ker().gap(&j_complement(&r.dom())),
        mul_residual: r.mul().gap(&j_complement(&r.ran())),
    })
}

/// Outcome of composing two Kreĭn relations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProductReport {
    pub isometric: bool,
    pub unitary: bool,
    /// `ran T ⊆ dom S`.
    pub ran_in_dom: bool,
    /// `dom S ⊆ ran T`.
    pub dom_in_ran: bool,
    /// `T` or `S` is an everywhere defined operator.
    pub standard_factor: bool,
}

fn is_standard(r: &LinearRelation) -> bool {
    r.dom().dim() == r.dim_in() && r.mul().dim() == 0
}

/// Composes `S T` and reports unitarity together with the classical sufficient hypotheses.
pub fn product_unitarity_check(
    s: &KreinRelation,
    t: &KreinRelation,
    tol: &Tol,
) -> Result<ProductReport, KreinError> {
    let st = s.product(t)?;
    Ok(ProductReport {
        isometric: st.is_isometric(tol),
        unitary: st.is_unitary(tol),
        ran_in_dom: s.rel.dom().contains(&t.rel.ran(), tol),
        dom_in_ran: t.rel.ran().contains(&s.rel.dom(), tol),
        standard_factor: is_standard(&s.rel) || is_standard(&t.rel),
    })
}

/// Whether a `2m x 2m` matrix satisfies `W* J W = J`.
pub fn is_standard_unitary(w: &CMat, tol: &Tol) -> bool {
    if w.nrows() != w.ncols() || !w.nrows().is_multiple_of(2) {
        return false;
    }
    let j = j_matrix(w.nrows() / 2);
    crate::linalg::max_abs(&(w.adjoint() * &j * w - j)) <= tol.residual
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs;
    use crate::random;

    fn r(x: f64) -> crate::linalg::C64 {
        c(x, 0.0)
    }

    fn fix_b_gamma() -> KreinRelation {
        // (f, f') -> (f', -f)
        let w = CMat::from_row_slice(2, 2, &[r(0.0), r(1.0), r(-1.0), r(0.0)]);
        KreinRelation::from_matrix(&w).unwrap()
    }

    #[test]
    fn j_is_involutive_and_hermitian() {
        for n in 0..4 {
            let j = j_matrix(n);
            assert!(max_abs(&(&j * &j - eye(2 * n))) == 0.0);
            assert!(max_abs(&(&j - j.adjoint())) == 0.0);
        }
    }

    #[test]
    fn adjoint_of_j_and_upper_block() {
        let tol = Tol::default();
        let j = KreinRelation::from_matrix(&j_matrix(2)).unwrap();
        assert!(j.krein_adjoint().rel().equals(j.rel(), &tol));
        let k = CMat::from_row_slice(2, 2, &[r(1.0), c(0.0, 2.0), c(0.0, -2.0), r(-1.0)]);
        let z = zeros(2, 2);
        let t = KreinRelation::from_matrix(&block2(&eye(2), &k, &z, &eye(2))).unwrap();
        let expect = LinearRelation::graph_of(&block2(&eye(2), &(-k.adjoint()), &z, &eye(2)));
        assert!(t.krein_adjoint().rel().equals(&expect, &tol));
        assert!(t.is_unitary(&tol));
        let ki = CMat::from_element(1, 1, c(0.0, 1.0));
        let z1 = zeros(1, 1);
        let bad = KreinRelation::from_matrix(&block2(&eye(1), &ki, &z1, &eye(1))).unwrap();
        assert!(!bad.is_isometric(&tol));
    }

    #[test]
    fn krein_pairing_identity() {
        let mut g = random::rng(7);
        let t = KreinRelation::new(random::relation(&mut g, 4, 6, 4)).unwrap();
        let ad = t.krein_adjoint();
        // [beta, h] = [alpha, k] for (alpha, beta) in T^[*], (h, k) in T
        let ja = j_matrix(3);
        let jb = j_matrix(2);
        let lhs = t.rel().top().adjoint() * &jb * ad.rel().bottom();
        let rhs = t.rel().bottom().adjoint() * &ja * ad.rel().top();
        assert!(max_abs(&(lhs - rhs)) < 1e-12);
    }

    #[test]
    fn main_transform_examples() {
        let tol = Tol::default();
        let a = main_transform(&fix_b_gamma());
        let swap = LinearRelation::graph_of(&CMat::from_row_slice(2, 2, &[r(0.0), r(1.0), r(1.0), r(0.0)]));
        assert!(a.equals(&swap, &tol));
        let mut g = random::rng(3);
        for _ in 0..50 {
            let rel = random::relation(&mut g, 4, 2, 3);
            let k = KreinRelation::new(rel.clone()).unwrap();
            let back = inverse_main_transform(&main_transform(&k), 2).unwrap();
            assert!(back.rel().equals(&rel, &tol));
        }
    }

    #[test]
    fn isometric_not_unitary_maps_to_symmetric() {
        let tol = Tol::default();
        let mut g = random::rng(11);
        let s = random::symmetric_operator(&mut g, 3, 1);
        let k = inverse_main_transform(&s, 2).unwrap();
        assert!(k.is_isometric(&tol) && !k.is_unitary(&tol));
        let cl = main_transform(&k).classify(&tol);
        assert!(cl.symmetric && !cl.selfadjoint);
    }

    #[test]
    fn domain_identities() {
        let tol = Tol::default();
        let d = unitary_domain_identities(&fix_b_gamma(), &tol).unwrap();
        assert!(d.ker_residual < 1e-10 && d.mul_residual < 1e-10);
        let mut g = random::rng(5);
        let w = KreinRelation::from_matrix(&random::standard_j_unitary(&mut g, 2)).unwrap();
        let d = unitary_domain_identities(&w, &tol).unwrap();
        assert!(d.ker_residual < 1e-10 && d.mul_residual < 1e-10);
        assert_eq!(w.rel().ker().dim(), 0);
        assert_eq!(w.rel().dom().dim(), 4);
        let bad = KreinRelation::from_matrix(&(eye(2) * c(2.0, 0.0))).unwrap();
        assert_eq!(unitary_domain_identities(&bad, &tol).unwrap_err(), KreinError::NotUnitary);
    }

    #[test]
    fn products_of_unitaries() {
        let tol = Tol::default();
        let mut g = random::rng(9);
        let w1 = KreinRelation::from_matrix(&random::standard_j_unitary(&mut g, 2)).unwrap();
        let w2 = KreinRelation::from_matrix(&random::standard_j_unitary(&mut g, 2)).unwrap();
        assert!(is_standard_unitary(&random::standard_j_unitary(&mut g, 3), &tol));
        let rep = product_unitarity_check(&w1, &w2, &tol).unwrap();
        assert!(rep.unitary && rep.isometric && rep.ran_in_dom && rep.standard_factor);
        let h = random::selfadjoint_relation(&mut g, 3, 1);
        let gam = inverse_main_transform(&h, 1).unwrap();
        let w = KreinRelation::from_matrix(&random::standard_j_unitary(&mut g, 2)).unwrap();
        let rep = product_unitarity_check(&w, &gam, &tol).unwrap();
        assert!(rep.unitary && rep.standard_factor);
    }
}
