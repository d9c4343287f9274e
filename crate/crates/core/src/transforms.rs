//! Shmul'yan transforms and transforms of boundary relations and their Weyl functions.

use thiserror::Error;

use crate::boundary::{check_b123, BoundaryError, BoundaryRelation};
use crate::kreinspace::{is_standard_unitary, j_matrix};
use crate::linalg::{block_diag, block2, eye, hstack, inverse, max_abs, null_space, rows, vstack, zeros, CMat};
use crate::linrel::{LinearRelation, RelError, Tol};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("BG is not Hermitian")]
    BGNotHermitian,
    #[error("G is singular")]
    GSingular,
    #[error("W Γ has a kernel larger than ker Γ")]
    KernelNontrivial,
    #[error("W is not a standard J-unitary operator")]
    NotStandard,
    #[error("generalized triplet conditions fail for {0}")]
    HypothesisFailed(&'static str),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Rel(#[from] RelError),
}

/// `W[Θ] = {k̂ : (ĥ, k̂) ∈ W, ĥ ∈ Θ}` for `W: C^{2m} -> C^{2k}` and `Θ` in `C^m`.
pub fn shmulyan(w: &LinearRelation, theta: &LinearRelation) -> Result<LinearRelation, TransformError> {
    if w.dim_in() != theta.dim_in() + theta.dim_out() || !w.dim_out().is_multiple_of(2) {
        return Err(TransformError::DimMismatch("W must act on C^{2m}".into()));
    }
    let k = w.dim_out() / 2;
    let coef = null_space(&hstack(&[&w.top(), &(-theta.basis())]));
    let c1 = rows(&coef, 0, w.dim());
    Ok(LinearRelation::from_generators(k, k, &(w.bottom() * c1))?)
}

/// `(W10 + W11 Θ)(W00 + W01 Θ)^{-1}` evaluated literally over pairs `{h,h'}, {h,h''} ∈ Θ`.
pub fn linear_fractional(w: &CMat, theta: &LinearRelation) -> Result<LinearRelation, TransformError> {
    let m = theta.dim_in();
    if w.shape() != (2 * m, 2 * m) || theta.dim_out() != m {
        return Err(TransformError::DimMismatch("W must be 2m x 2m".into()));
    }
    let (w00, w01) = (w.view((0, 0), (m, m)), w.view((0, m), (m, m)));
    let (w10, w11) = (w.view((m, 0), (m, m)), w.view((m, m), (m, m)));
    let (t, b) = (theta.top(), theta.bottom());
    let d = theta.dim();
    let coef = null_space(&hstack(&[&t, &(-&t)]));
    let (ca, cb) = (rows(&coef, 0, d), rows(&coef, d, d));
    let h = &t * &ca;
    let hp = &b * &ca;
    let hpp = &b * &cb;
    let top = w00 * &h + w01 * &hp;
    let bottom = w10 * &h + w11 * &hpp;
    Ok(LinearRelation::from_generators(m, m, &vstack(&[&top, &bottom]))?)
}

/// A standard J-unitary operator `[[W00, W01], [W10, W11]]` on `C^{2m}`.
#[derive(Clone, Debug)]
pub struct StandardJUnitary {
    w: CMat,
}

impl StandardJUnitary {
    pub fn new(w: CMat, tol: &Tol) -> Result<Self, TransformError> {
        let j = j_matrix(w.nrows() / 2);
        if !is_standard_unitary(&w, tol) || max_abs(&(&w * &j * w.adjoint() - &j)) > tol.residual {
            return Err(TransformError::NotStandard);
        }
        Ok(StandardJUnitary { w })
    }

    pub fn from_blocks(w00: &CMat, w01: &CMat, w10: &CMat, w11: &CMat, tol: &Tol) -> Result<Self, TransformError> {
        Self::new(block2(w00, w01, w10, w11), tol)
    }

    pub fn matrix(&self) -> &CMat {
        &self.w
    }

    pub fn block(&self, i: usize, j: usize) -> CMat {
        let m = self.w.nrows() / 2;
        self.w.view((i * m, j * m), (m, m)).into_owned()
    }

    pub fn relation(&self) -> LinearRelation {
        LinearRelation::graph_of(&self.w)
    }
}

/// `WΓ` with the kernel check `ker WΓ = ker Γ`.
pub fn compose_boundary(w: &LinearRelation, g: &BoundaryRelation, tol: &Tol) -> Result<BoundaryRelation, TransformError> {
    if w.dim_in() != g.gamma().dim_out() {
        return Err(TransformError::DimMismatch("W must act on the boundary space".into()));
    }
    let wg = w.product(g.gamma())?;
    if !g.s_rel().graph().contains(&wg.ker(), tol) {
        return Err(TransformError::KernelNontrivial);
    }
    Ok(BoundaryRelation::validate(wg, tol)?)
}

/// `Γ^(2) ∘ (Γ^(1))^{-1}` for two boundary relations of the same `S*`.
pub fn connecting_relation(g1: &BoundaryRelation, g2: &BoundaryRelation) -> Result<LinearRelation, TransformError> {
    Ok(g2.gamma().product(&g1.gamma().inverse())?)
}

fn apply_output_map(g: &BoundaryRelation, out: &CMat, tol: &Tol) -> Result<BoundaryRelation, TransformError> {
    let n = g.n();
    let m2 = out.nrows() / 2;
    let map = block_diag(&eye(2 * n), out);
    Ok(BoundaryRelation::validate(g.gamma().transform(&map, 2 * n, 2 * m2)?, tol)?)
}

/// `Γ^⊤ = {f̂, J ĥ}`; its Weyl family is `-M^{-1}`.
pub fn transpose(g: &BoundaryRelation, tol: &Tol) -> Result<BoundaryRelation, TransformError> {
    apply_output_map(g, &j_matrix(g.m()), tol)
}

/// `{f̂, (G^{-1}h, Bh + G*h')}` with Weyl function `BG + G*MG`.
pub fn affine_transform(g: &BoundaryRelation, b: &CMat, gm: &CMat, tol: &Tol) -> Result<BoundaryRelation, TransformError> {
    let m = g.m();
    if b.shape() != (m, m) || gm.shape() != (m, m) {
        return Err(TransformError::DimMismatch("B and G must be m x m".into()));
    }
    let gi = inverse(gm).ok_or(TransformError::GSingular)?;
    let bg = b * gm;
    if max_abs(&(&bg - bg.adjoint())) > tol.residual * (1.0 + max_abs(&bg)) {
        return Err(TransformError::BGNotHermitian);
    }
    let out = block2(&gi, &zeros(m, m), b, &gm.adjoint());
    apply_output_map(g, &out, tol)
}

/// Coordinate split `C^m = C^{d1} ⊕ C^{d2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SpaceSplit {
    pub d1: usize,
    pub d2: usize,
}

impl SpaceSplit {
    pub fn new(d1: usize, d2: usize) -> Self {
        SpaceSplit { d1, d2 }
    }

    pub fn m(&self) -> usize {
        self.d1 + self.d2
    }

    /// Isometric embedding of the `j`-th summand.
    pub fn embedding(&self, j: usize) -> CMat {
        match j {
            1 => vstack(&[&eye(self.d1), &zeros(self.d2, self.d1)]),
            _ => vstack(&[&zeros(self.d1, self.d2), &eye(self.d2)]),
        }
    }

    fn dim(&self, j: usize) -> usize {
        if j == 1 {
            self.d1
        } else {
            self.d2
        }
    }
}

/// `P^(j) = {((h, h'), (h, P_j h')) : h ∈ H_j, h' ∈ H}` from `C^{2m}` to `C^{2 d_j}`.
pub fn projection_relation(split: &SpaceSplit, j: usize) -> LinearRelation {
    let m = split.m();
    let d = split.dim(j);
    let e = split.embedding(j);
    let gens = vstack(&[
        &block_diag(&e, &eye(m)),
        &block_diag(&eye(d), &e.adjoint()),
    ]);
    LinearRelation::from_generators(2 * m, 2 * d, &gens).expect("shape")
}

/// Output of a compression-type transform: the new symmetric relation and its boundary relation.
#[derive(Clone, Debug)]
pub struct Compressed {
    pub h: LinearRelation,
    pub gamma: BoundaryRelation,
}

fn require_b123(g: &LinearRelation, which: &'static str, tol: &Tol) -> Result<(), TransformError> {
    if check_b123(g, tol)?.all() {
        Ok(())
    } else {
        Err(TransformError::HypothesisFailed(which))
    }
}

fn split_check(g: &BoundaryRelation, split: &SpaceSplit) -> Result<(), TransformError> {
    if split.m() != g.m() {
        return Err(TransformError::DimMismatch(format!("split {}+{} of C^{}", split.d1, split.d2, g.m())));
    }
    Ok(())
}

fn compress_unchecked(g: &BoundaryRelation, split: &SpaceSplit, j: usize, tol: &Tol) -> Result<Compressed, TransformError> {
    let p = projection_relation(split, j);
    let gj = BoundaryRelation::validate(p.product(g.gamma())?, tol)?;
    Ok(Compressed {
        h: gj.s_rel().clone(),
        gamma: gj,
    })
}

/// `Γ^(j) = P^(j) ∘ Γ` with Weyl function `M_jj`.
pub fn block_compress(g: &BoundaryRelation, split: &SpaceSplit, j: usize, tol: &Tol) -> Result<Compressed, TransformError> {
    split_check(g, split)?;
    require_b123(g.gamma(), "Γ", tol)?;
    compress_unchecked(g, split, j, tol)
}

/// `Γ' = (P^(1) ∘ Γ^⊤)^⊤` with Weyl function `M11 - M12 M22^{-1} M21`.
pub fn schur_complement(g: &BoundaryRelation, split: &SpaceSplit, tol: &Tol) -> Result<Compressed, TransformError> {
    split_check(g, split)?;
    require_b123(g.gamma(), "Γ", tol)?;
    let gt = transpose(g, tol)?;
    require_b123(gt.gamma(), "Γ^⊤", tol)?;
    let g2 = compress_unchecked(g, split, 2, tol)?;
    let g2t = transpose(&g2.gamma, tol)?;
    require_b123(g2t.gamma(), "(Γ^(2))^⊤", tol)?;
    let c1 = compress_unchecked(&gt, split, 1, tol)?;
    let gp = transpose(&c1.gamma, tol)?;
    Ok(Compressed {
        h: gp.s_rel().clone(),
        gamma: gp,
    })
}

/// `Γ_T = {f̂, (h2, T* h1' + h2') : h1 = T h2}` with Weyl function
/// `T*M11 T + T*M12 + M21 T + M22`; `t` maps `C^{d2}` into `C^{d1}`.
pub fn t_transform(g: &BoundaryRelation, split: &SpaceSplit, t: &CMat, tol: &Tol) -> Result<Compressed, TransformError> {
    split_check(g, split)?;
    if t.shape() != (split.d1, split.d2) {
        return Err(TransformError::DimMismatch("T must be d1 x d2".into()));
    }
    require_b123(g.gamma(), "Γ", tol)?;
    let (d1, d2) = (split.d1, split.d2);
    let gm = block2(&eye(d1), t, &zeros(d2, d1), &eye(d2));
    let gi = block2(&eye(d1), &(-t), &zeros(d2, d1), &eye(d2));
    let w = block_diag(&gi, &gm.adjoint());
    let wg = apply_output_map(g, &w, tol)?;
    compress_unchecked(&wg, split, 2, tol)
}

/// Orthogonal sum of boundary relations in the layout `(f1, f2, f1', f2') -> (h1, h2, h1', h2')`.
pub fn boundary_direct_sum(g1: &BoundaryRelation, g2: &BoundaryRelation, tol: &Tol) -> Result<BoundaryRelation, TransformError> {
    let (n1, n2, m1, m2) = (g1.n(), g2.n(), g1.m(), g2.m());
    let (nn, mm) = (n1 + n2, m1 + m2);
    let (k1, k2) = (g1.gamma().dim(), g2.gamma().dim());
    let mut gens = zeros(2 * nn + 2 * mm, k1 + k2);
    let place = |gens: &mut CMat, src: &CMat, col: usize, offsets: [usize; 4], sizes: [usize; 2]| {
        let [n, m] = sizes;
        let k = src.ncols();
        gens.view_mut((offsets[0], col), (n, k)).copy_from(&src.rows(0, n));
        gens.view_mut((offsets[1], col), (n, k)).copy_from(&src.rows(n, n));
        gens.view_mut((offsets[2], col), (m, k)).copy_from(&src.rows(2 * n, m));
        gens.view_mut((offsets[3], col), (m, k)).copy_from(&src.rows(2 * n + m, m));
    };
    place(&mut gens, g1.gamma().basis(), 0, [0, nn, 2 * nn, 2 * nn + mm], [n1, m1]);
    place(&mut gens, g2.gamma().basis(), k1, [n1, nn + n1, 2 * nn + m1, 2 * nn + mm + m1], [n2, m2]);
    let gamma = LinearRelation::from_generators(2 * nn, 2 * mm, &gens)?;
    Ok(BoundaryRelation::validate(gamma, tol)?)
}

/// Boundary relation with Weyl function `M1 + M2`, built as the T-transform of `Γ1 ⊕ Γ2` with `T = I`.
pub fn sum_weyl(g1: &BoundaryRelation, g2: &BoundaryRelation, tol: &Tol) -> Result<Compressed, TransformError> {
    let m = g1.m();
    if g2.m() != m {
        return Err(TransformError::DimMismatch(format!("parameter spaces C^{} and C^{}", m, g2.m())));
    }
    let sum = boundary_direct_sum(g1, g2, tol)?;
    t_transform(&sum, &SpaceSplit::new(m, m), &eye(m), tol)
}

/// Diagonal block `M_jj` of a matrix.
pub fn weyl_block(mat: &CMat, split: &SpaceSplit, j: usize) -> CMat {
    let off = if j == 1 { 0 } else { split.d1 };
    let d = split.dim(j);
    mat.view((off, off), (d, d)).into_owned()
}

fn quarters(mat: &CMat, split: &SpaceSplit) -> (CMat, CMat, CMat, CMat) {
    let (d1, d2) = (split.d1, split.d2);
    (
        mat.view((0, 0), (d1, d1)).into_owned(),
        mat.view((0, d1), (d1, d2)).into_owned(),
        mat.view((d1, 0), (d2, d1)).into_owned(),
        mat.view((d1, d1), (d2, d2)).into_owned(),
    )
}

/// `M11 - M12 M22^{-1} M21`.
pub fn weyl_schur(mat: &CMat, split: &SpaceSplit) -> Option<CMat> {
    let (m11, m12, m21, m22) = quarters(mat, split);
    Some(m11 - m12 * inverse(&m22)? * m21)
}

/// `T*M11 T + T*M12 + M21 T + M22`.
pub fn weyl_t(mat: &CMat, split: &SpaceSplit, t: &CMat) -> CMat {
    let (m11, m12, m21, m22) = quarters(mat, split);
    let th = t.adjoint();
    &th * m11 * t + &th * m12 + m21 * t + m22
}
