//! Seeded random generators for matrices, relations and J-unitary operators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{block2, c, eye, orth, zeros, CMat, C64};
use crate::linrel::{LinearRelation, Subspace};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian<R: Rng>(rng: &mut R, r: usize, cols: usize) -> CMat {
    CMat::from_fn(r, cols, |_, _| complex_normal(rng))
}

pub fn hermitian<R: Rng>(rng: &mut R, n: usize) -> CMat {
    let g = gaussian(rng, n, n);
    (&g + g.adjoint()) * c(0.5, 0.0)
}

/// Positive semidefinite matrix of the given rank.
pub fn psd<R: Rng>(rng: &mut R, n: usize, rank: usize) -> CMat {
    let g = gaussian(rng, n, rank);
    &g * g.adjoint()
}

pub fn unitary<R: Rng>(rng: &mut R, n: usize) -> CMat {
    if n == 0 {
        return zeros(0, 0);
    }
    gaussian(rng, n, n).qr().q()
}

/// Well conditioned invertible matrix.
pub fn invertible<R: Rng>(rng: &mut R, n: usize) -> CMat {
    eye(n) * c(1.5, 0.0) + gaussian(rng, n, n) * c(0.4, 0.0)
}

/// Random subspace of `C^n` of dimension `k`.
pub fn subspace<R: Rng>(rng: &mut R, n: usize, k: usize) -> Subspace {
    Subspace::from_orthonormal(orth(&gaussian(rng, n, k)))
}

/// Random relation `C^n -> C^m` whose graph has dimension `k`.
pub fn relation<R: Rng>(rng: &mut R, n: usize, m: usize, k: usize) -> LinearRelation {
    LinearRelation::new(n, m, subspace(rng, n + m, k)).expect("dimensions agree")
}

/// Hermitian operator restricted to a random `k`-dimensional domain.
pub fn symmetric_operator<R: Rng>(rng: &mut R, n: usize, k: usize) -> LinearRelation {
    let h = hermitian(rng, n);
    let d = subspace(rng, n, k);
    let g = crate::linalg::vstack(&[d.basis(), &(&h * d.basis())]);
    LinearRelation::from_generators(n, n, &g).expect("dimensions agree")
}

/// Selfadjoint relation on `C^n` with a `p`-dimensional multivalued part.
pub fn selfadjoint_relation<R: Rng>(rng: &mut R, n: usize, p: usize) -> LinearRelation {
    let u = unitary(rng, n);
    let u1 = u.columns(0, n - p).into_owned();
    let u2 = u.columns(n - p, p).into_owned();
    let h = hermitian(rng, n - p);
    let top = crate::linalg::hstack(&[&u1, &zeros(n, p)]);
    let bottom = crate::linalg::hstack(&[&(&u1 * h), &u2]);
    LinearRelation::from_generators(n, n, &crate::linalg::vstack(&[&top, &bottom]))
        .expect("dimensions agree")
}

/// Standard J-unitary operator on `C^{2m}`: a product of `[[I,K],[0,I]]`,
/// `[[G^{-1},0],[B,G*]]` with `BG` Hermitian, and optionally `J`.
pub fn standard_j_unitary<R: Rng>(rng: &mut R, m: usize) -> CMat {
    let z = zeros(m, m);
    let k = hermitian(rng, m);
    let upper = block2(&eye(m), &k, &z, &eye(m));
    let g = invertible(rng, m);
    let gi = crate::linalg::inverse(&g).expect("well conditioned");
    let b = hermitian(rng, m) * &gi;
    let lower = block2(&gi, &z, &b, &g.adjoint());
    let mut w = upper * lower;
    if rng.gen_bool(0.5) {
        w = crate::kreinspace::j_matrix(m) * w;
    }
    w
}
