//! Weyl function and γ-field of boundary triplets, with the resolvent-type identities.

use extensio::boundary::{check_weyl_identities, defect_report, von_neumann_triplet, BoundaryRelation};
use extensio::linalg::c;
use extensio::linrel::Tol;
use extensio::models::fix_b_gamma;
use extensio::random;

fn main() {
    let tol = Tol::default();
    let g = BoundaryRelation::validate(fix_b_gamma(), &tol).expect("unitary");
    println!("two-point model: M(i) = {}", g.weyl_matrix(c(0.0, 1.0)).expect("nonreal")[(0, 0)]);
    let mut rng = random::rng(3);
    let s = random::symmetric_operator(&mut rng, 5, 2);
    let t = von_neumann_triplet(&s, None, &tol).expect("symmetric");
    let b = t.base();
    println!("random symmetric operator: {:?}", defect_report(b).expect("valid"));
    println!("M(i) = {:.6}", b.weyl_matrix(c(0.0, 1.0)).expect("nonreal"));
    let r = check_weyl_identities(b, c(0.5, 2.0), c(-1.0, 0.7)).expect("nonreal");
    println!("γ identity residual {:.2e}, Weyl identity residual {:.2e}", r.gamma_residual, r.weyl_residual);
}
