//! Block compressions, Schur complements and sums of Weyl functions.

use extensio::boundary::BoundaryRelation;
use extensio::linalg::c;
use extensio::linrel::Tol;
use extensio::models::fix_b_gamma;
use extensio::transforms::{boundary_direct_sum, sum_weyl, SpaceSplit, block_compress, schur_complement};

fn main() {
    let tol = Tol::default();
    let g = BoundaryRelation::validate(fix_b_gamma(), &tol).expect("unitary");
    let gg = boundary_direct_sum(&g, &g, &tol).expect("unitary");
    let l = c(0.5, 1.5);
    println!("diagonal Weyl function:\n{:.6}", gg.weyl_matrix(l).expect("nonreal"));
    let split = SpaceSplit::new(1, 1);
    let first = block_compress(&gg, &split, 1, &tol).expect("hypotheses hold");
    println!("first block: {:.6}", first.gamma.weyl_matrix(l).expect("nonreal"));
    let sum = sum_weyl(&g, &g, &tol).expect("hypotheses hold");
    println!("M + M = {:.6}", sum.gamma.weyl_matrix(l).expect("nonreal"));
    match schur_complement(&gg, &split, &tol) {
        Ok(s) => println!("Schur complement: {:.6}", s.gamma.weyl_matrix(l).expect("nonreal")),
        Err(e) => println!("Schur complement unavailable: {e}"),
    }
}
