//! Inverse, adjoint, product and classification of random linear relations.

use extensio::linrel::{principal_angles, Tol};
use extensio::random;

fn main() {
    let tol = Tol::default();
    let mut g = random::rng(7);
    let a = random::relation(&mut g, 4, 3, 4);
    let b = random::relation(&mut g, 3, 5, 3);
    println!("A: C^4 -> C^3, dim {}, dom {}, ran {}, ker {}, mul {}", a.dim(), a.dom().dim(), a.ran().dim(), a.ker().dim(), a.mul().dim());
    let ba = b.product(&a).expect("compatible shapes");
    let lhs = ba.inverse();
    let rhs = a.inverse().product(&b.inverse()).expect("compatible shapes");
    println!("(BA)^-1 = A^-1 B^-1: {} (largest angle {:.2e})", lhs.equals(&rhs, &tol), principal_angles(lhs.graph(), rhs.graph()).last().copied().unwrap_or(0.0));
    let adj = ba.adjoint();
    let prod_adj = a.adjoint().product(&b.adjoint()).expect("compatible shapes");
    println!("A*B* ⊆ (BA)*: {}", adj.contains(&prod_adj, &tol));
    let h = random::selfadjoint_relation(&mut g, 4, 1);
    println!("random selfadjoint relation: {:?}", h.classify(&tol));
}
