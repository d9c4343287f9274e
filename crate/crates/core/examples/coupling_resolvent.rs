//! Exit-space extension: induced parameter, compressed resolvent and the resolvent formula.

use extensio::coupling::{couple, induced_chi, krein_rhs, tau_of_extension};
use extensio::linalg::{c, max_abs};
use extensio::linrel::Tol;
use extensio::models::{fix_b_scene, identity_triplet, random_scene};
use extensio::boundary::von_neumann_triplet;

fn main() {
    let tol = Tol::default();
    let scene = fix_b_scene(&tol);
    let pi = identity_triplet(&tol);
    let tau = tau_of_extension(&scene, &pi, &tol).expect("matching triplet");
    let l = c(0.0, 1.0);
    let lhs = scene.generalized_resolvent(l).expect("nonreal").compressed;
    let rhs = krein_rhs(&pi, &tau, l).expect("nonreal");
    println!("two-point scene at i: compressed {} vs formula {}", lhs[(0, 0)], rhs[(0, 0)]);

    let scene = random_scene(11, 3, 2, &tol).expect("valid scene");
    println!("random scene minimal: {}, defects {:?}", scene.is_minimal().expect("valid"), scene.defect_numbers().expect("valid"));
    let pi = von_neumann_triplet(&scene.s1, None, &tol).expect("symmetric");
    let chi = induced_chi(&scene, &pi, &tol).expect("matching triplet");
    let rebuilt = couple(&pi, &chi, &tol).expect("compatible");
    println!("coupling rebuilds Ã: {}", rebuilt.equals(&scene.a_tilde, &tol));
    let tau = tau_of_extension(&scene, &pi, &tol).expect("matching triplet");
    let l = c(-0.3, 0.8);
    let diff = max_abs(&(scene.generalized_resolvent(l).expect("nonreal").compressed - krein_rhs(&pi, &tau, l).expect("nonreal")));
    println!("resolvent formula residual {diff:.2e}");
}
