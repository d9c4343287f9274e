//! The −D² interval model: Weyl function and the spectra of two coupled intervals.

use extensio::linalg::c;
use extensio::models::{dirichlet_spectrum, periodic_spectrum, sl_weyl, SlModel};

fn main() {
    let m = SlModel::new(1.0).expect("positive length");
    println!("M(-1) = {:.6}", sl_weyl(&m, c(-1.0, 0.0)).expect("off the poles"));
    println!("M(i)  = {:.6}", sl_weyl(&m, c(0.0, 1.0)).expect("off the poles"));
    let p = periodic_spectrum(&m, (-1.0, 50.0)).expect("bounded window");
    println!("periodic eigenvalues on [-1, 50]: {p:?}");
    let pi2 = std::f64::consts::PI.powi(2);
    println!("expected: [0, {pi2}, {}]", 4.0 * pi2);
    let d = dirichlet_spectrum(&m, (0.0, 25.0)).expect("bounded window");
    println!("Dirichlet eigenvalues on [0, 25]: {d:?}");
}
