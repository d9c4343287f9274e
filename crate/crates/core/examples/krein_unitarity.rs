//! Kreĭn-space unitarity of boundary maps and the main transform.

use extensio::kreinspace::{main_transform, KreinRelation};
use extensio::linrel::Tol;
use extensio::models::{fix_a, fix_b_gamma};

fn main() {
    let tol = Tol::default();
    let g = KreinRelation::new(fix_b_gamma()).expect("square blocks");
    println!("Γ of the two-point model: isometric {}, unitary {}", g.is_isometric(&tol), g.is_unitary(&tol));
    let j = main_transform(&g);
    println!("main transform selfadjoint: {}", j.classify(&tol).selfadjoint);
    let a = KreinRelation::new(fix_a()).expect("square blocks");
    println!("one-dimensional relation: isometric {}, unitary {}", a.is_isometric(&tol), a.is_unitary(&tol));
    println!("its main transform is symmetric but not selfadjoint: {:?}", main_transform(&a).classify(&tol));
}
