//! Herglotz models as Nevanlinna pairs: sampled defining conditions and subclass flags.

use extensio::linalg::c;
use extensio::linrel::Tol;
use extensio::nevanlinna::{check_pair, classify_family, family_from_pair, HerglotzModel, PairFamily};

fn main() {
    let tol = Tol::default();
    let samples = [c(0.3, 1.0), c(-2.0, 0.5), c(1.0, -3.0)];
    for (name, model) in [
        ("1/(0 - λ)", HerglotzModel::scalar(0.0, 0.0, &[(0.0, 1.0)]).expect("valid")),
        ("λ", HerglotzModel::scalar(0.0, 1.0, &[]).expect("valid")),
        ("1 + 2/(1 - λ)", HerglotzModel::scalar(1.0, 0.0, &[(1.0, 2.0)]).expect("valid")),
    ] {
        let chk = check_pair(&model, &samples).expect("nonreal samples");
        let value = family_from_pair(&model, c(0.0, 1.0)).expect("nonreal");
        let class = classify_family(&PairFamily(model), c(0.0, 1.0), &tol).expect("nonreal");
        println!("{name}: passes {}, value at i {:?}, class {:?}", chk.passes(&tol), value.as_matrix().ok().map(|m| m[(0, 0)]), class);
    }
}
