//! Limit criteria for admissibility against the exact multivalued part of the coupling.

use extensio::admissibility::{admissible, langer_textorius, LimitProbe};
use extensio::linalg::c;
use extensio::linrel::Tol;
use extensio::models::random_admissibility_case;

fn main() {
    let tol = Tol::default();
    for seed in 0..10 {
        let case = random_admissibility_case(seed, &tol).expect("valid case");
        let probe = LimitProbe::standard(case.pi.base().m());
        let r = admissible(&case.pi, &case.tau, Some(&case.chi), &probe, &tol).expect("valid case");
        let lt = langer_textorius(&case.pi, &case.tau, c(0.0, 1.0), &probe).expect("valid case");
        println!(
            "seed {seed}: dim mul = {:?}, Adm1 {}, Adm2 {}, LT {}, agrees {:?}",
            r.exact_mul_dim, r.adm1_pass, r.adm2_pass, lt, r.agreement
        );
    }
}
