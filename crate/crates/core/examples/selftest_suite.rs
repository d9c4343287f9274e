//! Runs the oracle property suite once: `cargo run --release --example selftest_suite -- [seed]`.

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let outcomes = extensio::selftest::run_all(seed, None);
    for o in &outcomes {
        println!("{}", o.line());
    }
    if outcomes.iter().any(|o| !o.passed) {
        std::process::exit(1);
    }
}
