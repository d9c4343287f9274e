//! Writes the built-in fixtures as a model file: `cargo run --example write_fixtures -- fixtures.json`.

fn main() {
    let path = std::env::args().nth(1).unwrap_or_else(|| "fixtures.json".into());
    std::fs::write(&path, extensio::io::fixture_file().to_json() + "\n").expect("writable path");
    println!("wrote {path}");
}
