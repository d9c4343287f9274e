pub mod admissibility;
pub mod boundary;
pub mod cli;
pub mod coupling;
pub mod io;
pub mod kreinspace;
pub mod linalg;
pub mod linrel;
pub mod models;
pub mod nevanlinna;
pub mod random;
pub mod selftest;
pub mod transforms;
