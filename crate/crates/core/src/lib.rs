pub mod cayley_dickson;
pub mod error;
pub mod matrix;
pub mod rational;
pub mod sparse;
pub mod clifford;
pub mod exterior;
pub mod canonical;
pub mod octform;
pub mod berger;
pub mod sphere_fields;
pub mod hopf;
pub mod even_clifford;
pub mod verify;
pub mod export;
pub mod cli;
