pub mod algebra;
pub mod checks;
pub mod cli;
pub mod error;
pub mod json;
pub mod mat;
pub mod pencil;
pub mod poly;
pub mod preserver;
pub mod random;
pub mod rank;
pub mod separation;
pub mod spectrum;
pub mod suite;
