#![allow(clippy::type_complexity, clippy::wrong_self_convention, clippy::needless_range_loop)]

pub mod cmapprox;
pub mod error;
pub mod exec;
pub mod field;
pub mod gb;
pub mod hilbert;
pub mod homalg;
pub mod linalg;
pub mod matrix;
pub mod mf;
pub mod module;
pub mod mono;
pub mod obstruct;
pub mod poly;
pub mod resolve;
pub mod ring;
pub mod suite;
pub mod syz;
pub mod text;
pub mod vector;
