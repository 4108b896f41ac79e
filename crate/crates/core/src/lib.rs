//! Exact homological algebra for d-extended module categories of finite-dimensional
//! DG path algebras: presentations, Hom windows, Krull–Schmidt decomposition,
//! Auslander–Reiten knitting and the Auslander correspondence.

pub mod algebra;
pub mod arknit;
pub mod auscorr;
pub mod corpus;
pub mod extmod;
pub mod field;
pub mod io;
pub mod linalg;
pub mod module;
pub mod poly;
pub mod pvd;
pub mod semifree;

pub use algebra::{Alg, DgAlgebra, DgQuiver};
pub use field::{Field, Fp, Rational};
pub use linalg::{Matrix, SVec};
pub use module::DgModule;
