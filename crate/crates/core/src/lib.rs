//! Twisted Reed–Solomon codes over binary field towers: arithmetic, encoding,
//! decoding, Schur-square analysis and a McEliece-style cryptosystem.

pub mod code;
pub mod decode;
pub mod estimate;
pub mod gf;
pub mod linalg;
pub mod mceliece;
pub mod poly;
pub mod schur;

pub use code::{CodeError, CodeMatrix, FamilyProfile, FamilyVariant, Twist, TwistedCodeParams};
pub use gf::{Elem, FieldElement, FieldTower, GfError};
pub use linalg::{Echelon, Matrix};
pub use poly::Poly;
