pub mod clifford;
pub mod error;
pub mod function;
pub mod kernel;
pub mod literal;
pub mod poly;
pub mod special;
pub mod transform;
pub mod uncertainty;

pub use clifford::{Blade, Multivector, Scalar, VectorM};
pub use error::{Error, Result};
pub use poly::{Monomial, MvPolynomial};
