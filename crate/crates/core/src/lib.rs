pub mod eisenstein;
pub mod error;
pub mod field;

pub use eisenstein::{EisensteinInt, EisensteinValue};
pub use error::{Error, Result};
pub use field::{Elem, FieldElement, FieldTower, Level};
pub mod poly;
pub use poly::{MonicPoly, Poly};
pub mod character;
pub use character::{primitivity_and_conductor, CharEvaluator, CubicCharacter};
pub mod lfunc;
pub mod roots;
pub use lfunc::LPolynomial;
pub mod constants;
pub mod dds;
pub mod family;
pub use family::{enumerate_family, Family, FamilySpec, MomentEngine, MomentPolynomial};
pub mod report;
pub mod verify;
pub use report::TOOL_VERSION;
