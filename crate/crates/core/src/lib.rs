pub mod element;
pub mod error;
pub mod linalg;
pub mod operators;
pub mod poly;
pub mod relations;
pub mod rat;
pub mod series;
pub mod verify;
pub mod word;
pub mod zeta;

pub use error::{Error, Result};
pub use poly::Poly;
pub use rat::Rat;
pub use word::Word;
