pub mod deleted_product;
pub mod error;
pub mod forms;
pub mod geometry;
pub mod kuhnel;
pub mod linalg;
pub mod quadratic;
pub mod ring;
pub mod sat;
pub mod simplicial;

pub use error::{Error, Result};
pub use ring::{Coefficient, Integer, Ring, Z2};
