pub mod arith;
pub mod cli;
pub mod combinat;
pub mod eigenform;
pub mod quadform;
pub mod error;
pub mod moments;
pub mod sympow;
pub mod verify;

pub use error::{Error, Result};
