pub mod classify;
pub mod constants;
pub mod curves;
pub mod error;
pub mod extremal;
pub mod halfline;
pub mod output;
pub mod params;
pub mod quadrature;
pub mod verify;

pub use error::{Error, ParamError, Result};
