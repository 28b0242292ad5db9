pub mod arith;
pub mod certifier;
pub mod classpoly;
pub mod curve_local;
pub mod cyclo;
pub mod error;
pub mod ff;
pub mod lattice;
pub mod linalg;
pub mod polyfp;
pub mod serde_big;
pub mod steinberg;

pub use error::{Error, Result};
