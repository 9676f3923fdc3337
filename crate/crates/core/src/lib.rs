pub mod classify;
pub mod curvature;
pub mod decompose;
pub mod error;
pub mod hypersurface;
pub mod io;
pub mod space;
pub mod tangent;
pub mod verify;

pub use error::{Error, Result};
