//! Horizontal lifting and holonomy in the bundle SO(n) -> SO0(1,n) -> H^n,
//! ordered barycentric subdivisions of the disk, and the fiber curve whose
//! length is the area of a disk and whose endpoint is its boundary holonomy.

pub mod curves;
pub mod disk;
pub mod error;
pub mod grid;
pub mod hyperbolic;
pub mod lift;
pub mod lorentz;
pub mod path;
pub mod quadrature;
pub mod subdivision;
pub mod tolerance;

pub use error::{Error, Result};
