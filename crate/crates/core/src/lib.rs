//! Constant mean curvature one surfaces in hyperbolic space from Weierstrass
//! data: null curves in SL(2,ℂ), monodromy and reflection representations,
//! the SU(2) period problem, genus-zero existence ranges, and meshing.

pub mod algebra;
pub mod error;
pub mod genus0;
pub mod nullcurve;
pub mod periodkill;
pub mod quad;
pub mod surface;
pub mod wdata;

pub use error::{Error, Result};
