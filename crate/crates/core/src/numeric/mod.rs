//! Quadrature and root-finding kernels used by the semiclassical engine.

pub mod quad;
pub mod roots;
pub mod sum;
