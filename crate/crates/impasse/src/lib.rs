//! Exact resolution of singularities of planar constrained differential
//! systems `delta(x, y) (x', y') = (P, Q)`.

pub mod algebra;
pub mod classify;
pub mod io;
pub mod newton;
pub mod oracle;
pub mod resolve;
pub mod system;
pub mod transform;
