//! Ideal arithmetic over a polynomial ring or a homogeneous complete
//! intersection quotient of one.

mod context;
mod ideal;

pub use context::RingContext;
pub use ideal::{eliminate, Ideal};
