//! Tiling Expansion and its companions.
//!
//! * [`tiling`]: corner-lettered tiles, unique-extension expansion and the
//!   Tiling Expansion function on top lines.
//! * [`tm`] and [`compile`]: step-bounded Turing machines, the length-forcing
//!   and program-prefix wrappers, and the compiler from machines to tile sets.
//! * [`gf2`]: arithmetic in GF(2^n) and the multiplicative universal hash.
//! * [`owf`]: sibling separation, length restoration and the pair hash
//!   `g(a, x) = (a, f(x) + a·x)`, with exhaustive sibling statistics.
//! * [`dyadic`] and [`dist`]: exact measures, perfect rounding and the
//!   m-encoding.
//! * [`vegas`]: L-form Las Vegas programs with volume betting, complete
//!   samplable families, optimal inversion and multimedian benchmarking.

pub mod bits;
pub mod compile;
pub mod dist;
pub mod dyadic;
pub mod gf2;
pub mod owf;
pub mod parse;
pub mod tiling;
pub mod tm;
pub mod vegas;

pub use bits::Bits;
pub use parse::ParseError;
