//! Shared building blocks: packed bit rows, GF(2) elimination, bond colors, seeded streams
//! and output provenance.

pub mod bits;
pub mod color;
pub mod gf2;
pub mod meta;
pub mod rng;

pub use bits::BitRow;
pub use color::Color;
