//! Exact integer multiplication by cross product sums, the tare-based
//! vertical formula (one level and recursive `k`-way), and plum-blossom
//! digit products, with step traces and operation counting.

pub mod algorithm;
pub mod bench;
pub mod crossmul;
pub mod digits;
pub mod error;
pub mod plum;
pub mod trace;
pub mod vertical;

pub use algorithm::{multiply, multiply_signed, Algorithm, MulOptions};
pub use bench::{OpCount, Tally};
pub use digits::{normalize, parse_number, DigitSeq, SegmentedNumber, Sign};
pub use error::{Error, Result};
pub use vertical::RecursiveConfig;
