//! Exact arithmetic substrate: rationals in π units, interval sets,
//! piecewise-linear functions, square-root profiles and surd sums.

pub mod interval_set;
pub mod pwl;
pub mod rational;
pub mod sqrt_profile;
pub mod surd;

pub use interval_set::IntervalSet;
pub use pwl::{Affine, Piece, PiecewiseLinear};
pub use rational::{
    ceil_i64, dilation_power, floor_i64, format_rational, int, parse_rational, rat, to_f64, PiRational, Rational,
};
pub use sqrt_profile::SqrtProfile;
pub use surd::{gaussian, precision_bits, real, ComplexEnclosure, Enclosure, Gaussian, RootSum};
