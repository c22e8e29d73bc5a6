//! Short Weierstrass curves, divisors, Miller evaluation and `G_m`-extensions.

mod curve;
mod divisor;
mod extension;
mod miller;

pub use curve::{Curve, Point, PointGroup};
pub use divisor::{Divisor, PicClass};
pub use extension::{
    baer_comparison, eval_constant, ext_character, ext_cocycle, translation_function, ExtCharacter, ExtGroup, ExtPoint,
    GENERIC_POINT_ATTEMPTS,
};
pub use miller::{function_value, miller_eval, LocalValue, MillerChain, NormalizedFunction};

#[cfg(test)]
mod tests;
