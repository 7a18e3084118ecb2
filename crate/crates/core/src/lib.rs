//! Software model of tile-based multiply-accumulate reductions.
//!
//! A tile unit computes `D = A × B + C` on m×m tiles in one cycle. This
//! crate models summing n numbers as a hierarchy of such operations
//! (two MMAs collapse each group of m² elements to its sum) next to the
//! classic pairwise tree and the sequential fold, and accounts every
//! strategy's simulated cost under a simple machine model: the tiled
//! hierarchy spends 5 units per level of shrink factor m², the pairwise
//! tree 4 units per halving, which is where the `(4/5)·log2(m²)` speedup
//! comes from.
//!
//! All algorithms are generic over the [`Scalar`] regime, so the same code
//! path runs in exact rational arithmetic (the error oracle), binary64,
//! binary32, or the two binary16 flavours that model tensor-core mixed
//! precision.

pub mod cost;
mod error;
pub mod reduce;
pub mod scalar;
pub mod tile;

pub use error::{Error, Result};
pub use scalar::{compensated_sum, exact_sum, round_to_f16, MixedF16, Scalar, StrictF16};

pub use num_rational::BigRational;

/// Exact rational scalars, the error-free reference regime.
pub type ExactScalar = BigRational;
/// Plain IEEE-754 binary64 scalars.
pub type Fp64Scalar = f64;
/// Plain IEEE-754 binary32 scalars.
pub type Fp32Scalar = f32;
