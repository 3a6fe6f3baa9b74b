//! Exact rational arithmetic engine for rank bounds on the one-parameter
//! family of elliptic curves
//!
//! ```text
//!     E_t :  v^2 = u^3 + (t^2 + 2) u^2 + u,        t in Q, t != 0,
//! ```
//!
//! via descent through a 4-isogeny `phi : E -> E'` that factors as a pair of
//! 2-isogenies through the intermediate curve
//!
//! ```text
//!     E''_t : v^2 = u (u - 4) (u + t^2).
//! ```
//!
//! Everything is computed over Q with `num-rational` bignum rationals: torsion
//! subgroups, Selmer groups of the four 2-isogenies and of the 4-isogeny
//! (through local solvability of homogeneous spaces at the finitely many bad
//! places), rational point search on the spaces, rank bounds, and a report of
//! everywhere-locally-solvable classes that no rational point accounts for at
//! a given search height.
//!
//! The crate is a library first; `src/bin/isodescent.rs` wraps it in a small
//! CLI (`analyze`, `verify-paper`, `selmer`). Each major capability also has
//! a runnable example under `examples/`.

pub mod arith;
// staged: cache
pub mod curves;
pub mod descent;
// staged: fixtures
pub mod isogeny;
// staged: pipeline
// staged: report
pub mod torsion;

pub use arith::kummer::KummerClass;
pub use arith::padic::PadicElement;
pub use arith::sigma::{sigma_set, Place, PlaceSet};
pub use arith::Rational;
pub use curves::{build_family, Curve, CurveFamily, CurveLabel, CurvePoint};
pub use descent::selmer::{selmer_2isogeny, selmer_4isogeny, selmer_size_relation, SelmerGroup};
pub use descent::spaces::{BiquadraticSpace, QuarticSpace, TwoIsogenyDirection};
pub use torsion::{TorsionClass, TorsionShape};

use num_bigint::BigInt;

/// Crate-wide error type. The CLI maps these onto exit codes: bad input is 2,
/// internal p-adic precision exhaustion is 3, verification mismatches are 1.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A curve in the family would be singular: the named factor vanishes.
    #[error("degenerate parameter: {factor} = 0 makes the family singular")]
    Degenerate { factor: String },

    /// `transform` only knows the two model changes E_t <-> E_small and
    /// E'_t <-> E'_small.
    #[error("no change of model from {from} to {to}")]
    UnsupportedTransform { from: String, to: String },

    /// A rational map was evaluated at a pole.
    #[error("{map} has a pole at {point}")]
    Pole { map: String, point: String },

    /// The point fed to an isogeny or pairing does not lie on its domain.
    #[error("point {point} is not on {curve}")]
    NotOnCurve { curve: String, point: String },

    /// psi' and psi'' are undefined on the z = 0 / Z = 0 fibers; those map to
    /// torsion or infinity and are reported specially by the callers.
    #[error("{map} is undefined on the fiber {fiber} of the space with d = {d}")]
    SpecialFiber { map: String, fiber: String, d: String },

    /// A p-adic routine was handed fewer known digits than its contract needs.
    #[error("insufficient {prime}-adic precision: need {needed} digits, have {have}")]
    InsufficientPrecision { prime: BigInt, needed: i64, have: i64 },

    /// Local solvability did not stabilize within the retry ladder. This is
    /// a bug signal, not a mathematical outcome.
    #[error("{prime}-adic precision exhausted after {retries} retries (working precision {precision}) while deciding {context}")]
    PrecisionExhausted { prime: BigInt, precision: u32, retries: u32, context: String },

    /// Bad CLI or library input (wrong parametrization, zero height, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Fixture file problems: missing, malformed, wrong arity.
    #[error("fixture error: {0}")]
    Fixture(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serialize(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
