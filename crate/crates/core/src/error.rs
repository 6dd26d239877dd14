use thiserror::Error;

use crate::domain::Menu;
use crate::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    // Input validation.
    #[error("menu {0:?} is empty")]
    EmptyMenu(String),
    #[error("negative probability {value} for {what}")]
    NegativeProbability { what: String, value: Rational },
    #[error("{what} sums to {sum}, deviating from 1 by {deviation}")]
    SumNotOne {
        what: String,
        sum: Rational,
        deviation: Rational,
    },
    #[error("unknown alternative {0:?}")]
    UnknownAlternative(String),
    #[error("duplicate alternative {0:?}")]
    DuplicateAlternative(String),
    #[error("alternative labels must be nonempty")]
    EmptyLabel,
    #[error("universe has {n} alternatives; the limit is {max}")]
    TooManyAlternatives { n: usize, max: usize },
    #[error("universe must contain at least one alternative")]
    EmptyUniverse,
    #[error("cannot parse probability {0:?}")]
    BadProbability(String),
    #[error("{0}")]
    Format(String),
    #[error("objects are defined over different universes ({left} vs {right} alternatives)")]
    UniverseMismatch { left: usize, right: usize },
    #[error("ranking is not a permutation of 0..{0}")]
    NotAPermutation(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    // Model preconditions and verdicts.
    #[error("game is not convex")]
    NotConvex,
    #[error("{n}! orders exceed the enumeration cap of n <= {cap}")]
    TooManyOrders { n: usize, cap: usize },
    #[error("choice distribution is not in the core of the game")]
    NotInCore,
    #[error("dataset is not rationalizable; {} core constraint(s) violated", violated.len())]
    NotRationalizable { violated: Vec<(Menu, Rational)> },
    #[error("pair {{{0}, {1}}} has zero menu probability")]
    PairSupportMissing(usize, usize),
    #[error("pair {{{0}, {1}}} is not contained in any menu of the support")]
    PairCoverageMissing(usize, usize),
    #[error("denominator 1 - v(A) - v(A^c) vanishes for menu mask {0:#b}")]
    DegenerateDenominator(u32),
    #[error("choice distribution is not in the relative interior of the core")]
    NotInterior,
    #[error("Luce inversion did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("alternatives must differ")]
    SameAlternative,
    #[error("menu {{alternative {0}, x*}} has zero probability")]
    SingletonSupportMissing(usize),
    #[error("menu mask {0:#b} has positive probability but is not a feasible menu")]
    SupportOutsideCollection(u32),
    #[error("feasible collection is empty")]
    EmptyCollection,
    #[error("choice is not potentially rationalizable: lambda exceeds availability for alternative {0}")]
    NotPotentiallyRationalizable(usize),
    #[error("tie encountered while maximizing {0}")]
    TieEncountered(String),
    #[error("instance too large for the brute-force oracle: {0}")]
    TooLarge(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
}
