//! Rationalizability tests for marginal stochastic choice data.
//!
//! A marginal dataset is a pair `(mu, lambda)`: how often each menu of
//! alternatives is available, and how often each alternative is chosen in
//! aggregate. Conditional choice frequencies are never observed. This crate
//! decides whether such a pair can be generated by several behavioral models
//! (unrestricted stochastic choice, random utility, Luce, independent random
//! consideration, temptation and self-control, preference for flexibility)
//! and recovers or bounds the model parameters where the marginals pin them
//! down.
//!
//! Every verdict is computed in exact rational arithmetic. The only floating
//! point code is the Luce weight inversion, which reports a residual.
//!
//! ```
//! use marginal_choice::prelude::*;
//!
//! let universe = Universe::new(["a", "b", "c"]).unwrap();
//! let mu = MenuDistribution::from_pairs(
//!     3,
//!     [(Menu::full(3), rat(1, 1))],
//! )
//! .unwrap();
//! let lambda = ChoiceDistribution::new(vec![rat(1, 3), rat(1, 3), rat(1, 3)]).unwrap();
//! let data = MarginalDataset::new(universe, mu, lambda).unwrap();
//! assert!(rationalize(&data).feasible);
//! ```

pub mod availability;
pub mod core_geometry;
pub mod domain;
pub mod error;
pub mod fixtures;
pub mod flow;
pub mod format;
pub mod games;
pub mod generators;
pub mod ircs;
pub mod luce;
pub mod oracle;
pub mod rational;
pub mod rum;
pub mod simplex;
pub mod twostage;

pub use error::{Error, Result};
pub use rational::{rat, Rational};

/// The types and entry points most callers need.
pub mod prelude {
    pub use crate::availability::{construct_mu, potentially_rationalizable, AvailabilityVector};
    pub use crate::core_geometry::{
        all_extreme_points, core_contains, extreme_point, interior_test, CoreMembershipReport,
        OrderCap,
    };
    pub use crate::domain::{
        ChoiceDistribution, Limits, MarginalDataset, Menu, MenuDistribution, PreferenceOrder,
        StochasticChoiceFunction, Universe,
    };
    pub use crate::error::{Error, Result};
    pub use crate::flow::{rationalize, solve_flow, FlowProblem, FlowResult};
    pub use crate::games::{classify, game_from_mu, mobius, CooperativeGame, GameClass};
    pub use crate::ircs::{ircs_forward, ircs_rationalize, ircs_t_vector, IrcsSolution, StarDataset};
    pub use crate::luce::{exchangeable, luce_forward, luce_invert, LuceInversion, LuceWeights};
    pub use crate::rational::{rat, Rational};
    pub use crate::rum::{
        inferior_chain, inferior_test, rum_rationalize, superiority_bound, unique_rum,
        OrderDistribution,
    };
    pub use crate::twostage::{
        analyze_collection, game_tsc, pf_rationalize, tsc_rationalize, FeasibleCollection,
        PfVerdict, RedundancyReport, TscVerdict,
    };
}
