//! Two-stage models with endogenous menu choice: temptation and self-control
//! (TSC) and preference for flexibility (PF), over a feasible collection of
//! menus.

use std::collections::{BTreeMap, BTreeSet};

use crate::core_geometry::core_contains;
use crate::domain::{full_mask, MarginalDataset, Menu, MenuDistribution, StochasticChoiceFunction};
use crate::flow::{solve_flow, FlowProblem};
use crate::games::{game_from_mu, CooperativeGame};
use crate::rational::zero;
use crate::{Error, Rational, Result};

/// The menus an agent may pick in the first stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibleCollection {
    n: usize,
    menus: BTreeSet<Menu>,
}

impl FeasibleCollection {
    pub fn new<I: IntoIterator<Item = Menu>>(n: usize, menus: I) -> Result<Self> {
        let menus: BTreeSet<Menu> = menus.into_iter().collect();
        if menus.is_empty() {
            return Err(Error::EmptyCollection);
        }
        if let Some(m) = menus.iter().find(|m| !m.within(n)) {
            return Err(Error::InvalidParameters(format!(
                "feasible menu {m:?} lies outside a universe of {n} alternatives"
            )));
        }
        Ok(FeasibleCollection { n, menus })
    }

    /// Every nonempty menu.
    pub fn all(n: usize) -> Self {
        FeasibleCollection {
            n,
            menus: (1..=full_mask(n)).filter_map(Menu::new).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn menus(&self) -> impl Iterator<Item = Menu> + '_ {
        self.menus.iter().copied()
    }

    pub fn contains(&self, menu: Menu) -> bool {
        self.menus.contains(&menu)
    }

    pub fn len(&self) -> usize {
        self.menus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.menus.is_empty()
    }

    fn require_support(&self, mu: &MenuDistribution) -> Result<()> {
        if mu.n() != self.n {
            return Err(Error::UniverseMismatch {
                left: self.n,
                right: mu.n(),
            });
        }
        match mu.support().find(|m| !self.contains(*m)) {
            Some(m) => Err(Error::SupportOutsideCollection(m.bits())),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RedundancyReport {
    /// For each feasible menu, its alternatives in no strictly smaller
    /// feasible menu (`None` when there are none).
    pub bar: BTreeMap<Menu, Option<Menu>>,
    /// Menus whose bar is empty.
    pub redundant: BTreeSet<Menu>,
    /// Menus strictly contained in another feasible menu.
    pub nested: BTreeSet<Menu>,
}

impl RedundancyReport {
    pub fn bar_mask(&self, menu: Menu) -> u32 {
        self.bar.get(&menu).copied().flatten().map_or(0, Menu::bits)
    }
}

pub fn analyze_collection(collection: &FeasibleCollection) -> RedundancyReport {
    let mut bar = BTreeMap::new();
    let mut redundant = BTreeSet::new();
    let mut nested = BTreeSet::new();
    for a in collection.menus() {
        let mut covered = 0u32;
        for b in collection.menus() {
            if b != a && b.is_subset_of(a) {
                covered |= b.bits();
                nested.insert(b);
            }
        }
        let rest = Menu::new(a.bits() & !covered);
        if rest.is_none() {
            redundant.insert(a);
        }
        bar.insert(a, rest);
    }
    RedundancyReport {
        bar,
        redundant,
        nested,
    }
}

/// `v(A) = mu({B feasible : bar(B) ⊆ A})` for nonempty `A`.
pub fn game_tsc(mu: &MenuDistribution, collection: &FeasibleCollection) -> Result<CooperativeGame> {
    collection.require_support(mu)?;
    let report = analyze_collection(collection);
    let n = collection.n();
    let mut values = vec![zero(); 1 << n];
    for mask in 1..=full_mask(n) {
        values[mask as usize] = mu
            .iter()
            .filter(|(m, _)| report.bar_mask(*m) & !mask == 0)
            .map(|(_, w)| w)
            .sum();
    }
    CooperativeGame::from_values(n, values)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TscVerdict {
    /// A conditional system over the support of `mu`, choosing from each
    /// menu only alternatives in its bar.
    Rationalizable { pi: StochasticChoiceFunction },
    /// Redundant menus chosen with positive probability.
    RedundantInSupport { menus: Vec<(Menu, Rational)> },
    /// Menus with `lambda(A) < v(A)` for the modified game, with deficits.
    CoreViolation { violated: Vec<(Menu, Rational)> },
}

impl TscVerdict {
    pub fn is_rationalizable(&self) -> bool {
        matches!(self, TscVerdict::Rationalizable { .. })
    }
}

pub fn tsc_rationalize(data: &MarginalDataset, collection: &FeasibleCollection) -> Result<TscVerdict> {
    let v = game_tsc(&data.mu, collection)?;
    let report = analyze_collection(collection);
    let menus: Vec<(Menu, Rational)> = data
        .mu
        .iter()
        .filter(|(m, _)| report.redundant.contains(m))
        .map(|(m, w)| (m, w.clone()))
        .collect();
    if !menus.is_empty() {
        return Ok(TscVerdict::RedundantInSupport { menus });
    }
    let membership = core_contains(&v, &data.lambda)?;
    if !membership.member {
        return Ok(TscVerdict::CoreViolation {
            violated: membership.violated,
        });
    }

    let support: Vec<Menu> = data.mu.support().collect();
    let sources = support
        .iter()
        .map(|&m| {
            let bar = report.bar[&m].expect("no redundant menu in the support");
            (data.mu.get(m), bar)
        })
        .collect();
    let flow = solve_flow(&FlowProblem::new(sources, data.lambda.clone())?);
    let pi = flow
        .choice_function(data.n(), &support)
        .ok_or_else(|| Error::Internal("core member without a bar-supported choice system".into()))?;
    Ok(TscVerdict::Rationalizable { pi })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PfVerdict {
    Rationalizable,
    /// Positive mass on nested menus, or core violations of the plain game.
    NotRationalizable {
        nested_in_support: Vec<(Menu, Rational)>,
        violated: Vec<(Menu, Rational)>,
    },
    /// The necessary condition holds but `lambda` is on the boundary of the
    /// core; these constraints are tight.
    Indeterminate { tight: Vec<Menu> },
}

pub fn pf_rationalize(data: &MarginalDataset, collection: &FeasibleCollection) -> Result<PfVerdict> {
    collection.require_support(&data.mu)?;
    let report = analyze_collection(collection);
    let nested_in_support: Vec<(Menu, Rational)> = data
        .mu
        .iter()
        .filter(|(m, _)| report.nested.contains(m))
        .map(|(m, w)| (m, w.clone()))
        .collect();
    let membership = core_contains(&game_from_mu(&data.mu), &data.lambda)?;
    if !nested_in_support.is_empty() || !membership.member {
        return Ok(PfVerdict::NotRationalizable {
            nested_in_support,
            violated: membership.violated,
        });
    }
    if membership.tight.is_empty() {
        Ok(PfVerdict::Rationalizable)
    } else {
        Ok(PfVerdict::Indeterminate {
            tight: membership.tight,
        })
    }
}
