//! Membership in `Core(v)`, its extreme points for convex games, and
//! relative interiority.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;

use crate::domain::{
    full_mask, ChoiceDistribution, Menu, MenuDistribution, PreferenceOrder,
};
use crate::games::{classify, game_from_mu, CooperativeGame};
use crate::rational::zero;
use crate::{Error, Rational, Result};

/// Largest universe for which all `n!` orders are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrderCap {
    pub max_n: usize,
}

impl Default for OrderCap {
    fn default() -> Self {
        OrderCap { max_n: 8 }
    }
}

impl OrderCap {
    pub fn check(self, n: usize) -> Result<()> {
        if n > self.max_n {
            Err(Error::TooManyOrders {
                n,
                cap: self.max_n,
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreMembershipReport {
    pub member: bool,
    /// Menus with `lambda(A) < v(A)`, paired with the deficit `v(A) - lambda(A)`.
    pub violated: Vec<(Menu, Rational)>,
    /// Proper menus with `lambda(A) = v(A)`.
    pub tight: Vec<Menu>,
    /// Smallest slack `lambda(A) - v(A)` over proper menus (first by mask on ties).
    pub min_slack: Option<(Menu, Rational)>,
}

fn check_universe(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::UniverseMismatch { left, right })
    }
}

/// Checks `lambda(A) >= v(A)` for every nonempty proper `A`.
pub fn core_contains(v: &CooperativeGame, lambda: &ChoiceDistribution) -> Result<CoreMembershipReport> {
    check_universe(v.n(), lambda.n())?;
    let full = full_mask(v.n());
    let mut violated = Vec::new();
    let mut tight = Vec::new();
    let mut min_slack: Option<(Menu, Rational)> = None;
    for mask in 1..full {
        let menu = Menu::new(mask).expect("nonzero");
        let slack = lambda.mass(mask) - v.value(mask);
        if slack < zero() {
            violated.push((menu, -slack.clone()));
        } else if slack == zero() {
            tight.push(menu);
        }
        if min_slack.as_ref().is_none_or(|(_, s)| slack < *s) {
            min_slack = Some((menu, slack));
        }
    }
    Ok(CoreMembershipReport {
        member: violated.is_empty(),
        violated,
        tight,
        min_slack,
    })
}

/// Core membership for `v_mu`, cross-checked against the availability form
/// `lambda(A) <= mu({B : B ∩ A ≠ ∅})`, evaluated directly from `mu`.
/// Disagreement between the two inequality families is reported as
/// [`Error::Internal`].
pub fn core_contains_mu(mu: &MenuDistribution, lambda: &ChoiceDistribution) -> Result<CoreMembershipReport> {
    let report = core_contains(&game_from_mu(mu), lambda)?;
    let full = full_mask(mu.n());
    let upper_ok = (1..full).all(|mask| {
        let reach: Rational = mu
            .iter()
            .filter(|(m, _)| m.intersects_mask(mask))
            .map(|(_, w)| w)
            .sum();
        lambda.mass(mask) <= reach
    });
    if upper_ok != report.member {
        return Err(Error::Internal(
            "lower and upper availability inequalities disagree".into(),
        ));
    }
    Ok(report)
}

/// Marginal-contribution vector of `order`, without the convexity check.
pub(crate) fn marginal_contributions(v: &CooperativeGame, order: &PreferenceOrder) -> ChoiceDistribution {
    let n = v.n();
    let mut p = vec![zero(); n];
    let mut below = 0u32;
    for &a in order.ranking().iter().rev() {
        let with = below | 1 << a;
        p[a] = v.value(with) - v.value(below);
        below = with;
    }
    ChoiceDistribution::new(p).expect("marginal contributions of a game with v(X) = 1")
}

fn require_convex(v: &CooperativeGame) -> Result<bool> {
    let class = classify(v);
    if !class.convex {
        return Err(Error::NotConvex);
    }
    Ok(class.strictly_convex)
}

/// Extreme point `p(a) = v(L(a) ∪ {a}) - v(L(a))` of `Core(v)`, where
/// `L(a)` is the set of alternatives `order` ranks below `a`.
pub fn extreme_point(v: &CooperativeGame, order: &PreferenceOrder) -> Result<ChoiceDistribution> {
    check_universe(v.n(), order.n())?;
    require_convex(v)?;
    Ok(marginal_contributions(v, order))
}

/// Extreme points for all `n!` orders. For strictly convex games the points
/// are pairwise distinct.
pub fn all_extreme_points(
    v: &CooperativeGame,
    cap: OrderCap,
) -> Result<BTreeMap<PreferenceOrder, ChoiceDistribution>> {
    cap.check(v.n())?;
    let strict = require_convex(v)?;
    let orders: Vec<PreferenceOrder> = PreferenceOrder::all(v.n()).collect();
    let points: Vec<ChoiceDistribution> = orders
        .par_iter()
        .map(|o| marginal_contributions(v, o))
        .collect();
    if strict {
        let distinct: HashSet<&ChoiceDistribution> = points.iter().collect();
        if distinct.len() != points.len() {
            return Err(Error::Internal(
                "strictly convex game has coinciding extreme points".into(),
            ));
        }
    }
    Ok(orders.into_iter().zip(points).collect())
}

/// Distinct vertices of the core, each with the first order producing it.
pub fn distinct_vertices(
    points: &BTreeMap<PreferenceOrder, ChoiceDistribution>,
) -> Vec<(PreferenceOrder, ChoiceDistribution)> {
    let mut seen = HashSet::new();
    points
        .iter()
        .filter(|(_, p)| seen.insert(*p))
        .map(|(o, p)| (o.clone(), p.clone()))
        .collect()
}

/// Whether `lambda` lies in the relative interior of `Core(v)`: no proper
/// menu constraint is tight.
pub fn interior_test(v: &CooperativeGame, lambda: &ChoiceDistribution) -> Result<bool> {
    let report = core_contains(v, lambda)?;
    if !report.member {
        return Err(Error::NotInCore);
    }
    Ok(report.tight.is_empty())
}
