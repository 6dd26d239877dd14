//! Independent random consideration sets with an always-available outside
//! option `x*`.
//!
//! Menus are keyed by their part inside `X`; `x*` is implicit in every menu.
//! Each alternative `a` is considered independently with probability
//! `gamma(a)` and the best considered alternative is chosen, or `x*` when
//! nothing is considered.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::core_geometry::OrderCap;
use crate::domain::{ChoiceDistribution, Menu, MenuDistribution, PreferenceOrder, Universe};
use crate::rational::{one, zero};
use crate::{Error, Rational, Result};

/// Marginal data with an outside option: `lambda` over `X`, and
/// `lambda(x*) = 1 - lambda(X)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarDataset {
    pub universe: Universe,
    pub mu: MenuDistribution,
    lambda: Vec<Rational>,
    outside: Rational,
}

impl StarDataset {
    pub fn new(universe: Universe, mu: MenuDistribution, lambda: Vec<Rational>) -> Result<Self> {
        let n = universe.len();
        if mu.n() != n {
            return Err(Error::UniverseMismatch { left: n, right: mu.n() });
        }
        if lambda.len() != n {
            return Err(Error::UniverseMismatch {
                left: n,
                right: lambda.len(),
            });
        }
        for (a, p) in lambda.iter().enumerate() {
            if *p < zero() {
                return Err(Error::NegativeProbability {
                    what: format!("lambda({})", universe.label(a)),
                    value: p.clone(),
                });
            }
        }
        let inside: Rational = lambda.iter().sum();
        let outside = one() - &inside;
        if outside < zero() {
            return Err(Error::SumNotOne {
                what: "lambda over the alternatives other than x*".into(),
                deviation: -outside,
                sum: inside,
            });
        }
        Ok(StarDataset {
            universe,
            mu,
            lambda,
            outside,
        })
    }

    pub fn n(&self) -> usize {
        self.universe.len()
    }

    pub fn lambda(&self) -> &[Rational] {
        &self.lambda
    }

    /// `lambda(x*)`.
    pub fn outside(&self) -> &Rational {
        &self.outside
    }

    /// `lambda` over `X ∪ {x*}`, with `x*` last.
    pub fn lambda_star(&self) -> ChoiceDistribution {
        let mut full = self.lambda.clone();
        full.push(self.outside.clone());
        ChoiceDistribution::new(full).expect("validated")
    }

    fn require_singleton_support(&self) -> Result<()> {
        match (0..self.n()).find(|&a| self.mu.get(Menu::singleton(a)).is_zero()) {
            Some(a) => Err(Error::SingletonSupportMissing(a)),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IrcsSolution {
    pub order: PreferenceOrder,
    /// Consideration probability of each alternative, indexed by alternative.
    pub gamma: Vec<Rational>,
}

/// The recursion identifying `gamma` along `order`, indexed by rank
/// (`t[k]` belongs to `order.ranking()[k]`).
///
/// Values above 1 are kept as computed. An entry is `None` when its
/// denominator is not positive, which can only follow an earlier entry above 1.
pub fn ircs_t_vector(data: &StarDataset, order: &PreferenceOrder) -> Result<Vec<Option<Rational>>> {
    let n = data.n();
    if order.n() != n {
        return Err(Error::UniverseMismatch { left: n, right: order.n() });
    }
    data.require_singleton_support()?;

    let ranking = order.ranking();
    let mut t: Vec<Option<Rational>> = Vec::with_capacity(n);
    let mut above = 0u32;
    for &a in ranking {
        // mu grouped by the menu's intersection with the alternatives ranked
        // above `a`, over menus containing `a`.
        let mut by_trace: BTreeMap<u32, Rational> = BTreeMap::new();
        for (menu, w) in data.mu.iter() {
            if menu.contains(a) {
                *by_trace.entry(menu.bits() & above).or_insert_with(zero) += w;
            }
        }
        let mut denom = zero();
        let mut undefined = false;
        for (&trace, w) in &by_trace {
            let mut term = w.clone();
            for (rank, &b) in ranking.iter().enumerate().take(t.len()) {
                if trace & 1 << b != 0 {
                    match &t[rank] {
                        Some(tb) => term *= one() - tb,
                        None => undefined = true,
                    }
                }
            }
            denom += term;
        }
        let value = if undefined || denom <= zero() {
            None
        } else {
            Some(&data.lambda[a] / denom)
        };
        t.push(value);
        above |= 1 << a;
    }
    Ok(t)
}

/// `lambda(a) = sum over A ∋ a of mu(A) gamma(a) prod_{b in A, b > a} (1 - gamma(b))`,
/// with `x*` receiving the remaining mass (last entry).
pub fn ircs_forward(
    mu: &MenuDistribution,
    order: &PreferenceOrder,
    gamma: &[Rational],
) -> Result<ChoiceDistribution> {
    let n = mu.n();
    if order.n() != n || gamma.len() != n {
        return Err(Error::UniverseMismatch {
            left: n,
            right: if order.n() != n { order.n() } else { gamma.len() },
        });
    }
    if let Some(a) = gamma.iter().position(|g| *g < zero() || *g > one()) {
        return Err(Error::InvalidParameters(format!(
            "consideration probability of alternative {a} is {}, outside [0, 1]",
            gamma[a]
        )));
    }
    let mut lambda = vec![zero(); n + 1];
    for (menu, w) in mu.iter() {
        let mut unconsidered = w.clone();
        for &a in order.ranking() {
            if menu.contains(a) {
                lambda[a] += &unconsidered * &gamma[a];
                unconsidered *= one() - &gamma[a];
            }
        }
        lambda[n] += unconsidered;
    }
    ChoiceDistribution::new(lambda)
}

fn solution_for(data: &StarDataset, order: &PreferenceOrder) -> Result<Option<IrcsSolution>> {
    let t = ircs_t_vector(data, order)?;
    if !t_feasible(&t) {
        return Ok(None);
    }
    let mut gamma = vec![zero(); data.n()];
    for (&a, x) in order.ranking().iter().zip(t) {
        gamma[a] = x.expect("checked");
    }
    if ircs_forward(&data.mu, order, &gamma)? != data.lambda_star() {
        return Err(Error::Internal(format!(
            "consideration probabilities for {:?} do not reproduce lambda",
            order.ranking()
        )));
    }
    Ok(Some(IrcsSolution {
        order: order.clone(),
        gamma,
    }))
}

/// Every order with a valid consideration vector, lexicographic by ranking.
/// Empty iff the dataset is not IRCS-rationalizable.
pub fn ircs_rationalize(data: &StarDataset, cap: OrderCap) -> Result<Vec<IrcsSolution>> {
    cap.check(data.n())?;
    data.require_singleton_support()?;
    let orders: Vec<PreferenceOrder> = PreferenceOrder::all(data.n()).collect();
    let found: Vec<Option<IrcsSolution>> = orders
        .par_iter()
        .map(|o| solution_for(data, o))
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Whether every entry of `t` is defined and at most 1.
pub fn t_feasible(t: &[Option<Rational>]) -> bool {
    t.iter().all(|x| x.as_ref().is_some_and(|x| *x <= Rational::one()))
}

/// Builds the dataset generated by `(order, gamma)`.
pub fn star_dataset_from(
    universe: Universe,
    mu: MenuDistribution,
    order: &PreferenceOrder,
    gamma: &[Rational],
) -> Result<StarDataset> {
    let mut lambda = ircs_forward(&mu, order, gamma)?.into_vec();
    lambda.pop();
    StarDataset::new(universe, mu, lambda)
}

/// Re-indexes a t-vector by alternative instead of rank.
pub fn t_by_alternative(order: &PreferenceOrder, t: &[Option<Rational>]) -> Vec<Option<Rational>> {
    let mut out = vec![None; t.len()];
    for (&a, x) in order.ranking().iter().zip(t) {
        out[a] = x.clone();
    }
    out
}
