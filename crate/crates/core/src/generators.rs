//! Forward simulators: marginal data implied by known model parameters, and
//! seeded random parameters for tests, benchmarks and the `gen` command.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::availability::AvailabilityVector;
use crate::domain::{
    full_mask, ChoiceDistribution, MarginalDataset, Menu, MenuDistribution, PreferenceOrder,
    Universe,
};
use crate::ircs::{ircs_forward, StarDataset};
use crate::luce::{luce_forward, LuceWeights};
use crate::rational::{one, zero};
use crate::rum::OrderDistribution;
use crate::twostage::{analyze_collection, FeasibleCollection};
use crate::{rat, Error, Rational, Result};

/// `lambda(a) = sum over A ∋ a of mu(A) nu(a is the top of A)`.
pub fn gen_rum(mu: &MenuDistribution, nu: &OrderDistribution) -> Result<ChoiceDistribution> {
    if mu.n() != nu.n() {
        return Err(Error::UniverseMismatch {
            left: mu.n(),
            right: nu.n(),
        });
    }
    Ok(nu.marginal(mu))
}

pub fn gen_luce(universe: Universe, mu: MenuDistribution, u: &LuceWeights) -> Result<MarginalDataset> {
    let lambda = luce_forward(&mu, u)?;
    MarginalDataset::new(universe, mu, lambda)
}

pub fn gen_ircs(
    universe: Universe,
    mu: MenuDistribution,
    order: &PreferenceOrder,
    gamma: &[Rational],
) -> Result<StarDataset> {
    let mut lambda = ircs_forward(&mu, order, gamma)?.into_vec();
    lambda.pop();
    StarDataset::new(universe, mu, lambda)
}

/// First-period utility `u` and temptation utility `v`. A menu is worth
/// `max(u + v) - max(v)`; from the chosen menu the agent takes the maximizer
/// of `u + v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TscAgent {
    pub u: Vec<Rational>,
    pub v: Vec<Rational>,
}

impl TscAgent {
    pub fn menu_value(&self, menu: Menu) -> Rational {
        let total = menu.indices().map(|a| &self.u[a] + &self.v[a]).max().expect("nonempty");
        let temptation = menu.indices().map(|a| self.v[a].clone()).max().expect("nonempty");
        total - temptation
    }
}

fn strict_argmax<T: Ord + Clone>(
    items: impl Iterator<Item = (T, Rational)>,
    what: impl Fn() -> String,
) -> Result<T> {
    let mut best: Option<(T, Rational)> = None;
    let mut tied = false;
    for (item, value) in items {
        match &best {
            Some((_, b)) if value < *b => {}
            Some((_, b)) if value == *b => tied = true,
            _ => {
                best = Some((item, value));
                tied = false;
            }
        }
    }
    match best {
        Some((item, _)) if !tied => Ok(item),
        _ => Err(Error::TieEncountered(what())),
    }
}

/// Marginals of a finite population of two-stage agents facing `collection`.
pub fn gen_tsc(
    universe: Universe,
    agents: &[(TscAgent, Rational)],
    collection: &FeasibleCollection,
) -> Result<MarginalDataset> {
    let n = universe.len();
    if collection.n() != n {
        return Err(Error::UniverseMismatch {
            left: n,
            right: collection.n(),
        });
    }
    let mut mu = Vec::new();
    let mut lambda = vec![zero(); n];
    for (i, (agent, weight)) in agents.iter().enumerate() {
        if agent.u.len() != n || agent.v.len() != n {
            return Err(Error::InvalidParameters(format!(
                "agent {i} has utilities of the wrong length"
            )));
        }
        let menu = strict_argmax(
            collection.menus().map(|m| (m, agent.menu_value(m))),
            || format!("menu value for agent {i}"),
        )?;
        let choice = strict_argmax(
            menu.indices().map(|a| (a, &agent.u[a] + &agent.v[a])),
            || format!("second-stage utility for agent {i} in {menu:?}"),
        )?;
        mu.push((menu, weight.clone()));
        lambda[choice] += weight;
    }
    let mu = MenuDistribution::from_pairs(n, mu)?;
    MarginalDataset::new(universe, mu, ChoiceDistribution::new(lambda)?)
}

/// The agent that strictly prefers `menu` over every other feasible menu
/// and then picks `a`, for `a` in the bar of `menu`: `u` is 2 at `a` and 0
/// elsewhere, `v` is the indicator of the complement of `menu`.
pub fn implementing_agent(n: usize, menu: Menu, a: usize) -> TscAgent {
    TscAgent {
        u: (0..n).map(|x| rat(if x == a { 2 } else { 0 }, 1)).collect(),
        v: (0..n).map(|x| rat(if menu.contains(x) { 0 } else { 1 }, 1)).collect(),
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_weights<R: Rng>(rng: &mut R, k: usize, max: i64) -> Vec<Rational> {
    let raw: Vec<i64> = (0..k).map(|_| rng.random_range(1..=max)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|x| rat(x, total)).collect()
}

/// A random menu distribution on `support` distinct random menus.
pub fn random_mu<R: Rng>(rng: &mut R, n: usize, support: usize) -> MenuDistribution {
    let mut masks: Vec<u32> = (1..=full_mask(n)).collect();
    masks.shuffle(rng);
    masks.truncate(support.clamp(1, masks.len()));
    menu_distribution(rng, n, masks)
}

fn menu_distribution<R: Rng>(rng: &mut R, n: usize, masks: Vec<u32>) -> MenuDistribution {
    let weights = random_weights(rng, masks.len(), 9);
    MenuDistribution::from_pairs(
        n,
        masks.into_iter().map(|m| Menu::new(m).expect("nonzero")).zip(weights),
    )
    .expect("weights sum to one")
}

/// Every nonempty menu with positive mass.
pub fn random_full_support_mu<R: Rng>(rng: &mut R, n: usize) -> MenuDistribution {
    menu_distribution(rng, n, (1..=full_mask(n)).collect())
}

/// Random support, extended so that every pair lies in some menu.
pub fn random_pair_covering_mu<R: Rng>(rng: &mut R, n: usize) -> MenuDistribution {
    let count = rng.random_range(1..=full_mask(n) as usize);
    let mut masks: Vec<u32> = (1..=full_mask(n)).collect();
    masks.shuffle(rng);
    masks.truncate(count);
    for a in 0..n {
        for b in a + 1..n {
            let pair = 1 << a | 1 << b;
            if !masks.iter().any(|m| m & pair == pair) {
                masks.push(pair);
            }
        }
    }
    masks.sort_unstable();
    menu_distribution(rng, n, masks)
}

/// Random support containing every singleton.
pub fn random_singleton_support_mu<R: Rng>(rng: &mut R, n: usize) -> MenuDistribution {
    let mut masks: Vec<u32> = (0..n).map(|a| 1 << a).collect();
    for m in 1..=full_mask(n) {
        if m.count_ones() > 1 && rng.random_bool(0.5) {
            masks.push(m);
        }
    }
    menu_distribution(rng, n, masks)
}

pub fn random_order<R: Rng>(rng: &mut R, n: usize) -> PreferenceOrder {
    let mut ranking: Vec<usize> = (0..n).collect();
    ranking.shuffle(rng);
    PreferenceOrder::new(ranking, n).expect("permutation")
}

/// A random distribution over up to `support` random orders.
pub fn random_order_distribution<R: Rng>(rng: &mut R, n: usize, support: usize) -> OrderDistribution {
    let orders: Vec<PreferenceOrder> = (0..support.max(1)).map(|_| random_order(rng, n)).collect();
    let weights = random_weights(rng, orders.len(), 9);
    OrderDistribution::new(n, orders.into_iter().zip(weights)).expect("weights sum to one")
}

/// A random point of the simplex with denominators dividing a small total.
pub fn random_choice<R: Rng>(rng: &mut R, n: usize) -> ChoiceDistribution {
    let raw: Vec<i64> = (0..n).map(|_| rng.random_range(0..=6)).collect();
    let total: i64 = raw.iter().sum();
    if total == 0 {
        return ChoiceDistribution::uniform(n);
    }
    ChoiceDistribution::new(raw.into_iter().map(|x| rat(x, total)).collect()).expect("simplex point")
}

pub fn random_luce_weights<R: Rng>(rng: &mut R, n: usize) -> LuceWeights {
    LuceWeights::new(random_weights(rng, n, 20)).expect("positive weights summing to one")
}

/// Consideration probabilities in `(0, 1]` with denominator 12.
pub fn random_gamma<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    (0..n).map(|_| rat(rng.random_range(1..=12), 12)).collect()
}

/// A random dataset: half the time generated by random utility, otherwise
/// with an unrelated random `lambda`.
pub fn random_dataset<R: Rng>(rng: &mut R, n: usize) -> MarginalDataset {
    let support = rng.random_range(1..=full_mask(n) as usize);
    let mu = random_mu(rng, n, support);
    let lambda = if rng.random_bool(0.5) {
        let nu = random_order_distribution(rng, n, 3);
        nu.marginal(&mu)
    } else {
        random_choice(rng, n)
    };
    MarginalDataset::new(Universe::alphabetic(n).expect("small n"), mu, lambda).expect("consistent")
}

/// A random `lambda` and an availability vector dominating it.
pub fn random_availability<R: Rng>(rng: &mut R, n: usize) -> (AvailabilityVector, ChoiceDistribution) {
    let lambda = random_choice(rng, n);
    let xi = lambda
        .as_slice()
        .iter()
        .map(|l| {
            let frac = rat(rng.random_range(0..=4), 4);
            l + (one() - l) * frac
        })
        .collect();
    (AvailabilityVector::new(xi).expect("within [0, 1]"), lambda)
}

/// A random feasible collection and a population of implementing agents, one
/// per (menu, bar alternative) pair drawn.
pub fn random_tsc<R: Rng>(rng: &mut R, n: usize) -> (MarginalDataset, FeasibleCollection) {
    let mut masks: Vec<u32> = (1..=full_mask(n)).collect();
    masks.shuffle(rng);
    let count = rng.random_range(1..=masks.len());
    masks.truncate(count);
    let collection =
        FeasibleCollection::new(n, masks.into_iter().map(|m| Menu::new(m).expect("nonzero")))
            .expect("nonempty");
    let report = analyze_collection(&collection);
    let targets: Vec<(Menu, usize)> = report
        .bar
        .iter()
        .filter_map(|(m, bar)| bar.map(|b| (*m, b)))
        .flat_map(|(m, b)| b.indices().map(move |a| (m, a)))
        .collect();
    let picks = rng.random_range(1..=targets.len());
    let chosen: Vec<(Menu, usize)> = targets.choose_multiple(rng, picks).copied().collect();
    let weights = random_weights(rng, chosen.len(), 9);
    let agents: Vec<(TscAgent, Rational)> = chosen
        .into_iter()
        .map(|(m, a)| implementing_agent(n, m, a))
        .zip(weights)
        .collect();
    let data = gen_tsc(Universe::alphabetic(n).expect("small n"), &agents, &collection)
        .expect("implementing agents never tie");
    (data, collection)
}

/// Which model a generated instance comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Rum,
    Luce,
    Ircs,
    Tsc,
    Availability,
}

impl std::str::FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rum" => Ok(Model::Rum),
            "luce" => Ok(Model::Luce),
            "ircs" => Ok(Model::Ircs),
            "tsc" => Ok(Model::Tsc),
            "avail" | "availability" => Ok(Model::Availability),
            other => Err(Error::InvalidParameters(format!("unknown model {other:?}"))),
        }
    }
}

/// A generated instance, with the parameters that produced it where the
/// data alone does not determine them.
#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Rum {
        data: MarginalDataset,
        nu: OrderDistribution,
    },
    Luce {
        data: MarginalDataset,
        u: LuceWeights,
    },
    Ircs {
        data: StarDataset,
        order: PreferenceOrder,
        gamma: Vec<Rational>,
    },
    Tsc {
        data: MarginalDataset,
        collection: FeasibleCollection,
    },
    Availability {
        universe: Universe,
        xi: AvailabilityVector,
        lambda: ChoiceDistribution,
    },
}

/// Deterministic in `(model, n, seed)`.
pub fn generate(model: Model, n: usize, seed: u64) -> Result<Generated> {
    if n == 0 || n > 8 {
        return Err(Error::InvalidParameters(format!(
            "generated instances need 1 <= n <= 8, got {n}"
        )));
    }
    let mut rng = rng(seed);
    let universe = Universe::alphabetic(n)?;
    Ok(match model {
        Model::Rum => {
            let support = rng.random_range(1..=full_mask(n) as usize);
            let mu = random_mu(&mut rng, n, support);
            let nu = random_order_distribution(&mut rng, n, 3);
            let lambda = gen_rum(&mu, &nu)?;
            Generated::Rum {
                data: MarginalDataset::new(universe, mu, lambda)?,
                nu,
            }
        }
        Model::Luce => {
            let mu = random_pair_covering_mu(&mut rng, n);
            let u = random_luce_weights(&mut rng, n);
            Generated::Luce {
                data: gen_luce(universe, mu, &u)?,
                u,
            }
        }
        Model::Ircs => {
            let mu = random_singleton_support_mu(&mut rng, n);
            let order = random_order(&mut rng, n);
            let gamma = random_gamma(&mut rng, n);
            Generated::Ircs {
                data: gen_ircs(universe, mu, &order, &gamma)?,
                order,
                gamma,
            }
        }
        Model::Tsc => {
            let (data, collection) = random_tsc(&mut rng, n);
            Generated::Tsc { data, collection }
        }
        Model::Availability => {
            let (xi, lambda) = random_availability(&mut rng, n);
            Generated::Availability {
                universe,
                xi,
                lambda,
            }
        }
    })
}
