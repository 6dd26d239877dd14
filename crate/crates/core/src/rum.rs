//! Random utility: decomposition of `lambda` into a distribution over strict
//! orders, inferior-set detection, and bounds on superiority probabilities.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::core_geometry::{
    all_extreme_points, core_contains, distinct_vertices, marginal_contributions, OrderCap,
};
use crate::domain::{
    full_mask, mask_len, ChoiceDistribution, MarginalDataset, Menu, MenuDistribution,
    PreferenceOrder,
};
use crate::games::{game_from_mu, CooperativeGame};
use crate::rational::{one, zero};
use crate::simplex::find_feasible;
use crate::{Error, Rational, Result};

/// A probability distribution over strict orders (support only).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderDistribution {
    n: usize,
    weights: BTreeMap<PreferenceOrder, Rational>,
}

impl OrderDistribution {
    pub fn new<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PreferenceOrder, Rational)>,
    {
        let mut weights: BTreeMap<PreferenceOrder, Rational> = BTreeMap::new();
        for (order, w) in pairs {
            if order.n() != n {
                return Err(Error::UniverseMismatch {
                    left: n,
                    right: order.n(),
                });
            }
            if w < zero() {
                return Err(Error::NegativeProbability {
                    what: format!("order {:?}", order.ranking()),
                    value: w,
                });
            }
            *weights.entry(order).or_insert_with(zero) += w;
        }
        weights.retain(|_, w| !w.is_zero());
        let total: Rational = weights.values().sum();
        if !total.is_one() {
            return Err(Error::SumNotOne {
                what: "order distribution".into(),
                deviation: crate::rational::abs(&(&total - one())),
                sum: total,
            });
        }
        Ok(OrderDistribution { n, weights })
    }

    pub fn point(order: PreferenceOrder) -> Self {
        let n = order.n();
        OrderDistribution {
            n,
            weights: BTreeMap::from([(order, one())]),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PreferenceOrder, &Rational)> {
        self.weights.iter()
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    /// `nu(T[A, a])`: probability that `a` is the best alternative of `menu`.
    pub fn top_probability(&self, menu: Menu, a: usize) -> Rational {
        self.weights
            .iter()
            .filter(|(o, _)| o.top_of(menu) == a)
            .map(|(_, w)| w)
            .sum()
    }

    /// Conditional choice probabilities in `menu`.
    pub fn conditional(&self, menu: Menu) -> ChoiceDistribution {
        let mut p = vec![zero(); self.n];
        for (o, w) in &self.weights {
            p[o.top_of(menu)] += w;
        }
        ChoiceDistribution::new(p).expect("weights sum to one")
    }

    /// `lambda(a) = sum over A ∋ a of mu(A) nu(T[A, a])`.
    pub fn marginal(&self, mu: &MenuDistribution) -> ChoiceDistribution {
        let mut lambda = vec![zero(); self.n];
        for (menu, m) in mu.iter() {
            for (o, w) in &self.weights {
                lambda[o.top_of(menu)] += m * w;
            }
        }
        ChoiceDistribution::new(lambda).expect("mixture of distributions")
    }

    /// Probability that every alternative of `mask` is ranked below every
    /// alternative outside it.
    pub fn inferior_probability(&self, mask: u32) -> Rational {
        self.weights
            .iter()
            .filter(|(o, _)| o.ranks_below(mask))
            .map(|(_, w)| w)
            .sum()
    }
}

fn not_rationalizable(v: &CooperativeGame, lambda: &ChoiceDistribution) -> Result<()> {
    let report = core_contains(v, lambda)?;
    if report.member {
        Ok(())
    } else {
        Err(Error::NotRationalizable {
            violated: report.violated,
        })
    }
}

/// Finds one distribution over orders that generates the dataset.
///
/// Feasibility is the core test. The distribution is a convex combination of
/// the core's extreme points found by an exact simplex solve; it is one of
/// possibly many rationalizations, chosen deterministically.
pub fn rum_rationalize(data: &MarginalDataset, cap: OrderCap) -> Result<OrderDistribution> {
    let n = data.n();
    cap.check(n)?;
    let v = game_from_mu(&data.mu);
    not_rationalizable(&v, &data.lambda)?;

    let vertices = distinct_vertices(&all_extreme_points(&v, cap)?);
    // Rows: the first n-1 marginal equations plus total mass; the last
    // marginal equation is implied.
    let mut rows: Vec<Vec<Rational>> = (0..n.saturating_sub(1))
        .map(|a| vertices.iter().map(|(_, p)| p[a].clone()).collect())
        .collect();
    rows.push(vec![one(); vertices.len()]);
    let mut rhs: Vec<Rational> = data.lambda.as_slice()[..n.saturating_sub(1)].to_vec();
    rhs.push(one());

    let x = find_feasible(&rows, &rhs).ok_or_else(|| {
        Error::Internal("core member is not a convex combination of extreme points".into())
    })?;
    let nu = OrderDistribution::new(
        n,
        vertices.into_iter().map(|(o, _)| o).zip(x),
    )?;
    if reconstruct(&v, &nu) != data.lambda {
        return Err(Error::Internal("order decomposition does not reproduce lambda".into()));
    }
    Ok(nu)
}

/// `sum over orders of nu(order) · extreme_point(v, order)`.
pub fn reconstruct(v: &CooperativeGame, nu: &OrderDistribution) -> ChoiceDistribution {
    let mut p = vec![zero(); v.n()];
    for (o, w) in nu.iter() {
        for (slot, x) in p.iter_mut().zip(marginal_contributions(v, o).as_slice()) {
            *slot += w * x;
        }
    }
    ChoiceDistribution::new(p).expect("mixture of distributions")
}

fn require_pair_support(mu: &MenuDistribution) -> Result<()> {
    match mu.missing_pair() {
        Some((a, b)) => Err(Error::PairSupportMissing(a, b)),
        None => Ok(()),
    }
}

/// Whether `menu` is ranked below its complement by every (equivalently, by
/// some) rationalizing distribution over orders: `lambda(A) = v_mu(A)`.
///
/// Requires `mu({a, b}) > 0` for every pair.
pub fn inferior_test(data: &MarginalDataset, menu: Menu) -> Result<bool> {
    require_pair_support(&data.mu)?;
    let v = game_from_mu(&data.mu);
    not_rationalizable(&v, &data.lambda)?;
    Ok(data.lambda.mass(menu.bits()) == *v.value(menu.bits()))
}

/// All menus with `lambda(A) = v_mu(A)`, which form a chain ending at `X`,
/// ordered by size.
pub fn inferior_chain(data: &MarginalDataset) -> Result<Vec<Menu>> {
    require_pair_support(&data.mu)?;
    let v = game_from_mu(&data.mu);
    not_rationalizable(&v, &data.lambda)?;
    let mut chain: Vec<Menu> = (1..=full_mask(data.n()))
        .filter(|&mask| data.lambda.mass(mask) == *v.value(mask))
        .map(|mask| Menu::new(mask).expect("nonzero"))
        .collect();
    chain.sort_by_key(|m| (m.len(), m.bits()));
    for pair in chain.windows(2) {
        if !pair[0].is_subset_of(pair[1]) || pair[0] == pair[1] {
            return Err(Error::Internal(format!(
                "tight menus {:?} and {:?} are not nested",
                pair[0], pair[1]
            )));
        }
    }
    Ok(chain)
}

/// `(lambda(A) - v(A)) / (1 - v(A) - v(A^c))`.
///
/// For every rationalizing distribution over orders this is an upper bound on
/// the probability that `A` is ranked entirely above its complement, and a
/// lower bound on the probability that it is not ranked entirely below.
pub fn superiority_bound(data: &MarginalDataset, menu: Menu) -> Result<Rational> {
    let v = game_from_mu(&data.mu);
    not_rationalizable(&v, &data.lambda)?;
    let mask = menu.bits();
    let complement = full_mask(data.n()) & !mask;
    let denom = one() - v.value(mask) - v.value(complement);
    if denom.is_zero() {
        return Err(Error::DegenerateDenominator(mask));
    }
    Ok((data.lambda.mass(mask) - v.value(mask)) / denom)
}

/// Whether the rationalizing distribution over orders is unique: for each
/// size `k = 2..=n` some menu of size `k` is tight.
pub fn unique_rum(data: &MarginalDataset) -> Result<bool> {
    require_pair_support(&data.mu)?;
    let v = game_from_mu(&data.mu);
    not_rationalizable(&v, &data.lambda)?;
    let n = data.n();
    let mut tight_sizes = vec![false; n + 1];
    for mask in 1..=full_mask(n) {
        if data.lambda.mass(mask) == *v.value(mask) {
            tight_sizes[mask_len(mask)] = true;
        }
    }
    Ok((2..=n).all(|k| tight_sizes[k]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_geometry::extreme_point;
    use crate::fixtures::{ab, abc, symmetric_mu, symmetric_uniform};
    use crate::rat;

    fn order(r: &[usize]) -> PreferenceOrder {
        PreferenceOrder::new(r.to_vec(), r.len()).unwrap()
    }

    fn cyclic_nu() -> (OrderDistribution, OrderDistribution) {
        let third = rat(1, 3);
        let nu = OrderDistribution::new(
            3,
            [order(&[0, 1, 2]), order(&[1, 2, 0]), order(&[2, 0, 1])].map(|o| (o, third.clone())),
        )
        .unwrap();
        let nu_prime = OrderDistribution::new(
            3,
            [order(&[0, 2, 1]), order(&[2, 1, 0]), order(&[1, 0, 2])].map(|o| (o, third.clone())),
        )
        .unwrap();
        (nu, nu_prime)
    }

    fn full_support_mu(n: usize) -> MenuDistribution {
        let k = (1i64 << n) - 1;
        MenuDistribution::from_pairs(n, (1..=k as u32).map(|b| (Menu::new(b).unwrap(), rat(1, k))))
            .unwrap()
    }

    #[test]
    fn cyclic_decompositions_reproduce_uniform() {
        let data = symmetric_uniform();
        let (nu, nu_prime) = cyclic_nu();
        assert_eq!(nu.marginal(&data.mu), data.lambda);
        assert_eq!(nu_prime.marginal(&data.mu), data.lambda);
        let v = game_from_mu(&data.mu);
        assert_eq!(reconstruct(&v, &nu), data.lambda);
        for bits in [0b011, 0b101, 0b110] {
            let m = Menu::new(bits).unwrap();
            assert_ne!(nu.conditional(m), nu_prime.conditional(m));
        }
        let found = rum_rationalize(&data, OrderCap::default()).unwrap();
        assert_eq!(found.marginal(&data.mu), data.lambda);
    }

    #[test]
    fn vertex_decomposes_to_its_order() {
        let mu = full_support_mu(3);
        let v = game_from_mu(&mu);
        let o = order(&[1, 2, 0]);
        let lambda = extreme_point(&v, &o).unwrap();
        let data = MarginalDataset::new(abc(), mu, lambda).unwrap();
        let nu = rum_rationalize(&data, OrderCap::default()).unwrap();
        assert_eq!(nu, OrderDistribution::point(o));
    }

    #[test]
    fn forced_menu_gives_first_order() {
        let data = MarginalDataset::new(
            ab(),
            MenuDistribution::point(2, Menu::singleton(0)).unwrap(),
            ChoiceDistribution::point(2, 0),
        )
        .unwrap();
        let nu = rum_rationalize(&data, OrderCap::default()).unwrap();
        assert_eq!(nu, OrderDistribution::point(order(&[0, 1])));
    }

    #[test]
    fn infeasible_dataset_carries_certificate() {
        let data = MarginalDataset::new(
            ab(),
            MenuDistribution::point(2, Menu::singleton(0)).unwrap(),
            ChoiceDistribution::point(2, 1),
        )
        .unwrap();
        match rum_rationalize(&data, OrderCap::default()) {
            Err(Error::NotRationalizable { violated }) => {
                assert_eq!(violated, vec![(Menu::singleton(0), rat(1, 1))])
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            rum_rationalize(&symmetric_uniform(), OrderCap { max_n: 2 }),
            Err(Error::TooManyOrders { .. })
        ));
    }

    #[test]
    fn never_chosen_alternative_is_inferior() {
        let data = MarginalDataset::new(
            ab(),
            MenuDistribution::point(2, Menu::full(2)).unwrap(),
            ChoiceDistribution::point(2, 0),
        )
        .unwrap();
        assert!(inferior_test(&data, Menu::singleton(1)).unwrap());
        assert!(!inferior_test(&data, Menu::singleton(0)).unwrap());
        assert!(inferior_test(&data, Menu::full(2)).unwrap());
        assert_eq!(
            inferior_chain(&data).unwrap(),
            vec![Menu::singleton(1), Menu::full(2)]
        );
        assert!(unique_rum(&data).unwrap());
    }

    #[test]
    fn interior_lambda_has_no_proper_inferior_set() {
        let data = symmetric_uniform();
        for mask in 1..7u32 {
            assert!(!inferior_test(&data, Menu::new(mask).unwrap()).unwrap());
        }
        assert_eq!(inferior_chain(&data).unwrap(), vec![Menu::full(3)]);
        assert!(!unique_rum(&data).unwrap());
    }

    #[test]
    fn vertex_chain_is_the_lower_contour_sets() {
        let mu = full_support_mu(3);
        let lambda = extreme_point(&game_from_mu(&mu), &PreferenceOrder::identity(3)).unwrap();
        let data = MarginalDataset::new(abc(), mu, lambda).unwrap();
        let chain: Vec<u32> = inferior_chain(&data).unwrap().iter().map(|m| m.bits()).collect();
        assert_eq!(chain, vec![0b100, 0b110, 0b111]);
        assert!(unique_rum(&data).unwrap());
    }

    #[test]
    fn missing_pair_is_reported() {
        let data = MarginalDataset::new(
            abc(),
            MenuDistribution::point(3, Menu::full(3)).unwrap(),
            ChoiceDistribution::uniform(3),
        )
        .unwrap();
        assert!(matches!(
            inferior_test(&data, Menu::singleton(0)),
            Err(Error::PairSupportMissing(0, 1))
        ));
        assert!(matches!(unique_rum(&data), Err(Error::PairSupportMissing(0, 1))));
    }

    #[test]
    fn superiority_bound_examples() {
        let data = symmetric_uniform();
        assert_eq!(superiority_bound(&data, Menu::singleton(0)).unwrap(), rat(4, 9));
        assert!(matches!(
            superiority_bound(&data, Menu::full(3)),
            Err(Error::DegenerateDenominator(_))
        ));

        // {b} inferior: bound 0. {a} = complement of the inferior set: bound 1.
        let data = MarginalDataset::new(
            ab(),
            MenuDistribution::point(2, Menu::full(2)).unwrap(),
            ChoiceDistribution::point(2, 0),
        )
        .unwrap();
        assert_eq!(superiority_bound(&data, Menu::singleton(1)).unwrap(), rat(0, 1));
        assert_eq!(superiority_bound(&data, Menu::singleton(0)).unwrap(), rat(1, 1));
    }

    #[test]
    fn superiority_bound_brackets_generating_distributions() {
        // Any generating nu is a rationalizing nu for its own marginal.
        let mu = symmetric_mu();
        let (nu, nu_prime) = cyclic_nu();
        let mixed = OrderDistribution::new(
            3,
            [
                (order(&[0, 1, 2]), rat(1, 2)),
                (order(&[2, 1, 0]), rat(1, 3)),
                (order(&[1, 0, 2]), rat(1, 6)),
            ],
        )
        .unwrap();
        for nu in [nu, nu_prime, mixed] {
            let data = MarginalDataset::new(abc(), mu.clone(), nu.marginal(&mu)).unwrap();
            for mask in 1..7u32 {
                let bound = superiority_bound(&data, Menu::new(mask).unwrap()).unwrap();
                let superior = nu.inferior_probability(7 & !mask);
                let not_inferior = one() - nu.inferior_probability(mask);
                assert!(superior <= bound && bound <= not_inferior);
            }
        }
    }
}
