//! Brute-force feasibility checks built straight from the model definitions,
//! for cross-checking the characterizations at tiny scale.

use crate::domain::{MarginalDataset, PreferenceOrder};
use crate::rational::{one, zero};
use crate::rum::OrderDistribution;
use crate::simplex::find_feasible;
use crate::{Error, Rational, Result};

pub const MAX_N_RATIONALIZABLE: usize = 6;
pub const MAX_SUPPORT_RATIONALIZABLE: usize = 20;
pub const MAX_N_RUM: usize = 5;

/// Whether conditional choice probabilities `pi(a | A)` exist for the support
/// menus, summing to one per menu and reproducing `lambda`.
pub fn oracle_rationalizable(data: &MarginalDataset) -> Result<bool> {
    let n = data.n();
    let support = data.mu.support_len();
    if n > MAX_N_RATIONALIZABLE || support > MAX_SUPPORT_RATIONALIZABLE {
        return Err(Error::TooLarge(format!(
            "{n} alternatives and {support} menus (limits {MAX_N_RATIONALIZABLE} and {MAX_SUPPORT_RATIONALIZABLE})"
        )));
    }
    // One column per (menu, alternative in menu).
    let columns: Vec<(usize, usize, &Rational)> = data
        .mu
        .iter()
        .enumerate()
        .flat_map(|(i, (menu, w))| menu.indices().map(move |a| (i, a, w)))
        .collect();
    let mut rows = Vec::with_capacity(support + n);
    let mut rhs = Vec::with_capacity(support + n);
    for i in 0..support {
        rows.push(
            columns
                .iter()
                .map(|&(j, _, _)| if j == i { one() } else { zero() })
                .collect(),
        );
        rhs.push(one());
    }
    for b in 0..n {
        rows.push(
            columns
                .iter()
                .map(|&(_, a, w)| if a == b { w.clone() } else { zero() })
                .collect(),
        );
        rhs.push(data.lambda[b].clone());
    }
    Ok(find_feasible(&rows, &rhs).is_some())
}

/// A distribution over all `n!` orders reproducing `lambda` when each agent
/// picks its top alternative from each menu, if one exists.
pub fn oracle_rum_witness(data: &MarginalDataset) -> Result<Option<OrderDistribution>> {
    let n = data.n();
    if n > MAX_N_RUM {
        return Err(Error::TooLarge(format!("{n} alternatives (limit {MAX_N_RUM})")));
    }
    let orders: Vec<PreferenceOrder> = PreferenceOrder::all(n).collect();
    // probability[o][a]: mu-mass of menus where `o` picks `a`.
    let probability: Vec<Vec<Rational>> = orders
        .iter()
        .map(|o| {
            let mut p = vec![zero(); n];
            for (menu, w) in data.mu.iter() {
                let top = menu
                    .indices()
                    .find(|&a| menu.indices().all(|b| b == a || o.prefers(a, b)))
                    .expect("a strict order has a best element in every menu");
                p[top] += w;
            }
            p
        })
        .collect();
    let mut rows: Vec<Vec<Rational>> = (0..n)
        .map(|a| probability.iter().map(|p| p[a].clone()).collect())
        .collect();
    rows.push(vec![one(); orders.len()]);
    let mut rhs = data.lambda.as_slice().to_vec();
    rhs.push(one());
    match find_feasible(&rows, &rhs) {
        Some(x) => Ok(Some(OrderDistribution::new(n, orders.into_iter().zip(x))?)),
        None => Ok(None),
    }
}

pub fn oracle_rum(data: &MarginalDataset) -> Result<bool> {
    oracle_rum_witness(data).map(|w| w.is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core_geometry::extreme_point;
    use crate::domain::{ChoiceDistribution, Menu, MenuDistribution};
    use crate::fixtures::{ab, abc, symmetric_uniform, skewed_mu, skewed_uniform};
    use crate::games::game_from_mu;

    #[test]
    fn rationalizable_examples() {
        assert!(oracle_rationalizable(&symmetric_uniform()).unwrap());
        assert!(oracle_rationalizable(&skewed_uniform()).unwrap());
        let data = MarginalDataset::new(
            ab(),
            MenuDistribution::point(2, Menu::singleton(0)).unwrap(),
            ChoiceDistribution::point(2, 1),
        )
        .unwrap();
        assert!(!oracle_rationalizable(&data).unwrap());
        assert!(!oracle_rum(&data).unwrap());
    }

    #[test]
    fn rum_examples() {
        let witness = oracle_rum_witness(&symmetric_uniform()).unwrap().unwrap();
        assert_eq!(witness.marginal(&symmetric_uniform().mu), ChoiceDistribution::uniform(3));

        let mu = skewed_mu();
        let o = PreferenceOrder::new(vec![2, 1, 0], 3).unwrap();
        let vertex = extreme_point(&game_from_mu(&mu), &o).unwrap();
        let data = MarginalDataset::new(abc(), mu, vertex).unwrap();
        assert_eq!(oracle_rum_witness(&data).unwrap(), Some(OrderDistribution::point(o)));
    }

    #[test]
    fn size_limits() {
        let data = MarginalDataset::new(
            crate::domain::Universe::alphabetic(6).unwrap(),
            MenuDistribution::point(6, Menu::full(6)).unwrap(),
            ChoiceDistribution::uniform(6),
        )
        .unwrap();
        assert!(oracle_rationalizable(&data).unwrap());
        assert!(matches!(oracle_rum(&data), Err(Error::TooLarge(_))));
    }
}
