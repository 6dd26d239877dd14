//! Availability-only data: each alternative's probability of being available
//! is known, but not the joint distribution of menus.

use num_traits::Zero;

use crate::domain::{full_mask, ChoiceDistribution, Menu, MenuDistribution};
use crate::rational::{one, zero};
use crate::{Error, Rational, Result};

/// `xi(a)`: probability that `a` is available. No sum constraint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AvailabilityVector(Vec<Rational>);

impl AvailabilityVector {
    pub fn new(xi: Vec<Rational>) -> Result<Self> {
        if xi.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        for (a, p) in xi.iter().enumerate() {
            if *p < zero() {
                return Err(Error::NegativeProbability {
                    what: format!("availability of alternative {a}"),
                    value: p.clone(),
                });
            }
            if *p > one() {
                return Err(Error::BadProbability(format!(
                    "availability of alternative {a} is {p}, above 1"
                )));
            }
        }
        Ok(AvailabilityVector(xi))
    }

    /// Availability induced by a menu distribution.
    pub fn of(mu: &MenuDistribution) -> Self {
        AvailabilityVector((0..mu.n()).map(|a| mu.availability(a)).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }
}

fn check_universe(xi: &AvailabilityVector, lambda: &ChoiceDistribution) -> Result<()> {
    if xi.n() == lambda.n() {
        Ok(())
    } else {
        Err(Error::UniverseMismatch {
            left: xi.n(),
            right: lambda.n(),
        })
    }
}

fn first_overchosen(xi: &AvailabilityVector, lambda: &ChoiceDistribution) -> Option<usize> {
    (0..xi.n()).find(|&a| lambda[a] > xi.0[a])
}

/// Whether some menu distribution with availability `xi` rationalizes
/// `lambda`: `lambda(a) <= xi(a)` for every `a`.
pub fn potentially_rationalizable(xi: &AvailabilityVector, lambda: &ChoiceDistribution) -> Result<bool> {
    check_universe(xi, lambda)?;
    Ok(first_overchosen(xi, lambda).is_none())
}

/// A menu distribution with availability exactly `xi` that rationalizes
/// `lambda`, plus the number of mass shifts performed.
///
/// Starts from `lambda` on singletons. While the lowest-index alternative
/// `a` is short of `xi(a)`, moves mass from the heaviest support menu without
/// `a` (lowest mask on ties) to that menu with `a` added.
pub fn construct_mu_traced(
    xi: &AvailabilityVector,
    lambda: &ChoiceDistribution,
) -> Result<(MenuDistribution, usize)> {
    check_universe(xi, lambda)?;
    if let Some(a) = first_overchosen(xi, lambda) {
        return Err(Error::NotPotentiallyRationalizable(a));
    }
    let n = xi.n();
    let mut mu: Vec<Rational> = vec![zero(); 1usize << n];
    for a in 0..n {
        mu[1 << a] += &lambda[a];
    }
    let mut available: Vec<Rational> = lambda.as_slice().to_vec();
    let bound = n << (n - 1);
    let mut iterations = 0;
    while let Some(a) = (0..n).find(|&a| available[a] < xi.0[a]) {
        let bit = 1u32 << a;
        let source = (1..=full_mask(n))
            .filter(|&m| m & bit == 0 && !mu[m as usize].is_zero())
            .max_by(|&x, &y| mu[x as usize].cmp(&mu[y as usize]).then(y.cmp(&x)))
            .ok_or_else(|| Error::Internal(format!("no menu without alternative {a} to extend")))?;
        let deficit = &xi.0[a] - &available[a];
        let shift = deficit.min(mu[source as usize].clone());
        mu[source as usize] -= &shift;
        mu[(source | bit) as usize] += &shift;
        available[a] += shift;
        iterations += 1;
        if iterations > bound {
            return Err(Error::Internal(format!(
                "mass shifting exceeded {bound} iterations"
            )));
        }
    }
    let pairs = (1..=full_mask(n)).filter_map(|m| Some((Menu::new(m)?, mu[m as usize].clone())));
    let mu = MenuDistribution::from_pairs(n, pairs)?;
    if AvailabilityVector::of(&mu) != *xi {
        return Err(Error::Internal("constructed menu distribution misses xi".into()));
    }
    Ok((mu, iterations))
}

pub fn construct_mu(xi: &AvailabilityVector, lambda: &ChoiceDistribution) -> Result<MenuDistribution> {
    construct_mu_traced(xi, lambda).map(|(mu, _)| mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::MarginalDataset;
    use crate::fixtures::{ab, abc};
    use crate::flow::rationalize;
    use crate::rat;

    fn xi(ws: &[(i64, i64)]) -> AvailabilityVector {
        AvailabilityVector::new(ws.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    fn lambda(ws: &[(i64, i64)]) -> ChoiceDistribution {
        ChoiceDistribution::new(ws.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    #[test]
    fn componentwise_check() {
        assert!(potentially_rationalizable(&xi(&[(1, 1); 3]), &lambda(&[(1, 2), (1, 4), (1, 4)])).unwrap());
        assert!(!potentially_rationalizable(&xi(&[(0, 1), (1, 1)]), &lambda(&[(1, 2), (1, 2)])).unwrap());
        assert!(potentially_rationalizable(&xi(&[(1, 2), (9, 10)]), &lambda(&[(2, 5), (3, 5)])).unwrap());
        assert!(AvailabilityVector::new(vec![rat(3, 2)]).is_err());
    }

    #[test]
    fn xi_equal_to_lambda_needs_no_shift() {
        let l = lambda(&[(1, 2), (1, 3), (1, 6)]);
        let (mu, iterations) = construct_mu_traced(&xi(&[(1, 2), (1, 3), (1, 6)]), &l).unwrap();
        assert_eq!(iterations, 0);
        assert_eq!(mu.support_len(), 3);
        assert_eq!(mu.get(Menu::singleton(0)), rat(1, 2));
    }

    #[test]
    fn always_available_pair_becomes_full_menu() {
        let mu = construct_mu(&xi(&[(1, 1), (1, 1)]), &lambda(&[(1, 2), (1, 2)])).unwrap();
        assert_eq!(mu, MenuDistribution::point(2, Menu::full(2)).unwrap());
    }

    #[test]
    fn partial_shift_trace() {
        let l = lambda(&[(3, 4), (1, 4)]);
        let (mu, iterations) = construct_mu_traced(&xi(&[(1, 1), (1, 2)]), &l).unwrap();
        let expected = MenuDistribution::from_pairs(
            2,
            [(Menu::singleton(0), rat(1, 2)), (Menu::full(2), rat(1, 2))],
        )
        .unwrap();
        assert_eq!(mu, expected);
        assert!(iterations <= 4);
        let data = MarginalDataset::new(ab(), mu, l).unwrap();
        assert!(rationalize(&data).feasible);
    }

    #[test]
    fn overchosen_alternative_is_rejected() {
        assert!(matches!(
            construct_mu(&xi(&[(1, 4), (1, 1), (1, 1)]), &lambda(&[(1, 2), (1, 4), (1, 4)])),
            Err(Error::NotPotentiallyRationalizable(0))
        ));
    }

    #[test]
    fn construction_is_rationalizable() {
        let l = lambda(&[(1, 5), (3, 10), (1, 2)]);
        let target = xi(&[(7, 10), (1, 2), (9, 10)]);
        let (mu, iterations) = construct_mu_traced(&target, &l).unwrap();
        assert!(iterations <= 12);
        assert_eq!(AvailabilityVector::of(&mu), target);
        assert!(rationalize(&MarginalDataset::new(abc(), mu, l).unwrap()).feasible);
    }
}
