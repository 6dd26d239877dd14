//! Luce choice: forward map, weight recovery from marginals, and
//! exchangeability of alternatives.

use num_traits::One;

use crate::core_geometry::interior_test;
use crate::domain::{full_mask, submasks, ChoiceDistribution, MarginalDataset, MenuDistribution};
use crate::games::game_from_mu;
use crate::rational::{approximate, one, to_f64, zero};
use crate::{Error, Rational, Result};

/// Strictly positive weights summing to one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LuceWeights(Vec<Rational>);

impl LuceWeights {
    pub fn new(u: Vec<Rational>) -> Result<Self> {
        if u.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        if let Some(a) = u.iter().position(|w| *w <= zero()) {
            return Err(Error::InvalidParameters(format!(
                "Luce weight of alternative {a} is {}, not positive",
                u[a]
            )));
        }
        let total: Rational = u.iter().sum();
        if !total.is_one() {
            return Err(Error::SumNotOne {
                what: "Luce weights".into(),
                deviation: crate::rational::abs(&(&total - one())),
                sum: total,
            });
        }
        Ok(LuceWeights(u))
    }

    /// Scales positive weights to sum to one.
    pub fn normalized(u: Vec<Rational>) -> Result<Self> {
        let total: Rational = u.iter().sum();
        if total <= zero() {
            return Err(Error::InvalidParameters("Luce weights must be positive".into()));
        }
        Self::new(u.into_iter().map(|w| w / &total).collect())
    }

    pub fn uniform(n: usize) -> Self {
        LuceWeights(vec![Rational::new(1.into(), (n as i64).into()); n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(to_f64).collect()
    }
}

/// `lambda(a) = sum over A ∋ a of mu(A) u(a) / u(A)`, exactly.
pub fn luce_forward(mu: &MenuDistribution, u: &LuceWeights) -> Result<ChoiceDistribution> {
    let n = mu.n();
    if u.n() != n {
        return Err(Error::UniverseMismatch { left: n, right: u.n() });
    }
    let w = u.as_slice();
    let mut lambda = vec![zero(); n];
    for (menu, m) in mu.iter() {
        let total: Rational = menu.indices().map(|a| &w[a]).sum();
        let scale = m / total;
        for a in menu.indices() {
            lambda[a] += &scale * &w[a];
        }
    }
    ChoiceDistribution::new(lambda)
}

/// Floating-point weights recovered from `(mu, lambda)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LuceInversion {
    pub weights: Vec<f64>,
    /// `max_a |forward(mu, weights)(a) - lambda(a)|`.
    pub residual: f64,
    pub iterations: usize,
    /// Low-denominator rational weights reproducing `lambda` exactly, when found.
    pub exact: Option<LuceWeights>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LuceOptions {
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for LuceOptions {
    fn default() -> Self {
        LuceOptions {
            tolerance: 1e-10,
            max_iterations: 100_000,
        }
    }
}

struct FloatMenus {
    n: usize,
    menus: Vec<(f64, Vec<usize>)>,
}

impl FloatMenus {
    fn new(mu: &MenuDistribution) -> Self {
        FloatMenus {
            n: mu.n(),
            menus: mu
                .iter()
                .map(|(m, w)| (to_f64(w), m.indices().collect()))
                .collect(),
        }
    }

    fn forward(&self, u: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (w, members) in &self.menus {
            let total: f64 = members.iter().map(|&a| u[a]).sum();
            for &a in members {
                out[a] += w * u[a] / total;
            }
        }
        out
    }
}

fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn normalize(u: &mut [f64]) {
    let total: f64 = u.iter().sum();
    u.iter_mut().for_each(|x| *x /= total);
}

/// Recovers the unique Luce weights generating an interior `lambda`, with
/// default tolerance `1e-10`.
pub fn luce_invert(data: &MarginalDataset) -> Result<LuceInversion> {
    luce_invert_with(data, LuceOptions::default())
}

/// Multiplicative updates `u <- normalize(u · lambda / forward(u))`, with the
/// step exponent halved whenever the residual fails to decrease.
pub fn luce_invert_with(data: &MarginalDataset, options: LuceOptions) -> Result<LuceInversion> {
    if let Some((a, b)) = data.mu.uncovered_pair() {
        return Err(Error::PairCoverageMissing(a, b));
    }
    match interior_test(&game_from_mu(&data.mu), &data.lambda) {
        Ok(true) => {}
        Ok(false) | Err(Error::NotInCore) => return Err(Error::NotInterior),
        Err(e) => return Err(e),
    }

    let n = data.n();
    let menus = FloatMenus::new(&data.mu);
    let target: Vec<f64> = data.lambda.as_slice().iter().map(to_f64).collect();
    let mut u = vec![1.0 / n as f64; n];
    let mut fitted = menus.forward(&u);
    let mut residual = max_abs_diff(&fitted, &target);
    let mut step = 1.0f64;
    let mut iterations = 0;
    while residual >= options.tolerance {
        if iterations == options.max_iterations {
            return Err(Error::NoConvergence {
                iterations,
                residual,
            });
        }
        iterations += 1;
        loop {
            let mut next: Vec<f64> = u
                .iter()
                .zip(target.iter().zip(&fitted))
                .map(|(x, (t, f))| x * (t / f).powf(step))
                .collect();
            normalize(&mut next);
            let next_fitted = menus.forward(&next);
            let next_residual = max_abs_diff(&next_fitted, &target);
            let improved = next_residual < residual;
            if improved || step < 1e-4 {
                u = next;
                fitted = next_fitted;
                residual = next_residual;
                if improved {
                    step = (step * 2.0).min(1.0);
                }
                break;
            }
            step /= 2.0;
        }
    }

    let exact = snap(&data.mu, &data.lambda, &u);
    Ok(LuceInversion {
        weights: u,
        residual,
        iterations,
        exact,
    })
}

fn snap(mu: &MenuDistribution, lambda: &ChoiceDistribution, u: &[f64]) -> Option<LuceWeights> {
    let mut max_denom = 10i64;
    while max_denom <= 1_000_000 {
        let candidate: Vec<Rational> = u.iter().map(|&x| approximate(x, max_denom)).collect();
        if candidate.iter().all(|w| *w > zero()) {
            if let Ok(weights) = LuceWeights::normalized(candidate) {
                if luce_forward(mu, &weights).ok().as_ref() == Some(lambda) {
                    return Some(weights);
                }
            }
        }
        max_denom *= 10;
    }
    None
}

/// Whether `mu(A ∪ {a}) = mu(A ∪ {b})` for every `A` avoiding both.
pub fn exchangeable(mu: &MenuDistribution, a: usize, b: usize) -> Result<bool> {
    let n = mu.n();
    for x in [a, b] {
        if x >= n {
            return Err(Error::UnknownAlternative(format!("index {x}")));
        }
    }
    if a == b {
        return Err(Error::SameAlternative);
    }
    let rest = full_mask(n) & !(1 << a) & !(1 << b);
    Ok(submasks(rest).all(|m| mu.get_mask(m | 1 << a) == mu.get_mask(m | 1 << b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Menu;
    use crate::fixtures::{ab, abc, symmetric_mu, skewed_mu};
    use crate::rat;

    fn half_a_half_ab() -> MenuDistribution {
        MenuDistribution::from_pairs(
            2,
            [(Menu::singleton(0), rat(1, 2)), (Menu::full(2), rat(1, 2))],
        )
        .unwrap()
    }

    fn weights(ws: &[(i64, i64)]) -> LuceWeights {
        LuceWeights::new(ws.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    #[test]
    fn forward_examples() {
        let full = MenuDistribution::point(3, Menu::full(3)).unwrap();
        let u = weights(&[(1, 5), (3, 10), (1, 2)]);
        assert_eq!(luce_forward(&full, &u).unwrap().as_slice(), u.as_slice());
        assert_eq!(
            luce_forward(&symmetric_mu(), &LuceWeights::uniform(3)).unwrap(),
            ChoiceDistribution::uniform(3)
        );
        let lambda = luce_forward(&half_a_half_ab(), &LuceWeights::uniform(2)).unwrap();
        assert_eq!(lambda.as_slice(), &[rat(3, 4), rat(1, 4)]);
    }

    #[test]
    fn weights_must_be_positive_and_normalized() {
        assert!(LuceWeights::new(vec![rat(0, 1), rat(1, 1)]).is_err());
        assert!(matches!(
            LuceWeights::new(vec![rat(1, 2), rat(1, 3)]),
            Err(Error::SumNotOne { .. })
        ));
        assert_eq!(
            LuceWeights::normalized(vec![rat(1, 1), rat(3, 1)]).unwrap(),
            weights(&[(1, 4), (3, 4)])
        );
    }

    #[test]
    fn inversion_examples_snap_to_exact_weights() {
        let full = MenuDistribution::point(3, Menu::full(3)).unwrap();
        let lambda = ChoiceDistribution::new(vec![rat(1, 5), rat(3, 10), rat(1, 2)]).unwrap();
        let data = MarginalDataset::new(abc(), full, lambda).unwrap();
        let inv = luce_invert(&data).unwrap();
        assert!(inv.residual < 1e-10);
        assert_eq!(inv.exact.unwrap(), weights(&[(1, 5), (3, 10), (1, 2)]));

        let data = MarginalDataset::new(abc(), symmetric_mu(), ChoiceDistribution::uniform(3)).unwrap();
        assert_eq!(luce_invert(&data).unwrap().exact.unwrap(), LuceWeights::uniform(3));

        let lambda = ChoiceDistribution::new(vec![rat(3, 4), rat(1, 4)]).unwrap();
        let data = MarginalDataset::new(ab(), half_a_half_ab(), lambda).unwrap();
        let inv = luce_invert(&data).unwrap();
        assert!((inv.weights[0] - 0.5).abs() < 1e-9);
        assert_eq!(inv.exact.unwrap(), LuceWeights::uniform(2));
    }

    #[test]
    fn inversion_recovers_skewed_weights() {
        let u = weights(&[(1, 10), (7, 10), (1, 5)]);
        let mu = skewed_mu();
        let lambda = luce_forward(&mu, &u).unwrap();
        let inv = luce_invert(&MarginalDataset::new(abc(), mu, lambda).unwrap()).unwrap();
        for (x, w) in inv.weights.iter().zip(u.to_f64()) {
            assert!((x - w).abs() < 1e-8);
        }
        assert_eq!(inv.exact.unwrap(), u);
    }

    #[test]
    fn inversion_preconditions() {
        let singletons = MenuDistribution::from_pairs(
            2,
            [(Menu::singleton(0), rat(1, 2)), (Menu::singleton(1), rat(1, 2))],
        )
        .unwrap();
        let data = MarginalDataset::new(ab(), singletons, ChoiceDistribution::uniform(2)).unwrap();
        assert!(matches!(luce_invert(&data), Err(Error::PairCoverageMissing(0, 1))));

        let boundary = ChoiceDistribution::new(vec![rat(1, 2), rat(1, 2)]).unwrap();
        let data = MarginalDataset::new(ab(), half_a_half_ab(), boundary).unwrap();
        assert!(matches!(luce_invert(&data), Err(Error::NotInterior)));

        let outside = ChoiceDistribution::new(vec![rat(1, 4), rat(3, 4)]).unwrap();
        let data = MarginalDataset::new(ab(), half_a_half_ab(), outside).unwrap();
        assert!(matches!(luce_invert(&data), Err(Error::NotInterior)));
    }

    #[test]
    fn exchangeability_examples() {
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            assert!(exchangeable(&symmetric_mu(), a, b).unwrap());
        }
        assert!(!exchangeable(&skewed_mu(), 0, 2).unwrap());
        let full = MenuDistribution::point(3, Menu::full(3)).unwrap();
        assert!(exchangeable(&full, 1, 2).unwrap());
        assert!(matches!(exchangeable(&full, 1, 1), Err(Error::SameAlternative)));
    }

    #[test]
    fn exchangeable_pair_orders_like_weights() {
        let mu = symmetric_mu();
        for u in [weights(&[(1, 2), (1, 3), (1, 6)]), weights(&[(1, 6), (1, 2), (1, 3)])] {
            let lambda = luce_forward(&mu, &u).unwrap();
            for a in 0..3 {
                for b in 0..3 {
                    assert_eq!(lambda[a] >= lambda[b], u.as_slice()[a] >= u.as_slice()[b]);
                }
            }
        }
    }
}
