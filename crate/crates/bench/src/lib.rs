//! Seeded workloads shared by the benchmarks.

use marginal_choice::generators::{
    gen_ircs, gen_luce, gen_rum, random_availability, random_full_support_mu, random_gamma,
    random_luce_weights, random_order, random_order_distribution, random_singleton_support_mu, rng,
};
use marginal_choice::prelude::*;

/// RUM-generated data with full-support `mu`, so it is always rationalizable.
pub fn rum_dataset(n: usize, seed: u64) -> MarginalDataset {
    let mut r = rng(seed);
    let mu = random_full_support_mu(&mut r, n);
    let nu = random_order_distribution(&mut r, n, 4);
    let lambda = gen_rum(&mu, &nu).expect("same universe");
    MarginalDataset::new(Universe::alphabetic(n).expect("small n"), mu, lambda).expect("valid")
}

pub fn luce_dataset(n: usize, seed: u64) -> MarginalDataset {
    let mut r = rng(seed);
    let mu = random_full_support_mu(&mut r, n);
    let u = random_luce_weights(&mut r, n);
    gen_luce(Universe::alphabetic(n).expect("small n"), mu, &u).expect("valid")
}

pub fn ircs_dataset(n: usize, seed: u64) -> StarDataset {
    let mut r = rng(seed);
    let mu = random_singleton_support_mu(&mut r, n);
    let order = random_order(&mut r, n);
    let gamma = random_gamma(&mut r, n);
    gen_ircs(Universe::alphabetic(n).expect("small n"), mu, &order, &gamma).expect("valid")
}

pub fn availability_instance(n: usize, seed: u64) -> (AvailabilityVector, ChoiceDistribution) {
    random_availability(&mut rng(seed), n)
}
