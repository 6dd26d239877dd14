//! Small worked datasets over `{a, b, c}` (and `{a, b}`), used by tests,
//! benchmarks and the CLI examples.

use crate::domain::{ChoiceDistribution, MarginalDataset, Menu, MenuDistribution, Universe};
use crate::ircs::StarDataset;
use crate::rat;
use crate::twostage::FeasibleCollection;

fn menu(bits: u32) -> Menu {
    Menu::new(bits).expect("nonempty")
}

pub fn abc() -> Universe {
    Universe::alphabetic(3).expect("valid labels")
}

pub fn ab() -> Universe {
    Universe::alphabetic(2).expect("valid labels")
}

/// Seven-menu distribution with full support over `{a, b, c}`; `{a, b, c}`
/// carries the remaining `0.15`.
pub fn skewed_mu() -> MenuDistribution {
    MenuDistribution::from_pairs(
        3,
        [
            (menu(0b001), rat(1, 10)),
            (menu(0b010), rat(1, 10)),
            (menu(0b100), rat(15, 100)),
            (menu(0b011), rat(3, 10)),
            (menu(0b101), rat(1, 10)),
            (menu(0b110), rat(1, 10)),
            (menu(0b111), rat(15, 100)),
        ],
    )
    .expect("valid")
}

/// `1/4` on each binary menu and on `{a, b, c}`.
pub fn symmetric_mu() -> MenuDistribution {
    MenuDistribution::from_pairs(3, [0b011, 0b101, 0b110, 0b111].map(|b| (menu(b), rat(1, 4))))
        .expect("valid")
}

pub fn skewed_uniform() -> MarginalDataset {
    MarginalDataset::new(abc(), skewed_mu(), ChoiceDistribution::uniform(3)).expect("valid")
}

pub fn symmetric_uniform() -> MarginalDataset {
    MarginalDataset::new(abc(), symmetric_mu(), ChoiceDistribution::uniform(3)).expect("valid")
}

/// `1/3` on each of `{a, x*}`, `{b, x*}`, `{a, b, x*}`, with
/// `lambda(a) = lambda(b) = 1/3`.
pub fn two_way_star() -> StarDataset {
    let mu = MenuDistribution::from_pairs(2, [0b01, 0b10, 0b11].map(|b| (menu(b), rat(1, 3))))
        .expect("valid");
    StarDataset::new(ab(), mu, vec![rat(1, 3), rat(1, 3)]).expect("valid")
}

/// `{a}, {c}, {a, b}, {b, c}, {a, b, c}`.
pub fn bridge_collection() -> FeasibleCollection {
    FeasibleCollection::new(3, [0b001, 0b100, 0b011, 0b110, 0b111].map(menu)).expect("valid")
}

/// `1/4` on each of `{a}, {c}, {a, b}, {b, c}`.
pub fn bridge_mu() -> MenuDistribution {
    MenuDistribution::from_pairs(3, [0b001, 0b100, 0b011, 0b110].map(|b| (menu(b), rat(1, 4))))
        .expect("valid")
}

pub fn bridge_dataset(lambda: [(i64, i64); 3]) -> MarginalDataset {
    let lambda = ChoiceDistribution::new(lambda.iter().map(|&(p, q)| rat(p, q)).collect())
        .expect("valid lambda");
    MarginalDataset::new(abc(), bridge_mu(), lambda).expect("valid")
}
