//! Alternatives, menus, marginal datasets, preference orders and conditional
//! choice systems.
//!
//! Subsets of the universe are `u32` bitmasks: bit `i` is set when the
//! alternative with index `i` belongs to the subset. [`Menu`] wraps a
//! nonempty mask.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{abs, one, zero};
use crate::{Error, Rational, Result};

/// Widest universe a `u32` mask can index while `1 << n` still fits.
pub const HARD_MAX_N: usize = 31;
pub const DEFAULT_MAX_N: usize = 24;
pub const MAX_N_ENV: &str = "MARGINAL_CHOICE_MAX_N";

/// Size limits applied when validating external input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_n: DEFAULT_MAX_N,
        }
    }
}

impl Limits {
    /// Default limits, overridden by `MARGINAL_CHOICE_MAX_N` when set.
    /// Values above 31 are clamped.
    pub fn from_env() -> Self {
        std::env::var(MAX_N_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .map(|max_n| Limits {
                max_n: max_n.clamp(1, HARD_MAX_N),
            })
            .unwrap_or_default()
    }
}

/// Full mask `{0, .., n-1}`.
#[inline]
pub fn full_mask(n: usize) -> u32 {
    debug_assert!(n <= HARD_MAX_N);
    ((1u64 << n) - 1) as u32
}

#[inline]
pub fn mask_len(mask: u32) -> usize {
    mask.count_ones() as usize
}

/// Indices of the set bits of `mask`, ascending.
pub fn mask_indices(mask: u32) -> impl Iterator<Item = usize> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        }
    })
}

/// All submasks of `mask`, including `0` and `mask` itself.
pub fn submasks(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & mask) };
        Some(cur)
    })
}

/// The finite, ordered set of alternatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Universe {
    labels: Vec<String>,
}

impl Universe {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self::with_limits(labels, Limits::default())
    }

    pub fn with_limits<I, S>(labels: I, limits: Limits) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        let max = limits.max_n.min(HARD_MAX_N);
        if labels.len() > max {
            return Err(Error::TooManyAlternatives {
                n: labels.len(),
                max,
            });
        }
        for (i, label) in labels.iter().enumerate() {
            if label.trim().is_empty() {
                return Err(Error::EmptyLabel);
            }
            if label.contains([',', '{', '}', ';', '>']) {
                return Err(Error::Format(format!(
                    "alternative label {label:?} contains a reserved character"
                )));
            }
            if labels[..i].contains(label) {
                return Err(Error::DuplicateAlternative(label.clone()));
            }
        }
        Ok(Universe { labels })
    }

    /// Universe labelled `a, b, c, ...` (then `x26, x27, ...`).
    pub fn alphabetic(n: usize) -> Result<Self> {
        Self::with_limits(
            (0..n).map(|i| {
                if i < 26 {
                    ((b'a' + i as u8) as char).to_string()
                } else {
                    format!("x{i}")
                }
            }),
            Limits { max_n: HARD_MAX_N },
        )
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        let label = label.trim();
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownAlternative(label.to_string()))
    }

    pub fn full_menu(&self) -> Menu {
        Menu::full(self.len())
    }

    /// Parses `"a,b"`, `"{a, b}"` or `"b,a"` into a menu.
    pub fn parse_menu(&self, text: &str) -> Result<Menu> {
        let inner = text.trim();
        let inner = inner
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .unwrap_or(inner);
        let mut bits = 0u32;
        for part in inner.split(',') {
            if part.trim().is_empty() {
                continue;
            }
            bits |= 1 << self.index_of(part)?;
        }
        Menu::new(bits).ok_or_else(|| Error::EmptyMenu(text.to_string()))
    }

    /// Canonical key: the menu's labels sorted and comma-joined.
    pub fn menu_key(&self, menu: Menu) -> String {
        self.mask_key(menu.bits())
    }

    pub fn mask_key(&self, mask: u32) -> String {
        mask_indices(mask)
            .map(|i| self.labels[i].as_str())
            .sorted()
            .join(",")
    }

    /// Parses `"a>b>c"` (best first).
    pub fn parse_order(&self, text: &str) -> Result<PreferenceOrder> {
        let ranking = text
            .split('>')
            .map(|l| self.index_of(l))
            .collect::<Result<Vec<_>>>()?;
        PreferenceOrder::new(ranking, self.len())
    }

    pub fn order_key(&self, order: &PreferenceOrder) -> String {
        order.ranking().iter().map(|&i| self.label(i)).join(">")
    }
}

/// A nonempty subset of the universe.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Menu(u32);

impl Menu {
    pub fn new(bits: u32) -> Option<Self> {
        (bits != 0).then_some(Menu(bits))
    }

    pub fn full(n: usize) -> Self {
        Menu(full_mask(n))
    }

    pub fn singleton(index: usize) -> Self {
        Menu(1 << index)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Option<Self> {
        Self::new(indices.into_iter().fold(0, |acc, i| acc | 1 << i))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        mask_len(self.0)
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn is_subset_of(self, other: Menu) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_subset_of_mask(self, mask: u32) -> bool {
        self.0 & !mask == 0
    }

    pub fn union(self, other: Menu) -> Menu {
        Menu(self.0 | other.0)
    }

    pub fn with(self, index: usize) -> Menu {
        Menu(self.0 | 1 << index)
    }

    pub fn intersects_mask(self, mask: u32) -> bool {
        self.0 & mask != 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        mask_indices(self.0)
    }

    /// Whether the menu's bits fit into a universe of size `n`.
    pub fn within(self, n: usize) -> bool {
        self.0 & !full_mask(n) == 0
    }
}

impl fmt::Debug for Menu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

impl TryFrom<u32> for Menu {
    type Error = Error;

    fn try_from(bits: u32) -> Result<Self> {
        Menu::new(bits).ok_or_else(|| Error::EmptyMenu(String::new()))
    }
}

impl From<Menu> for u32 {
    fn from(menu: Menu) -> u32 {
        menu.0
    }
}

fn check_sum(what: &str, sum: Rational) -> Result<()> {
    if sum.is_one() {
        Ok(())
    } else {
        Err(Error::SumNotOne {
            what: what.to_string(),
            deviation: abs(&(&sum - one())),
            sum,
        })
    }
}

/// Probability of each menu being the available one. Only the support is
/// stored; weights are positive and sum to exactly 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MenuDistribution {
    n: usize,
    weights: BTreeMap<Menu, Rational>,
}

impl MenuDistribution {
    /// Builds a distribution over menus of an `n`-element universe. Repeated
    /// menus accumulate; zero weights are dropped.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Menu, Rational)>,
    {
        let mut weights: BTreeMap<Menu, Rational> = BTreeMap::new();
        for (menu, weight) in pairs {
            if !menu.within(n) {
                return Err(Error::UnknownAlternative(format!("{menu:?}")));
            }
            if weight < zero() {
                return Err(Error::NegativeProbability {
                    what: format!("menu {menu:?}"),
                    value: weight,
                });
            }
            *weights.entry(menu).or_insert_with(zero) += weight;
        }
        weights.retain(|_, w| !w.is_zero());
        check_sum("menu distribution", weights.values().sum())?;
        Ok(MenuDistribution { n, weights })
    }

    /// Point mass on one menu.
    pub fn point(n: usize, menu: Menu) -> Result<Self> {
        Self::from_pairs(n, [(menu, one())])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, menu: Menu) -> Rational {
        self.weights.get(&menu).cloned().unwrap_or_else(zero)
    }

    pub fn get_mask(&self, mask: u32) -> Rational {
        Menu::new(mask).map(|m| self.get(m)).unwrap_or_else(zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Menu, &Rational)> {
        self.weights.iter().map(|(m, w)| (*m, w))
    }

    pub fn support(&self) -> impl Iterator<Item = Menu> + '_ {
        self.weights.keys().copied()
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    /// Total probability of menus containing alternative `a`.
    pub fn availability(&self, a: usize) -> Rational {
        self.iter()
            .filter(|(m, _)| m.contains(a))
            .map(|(_, w)| w)
            .sum()
    }

    /// Whether some support menu contains both `a` and `b`.
    pub fn covers_pair(&self, a: usize, b: usize) -> bool {
        self.support().any(|m| m.contains(a) && m.contains(b))
    }

    /// The first pair `(a, b)`, `a < b`, with `mu({a, b}) = 0`.
    pub fn missing_pair(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .tuple_combinations()
            .find(|&(a, b)| self.get(Menu::from_indices([a, b]).unwrap()).is_zero())
    }

    /// The first pair `(a, b)` not contained together in any support menu.
    pub fn uncovered_pair(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .tuple_combinations()
            .find(|&(a, b)| !self.covers_pair(a, b))
    }

    /// Dense vector indexed by mask, length `2^n`.
    pub fn dense(&self) -> Vec<Rational> {
        let mut out = vec![zero(); 1usize << self.n];
        for (m, w) in self.iter() {
            out[m.bits() as usize] = w.clone();
        }
        out
    }
}

/// Probability of each alternative being chosen, indexed by alternative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChoiceDistribution(Vec<Rational>);

impl ChoiceDistribution {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| **w < zero()) {
            return Err(Error::NegativeProbability {
                what: format!("alternative {i}"),
                value: w.clone(),
            });
        }
        check_sum("choice distribution", weights.iter().sum())?;
        Ok(ChoiceDistribution(weights))
    }

    pub fn point(n: usize, a: usize) -> Self {
        let mut w = vec![zero(); n];
        w[a] = one();
        ChoiceDistribution(w)
    }

    pub fn uniform(n: usize) -> Self {
        ChoiceDistribution(vec![Rational::new(1.into(), (n as i64).into()); n])
    }

    /// Uniform over the alternatives of `menu`.
    pub fn uniform_on(n: usize, menu: Menu) -> Self {
        let share = Rational::new(1.into(), (menu.len() as i64).into());
        ChoiceDistribution(
            (0..n)
                .map(|i| if menu.contains(i) { share.clone() } else { zero() })
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, a: usize) -> &Rational {
        &self.0[a]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Rational> {
        self.0
    }

    /// `lambda(A) = sum of lambda(a) over a in A`.
    pub fn mass(&self, mask: u32) -> Rational {
        mask_indices(mask).map(|i| &self.0[i]).sum()
    }

    /// Support as a mask.
    pub fn support_mask(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }
}

impl std::ops::Index<usize> for ChoiceDistribution {
    type Output = Rational;

    fn index(&self, a: usize) -> &Rational {
        &self.0[a]
    }
}

/// The observable pair `(mu, lambda)` over a common universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalDataset {
    pub universe: Universe,
    pub mu: MenuDistribution,
    pub lambda: ChoiceDistribution,
}

impl MarginalDataset {
    pub fn new(universe: Universe, mu: MenuDistribution, lambda: ChoiceDistribution) -> Result<Self> {
        let n = universe.len();
        for other in [mu.n(), lambda.n()] {
            if other != n {
                return Err(Error::UniverseMismatch { left: n, right: other });
            }
        }
        Ok(MarginalDataset {
            universe,
            mu,
            lambda,
        })
    }

    pub fn n(&self) -> usize {
        self.universe.len()
    }
}

/// A strict total order, stored best first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PreferenceOrder {
    ranking: Vec<usize>,
}

impl PreferenceOrder {
    pub fn new(ranking: Vec<usize>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        if ranking.len() != n {
            return Err(Error::NotAPermutation(n));
        }
        for &i in &ranking {
            if i >= n || std::mem::replace(&mut seen[i], true) {
                return Err(Error::NotAPermutation(n));
            }
        }
        Ok(PreferenceOrder { ranking })
    }

    /// `0 > 1 > ... > n-1`.
    pub fn identity(n: usize) -> Self {
        PreferenceOrder {
            ranking: (0..n).collect(),
        }
    }

    /// All `n!` orders in lexicographic order of their rankings.
    pub fn all(n: usize) -> impl Iterator<Item = PreferenceOrder> {
        (0..n)
            .permutations(n)
            .map(|ranking| PreferenceOrder { ranking })
    }

    pub fn n(&self) -> usize {
        self.ranking.len()
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    /// Position of each alternative; 0 is best.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.ranking.len()];
        for (p, &a) in self.ranking.iter().enumerate() {
            pos[a] = p;
        }
        pos
    }

    pub fn prefers(&self, a: usize, b: usize) -> bool {
        let pos = self.positions();
        pos[a] < pos[b]
    }

    /// Best alternative of `menu`.
    pub fn top_of(&self, menu: Menu) -> usize {
        *self
            .ranking
            .iter()
            .find(|&&a| menu.contains(a))
            .expect("menus are nonempty")
    }

    /// Mask of alternatives ranked strictly below `a`.
    pub fn lower_contour(&self, a: usize) -> u32 {
        let p = self.ranking.iter().position(|&x| x == a).expect("a in order");
        self.ranking[p + 1..].iter().fold(0, |acc, &b| acc | 1 << b)
    }

    /// Whether every alternative of `mask` is ranked below every alternative
    /// outside it.
    pub fn ranks_below(&self, mask: u32) -> bool {
        let k = mask_len(mask);
        let n = self.ranking.len();
        self.ranking[n - k..].iter().all(|&a| mask >> a & 1 == 1)
    }
}

/// Conditional choice probabilities `pi(. | A)` for a collection of menus,
/// each supported inside its menu.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StochasticChoiceFunction {
    n: usize,
    conditionals: BTreeMap<Menu, ChoiceDistribution>,
}

impl StochasticChoiceFunction {
    pub fn new(n: usize, conditionals: BTreeMap<Menu, ChoiceDistribution>) -> Result<Self> {
        for (menu, dist) in &conditionals {
            if dist.n() != n {
                return Err(Error::UniverseMismatch {
                    left: n,
                    right: dist.n(),
                });
            }
            if dist.support_mask() & !menu.bits() != 0 {
                return Err(Error::InvalidParameters(format!(
                    "conditional for menu {menu:?} puts mass outside the menu"
                )));
            }
        }
        Ok(StochasticChoiceFunction { n, conditionals })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, menu: Menu) -> Option<&ChoiceDistribution> {
        self.conditionals.get(&menu)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Menu, &ChoiceDistribution)> {
        self.conditionals.iter().map(|(m, d)| (*m, d))
    }

    /// `sum over A of mu(A) pi(a | A)` for each alternative. Menus without a
    /// conditional contribute nothing.
    pub fn marginal(&self, mu: &MenuDistribution) -> Vec<Rational> {
        let mut out = vec![zero(); self.n];
        for (menu, weight) in mu.iter() {
            if let Some(dist) = self.conditionals.get(&menu) {
                for (slot, p) in out.iter_mut().zip(dist.as_slice()) {
                    *slot += weight * p;
                }
            }
        }
        out
    }

    /// Whether this system generates the dataset exactly.
    pub fn rationalizes(&self, data: &MarginalDataset) -> bool {
        data.mu.support().all(|m| self.conditionals.contains_key(&m))
            && self.marginal(&data.mu) == data.lambda.as_slice()
    }
}
