//! Cooperative games on the lattice of subsets, their Möbius transforms, and
//! the convexity classification.

use num_traits::{One, Zero};

use crate::domain::{full_mask, mask_indices, MenuDistribution};
use crate::rational::zero;
use crate::{Error, Rational, Result};

/// In-place subset-sum (zeta) transform: `xs[A] <- sum of xs[B] over B ⊆ A`.
pub fn subset_sums(xs: &mut [Rational]) {
    assert!(xs.len().is_power_of_two());
    let mut bit = 1;
    while bit < xs.len() {
        for block in xs.chunks_exact_mut(bit * 2) {
            let (lo, hi) = block.split_at_mut(bit);
            for (l, h) in lo.iter().zip(hi.iter_mut()) {
                *h += l;
            }
        }
        bit <<= 1;
    }
}

/// Inverse of [`subset_sums`].
pub fn inv_subset_sums(xs: &mut [Rational]) {
    assert!(xs.len().is_power_of_two());
    let mut bit = 1;
    while bit < xs.len() {
        for block in xs.chunks_exact_mut(bit * 2) {
            let (lo, hi) = block.split_at_mut(bit);
            for (l, h) in lo.iter().zip(hi.iter_mut()) {
                *h -= l;
            }
        }
        bit <<= 1;
    }
}

/// A set function with `v(∅) = 0` and `v(X) = 1`, stored densely by mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooperativeGame {
    n: usize,
    values: Vec<Rational>,
}

impl CooperativeGame {
    pub fn from_values(n: usize, values: Vec<Rational>) -> Result<Self> {
        if values.len() != 1usize << n {
            return Err(Error::InvalidParameters(format!(
                "game over {n} alternatives needs {} values, got {}",
                1usize << n,
                values.len()
            )));
        }
        if !values[0].is_zero() || !values[full_mask(n) as usize].is_one() {
            return Err(Error::InvalidParameters(
                "game must satisfy v(empty) = 0 and v(X) = 1".into(),
            ));
        }
        Ok(CooperativeGame { n, values })
    }

    /// Rebuilds the game whose Möbius transform is `z`.
    pub fn from_mobius(z: &MobiusVector) -> Result<Self> {
        let mut values = z.z.clone();
        subset_sums(&mut values);
        Self::from_values(z.n, values)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, mask: u32) -> &Rational {
        &self.values[mask as usize]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// Additive game `v(A) = sum of p(a)` over `a ∈ A`.
    pub fn additive(p: &[Rational]) -> Result<Self> {
        let n = p.len();
        let values = (0..1u32 << n)
            .map(|mask| mask_indices(mask).map(|i| &p[i]).sum())
            .collect();
        Self::from_values(n, values)
    }
}

/// The unique `z` with `v(A) = sum of z(B) over B ⊆ A`, indexed by mask
/// (`z[0]` is always zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MobiusVector {
    n: usize,
    z: Vec<Rational>,
}

impl MobiusVector {
    pub fn get(&self, mask: u32) -> &Rational {
        &self.z[mask as usize]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.z
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// `v_mu(A) = sum of mu(B) over menus B ⊆ A`, via the zeta transform.
pub fn game_from_mu(mu: &MenuDistribution) -> CooperativeGame {
    let mut values = mu.dense();
    subset_sums(&mut values);
    CooperativeGame {
        n: mu.n(),
        values,
    }
}

/// Möbius inversion of `v`.
pub fn mobius(v: &CooperativeGame) -> MobiusVector {
    let mut z = v.values.clone();
    inv_subset_sums(&mut z);
    MobiusVector { n: v.n, z }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameClass {
    pub totally_monotone: bool,
    pub convex: bool,
    pub strictly_convex: bool,
}

/// Supermodularity through local increments:
/// `v(A+i) - v(A) <= v(A+i+j) - v(A+j)` for all `A` and `i, j ∉ A`.
/// With `strict`, every such inequality must hold strictly.
fn local_supermodular(v: &CooperativeGame, strict: bool) -> bool {
    let n = v.n;
    for mask in 0..1u32 << n {
        let outside: Vec<usize> = mask_indices(full_mask(n) & !mask).collect();
        for (x, &i) in outside.iter().enumerate() {
            for &j in &outside[x + 1..] {
                let (bi, bj) = (1 << i, 1 << j);
                // v(A+i+j) - v(A+j) - v(A+i) + v(A)
                let gain = v.value(mask | bi | bj) - v.value(mask | bj) - v.value(mask | bi)
                    + v.value(mask);
                if gain < zero() || (strict && gain.is_zero()) {
                    return false;
                }
            }
        }
    }
    true
}

/// Classifies `v` as totally monotone, convex and strictly convex.
///
/// Strict convexity of a totally monotone game is decided by the pair
/// criterion (positive Möbius mass on every pair); otherwise by requiring
/// every local increment inequality to be strict.
pub fn classify(v: &CooperativeGame) -> GameClass {
    let z = mobius(v);
    let totally_monotone = z.z.iter().all(|x| *x >= zero());
    let convex = totally_monotone || local_supermodular(v, false);
    let strictly_convex = if totally_monotone {
        (0..v.n).all(|a| (a + 1..v.n).all(|b| *z.get(1 << a | 1 << b) > zero()))
    } else {
        convex && local_supermodular(v, true)
    };
    GameClass {
        totally_monotone,
        convex,
        strictly_convex,
    }
}
