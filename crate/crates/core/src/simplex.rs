//! Exact-rational linear feasibility: find `x >= 0` with `A x = b`.
//!
//! Phase one of the primal simplex method on a dense tableau with one
//! artificial variable per row. Bland's rule (lowest-index entering column,
//! lowest-index leaving basic variable on ratio ties) makes the pivot sequence
//! deterministic and guarantees termination.

use num_traits::{Signed, Zero};

use crate::rational::zero;
use crate::Rational;

/// Returns a basic feasible solution of `rows · x = rhs, x >= 0`, or `None`
/// when the system is infeasible. Every row must have the same length.
pub fn find_feasible(rows: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(rows.len(), rhs.len());
    let m = rows.len();
    let k = rows.first().map_or(0, Vec::len);
    if m == 0 {
        return Some(vec![zero(); k]);
    }
    let width = k + m + 1;
    let rhs_col = k + m;

    // Tableau rows, each with b >= 0, artificials on the identity.
    let mut t: Vec<Vec<Rational>> = rows
        .iter()
        .zip(rhs)
        .enumerate()
        .map(|(i, (row, b))| {
            assert_eq!(row.len(), k);
            let flip = b.is_negative();
            let mut r = Vec::with_capacity(width);
            r.extend(row.iter().map(|x| if flip { -x } else { x.clone() }));
            r.extend((0..m).map(|j| if j == i { Rational::from_integer(1.into()) } else { zero() }));
            r.push(if flip { -b } else { b.clone() });
            r
        })
        .collect();
    let mut basis: Vec<usize> = (k..k + m).collect();

    // Phase-one objective: minimise the sum of artificials. Reduced costs are
    // minus the column sums over the original variables.
    let mut cost = vec![zero(); width];
    for r in &t {
        for j in 0..k {
            cost[j] -= &r[j];
        }
        cost[rhs_col] -= &r[rhs_col];
    }

    loop {
        let Some(enter) = (0..k).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for (i, r) in t.iter().enumerate() {
            if r[enter].is_positive() {
                let ratio = &r[rhs_col] / &r[enter];
                let better = match &leave {
                    None => true,
                    Some((li, best)) => ratio < *best || (ratio == *best && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // A negative reduced cost with no positive entry would mean an
        // unbounded phase-one objective, which cannot happen (it is >= 0).
        let (row, _) = leave.expect("phase-one objective is bounded below");
        pivot(&mut t, &mut cost, row, enter);
        basis[row] = enter;
    }

    if !cost[rhs_col].is_zero() {
        return None;
    }
    let mut x = vec![zero(); k];
    for (i, &b) in basis.iter().enumerate() {
        if b < k {
            x[b] = t[i][rhs_col].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rational>], cost: &mut [Rational], row: usize, col: usize) {
    let p = t[row][col].clone();
    for x in t[row].iter_mut() {
        *x /= &p;
    }
    let pivot_row = t[row].clone();
    let nonzero: Vec<usize> = (0..pivot_row.len()).filter(|&j| !pivot_row[j].is_zero()).collect();
    for (i, r) in t.iter_mut().enumerate() {
        if i == row || r[col].is_zero() {
            continue;
        }
        let f = r[col].clone();
        for &j in &nonzero {
            r[j] -= &f * &pivot_row[j];
        }
    }
    if !cost[col].is_zero() {
        let f = cost[col].clone();
        for &j in &nonzero {
            cost[j] -= &f * &pivot_row[j];
        }
    }
}
