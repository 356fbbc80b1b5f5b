//! Independent oracle for the stationary Gromov-Witten invariants of CP1,
//! by the standard partition-sum formula with completed cycles.
//!
//! Disconnected invariants at degree `d` are
//! `sum_{|lambda|=d} (dim lambda / d!)^2 prod_j pbar_{a_j+1}(lambda)/(a_j+1)!`
//! with the shifted power sums
//! `pbar_k(lambda) = sum_i [(lambda_i - i + 1/2)^k - (-i + 1/2)^k]
//!  + (1 - 2^{-k}) zeta(-k)`.
//! Connected invariants are extracted by inclusion-exclusion over set
//! partitions of the insertions with degree splits; the genus of every
//! component is forced by its dimension constraint. The `(g,n) = (1,0)`
//! vacuum term is absent throughout, matching the potential this crate
//! reproduces.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::combin::{factorial, zeta_neg};
use crate::error::{Error, Result};
use crate::field::{rat_i64, rat_int, Rat};

/// All partitions of `d`, parts descending.
pub fn partitions(d: i64) -> Vec<Vec<i64>> {
    fn rec(rest: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        let mut p = rest.min(max);
        while p >= 1 {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
            p -= 1;
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

/// `dim lambda = |lambda|! / prod hooks`, by the hook length formula.
pub fn partition_dimension(lambda: &[i64]) -> Rat {
    let d: i64 = lambda.iter().sum();
    let mut hooks = Rat::one();
    for (i, &li) in lambda.iter().enumerate() {
        for j in 1..=li {
            let arm = li - j;
            let leg = lambda[i + 1..].iter().filter(|&&lk| lk >= j).count() as i64;
            hooks *= rat_int(arm + leg + 1);
        }
    }
    Rat::from_integer(factorial(d as u64)) / hooks
}

/// Shifted symmetric power sum with the zeta-regularized constant.
pub fn pbar(k: i64, lambda: &[i64]) -> Rat {
    let mut acc = Rat::zero();
    for (i, &li) in lambda.iter().enumerate() {
        let row = i as i64 + 1;
        let shifted = rat_i64(2 * (li - row) + 1, 2);
        let empty = rat_i64(-2 * row + 1, 2);
        acc += pow_rat(&shifted, k) - pow_rat(&empty, k);
    }
    let reg = (Rat::one() - rat_int(2).pow(-(k as i32))) * zeta_neg(k as u64);
    acc + reg
}

fn pow_rat(base: &Rat, e: i64) -> Rat {
    let mut acc = Rat::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}

/// Disconnected stationary invariant at fixed degree.
fn disconnected(a: &[i64], d: i64) -> Rat {
    let mut total = Rat::zero();
    let df = Rat::from_integer(factorial(d as u64));
    for lambda in partitions(d) {
        let dim = partition_dimension(&lambda) / &df;
        let mut term = &dim * &dim;
        for &aj in a {
            term *= pbar(aj + 1, &lambda) / Rat::from_integer(factorial(aj as u64 + 1));
        }
        total += term;
    }
    total
}

struct ConnectedTable<'a> {
    a: &'a [i64],
    /// connected values by (insertion mask, degree)
    f: HashMap<(u32, i64), Rat>,
    /// disconnected values by (insertion mask, degree); mask 0 is 1/d!
    z: HashMap<(u32, i64), Rat>,
}

impl<'a> ConnectedTable<'a> {
    fn z(&mut self, mask: u32, d: i64) -> Rat {
        if mask == 0 {
            return Rat::from_integer(factorial(d as u64)).recip();
        }
        if let Some(v) = self.z.get(&(mask, d)) {
            return v.clone();
        }
        let subset: Vec<i64> = (0..self.a.len())
            .filter(|&j| mask & (1 << j) != 0)
            .map(|j| self.a[j])
            .collect();
        let v = disconnected(&subset, d);
        self.z.insert((mask, d), v.clone());
        v
    }

    /// Connected part: peel off the block containing the lowest set slot.
    fn f(&mut self, mask: u32, d: i64) -> Rat {
        debug_assert!(mask != 0);
        if let Some(v) = self.f.get(&(mask, d)) {
            return v.clone();
        }
        let pivot = mask.trailing_zeros();
        let rest = mask & !(1 << pivot);
        let mut acc = self.z(mask, d);
        // subtract F(B, e) Z(mask \ B, d - e) over proper (B, e)
        let mut sub = rest;
        loop {
            let block = sub | (1 << pivot);
            for e in 0..=d {
                if block == mask && e == d {
                    continue;
                }
                let fb = self.f(block, e);
                if fb.is_zero() {
                    continue;
                }
                acc -= fb * self.z(mask & !block, d - e);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        self.f.insert((mask, d), acc.clone());
        acc
    }
}

/// Connected stationary invariant `<prod_j tau_{a_j}(omega)>_g` of CP1.
/// Returns zero when the degree constraint `sum a_j = 2g - 2 + 2d` has no
/// solution `d >= 0`.
pub fn op_oracle(g: u32, a: &[i64]) -> Result<Rat> {
    if a.is_empty() {
        return Err(Error::InvalidTarget("oracle needs at least one insertion".into()));
    }
    if a.iter().any(|&x| x < 0) {
        return Err(Error::InvalidTarget("negative descendant".into()));
    }
    let asum: i64 = a.iter().sum();
    let num = asum - 2 * g as i64 + 2;
    if num % 2 != 0 || num < 0 {
        return Ok(Rat::zero());
    }
    let d = num / 2;
    let mut table = ConnectedTable { a, f: HashMap::new(), z: HashMap::new() };
    let full = (1u32 << a.len()) - 1;
    Ok(table.f(full, d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hook_dimensions() {
        assert_eq!(partition_dimension(&[2, 1]), rat_int(2));
        assert_eq!(partition_dimension(&[1, 1, 1]), rat_int(1));
        assert_eq!(partition_dimension(&[3, 2]), rat_int(5));
        // sum of squares over |lambda| = 4 is 4!
        let total: Rat = partitions(4)
            .iter()
            .map(|l| {
                let d = partition_dimension(l);
                &d * &d
            })
            .sum();
        assert_eq!(total, rat_int(24));
    }

    #[test]
    fn pbar_one_is_size_minus_constant() {
        for lambda in partitions(5) {
            assert_eq!(pbar(1, &lambda), rat_int(5) - rat_i64(1, 24));
        }
        assert_eq!(pbar(1, &[]), -rat_i64(1, 24));
    }

    #[test]
    fn one_point_family() {
        // <tau_{2d-2}(omega)>_{0,d} = 1/(d!)^2
        for d in 1..=3i64 {
            let v = op_oracle(0, &[2 * d - 2]).unwrap();
            let df = Rat::from_integer(factorial(d as u64));
            assert_eq!(v, (&df * &df).recip(), "d = {d}");
        }
    }

    #[test]
    fn small_known_values() {
        // degree 1, genus 0, three stationary insertions
        assert_eq!(op_oracle(0, &[0, 0, 0]).unwrap(), rat_int(1));
        // <tau_2(omega)>_1 = 1/24
        assert_eq!(op_oracle(1, &[2]).unwrap(), rat_i64(1, 24));
        // degree-0 genus-2 value, pure Hodge-integral regularization
        assert_eq!(op_oracle(2, &[2]).unwrap(), rat_i64(7, 5760));
        // parity violations vanish
        assert_eq!(op_oracle(0, &[1, 0, 0]).unwrap(), Rat::zero());
        assert_eq!(op_oracle(1, &[1]).unwrap(), Rat::zero());
    }

    #[test]
    fn symmetric_in_insertions() {
        let v1 = op_oracle(1, &[3, 1, 0]).unwrap();
        let v2 = op_oracle(1, &[0, 3, 1]).unwrap();
        assert_eq!(v1, v2);
        assert!(!v1.is_zero());
    }
}
