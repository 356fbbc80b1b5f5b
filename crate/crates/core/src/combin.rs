//! Small exact combinatorial helpers: factorials, odd double factorials,
//! binomials, Bernoulli numbers and `zeta(-k)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::field::{rat_int, Rat};

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    acc
}

/// `m!!` for odd `m >= -3`, with the conventions `(-1)!! = 1`, `(-3)!! = -1`
/// used by the CP1 closed forms.
pub fn double_factorial_odd(m: i64) -> BigInt {
    assert!(m >= -3 && m % 2 != 0, "odd double factorial needs odd m >= -3");
    match m {
        -3 => BigInt::from(-1),
        -1 => BigInt::one(),
        _ => {
            let mut acc = BigInt::one();
            let mut k = 1;
            while k <= m {
                acc *= k;
                k += 2;
            }
            acc
        }
    }
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..k.min(n - k) {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// Bernoulli numbers `B_0..=B_n` in the `B_1 = -1/2` convention.
fn bernoulli_table(n: usize) -> Vec<Rat> {
    let mut b: Vec<Rat> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(rat_int(1));
            continue;
        }
        // sum_{k=0}^{m} C(m+1,k) B_k = 0
        let mut acc = Rat::zero();
        for (k, bk) in b.iter().enumerate() {
            let c = Rat::from_integer(binomial(m as u64 + 1, k as u64));
            acc += c * bk;
        }
        let denom = Rat::from_integer(BigInt::from(m as i64 + 1));
        b.push(-acc / denom);
    }
    b
}

/// `zeta(-k)` for `k >= 0`, exact: `zeta(0) = -1/2`, `zeta(-k) = -B_{k+1}/(k+1)`.
pub fn zeta_neg(k: u64) -> Rat {
    if k == 0 {
        return -rat_int(1) / rat_int(2);
    }
    let b = bernoulli_table(k as usize + 1);
    -b[k as usize + 1].clone() / rat_int(k as i64 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_i64;

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial_odd(-3), BigInt::from(-1));
        assert_eq!(double_factorial_odd(-1), BigInt::one());
        assert_eq!(double_factorial_odd(1), BigInt::one());
        assert_eq!(double_factorial_odd(5), BigInt::from(15));
        assert_eq!(double_factorial_odd(7), BigInt::from(105));
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_neg(0), rat_i64(-1, 2));
        assert_eq!(zeta_neg(1), rat_i64(-1, 12));
        assert_eq!(zeta_neg(2), rat_i64(0, 1));
        assert_eq!(zeta_neg(3), rat_i64(1, 120));
        assert_eq!(zeta_neg(5), rat_i64(-1, 252));
        assert_eq!(zeta_neg(7), rat_i64(1, 240));
    }
}
