//! The coefficient field `Q(i, sqrt2)` as a fixed 4-dimensional Q-algebra.
//!
//! Elements are stored on the basis `(1, i, r, i*r)` with `i^2 = -1`,
//! `r^2 = 2`, `ir = ri`. Components are arbitrary-precision rationals, so
//! equality is exact and componentwise. This is deliberately not a generic
//! number-field tower: the whole system needs exactly `i` and `sqrt2`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational. Always normalized by `num-rational`
/// (positive denominator, reduced).
pub type Rat = BigRational;

pub fn rat_i64(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Canonical textual form: `p/q` with `q > 0`, or just `p` when `q = 1`.
pub fn rat_to_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parse `p` or `p/q`. A zero denominator is a parse error.
pub fn rat_from_str(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// An element `c0 + c1*i + c2*r + c3*i*r` of `Q(i, sqrt2)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub c: [Rat; 4],
}

impl FieldElement {
    pub fn new(c0: Rat, c1: Rat, c2: Rat, c3: Rat) -> Self {
        FieldElement { c: [c0, c1, c2, c3] }
    }

    pub fn zero() -> Self {
        FieldElement::new(Rat::zero(), Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn one() -> Self {
        FieldElement::from_rat(Rat::one())
    }

    /// The imaginary unit `i`.
    pub fn i() -> Self {
        FieldElement::new(Rat::zero(), Rat::one(), Rat::zero(), Rat::zero())
    }

    /// The square root of two, written `r` internally.
    pub fn sqrt2() -> Self {
        FieldElement::new(Rat::zero(), Rat::zero(), Rat::one(), Rat::zero())
    }

    pub fn from_rat(q: Rat) -> Self {
        FieldElement::new(q, Rat::zero(), Rat::zero(), Rat::zero())
    }

    pub fn from_int(n: i64) -> Self {
        FieldElement::from_rat(rat_int(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        FieldElement::from_rat(rat_i64(n, d))
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero()
    }

    /// Returns `c0` when the element lies in `Q`, otherwise `NotRational`.
    pub fn as_rational(&self) -> Result<Rat> {
        if self.c[1].is_zero() && self.c[2].is_zero() && self.c[3].is_zero() {
            Ok(self.c[0].clone())
        } else {
            Err(Error::NotRational(self.to_string()))
        }
    }

    /// Ring homomorphism `i -> -i` fixing `r`.
    pub fn conj_i(&self) -> Self {
        FieldElement::new(
            self.c[0].clone(),
            -self.c[1].clone(),
            self.c[2].clone(),
            -self.c[3].clone(),
        )
    }

    /// Ring homomorphism `r -> -r` fixing `i`.
    pub fn conj_r(&self) -> Self {
        FieldElement::new(
            self.c[0].clone(),
            self.c[1].clone(),
            -self.c[2].clone(),
            -self.c[3].clone(),
        )
    }

    /// Multiplicative inverse, computed by solving `a*x = 1` through the
    /// 4x4 multiplication-by-`a` matrix over Q.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let a = &self.c;
        let two = rat_int(2);
        // Row k of m is the basis-k component of a*x as a linear form in x.
        let mut m: [[Rat; 5]; 4] = [
            [
                a[0].clone(),
                -a[1].clone(),
                &two * &a[2],
                -(&two * &a[3]),
                Rat::one(),
            ],
            [
                a[1].clone(),
                a[0].clone(),
                &two * &a[3],
                &two * &a[2],
                Rat::zero(),
            ],
            [
                a[2].clone(),
                -a[3].clone(),
                a[0].clone(),
                -a[1].clone(),
                Rat::zero(),
            ],
            [
                a[3].clone(),
                a[2].clone(),
                a[1].clone(),
                a[0].clone(),
                Rat::zero(),
            ],
        ];
        // Gaussian elimination with exact pivoting.
        for col in 0..4 {
            let pivot = (col..4)
                .find(|&row| !m[row][col].is_zero())
                .ok_or(Error::DivisionByZero)?;
            m.swap(col, pivot);
            let p = m[col][col].clone();
            for entry in m[col].iter_mut() {
                *entry /= p.clone();
            }
            for row in 0..4 {
                if row != col && !m[row][col].is_zero() {
                    let f = m[row][col].clone();
                    for k in col..5 {
                        let sub = &f * &m[col][k];
                        m[row][k] -= sub;
                    }
                }
            }
        }
        Ok(FieldElement::new(
            m[0][4].clone(),
            m[1][4].clone(),
            m[2][4].clone(),
            m[3][4].clone(),
        ))
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = FieldElement::one();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &sq;
            }
            n >>= 1;
            if n > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    pub fn scale_rat(&self, q: &Rat) -> Self {
        FieldElement::new(
            q * &self.c[0],
            q * &self.c[1],
            q * &self.c[2],
            q * &self.c[3],
        )
    }

    /// Canonical 4-array of rational strings, the CLI wire form.
    pub fn to_string_array(&self) -> [String; 4] {
        [
            rat_to_string(&self.c[0]),
            rat_to_string(&self.c[1]),
            rat_to_string(&self.c[2]),
            rat_to_string(&self.c[3]),
        ]
    }

    pub fn from_string_array(parts: &[&str]) -> Result<Self> {
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "field element needs 4 components, got {}",
                parts.len()
            )));
        }
        Ok(FieldElement::new(
            rat_from_str(parts[0])?,
            rat_from_str(parts[1])?,
            rat_from_str(parts[2])?,
            rat_from_str(parts[3])?,
        ))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let names = ["", "i", "r", "ir"];
        let mut first = true;
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, "{}", if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            let abs = c.abs();
            if names[k].is_empty() {
                write!(f, "{}", rat_to_string(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", names[k])?;
            } else {
                write!(f, "{}*{}", rat_to_string(&abs), names[k])?;
            }
        }
        Ok(())
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::new(
            &self.c[0] + &rhs.c[0],
            &self.c[1] + &rhs.c[1],
            &self.c[2] + &rhs.c[2],
            &self.c[3] + &rhs.c[3],
        )
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        FieldElement::new(
            &self.c[0] - &rhs.c[0],
            &self.c[1] - &rhs.c[1],
            &self.c[2] - &rhs.c[2],
            &self.c[3] - &rhs.c[3],
        )
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        let a = &self.c;
        let b = &rhs.c;
        let two = rat_int(2);
        // Multiplication table on (1, i, r, ir): i^2 = -1, r^2 = 2.
        let c0 = &a[0] * &b[0] - &a[1] * &b[1] + &two * (&a[2] * &b[2]) - &two * (&a[3] * &b[3]);
        let c1 = &a[0] * &b[1] + &a[1] * &b[0] + &two * (&a[2] * &b[3]) + &two * (&a[3] * &b[2]);
        let c2 = &a[0] * &b[2] + &a[2] * &b[0] - &a[1] * &b[3] - &a[3] * &b[1];
        let c3 = &a[0] * &b[3] + &a[3] * &b[0] + &a[1] * &b[2] + &a[2] * &b[1];
        FieldElement::new(c0, c1, c2, c3)
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement::new(
            -self.c[0].clone(),
            -self.c[1].clone(),
            -self.c[2].clone(),
            -self.c[3].clone(),
        )
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        &self + &rhs
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        &self - &rhs
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        &self * &rhs
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        for k in 0..4 {
            self.c[k] += &rhs.c[k];
        }
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        for k in 0..4 {
            self.c[k] -= &rhs.c[k];
        }
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        *self = &*self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn defining_relations() {
        let i = FieldElement::i();
        let r = FieldElement::sqrt2();
        assert_eq!(&i * &i, FieldElement::from_int(-1));
        assert_eq!(&r * &r, FieldElement::from_int(2));
        let one_plus_i = FieldElement::one() + FieldElement::i();
        let one_minus_i = FieldElement::one() - FieldElement::i();
        assert_eq!(one_plus_i.clone() * one_minus_i, FieldElement::from_int(2));
    }

    #[test]
    fn inverses() {
        let i = FieldElement::i();
        assert_eq!(i.inv().unwrap(), -&i);
        let r = FieldElement::sqrt2();
        assert_eq!(r.inv().unwrap(), r.scale_rat(&rat_i64(1, 2)));
        let a = FieldElement::one() + FieldElement::i();
        let expect = (FieldElement::one() - FieldElement::i()).scale_rat(&rat_i64(1, 2));
        assert_eq!(a.inv().unwrap(), expect);
        assert!(matches!(
            FieldElement::zero().inv(),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn rational_embedding_round_trip() {
        let q = rat_i64(3, 2);
        let e = FieldElement::from_rat(q.clone());
        assert_eq!(e.as_rational().unwrap(), q);
        assert!(FieldElement::i().as_rational().is_err());
        assert_eq!(
            FieldElement::from_int(-5).to_string_array(),
            ["-5", "0", "0", "0"].map(String::from)
        );
    }

    #[test]
    fn parse_rejects_zero_denominator() {
        assert!(rat_from_str("1/0").is_err());
        assert_eq!(rat_from_str("-3/6").unwrap(), rat_i64(-1, 2));
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (-12i64..=12, 1i64..=7).prop_map(|(n, d)| rat_i64(n, d))
    }

    fn arb_fe() -> impl Strategy<Value = FieldElement> {
        (arb_rat(), arb_rat(), arb_rat(), arb_rat())
            .prop_map(|(a, b, c, d)| FieldElement::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_fe(), b in arb_fe(), c in arb_fe()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn inverse_is_two_sided(a in arb_fe()) {
            prop_assume!(!a.is_zero());
            let inv = a.inv().unwrap();
            prop_assert_eq!(&a * &inv, FieldElement::one());
        }

        #[test]
        fn conjugations_are_homomorphisms(a in arb_fe(), b in arb_fe()) {
            prop_assert_eq!((&a * &b).conj_i(), &a.conj_i() * &b.conj_i());
            prop_assert_eq!((&a * &b).conj_r(), &a.conj_r() * &b.conj_r());
            prop_assert_eq!((&a + &b).conj_i(), &a.conj_i() + &b.conj_i());
            let q = FieldElement::from_ratio(7, 3);
            prop_assert_eq!(q.conj_i(), q.clone());
            prop_assert_eq!(q.conj_r(), q);
        }
    }
}
