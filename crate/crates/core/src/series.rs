//! Truncated Laurent series in one variable and truncated power series in
//! two variables over `Q(i, sqrt2)`.
//!
//! Truncation is tracked explicitly and propagated pessimistically:
//! requesting a coefficient above the trusted order is an error, never a
//! silent zero. One-forms are represented by their densities in the local
//! coordinate (one implicit `dz` per variable); every operation that cares
//! about the density convention documents it.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::{rat_i64, rat_int, FieldElement, Rat};

/// A truncated Laurent series `sum_{k=low}^{trunc} c_k z^k` with exponents
/// above `trunc` unknown (never assumed zero).
///
/// Normalized so the leading stored coefficient is nonzero; the zero series
/// stores no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Laurent {
    low: i64,
    coeffs: Vec<FieldElement>,
    trunc: i64,
}

impl Laurent {
    pub fn zero(trunc: i64) -> Self {
        Laurent { low: trunc + 1, coeffs: Vec::new(), trunc }
    }

    pub fn one(trunc: i64) -> Self {
        Laurent::monomial(FieldElement::one(), 0, trunc)
    }

    pub fn monomial(c: FieldElement, k: i64, trunc: i64) -> Self {
        let mut s = Laurent::zero(trunc);
        if !c.is_zero() && k <= trunc {
            s.low = k;
            s.coeffs = vec![c];
        }
        s
    }

    /// Build from `(exponent, coefficient)` pairs; exponents above `trunc`
    /// are rejected.
    pub fn from_terms(terms: &[(i64, FieldElement)], trunc: i64) -> Result<Self> {
        let mut s = Laurent::zero(trunc);
        for (k, c) in terms {
            if *k > trunc {
                return Err(Error::InsufficientTruncation(format!(
                    "term z^{k} beyond truncation {trunc}"
                )));
            }
            s.add_term(*k, c.clone());
        }
        Ok(s)
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Lowest stored exponent; `trunc + 1` for the zero series.
    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn normalize(&mut self) {
        while let Some(first) = self.coeffs.first() {
            if first.is_zero() {
                self.coeffs.remove(0);
                self.low += 1;
            } else {
                break;
            }
        }
        while let Some(last) = self.coeffs.last() {
            if last.is_zero() {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        if self.coeffs.is_empty() {
            self.low = self.trunc + 1;
        }
    }

    pub fn add_term(&mut self, k: i64, c: FieldElement) {
        if c.is_zero() || k > self.trunc {
            return;
        }
        if self.coeffs.is_empty() {
            self.low = k;
            self.coeffs = vec![c];
            return;
        }
        if k < self.low {
            let mut pre = vec![FieldElement::zero(); (self.low - k) as usize];
            pre[0] = c;
            pre.extend(self.coeffs.drain(..));
            self.coeffs = pre;
            self.low = k;
        } else {
            let idx = (k - self.low) as usize;
            if idx >= self.coeffs.len() {
                self.coeffs.resize(idx + 1, FieldElement::zero());
            }
            self.coeffs[idx] += &c;
        }
        self.normalize();
    }

    /// Stored coefficient of `z^k`: zero below `low`, an error above `trunc`.
    pub fn coeff(&self, k: i64) -> Result<FieldElement> {
        if k > self.trunc {
            return Err(Error::InsufficientTruncation(format!(
                "coefficient of z^{k} requested, trusted only to z^{}",
                self.trunc
            )));
        }
        if k < self.low || self.coeffs.is_empty() {
            return Ok(FieldElement::zero());
        }
        let idx = (k - self.low) as usize;
        Ok(self
            .coeffs
            .get(idx)
            .cloned()
            .unwrap_or_else(FieldElement::zero))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &FieldElement)> {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(j, c)| (self.low + j as i64, c))
            .filter(|(_, c)| !c.is_zero())
    }

    /// Effective valuation used by the truncation rules: `low` for nonzero
    /// series, `trunc + 1` for the zero series.
    fn val(&self) -> i64 {
        if self.is_zero() { self.trunc + 1 } else { self.low }
    }

    /// Cauchy product; result trusted to `min(Ta + val(b), Tb + val(a))`.
    pub fn mul(&self, rhs: &Laurent) -> Laurent {
        let trunc = (self.trunc + rhs.val()).min(rhs.trunc + self.val());
        let mut out = Laurent::zero(trunc);
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        let lo = self.low + rhs.low;
        let n = (trunc - lo + 1).max(0) as usize;
        let mut acc = vec![FieldElement::zero(); n];
        for (ka, ca) in self.terms() {
            for (kb, cb) in rhs.terms() {
                let k = ka + kb;
                if k <= trunc {
                    acc[(k - lo) as usize] += &(ca * cb);
                }
            }
        }
        out.low = lo;
        out.coeffs = acc;
        out.normalize();
        out
    }

    pub fn add(&self, rhs: &Laurent) -> Laurent {
        let trunc = self.trunc.min(rhs.trunc);
        let mut out = Laurent::zero(trunc);
        for (k, c) in self.terms() {
            out.add_term(k, c.clone());
        }
        for (k, c) in rhs.terms() {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Laurent) -> Laurent {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Laurent {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = -&*c;
        }
        out
    }

    pub fn scale(&self, f: &FieldElement) -> Laurent {
        if f.is_zero() {
            return Laurent::zero(self.trunc);
        }
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = &*c * f;
        }
        out.normalize();
        out
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Laurent {
        let mut out = self.clone();
        out.low += k;
        out.trunc += k;
        out
    }

    pub fn truncate_to(&self, trunc: i64) -> Laurent {
        let mut out = Laurent::zero(trunc.min(self.trunc));
        for (k, c) in self.terms() {
            out.add_term(k, c.clone());
        }
        out
    }

    /// Multiplicative inverse up to truncation. The result has lowest
    /// exponent `-low` and satisfies `self * inv = 1 + O(z^{T+1})`.
    pub fn inv(&self) -> Result<Laurent> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        let m = self.low;
        let rel = (self.trunc - m) as usize; // relative precision
        let lead = self.coeffs[0].inv().map_err(|_| Error::NotInvertible)?;
        let mut b = vec![FieldElement::zero(); rel + 1];
        b[0] = lead.clone();
        for k in 1..=rel {
            let mut acc = FieldElement::zero();
            for j in 1..=k {
                let aj = self
                    .coeffs
                    .get(j)
                    .cloned()
                    .unwrap_or_else(FieldElement::zero);
                if !aj.is_zero() && !b[k - j].is_zero() {
                    acc += &(&aj * &b[k - j]);
                }
            }
            b[k] = &(-acc) * &lead;
        }
        let mut out = Laurent::zero(self.trunc - 2 * m);
        out.low = -m;
        out.coeffs = b;
        out.normalize();
        Ok(out)
    }

    /// Coefficient of `z^{-1}`, reading `self` as the density of a one-form
    /// `a(z) dz`. Errors if the `z^{-1}` slot is above the truncation.
    pub fn residue(&self) -> Result<FieldElement> {
        if self.trunc < -1 {
            return Err(Error::InsufficientTruncation(
                "z^-1 slot not represented".into(),
            ));
        }
        self.coeff(-1)
    }

    /// `F(z) - F(-z)` for any antiderivative `F` of `self`; only even-degree
    /// terms of `self` survive. Errors on a nonzero `z^{-1}` coefficient.
    pub fn odd_antiderivative(&self) -> Result<Laurent> {
        if self.trunc >= -1 && !self.coeff(-1)?.is_zero() {
            return Err(Error::LogarithmicTerm);
        }
        let mut out = Laurent::zero(self.trunc + 1);
        for (k, c) in self.terms() {
            if k == -1 || k % 2 != 0 {
                continue;
            }
            out.add_term(k + 1, c.scale_rat(&rat_i64(2, 1)) .scale_rat(&rat_int(k + 1).recip()));
        }
        Ok(out)
    }

    pub fn derivative(&self) -> Laurent {
        let mut out = Laurent::zero(self.trunc - 1);
        for (k, c) in self.terms() {
            if k != 0 {
                out.add_term(k - 1, c.scale_rat(&rat_int(k)));
            }
        }
        out
    }

    /// Substitute into `sqrt(1 + u)` via the binomial series; `u` must have
    /// positive valuation.
    pub fn sqrt_one_plus(u: &Laurent) -> Result<Laurent> {
        Laurent::binomial_series(u, |m| {
            // C(1/2, m)
            let mut c = Rat::from_integer(1.into());
            for j in 0..m {
                c = c * (rat_i64(1, 2) - rat_int(j)) / rat_int(j + 1);
            }
            c
        })
    }

    /// Substitute into `log(1 + u)`; `u` must have positive valuation.
    /// The constant term is zero.
    pub fn log_one_plus(u: &Laurent) -> Result<Laurent> {
        Laurent::binomial_series(u, |m| {
            if m == 0 {
                Rat::zero()
            } else if m % 2 == 1 {
                rat_int(m).recip()
            } else {
                -rat_int(m).recip()
            }
        })
    }

    fn binomial_series(u: &Laurent, coeff: impl Fn(i64) -> Rat) -> Result<Laurent> {
        if !u.is_zero() && u.low <= 0 {
            return Err(Error::InvalidTarget(
                "series substitution needs positive valuation".into(),
            ));
        }
        let trunc = u.trunc;
        let mut out = Laurent::monomial(FieldElement::from_rat(coeff(0)), 0, trunc);
        let mut pow = Laurent::one(trunc);
        let max_m = if u.is_zero() { 0 } else { trunc / u.low };
        for m in 1..=max_m {
            pow = pow.mul(u).truncate_to(trunc);
            out = out.add(&pow.scale(&FieldElement::from_rat(coeff(m))));
        }
        Ok(out)
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "O(z^{})", self.trunc + 1);
        }
        let mut first = true;
        for (k, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})z^{k}")?;
        }
        write!(f, " + O(z^{})", self.trunc + 1)
    }
}

/// A truncated two-variable power series on a square coefficient window,
/// trusted only for total degree `k + l <= tot`.
///
/// The double-pole singular part of the two-point function is never stored
/// here; it is kept symbolic by the consumers and expanded region by region
/// when a residue ordering is chosen.
#[derive(Clone)]
pub struct BiSeries {
    c: Vec<Vec<FieldElement>>,
    tot: i64,
}

impl BiSeries {
    pub fn zero(window: usize, tot: i64) -> Self {
        BiSeries {
            c: vec![vec![FieldElement::zero(); window + 1]; window + 1],
            tot,
        }
    }

    pub fn window(&self) -> usize {
        self.c.len() - 1
    }

    pub fn tot(&self) -> i64 {
        self.tot
    }

    pub fn set(&mut self, k: usize, l: usize, v: FieldElement) {
        self.c[k][l] = v;
    }

    pub fn coeff(&self, k: i64, l: i64) -> Result<FieldElement> {
        if k < 0 || l < 0 {
            return Ok(FieldElement::zero());
        }
        if k + l > self.tot {
            return Err(Error::InsufficientTruncation(format!(
                "bivariate coefficient ({k},{l}) beyond total degree {}",
                self.tot
            )));
        }
        Ok(self.c[k as usize][l as usize].clone())
    }

    /// `f(s) * g(t)` for Taylor `f, g`.
    pub fn outer(f: &Laurent, g: &Laurent, window: usize) -> Result<Self> {
        let tot = (window as i64).min(f.trunc() + g.trunc());
        let mut out = BiSeries::zero(window, tot);
        for (k, cf) in f.terms() {
            if k < 0 || k as usize > window {
                continue;
            }
            for (l, cg) in g.terms() {
                if l < 0 || l as usize > window {
                    continue;
                }
                out.c[k as usize][l as usize] = cf * cg;
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &BiSeries) -> BiSeries {
        let mut out = self.clone();
        out.tot = self.tot.min(rhs.tot);
        for k in 0..out.c.len() {
            for l in 0..out.c.len() {
                out.c[k][l] = &out.c[k][l] + &rhs.c[k][l];
            }
        }
        out
    }

    pub fn sub(&self, rhs: &BiSeries) -> BiSeries {
        let mut out = self.clone();
        out.tot = self.tot.min(rhs.tot);
        for k in 0..out.c.len() {
            for l in 0..out.c.len() {
                out.c[k][l] = &out.c[k][l] - &rhs.c[k][l];
            }
        }
        out
    }

    pub fn mul(&self, rhs: &BiSeries) -> BiSeries {
        let w = self.window();
        let mut out = BiSeries::zero(w, self.tot.min(rhs.tot));
        for k in 0..=w {
            for l in 0..=w {
                if (k + l) as i64 > out.tot {
                    continue;
                }
                let mut acc = FieldElement::zero();
                for ka in 0..=k {
                    for la in 0..=l {
                        let a = &self.c[ka][la];
                        if a.is_zero() {
                            continue;
                        }
                        let b = &rhs.c[k - ka][l - la];
                        if !b.is_zero() {
                            acc += &(a * b);
                        }
                    }
                }
                out.c[k][l] = acc;
            }
        }
        out
    }

    /// Inverse of a series with nonzero constant term, by coefficient
    /// recurrence in total degree.
    pub fn inv(&self) -> Result<BiSeries> {
        let lead = self.c[0][0].inv().map_err(|_| Error::NotInvertible)?;
        let w = self.window();
        let mut out = BiSeries::zero(w, self.tot.min(2 * w as i64));
        out.c[0][0] = lead.clone();
        for d in 1..=out.tot {
            for k in 0..=d.min(w as i64) {
                let l = d - k;
                if l > w as i64 {
                    continue;
                }
                let (k, l) = (k as usize, l as usize);
                let mut acc = FieldElement::zero();
                for ka in 0..=k {
                    for la in 0..=l {
                        if ka == k && la == l {
                            continue;
                        }
                        let b = &out.c[ka][la];
                        if b.is_zero() {
                            continue;
                        }
                        let a = &self.c[k - ka][l - la];
                        if !a.is_zero() {
                            acc += &(a * b);
                        }
                    }
                }
                out.c[k][l] = &(-acc) * &lead;
            }
        }
        Ok(out)
    }

    /// Exact division by `(s - t)`; errors when the diagonal trace
    /// obstruction is nonzero. Costs one order of trusted total degree.
    pub fn div_s_minus_t(&self) -> Result<BiSeries> {
        // Divisibility <=> the series vanishes on s = t.
        for d in 0..=self.tot.min(self.window() as i64) {
            let mut trace = FieldElement::zero();
            for k in 0..=d {
                trace += &self.c[k as usize][(d - k) as usize];
            }
            if !trace.is_zero() {
                return Err(Error::NotDivisible(format!(
                    "diagonal trace nonzero at total degree {d}"
                )));
            }
        }
        let w = self.window();
        let mut out = BiSeries::zero(w, self.tot - 1);
        // N = (s - t) D  =>  D_{p,q} = sum_{j=0..q} N_{p+1+j, q-j}
        for p in 0..=w {
            for q in 0..=w {
                if (p + q) as i64 > out.tot {
                    continue;
                }
                let mut acc = FieldElement::zero();
                for j in 0..=q {
                    if p + 1 + j > w {
                        break;
                    }
                    let n = &self.c[p + 1 + j][q - j];
                    if !n.is_zero() {
                        acc += n;
                    }
                }
                out.c[p][q] = acc;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fe(n: i64) -> FieldElement {
        FieldElement::from_int(n)
    }

    #[test]
    fn mul_examples() {
        // (z^-1 + 1)(z - 1) = z - z^-1
        let a = Laurent::from_terms(&[(-1, fe(1)), (0, fe(1))], 5).unwrap();
        let b = Laurent::from_terms(&[(0, fe(-1)), (1, fe(1))], 5).unwrap();
        let p = a.mul(&b);
        assert_eq!(p.coeff(-1).unwrap(), fe(-1));
        assert_eq!(p.coeff(0).unwrap(), FieldElement::zero());
        assert_eq!(p.coeff(1).unwrap(), fe(1));
        // (1+z)(1-z) = 1 - z^2
        let a = Laurent::from_terms(&[(0, fe(1)), (1, fe(1))], 6).unwrap();
        let b = Laurent::from_terms(&[(0, fe(1)), (1, fe(-1))], 6).unwrap();
        let p = a.mul(&b);
        assert_eq!(p.coeff(0).unwrap(), fe(1));
        assert_eq!(p.coeff(2).unwrap(), fe(-1));
        // truncation rule: T = 3 and T = 5 with low = 0 gives T = 3
        let a = Laurent::one(3);
        let b = Laurent::one(5);
        assert_eq!(a.mul(&b).trunc(), 3);
    }

    #[test]
    fn inv_examples() {
        // 1/(1-z) = 1 + z + z^2 + ...
        let a = Laurent::from_terms(&[(0, fe(1)), (1, fe(-1))], 6).unwrap();
        let inv = a.inv().unwrap();
        for k in 0..=6 {
            assert_eq!(inv.coeff(k).unwrap(), fe(1));
        }
        // 1/(2z) = (1/2) z^-1
        let a = Laurent::monomial(fe(2), 1, 4);
        let inv = a.inv().unwrap();
        assert_eq!(inv.low(), -1);
        assert_eq!(inv.coeff(-1).unwrap(), FieldElement::from_ratio(1, 2));
        assert!(Laurent::zero(3).inv().is_err());
    }

    #[test]
    fn residue_examples() {
        let a = Laurent::monomial(fe(1), -1, 3);
        assert_eq!(a.residue().unwrap(), fe(1));
        let a = Laurent::monomial(fe(1), -2, 3);
        assert_eq!(a.residue().unwrap(), FieldElement::zero());
        let a = Laurent::from_terms(&[(-3, fe(5)), (-1, fe(3))], 2).unwrap();
        assert_eq!(a.residue().unwrap(), fe(3));
    }

    #[test]
    fn odd_antiderivative_examples() {
        // even k: z^k -> 2 z^{k+1}/(k+1)
        let a = Laurent::monomial(fe(1), 4, 9);
        let f = a.odd_antiderivative().unwrap();
        assert_eq!(f.coeff(5).unwrap(), FieldElement::from_ratio(2, 5));
        // odd k != -1: vanishes
        let a = Laurent::monomial(fe(1), 3, 9);
        assert!(a.odd_antiderivative().unwrap().is_zero());
        // z^-2 -> -2/z
        let a = Laurent::monomial(fe(1), -2, 9);
        let f = a.odd_antiderivative().unwrap();
        assert_eq!(f.coeff(-1).unwrap(), fe(-2));
        // z^-1 is a logarithm
        let a = Laurent::monomial(fe(1), -1, 9);
        assert!(matches!(a.odd_antiderivative(), Err(Error::LogarithmicTerm)));
    }

    #[test]
    fn coeff_bounds() {
        let a = Laurent::from_terms(&[(0, fe(1)), (1, fe(2))], 3).unwrap();
        assert_eq!(a.coeff(1).unwrap(), fe(2));
        assert!(a.coeff(5).is_err());
        assert_eq!(
            Laurent::monomial(fe(1), -1, 3).coeff(-3).unwrap(),
            FieldElement::zero()
        );
    }

    #[test]
    fn bivariate_division() {
        // s^2 - t^2 = (s - t)(s + t)
        let mut n = BiSeries::zero(4, 4);
        n.set(2, 0, fe(1));
        n.set(0, 2, fe(-1));
        let d = n.div_s_minus_t().unwrap();
        assert_eq!(d.coeff(1, 0).unwrap(), fe(1));
        assert_eq!(d.coeff(0, 1).unwrap(), fe(1));
        // s^2 + t^2 is not divisible
        let mut n = BiSeries::zero(4, 4);
        n.set(2, 0, fe(1));
        n.set(0, 2, fe(1));
        assert!(n.div_s_minus_t().is_err());
    }

    fn arb_series() -> impl Strategy<Value = Laurent> {
        (
            -3i64..=2,
            proptest::collection::vec(-9i64..=9, 1..=6),
        )
            .prop_map(|(low, cs)| {
                let terms: Vec<(i64, FieldElement)> = cs
                    .iter()
                    .enumerate()
                    .map(|(j, &c)| (low + j as i64, fe(c)))
                    .collect();
                Laurent::from_terms(&terms, low + 7).unwrap()
            })
    }

    proptest! {
        #[test]
        fn mul_inv_is_one(a in arb_series()) {
            prop_assume!(!a.is_zero());
            let inv = a.inv().unwrap();
            let p = a.mul(&inv);
            for k in 0..=p.trunc() {
                let expect = if k == 0 { fe(1) } else { FieldElement::zero() };
                prop_assert_eq!(p.coeff(k).unwrap(), expect);
            }
        }

        #[test]
        fn odd_antiderivative_derivative(a in arb_series()) {
            prop_assume!(a.trunc() < -1 || a.coeff(-1).unwrap().is_zero());
            // d/dz (F(z) - F(-z)) = a(z) + a(-z)
            let f = a.odd_antiderivative().unwrap();
            let d = f.derivative();
            for k in a.low()..=d.trunc().min(a.trunc()) {
                let ak = a.coeff(k).unwrap();
                let expect = if k % 2 == 0 {
                    ak.scale_rat(&rat_int(2))
                } else {
                    FieldElement::zero()
                };
                prop_assert_eq!(d.coeff(k).unwrap(), expect);
            }
        }

        #[test]
        fn truncation_monotone(a in arb_series(), b in arb_series()) {
            // recomputing a product at higher truncation agrees on the overlap
            let p_full = a.mul(&b);
            let a2 = a.truncate_to(a.trunc() - 2);
            let b2 = b.truncate_to(b.trunc() - 2);
            let p_cut = a2.mul(&b2);
            for k in p_cut.low().min(p_full.low())..=p_cut.trunc() {
                prop_assert_eq!(p_cut.coeff(k).unwrap(), p_full.coeff(k).unwrap());
            }
        }
    }
}
