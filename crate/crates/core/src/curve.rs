//! Local spectral curve data: times, jumps, and the derived checked tables,
//! `dxi` basis forms, and Laplace-coefficient `f`-family.
//!
//! A local curve is `N` germs `x^i(z) = z^2 + a_i`, `y^i(z) = sum h^i_k z^k`,
//! and a two-point function `B^{i,j}(z,z') = delta_{ij} dz dz'/(z-z')^2 +
//! sum B^{i,j}_{k,l} z^k z'^l dz dz'`. The canonical values `a_i` are stored
//! for fidelity but are inert: they never enter the recursion or the graph
//! sums (only `x = z^2 + a_i` locally, and `a_i` cancels from all residues).
//! Only the odd times and the even-row jump coefficients are consumed by
//! anything in scope; the rest is retained in storage untouched.

use crate::combin::double_factorial_odd;
use crate::error::{Error, Result};
use crate::field::{FieldElement, Rat};
use crate::series::Laurent;

/// Branch indices are 1-based throughout, matching the superscripts in the
/// derived tables.
#[derive(Clone)]
pub struct LocalCurveData {
    n_branch: usize,
    a: Vec<FieldElement>,
    /// `times[i][k-1] = h^{i+1}_k` for `k = 1..=t_y`.
    times: Vec<Vec<FieldElement>>,
    /// `jumps[i][j][k][l] = B^{i+1,j+1}_{k,l}` for `0 <= k, l <= t_b`.
    jumps: Vec<Vec<Vec<Vec<FieldElement>>>>,
    t_y: i64,
    t_b: i64,
}

fn df(m: i64) -> Rat {
    Rat::from_integer(double_factorial_odd(m))
}

impl LocalCurveData {
    /// Build curve data; `a = None` defaults the canonical values to the
    /// branch index.
    pub fn new(
        n_branch: usize,
        a: Option<Vec<FieldElement>>,
        times: Vec<Vec<FieldElement>>,
        jumps: Vec<Vec<Vec<Vec<FieldElement>>>>,
        t_y: i64,
        t_b: i64,
    ) -> Result<Self> {
        if n_branch == 0 {
            return Err(Error::Validation("need at least one branch point".into()));
        }
        let a = a.unwrap_or_else(|| (1..=n_branch as i64).map(FieldElement::from_int).collect());
        if a.len() != n_branch || times.len() != n_branch || jumps.len() != n_branch {
            return Err(Error::Validation("table sizes disagree with N".into()));
        }
        for row in &times {
            if row.len() != t_y as usize {
                return Err(Error::Validation("times row length disagrees with t_y".into()));
            }
        }
        for block in &jumps {
            if block.len() != n_branch {
                return Err(Error::Validation("jump block count disagrees with N".into()));
            }
            for table in block {
                if table.len() != (t_b + 1) as usize
                    || table.iter().any(|r| r.len() != (t_b + 1) as usize)
                {
                    return Err(Error::Validation("jump table shape disagrees with t_b".into()));
                }
            }
        }
        Ok(LocalCurveData { n_branch, a, times, jumps, t_y, t_b })
    }

    /// A curve with zero jumps, convenient for the Airy and KdV cases.
    pub fn one_branch(times: Vec<FieldElement>, t_b: i64) -> Result<Self> {
        let t_y = times.len() as i64;
        let table = vec![vec![FieldElement::zero(); (t_b + 1) as usize]; (t_b + 1) as usize];
        LocalCurveData::new(1, None, vec![times], vec![vec![table]], t_y, t_b)
    }

    /// The Airy curve `y = z`, standard two-point function, to the given
    /// truncation.
    pub fn airy(order: i64) -> Self {
        let mut times = vec![FieldElement::zero(); order as usize];
        times[0] = FieldElement::one();
        LocalCurveData::one_branch(times, order).expect("airy data is well formed")
    }

    pub fn n_branch(&self) -> usize {
        self.n_branch
    }

    pub fn a(&self, i: usize) -> &FieldElement {
        &self.a[i - 1]
    }

    pub fn t_y(&self) -> i64 {
        self.t_y
    }

    pub fn t_b(&self) -> i64 {
        self.t_b
    }

    pub fn times_raw(&self) -> &Vec<Vec<FieldElement>> {
        &self.times
    }

    pub fn jumps_raw(&self) -> &Vec<Vec<Vec<Vec<FieldElement>>>> {
        &self.jumps
    }

    pub fn a_raw(&self) -> &Vec<FieldElement> {
        &self.a
    }

    /// `h^i_k`, `k >= 1`.
    pub fn h(&self, i: usize, k: i64) -> Result<FieldElement> {
        if k < 1 {
            return Err(Error::InvalidTarget(format!("time index k = {k} < 1")));
        }
        if k > self.t_y {
            return Err(Error::InsufficientTruncation(format!(
                "time h^{i}_{k} beyond stored order {}",
                self.t_y
            )));
        }
        Ok(self.times[i - 1][(k - 1) as usize].clone())
    }

    /// `B^{i,j}_{k,l}`.
    pub fn b(&self, i: usize, j: usize, k: i64, l: i64) -> Result<FieldElement> {
        if k < 0 || l < 0 {
            return Ok(FieldElement::zero());
        }
        if k > self.t_b || l > self.t_b {
            return Err(Error::InsufficientTruncation(format!(
                "jump B^{i},{j}_({k},{l}) beyond stored bi-order {}",
                self.t_b
            )));
        }
        Ok(self.jumps[i - 1][j - 1][k as usize][l as usize].clone())
    }

    /// Report-style validation: distinct `a_i`, invertible kernel denominator
    /// (`h^i_1 != 0`), and jump symmetry `B^{i,j}_{k,l} = B^{j,i}_{l,k}`.
    pub fn validate(&self) -> Vec<String> {
        let mut report = Vec::new();
        for i in 1..=self.n_branch {
            for j in (i + 1)..=self.n_branch {
                if self.a[i - 1] == self.a[j - 1] {
                    report.push(format!("canonical values a_{i} and a_{j} coincide"));
                }
            }
        }
        for i in 1..=self.n_branch {
            if self.t_y < 1 || self.times[i - 1][0].is_zero() {
                report.push(format!("h^{i}_1 vanishes: kernel denominator not invertible"));
            }
        }
        for i in 1..=self.n_branch {
            for j in 1..=self.n_branch {
                for k in 0..=self.t_b as usize {
                    for l in 0..=self.t_b as usize {
                        if self.jumps[i - 1][j - 1][k][l] != self.jumps[j - 1][i - 1][l][k] {
                            report.push(format!(
                                "jump symmetry violated: B^{i},{j}_({k},{l}) != B^{j},{i}_({l},{k})"
                            ));
                        }
                    }
                }
            }
        }
        report
    }

    pub fn validated(&self) -> Result<()> {
        let report = self.validate();
        if report.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(report.join("; ")))
        }
    }

    /// Checked time `h-check^i_k = 2 (2k-1)!! h^i_{2k-1}`, `k >= 1`.
    pub fn checked_time(&self, i: usize, k: i64) -> Result<FieldElement> {
        let h = self.h(i, 2 * k - 1)?;
        Ok(h.scale_rat(&(df(2 * k - 1) * Rat::from_integer(2.into()))))
    }

    /// Checked jump `B-check^{i,j}_{d1,d2} = B^{i,j}_{2d1,2d2} (2d1-1)!! (2d2-1)!!`.
    pub fn checked_jump(&self, i: usize, j: usize, d1: i64, d2: i64) -> Result<FieldElement> {
        let b = self.b(i, j, 2 * d1, 2 * d2)?;
        Ok(b.scale_rat(&(df(2 * d1 - 1) * df(2 * d2 - 1))))
    }

    /// Density of the one-form `dxi_d^i(z, j)` in the local variable at
    /// branch `j`: singular part `delta_{ij} (2d+1)!!/z^{2d+2}` plus the
    /// regular tail `sum_l (2d-1)!! B^{i,j}_{2d,l} z^l` up to `order`.
    ///
    /// The antiderivative of `B` implicit in the definition is fixed to have
    /// zero constant term; the constant never survives the defining residue.
    pub fn dxi_series(&self, i: usize, d: i64, j: usize, order: i64) -> Result<Laurent> {
        if order > self.t_b {
            return Err(Error::InsufficientTruncation(format!(
                "dxi regular tail to order {order} needs jumps to {order}, have {}",
                self.t_b
            )));
        }
        let mut s = Laurent::zero(order);
        if i == j {
            s.add_term(-2 * d - 2, FieldElement::from_rat(df(2 * d + 1)));
        }
        let w = df(2 * d - 1);
        for l in 0..=order {
            let b = self.b(i, j, 2 * d, l)?;
            s.add_term(l, b.scale_rat(&w));
        }
        Ok(s)
    }

    /// Laplace-coefficient family `f_d^i(u, j)` written in `w = 1/u`:
    /// `delta_{ij} (-1)^d w^{-d} - sum_{d'} Bcheck^{i,j}_{d,d'} w^{d'+1}`,
    /// with the tail up to `w^{order}`.
    pub fn f_series(&self, i: usize, d: i64, j: usize, order: i64) -> Result<Laurent> {
        let mut s = Laurent::zero(order);
        if i == j {
            let sign = if d % 2 == 0 { 1 } else { -1 };
            s.add_term(-d, FieldElement::from_int(sign));
        }
        let mut dp = 0;
        while dp + 1 <= order {
            let b = self.checked_jump(i, j, d, dp)?;
            s.add_term(dp + 1, -b);
            dp += 1;
        }
        Ok(s)
    }

    /// Same family built by the induction
    /// `f_{d+1}^i(u,j) = -u f_d^i(u,j) - sum_k Bcheck^{i,k}_{d,0} f_0^k(u,j)`
    /// (the recursion is read with argument `u` throughout). Used to
    /// cross-check [`LocalCurveData::f_series`] on factorizable curves.
    pub fn f_series_recursive(&self, i: usize, d: i64, j: usize, order: i64) -> Result<Laurent> {
        // each -u f step costs one order; start the base family deeper
        let base_order = order + d;
        let mut fam: Vec<Vec<Laurent>> = vec![Vec::new(); self.n_branch];
        for ii in 1..=self.n_branch {
            for jj in 1..=self.n_branch {
                fam[ii - 1].push(self.f_series(ii, 0, jj, base_order)?);
            }
        }
        let mut cur: Vec<Laurent> = fam[i - 1].clone();
        for step in 0..d {
            let mut next = Vec::with_capacity(self.n_branch);
            for jj in 0..self.n_branch {
                // -u f = -(1/w) f
                let mut s = cur[jj].shift(-1).neg();
                for k in 1..=self.n_branch {
                    let bc = self.checked_jump(i, k, step, 0)?;
                    s = s.sub(&fam[k - 1][jj].scale(&bc));
                }
                next.push(s);
            }
            cur = next;
        }
        Ok(cur[j - 1].truncate_to(order))
    }

    /// Residual of the rank-N factorization identity
    /// `(u+v) Bcheck(u,v) = uv (delta_{ij} - sum_k f_0^k(u,i) f_0^k(v,j))`,
    /// as the list of nonzero coefficient slots up to the given bi-order.
    /// An empty report means the curve admits the factorization.
    pub fn laplace_factor_check(&self, order: i64) -> Result<Vec<String>> {
        let mut report = Vec::new();
        for i in 1..=self.n_branch {
            for j in 1..=self.n_branch {
                for d in 0..=order {
                    for dp in 0..=order {
                        if 2 * (d + 1) > self.t_b || 2 * (dp + 1) > self.t_b {
                            return Err(Error::InsufficientTruncation(format!(
                                "factorization check to bi-order {order} needs jumps to {}",
                                2 * (order + 1)
                            )));
                        }
                        // coefficient of u^{-d} v^{-dp} on both sides
                        let mut lhs = &self.checked_jump(i, j, d + 1, dp)?
                            + &self.checked_jump(i, j, d, dp + 1)?;
                        for k in 1..=self.n_branch {
                            lhs += &(&self.checked_jump(k, i, 0, d)?
                                * &self.checked_jump(k, j, 0, dp)?);
                        }
                        if !lhs.is_zero() {
                            report.push(format!(
                                "factorization residual at (i,j,d,d') = ({i},{j},{d},{dp}): {lhs}"
                            ));
                        }
                    }
                }
            }
        }
        // symmetry is part of the identity
        for line in self.validate() {
            if line.contains("symmetry") {
                report.push(line);
            }
        }
        Ok(report)
    }

    /// Homogeneity rescaling `y -> lambda y`: all times scale, `a` and the
    /// jumps stay fixed.
    pub fn scale_y(&self, lambda: &FieldElement) -> Result<LocalCurveData> {
        if lambda.is_zero() {
            return Err(Error::ZeroScale);
        }
        let mut out = self.clone();
        for row in out.times.iter_mut() {
            for h in row.iter_mut() {
                *h = &*h * lambda;
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat_i64;

    #[test]
    fn airy_is_valid() {
        let c = LocalCurveData::airy(8);
        assert!(c.validate().is_empty());
        assert_eq!(c.h(1, 1).unwrap(), FieldElement::one());
        assert_eq!(c.h(1, 3).unwrap(), FieldElement::zero());
        assert_eq!(c.checked_time(1, 2).unwrap(), FieldElement::zero());
    }

    #[test]
    fn validation_reports() {
        // duplicate a_i
        let table = vec![vec![FieldElement::zero(); 3]; 3];
        let c = LocalCurveData::new(
            2,
            Some(vec![FieldElement::one(), FieldElement::one()]),
            vec![vec![FieldElement::one(); 2], vec![FieldElement::one(); 2]],
            vec![
                vec![table.clone(), table.clone()],
                vec![table.clone(), table.clone()],
            ],
            2,
            2,
        )
        .unwrap();
        assert!(c.validate().iter().any(|l| l.contains("coincide")));

        // jump symmetry violation: B^{1,2}_{0,1} != B^{2,1}_{1,0}
        let mut t12 = table.clone();
        t12[0][1] = FieldElement::one();
        let c = LocalCurveData::new(
            2,
            None,
            vec![vec![FieldElement::one(); 2], vec![FieldElement::one(); 2]],
            vec![
                vec![table.clone(), t12],
                vec![table.clone(), table.clone()],
            ],
            2,
            2,
        )
        .unwrap();
        assert!(c.validate().iter().any(|l| l.contains("symmetry")));
    }

    #[test]
    fn dxi_zero_jumps() {
        let c = LocalCurveData::airy(6);
        let s = c.dxi_series(1, 1, 1, 4).unwrap();
        assert_eq!(s.coeff(-4).unwrap(), FieldElement::from_int(3));
        assert!(s.terms().count() == 1);
        let f0 = c.f_series(1, 0, 1, 3).unwrap();
        assert_eq!(f0.coeff(0).unwrap(), FieldElement::one());
        assert_eq!(f0.terms().count(), 1);
    }

    #[test]
    fn scale_y_composes() {
        let c = LocalCurveData::airy(5);
        let two = FieldElement::from_int(2);
        let s = c.scale_y(&two).unwrap();
        assert_eq!(s.h(1, 1).unwrap(), two);
        let lam = FieldElement::i();
        let mu = FieldElement::from_int(3);
        let both = c.scale_y(&lam).unwrap().scale_y(&mu).unwrap();
        let direct = c.scale_y(&(&lam * &mu)).unwrap();
        assert_eq!(both.h(1, 1).unwrap(), direct.h(1, 1).unwrap());
        assert!(c.scale_y(&FieldElement::zero()).is_err());
    }

    #[test]
    fn checked_tables_are_linear() {
        let mut times = vec![FieldElement::zero(); 5];
        times[0] = FieldElement::one();
        times[2] = FieldElement::from_rat(rat_i64(1, 3));
        let c = LocalCurveData::one_branch(times, 4).unwrap();
        // hcheck_2 = 2 * 3!! * h_3 = 6 * (1/3) = 2
        assert_eq!(c.checked_time(1, 2).unwrap(), FieldElement::from_int(2));
        let scaled = c.scale_y(&FieldElement::from_int(5)).unwrap();
        assert_eq!(
            scaled.checked_time(1, 2).unwrap(),
            FieldElement::from_int(10)
        );
    }
}
