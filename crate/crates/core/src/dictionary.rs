//! The dictionary between Givental R-matrix data and local spectral curves,
//! in both directions, with validity checks.
//!
//! Matrix index convention, fixed once for the whole crate: a matrix is
//! stored as a row-by-column grid exactly as displayed in formulas, and the
//! symbol `M^i_j` means the entry with upper index `i` = column, lower index
//! `j` = row (matrices act on row vectors). [`RSeries::ul`] is the only
//! accessor used in weight formulas, so the convention lives in one place.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combin::double_factorial_odd;
use crate::curve::LocalCurveData;
use crate::error::{Error, Result};
use crate::field::{rat_i64, FieldElement, Rat};

pub type Mat = Vec<Vec<FieldElement>>;

pub fn mat_id(n: usize) -> Mat {
    let mut m = mat_zero(n);
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = FieldElement::one();
    }
    m
}

pub fn mat_zero(n: usize) -> Mat {
    vec![vec![FieldElement::zero(); n]; n]
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = mat_zero(n);
    for r in 0..n {
        for c in 0..n {
            let mut acc = FieldElement::zero();
            for s in 0..n {
                if !a[r][s].is_zero() && !b[s][c].is_zero() {
                    acc += &(&a[r][s] * &b[s][c]);
                }
            }
            out[r][c] = acc;
        }
    }
    out
}

pub fn mat_scale(a: &Mat, f: &FieldElement) -> Mat {
    a.iter()
        .map(|row| row.iter().map(|x| x * f).collect())
        .collect()
}

pub fn mat_add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

fn mat_is_zero(a: &Mat) -> bool {
    a.iter().all(|row| row.iter().all(|x| x.is_zero()))
}

/// Truncated operator series `R(z) = sum_k R_k z^k`, `R_0 = I`.
#[derive(Clone, Debug)]
pub struct RSeries {
    dim: usize,
    mats: Vec<Mat>,
}

impl RSeries {
    pub fn new(mats: Vec<Mat>) -> Result<Self> {
        let dim = mats
            .first()
            .map(|m| m.len())
            .ok_or_else(|| Error::InvalidTarget("empty R series".into()))?;
        if mats[0] != mat_id(dim) {
            return Err(Error::NotSymplectic("R_0 must be the identity".into()));
        }
        for m in &mats {
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(Error::InvalidTarget("ragged R series".into()));
            }
        }
        Ok(RSeries { dim, mats })
    }

    pub fn identity(dim: usize, order: i64) -> Self {
        let mut mats = vec![mat_id(dim)];
        for _ in 0..order {
            mats.push(mat_zero(dim));
        }
        RSeries { dim, mats }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Highest stored order.
    pub fn order(&self) -> i64 {
        self.mats.len() as i64 - 1
    }

    pub fn mat(&self, k: i64) -> Result<&Mat> {
        if k < 0 || k > self.order() {
            return Err(Error::InsufficientTruncation(format!(
                "R_{k} beyond stored order {}",
                self.order()
            )));
        }
        Ok(&self.mats[k as usize])
    }

    /// `(R_k)^i_j`: upper index `i` = column, lower index `j` = row,
    /// both 1-based.
    pub fn ul(&self, k: i64, i: usize, j: usize) -> Result<FieldElement> {
        Ok(self.mat(k)?[j - 1][i - 1].clone())
    }

    /// Grid-level series inverse: `inv(z) * R(z) = I` up to the stored order.
    pub fn inverse_series(&self) -> RSeries {
        let mut inv = vec![mat_id(self.dim)];
        for m in 1..self.mats.len() {
            let mut acc = mat_zero(self.dim);
            for b in 1..=m {
                acc = mat_add(&acc, &mat_mul(&inv[m - b], &self.mats[b]));
            }
            inv.push(mat_scale(&acc, &FieldElement::from_int(-1)));
        }
        RSeries { dim: self.dim, mats: inv }
    }
}

/// Residual coefficients of `sum_s R^i_s(-z) R^j_s(z) - delta^{ij}` through
/// `z^order`; an empty report is a pass.
pub fn symplectic_check(r: &RSeries, order: i64) -> Result<Vec<String>> {
    let mut report = Vec::new();
    for m in 0..=order.min(r.order()) {
        for i in 1..=r.dim() {
            for j in 1..=r.dim() {
                let mut acc = FieldElement::zero();
                for a in 0..=m {
                    let b = m - a;
                    let sign = if a % 2 == 0 { 1 } else { -1 };
                    let mut inner = FieldElement::zero();
                    for s in 1..=r.dim() {
                        inner += &(&r.ul(a, i, s)? * &r.ul(b, j, s)?);
                    }
                    acc += &inner.scale_rat(&Rat::from_integer(sign.into()));
                }
                if m == 0 && i == j {
                    acc -= &FieldElement::one();
                }
                if !acc.is_zero() {
                    report.push(format!("symplectic residual at z^{m}, (i,j)=({i},{j}): {acc}"));
                }
            }
        }
    }
    Ok(report)
}

/// Givental input data: the R series, a square root of each `Delta_i`, and
/// the unit row. For a Frobenius manifold the unit is `(Psi^i_1)_i =
/// (1/sqrt(Delta_i))_i`, which [`GiventalData::new`] defaults to; abstract
/// inputs may supply any nonzero unit through [`GiventalData::with_unit`].
#[derive(Clone, Debug)]
pub struct GiventalData {
    pub r: RSeries,
    pub sqrt_delta: Vec<FieldElement>,
    pub unit: Vec<FieldElement>,
}

impl GiventalData {
    pub fn new(r: RSeries, sqrt_delta: Vec<FieldElement>) -> Result<Self> {
        let mut unit = Vec::with_capacity(sqrt_delta.len());
        for (k, s) in sqrt_delta.iter().enumerate() {
            if s.is_zero() {
                return Err(Error::SqrtNotInField(k + 1));
            }
            unit.push(s.inv()?);
        }
        GiventalData::with_unit(r, sqrt_delta, unit)
    }

    pub fn with_unit(
        r: RSeries,
        sqrt_delta: Vec<FieldElement>,
        unit: Vec<FieldElement>,
    ) -> Result<Self> {
        if sqrt_delta.len() != r.dim() || unit.len() != r.dim() {
            return Err(Error::InvalidTarget("Delta or unit length disagrees with R".into()));
        }
        if let Some(k) = sqrt_delta.iter().position(|s| s.is_zero()) {
            return Err(Error::SqrtNotInField(k + 1));
        }
        Ok(GiventalData { r, sqrt_delta, unit })
    }

    pub fn delta(&self, i: usize) -> FieldElement {
        &self.sqrt_delta[i - 1] * &self.sqrt_delta[i - 1]
    }

    /// Dilaton-leaf weight `[z^{k-1}] (-R(-z))^i_unit`, `k >= 1`.
    pub fn dilaton_weight(&self, i: usize, k: i64) -> Result<FieldElement> {
        let mut acc = FieldElement::zero();
        for j in 1..=self.r.dim() {
            acc += &(&self.unit[j - 1] * &self.r.ul(k - 1, i, j)?);
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        Ok(acc.scale_rat(&Rat::from_integer(sign.into())))
    }
}

/// Checked-jump table read off the symplectic quotient, Eq.-style:
/// `Bcheck_{p,q} = [z^p w^q] (delta^{ij} - sum_s R^i_s(-z) R^j_s(-w))/(z+w)`.
/// Valid on the triangle `p + q <= R order - 1`.
pub fn bcheck_from_r(r: &RSeries, i: usize, j: usize, p: i64, q: i64) -> Result<FieldElement> {
    if p + q + 1 > r.order() {
        return Err(Error::InsufficientTruncation(format!(
            "Bcheck_({p},{q}) needs R to order {}, have {}",
            p + q + 1,
            r.order()
        )));
    }
    // numerator coefficient N_{a,b} = delta - (-1)^{a+b} sum_s (R_a)^i_s (R_b)^j_s
    let numer = |a: i64, b: i64| -> Result<FieldElement> {
        let mut acc = FieldElement::zero();
        for s in 1..=r.dim() {
            acc += &(&r.ul(a, i, s)? * &r.ul(b, j, s)?);
        }
        let sign = if (a + b) % 2 == 0 { -1 } else { 1 };
        let mut v = acc.scale_rat(&Rat::from_integer(sign.into()));
        if a == 0 && b == 0 && i == j {
            v += &FieldElement::one();
        }
        Ok(v)
    };
    // quotient by (z + w): Q_{p,q} = sum_{t=0..q} (-1)^t N_{p+1+t, q-t}
    let mut acc = FieldElement::zero();
    for t in 0..=q {
        let n = numer(p + 1 + t, q - t)?;
        if t % 2 == 0 {
            acc += &n;
        } else {
            acc -= &n;
        }
    }
    Ok(acc)
}

fn df(m: i64) -> Rat {
    Rat::from_integer(double_factorial_odd(m))
}

/// Build the local spectral curve of a Givental datum: checked jumps from
/// the symplectic quotient, checked times from the unit contraction, and
/// `h_1 = -1/(2 sqrt(Delta))`. Odd-row jumps are set to zero; nothing in
/// scope reads them.
pub fn curve_from_r(gd: &GiventalData) -> Result<LocalCurveData> {
    let report = symplectic_check(&gd.r, gd.r.order())?;
    if !report.is_empty() {
        return Err(Error::NotSymplectic(report.join("; ")));
    }
    let n = gd.r.dim();
    let order = gd.r.order();
    let d_max = ((order - 1) / 2).max(0);
    let t_b = 2 * d_max;
    let t_y = 2 * order + 1;

    let mut times = Vec::with_capacity(n);
    for i in 1..=n {
        let mut row = vec![FieldElement::zero(); t_y as usize];
        // h_1 = -1/(2 sqrt(Delta_i))
        row[0] = gd.sqrt_delta[i - 1].inv()?.scale_rat(&rat_i64(-1, 2));
        let mut k = 2;
        while 2 * k - 1 <= t_y {
            let hcheck = gd.dilaton_weight(i, k)?;
            row[(2 * k - 2) as usize] =
                hcheck.scale_rat(&(df(2 * k - 1) * Rat::from_integer(2.into())).recip());
            k += 1;
        }
        times.push(row);
    }

    let mut jumps =
        vec![vec![vec![vec![FieldElement::zero(); (t_b + 1) as usize]; (t_b + 1) as usize]; n]; n];
    for i in 1..=n {
        for j in 1..=n {
            for p in 0..=d_max {
                for q in 0..=d_max {
                    let bc = bcheck_from_r(&gd.r, i, j, p, q)?;
                    let raw = bc.scale_rat(&(df(2 * p - 1) * df(2 * q - 1)).recip());
                    jumps[i - 1][j - 1][(2 * p) as usize][(2 * q) as usize] = raw;
                }
            }
        }
    }
    LocalCurveData::new(n, None, times, jumps, t_y, t_b)
}

/// Read the R series back off the first checked-jump column:
/// `Bcheck^{i,t}_{k,0} = (-1)^k (R_{k+1})^i_t`, `R_0 = I`. Errors with
/// `NotFactorizable` when the remaining jump table disagrees with the
/// symplectic quotient of the extracted series.
pub fn r_from_curve(data: &LocalCurveData) -> Result<RSeries> {
    let n = data.n_branch();
    let d_max = data.t_b() / 2;
    let mut mats = vec![mat_id(n)];
    for k in 0..=d_max {
        let mut m = mat_zero(n);
        for i in 1..=n {
            for t in 1..=n {
                let bc = data.checked_jump(i, t, k, 0)?;
                let sign = if k % 2 == 0 { 1 } else { -1 };
                // upper index i = column, lower index t = row
                m[t - 1][i - 1] = bc.scale_rat(&Rat::from_integer(sign.into()));
            }
        }
        mats.push(m);
    }
    let r = RSeries::new(mats)?;
    // verify the full stored square against the quotient of the extraction
    for i in 1..=n {
        for j in 1..=n {
            for p in 0..=d_max {
                for q in 0..=d_max {
                    if p + q + 1 > r.order() {
                        continue;
                    }
                    let from_r = bcheck_from_r(&r, i, j, p, q)?;
                    let stored = data.checked_jump(i, j, p, q)?;
                    if from_r != stored {
                        return Err(Error::NotFactorizable(format!(
                            "Bcheck^{i},{j}_({p},{q}) = {stored} disagrees with the \
                             quotient of the extracted R ({from_r})"
                        )));
                    }
                }
            }
        }
    }
    Ok(r)
}

/// Seeded random symplectic series `exp(sum r_l z^l)` with odd-`l`
/// generators symmetric and even-`l` generators skew-symmetric. The draw is
/// per-order deterministic: lower-order output never depends on `order`.
pub fn random_valid_r(seed: u64, n: usize, order: i64) -> RSeries {
    let mut gens: Vec<Mat> = vec![mat_zero(n)];
    for l in 1..=order {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(l as u64),
        );
        let draw = |rng: &mut ChaCha8Rng| -> FieldElement {
            let num = rng.gen_range(-2i64..=2);
            let den = rng.gen_range(1i64..=2);
            FieldElement::from_ratio(num, den)
        };
        let mut m = mat_zero(n);
        if l % 2 == 1 {
            for r in 0..n {
                for c in r..n {
                    let v = draw(&mut rng);
                    m[r][c] = v.clone();
                    m[c][r] = v;
                }
            }
        } else {
            for r in 0..n {
                for c in (r + 1)..n {
                    let v = draw(&mut rng);
                    m[r][c] = v.clone();
                    m[c][r] = -&v;
                }
            }
        }
        gens.push(m);
    }
    // exp of the generator polynomial, truncated
    let mut mats = vec![mat_id(n)];
    mats.extend(std::iter::repeat(mat_zero(n)).take(order as usize));
    // term = gens-polynomial^m / m!
    let mut term: Vec<Mat> = mats.clone(); // identity series
    for m in 1..=order {
        // term <- term * gens / m, truncated
        let mut next = vec![mat_zero(n); order as usize + 1];
        for a in 0..=order {
            if mat_is_zero(&term[a as usize]) {
                continue;
            }
            for b in 1..=order - a {
                if mat_is_zero(&gens[b as usize]) {
                    continue;
                }
                next[(a + b) as usize] = mat_add(
                    &next[(a + b) as usize],
                    &mat_mul(&term[a as usize], &gens[b as usize]),
                );
            }
        }
        let inv_m = FieldElement::from_rat(rat_i64(1, m));
        for t in next.iter_mut() {
            *t = mat_scale(t, &inv_m);
        }
        for k in 0..=order as usize {
            mats[k] = mat_add(&mats[k], &next[k]);
        }
        term = next;
    }
    RSeries { dim: n, mats }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_case() {
        let r = RSeries::identity(2, 4);
        assert!(symplectic_check(&r, 4).unwrap().is_empty());
        let gd = GiventalData::new(r, vec![FieldElement::one(), FieldElement::one()]).unwrap();
        let curve = curve_from_r(&gd).unwrap();
        assert!(curve.validate().is_empty());
        assert_eq!(curve.h(1, 1).unwrap(), FieldElement::from_ratio(-1, 2));
        assert_eq!(curve.checked_time(1, 2).unwrap(), FieldElement::zero());
        assert_eq!(curve.checked_jump(1, 2, 0, 0).unwrap(), FieldElement::zero());
    }

    #[test]
    fn first_order_bcheck_is_r1() {
        let r = random_valid_r(11, 2, 5);
        for i in 1..=2 {
            for j in 1..=2 {
                assert_eq!(
                    bcheck_from_r(&r, i, j, 0, 0).unwrap(),
                    r.ul(1, i, j).unwrap()
                );
            }
        }
    }

    #[test]
    fn random_r_is_symplectic_and_consistent_across_orders() {
        let r_lo = random_valid_r(3, 2, 4);
        let r_hi = random_valid_r(3, 2, 9);
        assert!(symplectic_check(&r_hi, 9).unwrap().is_empty());
        for k in 0..=4 {
            assert_eq!(r_lo.mat(k).unwrap(), r_hi.mat(k).unwrap());
        }
        // scalar case: even generators vanish, so R(z)R(-z) = 1
        let r1 = random_valid_r(5, 1, 6);
        assert!(symplectic_check(&r1, 6).unwrap().is_empty());
    }

    #[test]
    fn skew_first_order_fails_symplectic() {
        let mut m1 = mat_zero(2);
        m1[0][1] = FieldElement::one();
        m1[1][0] = -FieldElement::one();
        let r = RSeries::new(vec![mat_id(2), m1]).unwrap();
        assert!(!symplectic_check(&r, 1).unwrap().is_empty());
    }

    #[test]
    fn round_trips() {
        let r = random_valid_r(42, 2, 9);
        let gd = GiventalData::new(
            r.clone(),
            vec![FieldElement::one(), FieldElement::sqrt2()],
        )
        .unwrap();
        let curve = curve_from_r(&gd).unwrap();
        assert!(curve.validate().is_empty());
        let back = r_from_curve(&curve).unwrap();
        for k in 0..=back.order().min(r.order()) {
            assert_eq!(back.mat(k).unwrap(), r.mat(k).unwrap(), "R_{k}");
        }
        assert!(back.order() >= 4);
        // curve -> R -> curve fixes the checked data
        let gd2 = GiventalData::new(back, gd.sqrt_delta.clone()).unwrap();
        let curve2 = curve_from_r(&gd2).unwrap();
        for i in 1..=2usize {
            for k in 1..=3 {
                assert_eq!(
                    curve.checked_time(i, k).unwrap(),
                    curve2.checked_time(i, k).unwrap()
                );
            }
            for j in 1..=2usize {
                for p in 0..=2 {
                    for q in 0..=2 {
                        assert_eq!(
                            curve.checked_jump(i, j, p, q).unwrap(),
                            curve2.checked_jump(i, j, p, q).unwrap()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn dictionary_output_factorizes() {
        let r = random_valid_r(7, 2, 11);
        let gd = GiventalData::new(r, vec![FieldElement::one(), FieldElement::i()]).unwrap();
        let curve = curve_from_r(&gd).unwrap();
        let report = curve.laplace_factor_check(3).unwrap();
        assert!(report.is_empty(), "{report:?}");
    }

    #[test]
    fn delta_scaling_only_moves_h1() {
        // unit held fixed, Delta rescaled
        let r = random_valid_r(9, 2, 7);
        let unit = vec![FieldElement::one(), FieldElement::one()];
        let gd1 = GiventalData::with_unit(
            r.clone(),
            vec![FieldElement::one(), FieldElement::one()],
            unit.clone(),
        )
        .unwrap();
        let gd2 = GiventalData::with_unit(
            r,
            vec![FieldElement::from_int(3), FieldElement::one()],
            unit,
        )
        .unwrap();
        let c1 = curve_from_r(&gd1).unwrap();
        let c2 = curve_from_r(&gd2).unwrap();
        assert_ne!(c1.h(1, 1).unwrap(), c2.h(1, 1).unwrap());
        assert_eq!(c1.h(1, 3).unwrap(), c2.h(1, 3).unwrap());
        assert_eq!(
            c1.checked_jump(1, 2, 1, 1).unwrap(),
            c2.checked_jump(1, 2, 1, 1).unwrap()
        );
    }

    #[test]
    fn inverse_series_is_symplectic_transpose() {
        let r = random_valid_r(13, 2, 6);
        let inv = r.inverse_series();
        // R(z)^{-1} = R(-z)^T for symplectic R
        for k in 0..=6 {
            let m = inv.mat(k).unwrap();
            let rk = r.mat(k).unwrap();
            for a in 0..2 {
                for b in 0..2 {
                    let sign = if k % 2 == 0 {
                        FieldElement::one()
                    } else {
                        -FieldElement::one()
                    };
                    assert_eq!(m[a][b], &rk[b][a] * &sign);
                }
            }
        }
    }
}
