//! The local topological recursion producing the correlation forms
//! `omega_{g,n}`, plus the Airy and KdV closed forms used as oracles.
//!
//! Conventions. A form is stored as a sparse tensor of Laurent coefficients:
//! the entry `((i_1..i_n), (e_1..e_n)) -> c` stands for the summand
//! `c * prod_k z_k^{e_k} dz_k` of the component of `omega_{g,n}` whose k-th
//! variable lies on the branch `i_k`. Residues are computed coefficientwise,
//! innermost first, with the recursion variable's contour closest to the
//! branch point; the double pole of the two-point function is expanded in
//! the region `|z| < |z_external|`.
//!
//! Truncation budget: to produce the polar part of `omega_{g,n}` exactly and
//! its regular part to order `T`, the input times and jumps must be stored
//! to order `6g - 4 + 2n + T + 2` (see [`required_order`]); the engine
//! enforces this up front so a truncation shortfall can never pass silently.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use crate::combin::double_factorial_odd;
use crate::curve::LocalCurveData;
use crate::error::{Error, Result};
use crate::field::{rat_i64, FieldElement, Rat};
use crate::psi::intersection_number;
use crate::series::Laurent;

/// Key of one sparse entry: branch assignment and exponent vector, one slot
/// per marked point.
pub type FormKey = (Vec<u8>, Vec<i64>);

/// Sparse exact correlation form.
#[derive(Clone, Debug)]
pub struct CorrelationForm {
    pub g: u32,
    pub n: usize,
    pub n_branch: usize,
    /// Structural bound on pole order per slot, `6g - 4 + 2n`.
    pub pole_bound: i64,
    /// Regular parts are trusted up to this exponent in every slot.
    pub trunc: i64,
    pub entries: BTreeMap<FormKey, FieldElement>,
}

impl CorrelationForm {
    pub fn new(g: u32, n: usize, n_branch: usize, pole_bound: i64, trunc: i64) -> Self {
        CorrelationForm { g, n, n_branch, pole_bound, trunc, entries: BTreeMap::new() }
    }

    pub fn add(&mut self, key: FormKey, v: FieldElement) {
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry(key).or_insert_with(FieldElement::zero);
        *slot += &v;
        if slot.is_zero() {
            // keep the map free of explicit zeros
        }
    }

    pub fn prune_zeros(&mut self) {
        self.entries.retain(|_, v| !v.is_zero());
    }

    /// Coefficient lookup; exponents above `trunc` are an error.
    pub fn coeff(&self, branches: &[u8], exps: &[i64]) -> Result<FieldElement> {
        if exps.iter().any(|&e| e > self.trunc) {
            return Err(Error::InsufficientTruncation(format!(
                "form coefficient at {exps:?} beyond trusted order {}",
                self.trunc
            )));
        }
        Ok(self
            .entries
            .get(&(branches.to_vec(), exps.to_vec()))
            .cloned()
            .unwrap_or_else(FieldElement::zero))
    }

    pub fn scale(&self, f: &FieldElement) -> CorrelationForm {
        let mut out = self.clone();
        for v in out.entries.values_mut() {
            *v = &*v * f;
        }
        out.prune_zeros();
        out
    }

    /// Exact equality of all coefficients both sides can vouch for.
    pub fn agrees_with(&self, other: &CorrelationForm) -> bool {
        let t = self.trunc.min(other.trunc);
        let ok = |key: &FormKey| key.1.iter().all(|&e| e <= t);
        for (key, v) in &self.entries {
            if ok(key) && other.entries.get(key).map(|w| w != v).unwrap_or(!v.is_zero()) {
                return false;
            }
        }
        for (key, v) in &other.entries {
            if ok(key) && !self.entries.contains_key(key) && !v.is_zero() {
                return false;
            }
        }
        true
    }

    /// Violations of the structural invariants: permutation symmetry,
    /// residuelessness, even-order poles, and the pole bound. These are
    /// theorems about the recursion output, asserted rather than built in.
    pub fn invariant_violations(&self) -> Vec<String> {
        let mut report = Vec::new();
        for ((b, e), v) in &self.entries {
            if v.is_zero() {
                continue;
            }
            for (k, &exp) in e.iter().enumerate() {
                if exp == -1 {
                    report.push(format!("z^-1 coefficient in slot {k} at {b:?},{e:?}"));
                }
                if exp < 0 && exp % 2 != 0 {
                    report.push(format!("odd pole exponent {exp} in slot {k} at {b:?},{e:?}"));
                }
                if exp < -self.pole_bound {
                    report.push(format!(
                        "pole order {} exceeds bound {} at {b:?},{e:?}",
                        -exp, self.pole_bound
                    ));
                }
            }
        }
        // symmetry under simultaneous permutation of (branch, exponent) pairs:
        // adjacent transpositions generate all of them
        for swap in 0..self.n.saturating_sub(1) {
            for ((b, e), v) in &self.entries {
                let mut b2 = b.clone();
                let mut e2 = e.clone();
                b2.swap(swap, swap + 1);
                e2.swap(swap, swap + 1);
                let w = self
                    .entries
                    .get(&(b2, e2))
                    .cloned()
                    .unwrap_or_else(FieldElement::zero);
                if &w != v {
                    report.push(format!(
                        "not symmetric under swapping slots {swap},{} at {b:?},{e:?}",
                        swap + 1
                    ));
                }
            }
        }
        report
    }
}

/// Input order the curve data must carry so that `omega_{g,n}` comes out
/// with exact polar part and regular part trusted to `T`.
pub fn required_order(g: u32, n: usize, t: i64) -> i64 {
    6 * g as i64 - 4 + 2 * n as i64 + t + 2
}

fn df(m: i64) -> Rat {
    Rat::from_integer(double_factorial_odd(m))
}

/// The recursion driver. `omega_{0,2}` is never materialized: its singular
/// part is expanded on the fly in the region `|z| < |z_external|`.
struct Engine<'a> {
    data: &'a LocalCurveData,
    t_work: i64,
    inv_y: Vec<Laurent>,
    memo: HashMap<(u32, usize), CorrelationForm>,
}

/// One factor inside the recursion's quadratic term: either a memoized
/// stable form or the expanded two-point function.
enum Factor<'f> {
    Stable(&'f CorrelationForm),
    /// `omega_{0,2}^{j,*}(z, z_slot)`, expanded around the branch point.
    TwoPoint { j: usize },
}

impl<'a> Engine<'a> {
    fn new(data: &'a LocalCurveData, t_work: i64) -> Result<Self> {
        let mut inv_y = Vec::with_capacity(data.n_branch());
        for j in 1..=data.n_branch() {
            // Y_j(z) = sum_{k odd} h^j_k z^{k-1}
            let mut y = Laurent::zero(data.t_y() - 1);
            let mut k = 1;
            while k <= data.t_y() {
                y.add_term(k - 1, data.h(j, k)?);
                k += 2;
            }
            inv_y.push(y.inv().map_err(|_| {
                Error::Validation(format!("h^{j}_1 = 0: kernel denominator not invertible"))
            })?);
        }
        Ok(Engine { data, t_work, inv_y, memo: HashMap::new() })
    }

    fn get(&self, g: u32, n: usize) -> &CorrelationForm {
        self.memo
            .get(&(g, n))
            .expect("dependency was ensured before use")
    }

    fn ensure(&mut self, g: u32, n: usize) -> Result<()> {
        if self.memo.contains_key(&(g, n)) {
            return Ok(());
        }
        // dependencies first
        if g >= 1 && !(g == 1 && n == 1) {
            self.ensure(g - 1, n + 1)?;
        }
        let n0 = n - 1;
        for h in 0..=g {
            for na in 0..=n0 {
                for (gg, nn) in [(h, na + 1), (g - h, n0 - na + 1)] {
                    if 2 * gg as i64 - 2 + nn as i64 > 0 && (gg, nn) != (g, n) {
                        self.ensure(gg, nn)?;
                    }
                }
            }
        }
        let form = self.build(g, n)?;
        self.memo.insert((g, n), form);
        Ok(())
    }

    /// Entries of a factor with the recursion-variable slot split out:
    /// yields `(e_z, rest_branches, rest_exps, coeff)` for first-slot branch
    /// `j`. `slots` lists which external slot indices the factor owns.
    fn factor_entries(
        &self,
        factor: &Factor,
        j: usize,
        e_z_cap: i64,
        pole_cap: i64,
    ) -> Result<Vec<(i64, Vec<u8>, Vec<i64>, FieldElement)>> {
        let mut out = Vec::new();
        match factor {
            Factor::Stable(form) => {
                for ((b, e), c) in &form.entries {
                    if b[0] as usize != j || e[0] > e_z_cap {
                        continue;
                    }
                    out.push((e[0], b[1..].to_vec(), e[1..].to_vec(), c.clone()));
                }
            }
            Factor::TwoPoint { j: jj } => {
                debug_assert_eq!(*jj, j);
                // singular part: 1/(z - z_a)^2 = sum_m (m+1) z^m z_a^{-m-2}
                let mut m = 0;
                while m <= e_z_cap && m + 2 <= pole_cap {
                    out.push((
                        m,
                        vec![j as u8],
                        vec![-m - 2],
                        FieldElement::from_int(m + 1),
                    ));
                    m += 1;
                }
                // regular part: B^{j,i}_{k,l} z^k z_a^l
                for i in 1..=self.data.n_branch() {
                    for k in 0..=e_z_cap.min(self.data.t_b()) {
                        for l in 0..=self.t_work.min(self.data.t_b()) {
                            let b = self.data.b(j, i, k, l)?;
                            if !b.is_zero() {
                                out.push((k, vec![i as u8], vec![l], b));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    fn build(&self, g: u32, n: usize) -> Result<CorrelationForm> {
        let n0 = n - 1;
        let nb = self.data.n_branch();
        let p_target = 6 * g as i64 - 4 + 2 * n as i64;
        let mut result = CorrelationForm::new(g, n, nb, p_target, self.t_work);

        for j in 1..=nb {
            // E_j collects the z-expansion of the bracketed recursion term,
            // keyed by the external part; only even e_z <= 0 can survive the
            // residue against this kernel.
            let mut e_map: HashMap<(Vec<u8>, Vec<i64>), HashMap<i64, FieldElement>> =
                HashMap::new();
            let mut stash = |rest_b: Vec<u8>, rest_e: Vec<i64>, e_z: i64, c: FieldElement| {
                if e_z > 0 || e_z % 2 != 0 || c.is_zero() {
                    return;
                }
                let inner = e_map.entry((rest_b, rest_e)).or_default();
                let v = inner.entry(e_z).or_insert_with(FieldElement::zero);
                *v += &c;
            };

            // genus-reduction term omega_{g-1, n0+2}(z, -z, externals)
            if g >= 1 {
                if g == 1 && n0 == 0 {
                    // omega_{0,2}^{j,j}(z,-z) with the d(-z) conversion
                    stash(vec![], vec![], -2, FieldElement::from_ratio(-1, 4));
                    let b00 = self.data.b(j, j, 0, 0)?;
                    stash(vec![], vec![], 0, -b00);
                } else {
                    let sub = self.get(g - 1, n0 + 2);
                    for ((b, e), c) in &sub.entries {
                        if b[0] as usize != j || b[1] as usize != j {
                            continue;
                        }
                        let e_z = e[0] + e[1];
                        let sign = if (e[1] + 1) % 2 == 0 { 1 } else { -1 };
                        stash(
                            b[2..].to_vec(),
                            e[2..].to_vec(),
                            e_z,
                            c.scale_rat(&Rat::from_integer(sign.into())),
                        );
                    }
                }
            }

            // quadratic term: ordered splits (h, A) x (g-h, B)
            for h in 0..=g {
                for mask in 0u32..(1 << n0) {
                    let a_slots: Vec<usize> = (0..n0).filter(|s| mask & (1 << s) != 0).collect();
                    let b_slots: Vec<usize> = (0..n0).filter(|s| mask & (1 << s) == 0).collect();
                    let (la, lb) = (a_slots.len(), b_slots.len());
                    let left_stable = 2 * h as i64 - 2 + (la + 1) as i64 > 0;
                    let right_stable = 2 * (g - h) as i64 - 2 + (lb + 1) as i64 > 0;
                    let left_02 = h == 0 && la == 1;
                    let right_02 = g == h && lb == 1;
                    if !(left_stable || left_02) || !(right_stable || right_02) {
                        continue; // an omega_{0,1} factor: identically zero
                    }
                    let p_left = if left_stable { 6 * h as i64 - 4 + 2 * (la + 1) as i64 } else { 0 };
                    let p_right =
                        if right_stable { 6 * (g - h) as i64 - 4 + 2 * (lb + 1) as i64 } else { 0 };

                    let lf = if left_stable {
                        Factor::Stable(self.get(h, la + 1))
                    } else {
                        Factor::TwoPoint { j }
                    };
                    let rf = if right_stable {
                        Factor::Stable(self.get(g - h, lb + 1))
                    } else {
                        Factor::TwoPoint { j }
                    };
                    let lhs = self.factor_entries(&lf, j, p_right, p_target)?;
                    if lhs.is_empty() {
                        continue;
                    }
                    let rhs = self.factor_entries(&rf, j, p_left, p_target)?;

                    for (el, lb_rest, le_rest, lc) in &lhs {
                        for (er, rb_rest, re_rest, rc) in &rhs {
                            let e_z = el + er;
                            if e_z > 0 || e_z % 2 != 0 {
                                continue;
                            }
                            // slot -z carries d(-z) = -dz
                            let sign = if (er + 1) % 2 == 0 { 1 } else { -1 };
                            let mut rest_b = vec![0u8; n0];
                            let mut rest_e = vec![0i64; n0];
                            for (pos, &s) in a_slots.iter().enumerate() {
                                rest_b[s] = lb_rest[pos];
                                rest_e[s] = le_rest[pos];
                            }
                            for (pos, &s) in b_slots.iter().enumerate() {
                                rest_b[s] = rb_rest[pos];
                                rest_e[s] = re_rest[pos];
                            }
                            let c = (lc * rc).scale_rat(&Rat::from_integer(sign.into()));
                            stash(rest_b, rest_e, e_z, c);
                        }
                    }
                }
            }

            // residue against the kernel
            let inv_y = &self.inv_y[j - 1];
            for ((rest_b, rest_e), inner) in &e_map {
                for (&e_z, c) in inner {
                    if c.is_zero() {
                        continue;
                    }
                    // double-pole part of the kernel: poles in the new slot
                    let mut m = 0;
                    while -2 * m - e_z >= 0 {
                        if 2 * m + 2 > p_target {
                            break;
                        }
                        let q = -2 * m - e_z;
                        let w = inv_y.coeff(q)?;
                        if !w.is_zero() {
                            let mut bkey = Vec::with_capacity(n);
                            bkey.push(j as u8);
                            bkey.extend_from_slice(rest_b);
                            let mut ekey = Vec::with_capacity(n);
                            ekey.push(-2 * m - 2);
                            ekey.extend_from_slice(rest_e);
                            result.add(
                                (bkey, ekey),
                                (c * &w).scale_rat(&rat_i64(1, 4)),
                            );
                        }
                        m += 1;
                    }
                    // regular part of the kernel: couples every first branch
                    let mut l = 0;
                    while l <= -e_z {
                        let q = -e_z - l;
                        let w = inv_y.coeff(q)?;
                        if !w.is_zero() {
                            for i0 in 1..=nb {
                                for k in 0..=self.t_work.min(self.data.t_b()) {
                                    let b = self.data.b(i0, j, k, l)?;
                                    if b.is_zero() {
                                        continue;
                                    }
                                    let mut bkey = Vec::with_capacity(n);
                                    bkey.push(i0 as u8);
                                    bkey.extend_from_slice(rest_b);
                                    let mut ekey = Vec::with_capacity(n);
                                    ekey.push(k);
                                    ekey.extend_from_slice(rest_e);
                                    result.add(
                                        (bkey, ekey),
                                        (&(c * &b) * &w).scale_rat(&rat_i64(1, 4 * (l + 1))),
                                    );
                                }
                            }
                        }
                        l += 2;
                    }
                }
            }
        }
        result.prune_zeros();
        Ok(result)
    }
}

/// Run the topological recursion on `data` for the target `(g, n)`, with
/// polar parts exact and regular parts trusted to `order`.
///
/// For `(g, n) = (0, 2)` the returned form is the regular part of the
/// two-point function; its `delta_{ij} dz dz'/(z-z')^2` singular part is
/// implicit (it cannot be a Laurent tensor in separated variables).
pub fn tr_omega(data: &LocalCurveData, g: u32, n: usize, order: i64) -> Result<CorrelationForm> {
    data.validated()?;
    if g == 0 && n == 2 {
        let t = order.min(data.t_b());
        let mut form = CorrelationForm::new(0, 2, data.n_branch(), 0, t);
        for i in 1..=data.n_branch() {
            for j in 1..=data.n_branch() {
                for k in 0..=t {
                    for l in 0..=t {
                        form.add((vec![i as u8, j as u8], vec![k, l]), data.b(i, j, k, l)?);
                    }
                }
            }
        }
        return Ok(form);
    }
    if 2 * g as i64 - 2 + (n as i64) <= 0 {
        return Err(Error::InvalidTarget(format!(
            "(g, n) = ({g}, {n}) is unstable and not the two-point base case"
        )));
    }
    let need = required_order(g, n, order);
    if data.t_y() < need || data.t_b() < need {
        return Err(Error::InsufficientTruncation(format!(
            "omega_({g},{n}) to order {order} needs input data to order {need}, \
             have times {} and jumps {}",
            data.t_y(),
            data.t_b()
        )));
    }
    // Regular parts of intermediates are consumed only against partner
    // poles, which the target pole bound caps; externals thread through to
    // the requested order.
    let t_work = order.max(6 * g as i64 - 4 + 2 * n as i64 - 2);
    let mut engine = Engine::new(data, t_work)?;
    engine.ensure(g, n)?;
    let full = engine.memo.remove(&(g, n)).expect("just ensured");
    // expose exactly the requested window
    let mut out = CorrelationForm::new(g, n, full.n_branch, full.pole_bound, order);
    for ((b, e), c) in full.entries {
        if e.iter().all(|&x| x <= order) {
            out.add((b, e), c);
        }
    }
    Ok(out)
}

/// Closed form for the Airy curve `y = alpha z`, `B = beta B_KdV`:
/// intersection numbers against the descending basis.
pub fn airy_closed_form(
    g: u32,
    n: usize,
    alpha: &FieldElement,
    beta: &FieldElement,
    trunc: i64,
) -> Result<CorrelationForm> {
    if 2 * g as i64 - 2 + (n as i64) <= 0 {
        return Err(Error::InvalidTarget(format!("unstable target ({g},{n})")));
    }
    let mut times = vec![FieldElement::zero(); 1];
    times[0] = alpha.clone();
    kdv_closed_form_scaled(g, n, &times, beta, trunc)
}

/// Closed form for the one-branch KdV curve with odd times `h_k` and
/// `B = beta B_KdV`; the dilaton sum is finite by the dimension constraint.
pub fn kdv_closed_form(
    g: u32,
    n: usize,
    times: &[FieldElement],
    trunc: i64,
) -> Result<CorrelationForm> {
    kdv_closed_form_scaled(g, n, times, &FieldElement::one(), trunc)
}

fn kdv_closed_form_scaled(
    g: u32,
    n: usize,
    times: &[FieldElement],
    beta: &FieldElement,
    trunc: i64,
) -> Result<CorrelationForm> {
    if 2 * g as i64 - 2 + (n as i64) <= 0 {
        return Err(Error::InvalidTarget(format!("unstable target ({g},{n})")));
    }
    let h1 = times
        .first()
        .cloned()
        .unwrap_or_else(FieldElement::zero);
    if h1.is_zero() {
        return Err(Error::Validation("KdV closed form needs h_1 != 0".into()));
    }
    // Times beyond the supplied vector are zero: the vector is the curve.
    let h = |k: i64| -> FieldElement {
        times
            .get((k - 1) as usize)
            .cloned()
            .unwrap_or_else(FieldElement::zero)
    };
    let dim = 3 * g as i64 - 3 + n as i64;
    let mut form = CorrelationForm::new(g, n, 1, 6 * g as i64 - 4 + 2 * n as i64, trunc);

    // prefactor (-beta / (2 h_1))^{2g+n-2} beta^{g+n-1}
    let base = (-beta).scale_rat(&rat_i64(1, 2)) * h1.inv()?;
    let pref = &base.pow(2 * g as i64 + n as i64 - 2)? * &beta.pow(g as i64 + n as i64 - 1)?;

    // Multisets of dilaton indices alpha_k >= 1. The bracket lives on
    // Mbar_{g,n+m}, so the ordinary exponents carry 3g-3+n+m minus the
    // dilaton labels alpha_k+1, i.e. dim minus sum(alpha_k).
    let mut stack: Vec<(Vec<i64>, i64)> = vec![(Vec::new(), 0)];
    while let Some((alphas, used)) = stack.pop() {
        let min_next = alphas.last().copied().unwrap_or(1);
        let mut a = min_next;
        while used + a <= dim {
            let mut next = alphas.clone();
            next.push(a);
            stack.push((next, used + a));
            a += 1;
        }

        // contribution of this multiset
        let m = alphas.len() as i64;
        let mut weight = pref.clone();
        // (-1)^m / prod(mult!)
        if m % 2 == 1 {
            weight = -weight;
        }
        let mut mult = 1i64;
        let mut run = 1i64;
        for w in alphas.windows(2) {
            if w[0] == w[1] {
                run += 1;
                mult *= run;
            } else {
                run = 1;
            }
        }
        weight = weight.scale_rat(&rat_i64(1, mult));
        let h1_inv = h1.inv()?;
        for &a in &alphas {
            weight = weight * h(2 * a + 1).scale_rat(&df(2 * a + 1)) * h1_inv.clone();
        }
        if weight.is_zero() {
            continue;
        }

        let d_total = dim - used;
        // compositions of d_total into n ordinary slots
        let mut comps: Vec<Vec<i64>> = vec![vec![]];
        for slot in 0..n {
            let mut next = Vec::new();
            for c in &comps {
                let rest = d_total - c.iter().sum::<i64>();
                let lo = if slot + 1 == n { rest } else { 0 };
                for d in lo..=rest {
                    let mut cc = c.clone();
                    cc.push(d);
                    next.push(cc);
                }
            }
            comps = next;
        }
        for comp in comps {
            let mut ds: Vec<u32> = comp.iter().map(|&d| d as u32).collect();
            ds.extend(alphas.iter().map(|&a| (a + 1) as u32));
            let bracket = intersection_number(g, &ds)?;
            if bracket.is_zero() {
                continue;
            }
            let mut c = weight.scale_rat(&bracket);
            let mut exps = Vec::with_capacity(n);
            for &d in &comp {
                c = c.scale_rat(&df(2 * d + 1));
                exps.push(-2 * d - 2);
            }
            form.add((vec![1u8; n], exps), c);
        }
    }
    form.prune_zeros();
    Ok(form)
}
