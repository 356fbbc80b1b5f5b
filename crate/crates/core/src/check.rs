//! The bundled check suites behind `check SUITE`: every acceptance-level
//! identity at its pinned tolerance (exact equality throughout) and runtime
//! budget, with one result line per criterion.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cp1::{
    cp1_r, ns_f_matrix_check, u_residue_closed_form, u_residue_coeff, NsPipeline,
};
use crate::curve::LocalCurveData;
use crate::dictionary::{
    curve_from_r, r_from_curve, random_valid_r, symplectic_check, GiventalData,
};
use crate::error::Result;
use crate::field::{rat_int, FieldElement};
use crate::graphsum::{dxi_to_w, evaluate_dxi_expansion, givental_correlator_table, tr_graph_sum};
use crate::oracle::op_oracle;
use crate::psi::intersection_number;
use crate::recursion::{airy_closed_form, kdv_closed_form, required_order, tr_omega};

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
    pub budget_millis: u128,
}

impl CheckResult {
    fn finish(name: &str, t0: Instant, budget_millis: u128, outcome: Result<String>) -> Self {
        let millis = t0.elapsed().as_millis();
        match outcome {
            Ok(detail) => CheckResult {
                name: name.into(),
                passed: millis < budget_millis,
                detail: if millis < budget_millis {
                    detail
                } else {
                    format!("{detail}; exceeded runtime budget")
                },
                millis,
                budget_millis,
            },
            Err(e) => CheckResult {
                name: name.into(),
                passed: false,
                detail: e.to_string(),
                millis,
                budget_millis,
            },
        }
    }

    pub fn line(&self) -> String {
        format!(
            "{} {} ({} ms): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.millis,
            self.detail
        )
    }
}

fn fail(msg: String) -> Result<String> {
    Err(crate::error::Error::InvalidTarget(msg))
}

/// Criterion 1: the four Airy golden displays, exactly.
pub fn criterion_airy_golden() -> CheckResult {
    let t0 = Instant::now();
    let run = || -> Result<String> {
        let one = FieldElement::one();
        for (g, n) in [(0u32, 3usize), (0, 4), (1, 1), (1, 2)] {
            let data = LocalCurveData::airy(required_order(g, n, 0));
            let engine = tr_omega(&data, g, n, 0)?;
            let display = airy_closed_form(g, n, &one, &one, 0)?;
            if !engine.agrees_with(&display) {
                return fail(format!("omega_({g},{n}) disagrees with the display"));
            }
        }
        // spot values pinned literally
        let data = LocalCurveData::airy(required_order(1, 2, 0));
        let w03 = tr_omega(&data, 0, 3, 0)?;
        if w03.coeff(&[1, 1, 1], &[-2, -2, -2])? != FieldElement::from_ratio(-1, 2) {
            return fail("omega_{0,3} coefficient".into());
        }
        let w11 = tr_omega(&data, 1, 1, 0)?;
        if w11.coeff(&[1], &[-4])? != FieldElement::from_ratio(-1, 16) {
            return fail("omega_{1,1} coefficient".into());
        }
        let w12 = tr_omega(&data, 1, 2, 0)?;
        if w12.coeff(&[1, 1], &[-6, -2])? != FieldElement::from_ratio(5, 32)
            || w12.coeff(&[1, 1], &[-4, -4])? != FieldElement::from_ratio(3, 32)
        {
            return fail("omega_{1,2} coefficients".into());
        }
        Ok("omega_{0,3}, omega_{0,4}, omega_{1,1}, omega_{1,2} reproduced exactly".into())
    };
    CheckResult::finish("airy golden values", t0, 1_000, run())
}

fn random_odd_times(rng: &mut ChaCha8Rng, order: i64) -> Vec<FieldElement> {
    let mut times = vec![FieldElement::zero(); order as usize];
    loop {
        times[0] = FieldElement::from_ratio(rng.gen_range(-3i64..=3), rng.gen_range(1i64..=2));
        if !times[0].is_zero() {
            break;
        }
    }
    let mut k = 3;
    while k <= order.min(9) {
        times[(k - 1) as usize] =
            FieldElement::from_ratio(rng.gen_range(-2i64..=2), rng.gen_range(1i64..=3));
        k += 2;
    }
    times
}

/// Criterion 2: recursion equals the KdV closed form on 5 seeded random
/// one-branch curves.
pub fn criterion_kdv_lemma(seed: u64) -> CheckResult {
    let t0 = Instant::now();
    let run = || -> Result<String> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let order = required_order(2, 1, 0);
        for trial in 0..5 {
            let times = random_odd_times(&mut rng, order);
            let data = LocalCurveData::one_branch(times.clone(), order)?;
            for (g, n) in [(0u32, 3usize), (0, 4), (1, 1), (1, 2), (2, 1)] {
                let engine = tr_omega(&data, g, n, 0)?;
                let lemma = kdv_closed_form(g, n, &times, 0)?;
                if !engine.agrees_with(&lemma) {
                    return fail(format!("trial {trial}: omega_({g},{n}) disagrees"));
                }
            }
        }
        Ok("5 random odd-times curves, (g,n) through (2,1), exact".into())
    };
    CheckResult::finish("kdv lemma", t0, 30_000, run())
}

/// Seeded random two-branch curve with sparse symmetric jumps.
pub fn random_symmetric_curve(seed: u64, order: i64) -> Result<LocalCurveData> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut times = Vec::new();
    for _ in 0..2 {
        times.push(random_odd_times(&mut rng, order));
    }
    let dim = (order + 1) as usize;
    let mut jumps = vec![vec![vec![vec![FieldElement::zero(); dim]; dim]; 2]; 2];
    for _ in 0..8 {
        let i = rng.gen_range(0..2usize);
        let j = rng.gen_range(0..2usize);
        let k = rng.gen_range(0..dim.min(7));
        let l = rng.gen_range(0..dim.min(7));
        let v = FieldElement::from_ratio(rng.gen_range(-2i64..=2), rng.gen_range(1i64..=3));
        jumps[i][j][k][l] = v.clone();
        jumps[j][i][l][k] = v;
    }
    LocalCurveData::new(2, None, times, jumps, order, order)
}

/// Criterion 3: the graph-sum theorem against the recursion on random
/// two-branch curves, all stable targets with `2g - 2 + n <= 3`.
pub fn criterion_graph_sum(seed: u64) -> CheckResult {
    let t0 = Instant::now();
    let run = || -> Result<String> {
        let t_cmp = 1i64;
        let order = required_order(2, 1, t_cmp);
        let targets = [(0u32, 3usize), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1)];
        for trial in 0..2 {
            let data = random_symmetric_curve(seed + trial, order)?;
            for &(g, n) in &targets {
                let direct = tr_omega(&data, g, n, t_cmp)?;
                let graphs = tr_graph_sum(&data, g, n)?;
                let resummed = evaluate_dxi_expansion(&graphs, &data, t_cmp)?;
                if !direct.agrees_with(&resummed) {
                    return fail(format!("trial {trial}: omega_({g},{n}) disagrees"));
                }
                let violations = direct.invariant_violations();
                if !violations.is_empty() {
                    return fail(format!(
                        "trial {trial}: omega_({g},{n}) invariants: {}",
                        violations.join("; ")
                    ));
                }
            }
        }
        Ok("graph sums match the recursion on random two-branch curves".into())
    };
    CheckResult::finish("graph-sum theorem", t0, 120_000, run())
}

/// Criterion 4: dictionary round trip and the Laplace factorization.
pub fn criterion_dictionary(seed: u64) -> CheckResult {
    let t0 = Instant::now();
    let run = || -> Result<String> {
        // the per-order draw makes the order-15 series extend the order-6 one
        let r6 = random_valid_r(seed, 2, 6);
        let r15 = random_valid_r(seed, 2, 15);
        let gd = GiventalData::new(r15, vec![FieldElement::one(), FieldElement::sqrt2()])?;
        let curve = curve_from_r(&gd)?;
        let back = r_from_curve(&curve)?;
        for k in 0..=6 {
            if back.mat(k)? != r6.mat(k)? {
                return fail(format!("round trip changed R_{k}"));
            }
        }
        let residual = curve.laplace_factor_check(6)?;
        if !residual.is_empty() {
            return fail(format!("Laplace residual: {}", residual[0]));
        }
        Ok("R -> curve -> R identity to order 6; factorization residual zero to bi-order 6"
            .into())
    };
    CheckResult::finish("dictionary round-trip", t0, 10_000, run())
}

/// Criterion 5: the main identification theorem. For random symplectic `R`
/// and `Delta` drawn from `{1, 2, -1}`, the Givental graph sum equals the
/// curve graph sum pushed through the leaf change of basis, slot by slot.
pub fn criterion_main_theorem(seed: u64) -> CheckResult {
    let t0 = Instant::now();
    let run = || -> Result<String> {
        // Delta components drawn from {1, 2, -1}: square roots 1, sqrt2, i
        let delta_picks = [
            vec![FieldElement::one(), FieldElement::sqrt2()],
            vec![FieldElement::i(), FieldElement::one()],
        ];
        let r = random_valid_r(seed, 2, 13);
        let targets = [(0u32, 3usize), (0, 4), (0, 5), (1, 1), (1, 2), (1, 3), (2, 1)];
        let mut compared = 0usize;
        for sqrt_delta in delta_picks {
        let gd = GiventalData::new(r.clone(), sqrt_delta)?;
        let curve = curve_from_r(&gd)?;
        for &(g, n) in &targets {
            let curve_side = dxi_to_w(&tr_graph_sum(&curve, g, n)?, &gd.r)?;
            let givental_side = givental_correlator_table(&gd, g, n)?;
            for (key, lhs) in &givental_side.entries {
                if key.iter().any(|&(_, d)| d > 3) {
                    continue; // criterion caps descendant depth at 3
                }
                let rhs = curve_side.coeff(key);
                if *lhs != rhs {
                    return fail(format!(
                        "({g},{n}) insertions {key:?}: Givental {lhs} vs curve {rhs}"
                    ));
                }
                compared += 1;
            }
            for (key, rhs) in &curve_side.entries {
                if key.iter().any(|&(_, d)| d > 3) {
                    continue;
                }
                if givental_side.coeff(key) != *rhs {
                    return fail(format!("({g},{n}) missing Givental entry {key:?}"));
                }
            }
        }
        }
        Ok(format!("{compared} correlators agree across the dictionary"))
    };
    CheckResult::finish("main theorem", t0, 300_000, run())
}

/// Criterion 6: the CP1 f-matrix identification to order 8.
pub fn criterion_f_matrix() -> CheckResult {
    let t0 = Instant::now();
    let run = || -> Result<String> {
        let report = ns_f_matrix_check(8)?;
        if !report.is_empty() {
            return fail(report.join("; "));
        }
        Ok("f-matrix equals sum R_k 2^k (-w)^k to order 8".into())
    };
    CheckResult::finish("cp1 f-matrix pin", t0, 60_000, run())
}

/// Criterion 7: stationary residue coefficients against the closed forms
/// for all `0 <= a - c <= 10`.
pub fn criterion_u_residues() -> CheckResult {
    let t0 = Instant::now();
    let run = || -> Result<String> {
        for j in 1..=2usize {
            for c in 0..=4i64 {
                for a in c..=(c + 10) {
                    // u_residue_coeff verifies residue == closed form inside
                    let v = u_residue_coeff(j, a, c)?;
                    if v != u_residue_closed_form(j, a - c) {
                        return fail(format!("(j,a,c) = ({j},{a},{c})"));
                    }
                }
            }
        }
        Ok("residues match the closed forms for 0 <= a-c <= 10, both rows".into())
    };
    CheckResult::finish("cp1 residue coefficients", t0, 60_000, run())
}

/// Criterion 8: the Norbury-Scott theorem against the independent
/// partition-sum oracle on every stable multiset with `g <= 2`, `n <= 3`,
/// `a_j <= 6` meeting the parity constraint.
pub fn criterion_norbury_scott() -> CheckResult {
    let t0 = Instant::now();
    let run = || -> Result<String> {
        let mut pipeline = NsPipeline::new(2, 3)?;
        let mut cases = 0usize;
        for g in 0..=2u32 {
            for n in 1..=3usize {
                if 2 * g as i64 - 2 + n as i64 <= 0 {
                    continue;
                }
                // sorted multisets of descendants
                let mut stack: Vec<Vec<i64>> = vec![vec![]];
                for slot in 0..n {
                    let mut next = Vec::new();
                    for base in &stack {
                        let lo = base.last().copied().unwrap_or(0);
                        for a in lo..=6 {
                            let mut b = base.clone();
                            b.push(a);
                            next.push(b);
                        }
                    }
                    stack = next;
                    let _ = slot;
                }
                for a in stack {
                    let asum: i64 = a.iter().sum();
                    if (asum - 2 * g as i64 + 2) % 2 != 0 || asum - 2 * g as i64 + 2 < 0 {
                        continue;
                    }
                    let lhs = pipeline.stationary(g, &a)?;
                    let rhs = op_oracle(g, &a)?;
                    if lhs != rhs {
                        return fail(format!(
                            "g={g}, a={a:?}: pipeline {lhs} vs oracle {rhs}"
                        ));
                    }
                    cases += 1;
                }
            }
        }
        // the one-point family <tau_{2d-2}> = 1/(d!)^2 pins the oracle
        for d in 1..=3i64 {
            let v = op_oracle(0, &[2 * d - 2])?;
            let mut expect = rat_int(1);
            for j in 1..=d {
                expect = expect / rat_int(j) / rat_int(j);
            }
            if v != expect {
                return fail(format!("oracle one-point family at d={d}"));
            }
        }
        Ok(format!("{cases} stationary invariants agree with the oracle"))
    };
    CheckResult::finish("norbury-scott theorem", t0, 600_000, run())
}

/// Criterion 9: the property suites. Homogeneity under `lambda` in
/// `{2, i, 1+i}`, correlation-form invariants, `symplectic_check` on the
/// CP1 R series to order 10, and 100 random string/dilaton identities.
pub fn criterion_properties(seed: u64) -> CheckResult {
    let t0 = Instant::now();
    let run = || -> Result<String> {
        // homogeneity, exact
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x404);
        let order = required_order(1, 2, 0);
        let times = random_odd_times(&mut rng, order);
        let data = LocalCurveData::one_branch(times, order)?;
        let lambdas = [
            FieldElement::from_int(2),
            FieldElement::i(),
            FieldElement::one() + FieldElement::i(),
        ];
        for lam in &lambdas {
            let scaled = data.scale_y(lam)?;
            for (g, n) in [(0u32, 3usize), (1, 1), (1, 2)] {
                let base = tr_omega(&data, g, n, 0)?;
                let after = tr_omega(&scaled, g, n, 0)?;
                let expo = 2 - 2 * g as i64 - n as i64;
                if !after.agrees_with(&base.scale(&lam.pow(expo)?)) {
                    return fail(format!("homogeneity at lambda={lam}, ({g},{n})"));
                }
            }
        }
        // form invariants on a jumpy curve
        let data = random_symmetric_curve(seed ^ 0x77, required_order(1, 2, 0))?;
        for (g, n) in [(0u32, 3usize), (1, 1), (1, 2)] {
            let w = tr_omega(&data, g, n, 0)?;
            let violations = w.invariant_violations();
            if !violations.is_empty() {
                return fail(format!("({g},{n}): {}", violations.join("; ")));
            }
        }
        // cp1 R symplectic to order 10
        let report = symplectic_check(&cp1_r(10), 10)?;
        if !report.is_empty() {
            return fail(format!("cp1 R: {}", report[0]));
        }
        // string and dilaton equations on 100 random stable indices
        for _ in 0..100 {
            let g = rng.gen_range(0u32..=3);
            let n = rng.gen_range(1usize..=5);
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            let dim = 3 * g as i64 - 3 + n as i64;
            let mut ds = vec![0u32; n];
            for _ in 0..dim {
                let j = rng.gen_range(0..n);
                ds[j] += 1;
            }
            let base = intersection_number(g, &ds)?;
            let mut with0 = ds.clone();
            with0.push(0);
            let mut string = num_traits::Zero::zero();
            for j in 0..n {
                if ds[j] == 0 {
                    continue;
                }
                let mut lowered = ds.clone();
                lowered[j] -= 1;
                string += intersection_number(g, &lowered)?;
            }
            if intersection_number(g, &with0)? != string {
                return fail(format!("string equation at g={g}, ds={ds:?}"));
            }
            let mut with1 = ds.clone();
            with1.push(1);
            let dilaton = rat_int(2 * g as i64 - 2 + n as i64) * base;
            if intersection_number(g, &with1)? != dilaton {
                return fail(format!("dilaton equation at g={g}, ds={ds:?}"));
            }
        }
        Ok("homogeneity, form invariants, symplectic pin, string/dilaton all exact".into())
    };
    CheckResult::finish("property suites", t0, 300_000, run())
}

/// Run a named suite. Suites: `airy`, `kdv`, `graphsum`, `dictionary`,
/// `cp1`, `all`.
pub fn run_suite(suite: &str, seed: u64) -> Option<Vec<CheckResult>> {
    let results = match suite {
        "airy" => vec![criterion_airy_golden()],
        "kdv" => vec![criterion_kdv_lemma(seed)],
        "graphsum" => vec![criterion_graph_sum(seed)],
        "dictionary" => vec![criterion_dictionary(seed), criterion_main_theorem(seed)],
        "cp1" => vec![
            criterion_f_matrix(),
            criterion_u_residues(),
            criterion_norbury_scott(),
        ],
        "all" => vec![
            criterion_airy_golden(),
            criterion_kdv_lemma(seed),
            criterion_graph_sum(seed),
            criterion_dictionary(seed),
            criterion_main_theorem(seed),
            criterion_f_matrix(),
            criterion_u_residues(),
            criterion_norbury_scott(),
            criterion_properties(seed),
        ],
        _ => return None,
    };
    Some(results)
}
