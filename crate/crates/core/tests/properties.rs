//! Cross-cutting identities that tie independent computation paths
//! together: the psi-number recursion against the Airy engine over the full
//! small range, the dxi-expansion round trip on random curves, and the
//! Laplace-coefficient recursion on factorizable data.

use num_traits::Zero;

use localtr::check::random_symmetric_curve;
use localtr::curve::LocalCurveData;
use localtr::dictionary::{curve_from_r, GiventalData, RSeries};
use localtr::field::FieldElement;
use localtr::graphsum::{evaluate_dxi_expansion, expand_in_dxi, tr_graph_sum};
use localtr::recursion::{airy_closed_form, kdv_closed_form, required_order, tr_omega};

/// The DVV recursion and the topological recursion are independent routes
/// to every psi bracket: the Airy correlation functions are generated by
/// one and expanded by the other.
#[test]
fn psi_numbers_cross_method_g3_n5() {
    let one = FieldElement::one();
    for g in 0..=3u32 {
        for n in 1..=5usize {
            if 2 * g as i64 - 2 + n as i64 <= 0 {
                continue;
            }
            let data = LocalCurveData::airy(required_order(g, n, 0));
            let engine = tr_omega(&data, g, n, 0).unwrap();
            let brackets = airy_closed_form(g, n, &one, &one, 0).unwrap();
            assert!(engine.agrees_with(&brackets), "disagreement at ({g},{n})");
        }
    }
}

#[test]
fn expansion_exists_on_random_curves() {
    for seed in [5u64, 6, 7] {
        let data = random_symmetric_curve(seed, required_order(1, 2, 2)).unwrap();
        let form = tr_omega(&data, 1, 2, 2).unwrap();
        let exp = expand_in_dxi(&form, &data).unwrap();
        let back = evaluate_dxi_expansion(&exp, &data, form.trunc).unwrap();
        assert!(back.agrees_with(&form), "seed {seed}");
    }
}

#[test]
fn expansion_matches_graph_sum() {
    let data = random_symmetric_curve(11, required_order(1, 2, 1)).unwrap();
    let via_form = expand_in_dxi(&tr_omega(&data, 1, 2, 1).unwrap(), &data).unwrap();
    let via_graphs = tr_graph_sum(&data, 1, 2).unwrap();
    assert_eq!(via_form.entries, via_graphs.entries);
}

/// On curves admitting the rank-N factorization, the closed-form f-family
/// and the one built by the induction
/// `f_{d+1} = -u f_d - sum Bcheck_{d,0} f_0` coincide.
#[test]
fn f_family_recursion_on_factorizable_curves() {
    let r = localtr::dictionary::random_valid_r(17, 2, 13);
    let gd = GiventalData::new(r, vec![FieldElement::one(), FieldElement::one()]).unwrap();
    let curve = curve_from_r(&gd).unwrap();
    let order = 4;
    for i in 1..=2usize {
        for j in 1..=2usize {
            for d in 0..=2i64 {
                let direct = curve.f_series(i, d, j, order).unwrap();
                let recursive = curve.f_series_recursive(i, d, j, order).unwrap();
                for m in -d..=order {
                    assert_eq!(
                        direct.coeff(m).unwrap(),
                        recursive.coeff(m).unwrap(),
                        "f_{d}^{i}(w,{j}) at w^{m}"
                    );
                }
            }
        }
    }
}

/// The identity case: curve_from_r on R = I is an Airy-type curve on every
/// branch, and its graph sum collapses to rescaled intersection numbers.
#[test]
fn identity_dictionary_curve_is_airy_type() {
    let r = RSeries::identity(2, 9);
    let gd = GiventalData::new(r, vec![FieldElement::one(), FieldElement::one()]).unwrap();
    let curve = curve_from_r(&gd).unwrap();
    // h_1 = -1/2, all other data zero
    assert_eq!(curve.h(1, 1).unwrap(), FieldElement::from_ratio(-1, 2));
    assert_eq!(curve.h(1, 3).unwrap(), FieldElement::zero());
    assert_eq!(curve.checked_jump(1, 2, 0, 0).unwrap(), FieldElement::zero());
    let w = tr_omega(&curve, 1, 1, 0).unwrap();
    let h = vec![FieldElement::from_ratio(-1, 2)];
    let expect = kdv_closed_form(1, 1, &h, 0).unwrap();
    // branch-diagonal equality on each branch
    assert_eq!(
        w.coeff(&[1], &[-4]).unwrap(),
        expect.coeff(&[1], &[-4]).unwrap()
    );
    assert_eq!(
        w.coeff(&[2], &[-4]).unwrap(),
        expect.coeff(&[1], &[-4]).unwrap()
    );
}

/// Truncation monotonicity: recomputing at a higher order agrees with the
/// lower-order result on the overlap.
#[test]
fn truncation_monotonicity() {
    let data = random_symmetric_curve(23, required_order(1, 2, 4)).unwrap();
    let low = tr_omega(&data, 1, 2, 1).unwrap();
    let high = tr_omega(&data, 1, 2, 4).unwrap();
    for (key, v) in &low.entries {
        assert_eq!(high.coeff(&key.0, &key.1).unwrap(), v.clone());
    }
    for (key, v) in &high.entries {
        if key.1.iter().all(|&e| e <= low.trunc) {
            assert_eq!(low.coeff(&key.0, &key.1).unwrap(), v.clone());
        }
    }
}

/// The Norbury-Scott curve admits the rank-2 factorization: zero residual
/// through bi-order 6.
#[test]
fn ns_curve_factorizes_to_bi_order_6() {
    let curve = localtr::cp1::ns_curve(14).unwrap();
    let report = curve.laplace_factor_check(6).unwrap();
    assert!(report.is_empty(), "{report:?}");
}

/// Generic jump data does not factorize; the residual report says so.
#[test]
fn generic_jumps_fail_factorization() {
    let data = random_symmetric_curve(31, 14).unwrap();
    let report = data.laplace_factor_check(2).unwrap();
    assert!(!report.is_empty());
    assert!(report[0].contains("factorization residual"));
}

/// The main theorem on the CP1 Givental data itself: the R-matrix graph
/// sum against the dictionary-converted curve graph sum at (0,3).
#[test]
fn main_theorem_on_cp1_data() {
    use localtr::graphsum::{dxi_to_w, givental_correlator_table};
    let gd = localtr::cp1::Cp1Data::origin().givental_data(13).unwrap();
    let curve = curve_from_r(&gd).unwrap();
    let curve_side = dxi_to_w(&tr_graph_sum(&curve, 0, 3).unwrap(), &gd.r).unwrap();
    let givental_side = givental_correlator_table(&gd, 0, 3).unwrap();
    assert_eq!(curve_side.entries, givental_side.entries);
    assert!(!givental_side
        .coeff(&[(1, 0), (1, 0), (1, 0)])
        .is_zero());
}

#[test]
fn stationary_is_symmetric_in_insertions() {
    let mut p = localtr::cp1::NsPipeline::new(1, 2).unwrap();
    let v1 = p.stationary(1, &[3, 1]).unwrap();
    let v2 = p.stationary(1, &[1, 3]).unwrap();
    assert_eq!(v1, v2);
}

/// KdV lemma beyond the acceptance pairs: every stable target with
/// `2g - 2 + n <= 4` on a one-branch curve with several odd times.
#[test]
fn kdv_lemma_full_range() {
    let order = localtr::recursion::required_order(2, 2, 0);
    let mut times = vec![FieldElement::zero(); order as usize];
    times[0] = FieldElement::from_ratio(2, 3);
    times[2] = FieldElement::from_ratio(-1, 2);
    times[4] = FieldElement::from_int(1);
    times[6] = FieldElement::from_ratio(1, 5);
    let data = LocalCurveData::one_branch(times.clone(), order).unwrap();
    for (g, n) in [
        (0u32, 3usize),
        (0, 4),
        (0, 5),
        (0, 6),
        (1, 1),
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 1),
        (2, 2),
    ] {
        let engine = tr_omega(&data, g, n, 0).unwrap();
        let lemma = kdv_closed_form(g, n, &times, 0).unwrap();
        assert!(engine.agrees_with(&lemma), "({g},{n})");
    }
}

/// Tampering with a coefficient breaks the expansion and the remainder
/// check says so.
#[test]
fn tampered_form_fails_expansion() {
    let data = random_symmetric_curve(41, localtr::recursion::required_order(1, 1, 1)).unwrap();
    let mut form = tr_omega(&data, 1, 1, 1).unwrap();
    let key = (vec![1u8], vec![0i64]);
    let bumped = &form.entries.get(&key).cloned().unwrap_or_else(FieldElement::zero)
        + &FieldElement::one();
    form.entries.insert(key, bumped);
    match expand_in_dxi(&form, &data) {
        Err(localtr::Error::ExpansionResidual(_)) => {}
        other => panic!("expected ExpansionResidual, got {other:?}"),
    }
}

/// The kernel-sign convention flag flips odd-point extractions by -1 and
/// leaves even-point ones alone.
#[test]
fn kernel_sign_flag() {
    let mut p = localtr::cp1::NsPipeline::new(1, 2).unwrap();
    let with_flip = p.stationary(1, &[2]).unwrap();
    let even = p.stationary(1, &[2, 2]).unwrap();
    assert!(!even.is_zero());
    p.ns_kernel_sign = false;
    assert_eq!(p.stationary(1, &[2]).unwrap(), -with_flip);
    assert_eq!(p.stationary(1, &[2, 2]).unwrap(), even);
}
