//! The two weight systems on decorated stable graphs: the spectral-curve
//! side (checked times and jumps, `dxi` leaf basis) and the Givental side
//! (R-matrix leaves and edges, `Delta`-weighted vertices), together with the
//! change of basis between the leaf markings.
//!
//! `hbar` is never a stored symbol: the genus grading is explicit in every
//! record and checked against the Euler identity during enumeration.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::combin::double_factorial_odd;
use crate::curve::LocalCurveData;
use crate::dictionary::{bcheck_from_r, symplectic_check, GiventalData, RSeries};
use crate::error::{Error, Result};
use crate::field::{FieldElement, Rat};
use crate::graphs::{enumerate_graphs, DecoratedGraph};
use crate::psi::intersection_number;
use crate::recursion::CorrelationForm;

/// Coefficients of `prod_k dxi^{i_k}_{d_k}(z_k)`: one `(branch, descendant)`
/// pair per external slot. Also reused for the W-basis coefficients after
/// the triangular change of variables.
#[derive(Clone, Debug)]
pub struct DxiExpansion {
    pub g: u32,
    pub n: usize,
    pub n_branch: usize,
    pub entries: BTreeMap<Vec<(u8, i64)>, FieldElement>,
}

impl DxiExpansion {
    pub fn new(g: u32, n: usize, n_branch: usize) -> Self {
        DxiExpansion { g, n, n_branch, entries: BTreeMap::new() }
    }

    pub fn add(&mut self, key: Vec<(u8, i64)>, v: FieldElement) {
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry(key).or_insert_with(FieldElement::zero);
        *slot += &v;
    }

    pub fn prune_zeros(&mut self) {
        self.entries.retain(|_, v| !v.is_zero());
    }

    pub fn coeff(&self, key: &[(u8, i64)]) -> FieldElement {
        self.entries
            .get(key)
            .cloned()
            .unwrap_or_else(FieldElement::zero)
    }
}

fn df(m: i64) -> Rat {
    Rat::from_integer(double_factorial_odd(m))
}

/// Per-vertex data shared by both weight systems: all half-edge labels (for
/// the psi bracket) and the valence.
fn vertex_labels(graph: &DecoratedGraph) -> Vec<(Vec<u32>, usize)> {
    let mut labels: Vec<Vec<u32>> = vec![Vec::new(); graph.vertices.len()];
    for e in &graph.edges {
        labels[e.v1].push(e.k1 as u32);
        labels[e.v2].push(e.k2 as u32);
    }
    for &(v, k) in &graph.leaves {
        labels[v].push(k as u32);
    }
    for &(v, k) in &graph.dilaton {
        labels[v].push(k as u32);
    }
    labels
        .into_iter()
        .map(|l| {
            let val = l.len();
            (l, val)
        })
        .collect()
}

/// Spectral-curve weight of one decorated graph, including `1/|Aut|`:
/// vertices `(-2 h_1)^{2-2g_v-val}` times the psi bracket, edges by checked
/// jumps, dilaton leaves by checked times. Leaf factors are carried in the
/// expansion key, not here.
fn curve_graph_weight(data: &LocalCurveData, graph: &DecoratedGraph) -> Result<FieldElement> {
    let mut w = FieldElement::one();
    for (v, (labels, val)) in vertex_labels(graph).iter().enumerate() {
        let (gv, iv) = graph.vertices[v];
        let bracket = intersection_number(gv, labels)?;
        if bracket.is_zero() {
            return Ok(FieldElement::zero());
        }
        let h1 = data.h(iv as usize, 1)?;
        let base = h1.scale_rat(&Rat::from_integer((-2).into()));
        let expo = 2 - 2 * gv as i64 - *val as i64;
        w = w * base.pow(expo)?.scale_rat(&bracket);
    }
    for e in &graph.edges {
        let (_, i1) = graph.vertices[e.v1];
        let (_, i2) = graph.vertices[e.v2];
        let b = data.checked_jump(i1 as usize, i2 as usize, e.k1, e.k2)?;
        if b.is_zero() {
            return Ok(FieldElement::zero());
        }
        w = w * b;
    }
    for &(v, k) in &graph.dilaton {
        let (_, iv) = graph.vertices[v];
        let h = data.checked_time(iv as usize, k)?;
        if h.is_zero() {
            return Ok(FieldElement::zero());
        }
        w = w * h;
    }
    Ok(w.scale_rat(&Rat::new(1.into(), graph.aut.into())))
}

/// Per-graph weight breakdown for debugging output: every enumerated graph
/// with its curve-side weight (zero-weight graphs included).
pub fn graph_weight_breakdown(
    data: &LocalCurveData,
    g: u32,
    n: usize,
) -> Result<Vec<(DecoratedGraph, FieldElement)>> {
    let graphs = enumerate_graphs(g, n, data.n_branch())?;
    let mut out = Vec::with_capacity(graphs.len());
    for graph in graphs.iter() {
        out.push((graph.clone(), curve_graph_weight(data, graph)?));
    }
    Ok(out)
}

/// Graph-sum form of `omega_{g,n}`: coefficients of the `dxi` leaf basis.
pub fn tr_graph_sum(data: &LocalCurveData, g: u32, n: usize) -> Result<DxiExpansion> {
    data.validated()?;
    let max_label = (3 * g as i64 - 3 + n as i64).max(0);
    if data.t_b() < 2 * max_label || data.t_y() < 2 * (max_label + 1) - 1 {
        return Err(Error::InsufficientTruncation(format!(
            "graph sum at ({g},{n}) needs jumps to {} and times to {}",
            2 * max_label,
            2 * (max_label + 1) - 1
        )));
    }
    let graphs = enumerate_graphs(g, n, data.n_branch())?;
    let mut out = DxiExpansion::new(g, n, data.n_branch());
    for graph in graphs.iter() {
        let w = curve_graph_weight(data, graph)?;
        if w.is_zero() {
            continue;
        }
        let key: Vec<(u8, i64)> = graph
            .leaves
            .iter()
            .map(|&(v, k)| (graph.vertices[v].1, k))
            .collect();
        out.add(key, w);
    }
    out.prune_zeros();
    Ok(out)
}

/// Evaluate an expansion back to a correlation form by expanding every
/// `dxi^i_d(z, j)` over all branch assignments, to regular order `trunc`.
pub fn evaluate_dxi_expansion(
    exp: &DxiExpansion,
    data: &LocalCurveData,
    trunc: i64,
) -> Result<CorrelationForm> {
    let nb = data.n_branch();
    let pole = 6 * exp.g as i64 - 4 + 2 * exp.n as i64;
    let mut form = CorrelationForm::new(exp.g, exp.n, nb, pole, trunc);
    for (key, c) in &exp.entries {
        // partial products slot by slot
        let mut partial: Vec<(Vec<u8>, Vec<i64>, FieldElement)> =
            vec![(Vec::new(), Vec::new(), c.clone())];
        for &(i, d) in key {
            let mut next = Vec::new();
            for j in 1..=nb {
                let dxi = data.dxi_series(i as usize, d, j, trunc)?;
                for (e, coeff) in dxi.terms() {
                    for (bs, es, acc) in &partial {
                        let mut bs2 = bs.clone();
                        let mut es2 = es.clone();
                        bs2.push(j as u8);
                        es2.push(e);
                        next.push((bs2, es2, acc * coeff));
                    }
                }
            }
            partial = next;
        }
        for (bs, es, v) in partial {
            form.add((bs, es), v);
        }
    }
    form.prune_zeros();
    Ok(form)
}

/// Recover the `dxi` coefficients of a correlation form from its principal
/// parts: the all-singular monomials identify each `(branch, descendant)`
/// assignment directly, and the reconstruction must reproduce the whole
/// form, regular tails included, or the expansion does not exist.
pub fn expand_in_dxi(form: &CorrelationForm, data: &LocalCurveData) -> Result<DxiExpansion> {
    let mut exp = DxiExpansion::new(form.g, form.n, form.n_branch);
    for ((bs, es), c) in &form.entries {
        if es.iter().any(|&e| e > -2 || e % 2 != 0) {
            continue;
        }
        let mut key = Vec::with_capacity(form.n);
        let mut scale = Rat::from_integer(1.into());
        for (b, e) in bs.iter().zip(es) {
            let d = (-e - 2) / 2;
            key.push((*b, d));
            scale *= df(2 * d + 1);
        }
        exp.add(key, c.scale_rat(&scale.recip()));
    }
    exp.prune_zeros();
    let back = evaluate_dxi_expansion(&exp, data, form.trunc)?;
    if !back.agrees_with(form) {
        return Err(Error::ExpansionResidual(format!(
            "dxi reconstruction of omega_({},{}) leaves a nonzero remainder",
            form.g, form.n
        )));
    }
    Ok(exp)
}

/// Triangular change of leaf basis
/// `dxi^i_k -> sum_l (-1)^{k-l} (R_{k-l})^i_s X^s_l`, applied to every slot.
pub fn dxi_to_w(exp: &DxiExpansion, r: &RSeries) -> Result<DxiExpansion> {
    substitute_leaves(exp, r)
}

/// Inverse of [`dxi_to_w`], via the series inverse of `R`.
pub fn w_to_dxi(exp: &DxiExpansion, r: &RSeries) -> Result<DxiExpansion> {
    substitute_leaves(exp, &r.inverse_series())
}

fn substitute_leaves(exp: &DxiExpansion, r: &RSeries) -> Result<DxiExpansion> {
    let mut out = DxiExpansion::new(exp.g, exp.n, exp.n_branch);
    for (key, c) in &exp.entries {
        let mut partial: Vec<(Vec<(u8, i64)>, FieldElement)> = vec![(Vec::new(), c.clone())];
        for &(i, k) in key {
            let mut next = Vec::new();
            for l in 0..=k {
                let sign = if (k - l) % 2 == 0 { 1 } else { -1 };
                for s in 1..=r.dim() {
                    let m = r.ul(k - l, i as usize, s)?;
                    if m.is_zero() {
                        continue;
                    }
                    let m = m.scale_rat(&Rat::from_integer(sign.into()));
                    for (ks, acc) in &partial {
                        let mut ks2 = ks.clone();
                        ks2.push((s as u8, l));
                        next.push((ks2, acc * &m));
                    }
                }
            }
            partial = next;
        }
        for (k2, v) in partial {
            out.add(k2, v);
        }
    }
    out.prune_zeros();
    Ok(out)
}

/// Givental edge weight
/// `E^{i1,i2}_{k1,k2} = [z^{k1} w^{k2}] (delta - sum_s R(-z)^{i1}_s R(-w)^{i2}_s)/(z+w)`,
/// with an explicit divisibility check on the `w = -z` specialization.
pub fn edge_weight(r: &RSeries, i1: usize, i2: usize, k1: i64, k2: i64) -> Result<FieldElement> {
    for m in 0..=(k1 + k2 + 1).min(r.order()) {
        let mut spec = FieldElement::zero();
        for a in 0..=m {
            let b = m - a;
            let mut acc = FieldElement::zero();
            for s in 1..=r.dim() {
                acc += &(&r.ul(a, i1, s)? * &r.ul(b, i2, s)?);
            }
            // N_{a,b} with z -> -w: sign (-1)^a on top of the (-1)^{a+b}
            let sign = if b % 2 == 0 { -1 } else { 1 };
            spec += &acc.scale_rat(&Rat::from_integer(sign.into()));
        }
        if m == 0 && i1 == i2 {
            spec += &FieldElement::one();
        }
        if !spec.is_zero() {
            return Err(Error::NotDivisible(format!(
                "numerator nonzero on z = -w at order {m} for (i1,i2)=({i1},{i2})"
            )));
        }
    }
    bcheck_from_r(r, i1, i2, k1, k2)
}

/// All connected ancestor correlators of `R-hat Delta-hat T` at `(g, n)` in
/// normalized canonical coordinates, keyed by the slotted insertion tuple
/// `(i_j, d_j)`; each graph weight is computed once and distributed over
/// every insertion its leaves reach.
pub fn givental_correlator_table(gd: &GiventalData, g: u32, n: usize) -> Result<DxiExpansion> {
    if 2 * g as i64 - 2 + n as i64 <= 0 {
        return Err(Error::InvalidTarget(format!("unstable target ({g},{n})")));
    }
    let max_label = 3 * g as i64 - 3 + n as i64 + 1;
    if gd.r.order() < max_label + 1 {
        return Err(Error::InsufficientTruncation(format!(
            "Givental graph sum at ({g},{n}) needs R to order {}",
            max_label + 1
        )));
    }
    let report = symplectic_check(&gd.r, (2 * max_label + 1).min(gd.r.order()))?;
    if !report.is_empty() {
        return Err(Error::NotSymplectic(report.join("; ")));
    }
    let graphs = enumerate_graphs(g, n, gd.r.dim())?;
    let mut out = DxiExpansion::new(g, n, gd.r.dim());
    'graphs: for graph in graphs.iter() {
        let mut w = FieldElement::one();
        for (v, (labels, val)) in vertex_labels(graph).iter().enumerate() {
            let (gv, iv) = graph.vertices[v];
            let bracket = intersection_number(gv, labels)?;
            if bracket.is_zero() {
                continue 'graphs;
            }
            let expo = 2 * gv as i64 - 2 + *val as i64;
            w = w * gd.sqrt_delta[iv as usize - 1].pow(expo)?.scale_rat(&bracket);
        }
        for e in &graph.edges {
            let (_, i1) = graph.vertices[e.v1];
            let (_, i2) = graph.vertices[e.v2];
            let ew = edge_weight(&gd.r, i1 as usize, i2 as usize, e.k1, e.k2)?;
            if ew.is_zero() {
                continue 'graphs;
            }
            w = w * ew;
        }
        for &(v, k) in &graph.dilaton {
            let (_, iv) = graph.vertices[v];
            let dw = gd.dilaton_weight(iv as usize, k)?;
            if dw.is_zero() {
                continue 'graphs;
            }
            w = w * dw;
        }
        w = w.scale_rat(&Rat::new(1.into(), graph.aut.into()));
        // distribute over insertions: a leaf (iv, k) contributes
        // (-1)^{k-d} (R_{k-d})^{iv}_{i} to the slot insertion (i, d)
        let mut partial: Vec<(Vec<(u8, i64)>, FieldElement)> = vec![(Vec::new(), w)];
        for &(v, k) in &graph.leaves {
            let (_, iv) = graph.vertices[v];
            let mut next = Vec::new();
            for d in 0..=k {
                let sign = if (k - d) % 2 == 0 { 1 } else { -1 };
                for i in 1..=gd.r.dim() {
                    let m = gd.r.ul(k - d, iv as usize, i)?;
                    if m.is_zero() {
                        continue;
                    }
                    let m = m.scale_rat(&Rat::from_integer(sign.into()));
                    for (key, acc) in &partial {
                        let mut key2 = key.clone();
                        key2.push((i as u8, d));
                        next.push((key2, acc * &m));
                    }
                }
            }
            partial = next;
        }
        for (key, v) in partial {
            out.add(key, v);
        }
    }
    out.prune_zeros();
    Ok(out)
}

/// Connected ancestor correlator at a single slotted insertion tuple
/// `(d_j, i_j)`: the coefficient of `prod_j v^{d_j, i_j}`.
pub fn givental_graph_sum(
    gd: &GiventalData,
    g: u32,
    insertions: &[(i64, u8)],
) -> Result<FieldElement> {
    let table = givental_correlator_table(gd, g, insertions.len())?;
    let key: Vec<(u8, i64)> = insertions.iter().map(|&(d, i)| (i, d)).collect();
    Ok(table.coeff(&key))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dictionary::random_valid_r;
    use crate::field::rat_i64;
    use crate::recursion::{required_order, tr_omega};

    fn fr(n: i64, d: i64) -> FieldElement {
        FieldElement::from_ratio(n, d)
    }

    #[test]
    fn airy_graph_sum_03_and_11() {
        let data = LocalCurveData::airy(8);
        let e03 = tr_graph_sum(&data, 0, 3).unwrap();
        assert_eq!(e03.entries.len(), 1);
        assert_eq!(e03.coeff(&[(1, 0), (1, 0), (1, 0)]), fr(-1, 2));

        let e11 = tr_graph_sum(&data, 1, 1).unwrap();
        assert_eq!(e11.entries.len(), 1);
        assert_eq!(e11.coeff(&[(1, 1)]), fr(-1, 48));
        // expanding dxi_1 = 3/z^4 reproduces omega_{1,1}
        let form = evaluate_dxi_expansion(&e11, &data, 0).unwrap();
        assert_eq!(form.coeff(&[1], &[-4]).unwrap(), fr(-1, 16));
    }

    #[test]
    fn graph_sum_equals_recursion_airy() {
        for (g, n) in [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1)] {
            let data = LocalCurveData::airy(required_order(g, n, 0));
            let via_graphs =
                evaluate_dxi_expansion(&tr_graph_sum(&data, g, n).unwrap(), &data, 0).unwrap();
            let via_recursion = tr_omega(&data, g, n, 0).unwrap();
            assert!(via_graphs.agrees_with(&via_recursion), "({g},{n})");
        }
    }

    #[test]
    fn expand_round_trip_airy() {
        let data = LocalCurveData::airy(required_order(1, 2, 0));
        let form = tr_omega(&data, 1, 2, 0).unwrap();
        let exp = expand_in_dxi(&form, &data).unwrap();
        let back = evaluate_dxi_expansion(&exp, &data, 0).unwrap();
        assert!(back.agrees_with(&form));
    }

    #[test]
    fn identity_r_reduces_to_kdv_product() {
        // R = I, Delta = 1: single-vertex graphs on one branch each; the
        // correlator is the bare intersection number, branch-diagonal.
        let r = RSeries::identity(2, 6);
        let gd = GiventalData::new(r, vec![FieldElement::one(), FieldElement::one()]).unwrap();
        let v = givental_graph_sum(&gd, 0, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(v, FieldElement::one());
        // mixed branches vanish for R = I
        let v = givental_graph_sum(&gd, 0, &[(0, 1), (0, 1), (0, 2)]).unwrap();
        assert!(v.is_zero());
        // <tau_1>_1 = 1/24 on either branch
        let v = givental_graph_sum(&gd, 1, &[(1, 2)]).unwrap();
        assert_eq!(v, fr(1, 24));
    }

    #[test]
    fn delta_rescales_single_vertex() {
        let r = RSeries::identity(2, 6);
        let s2 = FieldElement::sqrt2();
        let gd = GiventalData::new(r, vec![s2.clone(), FieldElement::one()]).unwrap();
        // genus 0, n = 3 on branch 1: Delta^{(2g-2+n)/2} = sqrt2
        let v = givental_graph_sum(&gd, 0, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(v, s2);
    }

    #[test]
    fn edge_weights_match_hand_expansion() {
        // R = exp(r1 z), r1 symmetric: E_{0,0} = r1
        let r = random_valid_r(21, 2, 5);
        let r1 = r.mat(1).unwrap().clone();
        for i1 in 1..=2usize {
            for i2 in 1..=2usize {
                let e = edge_weight(&r, i1, i2, 0, 0).unwrap();
                assert_eq!(e, r1[i2 - 1][i1 - 1]);
                // symmetry under swapping both pairs
                let es = edge_weight(&r, i2, i1, 0, 0).unwrap();
                assert_eq!(e, es);
            }
        }
        let e12 = edge_weight(&r, 1, 2, 2, 1).unwrap();
        let e21 = edge_weight(&r, 2, 1, 1, 2).unwrap();
        assert_eq!(e12, e21);
        // identity R has zero edge weights
        let id = RSeries::identity(2, 4);
        assert!(edge_weight(&id, 1, 2, 1, 1).unwrap().is_zero());
    }

    #[test]
    fn leaf_substitution_round_trip() {
        let r = random_valid_r(33, 2, 7);
        let data = LocalCurveData::airy(10);
        let mut exp = tr_graph_sum(&data, 1, 2).unwrap();
        // fake a two-branch expansion by reusing keys on branch 2
        let extra: Vec<_> = exp
            .entries
            .iter()
            .map(|(k, v)| {
                let k2: Vec<(u8, i64)> = k.iter().map(|&(_, d)| (2u8, d)).collect();
                (k2, v.scale_rat(&rat_i64(3, 7)))
            })
            .collect();
        for (k, v) in extra {
            exp.add(k, v);
        }
        exp.n_branch = 2;
        let w = dxi_to_w(&exp, &r).unwrap();
        let back = w_to_dxi(&w, &r).unwrap();
        assert_eq!(back.entries, exp.entries);
    }

    #[test]
    fn depth_zero_expansions_are_fixed_points() {
        // R_0 = I, so an expansion supported on descendant depth zero maps
        // to itself
        let r = random_valid_r(35, 2, 5);
        let mut exp = DxiExpansion::new(0, 3, 2);
        exp.add(vec![(1, 0), (2, 0), (1, 0)], fr(5, 3));
        exp.add(vec![(2, 0), (2, 0), (2, 0)], fr(-1, 7));
        let w = dxi_to_w(&exp, &r).unwrap();
        assert_eq!(w.entries, exp.entries);
    }
}
