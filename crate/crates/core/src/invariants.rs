//! Numeric invariants from resolution data: multiplicities N and ν,
//! discrepancies, log-canonical threshold, intersection matrix with
//! self-intersections, dual graph, and the normal-crossing Bernstein–Sato
//! polynomial.

use std::collections::BTreeMap;

use num_traits::One;
use serde_json::{json, Value};

use crate::divisors::{
    abstract_final_charts, curve_shape_of_locus, radical_equal, transport, CurveShape,
    DivisorTable,
};
use crate::error::Error;
use crate::ideal::Ideal;
use crate::poly::{Poly, Rat};
use crate::resolve::ChartTree;
use crate::univar::UnivariatePoly;
use crate::Result;

/// Per global divisor label an integer ≥ 1, plus a final entry for the
/// strict transform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityVector(pub Vec<u32>);

impl MultiplicityVector {
    /// Entries of the exceptional divisors (everything but the last).
    pub fn exceptional(&self) -> &[u32] {
        &self.0[..self.0.len() - 1]
    }

    /// The strict-transform entry.
    pub fn strict(&self) -> u32 {
        *self.0.last().expect("non-empty multiplicity vector")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscrepancyKind {
    Log,
    Plain,
}

/// Collect one value per divisor from every final chart where it is visible
/// and insist the values agree.
fn per_divisor_consistent<F>(
    t: &ChartTree,
    d: &DivisorTable,
    what: &str,
    value: F,
) -> Result<Vec<u32>>
where
    F: Fn(usize, usize) -> u32, // (chart id, slot) -> value
{
    let mut seen: Vec<BTreeMap<u32, Vec<usize>>> = vec![BTreeMap::new(); d.divisor_count];
    for id in t.final_chart_ids() {
        for (slot, &label) in d.rows[&id].iter().enumerate() {
            if label != 0 {
                seen[label - 1].entry(value(id, slot)).or_default().push(id);
            }
        }
    }
    let mut out = Vec::with_capacity(d.divisor_count);
    for (idx, values) in seen.iter().enumerate() {
        match values.len() {
            0 => {
                return Err(Error::Inconsistent(format!(
                    "divisor {} not visible in any final chart",
                    idx + 1
                )))
            }
            1 => out.push(*values.keys().next().unwrap()),
            _ => {
                return Err(Error::Inconsistent(format!(
                    "{what} of divisor {} differs across charts: {values:?}",
                    idx + 1
                )))
            }
        }
    }
    Ok(out)
}

/// Multiplicity N(E_j) of each divisor in the divisor of f ∘ π, with the
/// strict transform's multiplicity appended.
pub fn multiplicities_n(t: &ChartTree, d: &DivisorTable) -> Result<MultiplicityVector> {
    let f = &t.input.gens()[0];
    let mut v = per_divisor_consistent(t, d, "multiplicity N", |id, slot| {
        let c = t.chart(id);
        c.map_to_root.apply(f).div_exponent(c.exc_gen(slot).unwrap()).0
    })?;
    // strict-transform entry, from any final chart where the strict is visible
    let mut strict_vals: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for id in t.final_chart_ids() {
        let c = t.chart(id);
        if let Some(g) = c.strict_gen() {
            strict_vals
                .entry(c.map_to_root.apply(f).div_exponent(g).0)
                .or_default()
                .push(id);
        }
    }
    match strict_vals.len() {
        0 => v.push(1),
        1 => v.push(*strict_vals.keys().next().unwrap()),
        _ => {
            return Err(Error::Inconsistent(format!(
                "multiplicity N of the strict transform differs across charts: {strict_vals:?}"
            )))
        }
    }
    Ok(MultiplicityVector(v))
}

/// Multiplicity ν(E_j) = 1 + (multiplicity of E_j in the relative canonical
/// divisor), read off the Jacobian determinant of the chart map; the
/// strict-transform entry is 1.
pub fn multiplicities_nu(t: &ChartTree, d: &DivisorTable) -> Result<MultiplicityVector> {
    let mut v = per_divisor_consistent(t, d, "multiplicity nu", |id, slot| {
        let c = t.chart(id);
        let jac = c.map_to_root.jacobian_det().expect("square chart map");
        1 + jac.div_exponent(c.exc_gen(slot).unwrap()).0
    })?;
    v.push(1);
    Ok(MultiplicityVector(v))
}

/// Log-discrepancies ν_j − N_j, or the plain variant ν_j − N_j − 1, per
/// exceptional divisor.
pub fn discrepancies(t: &ChartTree, d: &DivisorTable, kind: DiscrepancyKind) -> Result<Vec<i64>> {
    let n = multiplicities_n(t, d)?;
    let nu = multiplicities_nu(t, d)?;
    let shift = match kind {
        DiscrepancyKind::Log => 0,
        DiscrepancyKind::Plain => 1,
    };
    Ok(nu
        .exceptional()
        .iter()
        .zip(n.exceptional())
        .map(|(&a, &b)| a as i64 - b as i64 - shift)
        .collect())
}

/// Log-canonical threshold: minimum of ν/N over the exceptional divisors,
/// additionally over the strict transform (ratio 1) when `include_strict`.
pub fn lct(t: &ChartTree, d: &DivisorTable, include_strict: bool) -> Result<Rat> {
    let n = multiplicities_n(t, d)?;
    let nu = multiplicities_nu(t, d)?;
    let mut best: Option<Rat> = if include_strict { Some(Rat::one()) } else { None };
    for (&a, &b) in nu.exceptional().iter().zip(n.exceptional()) {
        let q = Rat::new((a as i64).into(), (b as i64).into());
        if best.as_ref().map_or(true, |m| &q < m) {
            best = Some(q);
        }
    }
    Ok(best.unwrap_or_else(Rat::one))
}

/// The Bernstein–Sato polynomial of a normal-crossing product
/// ∏ x_i^{r_i}: b(s) = ∏_i ∏_{k=1}^{r_i} (r_i·s + k), expanded.
pub fn bernstein_normal_crossing(r: &[u32]) -> UnivariatePoly {
    let mut b = UnivariatePoly::one();
    for &ri in r {
        assert!(ri >= 1, "multiplicities must be positive");
        for k in 1..=ri {
            b = &b * &UnivariatePoly::linear(k as i64, ri as i64);
        }
    }
    b
}

/// Intersection matrix over the C-irreducible exceptional curves of the
/// abstract resolution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix {
    /// Per row: (divisor label, C-component number 1-based).
    pub labels: Vec<(usize, usize)>,
    pub entries: Vec<Vec<i64>>,
}

/// Dual graph of the resolution: one vertex per exceptional curve with its
/// self-intersection, one edge per intersection point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraph {
    pub self_intersections: Vec<i64>,
    pub edges: Vec<(usize, usize)>,
}

/// A 0-dimensional intersection scheme visible in one chart.
#[derive(Clone)]
pub(crate) struct Cluster {
    pub(crate) chart: usize,
    pub(crate) ideal: Ideal,
    pub(crate) length: u64,
}

pub(crate) fn same_cluster(t: &ChartTree, a: &Cluster, b: &Cluster) -> bool {
    if a.length != b.length {
        return false;
    }
    if a.chart == b.chart {
        return a.ideal.equals(&b.ideal);
    }
    let ab = transport(t, a.chart, b.chart, &a.ideal);
    let ba = transport(t, b.chart, a.chart, &b.ideal);
    radical_equal(&ab, &b.ideal) && radical_equal(&ba, &a.ideal)
}

/// Keep one representative per global scheme.
pub(crate) fn dedup_clusters(t: &ChartTree, clusters: Vec<Cluster>) -> Vec<Cluster> {
    let mut reps: Vec<Cluster> = Vec::new();
    'outer: for c in clusters {
        for r in &reps {
            if same_cluster(t, r, &c) {
                continue 'outer;
            }
        }
        reps.push(c);
    }
    reps
}

pub(crate) fn cluster_of(c: &crate::blowup::Chart, gens: Vec<Poly>) -> Result<Option<Cluster>> {
    let i = Ideal::new(&c.ring, gens);
    let dim = i.dimension();
    if dim < 0 {
        return Ok(None);
    }
    if dim > 0 {
        return Err(Error::UnsupportedShape(format!(
            "intersection scheme in chart {} is not finite",
            c.id
        )));
    }
    let length = i.quotient_length().ok_or_else(|| {
        Error::UnsupportedShape(format!("cannot measure scheme length in chart {}", c.id))
    })?;
    Ok(Some(Cluster {
        chart: c.id,
        ideal: i,
        length,
    }))
}

/// Distribute the length of one intersection cluster between two divisors'
/// C-components onto the matrix; `rows`/`cols` are the curve indices of the
/// two divisors' components.
fn attribute(
    m: &mut [Vec<i64>],
    rows: &[usize],
    cols: &[usize],
    length: u64,
) -> Result<()> {
    let add = |m: &mut [Vec<i64>], i: usize, j: usize, v: i64| {
        m[i][j] += v;
        m[j][i] += v;
    };
    match (rows.len(), cols.len()) {
        (1, 1) => add(m, rows[0], cols[0], length as i64),
        (2, 2) if length == 2 => {
            // one conjugate pair of points, each on matching conjugate
            // components
            add(m, rows[0], cols[0], 1);
            add(m, rows[1], cols[1], 1);
        }
        (1, 2) | (2, 1) if length == 2 => {
            let (single, pair) = if rows.len() == 1 {
                (rows[0], cols)
            } else {
                (cols[0], rows)
            };
            add(m, single, pair[0], 1);
            add(m, single, pair[1], 1);
        }
        _ => {
            return Err(Error::UnsupportedShape(format!(
                "cannot distribute an intersection scheme of length {length} between \
                 {} and {} conjugate components",
                rows.len(),
                cols.len()
            )))
        }
    }
    Ok(())
}

/// Residual of the pullback of h after removing all visible exceptional
/// factors: the local equation of the strict transform of V(h).
fn strict_of_linear(c: &crate::blowup::Chart, h: &Poly) -> Poly {
    let mut pb = c.map_to_root.apply(h);
    for slot in c.visible_slots() {
        pb = pb.div_exponent(c.exc_gen(slot).unwrap()).1;
    }
    pb
}

pub fn intersection_matrix(t: &ChartTree, d: &DivisorTable) -> Result<IntersectionMatrix> {
    let root = t.root_ring();
    if root.nvars() != 3 {
        return Err(Error::UnsupportedShape(
            "intersection matrices require the surface pipeline (3 variables)".into(),
        ));
    }
    let afc = abstract_final_charts(t);

    // exceptional curves: divisors with a non-empty curve on the strict
    // transform in the abstract part, split into C-components
    let mut curve_divisors: Vec<usize> = Vec::new();
    for label in 1..=d.divisor_count {
        let mut present = false;
        for &id in &afc {
            let c = t.chart(id);
            if let (Some(slot), Some(strict)) = (
                d.rows[&id].iter().position(|&l| l == label),
                c.strict_gen(),
            ) {
                let curve = Ideal::new(
                    &c.ring,
                    vec![c.exc_gen(slot).unwrap().clone(), strict.clone()],
                );
                if curve.dimension() == 1 {
                    present = true;
                    break;
                }
            }
        }
        if present {
            curve_divisors.push(label);
        }
    }
    let comps: BTreeMap<usize, usize> = curve_divisors
        .iter()
        .map(|&l| (l, d.c_components[l - 1]))
        .collect();
    // curve index per (label, component)
    let mut labels: Vec<(usize, usize)> = Vec::new();
    let mut index: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &l in &curve_divisors {
        let mut idxs = Vec::new();
        for comp in 1..=comps[&l] {
            idxs.push(labels.len());
            labels.push((l, comp));
        }
        index.insert(l, idxs);
    }
    let s = labels.len();
    let mut m = vec![vec![0i64; s]; s];
    if s == 0 {
        return Ok(IntersectionMatrix {
            labels,
            entries: m,
        });
    }

    // (1) off-diagonal intersections between different divisors
    for (a, &la) in curve_divisors.iter().enumerate() {
        for &lb in &curve_divisors[a + 1..] {
            let mut clusters = Vec::new();
            for &id in &afc {
                let c = t.chart(id);
                let row = &d.rows[&id];
                let (sa, sb) = (
                    row.iter().position(|&l| l == la),
                    row.iter().position(|&l| l == lb),
                );
                if let (Some(sa), Some(sb), Some(strict)) = (sa, sb, c.strict_gen()) {
                    if let Some(cl) = cluster_of(
                        c,
                        vec![
                            c.exc_gen(sa).unwrap().clone(),
                            c.exc_gen(sb).unwrap().clone(),
                            strict.clone(),
                        ],
                    )? {
                        clusters.push(cl);
                    }
                }
            }
            for cl in dedup_clusters(t, clusters) {
                attribute(&mut m, &index[&la], &index[&lb], cl.length)?;
            }
        }
    }

    // (2) crossings between conjugate components of one divisor: rational
    // nodes of the Q-irreducible curve
    for &l in &curve_divisors {
        if comps[&l] < 2 {
            continue;
        }
        let mut clusters = Vec::new();
        for &id in &afc {
            let c = t.chart(id);
            let Some(slot) = d.rows[&id].iter().position(|&lab| lab == l) else {
                continue;
            };
            let Some(strict) = c.strict_gen() else {
                continue;
            };
            let curve = Ideal::new(
                &c.ring,
                vec![c.exc_gen(slot).unwrap().clone(), strict.clone()],
            );
            if curve.dimension() != 1 {
                continue;
            }
            let sing = curve.singular_locus(2)?;
            if sing.dimension() < 0 {
                continue;
            }
            match curve_shape_of_locus(&curve)? {
                CurveShape::ConicCrossingLines => {}
                shape => {
                    return Err(Error::UnsupportedShape(format!(
                        "singular exceptional curve of unsupported shape {shape:?} in chart {id}"
                    )))
                }
            }
            if let Some(cl) = cluster_of(c, sing.gens().to_vec())? {
                clusters.push(cl);
            }
        }
        for cl in dedup_clusters(t, clusters) {
            // each node is one transverse crossing of the two components
            let idx = &index[&l];
            m[idx[0]][idx[1]] += cl.length as i64;
            m[idx[1]][idx[0]] += cl.length as i64;
        }
    }

    // (3) self-intersections via a generic linear form h through the
    // singular point: 0 = π*(h).E_j = Σ c_i E_i.E_j + H.E_j
    let candidates = linear_form_candidates(root);
    let mut last_err: Option<Error> = None;
    'hloop: for h in &candidates {
        // c_i: multiplicity of each divisor in π*(h), consistent across charts
        let mut c_of: BTreeMap<usize, u32> = BTreeMap::new();
        for &l in &curve_divisors {
            let mut vals: BTreeMap<u32, ()> = BTreeMap::new();
            for &id in &afc {
                let c = t.chart(id);
                if let Some(slot) = d.rows[&id].iter().position(|&lab| lab == l) {
                    vals.insert(
                        c.map_to_root.apply(h).div_exponent(c.exc_gen(slot).unwrap()).0,
                        (),
                    );
                }
            }
            if vals.len() != 1 {
                last_err = Some(Error::Inconsistent(format!(
                    "pullback multiplicities of {h} along divisor {l} differ across charts"
                )));
                continue 'hloop;
            }
            let v = *vals.keys().next().unwrap();
            if v == 0 {
                continue 'hloop; // h misses this divisor; not usable
            }
            c_of.insert(l, v);
        }
        // H·E_j per curve
        let mut hdot = vec![0i64; s];
        for &l in &curve_divisors {
            let mut clusters = Vec::new();
            for &id in &afc {
                let c = t.chart(id);
                let Some(slot) = d.rows[&id].iter().position(|&lab| lab == l) else {
                    continue;
                };
                let Some(strict) = c.strict_gen() else {
                    continue;
                };
                let hs = strict_of_linear(c, h);
                if hs.is_constant() {
                    continue;
                }
                match cluster_of(
                    c,
                    vec![hs, c.exc_gen(slot).unwrap().clone(), strict.clone()],
                ) {
                    Ok(Some(cl)) => clusters.push(cl),
                    Ok(None) => {}
                    Err(e) => {
                        last_err = Some(e);
                        continue 'hloop;
                    }
                }
            }
            for cl in dedup_clusters(t, clusters) {
                match (index[&l].len(), cl.length) {
                    (1, len) => hdot[index[&l][0]] += len as i64,
                    (2, 2) => {
                        hdot[index[&l][0]] += 1;
                        hdot[index[&l][1]] += 1;
                    }
                    _ => {
                        last_err = Some(Error::UnsupportedShape(format!(
                            "cannot distribute H∩E{l} of length {}",
                            cl.length
                        )));
                        continue 'hloop;
                    }
                }
            }
        }
        // solve for the diagonal
        let mut entries = m.clone();
        for j in 0..s {
            let cj = c_of[&labels[j].0] as i64;
            let mut acc = hdot[j];
            for i in 0..s {
                if i != j {
                    acc += c_of[&labels[i].0] as i64 * entries[i][j];
                }
            }
            if acc % cj != 0 {
                last_err = Some(Error::Inconsistent(format!(
                    "non-integral self-intersection with linear form {h}"
                )));
                continue 'hloop;
            }
            entries[j][j] = -acc / cj;
        }
        // round-trip residual must vanish
        for j in 0..s {
            let total: i64 = (0..s)
                .map(|i| c_of[&labels[i].0] as i64 * entries[i][j])
                .sum::<i64>()
                + hdot[j];
            assert_eq!(total, 0, "diagonal solve residual");
        }
        return Ok(IntersectionMatrix { labels, entries });
    }
    Err(last_err.unwrap_or_else(|| {
        Error::Inconsistent("no usable linear form for self-intersections".into())
    }))
}

fn linear_form_candidates(root: &std::sync::Arc<crate::ring::Ring>) -> Vec<Poly> {
    let n = root.nvars();
    let mut out: Vec<Poly> = (0..n).map(|i| Poly::var(root, i)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            out.push(&Poly::var(root, i) + &Poly::var(root, j));
            out.push(&Poly::var(root, i) - &Poly::var(root, j));
        }
    }
    let all = (0..n)
        .map(|i| Poly::var(root, i))
        .fold(Poly::zero(root), |a, b| &a + &b);
    out.push(all);
    out
}

/// Dual graph from an intersection matrix: one vertex per curve, one edge
/// per intersection point.
pub fn dual_graph(m: &IntersectionMatrix) -> DualGraph {
    let s = m.labels.len();
    let mut edges = Vec::new();
    for i in 0..s {
        for j in (i + 1)..s {
            for _ in 0..m.entries[i][j].max(0) {
                edges.push((i, j));
            }
        }
    }
    DualGraph {
        self_intersections: (0..s).map(|i| m.entries[i][i]).collect(),
        edges,
    }
}

/// DOT rendering; vertices with self-intersection −2 are unlabeled.
pub fn dual_graph_dot(g: &DualGraph) -> String {
    let mut out = String::from("graph dual_graph {\n  node [shape=circle];\n");
    for (i, &s) in g.self_intersections.iter().enumerate() {
        if s == -2 {
            out.push_str(&format!("  v{i} [label=\"\"];\n"));
        } else {
            out.push_str(&format!("  v{i} [label=\"{s}\"];\n"));
        }
    }
    for &(a, b) in &g.edges {
        out.push_str(&format!("  v{a} -- v{b};\n"));
    }
    out.push_str("}\n");
    out
}

/// JSON report of the numeric invariants.
pub fn report_json(t: &ChartTree, d: &DivisorTable) -> Result<Value> {
    let n = multiplicities_n(t, d)?;
    let nu = multiplicities_nu(t, d)?;
    let disc = discrepancies(t, d, DiscrepancyKind::Plain)?;
    let l = lct(t, d, false)?;
    let matrix = match intersection_matrix(t, d) {
        Ok(m) => json!({
            "labels": m.labels.iter().map(|(l, c)| json!([l, c])).collect::<Vec<_>>(),
            "entries": m.entries,
        }),
        Err(Error::UnsupportedShape(_)) => Value::Null,
        Err(e) => return Err(e),
    };
    Ok(json!({
        "N": n.0,
        "nu": nu.0,
        "discrepancy": disc,
        "lct": l.to_string(),
        "matrix": matrix,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisors::collect_divisors;
    use crate::parse::parse_poly;
    use crate::resolve::{resolve, CenterStrategy, ResolutionLimits};
    use crate::ring::Ring;
    use std::sync::Arc;

    fn tree(vars: &[&str], f: &str) -> (ChartTree, DivisorTable) {
        let r = Ring::new(vars.to_vec());
        let t = resolve(
            &Ideal::new(&r, vec![parse_poly(f, &r).unwrap()]),
            &CenterStrategy::Default,
            &ResolutionLimits::default(),
        )
        .unwrap();
        let d = collect_divisors(&t).unwrap();
        (t, d)
    }

    #[test]
    fn a4_multiplicities() {
        let (t, d) = tree(&["x", "y", "z"], "x^5 + y^2 + z^2");
        assert_eq!(multiplicities_n(&t, &d).unwrap().0, vec![2, 4, 5, 10, 1]);
        assert_eq!(multiplicities_nu(&t, &d).unwrap().0, vec![3, 5, 7, 12, 1]);
    }

    #[test]
    fn a4_discrepancies_and_lct() {
        let (t, d) = tree(&["x", "y", "z"], "x^5 + y^2 + z^2");
        assert_eq!(
            discrepancies(&t, &d, DiscrepancyKind::Plain).unwrap(),
            vec![0, 0, 1, 1]
        );
        assert_eq!(
            discrepancies(&t, &d, DiscrepancyKind::Log).unwrap(),
            vec![1, 1, 2, 2]
        );
        assert_eq!(lct(&t, &d, false).unwrap(), Rat::new(6.into(), 5.into()));
        assert_eq!(lct(&t, &d, true).unwrap(), Rat::one());
    }

    #[test]
    fn cusp_multiplicities() {
        let (t, d) = tree(&["x", "y"], "y^2 - x^3");
        assert_eq!(multiplicities_n(&t, &d).unwrap().0, vec![2, 3, 6, 1]);
        assert_eq!(multiplicities_nu(&t, &d).unwrap().0, vec![2, 3, 5, 1]);
        assert_eq!(lct(&t, &d, false).unwrap(), Rat::new(5.into(), 6.into()));
    }

    #[test]
    fn smooth_input_multiplicities() {
        let (t, d) = tree(&["x", "y"], "x");
        assert_eq!(multiplicities_n(&t, &d).unwrap().0, vec![1]);
        assert_eq!(multiplicities_nu(&t, &d).unwrap().0, vec![1]);
        assert!(discrepancies(&t, &d, DiscrepancyKind::Plain).unwrap().is_empty());
        assert_eq!(lct(&t, &d, true).unwrap(), Rat::one());
    }

    #[test]
    fn factorization_identities_per_final_chart() {
        let (t, d) = tree(&["x", "y", "z"], "x^5 + y^2 + z^2");
        let n = multiplicities_n(&t, &d).unwrap();
        let nu = multiplicities_nu(&t, &d).unwrap();
        let f = &t.input.gens()[0];
        for id in t.final_chart_ids() {
            let c = t.chart(id);
            // f∘π = unit · strict · ∏ e_i^{N_i}
            let mut pb = c.map_to_root.apply(f);
            if let Some(g) = c.strict_gen() {
                let (k, rest) = pb.div_exponent(g);
                assert_eq!(k, n.strict());
                pb = rest;
            }
            for (slot, &label) in d.rows[&id].iter().enumerate() {
                if label != 0 {
                    let (k, rest) = pb.div_exponent(c.exc_gen(slot).unwrap());
                    assert_eq!(k, n.exceptional()[label - 1], "N in chart {id}");
                    pb = rest;
                }
            }
            assert!(pb.is_constant(), "non-unit residual in chart {id}: {pb}");
            // jacobian = unit · ∏ e_i^{ν_i − 1}
            let mut jac = c.map_to_root.jacobian_det().unwrap();
            for (slot, &label) in d.rows[&id].iter().enumerate() {
                if label != 0 {
                    let (k, rest) = jac.div_exponent(c.exc_gen(slot).unwrap());
                    assert_eq!(k, nu.exceptional()[label - 1] - 1, "nu in chart {id}");
                    jac = rest;
                }
            }
            assert!(jac.is_constant(), "non-unit jacobian residual in chart {id}");
        }
    }

    #[test]
    fn a4_intersection_matrix_is_the_dynkin_a4() {
        let (t, d) = tree(&["x", "y", "z"], "x^5 + y^2 + z^2");
        let m = intersection_matrix(&t, &d).unwrap();
        assert_eq!(m.labels, vec![(1, 1), (1, 2), (2, 1), (2, 2)]);
        assert_eq!(
            m.entries,
            vec![
                vec![-2, 0, 1, 0],
                vec![0, -2, 0, 1],
                vec![1, 0, -2, 1],
                vec![0, 1, 1, -2],
            ]
        );
    }

    #[test]
    fn a1_intersection_matrix() {
        let (t, d) = tree(&["x", "y", "z"], "x^2 + y^2 + z^2");
        let m = intersection_matrix(&t, &d).unwrap();
        assert_eq!(m.entries, vec![vec![-2]]);
    }

    #[test]
    fn smooth_point_matrix_empty() {
        let (t, d) = tree(&["x", "y", "z"], "x + y^2 + z^2");
        let m = intersection_matrix(&t, &d).unwrap();
        assert!(m.entries.is_empty());
    }

    fn leading_minors_alternate(m: &IntersectionMatrix) -> bool {
        let s = m.labels.len();
        for k in 1..=s {
            let mut sub: Vec<Vec<i128>> = (0..k)
                .map(|i| (0..k).map(|j| m.entries[i][j] as i128).collect())
                .collect();
            // fraction-free Gaussian elimination (Bareiss)
            let mut prev = 1i128;
            for c in 0..k {
                if sub[c][c] == 0 {
                    let swap = (c + 1..k).find(|&r| sub[r][c] != 0);
                    match swap {
                        Some(r) => {
                            sub.swap(c, r);
                            for cell in sub[c].iter_mut() {
                                *cell = -*cell;
                            }
                        }
                        None => return false,
                    }
                }
                for r in (c + 1)..k {
                    for cc in (c + 1)..k {
                        sub[r][cc] = (sub[r][cc] * sub[c][c] - sub[r][c] * sub[c][cc]) / prev;
                    }
                    sub[r][c] = 0;
                }
                prev = sub[c][c];
            }
            let det = sub[k - 1][k - 1];
            let expect_positive = k % 2 == 0;
            if (det > 0) != expect_positive || det == 0 {
                return false;
            }
        }
        true
    }

    #[test]
    fn surface_matrices_negative_definite_and_symmetric() {
        for f in ["x^5 + y^2 + z^2", "x^2 + y^2 + z^2", "x^3 + y^2 + z^2"] {
            let (t, d) = tree(&["x", "y", "z"], f);
            let m = intersection_matrix(&t, &d).unwrap();
            let s = m.labels.len();
            for i in 0..s {
                assert!(m.entries[i][i] <= -1);
                for j in 0..s {
                    assert_eq!(m.entries[i][j], m.entries[j][i]);
                    if i != j {
                        assert!(m.entries[i][j] >= 0);
                    }
                }
            }
            assert!(leading_minors_alternate(&m), "not negative definite: {f}");
        }
    }

    #[test]
    fn a4_dual_graph_is_a_path() {
        let (t, d) = tree(&["x", "y", "z"], "x^5 + y^2 + z^2");
        let m = intersection_matrix(&t, &d).unwrap();
        let g = dual_graph(&m);
        assert_eq!(g.self_intersections, vec![-2, -2, -2, -2]);
        assert_eq!(g.edges, vec![(0, 2), (1, 3), (2, 3)]);
        // a path: two vertices of degree 1, two of degree 2
        let mut deg = vec![0; 4];
        for &(a, b) in &g.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.sort_unstable();
        assert_eq!(deg, vec![1, 1, 2, 2]);
        let dot = dual_graph_dot(&g);
        // all −2 vertices unlabeled
        assert!(dot.contains("v0 [label=\"\"]"));
        assert!(!dot.contains("label=\"-2\""));
    }

    #[test]
    fn dot_labels_non_minus_two() {
        let g = DualGraph {
            self_intersections: vec![-3, -2],
            edges: vec![(0, 1)],
        };
        let dot = dual_graph_dot(&g);
        assert!(dot.contains("v0 [label=\"-3\"]"));
        assert!(dot.contains("v1 [label=\"\"]"));
    }

    #[test]
    fn bernstein_products() {
        assert_eq!(bernstein_normal_crossing(&[]).to_string_with("s"), "1");
        assert_eq!(bernstein_normal_crossing(&[1]).to_string_with("s"), "s + 1");
        assert_eq!(
            bernstein_normal_crossing(&[2]).to_string_with("s"),
            "4*s^2 + 6*s + 2"
        );
        // roots of the product are −k/r_i
        let b = bernstein_normal_crossing(&[2, 3]);
        for (root, _) in crate::univar::rational_roots(&b) {
            let neg = -root;
            assert!(
                [
                    Rat::new(1.into(), 2.into()),
                    Rat::one(),
                    Rat::new(1.into(), 3.into()),
                    Rat::new(2.into(), 3.into()),
                ]
                .contains(&neg)
            );
        }
    }

    #[test]
    fn report_has_all_fields() {
        let (t, d) = tree(&["x", "y", "z"], "x^5 + y^2 + z^2");
        let v = report_json(&t, &d).unwrap();
        assert_eq!(v["N"][0], 2);
        assert_eq!(v["nu"][3], 12);
        assert_eq!(v["lct"], "6/5");
        assert_eq!(v["matrix"]["entries"][0][0], -2);
    }

    #[test]
    fn curve_input_matrix_unsupported() {
        let (t, d) = tree(&["x", "y"], "y^2 - x^3");
        assert!(matches!(
            intersection_matrix(&t, &d),
            Err(Error::UnsupportedShape(_))
        ));
    }

    fn _types_are_send(t: ChartTree) -> impl Send {
        t
    }

    #[test]
    fn multiplicity_accessors() {
        let v = MultiplicityVector(vec![2, 4, 5, 10, 1]);
        assert_eq!(v.exceptional(), &[2, 4, 5, 10]);
        assert_eq!(v.strict(), 1);
        let _ = Arc::new(());
    }
}
