//! Euler-characteristic bookkeeping of exceptional strata and assembly of
//! the topological zeta function and the monodromy characteristic
//! polynomial.
//!
//! The monodromy characteristic polynomial is obtained from the standard
//! A'Campo product formula ζ(t) = ∏_j (1 − t^{N_j})^{−χ(E_j° ∩ π⁻¹(0))}.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::divisors::{curve_shape_of_locus, CurveShape, DivisorTable};
use crate::error::Error;
use crate::ideal::Ideal;
use crate::invariants::{cluster_of, dedup_clusters, multiplicities_n, multiplicities_nu};
use crate::poly::{rat, Poly, Rat};
use crate::resolve::ChartTree;
use crate::univar::{RationalFunction, UnivariatePoly};
use crate::Result;

/// One stratum E_J of the stratification by the components of
/// π⁻¹(f⁻¹(0)).  Labels 1..=m are the exceptional divisors; m + 1 denotes
/// the strict transform.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub j: Vec<usize>,
    pub chi_ej: i64,
    pub chi_ej_star: i64,
    pub chi_ej_star_over_origin: i64,
}

/// Euler characteristic of an exceptional divisor at the moment of its
/// birth in the ambient-dimension-3 pipeline: a P² for point centers, a
/// P¹ × C for one-dimensional centers C.
pub fn birth_chi(center_dim: u32, center_genus: u32) -> Result<i64> {
    match center_dim {
        0 => Ok(3),
        1 => Ok(4 - 4 * center_genus as i64),
        _ => Err(Error::UnsupportedShape(format!(
            "no birth Euler characteristic for a center of dimension {center_dim}"
        ))),
    }
}

/// Euler characteristics of the exceptional divisors, tracked from birth
/// through all later blow-ups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiLedger {
    /// χ at birth, per divisor label (index = label − 1).
    pub birth: Vec<i64>,
    /// One logged correction per later birth event affecting the divisor.
    pub updates: Vec<Vec<i64>>,
}

impl ChiLedger {
    /// Current Euler characteristic of divisor `label` (1-based).
    pub fn current(&self, label: usize) -> i64 {
        self.birth[label - 1] + self.updates[label - 1].iter().sum::<i64>()
    }
}

/// The center ideal of birth event `b` as seen in chart `p` (one of its
/// event charts).
fn center_in_event_chart(t: &ChartTree, p: usize) -> &Ideal {
    let child = t.children(p)[0];
    t.chart(child)
        .center_in_parent
        .as_ref()
        .expect("blown-up chart has a center")
}

/// Geometric genus and C-component count of a one-dimensional blow-up
/// center, via the supported rational shapes.
fn center_curve_data(center: &Ideal) -> Result<(u32, usize)> {
    let shape = curve_shape_of_locus(center)?;
    match shape {
        CurveShape::Line | CurveShape::ConicIrreducible | CurveShape::ConicDoubleLine => Ok((0, 1)),
        CurveShape::Cylinder { components } => Ok((0, components)),
        CurveShape::ConicCrossingLines => Err(Error::UnsupportedShape(
            "singular blow-up center".into(),
        )),
        CurveShape::Empty => Err(Error::UnsupportedShape("empty blow-up center".into())),
    }
}

/// Apply the effect of the `later`-th birth event (0-based index into
/// `d.birth`) to all older divisors: +k for a point center of k complex
/// points lying on the divisor, unchanged for curve centers contained in
/// it or for disjoint centers.
pub fn update_chi(
    ledger: &mut ChiLedger,
    t: &ChartTree,
    d: &DivisorTable,
    later: usize,
) -> Result<()> {
    let b = &d.birth[later];
    for label in 1..=d.divisor_count {
        if d.birth[label - 1].depth >= b.depth {
            continue;
        }
        // relation of the center to E_label, decided in the first event
        // chart where the divisor is visible and the center meets it
        let mut delta = 0i64;
        for &p in &b.event_charts {
            let Some(slot) = d.rows[&p].iter().position(|&l| l == label) else {
                continue; // divisor absent from this chart: disjoint here
            };
            let e = t.chart(p).exc_gen(slot).unwrap().clone();
            let center = center_in_event_chart(t, p);
            if center.with_extra(&[e.clone()]).is_unit() {
                continue; // disjoint
            }
            if !center.radical_contains(&e) {
                return Err(Error::Inconsistent(format!(
                    "blow-up center in chart {p} meets divisor {label} without being \
                     contained in it"
                )));
            }
            if center.dimension() == 0 {
                // a point (or conjugate points) on the divisor is replaced
                // by rational curves: +1 per complex point
                let pts = center.quotient_length().ok_or_else(|| {
                    Error::Inconsistent(format!("cannot count center points in chart {p}"))
                })?;
                delta = pts as i64;
            }
            // curve center contained in the divisor: the induced
            // modification is an isomorphism, χ unchanged
            break;
        }
        ledger.updates[label - 1].push(delta);
    }
    Ok(())
}

/// Build the full Euler-characteristic ledger of the exceptional divisors.
pub fn chi_ledger(t: &ChartTree, d: &DivisorTable) -> Result<ChiLedger> {
    let n = t.root_ring().nvars();
    let mut ledger = ChiLedger {
        birth: Vec::with_capacity(d.divisor_count),
        updates: vec![Vec::new(); d.divisor_count],
    };
    for b in &d.birth {
        let center = center_in_event_chart(t, b.event_charts[0]);
        let dim = center.dimension();
        let chi = match (n, dim) {
            (2, 0) => 2, // a P¹ over a point of a surface
            (3, 0) => birth_chi(0, 0)?,
            (3, 1) => {
                let (g, c) = center_curve_data(center)?;
                c as i64 * birth_chi(1, g)?
            }
            _ => {
                return Err(Error::UnsupportedShape(format!(
                    "no Euler-characteristic tracking for a dimension-{dim} center in \
                     ambient dimension {n}"
                )))
            }
        };
        ledger.birth.push(chi);
    }
    for later in 0..d.birth.len() {
        update_chi(&mut ledger, t, d, later)?;
    }
    Ok(ledger)
}

/// Euler characteristic of the affine hypersurface f = 0, supported for
/// quasi-homogeneous f (contractible via the positive-weight C* action).
fn chi_hypersurface(f: &Poly) -> Result<i64> {
    let ring = f.ring();
    let n = ring.nvars();
    // solve Σ aᵢ wᵢ = 1 over the monomial exponent vectors of f
    let mut rows: Vec<Vec<Rat>> = f
        .terms()
        .map(|(m, _)| {
            let mut r: Vec<Rat> = m.0.iter().map(|&a| rat(a as i64)).collect();
            r.push(rat(1));
            r
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut rank = 0usize;
    for col in 0..n {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].recip();
        for v in rows[rank].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in 0..=n {
                    let sub = &rows[rank][c] * &factor;
                    rows[r][c] = &rows[r][c] - &sub;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[n].is_zero()) {
        return Err(Error::UnsupportedShape(
            "hypersurface is not quasi-homogeneous".into(),
        ));
    }
    // free weights default to 1
    let mut w = vec![rat(1); n];
    for col in 0..n {
        if let Some(r) = pivot_of_col[col] {
            let mut v = rows[r][n].clone();
            for c in (col + 1)..n {
                if pivot_of_col[c].is_none() {
                    v = &v - &rows[r][c]; // free weight 1
                }
            }
            w[col] = v;
        }
    }
    if w.iter().any(|wi| !wi.is_positive()) {
        return Err(Error::UnsupportedShape(
            "no positive quasi-homogeneous weight system".into(),
        ));
    }
    Ok(1)
}

/// True when all exceptional divisors lie over the origin: the first
/// center is the reduced origin of the root chart.
fn exceptional_over_origin(t: &ChartTree, d: &DivisorTable) -> bool {
    let Some(b) = d.birth.first() else {
        return true;
    };
    if b.depth != 0 {
        return false;
    }
    let center = center_in_event_chart(t, b.event_charts[0]);
    let ring = t.root_ring().clone();
    center.dimension() == 0
        && (0..ring.nvars()).all(|i| center.radical_contains(&Poly::var(&ring, i)))
}

/// χ contribution of a one-dimensional stratum: Euler characteristic of
/// the projective closure read off the supported rational shapes.
fn curve_stratum_chi(shape: &CurveShape) -> i64 {
    match shape {
        CurveShape::Empty => 0,
        CurveShape::Line | CurveShape::ConicIrreducible | CurveShape::ConicDoubleLine => 2,
        CurveShape::Cylinder { components } => 2 * *components as i64,
        CurveShape::ConicCrossingLines => 3, // two rational curves glued at a node
    }
}

/// Per-chart generators of the stratum E_J in chart `id`, or None when a
/// member is invisible there.
fn stratum_gens(
    t: &ChartTree,
    d: &DivisorTable,
    id: usize,
    j: &[usize],
    strict_label: usize,
) -> Option<Vec<Poly>> {
    let c = t.chart(id);
    let mut gens = Vec::with_capacity(j.len());
    for &l in j {
        if l == strict_label {
            gens.push(c.strict_gen()?.clone());
        } else {
            let slot = d.rows[&id].iter().position(|&x| x == l)?;
            gens.push(c.exc_gen(slot).unwrap().clone());
        }
    }
    Some(gens)
}

/// Compute χ(E_J) for |J| ≥ 2 from the final charts; None when the
/// stratum is empty.
fn chi_of_intersection(
    t: &ChartTree,
    d: &DivisorTable,
    j: &[usize],
    strict_label: usize,
) -> Result<Option<i64>> {
    let mut ideals: Vec<(usize, Ideal)> = Vec::new();
    let mut dim = -1i32;
    for id in t.final_chart_ids() {
        let Some(gens) = stratum_gens(t, d, id, j, strict_label) else {
            continue;
        };
        let i = Ideal::new(&t.chart(id).ring, gens);
        let di = i.dimension();
        if di >= 0 {
            dim = dim.max(di);
            ideals.push((id, i));
        }
    }
    if ideals.is_empty() {
        return Ok(None);
    }
    match dim {
        0 => {
            let mut clusters = Vec::new();
            for (id, i) in ideals {
                if let Some(cl) = cluster_of(t.chart(id), i.gens().to_vec())? {
                    clusters.push(cl);
                }
            }
            let total: u64 = dedup_clusters(t, clusters).iter().map(|c| c.length).sum();
            Ok(Some(total as i64))
        }
        1 => {
            // χ of the complete curve from its classifiable affine views;
            // the chart seeing the most components wins
            let mut best: Option<i64> = None;
            for (_, i) in &ideals {
                if let Ok(shape) = curve_shape_of_locus(i) {
                    let chi = curve_stratum_chi(&shape);
                    best = Some(best.map_or(chi, |b: i64| b.max(chi)));
                }
            }
            best.map(Some).ok_or_else(|| {
                Error::UnsupportedShape(format!(
                    "cannot classify the one-dimensional stratum E_{j:?}"
                ))
            })
        }
        _ => Err(Error::UnsupportedShape(format!(
            "stratum E_{j:?} has dimension {dim}"
        ))),
    }
}

/// Stratify the components of π⁻¹(f⁻¹(0)): all non-empty E_J with their
/// χ(E_J), χ(E_J*), and the origin-restricted χ(E_J* ∩ π⁻¹(0)).  With
/// `at_origin` only strata meeting the fiber over the origin (those
/// containing an exceptional divisor) are returned.
pub fn stratify(t: &ChartTree, d: &DivisorTable, at_origin: bool) -> Result<Vec<Stratum>> {
    if t.pruned {
        return Err(Error::Invalid(
            "cannot stratify a pruned chart tree: charts were dropped".into(),
        ));
    }
    let n = t.root_ring().nvars();
    let m = d.divisor_count;
    if m > 0 && !(2..=3).contains(&n) {
        return Err(Error::UnsupportedShape(format!(
            "stratification supports ambient dimension 2 or 3, not {n}"
        )));
    }
    if m > 0 && !exceptional_over_origin(t, d) {
        return Err(Error::UnsupportedShape(
            "exceptional locus does not lie over the origin".into(),
        ));
    }
    let has_strict = t
        .final_chart_ids()
        .iter()
        .any(|&id| t.chart(id).strict_gen().is_some());
    let strict_label = m + 1;
    let mut universe: Vec<usize> = (1..=m).collect();
    if has_strict {
        universe.push(strict_label);
    }
    if universe.len() > 16 {
        return Err(Error::LimitExceeded("too many divisors to stratify".into()));
    }

    let chi_v = chi_hypersurface(&t.input.gens()[0])?;
    let ledger = if n == 3 { Some(chi_ledger(t, d)?) } else { None };

    // χ(E_J) for every non-empty J, singles from the ledger
    let mut chi: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    for mask in 1u32..(1 << universe.len()) {
        let j: Vec<usize> = (0..universe.len())
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| universe[b])
            .collect();
        if j.len() == 1 {
            let l = j[0];
            if l != strict_label {
                let c = match &ledger {
                    Some(led) => led.current(l),
                    None => 2, // a P¹ in the surface pipeline
                };
                chi.insert(j, c);
            }
            // the strict transform's χ is derived after the star values
            continue;
        }
        if let Some(c) = chi_of_intersection(t, d, &j, strict_label)? {
            chi.insert(j, c);
        }
    }

    // Möbius pass, largest subsets first
    let mut keys: Vec<Vec<usize>> = chi.keys().cloned().collect();
    keys.sort_by_key(|j| std::cmp::Reverse(j.len()));
    let mut star: BTreeMap<Vec<usize>, i64> = BTreeMap::new();
    // the strict transform off the exceptional locus is V ∖ {singular point}
    if has_strict {
        let s_star = if m == 0 { chi_v } else { chi_v - 1 };
        star.insert(vec![strict_label], s_star);
    }
    for j in &keys {
        let mut v = chi[j];
        for (k, sv) in &star {
            if k.len() > j.len() && j.iter().all(|l| k.contains(l)) {
                v -= sv;
            }
        }
        star.insert(j.clone(), v);
    }
    // derived χ of the strict transform itself
    if has_strict {
        let key = vec![strict_label];
        let mut total = star[&key];
        for (k, sv) in &star {
            if k.len() > 1 && k.contains(&strict_label) {
                total += sv;
            }
        }
        chi.insert(key, total);
    }

    let origin_in_v = t
        .input
        .gens()
        .iter()
        .all(|g| g.terms().all(|(mo, _)| mo.0.iter().any(|&e| e > 0)));
    let mut out = Vec::new();
    for (j, &c) in &chi {
        let s = star[j];
        let over_origin = if j.iter().any(|&l| l != strict_label) {
            s // exceptional strata lie entirely over the origin
        } else if m == 0 {
            // identity resolution: the fiber over the origin is the origin
            i64::from(origin_in_v)
        } else {
            0 // E_S* avoids the exceptional locus, hence the fiber
        };
        if at_origin && !j.iter().any(|&l| l != strict_label) {
            continue;
        }
        out.push(Stratum {
            j: j.clone(),
            chi_ej: c,
            chi_ej_star: s,
            chi_ej_star_over_origin: over_origin,
        });
    }
    Ok(out)
}

/// The topological zeta function Z_top^(d), global or local, assembled
/// over the Q-irreducible components of π⁻¹(f⁻¹(0)).
pub fn zeta_top(t: &ChartTree, d: &DivisorTable, dd: u32, local: bool) -> Result<RationalFunction> {
    assert!(dd >= 1, "d must be positive");
    let strata = stratify(t, d, false)?;
    let n_mult = multiplicities_n(t, d)?;
    let nu_mult = multiplicities_nu(t, d)?;
    let strict_label = d.divisor_count + 1;
    let pair = |l: usize| -> (u32, u32) {
        if l == strict_label {
            (nu_mult.strict(), n_mult.strict())
        } else {
            (nu_mult.0[l - 1], n_mult.0[l - 1])
        }
    };
    // the empty subset contributes χ(X ∖ π⁻¹(f⁻¹(0))) = 1 − χ(V) globally
    // and 0 locally; for quasi-homogeneous f both vanish
    let chi_v = chi_hypersurface(&t.input.gens()[0])?;
    let mut z = if local {
        RationalFunction::zero()
    } else {
        RationalFunction::constant(rat(1 - chi_v))
    };
    for s in &strata {
        let c = if local {
            s.chi_ej_star_over_origin
        } else {
            s.chi_ej_star
        };
        if c == 0 {
            continue;
        }
        if s.j.iter().any(|&l| pair(l).1 % dd != 0) {
            continue;
        }
        let mut term = RationalFunction::constant(rat(c));
        for &l in &s.j {
            let (nu, nn) = pair(l);
            term = &term * &RationalFunction::inv_linear(nu as i64, nn as i64);
        }
        z = &z + &term;
    }
    Ok(z)
}

/// Characteristic polynomial of the local monodromy via the A'Campo
/// product over the open exceptional strata.
pub fn monodromy_charpoly(t: &ChartTree, d: &DivisorTable) -> Result<UnivariatePoly> {
    if d.divisor_count == 0 {
        return Ok(UnivariatePoly::one());
    }
    let strata = stratify(t, d, true)?;
    let n_mult = multiplicities_n(t, d)?;
    let n = t.root_ring().nvars();
    // ζ(t) = ∏_j (1 − t^{N_j})^{−χ(E_j°)} over single exceptional divisors
    let mut num = UnivariatePoly::one();
    let mut den = UnivariatePoly::one();
    for s in &strata {
        let [l] = s.j[..] else { continue };
        if l == d.divisor_count + 1 {
            continue;
        }
        let chi = s.chi_ej_star_over_origin;
        if chi == 0 {
            continue;
        }
        let nn = n_mult.0[l - 1] as usize;
        let mut coeffs = vec![Rat::zero(); nn + 1];
        coeffs[0] = rat(1);
        coeffs[nn] = rat(-1);
        let factor = UnivariatePoly::from_coeffs(coeffs).pow(chi.unsigned_abs() as u32);
        if chi > 0 {
            den = &den * &factor;
        } else {
            num = &num * &factor;
        }
    }
    // Δ(t) = ((1 − t) ζ(t))^{(−1)^n}, then reverse into the characteristic
    // polynomial in s
    num = &num * &UnivariatePoly::from_coeffs(vec![rat(1), rat(-1)]);
    let delta = if n % 2 == 1 {
        RationalFunction::new(den, num)
    } else {
        RationalFunction::new(num, den)
    };
    if delta.den().degree() != Some(0) {
        return Err(Error::Inconsistent(
            "monodromy zeta function is not a polynomial after normalization".into(),
        ));
    }
    let inv = delta.den().coeff(0).recip();
    Ok(delta.num().scale(&inv).reversed().monic())
}

/// JSON report of the zeta data.
pub fn zeta_report_json(t: &ChartTree, d: &DivisorTable, dd: u32, local: bool) -> Result<Value> {
    let z = zeta_top(t, d, dd, local)?;
    let mono = monodromy_charpoly(t, d)?;
    let rats = |p: &UnivariatePoly| -> Vec<String> {
        p.coeffs().iter().map(|c| c.to_string()).collect()
    };
    Ok(json!({
        "d": dd,
        "scope": if local { "local" } else { "global" },
        "numerator": rats(z.num()),
        "denominator": rats(z.den()),
        "monodromy": rats(&mono),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divisors::collect_divisors;
    use crate::parse::parse_poly;
    use crate::resolve::{resolve, CenterStrategy, ResolutionLimits};
    use crate::ring::Ring;

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

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(
            UnivariatePoly::from_coeffs(num.iter().map(|&c| rat(c)).collect()),
            UnivariatePoly::from_coeffs(den.iter().map(|&c| rat(c)).collect()),
        )
    }

    #[test]
    fn birth_chi_values() {
        assert_eq!(birth_chi(0, 0).unwrap(), 3);
        assert_eq!(birth_chi(1, 0).unwrap(), 4);
        assert_eq!(birth_chi(1, 1).unwrap(), 0);
        assert!(birth_chi(2, 0).is_err());
    }

    #[test]
    fn a4_chi_ledger() {
        let (t, d) = tree(&["x", "y", "z"], "x^5 + y^2 + z^2");
        let led = chi_ledger(&t, &d).unwrap();
        assert_eq!(led.birth, vec![3, 3, 3, 4]);
        assert_eq!(
            (1..=4).map(|l| led.current(l)).collect::<Vec<_>>(),
            vec![4, 4, 3, 4]
        );
    }

    #[test]
    fn a4_open_exceptional_strata() {
        let (t, d) = tree(&["x", "y", "z"], "x^5 + y^2 + z^2");
        let strata = stratify(&t, &d, true).unwrap();
        let single = |l: usize| {
            strata
                .iter()
                .find(|s| s.j == vec![l])
                .map(|s| s.chi_ej_star_over_origin)
                .unwrap()
        };
        assert_eq!((1..=4).map(single).collect::<Vec<_>>(), vec![0, 0, 1, 0]);
    }

    #[test]
    fn inclusion_exclusion_reassembles_chi() {
        for (vars, f) in [
            (vec!["x", "y", "z"], "x^5 + y^2 + z^2"),
            (vec!["x", "y"], "y^2 - x^3"),
        ] {
            let (t, d) = tree(&vars, f);
            let strata = stratify(&t, &d, false).unwrap();
            for s in &strata {
                let total: i64 = strata
                    .iter()
                    .filter(|k| s.j.iter().all(|l| k.j.contains(l)))
                    .map(|k| k.chi_ej_star)
                    .sum();
                assert_eq!(total, s.chi_ej, "inclusion–exclusion fails at {:?}", s.j);
            }
        }
    }

    #[test]
    fn a4_zeta_global_and_local() {
        let (t, d) = tree(&["x", "y", "z"], "x^5 + y^2 + z^2");
        let expected = rf(&[6, 1], &[6, 11, 5]);
        assert_eq!(zeta_top(&t, &d, 1, false).unwrap(), expected);
        assert_eq!(zeta_top(&t, &d, 1, true).unwrap(), expected);
        assert_eq!(expected.to_string_with("s"), "(s + 6)/(5*s^2 + 11*s + 6)");
    }

    #[test]
    fn a4_zeta_higher_d() {
        let (t, d) = tree(&["x", "y", "z"], "x^5 + y^2 + z^2");
        // N(E3) = 5 and N(E4) = 10 are divisible by 5; the sum over the
        // subsets of {E3, E4} collapses to 1/(5s + 6)
        assert_eq!(zeta_top(&t, &d, 5, false).unwrap(), rf(&[1], &[6, 5]));
        // every stratum with exclusively even multiplicities has χ* = 0
        assert!(zeta_top(&t, &d, 2, false).unwrap().is_zero());
    }

    #[test]
    fn cusp_zeta() {
        let (t, d) = tree(&["x", "y"], "y^2 - x^3");
        let expected = rf(&[5, 4], &[5, 11, 6]);
        assert_eq!(zeta_top(&t, &d, 1, false).unwrap(), expected);
        assert_eq!(zeta_top(&t, &d, 1, true).unwrap(), expected);
    }

    #[test]
    fn smooth_one_variable_zeta() {
        let r = Ring::new(vec!["x"]);
        let t = resolve(
            &Ideal::new(&r, vec![parse_poly("x", &r).unwrap()]),
            &CenterStrategy::Default,
            &ResolutionLimits::default(),
        )
        .unwrap();
        let d = collect_divisors(&t).unwrap();
        assert_eq!(zeta_top(&t, &d, 1, false).unwrap(), rf(&[1], &[1, 1]));
        assert_eq!(zeta_top(&t, &d, 1, true).unwrap(), rf(&[1], &[1, 1]));
    }

    #[test]
    fn a4_monodromy() {
        let (t, d) = tree(&["x", "y", "z"], "x^5 + y^2 + z^2");
        let p = monodromy_charpoly(&t, &d).unwrap();
        assert_eq!(p.to_string_with("s"), "s^4 + s^3 + s^2 + s + 1");
    }

    #[test]
    fn cusp_monodromy() {
        let (t, d) = tree(&["x", "y"], "y^2 - x^3");
        let p = monodromy_charpoly(&t, &d).unwrap();
        assert_eq!(p.to_string_with("s"), "s^2 - s + 1");
    }

    #[test]
    fn smooth_monodromy_is_one() {
        let (t, d) = tree(&["x", "y"], "x");
        assert!(monodromy_charpoly(&t, &d).unwrap().is_one());
    }

    #[test]
    fn zeta_large_s_matches_term_sum() {
        let (t, d) = tree(&["x", "y", "z"], "x^5 + y^2 + z^2");
        let z = zeta_top(&t, &d, 1, false).unwrap();
        let strata = stratify(&t, &d, false).unwrap();
        let n = multiplicities_n(&t, &d).unwrap();
        let nu = multiplicities_nu(&t, &d).unwrap();
        let s0 = rat(1000);
        let mut direct = Rat::zero(); // χ(E_∅*) = 1 − χ(V) = 0
        for s in &strata {
            let mut term = rat(s.chi_ej_star);
            for &l in &s.j {
                let (a, b) = if l == d.divisor_count + 1 {
                    (1, 1)
                } else {
                    (nu.0[l - 1] as i64, n.0[l - 1] as i64)
                };
                term = term / (rat(a) + rat(b) * s0.clone());
            }
            direct = direct + term;
        }
        assert_eq!(z.eval(&s0).unwrap(), direct);
    }

    #[test]
    fn non_quasi_homogeneous_refused() {
        let (t, d) = tree(&["x", "y"], "y^2 - x^3 - x^4");
        assert!(matches!(
            zeta_top(&t, &d, 1, false),
            Err(Error::UnsupportedShape(_))
        ));
    }

    #[test]
    fn zeta_report_shape() {
        let (t, d) = tree(&["x", "y", "z"], "x^5 + y^2 + z^2");
        let v = zeta_report_json(&t, &d, 1, false).unwrap();
        assert_eq!(v["d"], 1);
        assert_eq!(v["scope"], "global");
        assert_eq!(v["numerator"], json!(["6", "1"]));
        assert_eq!(v["denominator"], json!(["6", "11", "5"]));
        assert_eq!(v["monodromy"], json!(["1", "1", "1", "1", "1"]));
    }
}
