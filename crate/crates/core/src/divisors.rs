//! Global bookkeeping of exceptional divisors across charts: identification
//! of divisors born in different charts, the per-chart label table,
//! abstract-from-embedded resolution extraction, and C-component counting.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::blowup::{Chart, ChartMap};
use crate::error::Error;
use crate::ideal::Ideal;
use crate::poly::{rat, Poly, Rat};
use crate::resolve::{root_image, ChartTree};
use crate::ring::Ring;
use crate::univar::UnivariatePoly;
use crate::Result;

/// Birth data of one global exceptional divisor.
#[derive(Debug, Clone)]
pub struct Birth {
    pub depth: usize,
    /// Charts whose blow-up created (a piece of) this divisor, ascending.
    pub event_charts: Vec<usize>,
    /// The center of the first birth event, in that chart's ring.
    pub center: Ideal,
}

/// Global exceptional-divisor labels with per-chart slot assignments.
#[derive(Debug, Clone)]
pub struct DivisorTable {
    pub divisor_count: usize,
    /// Per chart: one entry per exceptional slot holding the 1-based global
    /// label, or 0 when the divisor is not visible in the chart.
    pub rows: BTreeMap<usize, Vec<usize>>,
    /// Per global label (index = label − 1).
    pub birth: Vec<Birth>,
    /// C-irreducible component count of each divisor's curve on the strict
    /// transform (1 when that curve is empty or not recognized).
    pub c_components: Vec<usize>,
}

impl DivisorTable {
    /// Global label of a (chart, slot) pair; 0 when invisible.
    pub fn label(&self, chart: usize, slot: usize) -> usize {
        self.rows[&chart][slot]
    }

    /// Charts in which divisor `label` (1-based) is visible, with the slot.
    pub fn occurrences(&self, label: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (&id, row) in &self.rows {
            for (slot, &l) in row.iter().enumerate() {
                if l == label {
                    out.push((id, slot));
                }
            }
        }
        out
    }
}

/// Witness that V(J) sits inside the carrier intersection I of exceptional
/// divisors as √(I + ⟨p_1..p_r⟩) : f. The auxiliary polynomials p_i and the
/// denominator f live in the home chart's ring; evaluating the witness in
/// another chart transports their hypersurfaces through the last common
/// ancestor via the transition maps.
#[derive(Debug, Clone)]
pub struct SubvarietyWitness {
    /// Chart in whose ring the auxiliary data lives.
    pub chart: usize,
    /// Slots (in the home chart) whose divisors cut out the carrier.
    pub carrier_slots: Vec<usize>,
    pub auxiliary: Vec<Poly>,
    /// Excludes extra components; the constant 1 when there are none.
    pub denominator: Poly,
}

pub(crate) fn radical_equal(a: &Ideal, b: &Ideal) -> bool {
    b.gens().iter().all(|g| a.radical_contains(g))
        && a.gens().iter().all(|g| b.radical_contains(g))
}

fn random_combo(rng: &mut ChaCha8Rng, gens: &[Poly], ring: &Arc<Ring>) -> Poly {
    loop {
        let mut acc = Poly::zero(ring);
        for g in gens {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                acc = &acc + &g.scale(&rat(c));
            }
        }
        if !acc.is_zero() {
            return acc;
        }
    }
}

/// Slots of the chart's visible exceptional divisors containing V(z).
fn containing_slots(c: &Chart, z: &Ideal) -> Vec<usize> {
    c.visible_slots()
        .into_iter()
        .filter(|&s| z.radical_contains(c.exc_gen(s).unwrap()))
        .collect()
}

fn carrier_ideal(c: &Chart, slots: &[usize]) -> Ideal {
    Ideal::new(
        &c.ring,
        slots
            .iter()
            .map(|&s| c.exc_gen(s).unwrap().clone())
            .collect(),
    )
}

fn center_of(t: &ChartTree, event: usize) -> Ideal {
    let child = *t
        .children(event)
        .first()
        .expect("event chart has children");
    t.chart(child)
        .center_in_parent
        .clone()
        .expect("child chart records its center")
}

/// Last common ancestor of two charts.
fn last_common_ancestor(t: &ChartTree, a: usize, b: usize) -> usize {
    let pa = t.ancestry(a);
    let pb = t.ancestry(b);
    let mut lca = 0;
    for (x, y) in pa.iter().zip(pb.iter()) {
        if x == y {
            lca = *x;
        } else {
            break;
        }
    }
    lca
}

/// Blow-down map from a chart to one of its ancestors.
fn map_to_ancestor(t: &ChartTree, from: usize, anc: usize) -> ChartMap {
    let mut m = ChartMap::identity(&t.chart(from).ring);
    let mut cur = from;
    while cur != anc {
        let c = t.chart(cur);
        let up = c
            .map_to_parent
            .as_ref()
            .expect("non-root chart has a parent map");
        m = ChartMap::compose(up, &m);
        cur = c.parent.expect("non-root chart has a parent");
    }
    m
}

/// Transport the closure of a subvariety from one chart to another through
/// their last common ancestor. The graph of the birational transition is the
/// fiber product of the two blow-down maps saturated by the source-side
/// exceptional divisors born after the ancestor (which removes the fiber
/// junk while keeping the extension of the transition over the exceptional
/// locus); the subvariety is then pushed through by elimination.
pub fn transport(t: &ChartTree, from: usize, to: usize, s: &Ideal) -> Ideal {
    if from == to {
        return s.clone();
    }
    let cf = t.chart(from);
    let ct = t.chart(to);
    let lca = last_common_ancestor(t, from, to);
    let phi_f = map_to_ancestor(t, from, lca);
    let phi_t = map_to_ancestor(t, to, lca);
    let nf = cf.ring.nvars();
    let mut vars: Vec<String> = cf.ring.vars().iter().map(|v| format!("lq_{v}")).collect();
    vars.extend(ct.ring.vars().iter().cloned());
    let mixed = Ring::new(vars);
    let from_side: Vec<Poly> = (0..nf).map(|i| Poly::var(&mixed, i)).collect();
    let to_side: Vec<Poly> = (0..ct.ring.nvars())
        .map(|i| Poly::var(&mixed, nf + i))
        .collect();
    let mut rel: Vec<Poly> = Vec::new();
    for (imf, imt) in phi_f.images().iter().zip(phi_t.images().iter()) {
        rel.push(&imf.substitute(&mixed, &from_side) - &imt.substitute(&mixed, &to_side));
    }
    let mut graph = Ideal::new(&mixed, rel);
    let lca_depth = t.chart(lca).depth;
    for slot in cf.visible_slots() {
        if slot >= lca_depth {
            let e = cf.exc_gen(slot).unwrap().substitute(&mixed, &from_side);
            graph = graph.saturate(&Ideal::principal(e)).0;
        }
    }
    let lifted: Vec<Poly> = s
        .gens()
        .iter()
        .map(|g| g.substitute(&mixed, &from_side))
        .collect();
    let drop: Vec<usize> = (0..nf).collect();
    let elim = graph.with_extra(&lifted).eliminate(&drop);
    // kept variables are the target chart's in order; rebuild positionally
    let out: Vec<Poly> = elim
        .gens()
        .iter()
        .map(|g| Poly::from_terms(&ct.ring, g.terms().map(|(m, c)| (m.clone(), c.clone()))))
        .collect();
    Ideal::new(&ct.ring, out)
}

/// Construct and validate a witness for V(z) inside the intersection of the
/// divisors at `slots` of chart `chart`. The auxiliary polynomials are
/// random small-integer combinations of generators of z outside the carrier,
/// retried until the height condition holds and both radical inclusions
/// validate; bounded retries, then an identification error.
pub fn build_witness(
    t: &ChartTree,
    chart: usize,
    z: &Ideal,
    slots: &[usize],
) -> Result<SubvarietyWitness> {
    let c = t.chart(chart);
    let i = carrier_ideal(c, slots);
    let d_i = i.dimension();
    let d_iz = i.with_extra(z.gens()).dimension();
    if d_iz < 0 || d_i < d_iz {
        return Err(Error::Identification(
            "center does not lie in the carrier intersection".into(),
        ));
    }
    let r = (d_i - d_iz) as usize;
    let candidates: Vec<Poly> = z
        .gens()
        .iter()
        .map(|g| g.primitive_part())
        .filter(|g| !g.is_constant() && !i.contains(g))
        .collect();
    if r > 0 && candidates.is_empty() {
        return Err(Error::Identification(
            "no auxiliary generators outside the carrier".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_d1f1);
    for _ in 0..24 {
        let aux: Vec<Poly> = (0..r)
            .map(|_| random_combo(&mut rng, &candidates, &c.ring))
            .collect();
        let a = i.with_extra(&aux);
        if a.dimension() != d_iz {
            continue; // height condition failed, re-roll
        }
        // f must cut away exactly the components of A not containing V(z)
        let (extra, _) = a.saturate(z);
        let denominator = if extra.is_unit() {
            Poly::one(&c.ring)
        } else {
            let eg: Vec<Poly> = extra
                .gens()
                .iter()
                .map(|g| g.primitive_part())
                .filter(|g| !g.is_constant())
                .collect();
            if eg.is_empty() {
                continue;
            }
            let f = random_combo(&mut rng, &eg, &c.ring);
            if z.radical_contains(&f) {
                continue; // f may not vanish on V(z)
            }
            f
        };
        let w = SubvarietyWitness {
            chart,
            carrier_slots: slots.to_vec(),
            auxiliary: aux,
            denominator,
        };
        // a-posteriori validation: both radical inclusions in the home chart
        let recovered = witness_locus(t, &w, chart, slots)?;
        if radical_equal(&recovered, z) {
            return Ok(w);
        }
    }
    Err(Error::Identification(
        "failed to construct a valid subvariety witness".into(),
    ))
}

/// Evaluate the witness recipe in a target chart whose divisors at
/// `carrier_slots` cut out the carrier there: (Σ carrier + Σ p_i) saturated
/// by f, with the auxiliary hypersurfaces transported when the target is not
/// the witness's home chart.
pub fn witness_locus(
    t: &ChartTree,
    w: &SubvarietyWitness,
    target: usize,
    carrier_slots: &[usize],
) -> Result<Ideal> {
    let ct = t.chart(target);
    for &s in carrier_slots {
        if ct.exc_gen(s).is_none() {
            return Err(Error::Identification(format!(
                "carrier divisor slot {s} not visible in chart {target}"
            )));
        }
    }
    let mut a = carrier_ideal(ct, carrier_slots);
    let home = t.chart(w.chart);
    for p in &w.auxiliary {
        let hyper = transport(t, w.chart, target, &Ideal::principal(p.clone()));
        a = a.sum(&hyper);
    }
    if w.denominator.is_constant() {
        return Ok(a);
    }
    let f = transport(
        t,
        w.chart,
        target,
        &Ideal::principal(w.denominator.clone()),
    );
    debug_assert!(Ring::same_ring(w.denominator.ring(), &home.ring));
    Ok(a.saturate(&f).0)
}

/// Decide whether two same-depth birth events create the same global
/// divisor. `slot_label` yields the global label of an earlier-born divisor
/// at a (chart, slot) pair.
fn events_equal<F>(t: &ChartTree, slot_label: F, e1: usize, e2: usize) -> Result<bool>
where
    F: Fn(usize, usize) -> usize,
{
    if e1 == e2 {
        return Ok(true);
    }
    let c1 = t.chart(e1);
    let c2 = t.chart(e2);
    let z1 = center_of(t, e1);
    let z2 = center_of(t, e2);
    let s1 = containing_slots(c1, &z1);
    let s2 = containing_slots(c2, &z2);
    // a-priori rule: centers lying in different exceptional divisors cannot
    // give birth to the same divisor
    let mut l1: Vec<usize> = s1.iter().map(|&s| slot_label(e1, s)).collect();
    let mut l2: Vec<usize> = s2.iter().map(|&s| slot_label(e2, s)).collect();
    l1.sort_unstable();
    l2.sort_unstable();
    if l1 != l2 {
        return Ok(false);
    }
    // equal images in the root chart are necessary
    let img1 = root_image(c1, &z1);
    let img2 = root_image(c2, &z2);
    if img1.canonical_string() != img2.canonical_string() {
        return Ok(false);
    }
    if s1.is_empty() {
        // away from all exceptional divisors the blow-downs are
        // isomorphisms, so equal root images decide
        return Ok(true);
    }
    // shortcut: both centers equal the full intersection of the same global
    // divisors — no witness needed
    let i1 = carrier_ideal(c1, &s1);
    let i2 = carrier_ideal(c2, &s2);
    if radical_equal(&i1, &z1) && radical_equal(&i2, &z2) {
        return Ok(true);
    }
    // general case: build a witness in the first chart, transfer it to the
    // second, compare radicals there
    let w = build_witness(t, e1, &z1, &s1)?;
    let recovered = witness_locus(t, &w, e2, &s2)?;
    Ok(radical_equal(&recovered, &z2))
}

/// Assign a global label (0-based) to every birth event (= blown-up chart),
/// identifying events level by level; also returns the per-label births.
fn event_labels(t: &ChartTree) -> Result<(BTreeMap<usize, usize>, Vec<Birth>)> {
    let mut events_by_depth: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&id, c) in &t.charts {
        if !t.children(id).is_empty() {
            events_by_depth.entry(c.depth).or_default().push(id);
        }
    }
    let mut event_label: BTreeMap<usize, usize> = BTreeMap::new();
    let mut births: Vec<Birth> = Vec::new();
    for (&depth, group) in &events_by_depth {
        for &e in group {
            // labels of earlier-born divisors are already known: slot s of
            // chart c was born when the ancestor of c at depth s was blown up
            let lookup = |chart: usize, slot: usize| -> usize {
                event_label[&t.ancestry(chart)[slot]] + 1
            };
            let mut assigned = None;
            for &e2 in group {
                if e2 >= e {
                    break;
                }
                if events_equal(t, &lookup, e2, e)? {
                    assigned = Some(event_label[&e2]);
                    break;
                }
            }
            match assigned {
                Some(l) => {
                    event_label.insert(e, l);
                    births[l].event_charts.push(e);
                }
                None => {
                    let l = births.len();
                    event_label.insert(e, l);
                    births.push(Birth {
                        depth,
                        event_charts: vec![e],
                        center: center_of(t, e),
                    });
                }
            }
        }
    }
    Ok((event_label, births))
}

/// Are two local exceptional slots charts of one global divisor?
pub fn same_divisor(t: &ChartTree, a: (usize, usize), b: (usize, usize)) -> Result<bool> {
    let ca = t.chart(a.0);
    let cb = t.chart(b.0);
    if ca.exc_gen(a.1).is_none() || cb.exc_gen(b.1).is_none() {
        return Ok(false); // invisible slots carry no local divisor
    }
    // slot index equals birth depth; different birth levels never identify
    if a.1 != b.1 {
        return Ok(false);
    }
    let ea = t.ancestry(a.0)[a.1];
    let eb = t.ancestry(b.0)[b.1];
    if ea == eb {
        return Ok(true);
    }
    let (labels, _) = event_labels(t)?;
    Ok(labels[&ea] == labels[&eb])
}

/// Assign global labels to all exceptional divisors by identifying birth
/// events level by level.
pub fn collect_divisors(t: &ChartTree) -> Result<DivisorTable> {
    let (event_label, births) = event_labels(t)?;
    let mut rows = BTreeMap::new();
    for (&id, c) in &t.charts {
        let anc = t.ancestry(id);
        let row: Vec<usize> = (0..c.exceptional.len())
            .map(|slot| {
                if c.exc_gen(slot).is_some() {
                    event_label[&anc[slot]] + 1
                } else {
                    0
                }
            })
            .collect();
        rows.insert(id, row);
    }
    let mut table = DivisorTable {
        divisor_count: births.len(),
        rows,
        birth: births,
        c_components: Vec::new(),
    };
    let mut ccs = Vec::new();
    for label in 1..=table.divisor_count {
        let cc = match count_c_components(t, &table, label, true) {
            Ok(n) if n >= 1 => n,
            _ => 1,
        };
        ccs.push(cc);
    }
    table.c_components = ccs;
    Ok(table)
}

/// JSON form of the table, for embedding into a tree file under "divisors".
pub fn table_to_json(d: &DivisorTable) -> Value {
    json!({
        "divisor_count": d.divisor_count,
        "rows": d.rows.iter().map(|(id, row)| (id.to_string(), row.clone())).collect::<BTreeMap<_, _>>(),
        "c_components": d.c_components,
        "birth": d.birth.iter().map(|b| json!({
            "depth": b.depth,
            "event_charts": b.event_charts,
            "center": b.center.gens().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

/// Abstract (non-embedded) resolution flags: truncate every branch at the
/// first chart whose strict transform is smooth; all deeper charts are
/// irrelevant for the abstract resolution.
pub fn abstract_resolution(t: &ChartTree) -> (BTreeMap<usize, bool>, BTreeMap<usize, bool>) {
    let mut final_flags = BTreeMap::new();
    let mut irrelevant = BTreeMap::new();
    let mut stack = vec![(0usize, false)]; // (chart, some ancestor already final)
    while let Some((id, done_above)) = stack.pop() {
        let c = t.chart(id);
        if done_above {
            final_flags.insert(id, false);
            irrelevant.insert(id, true);
            for ch in t.children(id) {
                stack.push((ch, true));
            }
            continue;
        }
        let smooth = match c.strict_gen() {
            None => true,
            Some(g) => Ideal::principal(g.clone())
                .singular_locus(1)
                .map(|s| s.dimension() == -1)
                .unwrap_or(false),
        };
        final_flags.insert(id, smooth);
        irrelevant.insert(id, false);
        for ch in t.children(id) {
            stack.push((ch, smooth));
        }
    }
    (final_flags, irrelevant)
}

/// Charts retained by the abstract resolution whose strict transform is
/// smooth (the truncation leaves), ascending.
pub fn abstract_final_charts(t: &ChartTree) -> Vec<usize> {
    let (f, _) = abstract_resolution(t);
    f.into_iter().filter(|(_, v)| *v).map(|(id, _)| id).collect()
}

/// Number of C-irreducible components of the (Q-irreducible) divisor
/// `label`, optionally restricted to its curve on the strict transform. The
/// count is taken in every abstract-final chart where the locus is non-empty
/// and must agree; recognized shapes are lines, univariate cylinders and
/// conics. Returns 0 when the locus is empty everywhere.
pub fn count_c_components(
    t: &ChartTree,
    d: &DivisorTable,
    label: usize,
    restricted_to_strict: bool,
) -> Result<usize> {
    let mut counts: Vec<(usize, usize)> = Vec::new();
    for id in abstract_final_charts(t) {
        let c = t.chart(id);
        let Some(slot) = d.rows[&id].iter().position(|&l| l == label) else {
            continue;
        };
        let e = c.exc_gen(slot).unwrap().clone();
        let mut gens = vec![e];
        if restricted_to_strict {
            match c.strict_gen() {
                Some(s) => gens.push(s.clone()),
                None => continue,
            }
        }
        let i = Ideal::new(&c.ring, gens);
        if i.dimension() < 0 {
            continue; // empty in this chart
        }
        counts.push((id, c_components_of_locus(&i)?));
    }
    let Some(&(_, first)) = counts.first() else {
        return Ok(0);
    };
    if counts.iter().any(|&(_, n)| n != first) {
        return Err(Error::Inconsistent(format!(
            "C-component counts of divisor {label} differ across charts: {counts:?}"
        )));
    }
    Ok(first)
}

/// Recognized splitting patterns of the curves handled by the C-component
/// counter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveShape {
    Empty,
    Line,
    /// Product of distinct linear factors in one variable: that many
    /// pairwise disjoint parallel lines.
    Cylinder { components: usize },
    ConicIrreducible,
    /// Rank-2 conic: two distinct lines crossing in one point.
    ConicCrossingLines,
    ConicDoubleLine,
}

impl CurveShape {
    pub fn components(&self) -> usize {
        match self {
            CurveShape::Empty => 0,
            CurveShape::Line | CurveShape::ConicIrreducible | CurveShape::ConicDoubleLine => 1,
            CurveShape::Cylinder { components } => *components,
            CurveShape::ConicCrossingLines => 2,
        }
    }
}

/// Count C-irreducible components of a locus cut out by one or two
/// generators.
pub fn c_components_of_locus(i: &Ideal) -> Result<usize> {
    Ok(curve_shape_of_locus(i)?.components())
}

/// Classify a locus cut out by one or two generators, by eliminating a
/// variable in which a generator is linear and classifying the remaining
/// plane curve.
pub fn curve_shape_of_locus(i: &Ideal) -> Result<CurveShape> {
    let ring = i.ring();
    let gens = i.gens();
    match gens.len() {
        1 => classify_curve(&gens[0]),
        2 => {
            for (gi, g) in gens.iter().enumerate() {
                for v in 0..ring.nvars() {
                    if g.degree_in(v) != 1 {
                        continue;
                    }
                    let coeff = Poly::from_terms(
                        ring,
                        g.terms().filter(|(m, _)| m.0[v] == 1).map(|(m, c)| {
                            let mut e = m.clone();
                            e.0[v] = 0;
                            (e, c.clone())
                        }),
                    );
                    if !coeff.is_constant() || coeff.is_zero() {
                        continue;
                    }
                    let cval = coeff.terms().next().unwrap().1.clone();
                    // g = c·v + rest, so on V(g): v = (c·v − g)/c
                    let solv = (&Poly::var(ring, v).scale(&cval) - g).scale(&cval.recip());
                    let images: Vec<Poly> = (0..ring.nvars())
                        .map(|w| if w == v { solv.clone() } else { Poly::var(ring, w) })
                        .collect();
                    let other = gens[1 - gi].substitute(ring, &images);
                    return classify_curve(&other);
                }
            }
            Err(Error::UnsupportedShape(
                "no generator is linear in a variable".into(),
            ))
        }
        _ => Err(Error::UnsupportedShape(format!(
            "C-component counting expects 1 or 2 generators, got {}",
            gens.len()
        ))),
    }
}

/// Classify a single-polynomial plane locus: lines, univariate cylinders,
/// and conics in two variables.
fn classify_curve(p: &Poly) -> Result<CurveShape> {
    if p.is_zero() {
        return Err(Error::UnsupportedShape("zero polynomial".into()));
    }
    if p.is_constant() {
        return Ok(CurveShape::Empty);
    }
    let deg = p.total_degree().unwrap();
    if deg == 1 {
        return Ok(CurveShape::Line);
    }
    let support = p.support_vars();
    if support.len() == 1 {
        // univariate cylinder: one component per distinct complex root
        let v = support[0];
        let mut cs = vec![Rat::zero(); p.degree_in(v) as usize + 1];
        for (m, c) in p.terms() {
            cs[m.0[v] as usize] = c.clone();
        }
        let u = UnivariatePoly::from_coeffs(cs);
        let components = u.squarefree_part().degree().unwrap_or(0);
        return Ok(if components == 1 {
            CurveShape::Line
        } else {
            CurveShape::Cylinder { components }
        });
    }
    if deg == 2 && support.len() == 2 {
        // conic a·u² + b·u·w + c·w² + d·u + e·w + f: the rank of the
        // symmetric 3×3 matrix decides the splitting
        let (u, w) = (support[0], support[1]);
        let coeff = |eu: u32, ew: u32| -> Rat {
            p.terms()
                .find(|(m, _)| m.0[u] == eu && m.0[w] == ew)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Rat::zero)
        };
        let half = Rat::new(1.into(), 2.into());
        let m = [
            [coeff(2, 0), &coeff(1, 1) * &half, &coeff(1, 0) * &half],
            [&coeff(1, 1) * &half, coeff(0, 2), &coeff(0, 1) * &half],
            [&coeff(1, 0) * &half, &coeff(0, 1) * &half, coeff(0, 0)],
        ];
        return Ok(match rank3(&m) {
            3 => CurveShape::ConicIrreducible,
            2 => CurveShape::ConicCrossingLines,
            _ => CurveShape::ConicDoubleLine,
        });
    }
    Err(Error::UnsupportedShape(format!(
        "unrecognized curve shape: {p}"
    )))
}

fn rank3(m: &[[Rat; 3]; 3]) -> usize {
    let minor2 = |r0: usize, r1: usize, c0: usize, c1: usize| -> Rat {
        &(&m[r0][c0] * &m[r1][c1]) - &(&m[r0][c1] * &m[r1][c0])
    };
    let det3 = &(&(&m[0][0] * &minor2(1, 2, 1, 2)) - &(&m[0][1] * &minor2(1, 2, 0, 2)))
        + &(&m[0][2] * &minor2(1, 2, 0, 1));
    if !det3.is_zero() {
        return 3;
    }
    for r in [[0, 1], [0, 2], [1, 2]] {
        for c in [[0, 1], [0, 2], [1, 2]] {
            if !minor2(r[0], r[1], c[0], c[1]).is_zero() {
                return 2;
            }
        }
    }
    if m.iter().flatten().any(|x| !x.is_zero()) {
        1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::resolve::{resolve, CenterStrategy, ResolutionLimits};

    fn ideal(ring: &Arc<Ring>, gens: &[&str]) -> Ideal {
        Ideal::new(
            ring,
            gens.iter().map(|g| parse_poly(g, ring).unwrap()).collect(),
        )
    }

    fn a4_tree() -> ChartTree {
        let r = Ring::new(vec!["x", "y", "z"]);
        resolve(
            &ideal(&r, &["x^5 + y^2 + z^2"]),
            &CenterStrategy::Default,
            &ResolutionLimits::default(),
        )
        .unwrap()
    }

    #[test]
    fn a4_has_four_global_divisors() {
        let t = a4_tree();
        let d = collect_divisors(&t).unwrap();
        assert_eq!(d.divisor_count, 4);
        // the two level-3 birth events (charts 8 and 9) merge into one divisor
        assert_eq!(d.birth[3].event_charts, vec![8, 9]);
        assert_eq!(d.rows[&0], Vec::<usize>::new());
        assert_eq!(d.rows[&1], vec![1]);
        assert_eq!(d.rows[&4], vec![0, 2]);
        assert_eq!(d.rows[&8], vec![0, 2, 3]);
        assert_eq!(d.rows[&10], vec![0, 2, 0, 4]);
        assert_eq!(d.rows[&13], vec![0, 0, 3, 4]);
    }

    #[test]
    fn a4_last_divisors_coincide_across_branches() {
        let t = a4_tree();
        // charts 10/11 descend from event 8, charts 12/13 from event 9; their
        // last exceptional divisors are one global divisor
        assert!(same_divisor(&t, (10, 3), (12, 3)).unwrap());
        assert!(same_divisor(&t, (11, 3), (13, 3)).unwrap());
        assert!(same_divisor(&t, (12, 3), (10, 3)).unwrap()); // symmetric
        assert!(same_divisor(&t, (10, 3), (10, 3)).unwrap()); // reflexive
        // different slots never identify (different birth levels)
        assert!(!same_divisor(&t, (10, 1), (10, 3)).unwrap());
        // invisible slots never identify
        assert!(!same_divisor(&t, (10, 0), (12, 0)).unwrap());
    }

    #[test]
    fn plane_blowup_patches_share_the_divisor() {
        let r = Ring::new(vec!["x", "y"]);
        let t = resolve(
            &ideal(&r, &["y^2 - x^3"]),
            &CenterStrategy::Default,
            &ResolutionLimits::default(),
        )
        .unwrap();
        // the two standard patches of the first plane blow-up see the same
        // exceptional divisor
        assert!(same_divisor(&t, (1, 0), (2, 0)).unwrap());
    }

    #[test]
    fn single_blowup_divisor_visible_in_all_patches() {
        let r = Ring::new(vec!["x", "y", "z"]);
        let t = resolve(
            &ideal(&r, &["x^2 + y^2 + z^2"]),
            &CenterStrategy::Default,
            &ResolutionLimits::default(),
        )
        .unwrap();
        let d = collect_divisors(&t).unwrap();
        assert_eq!(d.divisor_count, 1);
        for id in [1, 2, 3] {
            assert_eq!(d.rows[&id], vec![1]);
        }
    }

    #[test]
    fn row_nonzero_count_matches_visible_slots() {
        let t = a4_tree();
        let d = collect_divisors(&t).unwrap();
        for (&id, row) in &d.rows {
            let visible = t.chart(id).visible_slots().len();
            assert_eq!(row.iter().filter(|&&l| l != 0).count(), visible);
        }
    }

    #[test]
    fn a4_abstract_resolution_truncates_after_strict_smooth() {
        let t = a4_tree();
        let (finals, irrelevant) = abstract_resolution(&t);
        let f: Vec<usize> = finals
            .iter()
            .filter(|(_, &v)| v)
            .map(|(&id, _)| id)
            .collect();
        assert_eq!(f, vec![2, 3, 4, 5, 6]);
        for id in 7..=13 {
            assert!(irrelevant[&id]);
        }
        for id in 0..=6 {
            assert!(!irrelevant[&id]);
        }
    }

    #[test]
    fn smooth_input_abstract_is_root() {
        let r = Ring::new(vec!["x", "y"]);
        let t = resolve(
            &ideal(&r, &["x"]),
            &CenterStrategy::Default,
            &ResolutionLimits::default(),
        )
        .unwrap();
        let (finals, irrelevant) = abstract_resolution(&t);
        assert!(finals[&0]);
        assert!(!irrelevant[&0]);
    }

    #[test]
    fn a4_c_component_counts() {
        let t = a4_tree();
        let d = collect_divisors(&t).unwrap();
        // the first two divisors restrict to pairs of conjugate lines on the
        // strict transform; the later two do not meet it in the abstract part
        assert_eq!(count_c_components(&t, &d, 1, true).unwrap(), 2);
        assert_eq!(count_c_components(&t, &d, 2, true).unwrap(), 2);
        assert_eq!(d.c_components[0], 2);
        assert_eq!(d.c_components[1], 2);
        // unrestricted divisors are irreducible
        assert_eq!(count_c_components(&t, &d, 1, false).unwrap(), 1);
        assert_eq!(count_c_components(&t, &d, 2, false).unwrap(), 1);
    }

    #[test]
    fn c_component_shapes() {
        let r = Ring::new(vec!["y_0", "y_1", "y_2"]);
        // two conjugate components
        assert_eq!(
            c_components_of_locus(&ideal(&r, &["y_2", "y_0^2 + 1"])).unwrap(),
            2
        );
        let r2 = Ring::new(vec!["x", "y"]);
        assert_eq!(c_components_of_locus(&ideal(&r2, &["x"])).unwrap(), 1);
        let r3 = Ring::new(vec!["x", "y", "z"]);
        // splits over the reals already
        assert_eq!(
            c_components_of_locus(&ideal(&r3, &["x", "y^2 - 2"])).unwrap(),
            2
        );
        // irreducible conic
        assert_eq!(
            c_components_of_locus(&ideal(&r3, &["z", "x^2 + y^2 - 1"])).unwrap(),
            1
        );
        // pair of crossing lines (rank-2 conic)
        assert_eq!(
            c_components_of_locus(&ideal(&r3, &["z", "x^2 - y^2"])).unwrap(),
            2
        );
        // double line
        assert_eq!(c_components_of_locus(&ideal(&r3, &["z", "x^2"])).unwrap(), 1);
    }

    #[test]
    fn witness_recovers_point_on_divisor() {
        // a point on the exceptional curve of the cusp's first blow-up must
        // be recovered by its witness in both patches containing it
        let r = Ring::new(vec!["x", "y"]);
        let t = resolve(
            &ideal(&r, &["y^2 - x^3"]),
            &CenterStrategy::Default,
            &ResolutionLimits::default(),
        )
        .unwrap();
        let c1 = t.chart(1); // vars (x, x1_1), exceptional V(x)
        let z = ideal(&c1.ring, &["x", "x1_1 - 1"]);
        let w = build_witness(&t, 1, &z, &[0]).unwrap();
        let again = witness_locus(&t, &w, 1, &[0]).unwrap();
        assert!(radical_equal(&again, &z));
        // the same global point in the other patch is (y, x1_0 − 1)
        let c2 = t.chart(2);
        let rec = witness_locus(&t, &w, 2, &[0]).unwrap();
        assert!(radical_equal(&rec, &ideal(&c2.ring, &["y", "x1_0 - 1"])));
        // and a different point is rejected
        assert!(!radical_equal(&rec, &ideal(&c2.ring, &["y", "x1_0 - 2"])));
    }

    #[test]
    fn table_serializes() {
        let t = a4_tree();
        let d = collect_divisors(&t).unwrap();
        let v = table_to_json(&d);
        assert_eq!(v["divisor_count"], 4);
        assert_eq!(v["rows"]["10"][3], 4);
        assert_eq!(v["birth"][3]["event_charts"][1], 9);
    }
}
