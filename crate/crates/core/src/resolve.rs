//! The resolution driver: builds the tree of charts by repeatedly choosing
//! non-singular centers and blowing up until every final chart has a smooth
//! strict transform meeting the exceptional arrangement in simple normal
//! crossings. Also owns pruning and JSON persistence.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::blowup::{blow_up_chart, Chart, ChartMap};
use crate::error::Error;
use crate::ideal::Ideal;
use crate::parse::parse_poly;
use crate::poly::{Poly, Rat};
use crate::ring::Ring;
use crate::univar::{rational_roots, UnivariatePoly};
use crate::Result;

#[derive(Debug, Clone, Copy)]
pub struct ResolutionLimits {
    pub max_depth: usize,
    pub max_charts: usize,
}

impl Default for ResolutionLimits {
    fn default() -> Self {
        ResolutionLimits {
            max_depth: 12,
            max_charts: 512,
        }
    }
}

/// How centers are chosen. Scripted centers are polynomial strings parsed in
/// the ring of the chart they apply to, keyed by chart label (labels are
/// deterministic, assigned in breadth-first order).
#[derive(Debug, Clone)]
pub enum CenterStrategy {
    Default,
    Scripted {
        name: String,
        centers: BTreeMap<usize, Vec<String>>,
    },
}

impl CenterStrategy {
    pub fn name(&self) -> &str {
        match self {
            CenterStrategy::Default => "default",
            CenterStrategy::Scripted { name, .. } => name,
        }
    }

    pub fn scripted(name: &str, centers: &[(usize, &[&str])]) -> CenterStrategy {
        CenterStrategy::Scripted {
            name: name.to_string(),
            centers: centers
                .iter()
                .map(|(id, gens)| (*id, gens.iter().map(|s| s.to_string()).collect()))
                .collect(),
        }
    }
}

/// The rooted tree of charts produced by `resolve`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartTree {
    pub input: Ideal,
    pub strategy_name: String,
    /// Charts keyed by label; labels may have gaps after pruning.
    pub charts: BTreeMap<usize, Chart>,
    pub final_flags: BTreeMap<usize, bool>,
    pub pruned: bool,
}

impl ChartTree {
    pub fn root_ring(&self) -> &Arc<Ring> {
        self.input.ring()
    }

    pub fn chart(&self, id: usize) -> &Chart {
        &self.charts[&id]
    }

    pub fn final_chart_ids(&self) -> Vec<usize> {
        self.final_flags
            .iter()
            .filter(|(_, &f)| f)
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn children(&self, id: usize) -> Vec<usize> {
        self.charts
            .iter()
            .filter(|(_, c)| c.parent == Some(id))
            .map(|(&i, _)| i)
            .collect()
    }

    /// Path of chart ids from the root down to `id`, inclusive.
    pub fn ancestry(&self, id: usize) -> Vec<usize> {
        let mut path = vec![id];
        let mut cur = id;
        while let Some(p) = self.charts[&cur].parent {
            path.push(p);
            cur = p;
        }
        path.reverse();
        path
    }
}

/// SNC finality test. A chart is final when its ambient is affine space, the
/// strict transform is smooth, and the divisor formed by the strict
/// transform plus all visible exceptional components is a simple-normal-
/// crossings divisor: for every subset of s components, the subset ideal
/// plus its s×s Jacobian minors cuts out the empty set (s ≤ n), and subsets
/// of more than n components have empty intersection.
pub fn is_final(c: &Chart) -> bool {
    assert!(
        c.ambient.is_zero_ideal(),
        "finality test expects an affine-space chart"
    );
    let n = c.ring.nvars();
    let mut components: Vec<Poly> = Vec::new();
    for slot in c.visible_slots() {
        components.push(c.exc_gen(slot).unwrap().clone());
    }
    if let Some(g) = c.strict_gen() {
        components.push(g.clone());
    }
    let k = components.len();
    for mask in 1u32..(1 << k) {
        let subset: Vec<Poly> = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| components[i].clone())
            .collect();
        let s = subset.len();
        let i = Ideal::new(&c.ring, subset);
        if s > n {
            if i.dimension() != -1 {
                return false;
            }
        } else {
            let with_minors = i
                .singular_locus(s)
                .expect("s ≤ min(#gens, n) by construction");
            if with_minors.dimension() != -1 {
                return false;
            }
        }
    }
    true
}

/// All rational points of a zero-dimensional ideal, sorted
/// lexicographically by coordinates.
pub fn rational_points(s: &Ideal) -> Result<Vec<Vec<Rat>>> {
    if s.dimension() != 0 {
        return Err(Error::Invalid(
            "rational_points expects a zero-dimensional ideal".into(),
        ));
    }
    let ring = s.ring();
    let n = ring.nvars();
    let mut coords: Vec<Vec<Rat>> = Vec::new();
    for v in 0..n {
        let drop: Vec<usize> = (0..n).filter(|&w| w != v).collect();
        let elim = s.eliminate(&drop);
        let gb = elim.groebner(crate::ring::TermOrder::Lex);
        let p = gb
            .first()
            .ok_or_else(|| Error::Invalid("unbounded coordinate in 0-dim ideal".into()))?;
        let mut cs = vec![Rat::zero(); p.degree_in(0) as usize + 1];
        for (m, c) in p.terms() {
            cs[m.0[0] as usize] = c.clone();
        }
        let u = UnivariatePoly::from_coeffs(cs);
        coords.push(rational_roots(&u).into_iter().map(|(r, _)| r).collect());
    }
    let count: usize = coords.iter().map(|c| c.len().max(1)).product();
    if count > 10_000 {
        return Err(Error::LimitExceeded(
            "too many candidate rational points".into(),
        ));
    }
    let mut points = Vec::new();
    let mut idx = vec![0usize; n];
    'outer: loop {
        if coords.iter().any(|c| c.is_empty()) {
            break;
        }
        let p: Vec<Rat> = (0..n).map(|v| coords[v][idx[v]].clone()).collect();
        if s.gens().iter().all(|g| g.eval(&p).is_zero()) {
            points.push(p);
        }
        let mut v = 0;
        loop {
            if v == n {
                break 'outer;
            }
            idx[v] += 1;
            if idx[v] < coords[v].len() {
                break;
            }
            idx[v] = 0;
            v += 1;
        }
    }
    points.sort();
    Ok(points)
}

fn point_center(ring: &Arc<Ring>, p: &[Rat]) -> Ideal {
    Ideal::new(
        ring,
        (0..ring.nvars())
            .map(|v| &Poly::var(ring, v) - &Poly::constant(ring, p[v].clone()))
            .collect(),
    )
}

/// Check that an ideal defines a smooth complete intersection: its reduced
/// Groebner basis has exactly n − dim generators and the Jacobian minors of
/// that size vanish nowhere on it.
fn smooth_complete_intersection(i: &Ideal) -> Option<Ideal> {
    let n = i.ring().nvars();
    let d = i.dimension();
    if d < 0 {
        return None;
    }
    let codim = (n as i32 - d) as usize;
    let gb = i.groebner(crate::ring::TermOrder::DegRevLex);
    if gb.len() != codim {
        return None;
    }
    let cand = Ideal::new(i.ring(), gb.to_vec());
    let sing = cand.singular_locus(codim).ok()?;
    if sing.dimension() == -1 {
        Some(cand)
    } else {
        None
    }
}

/// The default center heuristic. If the strict transform is singular, blow
/// up its singular locus: a single rational point when the locus is
/// zero-dimensional (lexicographically smallest), or the locus itself if it
/// is a smooth complete intersection. Otherwise pick the worst-dimensional
/// locus violating a normal-crossings condition and center there.
pub fn default_center(c: &Chart) -> Result<Ideal> {
    let ring = &c.ring;
    if let Some(g) = c.strict_gen() {
        let mut sing = Ideal::principal(g.clone()).singular_locus(1)?;
        for _ in 0..3 {
            match sing.dimension() {
                -1 => break,
                0 => {
                    let pts = rational_points(&sing)?;
                    let p = pts.first().ok_or_else(|| {
                        Error::StrategyFailure(
                            "singular locus has no rational point".into(),
                        )
                    })?;
                    return Ok(point_center(ring, p));
                }
                _ => {
                    if let Some(center) = smooth_complete_intersection(&sing) {
                        return Ok(center);
                    }
                    sing = sing.singular_locus(
                        (ring.nvars() as i32 - sing.dimension()) as usize,
                    )?;
                }
            }
        }
        if sing.dimension() != -1 {
            return Err(Error::StrategyFailure(
                "no smooth center found inside the singular locus".into(),
            ));
        }
    }

    // strict transform smooth (or invisible): find the worst normal-crossings
    // violation among the components
    let n = ring.nvars();
    let mut components: Vec<Poly> = Vec::new();
    for slot in c.visible_slots() {
        components.push(c.exc_gen(slot).unwrap().clone());
    }
    if let Some(g) = c.strict_gen() {
        components.push(g.clone());
    }
    let k = components.len();
    let mut bad: Vec<(i32, Ideal, Ideal)> = Vec::new(); // (dim, bad locus, subset ideal)
    for mask in 1u32..(1 << k) {
        let subset: Vec<Poly> = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| components[i].clone())
            .collect();
        let s = subset.len();
        let i = Ideal::new(ring, subset);
        let locus = if s > n {
            i.clone()
        } else {
            i.singular_locus(s)?
        };
        let d = locus.dimension();
        if d >= 0 {
            bad.push((d, locus, i));
        }
    }
    if bad.is_empty() {
        return Err(Error::StrategyFailure(
            "default_center called on a final chart".into(),
        ));
    }
    bad.sort_by(|a, b| {
        b.0.cmp(&a.0)
            .then_with(|| a.1.canonical_string().cmp(&b.1.canonical_string()))
    });
    let (d, locus, subset) = &bad[0];
    if *d == 0 {
        let pts = rational_points(locus)?;
        let p = pts.first().ok_or_else(|| {
            Error::StrategyFailure("normal-crossings violation has no rational point".into())
        })?;
        return Ok(point_center(ring, p));
    }
    // positive-dimensional violation: blow up the subset intersection if it
    // is itself a smooth complete intersection of the same dimension
    if subset.dimension() == *d {
        if let Some(center) = smooth_complete_intersection(subset) {
            return Ok(center);
        }
    }
    if let Some(center) = smooth_complete_intersection(locus) {
        return Ok(center);
    }
    Err(Error::StrategyFailure(
        "no smooth center found for the normal-crossings violation".into(),
    ))
}

fn scripted_center(c: &Chart, centers: &BTreeMap<usize, Vec<String>>) -> Result<Ideal> {
    let gens = centers.get(&c.id).ok_or_else(|| {
        Error::StrategyFailure(format!("no scripted center for chart {}", c.id))
    })?;
    let parsed: Result<Vec<Poly>> = gens.iter().map(|g| parse_poly(g, &c.ring)).collect();
    let center = Ideal::new(&c.ring, parsed?);
    if center.is_unit() || center.is_zero_ideal() {
        return Err(Error::StrategyFailure(format!(
            "scripted center for chart {} is improper",
            c.id
        )));
    }
    // the center must be non-singular
    let n = c.ring.nvars();
    let d = center.dimension();
    let codim = (n as i32 - d) as usize;
    let ok = codim <= center.gens().len()
        && center
            .singular_locus(codim)
            .map(|s| s.dimension() == -1)
            .unwrap_or(false);
    if !ok {
        return Err(Error::StrategyFailure(format!(
            "scripted center for chart {} is singular",
            c.id
        )));
    }
    Ok(center)
}

enum Outcome {
    Final,
    Children(Vec<Chart>),
}

/// Build the resolution tree; on failure (limits, strategy) returns the
/// partial tree together with the error.
pub fn resolve_partial(
    input: &Ideal,
    strategy: &CenterStrategy,
    limits: &ResolutionLimits,
) -> (ChartTree, Option<Error>) {
    let mut tree = ChartTree {
        input: input.clone(),
        strategy_name: strategy.name().to_string(),
        charts: BTreeMap::new(),
        final_flags: BTreeMap::new(),
        pruned: false,
    };
    if let Err(e) = validate_input(input) {
        return (tree, Some(e));
    }
    let root = Chart::root(input);
    tree.charts.insert(0, root);
    tree.final_flags.insert(0, false);
    let mut frontier = vec![0usize];
    let mut next_id = 1usize;

    while !frontier.is_empty() {
        let outcomes: Vec<(usize, Result<Outcome>)> = frontier
            .par_iter()
            .map(|&id| {
                let c = &tree.charts[&id];
                if is_final(c) {
                    return (id, Ok(Outcome::Final));
                }
                if c.depth >= limits.max_depth {
                    return (
                        id,
                        Err(Error::LimitExceeded(format!(
                            "max depth {} reached at chart {}",
                            limits.max_depth, id
                        ))),
                    );
                }
                let center = match strategy {
                    CenterStrategy::Default => default_center(c),
                    CenterStrategy::Scripted { centers, .. } => scripted_center(c, centers),
                };
                let center = match center {
                    Ok(ct) => ct,
                    Err(e) => return (id, Err(e)),
                };
                match blow_up_chart(c, &center) {
                    Ok(res) => (id, Ok(Outcome::Children(res.charts))),
                    Err(e) => (id, Err(e)),
                }
            })
            .collect();

        let mut next_frontier = Vec::new();
        for (id, outcome) in outcomes {
            match outcome {
                Ok(Outcome::Final) => {
                    tree.final_flags.insert(id, true);
                }
                Ok(Outcome::Children(children)) => {
                    for mut child in children {
                        if tree.charts.len() >= limits.max_charts {
                            return (
                                tree,
                                Some(Error::LimitExceeded(format!(
                                    "max chart count {} reached",
                                    limits.max_charts
                                ))),
                            );
                        }
                        child.id = next_id;
                        child.parent = Some(id);
                        tree.charts.insert(next_id, child);
                        tree.final_flags.insert(next_id, false);
                        next_frontier.push(next_id);
                        next_id += 1;
                    }
                }
                Err(e) => return (tree, Some(e)),
            }
        }
        frontier = next_frontier;
    }
    (tree, None)
}

pub fn resolve(
    input: &Ideal,
    strategy: &CenterStrategy,
    limits: &ResolutionLimits,
) -> Result<ChartTree> {
    let (tree, err) = resolve_partial(input, strategy, limits);
    match err {
        None => Ok(tree),
        Some(e) => Err(e),
    }
}

fn validate_input(input: &Ideal) -> Result<()> {
    let n = input.ring().nvars();
    if !(1..=3).contains(&n) {
        return Err(Error::Invalid(format!(
            "hypersurface pipeline supports 1 to 3 variables, got {n}"
        )));
    }
    if input.gens().len() != 1 {
        return Err(Error::Invalid(
            "input must be a non-zero principal ideal".into(),
        ));
    }
    let f = &input.gens()[0];
    if f.is_constant() && !f.is_zero() {
        return Ok(()); // empty hypersurface; resolves trivially
    }
    // reducedness: a square factor would make the singular locus a divisor
    let sing = input.singular_locus(1)?;
    if sing.dimension() >= n as i32 - 1 {
        return Err(Error::Invalid(
            "input hypersurface is not reduced (singular in codimension 0)".into(),
        ));
    }
    Ok(())
}

/// Ideal of the closure of the image in the root of the subvariety V(s) of a
/// chart, computed by eliminating the chart variables from the graph of
/// map_to_root.
pub fn root_image(c: &Chart, s: &Ideal) -> Ideal {
    assert!(Ring::same_ring(s.ring(), &c.ring));
    let root = c.map_to_root.target();
    let mut vars: Vec<String> = c.ring.vars().to_vec();
    for v in root.vars() {
        vars.push(format!("oq_{v}"));
    }
    let mixed = Ring::new(vars);
    let mut gens: Vec<Poly> = s.gens().iter().map(|g| g.lift_to(&mixed)).collect();
    for (i, im) in c.map_to_root.images().iter().enumerate() {
        let ov = Poly::var(&mixed, c.ring.nvars() + i);
        gens.push(&ov - &im.lift_to(&mixed));
    }
    let drop: Vec<usize> = (0..c.ring.nvars()).collect();
    let elim = Ideal::new(&mixed, gens).eliminate(&drop);
    // kept variables are oq_* in root order; rebuild positionally
    let out: Vec<Poly> = elim
        .gens()
        .iter()
        .map(|g| {
            Poly::from_terms(
                root,
                g.terms().map(|(m, c)| (m.clone(), c.clone())),
            )
        })
        .collect();
    Ideal::new(root, out)
}

/// The set of root-image fingerprints of all non-empty strata (intersections
/// of visible components) of a final chart.
fn stratum_fingerprints(c: &Chart) -> Vec<String> {
    let ring = &c.ring;
    let n = ring.nvars();
    let mut components: Vec<Poly> = Vec::new();
    for slot in c.visible_slots() {
        components.push(c.exc_gen(slot).unwrap().clone());
    }
    if let Some(g) = c.strict_gen() {
        components.push(g.clone());
    }
    let k = components.len();
    let mut out = Vec::new();
    for mask in 1u32..(1 << k) {
        if (mask.count_ones() as usize) > n {
            continue;
        }
        let subset: Vec<Poly> = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| components[i].clone())
            .collect();
        let i = Ideal::new(ring, subset);
        if i.dimension() == -1 {
            continue;
        }
        out.push(root_image(c, &i).canonical_string());
    }
    out.sort();
    out.dedup();
    out
}

/// Remove final charts whose every stratum is visible (same root image) in
/// some retained final chart; retained set deterministic (lowest labels
/// kept). Conservative: internal charts are never removed.
pub fn prune(t: &ChartTree) -> ChartTree {
    let final_ids = t.final_chart_ids();
    let prints: BTreeMap<usize, Vec<String>> = final_ids
        .par_iter()
        .map(|&id| (id, stratum_fingerprints(&t.charts[&id])))
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    let mut retained: Vec<usize> = final_ids.clone();
    for &id in final_ids.iter().rev() {
        let mine = &prints[&id];
        let covered = mine.iter().all(|s| {
            retained
                .iter()
                .any(|&o| o != id && prints[&o].contains(s))
        });
        if covered {
            retained.retain(|&o| o != id);
        }
    }
    let mut out = t.clone();
    for &id in &final_ids {
        if !retained.contains(&id) {
            out.charts.remove(&id);
            out.final_flags.remove(&id);
        }
    }
    out.pruned = out.pruned || out.charts.len() != t.charts.len();
    out
}

const SCHEMA_VERSION: u64 = 1;

fn ideal_to_json(i: &Ideal) -> Value {
    if i.is_unit() && i.gens().len() == 1 && i.gens()[0].is_one() {
        return json!(["1"]);
    }
    json!(i.gens().iter().map(|g| g.to_string()).collect::<Vec<_>>())
}

fn map_to_json(m: &ChartMap) -> Value {
    json!(m.images().iter().map(|p| p.to_string()).collect::<Vec<_>>())
}

pub fn tree_to_json(t: &ChartTree) -> Value {
    let charts: Vec<Value> = t
        .charts
        .values()
        .map(|c| {
            let exceptional: Vec<Value> = (0..c.exceptional.len())
                .map(|slot| match c.exc_gen(slot) {
                    Some(_) => ideal_to_json(&c.exceptional[slot]),
                    None => json!("1"),
                })
                .collect();
            json!({
                "id": c.id,
                "parent": c.parent,
                "chart_index": c.chart_index,
                "depth": c.depth,
                "vars": c.ring.vars(),
                "ambient": ideal_to_json(&c.ambient),
                "strict": ideal_to_json(&c.strict),
                "exceptional": exceptional,
                "center_in_parent": c.center_in_parent.as_ref().map(ideal_to_json),
                "map_to_root": map_to_json(&c.map_to_root),
                "map_to_parent": c.map_to_parent.as_ref().map(map_to_json),
                "strict_sat_exponent": c.strict_sat_exponent,
                "final": t.final_flags.get(&c.id).copied().unwrap_or(false),
            })
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "ring": {"vars": t.root_ring().vars()},
        "input": {"generators": t.input.gens().iter().map(|g| g.to_string()).collect::<Vec<_>>()},
        "strategy": t.strategy_name,
        "pruned": t.pruned,
        "charts": charts,
    })
}

pub fn save(t: &ChartTree, path: &Path) -> Result<()> {
    let text = serde_json::to_string_pretty(&tree_to_json(t))
        .map_err(|e| Error::Schema(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| Error::Schema(e.to_string()))
}

fn jstr(v: &Value, key: &str) -> Result<String> {
    v.get(key)
        .and_then(Value::as_str)
        .map(str::to_string)
        .ok_or_else(|| Error::Schema(format!("missing string field '{key}'")))
}

fn jarr<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    v.get(key)
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Schema(format!("missing array field '{key}'")))
}

fn parse_ideal_json(v: &Value, ring: &Arc<Ring>) -> Result<Ideal> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Schema("ideal must be an array of strings".into()))?;
    let mut gens = Vec::new();
    for g in arr {
        let s = g
            .as_str()
            .ok_or_else(|| Error::Schema("ideal generator must be a string".into()))?;
        gens.push(parse_poly(s, ring)?);
    }
    Ok(Ideal::new(ring, gens))
}

fn parse_map_json(
    v: &Value,
    source: &Arc<Ring>,
    target: &Arc<Ring>,
) -> Result<ChartMap> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Schema("map must be an array of strings".into()))?;
    if arr.len() != target.nvars() {
        return Err(Error::Schema("map image count mismatch".into()));
    }
    let mut images = Vec::new();
    for s in arr {
        let s = s
            .as_str()
            .ok_or_else(|| Error::Schema("map image must be a string".into()))?;
        images.push(parse_poly(s, source)?);
    }
    Ok(ChartMap::new(source, target, images))
}

pub fn tree_from_json(v: &Value) -> Result<ChartTree> {
    let version = v
        .get("schema_version")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::Schema("missing schema_version".into()))?;
    if version != SCHEMA_VERSION {
        return Err(Error::Schema(format!(
            "unsupported schema_version {version}, expected {SCHEMA_VERSION}"
        )));
    }
    let ring_v = v
        .get("ring")
        .ok_or_else(|| Error::Schema("missing ring".into()))?;
    let vars: Vec<String> = jarr(ring_v, "vars")?
        .iter()
        .map(|s| {
            s.as_str()
                .map(str::to_string)
                .ok_or_else(|| Error::Schema("variable name must be a string".into()))
        })
        .collect::<Result<_>>()?;
    if vars.is_empty() {
        return Err(Error::Schema("empty variable list".into()));
    }
    let root_ring = Ring::new(vars);
    let input_v = v
        .get("input")
        .ok_or_else(|| Error::Schema("missing input".into()))?;
    let input_gens: Vec<Poly> = jarr(input_v, "generators")?
        .iter()
        .map(|s| {
            s.as_str()
                .ok_or_else(|| Error::Schema("generator must be a string".into()))
                .and_then(|s| parse_poly(s, &root_ring))
        })
        .collect::<Result<_>>()?;
    let input = Ideal::new(&root_ring, input_gens);
    let strategy_name = jstr(v, "strategy")?;
    let pruned = v.get("pruned").and_then(Value::as_bool).unwrap_or(false);

    let mut tree = ChartTree {
        input,
        strategy_name,
        charts: BTreeMap::new(),
        final_flags: BTreeMap::new(),
        pruned,
    };
    // charts appear in id order (parents before children)
    for cv in jarr(v, "charts")? {
        let id = cv
            .get("id")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Schema("missing chart id".into()))? as usize;
        let parent = cv.get("parent").and_then(Value::as_u64).map(|p| p as usize);
        let chart_index = cv
            .get("chart_index")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Schema("missing chart_index".into()))?
            as usize;
        let depth = cv
            .get("depth")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Schema("missing depth".into()))? as usize;
        let cvars: Vec<String> = jarr(cv, "vars")?
            .iter()
            .map(|s| {
                s.as_str()
                    .map(str::to_string)
                    .ok_or_else(|| Error::Schema("variable name must be a string".into()))
            })
            .collect::<Result<_>>()?;
        let ring = Ring::new(cvars);
        let ambient = parse_ideal_json(
            cv.get("ambient")
                .ok_or_else(|| Error::Schema("missing ambient".into()))?,
            &ring,
        )?;
        let strict = parse_ideal_json(
            cv.get("strict")
                .ok_or_else(|| Error::Schema("missing strict".into()))?,
            &ring,
        )?;
        let mut exceptional = Vec::new();
        for ev in jarr(cv, "exceptional")? {
            if ev.as_str() == Some("1") {
                exceptional.push(Ideal::unit(&ring));
            } else {
                exceptional.push(parse_ideal_json(ev, &ring)?);
            }
        }
        let parent_ring = match parent {
            None => None,
            Some(p) => Some(
                tree.charts
                    .get(&p)
                    .ok_or_else(|| Error::Schema(format!("chart {id} before parent {p}")))?
                    .ring
                    .clone(),
            ),
        };
        let center_in_parent = match cv.get("center_in_parent") {
            None | Some(Value::Null) => None,
            Some(civ) => {
                let pr = parent_ring
                    .as_ref()
                    .ok_or_else(|| Error::Schema("center on root chart".into()))?;
                Some(parse_ideal_json(civ, pr)?)
            }
        };
        let map_to_root = parse_map_json(
            cv.get("map_to_root")
                .ok_or_else(|| Error::Schema("missing map_to_root".into()))?,
            &ring,
            &root_ring,
        )?;
        let map_to_parent = match cv.get("map_to_parent") {
            None | Some(Value::Null) => None,
            Some(mv) => {
                let pr = parent_ring
                    .as_ref()
                    .ok_or_else(|| Error::Schema("parent map on root chart".into()))?;
                Some(parse_map_json(mv, &ring, pr)?)
            }
        };
        let strict_sat_exponent = cv
            .get("strict_sat_exponent")
            .and_then(Value::as_u64)
            .unwrap_or(0) as u32;
        let final_flag = cv.get("final").and_then(Value::as_bool).unwrap_or(false);
        tree.charts.insert(
            id,
            Chart {
                id,
                parent,
                chart_index,
                depth,
                ring,
                ambient,
                strict,
                exceptional,
                center_in_parent,
                map_to_parent,
                map_to_root,
                strict_sat_exponent,
            },
        );
        tree.final_flags.insert(id, final_flag);
    }
    if tree.charts.is_empty() {
        return Err(Error::Schema("tree has no charts".into()));
    }
    Ok(tree)
}

pub fn load(path: &Path) -> Result<ChartTree> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Schema(e.to_string()))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Schema(e.to_string()))?;
    tree_from_json(&v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ideal(ring: &Arc<Ring>, gens: &[&str]) -> Ideal {
        Ideal::new(
            ring,
            gens.iter().map(|g| parse_poly(g, ring).unwrap()).collect(),
        )
    }

    #[test]
    fn smooth_input_is_immediately_final() {
        let r = Ring::new(vec!["x", "y"]);
        let t = resolve(
            &ideal(&r, &["x"]),
            &CenterStrategy::Default,
            &ResolutionLimits::default(),
        )
        .unwrap();
        assert_eq!(t.charts.len(), 1);
        assert_eq!(t.final_chart_ids(), vec![0]);
    }

    #[test]
    fn a1_resolves_in_one_blowup() {
        let r = Ring::new(vec!["x", "y", "z"]);
        let t = resolve(
            &ideal(&r, &["x^2 + y^2 + z^2"]),
            &CenterStrategy::Default,
            &ResolutionLimits::default(),
        )
        .unwrap();
        // one point blow-up, three patches, all final
        assert_eq!(t.charts.len(), 4);
        assert_eq!(t.final_chart_ids(), vec![1, 2, 3]);
        for id in [1, 2, 3] {
            assert_eq!(t.chart(id).depth, 1);
        }
        // the center used was the origin
        let c = t.chart(1).center_in_parent.clone().unwrap();
        assert!(c.equals(&ideal(&r, &["x", "y", "z"])));
    }

    #[test]
    fn finality_examples() {
        // smooth strict meeting two exceptionals like coordinate planes
        let r = Ring::new(vec!["x_1", "x_2", "y_0"]);
        let mut c = Chart::root(&ideal(&r, &["x_2^2 + y_0 + 1"]));
        c.exceptional = vec![ideal(&r, &["y_0"]), ideal(&r, &["x_1"])];
        assert!(is_final(&c));

        // tangential contact fails
        let r2 = Ring::new(vec!["x", "y_1"]);
        let mut c2 = Chart::root(&ideal(&r2, &["y_1^2 - x"]));
        c2.exceptional = vec![ideal(&r2, &["x"])];
        assert!(!is_final(&c2));

        // singular strict fails
        let r3 = Ring::new(vec!["x", "y", "z"]);
        let c3 = Chart::root(&ideal(&r3, &["x^5 + y^2 + z^2"]));
        assert!(!is_final(&c3));
    }

    #[test]
    fn default_center_picks_singular_point() {
        let r = Ring::new(vec!["x", "y", "z"]);
        let c = Chart::root(&ideal(&r, &["x^5 + y^2 + z^2"]));
        let center = default_center(&c).unwrap();
        assert!(center.equals(&ideal(&r, &["x", "y", "z"])));
    }

    #[test]
    fn default_center_on_tangential_contact() {
        let r = Ring::new(vec!["x", "y_1"]);
        let mut c = Chart::root(&ideal(&r, &["y_1^2 - x"]));
        c.exceptional = vec![ideal(&r, &["x"])];
        let center = default_center(&c).unwrap();
        assert!(center.equals(&ideal(&r, &["x", "y_1"])));
    }

    #[test]
    fn depth_limit_reports_partial_tree() {
        let r = Ring::new(vec!["x", "y", "z"]);
        let lim = ResolutionLimits {
            max_depth: 1,
            max_charts: 512,
        };
        let (tree, err) = resolve_partial(
            &ideal(&r, &["x^5 + y^2 + z^2"]),
            &CenterStrategy::Default,
            &lim,
        );
        assert!(matches!(err, Some(Error::LimitExceeded(_))));
        assert!(tree.charts.len() > 1); // partial tree present
    }

    #[test]
    fn scripted_strategy_validates_centers() {
        let r = Ring::new(vec!["x", "y", "z"]);
        let s = CenterStrategy::scripted("bad", &[(0, &["x^2 + y^2"])]);
        let err = resolve(
            &ideal(&r, &["x^5 + y^2 + z^2"]),
            &s,
            &ResolutionLimits::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::StrategyFailure(_)));
    }

    #[test]
    fn determinism() {
        let r = Ring::new(vec!["x", "y"]);
        let i = ideal(&r, &["y^2 - x^3"]);
        let t1 = resolve(&i, &CenterStrategy::Default, &ResolutionLimits::default()).unwrap();
        let t2 = resolve(&i, &CenterStrategy::Default, &ResolutionLimits::default()).unwrap();
        assert_eq!(t1, t2);
    }

    #[test]
    fn strict_recomputes_from_root() {
        let r = Ring::new(vec!["x", "y"]);
        let i = ideal(&r, &["y^2 - x^3"]);
        let t = resolve(&i, &CenterStrategy::Default, &ResolutionLimits::default()).unwrap();
        for c in t.charts.values() {
            let pull = c.map_to_root.apply(&i.gens()[0]);
            // divide out every visible exceptional completely
            let mut rest = pull;
            for slot in c.visible_slots() {
                let (_, r2) = rest.div_exponent(c.exc_gen(slot).unwrap());
                rest = r2;
            }
            match c.strict_gen() {
                Some(s) => assert!(Ideal::principal(rest.primitive_part())
                    .equals(&Ideal::principal(s.clone()))),
                None => assert!(rest.is_constant()),
            }
            // all recorded centers are non-singular
            if let Some(center) = &c.center_in_parent {
                let n = center.ring().nvars();
                let d = center.dimension();
                let codim = (n as i32 - d) as usize;
                let sing = center.singular_locus(codim).unwrap();
                assert_eq!(sing.dimension(), -1);
            }
        }
    }

    #[test]
    fn rational_points_lex_order() {
        let r = Ring::new(vec!["x", "y"]);
        let s = ideal(&r, &["x^2 - 1", "y - x"]);
        let pts = rational_points(&s).unwrap();
        assert_eq!(
            pts,
            vec![
                vec![crate::poly::rat(-1), crate::poly::rat(-1)],
                vec![crate::poly::rat(1), crate::poly::rat(1)],
            ]
        );
    }

    #[test]
    fn save_load_round_trip() {
        let r = Ring::new(vec!["x", "y", "z"]);
        let i = ideal(&r, &["x^2 + y^2 + z^2"]);
        let t = resolve(&i, &CenterStrategy::Default, &ResolutionLimits::default()).unwrap();
        let dir = std::env::temp_dir().join("resingular_test_roundtrip.json");
        save(&t, &dir).unwrap();
        let t2 = load(&dir).unwrap();
        assert_eq!(t, t2);
        std::fs::remove_file(&dir).ok();
    }

    #[test]
    fn load_rejects_bad_schema() {
        let v: Value = serde_json::json!({"schema_version": 99, "charts": []});
        assert!(matches!(tree_from_json(&v), Err(Error::Schema(_))));
        let v2: Value = serde_json::json!({"no_version": true});
        assert!(matches!(tree_from_json(&v2), Err(Error::Schema(_))));
    }

    #[test]
    fn prune_is_idempotent_and_conservative() {
        let r = Ring::new(vec!["x", "y", "z"]);
        let i = ideal(&r, &["x^2 + y^2 + z^2"]);
        let t = resolve(&i, &CenterStrategy::Default, &ResolutionLimits::default()).unwrap();
        let p1 = prune(&t);
        let p2 = prune(&p1);
        assert_eq!(p1.charts.len(), p2.charts.len());
        assert!(p1.charts.len() <= t.charts.len());
        // the root and at least one final chart survive
        assert!(p1.charts.contains_key(&0));
        assert!(!p1.final_chart_ids().is_empty());
    }

    #[test]
    fn rejects_non_reduced_input() {
        let r = Ring::new(vec!["x", "y"]);
        let err = resolve(
            &ideal(&r, &["x^2"]),
            &CenterStrategy::Default,
            &ResolutionLimits::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Invalid(_)));
    }
}
