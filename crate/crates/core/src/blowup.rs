//! Blow-up of an affine chart at a non-singular center: Rees-algebra kernel,
//! extraction of the affine chart patches, and total/strict/weak transforms
//! together with exceptional-divisor bookkeeping.

use std::sync::Arc;

use crate::error::Error;
use crate::ideal::{det, Ideal};
use crate::poly::Poly;
use crate::ring::Ring;
use crate::Result;

/// A substitution map from a chart's ring into an ancestor ring: one image
/// polynomial (living in the chart ring) per ancestor variable.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartMap {
    source: Arc<Ring>,
    target: Arc<Ring>,
    images: Vec<Poly>,
}

impl ChartMap {
    pub fn new(source: &Arc<Ring>, target: &Arc<Ring>, images: Vec<Poly>) -> ChartMap {
        assert_eq!(images.len(), target.nvars());
        for im in &images {
            assert!(Ring::same_ring(im.ring(), source));
        }
        ChartMap {
            source: source.clone(),
            target: target.clone(),
            images,
        }
    }

    pub fn identity(ring: &Arc<Ring>) -> ChartMap {
        ChartMap {
            source: ring.clone(),
            target: ring.clone(),
            images: (0..ring.nvars()).map(|i| Poly::var(ring, i)).collect(),
        }
    }

    pub fn source(&self) -> &Arc<Ring> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Ring> {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    /// Pull a polynomial in the target (ancestor) ring back to the chart.
    pub fn apply(&self, f: &Poly) -> Poly {
        assert!(Ring::same_ring(f.ring(), &self.target));
        f.substitute(&self.source, &self.images)
    }

    pub fn apply_ideal(&self, i: &Ideal) -> Ideal {
        i.substitute(&self.source, &self.images)
    }

    /// Composition: `outer` maps parent → root, `inner` maps child → parent;
    /// the result maps child → root.
    pub fn compose(outer: &ChartMap, inner: &ChartMap) -> ChartMap {
        assert!(Ring::same_ring(&outer.source, &inner.target));
        ChartMap {
            source: inner.source.clone(),
            target: outer.target.clone(),
            images: outer.images.iter().map(|im| inner.apply(im)).collect(),
        }
    }

    /// Determinant of the Jacobian matrix ∂(image_i)/∂(chart var_j).
    pub fn jacobian_det(&self) -> Result<Poly> {
        if self.source.nvars() != self.target.nvars() {
            return Err(Error::NonSquareMap {
                source_vars: self.source.nvars(),
                target_vars: self.target.nvars(),
            });
        }
        let n = self.source.nvars();
        let m: Vec<Vec<Poly>> = self
            .images
            .iter()
            .map(|im| (0..n).map(|j| im.derivative(j)).collect())
            .collect();
        Ok(det(&self.source, &m))
    }
}

/// One affine patch of the resolution tree.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    /// Tree label; assigned by the driver.
    pub id: usize,
    pub parent: Option<usize>,
    /// Which of the m patches of the parent blow-up this chart is.
    pub chart_index: usize,
    pub depth: usize,
    pub ring: Arc<Ring>,
    /// Relations of the chart's ambient space; ⟨0⟩ in the hypersurface
    /// pipeline.
    pub ambient: Ideal,
    /// Strict transform of the input hypersurface (unit ideal when it does
    /// not meet this chart).
    pub strict: Ideal,
    /// Exceptional divisors indexed by global birth order along this branch;
    /// the unit ideal marks divisors not visible in this chart.
    pub exceptional: Vec<Ideal>,
    pub center_in_parent: Option<Ideal>,
    pub map_to_parent: Option<ChartMap>,
    pub map_to_root: ChartMap,
    /// Exponent of the new exceptional divisor divided out of the parent
    /// strict transform when this chart was created.
    pub strict_sat_exponent: u32,
}

impl Chart {
    /// The root chart of a resolution of V(input).
    pub fn root(input: &Ideal) -> Chart {
        let ring = input.ring().clone();
        Chart {
            id: 0,
            parent: None,
            chart_index: 0,
            depth: 0,
            ring: ring.clone(),
            ambient: Ideal::zero(&ring),
            strict: input.clone(),
            exceptional: Vec::new(),
            center_in_parent: None,
            map_to_parent: None,
            map_to_root: ChartMap::identity(&ring),
            strict_sat_exponent: 0,
        }
    }

    /// Principal generator of an exceptional slot; None when the divisor is
    /// not visible here (unit ideal).
    pub fn exc_gen(&self, slot: usize) -> Option<&Poly> {
        let e = &self.exceptional[slot];
        if e.gens().len() == 1 && !e.gens()[0].is_constant() {
            Some(&e.gens()[0])
        } else {
            None
        }
    }

    /// Principal generator of the strict transform, if visible.
    pub fn strict_gen(&self) -> Option<&Poly> {
        if self.strict.gens().len() == 1 && !self.strict.gens()[0].is_constant() {
            Some(&self.strict.gens()[0])
        } else {
            None
        }
    }

    pub fn visible_slots(&self) -> Vec<usize> {
        (0..self.exceptional.len())
            .filter(|&s| self.exc_gen(s).is_some())
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct BlowupResult {
    pub charts: Vec<Chart>,
    pub center: Ideal,
}

/// Kernel of the Rees-algebra map Φ(y_i) = t·f_i: the ideal of relations of
/// the blow-up inside K[x-vars, y-vars], computed by eliminating t from
/// ⟨y_i − t·f_i⟩ + ambient.
pub fn rees_kernel(ambient: &Ideal, center: &Ideal) -> Result<Ideal> {
    if center.is_unit() {
        return Err(Error::UnitCenter);
    }
    let xr = center.ring();
    let m = center.gens().len();
    let mut vars: Vec<String> = vec!["t_rees".to_string()];
    vars.extend(xr.vars().iter().cloned());
    for i in 0..m {
        vars.push(format!("y_{i}"));
    }
    let big = Ring::new(vars);
    let t = Poly::var(&big, 0);
    let mut gens: Vec<Poly> = ambient.gens().iter().map(|g| g.lift_to(&big)).collect();
    for (i, f) in center.gens().iter().enumerate() {
        let y = Poly::var(&big, 1 + xr.nvars() + i);
        gens.push(&y - &(&t * &f.lift_to(&big)));
    }
    Ok(Ideal::new(&big, gens).eliminate(&[0]))
}

/// Blow up a chart at a non-singular center (stated in the chart's ring).
/// Produces one patch per center generator. Center generators must be
/// solvable: in patch i, every relation f_j − f_i·y_j (j ≠ i) must be linear
/// with constant coefficient in some chart variable, consumed in turn.
pub fn blow_up_chart(c: &Chart, center: &Ideal) -> Result<BlowupResult> {
    assert!(Ring::same_ring(center.ring(), &c.ring));
    if center.is_unit() {
        return Err(Error::UnitCenter);
    }
    if center.is_zero_ideal() {
        return Err(Error::Invalid("cannot blow up the zero ideal".into()));
    }
    let m = center.gens().len();
    let mut charts = Vec::with_capacity(m);
    for i in 0..m {
        charts.push(patch(c, center, i)?);
    }
    Ok(BlowupResult {
        charts,
        center: center.clone(),
    })
}

fn patch(c: &Chart, center: &Ideal, i: usize) -> Result<Chart> {
    let parent_ring = &c.ring;
    let n = parent_ring.nvars();
    let m = center.gens().len();
    let depth = c.depth + 1;

    // extended working ring: parent vars then y_j (j ≠ i)
    let others: Vec<usize> = (0..m).filter(|&j| j != i).collect();
    let mut ext_vars: Vec<String> = parent_ring.vars().to_vec();
    for &j in &others {
        ext_vars.push(format!("yext_{j}"));
    }
    let ext = Ring::new(ext_vars);

    let f: Vec<Poly> = center.gens().iter().map(|g| g.lift_to(&ext)).collect();
    // relations f_j − f_i·y_j, each to be solved for one parent variable
    let mut rels: Vec<Poly> = others
        .iter()
        .enumerate()
        .map(|(k, &j)| &f[j] - &(&f[i] * &Poly::var(&ext, n + k)))
        .collect();
    // images of the parent variables in the extended ring
    let mut imgs: Vec<Poly> = (0..n).map(|v| Poly::var(&ext, v)).collect();
    let mut solved = vec![false; n];

    while !rels.is_empty() {
        let mut found = None;
        'search: for (ri, r) in rels.iter().enumerate() {
            for v in 0..n {
                if solved[v] || r.degree_in(v) != 1 {
                    continue;
                }
                // coefficient of v must be a non-zero constant
                let coeff = Poly::from_terms(
                    &ext,
                    r.terms().filter(|(mm, _)| mm.0[v] == 1).map(|(mm, cc)| {
                        let mut e = mm.clone();
                        e.0[v] = 0;
                        (e, cc.clone())
                    }),
                );
                if coeff.is_constant() && !coeff.is_zero() {
                    found = Some((ri, v, coeff));
                    break 'search;
                }
            }
        }
        let Some((ri, v, coeff)) = found else {
            // drop relations that already vanish (identically or modulo the
            // solved substitutions); anything else is unsupported
            let before = rels.len();
            rels.retain(|r| !r.is_zero());
            if rels.len() == before {
                return Err(Error::ChartSimplification(format!(
                    "no chart variable is linear with constant coefficient in {}",
                    rels[0]
                )));
            }
            continue;
        };
        let r = rels.swap_remove(ri);
        let c_inv = coeff.terms().next().unwrap().1.recip();
        // r = coeff·v + g  ⇒  v = −g/coeff
        let g = &r - &Poly::var(&ext, v).scale(coeff.terms().next().unwrap().1);
        let sol = g.scale(&-c_inv);
        let sub: Vec<Poly> = (0..ext.nvars())
            .map(|w| {
                if w == v {
                    sol.clone()
                } else {
                    Poly::var(&ext, w)
                }
            })
            .collect();
        for rr in rels.iter_mut() {
            *rr = rr.substitute(&ext, &sub);
        }
        for im in imgs.iter_mut() {
            *im = im.substitute(&ext, &sub);
        }
        solved[v] = true;
    }

    // child ring: surviving parent variables, then fresh names for the kept
    // y-variables
    let kept: Vec<usize> = (0..n).filter(|&v| !solved[v]).collect();
    let mut child_vars: Vec<String> = kept
        .iter()
        .map(|&v| parent_ring.var_name(v).to_string())
        .collect();
    for &j in &others {
        child_vars.push(format!("x{depth}_{j}"));
    }
    {
        let mut uniq = child_vars.clone();
        uniq.sort();
        uniq.dedup();
        if uniq.len() != child_vars.len() {
            return Err(Error::ChartSimplification(
                "fresh chart variable name collision".into(),
            ));
        }
    }
    let child = Ring::new(child_vars);
    // rename extended-ring survivors into the child ring
    let rename: Vec<Poly> = (0..ext.nvars())
        .map(|w| {
            if w < n {
                match kept.iter().position(|&v| v == w) {
                    Some(p) => Poly::var(&child, p),
                    None => Poly::zero(&child), // solved; never referenced
                }
            } else {
                Poly::var(&child, kept.len() + (w - n))
            }
        })
        .collect();
    let local_images: Vec<Poly> = imgs.iter().map(|im| im.substitute(&child, &rename)).collect();
    let local = ChartMap::new(&child, parent_ring, local_images);

    // new exceptional divisor: image of f_i
    let e_new = local.apply(&center.gens()[i]);
    if e_new.is_constant() {
        return Err(Error::ChartSimplification(
            "exceptional generator degenerated to a constant".into(),
        ));
    }

    let ambient = local.apply_ideal(&c.ambient);

    // strict transforms of the parent's exceptional divisors
    let mut exceptional = Vec::with_capacity(c.exceptional.len() + 1);
    for slot in 0..c.exceptional.len() {
        match c.exc_gen(slot) {
            None => exceptional.push(Ideal::unit(&child)),
            Some(p) => {
                let img = local.apply(p);
                let (_, rest) = img.div_exponent(&e_new);
                if rest.is_constant() {
                    exceptional.push(Ideal::unit(&child));
                } else {
                    exceptional.push(Ideal::principal(rest.primitive_part()));
                }
            }
        }
    }
    exceptional.push(Ideal::principal(e_new.primitive_part()));

    // strict transform of the hypersurface
    let (strict, sat) = match c.strict_gen() {
        None => (Ideal::unit(&child), 0),
        Some(p) => {
            let img = local.apply(p);
            if img.is_zero() {
                (Ideal::zero(&child), 0)
            } else {
                let (k, rest) = img.div_exponent(&e_new);
                if rest.is_constant() {
                    (Ideal::unit(&child), k)
                } else {
                    (Ideal::principal(rest.primitive_part()), k)
                }
            }
        }
    };

    Ok(Chart {
        id: 0,
        parent: Some(c.id),
        chart_index: i,
        depth,
        ring: child.clone(),
        ambient,
        strict,
        exceptional,
        center_in_parent: Some(center.clone()),
        map_to_root: ChartMap::compose(&c.map_to_root, &local),
        map_to_parent: Some(local),
        strict_sat_exponent: sat,
    })
}

/// Image of an ideal of the parent chart under the chart substitution.
pub fn total_transform(c: &Chart, i: &Ideal) -> Ideal {
    c.map_to_parent
        .as_ref()
        .expect("root chart has no parent")
        .apply_ideal(i)
}

/// Saturation of the total transform by the newest exceptional ideal,
/// together with the saturation exponent.
pub fn strict_transform(c: &Chart, i: &Ideal) -> (Ideal, u32) {
    let tot = total_transform(c, i);
    let e = c
        .exceptional
        .last()
        .expect("chart has no exceptional divisor");
    tot.saturate(e)
}

/// Iterated quotient by the exceptional ideal, stopping at the last step
/// where multiplying back recovers the previous iterate; coincides with the
/// strict transform for principal ideals.
pub fn weak_transform(c: &Chart, i: &Ideal) -> Ideal {
    let tot = total_transform(c, i);
    let e = c
        .exceptional
        .last()
        .expect("chart has no exceptional divisor");
    let mut cur = tot;
    loop {
        let next = cur.quotient(e);
        if next.equals(&cur) {
            return cur;
        }
        // multiply back: e·next must recover cur, else stop before this step
        let mut prod_gens = Vec::new();
        for a in next.gens() {
            for b in e.gens() {
                prod_gens.push(a * b);
            }
        }
        let prod = Ideal::new(cur.ring(), prod_gens);
        if !prod.equals(&cur) {
            return cur;
        }
        cur = next;
    }
}

/// Jacobian determinant of a chart's composed substitution map.
pub fn jacobian_det_of_map(m: &ChartMap) -> Result<Poly> {
    m.jacobian_det()
}
