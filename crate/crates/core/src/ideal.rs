//! Polynomial ideals: Buchberger's algorithm, normal forms, elimination,
//! ideal quotient and saturation, Krull dimension, Jacobian singular loci
//! and radical membership.

use std::collections::HashSet;
use std::sync::{Arc, Mutex};

use num_traits::One;

use crate::error::Error;
use crate::poly::{Poly, Rat};
use crate::ring::{Monomial, Ring, TermOrder};
use crate::Result;

/// An ideal given by a generator list, with cached reduced Groebner bases
/// per term order.
#[derive(Debug)]
pub struct Ideal {
    ring: Arc<Ring>,
    gens: Vec<Poly>,
    cache: Mutex<Vec<(TermOrder, Arc<Vec<Poly>>)>>,
}

/// Structural equality: same ring and identical generator lists. Use
/// [`Ideal::equals`] for mathematical equality of ideals.
impl PartialEq for Ideal {
    fn eq(&self, other: &Ideal) -> bool {
        Ring::same_ring(&self.ring, &other.ring) && self.gens == other.gens
    }
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        Ideal {
            ring: self.ring.clone(),
            gens: self.gens.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl Ideal {
    pub fn new(ring: &Arc<Ring>, gens: Vec<Poly>) -> Ideal {
        for g in &gens {
            assert!(Ring::same_ring(g.ring(), ring), "generator from wrong ring");
        }
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal {
            ring: ring.clone(),
            gens,
            cache: Mutex::new(Vec::new()),
        }
    }

    pub fn zero(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(ring, vec![])
    }

    pub fn unit(ring: &Arc<Ring>) -> Ideal {
        Ideal::new(ring, vec![Poly::one(ring)])
    }

    pub fn principal(g: Poly) -> Ideal {
        let ring = g.ring().clone();
        Ideal::new(&ring, vec![g])
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn gens(&self) -> &[Poly] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// The unique reduced Groebner basis w.r.t. `ord` (cached).
    pub fn groebner(&self, ord: TermOrder) -> Arc<Vec<Poly>> {
        {
            let cache = self.cache.lock().unwrap();
            if let Some((_, gb)) = cache.iter().find(|(o, _)| *o == ord) {
                return gb.clone();
            }
        }
        let gb = Arc::new(buchberger(&self.ring, &self.gens, ord));
        let mut cache = self.cache.lock().unwrap();
        if let Some((_, existing)) = cache.iter().find(|(o, _)| *o == ord) {
            return existing.clone();
        }
        cache.push((ord, gb.clone()));
        gb
    }

    pub fn is_unit(&self) -> bool {
        let gb = self.groebner(TermOrder::DegRevLex);
        gb.len() == 1 && gb[0].is_one()
    }

    pub fn contains(&self, f: &Poly) -> bool {
        let gb = self.groebner(TermOrder::DegRevLex);
        normal_form(f, &gb, TermOrder::DegRevLex).is_zero()
    }

    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn equals(&self, other: &Ideal) -> bool {
        self.contains_ideal(other) && other.contains_ideal(self)
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        assert!(Ring::same_ring(&self.ring, &other.ring));
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    pub fn with_extra(&self, extra: &[Poly]) -> Ideal {
        let mut gens = self.gens.clone();
        gens.extend(extra.iter().cloned());
        Ideal::new(&self.ring, gens)
    }

    /// Image under a ring map sending variable i to `images[i]`.
    pub fn substitute(&self, target: &Arc<Ring>, images: &[Poly]) -> Ideal {
        Ideal::new(
            target,
            self.gens
                .iter()
                .map(|g| g.substitute(target, images))
                .collect(),
        )
    }

    /// I ∩ K[vars without `drop`], stated in the smaller ring.
    pub fn eliminate(&self, drop: &[usize]) -> Ideal {
        let drop_set: HashSet<usize> = drop.iter().copied().collect();
        let n = self.ring.nvars();
        let kept: Vec<usize> = (0..n).filter(|i| !drop_set.contains(i)).collect();
        assert!(!kept.is_empty(), "cannot eliminate every variable");
        if drop_set.is_empty() {
            return self.clone();
        }
        // permuted ring: dropped variables first
        let mut perm: Vec<usize> = drop.to_vec();
        perm.extend(&kept);
        let big = Ring::new(perm.iter().map(|&i| self.ring.var_name(i)).collect::<Vec<_>>());
        let images: Vec<Poly> = (0..n)
            .map(|i| {
                let pos = perm.iter().position(|&j| j == i).unwrap();
                Poly::var(&big, pos)
            })
            .collect();
        let moved = self.substitute(&big, &images);
        let gb = moved.groebner(TermOrder::Block { first: drop.len() });
        let small = Ring::new(kept.iter().map(|&i| self.ring.var_name(i)).collect::<Vec<_>>());
        let gens = gb
            .iter()
            .filter_map(|g| g.project_to(&small))
            .collect();
        Ideal::new(&small, gens)
    }

    /// Intersection via the t-trick: ⟨t·I, (1−t)·J⟩ ∩ K[x].
    pub fn intersect(&self, other: &Ideal) -> Ideal {
        assert!(Ring::same_ring(&self.ring, &other.ring));
        if self.is_zero_ideal() || other.is_zero_ideal() {
            return Ideal::zero(&self.ring);
        }
        let t_name = fresh_name(&self.ring, "t_aux");
        let mut vars: Vec<String> = vec![t_name];
        vars.extend(self.ring.vars().iter().cloned());
        let big = Ring::new(vars);
        let t = Poly::var(&big, 0);
        let one_minus_t = &Poly::one(&big) - &t;
        let mut gens = Vec::new();
        for g in &self.gens {
            gens.push(&t * &g.lift_to(&big));
        }
        for g in &other.gens {
            gens.push(&one_minus_t * &g.lift_to(&big));
        }
        let big_ideal = Ideal::new(&big, gens);
        let elim = big_ideal.eliminate(&[0]);
        // move back into the original ring (same variable names)
        let gens = elim
            .gens
            .iter()
            .map(|g| g.lift_to(&self.ring))
            .collect();
        Ideal::new(&self.ring, gens)
    }

    /// (I : f) for a single polynomial.
    pub fn quotient_single(&self, f: &Poly) -> Ideal {
        if f.is_zero() {
            return Ideal::unit(&self.ring);
        }
        if f.is_constant() {
            return self.clone();
        }
        let inter = self.intersect(&Ideal::principal(f.clone()));
        let gens = inter
            .gens
            .iter()
            .map(|g| {
                g.try_div(f)
                    .expect("intersection generator not divisible by f")
            })
            .collect();
        Ideal::new(&self.ring, gens)
    }

    /// (I : J) = {f | f·J ⊆ I}.
    pub fn quotient(&self, other: &Ideal) -> Ideal {
        assert!(Ring::same_ring(&self.ring, &other.ring));
        if other.is_zero_ideal() {
            return Ideal::unit(&self.ring);
        }
        let mut acc: Option<Ideal> = None;
        for f in &other.gens {
            let q = self.quotient_single(f);
            acc = Some(match acc {
                None => q,
                Some(a) => a.intersect(&q),
            });
        }
        acc.unwrap()
    }

    /// (I : J^∞) together with the smallest k at which the quotient chain
    /// stabilizes.
    pub fn saturate(&self, other: &Ideal) -> (Ideal, u32) {
        let mut cur = self.clone();
        let mut k = 0;
        loop {
            let next = cur.quotient(other);
            if next.equals(&cur) {
                return (cur, k);
            }
            cur = next;
            k += 1;
        }
    }

    /// Krull dimension of the quotient ring; −1 for the unit ideal.
    pub fn dimension(&self) -> i32 {
        let gb = self.groebner(TermOrder::DegRevLex);
        if gb.len() == 1 && gb[0].is_constant() && !gb[0].is_zero() {
            return -1;
        }
        let n = self.ring.nvars();
        let lms: Vec<Monomial> = gb
            .iter()
            .map(|g| g.leading_monomial(TermOrder::DegRevLex).unwrap())
            .collect();
        // largest independent set: no leading monomial supported inside S
        let mut best = 0usize;
        for mask in 0u64..(1u64 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let independent = lms.iter().all(|m| {
                m.0.iter()
                    .enumerate()
                    .any(|(i, &e)| e > 0 && mask & (1 << i) == 0)
            });
            if independent {
                best = size;
            }
        }
        best as i32
    }

    /// I plus all codim × codim minors of the Jacobian of the generators.
    pub fn singular_locus(&self, codim: usize) -> Result<Ideal> {
        let n = self.ring.nvars();
        let k = self.gens.len();
        if codim == 0 || codim > n || codim > k {
            return Err(Error::BadCodimension(format!(
                "codim {codim} for {k} generators in {n} variables"
            )));
        }
        let jac: Vec<Vec<Poly>> = self
            .gens
            .iter()
            .map(|g| (0..n).map(|i| g.derivative(i)).collect())
            .collect();
        let mut gens = self.gens.clone();
        for rows in combinations(k, codim) {
            for cols in combinations(n, codim) {
                let sub: Vec<Vec<Poly>> = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&c| jac[r][c].clone()).collect())
                    .collect();
                let d = det(&self.ring, &sub);
                if !d.is_zero() {
                    gens.push(d);
                }
            }
        }
        Ok(Ideal::new(&self.ring, gens))
    }

    /// Rabinowitsch trick: f ∈ √I iff I + ⟨1 − w·f⟩ is the unit ideal.
    pub fn radical_contains(&self, f: &Poly) -> bool {
        if f.is_zero() {
            return true;
        }
        let w_name = fresh_name(&self.ring, "w_aux");
        let mut vars: Vec<String> = self.ring.vars().to_vec();
        vars.push(w_name);
        let big = Ring::new(vars);
        let w = Poly::var(&big, big.nvars() - 1);
        let mut gens: Vec<Poly> = self.gens.iter().map(|g| g.lift_to(&big)).collect();
        gens.push(&Poly::one(&big) - &(&w * &f.lift_to(&big)));
        Ideal::new(&big, gens).is_unit()
    }

    /// Number of standard monomials for a zero-dimensional ideal
    /// (the K-vector-space dimension of the quotient); None if not finite.
    pub fn quotient_length(&self) -> Option<u64> {
        let gb = self.groebner(TermOrder::DegRevLex);
        if gb.len() == 1 && gb[0].is_one() {
            return Some(0);
        }
        let n = self.ring.nvars();
        let lms: Vec<Monomial> = gb
            .iter()
            .map(|g| g.leading_monomial(TermOrder::DegRevLex).unwrap())
            .collect();
        // every variable must appear as a pure power among the leading terms
        for i in 0..n {
            let has_pure = lms.iter().any(|m| {
                m.0[i] > 0 && m.0.iter().enumerate().all(|(j, &e)| j == i || e == 0)
            });
            if !has_pure {
                return None;
            }
        }
        let mut count = 0u64;
        let mut stack = vec![Monomial::one(n)];
        let mut seen: HashSet<Monomial> = HashSet::new();
        seen.insert(stack[0].clone());
        while let Some(m) = stack.pop() {
            count += 1;
            for i in 0..n {
                let mut m2 = m.clone();
                m2.0[i] += 1;
                if seen.contains(&m2) {
                    continue;
                }
                if lms.iter().any(|lm| lm.divides(&m2)) {
                    continue;
                }
                seen.insert(m2.clone());
                stack.push(m2);
            }
        }
        Some(count)
    }

    /// Canonical string form: reduced degrevlex basis, primitive generators.
    pub fn canonical_string(&self) -> String {
        let gb = self.groebner(TermOrder::DegRevLex);
        let mut parts: Vec<String> = gb.iter().map(|g| g.primitive_part().to_string()).collect();
        parts.sort();
        parts.join("; ")
    }
}

fn fresh_name(ring: &Arc<Ring>, base: &str) -> String {
    let mut name = base.to_string();
    let mut i = 0;
    while ring.var_index(&name).is_some() {
        i += 1;
        name = format!("{base}{i}");
    }
    name
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Determinant by cofactor expansion; matrices here are tiny.
pub fn det(ring: &Arc<Ring>, m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one(ring);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = Poly::zero(ring);
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let cofactor = det(ring, &minor);
        let signed = if j % 2 == 0 {
            cofactor
        } else {
            -&cofactor
        };
        acc = &acc + &(entry * &signed);
    }
    acc
}

/// Remainder of f on division by G (full reduction of every term).
pub fn normal_form(f: &Poly, basis: &[Poly], ord: TermOrder) -> Poly {
    let ring = f.ring().clone();
    let lts: Vec<(Monomial, Rat)> = basis
        .iter()
        .map(|g| {
            let (m, c) = g.leading_term(ord).expect("zero polynomial in basis");
            (m.clone(), c.clone())
        })
        .collect();
    let mut p = f.clone();
    let mut r = Poly::zero(&ring);
    while let Some((pm, pc)) = p.leading_term(ord) {
        let pm = pm.clone();
        let pc = pc.clone();
        match lts.iter().position(|(m, _)| m.divides(&pm)) {
            Some(i) => {
                let m = lts[i].0.div(&pm);
                let c = &pc / &lts[i].1;
                p = &p - &basis[i].mul_term(&m, &c);
            }
            None => {
                let t = Poly::term(&ring, pm.clone(), pc.clone());
                r = &r + &t;
                p = &p - &t;
            }
        }
    }
    r
}

/// Buchberger's algorithm with the product and chain criteria; returns the
/// reduced Groebner basis, sorted by decreasing leading monomial.
pub fn buchberger(_ring: &Arc<Ring>, gens: &[Poly], ord: TermOrder) -> Vec<Poly> {
    let mut basis: Vec<Poly> = gens
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.monic(ord))
        .collect();
    if basis.is_empty() {
        return vec![];
    }
    let lm = |g: &Poly| g.leading_monomial(ord).unwrap();

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in 0..i {
            pairs.push((j, i));
        }
    }
    let mut done: HashSet<(usize, usize)> = HashSet::new();

    while !pairs.is_empty() {
        // normal selection: smallest lcm first
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                let la = lm(&basis[a.0]).lcm(&lm(&basis[a.1]));
                let lb = lm(&basis[b.0]).lcm(&lm(&basis[b.1]));
                ord.cmp(&la, &lb)
            })
            .map(|(idx, _)| idx)
            .unwrap();
        let (i, j) = pairs.swap_remove(best);
        done.insert((i, j));

        let lmi = lm(&basis[i]);
        let lmj = lm(&basis[j]);
        if lmi.coprime(&lmj) {
            continue; // product criterion
        }
        let l = lmi.lcm(&lmj);
        // chain criterion
        let chained = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lm(&basis[k]).divides(&l)
                && done.contains(&key(i, k))
                && done.contains(&key(j, k))
        });
        if chained {
            continue;
        }
        let spoly = {
            let mi = lmi.div(&l);
            let mj = lmj.div(&l);
            let a = basis[i].mul_term(&mi, &Rat::one());
            let b = basis[j].mul_term(&mj, &Rat::one());
            &a - &b
        };
        let red = normal_form(&spoly, &basis, ord);
        if !red.is_zero() {
            let red = red.monic(ord);
            let new_idx = basis.len();
            basis.push(red);
            for k in 0..new_idx {
                pairs.push((k, new_idx));
            }
        }
    }

    reduce_basis(basis, ord)
}

fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn reduce_basis(mut basis: Vec<Poly>, ord: TermOrder) -> Vec<Poly> {
    // minimalize: drop elements whose leading monomial is divisible by
    // another's
    let lms: Vec<Monomial> = basis
        .iter()
        .map(|g| g.leading_monomial(ord).unwrap())
        .collect();
    let mut keep: Vec<bool> = vec![true; basis.len()];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            if i != j
                && keep[j]
                && lms[j].divides(&lms[i])
                && (lms[i] != lms[j] || j < i)
            {
                keep[i] = false;
                break;
            }
        }
    }
    let mut minimal: Vec<Poly> = basis
        .drain(..)
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(g, _)| g)
        .collect();
    // tail-reduce
    for i in 0..minimal.len() {
        let others: Vec<Poly> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        if !others.is_empty() {
            minimal[i] = normal_form(&minimal[i], &others, ord).monic(ord);
        }
    }
    minimal.retain(|g| !g.is_zero());
    minimal.sort_by(|a, b| {
        ord.cmp(
            &b.leading_monomial(ord).unwrap(),
            &a.leading_monomial(ord).unwrap(),
        )
    });
    // normalize the unit ideal to {1}
    if minimal.iter().any(|g| g.is_constant() && !g.is_zero()) {
        let ring = minimal[0].ring().clone();
        return vec![Poly::one(&ring)];
    }
    minimal
}

/// True iff V(I) is empty over the complex numbers.
pub fn empty_variety(i: &Ideal) -> bool {
    i.dimension() == -1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn ideal(ring: &Arc<Ring>, gens: &[&str]) -> Ideal {
        Ideal::new(
            ring,
            gens.iter().map(|g| parse_poly(g, ring).unwrap()).collect(),
        )
    }

    #[test]
    fn groebner_detects_unit_ideal() {
        let r = Ring::new(vec!["x", "y"]);
        let i = ideal(&r, &["x^2", "x*y - 1"]);
        let gb = i.groebner(TermOrder::DegRevLex);
        assert_eq!(gb.len(), 1);
        assert!(gb[0].is_one());
        assert!(i.is_unit());
    }

    #[test]
    fn groebner_reduced_and_membership() {
        let r = Ring::new(vec!["x", "y"]);
        let i = ideal(&r, &["x^2 + y", "x*y"]);
        // x*y^... memberships
        assert!(i.contains(&parse_poly("y^2", &r).unwrap())); // y*(x^2+y) - x*(x*y)
        assert!(!i.contains(&parse_poly("x", &r).unwrap()));
        assert!(!i.contains(&parse_poly("y", &r).unwrap()));
        // reduced GB is idempotent as a generating set
        let gb = i.groebner(TermOrder::DegRevLex);
        let j = Ideal::new(&r, gb.to_vec());
        assert!(i.equals(&j));
    }

    #[test]
    fn eliminate_rees_style() {
        // eliminate t from <y0 - t*x, y1 - t*y>: the kernel is <x*y1 - y*y0>
        let r = Ring::new(vec!["t", "x", "y", "y_0", "y_1"]);
        let i = ideal(&r, &["y_0 - t*x", "y_1 - t*y"]);
        let e = i.eliminate(&[0]);
        let s = e.ring().clone();
        let expect = ideal(&s, &["x*y_1 - y*y_0"]);
        assert!(e.equals(&expect));
    }

    #[test]
    fn quotient_and_saturation() {
        let r = Ring::new(vec!["x", "y"]);
        let i = ideal(&r, &["x^2*y"]);
        let j = ideal(&r, &["x"]);
        let q = i.quotient(&j);
        assert!(q.equals(&ideal(&r, &["x*y"])));
        let (sat, k) = i.saturate(&j);
        assert!(sat.equals(&ideal(&r, &["y"])));
        assert_eq!(k, 2);
    }

    #[test]
    fn intersection_of_principal_ideals() {
        let r = Ring::new(vec!["x", "y"]);
        let i = ideal(&r, &["x"]);
        let j = ideal(&r, &["y"]);
        let m = i.intersect(&j);
        assert!(m.equals(&ideal(&r, &["x*y"])));
    }

    #[test]
    fn dimension_examples() {
        let r = Ring::new(vec!["x", "y", "z"]);
        assert_eq!(ideal(&r, &["x*y", "x*z"]).dimension(), 2);
        assert_eq!(ideal(&r, &["x", "y", "z"]).dimension(), 0);
        assert_eq!(ideal(&r, &["x^5 + y^2 + z^2"]).dimension(), 2);
        assert_eq!(Ideal::zero(&r).dimension(), 3);
        assert_eq!(Ideal::unit(&r).dimension(), -1);
    }

    #[test]
    fn singular_locus_of_cusp() {
        let r = Ring::new(vec!["x", "y"]);
        let i = ideal(&r, &["x^3 - y^2"]);
        let s = i.singular_locus(1).unwrap();
        // singular locus is the origin
        assert_eq!(s.dimension(), 0);
        assert!(s.radical_contains(&parse_poly("x", &r).unwrap()));
        assert!(s.radical_contains(&parse_poly("y", &r).unwrap()));
        // codim larger than the number of generators is rejected
        assert!(i.singular_locus(2).is_err());
    }

    #[test]
    fn radical_membership_rabinowitsch() {
        let r = Ring::new(vec!["x", "y"]);
        let i = ideal(&r, &["x^2"]);
        assert!(i.radical_contains(&parse_poly("x", &r).unwrap()));
        assert!(!i.radical_contains(&parse_poly("y", &r).unwrap()));
    }

    #[test]
    fn quotient_length_zero_dimensional() {
        let r = Ring::new(vec!["x", "y"]);
        let i = ideal(&r, &["x^2", "y^3"]);
        assert_eq!(i.quotient_length(), Some(6));
        let j = ideal(&r, &["x"]);
        assert_eq!(j.quotient_length(), None);
        assert_eq!(Ideal::unit(&r).quotient_length(), Some(0));
    }

    #[test]
    fn smooth_point_jacobian_is_unit() {
        // V(x^5+y^2+z^2) is smooth away from the origin; its singular-locus
        // ideal together with the hypersurface cuts out only the origin.
        let r = Ring::new(vec!["x", "y", "z"]);
        let i = ideal(&r, &["x^5 + y^2 + z^2"]);
        let s = i.singular_locus(1).unwrap();
        assert_eq!(s.dimension(), 0);
        assert_eq!(
            s.canonical_string(),
            ideal(&r, &["x^4", "y", "z"]).canonical_string()
        );
    }
}
