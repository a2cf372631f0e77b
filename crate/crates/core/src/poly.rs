//! Sparse multivariate polynomials with exact rational coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ring::{Monomial, Ring, TermOrder};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    BigRational::from(BigInt::from(n))
}

/// A polynomial in a fixed ring. No zero coefficients are stored; the term
/// map is keyed by exponent vectors in a canonical (structural) order, so
/// equality and hashing are representation-independent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    ring: Arc<Ring>,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(ring: &Arc<Ring>) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<Ring>) -> Poly {
        Poly::constant(ring, Rat::one())
    }

    pub fn constant(ring: &Arc<Ring>, c: Rat) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(ring.nvars()), c);
        }
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Arc<Ring>, i: usize) -> Poly {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(ring.nvars(), i), Rat::one());
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn term(ring: &Arc<Ring>, m: Monomial, c: Rat) -> Poly {
        assert_eq!(m.0.len(), ring.nvars());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn from_terms(ring: &Arc<Ring>, it: impl IntoIterator<Item = (Monomial, Rat)>) -> Poly {
        let mut p = Poly::zero(ring);
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<Ring> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .all(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    /// Indices of variables actually occurring.
    pub fn support_vars(&self) -> Vec<usize> {
        let n = self.ring.nvars();
        let mut used = vec![false; n];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        (0..n).filter(|&i| used[i]).collect()
    }

    fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn leading_term(&self, ord: TermOrder) -> Option<(&Monomial, &Rat)> {
        self.terms
            .iter()
            .max_by(|a, b| ord.cmp(a.0, b.0))
    }

    pub fn leading_monomial(&self, ord: TermOrder) -> Option<Monomial> {
        self.leading_term(ord).map(|(m, _)| m.clone())
    }

    /// Leading coefficient made 1.
    pub fn monic(&self, ord: TermOrder) -> Poly {
        match self.leading_term(ord) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, a)| (mm.mul(m), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut result = Poly::one(&self.ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn derivative(&self, var: usize) -> Poly {
        let mut p = Poly::zero(&self.ring);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e > 0 {
                let mut m2 = m.clone();
                m2.0[var] = e - 1;
                p.add_term(m2, c * rat(e as i64));
            }
        }
        p
    }

    /// Substitute `images[i]` for variable i; the images live in `target`.
    pub fn substitute(&self, target: &Arc<Ring>, images: &[Poly]) -> Poly {
        assert_eq!(images.len(), self.ring.nvars());
        for im in images {
            assert!(Ring::same_ring(im.ring(), target));
        }
        // memoized powers per variable
        let mut powers: Vec<Vec<Poly>> = images
            .iter()
            .map(|im| vec![Poly::one(target), im.clone()])
            .collect();
        let power = |i: usize, e: usize, pw: &mut Vec<Vec<Poly>>| -> Poly {
            while pw[i].len() <= e {
                let last = pw[i].last().unwrap() * &pw[i][1];
                pw[i].push(last);
            }
            pw[i][e].clone()
        };
        let mut result = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = &t * &power(i, e as usize, &mut powers);
                }
            }
            result = &result + &t;
        }
        result
    }

    /// Move this polynomial into a ring containing the same variables
    /// (possibly among others), matching variables by name.
    pub fn lift_to(&self, target: &Arc<Ring>) -> Poly {
        let map: Vec<usize> = self
            .ring
            .vars()
            .iter()
            .map(|v| {
                target
                    .var_index(v)
                    .unwrap_or_else(|| panic!("variable {v} missing in target ring"))
            })
            .collect();
        let mut p = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.nvars()];
            for (i, &ei) in m.0.iter().enumerate() {
                e[map[i]] = ei;
            }
            p.add_term(Monomial(e), c.clone());
        }
        p
    }

    /// Project into a smaller ring; fails if a dropped variable occurs.
    pub fn project_to(&self, target: &Arc<Ring>) -> Option<Poly> {
        let map: Vec<Option<usize>> = self
            .ring
            .vars()
            .iter()
            .map(|v| target.var_index(v))
            .collect();
        let mut p = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; target.nvars()];
            for (i, &ei) in m.0.iter().enumerate() {
                if ei > 0 {
                    match map[i] {
                        Some(j) => e[j] = ei,
                        None => return None,
                    }
                }
            }
            p.add_term(Monomial(e), c.clone());
        }
        Some(p)
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.ring.nvars());
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact division by a single polynomial; `None` when not divisible.
    pub fn try_div(&self, d: &Poly) -> Option<Poly> {
        assert!(Ring::same_ring(&self.ring, &d.ring));
        assert!(!d.is_zero(), "division by zero polynomial");
        let ord = TermOrder::DegRevLex;
        let (dm, dc) = {
            let (m, c) = d.leading_term(ord).unwrap();
            (m.clone(), c.clone())
        };
        let mut r = self.clone();
        let mut q = Poly::zero(&self.ring);
        while let Some((rm, rc)) = r.leading_term(ord) {
            if !dm.divides(rm) {
                return None;
            }
            let m = dm.div(rm);
            let c = rc / &dc;
            q.add_term(m.clone(), c.clone());
            r = &r - &d.mul_term(&m, &c);
        }
        Some(q)
    }

    /// Largest k with d^k dividing self, together with self / d^k.
    /// Requires d non-constant and self non-zero.
    pub fn div_exponent(&self, d: &Poly) -> (u32, Poly) {
        assert!(!self.is_zero());
        assert!(!d.is_constant());
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(next) = cur.try_div(d) {
            cur = next;
            k += 1;
        }
        (k, cur)
    }

    /// Scale to integer coefficients with content 1 and positive leading
    /// coefficient (degrevlex); canonical generator of the principal ideal.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = num_integer::lcm(den, c.denom().clone());
        }
        let mut gcd = BigInt::zero();
        for c in self.terms.values() {
            let n = c.numer() * &den / c.denom();
            gcd = num_integer::gcd(gcd, n);
        }
        if gcd.is_zero() {
            gcd = BigInt::one();
        }
        let scale = Rat::new(den, gcd);
        let mut p = self.scale(&scale);
        if let Some((_, c)) = p.leading_term(TermOrder::DegRevLex) {
            if c.is_negative() {
                p = p.scale(&rat(-1));
            }
        }
        p
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, other: &Poly) -> Poly {
        assert!(Ring::same_ring(&self.ring, &other.ring));
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, other: &Poly) -> Poly {
        assert!(Ring::same_ring(&self.ring, &other.ring));
        let mut p = self.clone();
        for (m, c) in &other.terms {
            p.add_term(m.clone(), -c.clone());
        }
        p
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&rat(-1))
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, other: &Poly) -> Poly {
        assert!(Ring::same_ring(&self.ring, &other.ring));
        let mut p = Poly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }
}

fn fmt_coeff(c: &Rat) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    /// Renders in the shared text grammar: `+ - * ^`, rational literals as
    /// `a/b`, explicit `*` between factors.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let ord = TermOrder::DegRevLex;
        let mut terms: Vec<(&Monomial, &Rat)> = self.terms.iter().collect();
        terms.sort_by(|a, b| ord.cmp(b.0, a.0));
        let mut first = true;
        for (m, c) in terms {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(fmt_coeff(&abs));
            }
            for (i, &e) in m.0.iter().enumerate() {
                if e == 1 {
                    factors.push(self.ring.var_name(i).to_string());
                } else if e > 1 {
                    factors.push(format!("{}^{}", self.ring.var_name(i), e));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring2() -> Arc<Ring> {
        Ring::new(vec!["x", "y"])
    }

    fn x(r: &Arc<Ring>) -> Poly {
        Poly::var(r, 0)
    }
    fn y(r: &Arc<Ring>) -> Poly {
        Poly::var(r, 1)
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let r = ring2();
        let p = &x(&r) + &y(&r);
        let q = &x(&r) - &y(&r);
        let prod = &p * &q;
        let expect = &x(&r).pow(2) - &y(&r).pow(2);
        assert_eq!(prod, expect);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn exact_division() {
        let r = ring2();
        let p = &x(&r).pow(2) - &y(&r).pow(2);
        let d = &x(&r) + &y(&r);
        let q = p.try_div(&d).unwrap();
        assert_eq!(q, &x(&r) - &y(&r));
        assert!(p.try_div(&(&x(&r) + &Poly::one(&r))).is_none());
    }

    #[test]
    fn div_exponent_counts_factors() {
        let r = ring2();
        let p = &x(&r).pow(3) * &(&y(&r) - &Poly::one(&r));
        let (k, rest) = p.div_exponent(&x(&r));
        assert_eq!(k, 3);
        assert_eq!(rest, &y(&r) - &Poly::one(&r));
    }

    #[test]
    fn substitution_is_a_homomorphism() {
        let r = ring2();
        let s = Ring::new(vec!["u", "v"]);
        let images = vec![Poly::var(&s, 0), &Poly::var(&s, 0) * &Poly::var(&s, 1)];
        let p = &x(&r) + &y(&r);
        let q = &x(&r) * &y(&r);
        let lhs = (&p * &q).substitute(&s, &images);
        let rhs = &p.substitute(&s, &images) * &q.substitute(&s, &images);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn display_round_style() {
        let r = ring2();
        let p = &(&x(&r).pow(2) - &y(&r)) + &Poly::constant(&r, Rat::new(1.into(), 2.into()));
        assert_eq!(p.to_string(), "x^2 - y + 1/2");
    }
}
