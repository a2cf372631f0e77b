//! Dense univariate polynomials over the rationals, rational functions in
//! one variable, and small-degree factorization into irreducibles.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::poly::{rat, Rat};
use crate::Result;

/// Coefficients in ascending degree order; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariatePoly {
    coeffs: Vec<Rat>,
}

impl UnivariatePoly {
    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> UnivariatePoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn zero() -> UnivariatePoly {
        UnivariatePoly { coeffs: vec![] }
    }

    pub fn one() -> UnivariatePoly {
        UnivariatePoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> UnivariatePoly {
        UnivariatePoly::from_coeffs(vec![c])
    }

    pub fn x() -> UnivariatePoly {
        UnivariatePoly::from_coeffs(vec![Rat::zero(), Rat::one()])
    }

    /// c0 + c1·x for integer c0, c1.
    pub fn linear(c0: i64, c1: i64) -> UnivariatePoly {
        UnivariatePoly::from_coeffs(vec![rat(c0), rat(c1)])
    }

    /// x^n − 1.
    pub fn x_pow_minus_one(n: u32) -> UnivariatePoly {
        let mut coeffs = vec![Rat::zero(); n as usize + 1];
        coeffs[0] = rat(-1);
        coeffs[n as usize] = Rat::one();
        UnivariatePoly::from_coeffs(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading_coeff(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> UnivariatePoly {
        if c.is_zero() {
            return UnivariatePoly::zero();
        }
        UnivariatePoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn monic(&self) -> UnivariatePoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.leading_coeff().recip();
        self.scale(&inv)
    }

    pub fn derivative(&self) -> UnivariatePoly {
        if self.coeffs.len() <= 1 {
            return UnivariatePoly::zero();
        }
        UnivariatePoly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * rat(i as i64 + 1))
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> UnivariatePoly {
        let mut result = UnivariatePoly::one();
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

    /// Quotient and remainder; panics on zero divisor.
    pub fn divrem(&self, d: &UnivariatePoly) -> (UnivariatePoly, UnivariatePoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dd = d.degree().unwrap();
        let dlc = d.leading_coeff();
        let mut rem = self.clone();
        let mut quot = vec![
            Rat::zero();
            self.degree()
                .map(|n| if n >= dd { n - dd + 1 } else { 0 })
                .unwrap_or(0)
        ];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = &rem.leading_coeff() / &dlc;
            let shift = rd - dd;
            quot[shift] = c.clone();
            let mut sub = vec![Rat::zero(); shift];
            sub.extend(d.coeffs.iter().map(|a| a * &c));
            rem = &rem - &UnivariatePoly::from_coeffs(sub);
        }
        (UnivariatePoly::from_coeffs(quot), rem)
    }

    /// Exact division; None when the remainder is non-zero.
    pub fn try_div(&self, d: &UnivariatePoly) -> Option<UnivariatePoly> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &UnivariatePoly) -> UnivariatePoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree_part(&self) -> UnivariatePoly {
        if self.is_zero() {
            return self.clone();
        }
        let g = self.gcd(&self.derivative());
        self.try_div(&g).expect("gcd divides").monic()
    }

    /// Integer coefficients, content 1, positive leading coefficient.
    pub fn primitive_part(&self) -> UnivariatePoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut den = BigInt::one();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(&(c.numer() * &den / c.denom()));
        }
        if g.is_zero() {
            g = BigInt::one();
        }
        let mut p = self.scale(&Rat::new(den, g));
        if p.leading_coeff().is_negative() {
            p = p.scale(&rat(-1));
        }
        p
    }

    /// Coefficient reversal: x^deg · p(1/x), normalized to drop trailing
    /// zeros.
    pub fn reversed(&self) -> UnivariatePoly {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        UnivariatePoly::from_coeffs(coeffs)
    }

    pub fn to_string_with(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    out.push('-');
                }
                first = false;
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff_str = if abs.denom().is_one() {
                format!("{}", abs.numer())
            } else {
                format!("{}/{}", abs.numer(), abs.denom())
            };
            match i {
                0 => out.push_str(&coeff_str),
                _ => {
                    if !abs.is_one() {
                        out.push_str(&coeff_str);
                        out.push('*');
                    }
                    out.push_str(var);
                    if i > 1 {
                        out.push_str(&format!("^{i}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with("s"))
    }
}

impl Add for &UnivariatePoly {
    type Output = UnivariatePoly;
    fn add(self, other: &UnivariatePoly) -> UnivariatePoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UnivariatePoly::from_coeffs(
            (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect(),
        )
    }
}

impl Sub for &UnivariatePoly {
    type Output = UnivariatePoly;
    fn sub(self, other: &UnivariatePoly) -> UnivariatePoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UnivariatePoly::from_coeffs(
            (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect(),
        )
    }
}

impl Neg for &UnivariatePoly {
    type Output = UnivariatePoly;
    fn neg(self) -> UnivariatePoly {
        self.scale(&rat(-1))
    }
}

impl Mul for &UnivariatePoly {
    type Output = UnivariatePoly;
    fn mul(self, other: &UnivariatePoly) -> UnivariatePoly {
        if self.is_zero() || other.is_zero() {
            return UnivariatePoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        UnivariatePoly::from_coeffs(coeffs)
    }
}

/// All rational roots, with multiplicity, of a non-zero polynomial.
pub fn rational_roots(p: &UnivariatePoly) -> Vec<(Rat, u32)> {
    assert!(!p.is_zero());
    let prim = p.primitive_part();
    let mut out = Vec::new();
    let mut cur = prim.clone();
    // strip the root 0 first
    let mut zero_mult = 0;
    while cur.coeff(0).is_zero() && cur.degree().is_some_and(|d| d > 0) {
        cur = cur.try_div(&UnivariatePoly::x()).unwrap();
        zero_mult += 1;
    }
    if zero_mult > 0 {
        out.push((Rat::zero(), zero_mult));
    }
    if cur.degree().unwrap_or(0) == 0 {
        return out;
    }
    let cur = cur.primitive_part();
    let a0: BigInt = cur.coeff(0).numer().clone();
    let an: BigInt = cur.leading_coeff().numer().clone();
    let mut candidates: Vec<Rat> = Vec::new();
    for p_div in divisors(&a0.abs()) {
        for q_div in divisors(&an.abs()) {
            for sign in [1i64, -1] {
                candidates.push(Rat::new(&p_div * BigInt::from(sign), q_div.clone()));
            }
        }
    }
    candidates.sort();
    candidates.dedup();
    let mut rem = cur;
    for cand in candidates {
        let mut mult = 0;
        loop {
            if rem.degree().unwrap_or(0) == 0 {
                break;
            }
            if !rem.eval(&cand).is_zero() {
                break;
            }
            let lin = UnivariatePoly::from_coeffs(vec![-cand.clone(), Rat::one()]);
            rem = rem.try_div(&lin).unwrap();
            mult += 1;
        }
        if mult > 0 {
            out.push((cand, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1;
    }
    out.sort();
    out.dedup();
    out
}

/// Factorization into monic irreducibles over Q with multiplicities, plus
/// the overall constant: p = c · ∏ f_i^{e_i}. Supports degree ≤ 12 (the
/// irreducible-cofactor search is Kronecker's method and is exponential).
pub fn factor_univariate(p: &UnivariatePoly) -> Result<(Rat, Vec<(UnivariatePoly, u32)>)> {
    if p.is_zero() {
        return Err(Error::Invalid("cannot factor the zero polynomial".into()));
    }
    if p.degree().unwrap() > 12 {
        return Err(Error::LimitExceeded(format!(
            "univariate factorization limited to degree 12, got {}",
            p.degree().unwrap()
        )));
    }
    let c = p.leading_coeff();
    let mut factors: Vec<UnivariatePoly> = Vec::new();
    // peel squarefree layers by repeated gcd; collect the distinct factors
    let mut cur = p.monic();
    while cur.degree().unwrap_or(0) > 0 {
        let sf = cur.squarefree_part();
        for f in factor_squarefree(&sf) {
            if !factors.contains(&f) {
                factors.push(f);
            }
        }
        cur = cur.try_div(&sf).expect("squarefree part divides").monic();
    }
    // exact multiplicities by division
    let mut result = Vec::new();
    for f in factors {
        let mut e = 0u32;
        let mut q = p.clone();
        while let Some(next) = q.try_div(&f) {
            q = next;
            e += 1;
        }
        result.push((f, e));
    }
    result.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| format!("{}", a.0).cmp(&format!("{}", b.0)))
    });
    Ok((c, result))
}

/// Factor a monic squarefree polynomial into monic irreducibles over Q.
fn factor_squarefree(p: &UnivariatePoly) -> Vec<UnivariatePoly> {
    let d = match p.degree() {
        None | Some(0) => return vec![],
        Some(d) => d,
    };
    if d == 1 {
        return vec![p.monic()];
    }
    // peel off rational roots
    for (root, _) in rational_roots(p) {
        let lin = UnivariatePoly::from_coeffs(vec![-root, Rat::one()]);
        let rest = p.try_div(&lin).unwrap();
        let mut out = vec![lin];
        out.extend(factor_squarefree(&rest));
        return out;
    }
    // Kronecker: look for a factor of degree k ≤ d/2 by interpolating
    // through divisor combinations of integer values
    let prim = p.primitive_part();
    for k in 2..=d / 2 {
        if let Some(f) = kronecker_factor(&prim, k) {
            let rest = p.try_div(&f).unwrap();
            let mut out = factor_squarefree(&f);
            out.extend(factor_squarefree(&rest));
            return out;
        }
    }
    vec![p.monic()]
}

fn kronecker_factor(prim: &UnivariatePoly, k: usize) -> Option<UnivariatePoly> {
    // evaluation points 0, 1, -1, 2, -2, ...
    let mut pts: Vec<Rat> = vec![Rat::zero()];
    let mut i = 1i64;
    while pts.len() < k + 1 {
        pts.push(rat(i));
        pts.push(rat(-i));
        i += 1;
    }
    pts.truncate(k + 1);
    let vals: Vec<BigInt> = pts.iter().map(|x| prim.eval(x).numer().clone()).collect();
    if vals.iter().any(|v| v.is_zero()) {
        // a rational root slipped through; caller handles roots
        return None;
    }
    // all signed divisors of each value
    let divs: Vec<Vec<BigInt>> = vals
        .iter()
        .map(|v| {
            let mut ds = divisors(&v.abs());
            let neg: Vec<BigInt> = ds.iter().map(|d| -d).collect();
            ds.extend(neg);
            ds
        })
        .collect();
    let mut choice = vec![0usize; k + 1];
    loop {
        let ys: Vec<Rat> = choice
            .iter()
            .enumerate()
            .map(|(i, &c)| Rat::from(divs[i][c].clone()))
            .collect();
        if let Some(cand) = lagrange(&pts, &ys) {
            if cand.degree() == Some(k) {
                let cand = cand.primitive_part();
                if cand.degree() == Some(k) && prim.try_div(&cand).is_some() {
                    return Some(cand.monic());
                }
            }
        }
        // advance multi-index
        let mut pos = 0;
        loop {
            if pos > k {
                return None;
            }
            choice[pos] += 1;
            if choice[pos] < divs[pos].len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn lagrange(xs: &[Rat], ys: &[Rat]) -> Option<UnivariatePoly> {
    let mut acc = UnivariatePoly::zero();
    for (i, yi) in ys.iter().enumerate() {
        let mut num = UnivariatePoly::one();
        let mut den = Rat::one();
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            num = &num * &UnivariatePoly::from_coeffs(vec![-xj.clone(), Rat::one()]);
            den *= &xs[i] - xj;
        }
        if den.is_zero() {
            return None;
        }
        acc = &acc + &num.scale(&(yi / &den));
    }
    Some(acc)
}

/// A quotient of univariate polynomials, kept in lowest terms with integer
/// coprime numerator/denominator coefficients and positive leading
/// denominator coefficient.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: UnivariatePoly,
    den: UnivariatePoly,
}

impl RationalFunction {
    pub fn new(num: UnivariatePoly, den: UnivariatePoly) -> RationalFunction {
        assert!(!den.is_zero(), "zero denominator");
        let mut rf = RationalFunction { num, den };
        rf.normalize();
        rf
    }

    pub fn zero() -> RationalFunction {
        RationalFunction::from_poly(UnivariatePoly::zero())
    }

    pub fn from_poly(p: UnivariatePoly) -> RationalFunction {
        RationalFunction::new(p, UnivariatePoly::one())
    }

    pub fn constant(c: Rat) -> RationalFunction {
        RationalFunction::from_poly(UnivariatePoly::constant(c))
    }

    /// 1 / (a + b·s) for integers a, b.
    pub fn inv_linear(a: i64, b: i64) -> RationalFunction {
        RationalFunction::new(UnivariatePoly::one(), UnivariatePoly::linear(a, b))
    }

    pub fn num(&self) -> &UnivariatePoly {
        &self.num
    }

    pub fn den(&self) -> &UnivariatePoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den = UnivariatePoly::one();
            return;
        }
        let g = self.num.gcd(&self.den);
        if g.degree().unwrap_or(0) > 0 {
            self.num = self.num.try_div(&g).unwrap();
            self.den = self.den.try_div(&g).unwrap();
        }
        // scale so both parts have integer coprime coefficients and the
        // denominator has a positive leading coefficient
        let pn = self.num.primitive_part();
        let pd = self.den.primitive_part();
        // num = a·pn, den = b·pd with rational a, b; multiply through by the
        // common rescaling, keeping the pair (pn·(a/b as reduced fraction))
        let a = &self.num.leading_coeff() / &pn.leading_coeff();
        let b = &self.den.leading_coeff() / &pd.leading_coeff();
        let ratio = a / b; // reduced fraction n/d
        self.num = pn.scale(&Rat::from(ratio.numer().clone()));
        self.den = pd.scale(&Rat::from(ratio.denom().clone()));
        if self.den.leading_coeff().is_negative() {
            self.num = self.num.scale(&rat(-1));
            self.den = self.den.scale(&rat(-1));
        }
    }

    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn to_string_with(&self, var: &str) -> String {
        if self.den.is_one() {
            return self.num.to_string_with(var);
        }
        let num = if self.num.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({})", self.num.to_string_with(var))
        } else {
            self.num.to_string_with(var)
        };
        format!("{}/({})", num, self.den.to_string_with(var))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_with("s"))
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, other: &RationalFunction) -> RationalFunction {
        self + &-other
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: self.num.scale(&rat(-1)),
            den: self.den.clone(),
        }
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, other: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &other.num, &self.den * &other.den)
    }
}
