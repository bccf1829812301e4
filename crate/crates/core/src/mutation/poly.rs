//! Sparse multivariate polynomials over the integers in `u_1..u_n`.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so the map order is
//! lexicographic with `u_1` most significant; that order fixes the leading
//! term used by division and sign normalisation. Printing uses graded
//! lexicographic order instead (see [`Poly::fmt`]).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Exponents = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c.into());
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, 1)
    }

    /// The variable `u_{index+1}`.
    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[index] = 1;
        Poly::monomial(e, BigInt::one())
    }

    pub fn monomial(exponents: Exponents, coeff: BigInt) -> Self {
        let mut p = Poly::zero(exponents.len());
        p.add_term(exponents, coeff);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Exponents, BigInt)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Leading term in lexicographic order.
    pub fn leading(&self) -> Option<(&Exponents, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn constant_value(&self) -> Option<BigInt> {
        if self.is_zero() {
            Some(BigInt::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    /// Highest-index variable that occurs, if any.
    fn main_var(&self) -> Option<usize> {
        (0..self.nvars).rev().find(|&v| self.degree_in(v) > 0)
    }

    /// Coefficient of `u_var^d`, as a polynomial not involving `u_var`.
    fn coeff_in(&self, var: usize, d: u32) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[var] == d {
                let mut e = e.clone();
                e[var] = 0;
                p.add_term(e, c.clone());
            }
        }
        p
    }

    fn shift_var(&self, var: usize, d: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e[var] += d;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Largest monomial dividing every term.
    fn monomial_content(&self) -> Exponents {
        let mut keys = self.terms.keys();
        let first = keys.next().cloned().unwrap_or_else(|| vec![0; self.nvars]);
        keys.fold(first, |acc, e| {
            acc.iter().zip(e).map(|(a, b)| *a.min(b)).collect()
        })
    }

    /// Divides every term by the monomial `u^e`, which must divide it.
    fn shift_down(&self, e: &Exponents) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.iter().zip(e).map(|(a, b)| a - b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Poly {
        if k.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        self.scale(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        debug_assert_eq!(self.nvars, other.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, mut k: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a
    /// remainder.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        let (de, dc) = divisor.leading()?;
        let mut rem = self.clone();
        let mut quot = Poly::zero(self.nvars);
        while let Some((re, rc)) = rem.leading() {
            if re.iter().zip(de).any(|(r, d)| r < d) {
                return None;
            }
            let (q, r) = rc.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            let e: Exponents = re.iter().zip(de).map(|(r, d)| r - d).collect();
            let t = Poly::monomial(e, q);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Gcd of the integer coefficients (zero for the zero polynomial).
    pub fn integer_content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Sign making the lexicographically leading coefficient positive.
    pub fn leading_sign(&self) -> i32 {
        match self.leading() {
            Some((_, c)) if c.is_negative() => -1,
            _ => 1,
        }
    }

    pub fn normalized(&self) -> Poly {
        if self.leading_sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Evaluates at an integer point.
    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| {
                    acc * num_traits::pow(x.clone(), k as usize)
                })
            })
            .sum()
    }
}

/// Gcd over `Z[u_1..u_n]`, normalised to a positive leading coefficient.
/// Recursive: split off the content in the highest occurring variable and
/// run a primitive pseudo-remainder sequence on the primitive parts.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.normalized();
    }
    if b.is_zero() {
        return a.normalized();
    }
    // Monomial factors are split off first; a monomial argument then has a
    // monomial gcd, which covers every Laurent denominator.
    let (ma, mb) = (a.monomial_content(), b.monomial_content());
    let shared: Exponents = ma.iter().zip(&mb).map(|(x, y)| *x.min(y)).collect();
    if a.term_count() == 1 || b.term_count() == 1 {
        let c = a.integer_content().gcd(&b.integer_content());
        return Poly::monomial(shared, c);
    }
    if ma.iter().chain(&mb).any(|&d| d > 0) {
        let g = gcd(&a.shift_down(&ma), &b.shift_down(&mb));
        return g.mul(&Poly::monomial(shared, BigInt::one()));
    }
    let nvars = a.nvars;
    let var = match (a.main_var(), b.main_var()) {
        (None, None) => {
            let g = a
                .constant_value()
                .unwrap()
                .gcd(&b.constant_value().unwrap());
            return Poly::constant(nvars, g);
        }
        (Some(x), None) | (None, Some(x)) => x,
        (Some(x), Some(y)) => x.max(y),
    };
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let content = gcd(&ca, &cb);
    let mut p = a.exact_div(&ca).expect("content divides");
    let mut q = b.exact_div(&cb).expect("content divides");
    if p.degree_in(var) < q.degree_in(var) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = pseudo_rem(&p, &q, var);
        p = q;
        q = if r.is_zero() {
            r
        } else {
            primitive_part(&r, var)
        };
    }
    primitive_part(&p, var).mul(&content).normalized()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
fn content_in(p: &Poly, var: usize) -> Poly {
    let deg = p.degree_in(var);
    let mut acc = Poly::zero(p.nvars);
    for d in 0..=deg {
        let c = p.coeff_in(var, d);
        if !c.is_zero() {
            acc = gcd(&acc, &c);
            if acc.is_one() {
                break;
            }
        }
    }
    acc
}

fn primitive_part(p: &Poly, var: usize) -> Poly {
    let c = content_in(p, var);
    p.exact_div(&c).expect("content divides").normalized()
}

/// Pseudo-remainder of `a` by `b` in `var`.
fn pseudo_rem(a: &Poly, b: &Poly, var: usize) -> Poly {
    let db = b.degree_in(var);
    let lb = b.coeff_in(var, db);
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lr = r.coeff_in(var, dr);
        r = r.mul(&lb).sub(&b.mul(&lr).shift_var(var, dr - db));
    }
    r
}

/// Graded lexicographic comparison with `u_1 < u_2 < ... < u_n`.
pub fn grlex(a: &Exponents, b: &Exponents) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &Exponents) -> fmt::Result {
    let mut first = true;
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        write!(f, "u_{}", i + 1)?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Poly {
    /// Terms in ascending graded lexicographic order, e.g. `1 + u_1 + u_1*u_2^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<(&Exponents, &BigInt)> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex(a.0, b.0));
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let constant = e.iter().all(|&k| k == 0);
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if constant {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(n: usize, i: usize) -> Poly {
        Poly::var(n, i)
    }

    fn c(n: usize, k: i64) -> Poly {
        Poly::constant(n, k)
    }

    #[test]
    fn display_uses_grlex() {
        let p = u(2, 1)
            .mul(&u(2, 1))
            .add(&u(2, 0))
            .add(&c(2, 1))
            .add(&u(2, 0).mul(&u(2, 1)));
        assert_eq!(p.to_string(), "1 + u_1 + u_1*u_2 + u_2^2");
        assert_eq!(
            c(2, -3).add(&u(2, 1).scale(&BigInt::from(-2))).to_string(),
            "-3 - 2*u_2"
        );
    }

    #[test]
    fn gcd_of_products() {
        let x = u(3, 0);
        let y = u(3, 1);
        let z = u(3, 2);
        let f = x.add(&y).add(&c(3, 1));
        let g = x.mul(&z).sub(&c(3, 2));
        let h = y.mul(&y).add(&z);
        let a = f.mul(&g).scale(&BigInt::from(6));
        let b = f.mul(&h).scale(&BigInt::from(-4));
        assert_eq!(gcd(&a, &b), f.scale(&BigInt::from(2)));
        assert_eq!(gcd(&g, &h), c(3, 1));
    }

    #[test]
    fn gcd_with_constants_and_zero() {
        let x = u(2, 0);
        assert_eq!(gcd(&Poly::zero(2), &x.neg()), x);
        assert_eq!(gcd(&c(2, 6), &c(2, -4)), c(2, 2));
        assert_eq!(gcd(&x.scale(&BigInt::from(6)), &c(2, 4)), c(2, 2));
    }

    #[test]
    fn exact_division() {
        let x = u(2, 0);
        let y = u(2, 1);
        let f = x.add(&y);
        let g = x.sub(&y);
        assert_eq!(f.mul(&g).exact_div(&g), Some(f.clone()));
        assert_eq!(f.exact_div(&g), None);
        assert_eq!(c(2, 3).exact_div(&c(2, 2)), None);
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let f = u(2, 0).add(&c(2, 1));
        assert_eq!(f.pow(3), f.mul(&f).mul(&f));
        assert_eq!(f.pow(0), Poly::one(2));
    }
}
