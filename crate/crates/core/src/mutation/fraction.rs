use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::poly::{gcd, Poly};

/// Reduced quotient of integer polynomials in `u_1..u_n`.
///
/// Canonical form: numerator and denominator share no non-unit factor
/// (including integer content) and the denominator's lexicographically
/// leading coefficient is positive. Equal rational functions therefore have
/// equal representations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentFraction {
    num: Poly,
    den: Poly,
}

impl LaurentFraction {
    /// Panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        assert_eq!(num.nvars(), den.nvars());
        if num.is_zero() {
            return LaurentFraction {
                den: Poly::one(num.nvars()),
                num,
            };
        }
        let g = gcd(&num, &den);
        let mut num = num.exact_div(&g).expect("gcd divides numerator");
        let mut den = den.exact_div(&g).expect("gcd divides denominator");
        if den.leading_sign() < 0 {
            num = num.neg();
            den = den.neg();
        }
        LaurentFraction { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        let n = p.nvars();
        LaurentFraction {
            num: p,
            den: Poly::one(n),
        }
    }

    /// The initial cluster variable `u_{index+1}`.
    pub fn var(nvars: usize, index: usize) -> Self {
        Self::from_poly(Poly::var(nvars, index))
    }

    pub fn constant(nvars: usize, c: i64) -> Self {
        Self::from_poly(Poly::constant(nvars, c))
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Sign-normalises a quotient whose parts are already coprime.
    fn from_coprime(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return LaurentFraction {
                den: Poly::one(num.nvars()),
                num,
            };
        }
        if den.leading_sign() < 0 {
            LaurentFraction {
                num: num.neg(),
                den: den.neg(),
            }
        } else {
            LaurentFraction { num, den }
        }
    }

    /// Sum or difference; with `g = gcd(b, d)` only `g` has to be tested
    /// against the new numerator, since both inputs are reduced.
    fn combine(&self, other: &Self, negate: bool) -> Self {
        let c = if negate {
            other.num.neg()
        } else {
            other.num.clone()
        };
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            return Self::from_coprime(
                self.num.mul(&other.den).add(&c.mul(&self.den)),
                self.den.mul(&other.den),
            );
        }
        let b = self.den.exact_div(&g).expect("gcd divides");
        let d = other.den.exact_div(&g).expect("gcd divides");
        let t = self.num.mul(&d).add(&c.mul(&b));
        if t.is_zero() {
            return Self::from_coprime(t, Poly::one(self.nvars()));
        }
        let h = gcd(&t, &g);
        Self::from_coprime(
            t.exact_div(&h).expect("gcd divides"),
            b.mul(&other.den.exact_div(&h).expect("gcd divides")),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    /// Cross-cancels `a/b * c/d` as `(a/gcd(a,d)) (c/gcd(c,b))` over
    /// `(b/gcd(c,b)) (d/gcd(a,d))`.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::from_coprime(Poly::zero(self.nvars()), Poly::one(self.nvars()));
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let div = |p: &Poly, g: &Poly| p.exact_div(g).expect("gcd divides");
        Self::from_coprime(
            div(&self.num, &g1).mul(&div(&other.num, &g2)),
            div(&self.den, &g2).mul(&div(&other.den, &g1)),
        )
    }

    /// Panics on division by zero.
    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero");
        self.mul(&Self::from_coprime(other.den.clone(), other.num.clone()))
    }

    pub fn pow(&self, k: u32) -> Self {
        // Powers of coprime polynomials stay coprime.
        LaurentFraction {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    /// Exact value at an integer point, as `(numerator, denominator)`;
    /// `None` if the denominator vanishes there.
    pub fn eval(&self, point: &[BigInt]) -> Option<(BigInt, BigInt)> {
        let d = self.den.eval(point);
        if d == BigInt::from(0) {
            return None;
        }
        Some((self.num.eval(point), d))
    }
}

/// Reduced denominator is a single monomial with coefficient `±1`.
pub fn is_laurent(x: &LaurentFraction) -> bool {
    x.den.term_count() == 1 && x.den.terms().all(|(_, c)| c.abs().is_one())
}

impl fmt::Display for LaurentFraction {
    /// `num / den`; multi-term parts are parenthesised, a unit denominator is
    /// omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |p: &Poly| {
            if p.term_count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{} / {}", part(&self.num), part(&self.den))
        }
    }
}
