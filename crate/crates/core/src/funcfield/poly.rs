use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{inv_mod, Field, Rational};

const GCD_PRIMES: [u64; 3] = [2_147_483_647, 2_147_483_629, 2_147_483_587];

/// Coefficients modulo `p`, if every one of them reduces and the degree survives.
fn reduce_mod<F: Field>(f: &Poly<F>, p: u64) -> Option<Vec<u64>> {
    let v: Option<Vec<u64>> = f.coeffs.iter().map(|c| c.mod_prime(p)).collect();
    v.filter(|v| v.last().is_some_and(|&c| c != 0))
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn rem_mod(a: &mut Vec<u64>, b: &[u64], p: u64) {
    let inv = inv_mod(*b.last().unwrap(), p);
    let db = b.len() - 1;
    while a.len() > db {
        let c = a.last().unwrap() * inv % p;
        let shift = a.len() - 1 - db;
        for (j, bj) in b.iter().enumerate() {
            a[shift + j] = (a[shift + j] + p - c * bj % p) % p;
        }
        trim(a);
    }
}

/// Upper bound on the degree of `gcd(f, g)` over the coefficient field: the
/// smallest degree of a gcd modulo a prime that keeps both degrees.
fn gcd_degree_bound<F: Field>(f: &Poly<F>, g: &Poly<F>) -> Option<usize> {
    GCD_PRIMES
        .iter()
        .filter_map(|&p| {
            let (mut a, mut b) = (reduce_mod(f, p)?, reduce_mod(g, p)?);
            while !b.is_empty() {
                rem_mod(&mut a, &b, p);
                std::mem::swap(&mut a, &mut b);
            }
            Some(a.len() - 1)
        })
        .min()
}

/// Dense univariate polynomial, coefficients indexed by degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<F> {
    coeffs: Vec<F>,
}

impl<F: Field> Poly<F> {
    pub fn from_coeffs(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn constant(c: F) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The variable itself.
    pub fn x() -> Self {
        Self::monomial(F::one(), 1)
    }

    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    /// `x - a`.
    pub fn linear_root(a: F) -> Self {
        Self::from_coeffs(vec![-a, F::one()])
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to `-1`.
    pub fn deg_i(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn leading(&self) -> Option<&F> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![F::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    pub fn eval(&self, a: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * a.clone() + c.clone())
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Self) -> Self {
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * g) + &Self::constant(c.clone()))
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| F::from_rational(Rational::from_integer(i.into())) * c.clone())
                .collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let inv = d.leading().unwrap().inv().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![F::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = r[k + dd].clone() * inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[k + j] = r[k + j].clone() - c.clone() * dj.clone();
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.div_rem(d).1
    }

    /// Quotient when `d` divides `self`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        if !self.is_zero() && !other.is_zero() {
            match gcd_degree_bound(self, other) {
                Some(0) => return Self::one(),
                Some(k) => {
                    let (small, big) = if self.degree() <= other.degree() { (self, other) } else { (other, self) };
                    if small.degree() == Some(k) && big.rem(small).is_zero() {
                        return small.monic();
                    }
                }
                None => {}
            }
        }
        let (mut a, mut b) = (self.monic(), other.monic());
        // Monic remainders keep the coefficients from blowing up.
        while !b.is_zero() {
            let r = a.rem(&b).monic();
            a = b;
            b = r;
        }
        a
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            r0 = std::mem::replace(&mut r1, r);
            let s = &s0 - &(&q * &s1);
            s0 = std::mem::replace(&mut s1, s);
            let t = &t0 - &(&q * &t1);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.leading().cloned() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = lc.inv().unwrap();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Multiplicity of `p` as a factor of `self` (nonzero), and the cofactor.
    pub fn split_off(&self, p: &Self) -> (u32, Self) {
        let mut k = 0;
        let mut f = self.clone();
        if p.is_constant() {
            return (0, f);
        }
        while let Some(q) = f.exact_div(p) {
            f = q;
            k += 1;
        }
        (k, f)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::from_coeffs(self.coeffs.iter().map(f).collect())
    }

    /// Reverse coefficients relative to degree `n`: `x^n · self(1/x)`.
    pub fn reversed(&self, n: usize) -> Self {
        let mut v = vec![F::zero(); n + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            assert!(i <= n, "degree exceeds reversal weight");
            v[n - i] = c.clone();
        }
        Self::from_coeffs(v)
    }

    /// Lowest power of the variable dividing `self` (`None` for zero).
    pub fn low_order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn to_rational(&self) -> Option<Poly<Rational>> {
        let v: Option<Vec<Rational>> = self.coeffs.iter().map(|c| c.to_rational()).collect();
        v.map(Poly::from_coeffs)
    }

    pub fn lift(p: &Poly<Rational>) -> Self {
        p.map(|c| F::from_rational(c.clone()))
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = c.to_string();
            let compound = c.to_rational().is_none();
            let (neg, body) = if !compound && cs.starts_with('-') {
                (true, cs[1..].to_string())
            } else {
                (false, cs)
            };
            let body = if compound && i > 0 { format!("({body})") } else { body };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit = body == "1";
            match i {
                0 => out.push_str(&body),
                _ => {
                    if !unit {
                        out.push_str(&body);
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

impl Poly<Rational> {
    /// Total order used to sort places deterministically: by degree, then by
    /// negated coefficients from the top down (linear places sort by root).
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| other.coeffs.iter().rev().cmp(self.coeffs.iter().rev()))
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

impl<F: Field> Add for &Poly<F> {
    type Output = Poly<F>;
    fn add(self, o: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<F: Field> Sub for &Poly<F> {
    type Output = Poly<F>;
    fn sub(self, o: &Poly<F>) -> Poly<F> {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::from_coeffs((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<F: Field> Mul for &Poly<F> {
    type Output = Poly<F>;
    fn mul(self, o: &Poly<F>) -> Poly<F> {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![F::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::from_coeffs(v)
    }
}

impl<F: Field> Neg for &Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for Poly<F> {
            type Output = Poly<F>;
            fn $m(self, o: Poly<F>) -> Poly<F> {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Field> Neg for Poly<F> {
    type Output = Poly<F>;
    fn neg(self) -> Poly<F> {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::field::rat;

    fn p(v: &[i64]) -> Poly<Rational> {
        Poly::from_coeffs(v.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[-1, 0, 1]);
        let b = p(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&p(&[-1, 1])), p(&[-1, 1]));
        let (g, s, t) = p(&[1, 0, 1]).ext_gcd(&p(&[0, 1]));
        assert_eq!(g, Poly::one());
        assert_eq!(&(&s * &p(&[1, 0, 1])) + &(&t * &p(&[0, 1])), Poly::one());
    }

    #[test]
    fn formatting() {
        assert_eq!(p(&[-1728, 1]).to_string(), "t - 1728");
        assert_eq!(p(&[1, 0, -3]).to_string(), "-3*t^2 + 1");
        assert_eq!(Poly::<Rational>::zero().to_string(), "0");
    }

    #[test]
    fn compose_and_reverse() {
        let f = p(&[1, 2, 3]);
        assert_eq!(f.compose(&p(&[0, 1])), f);
        assert_eq!(f.compose(&p(&[1, 1])), p(&[6, 8, 3]));
        assert_eq!(f.reversed(4), p(&[0, 0, 3, 2, 1]));
    }
}
