use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Coefficient field for polynomials and rational functions.
///
/// Implemented for ℚ and for ℚ(√D). Arithmetic is by value; callers clone.
pub trait Field:
    Clone
    + PartialEq
    + Eq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn inv(&self) -> Option<Self>;
    fn from_rational(q: Rational) -> Self;
    /// `Some(q)` when the element lies in ℚ.
    fn to_rational(&self) -> Option<Rational>;
    /// Exactly one of `x` and `-x` is canonically positive for `x != 0`.
    fn is_canonically_positive(&self) -> bool;
    /// Square root of `D` when the field is a proper quadratic extension.
    fn radicand(&self) -> Option<BigInt> {
        None
    }
    /// Components in a ℚ-basis: `[a]` for ℚ, `[a, b]` for `a + b√D`.
    fn rational_parts(&self) -> Vec<Rational>;
    /// Element with the given parts, sharing this element's field.
    fn from_parts_like(&self, parts: &[Rational]) -> Self;
    /// Image in 𝔽_p for rational elements whose denominator is prime to `p`.
    fn mod_prime(&self, p: u64) -> Option<u64> {
        let q = self.to_rational()?;
        let m = BigInt::from(p);
        let den = (q.denom() % &m).to_u64()?;
        if den == 0 {
            return None;
        }
        let num = ((q.numer() % &m) + &m) % &m;
        Some(num.to_u64()? * inv_mod(den, p) % p)
    }
}

/// Inverse modulo the prime `p` of a nonzero residue.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

/// A square root of `a` modulo the odd prime `p`, if `a` is a square (Tonelli-Shanks).
pub(crate) fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let (mut m, mut c, mut t, mut r) = (s, pow_mod(z, q, p), pow_mod(a, q, p), pow_mod(a, q.div_ceil(2), p));
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = t2 * t2 % p;
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = b * b % p;
        t = t * c % p;
        r = r * b % p;
    }
    Some(r.min(p - r))
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn is_canonically_positive(&self) -> bool {
        self.is_positive()
    }
    fn rational_parts(&self) -> Vec<Rational> {
        vec![self.clone()]
    }
    fn from_parts_like(&self, parts: &[Rational]) -> Self {
        parts[0].clone()
    }
}

/// An element `re + im·√d` of ℚ(√d).
///
/// `d` is `None` for elements known to be rational; any operation mixing two
/// different radicands panics, since that is a programming error upstream.
#[derive(Clone, Debug)]
pub struct Quadratic {
    re: Rational,
    im: Rational,
    d: Option<BigInt>,
}

impl Quadratic {
    pub fn new(re: Rational, im: Rational, d: BigInt) -> Self {
        assert!(
            !is_perfect_square(&d) && !d.is_zero(),
            "radicand must not be a square"
        );
        Quadratic { re, im, d: Some(d) }
    }

    pub fn rational(re: Rational) -> Self {
        Quadratic { re, im: Rational::zero(), d: None }
    }

    pub fn sqrt_of(d: BigInt) -> Self {
        Quadratic::new(Rational::zero(), Rational::one(), d)
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn d(&self) -> Option<&BigInt> {
        self.d.as_ref()
    }

    fn join(a: &Option<BigInt>, b: &Option<BigInt>) -> Option<BigInt> {
        match (a, b) {
            (Some(x), Some(y)) => {
                assert_eq!(x, y, "mixed quadratic fields");
                Some(x.clone())
            }
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (None, None) => None,
        }
    }

    fn d_rat(&self) -> Rational {
        Rational::from_integer(self.d.clone().unwrap_or_default())
    }

    pub fn conjugate(&self) -> Self {
        Quadratic { re: self.re.clone(), im: -self.im.clone(), d: self.d.clone() }
    }

    pub fn norm(&self) -> Rational {
        self.re.clone() * self.re.clone() - self.d_rat() * self.im.clone() * self.im.clone()
    }
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &(r.clone() * r) == n
}

/// Square root in ℚ, if it exists.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer(), q.denom());
    if is_perfect_square(n) && is_perfect_square(d) {
        Some(Rational::new(n.sqrt(), d.sqrt()))
    } else {
        None
    }
}

/// Square root in ℚ(√d) of `a + b√d`, by the norm method.
pub fn quadratic_sqrt(a: &Rational, b: &Rational, d: &Rational) -> Option<(Rational, Rational)> {
    let two = rat(2);
    if b.is_zero() {
        if let Some(r) = rational_sqrt(a) {
            return Some((r, Rational::zero()));
        }
        return rational_sqrt(&(a.clone() / d.clone())).map(|s| (Rational::zero(), s));
    }
    let n = rational_sqrt(&(a.clone() * a.clone() - d.clone() * b.clone() * b.clone()))?;
    for cand in [(a.clone() + n.clone()) / two.clone(), (a.clone() - n.clone()) / two.clone()] {
        if let Some(x) = rational_sqrt(&cand) {
            if x.is_zero() {
                continue;
            }
            let y = b.clone() / (two.clone() * x.clone());
            return Some((x, y));
        }
    }
    None
}

impl PartialEq for Quadratic {
    fn eq(&self, other: &Self) -> bool {
        if self.re != other.re || self.im != other.im {
            return false;
        }
        self.im.is_zero() || self.d == other.d
    }
}

impl Eq for Quadratic {}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.d {
            Some(d) if !self.im.is_zero() => {
                let im = if self.im.is_one() {
                    String::new()
                } else if (-self.im.clone()).is_one() {
                    "-".to_string()
                } else {
                    format!("{}*", self.im)
                };
                if self.re.is_zero() {
                    write!(f, "{im}sqrt({d})")
                } else if im.starts_with('-') {
                    write!(f, "{}{im}sqrt({d})", self.re)
                } else {
                    write!(f, "{}+{im}sqrt({d})", self.re)
                }
            }
            _ => write!(f, "{}", self.re),
        }
    }
}

impl Add for Quadratic {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let d = Self::join(&self.d, &o.d);
        Quadratic { re: self.re + o.re, im: self.im + o.im, d }
    }
}

impl Sub for Quadratic {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let d = Self::join(&self.d, &o.d);
        Quadratic { re: self.re - o.re, im: self.im - o.im, d }
    }
}

impl Mul for Quadratic {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let d = Self::join(&self.d, &o.d);
        match (self.im.is_zero(), o.im.is_zero()) {
            (true, true) => return Quadratic { re: self.re * o.re, im: Rational::zero(), d },
            (true, false) => return Quadratic { im: o.im * self.re.clone(), re: o.re * self.re, d },
            (false, true) => return Quadratic { im: self.im * o.re.clone(), re: self.re * o.re, d },
            (false, false) => {}
        }
        let dr = Rational::from_integer(d.clone().unwrap_or_default());
        let re = self.re.clone() * o.re.clone() + dr * self.im.clone() * o.im.clone();
        let im = self.re * o.im + self.im * o.re;
        Quadratic { re, im, d }
    }
}

impl Neg for Quadratic {
    type Output = Self;
    fn neg(self) -> Self {
        Quadratic { re: -self.re, im: -self.im, d: self.d }
    }
}

impl Zero for Quadratic {
    fn zero() -> Self {
        Quadratic::rational(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Quadratic {
    fn one() -> Self {
        Quadratic::rational(Rational::one())
    }
}

impl Field for Quadratic {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conjugate();
        Some(Quadratic { re: c.re / n.clone(), im: c.im / n, d: c.d })
    }
    fn from_rational(q: Rational) -> Self {
        Quadratic::rational(q)
    }
    fn to_rational(&self) -> Option<Rational> {
        self.im.is_zero().then(|| self.re.clone())
    }
    fn is_canonically_positive(&self) -> bool {
        if !self.re.is_zero() {
            self.re.is_positive()
        } else {
            self.im.is_positive()
        }
    }
    fn radicand(&self) -> Option<BigInt> {
        self.d.clone()
    }
    fn rational_parts(&self) -> Vec<Rational> {
        vec![self.re.clone(), self.im.clone()]
    }
    fn from_parts_like(&self, parts: &[Rational]) -> Self {
        let im = parts.get(1).cloned().unwrap_or_else(Rational::zero);
        Quadratic { re: parts[0].clone(), im, d: self.d.clone() }
    }
    /// Image under `√D ↦ r`, where `r` is the smaller square root of `D` mod `p`.
    fn mod_prime(&self, p: u64) -> Option<u64> {
        let re = self.re.mod_prime(p)?;
        if self.im.is_zero() {
            return Some(re);
        }
        let d = self.d.as_ref()?;
        let m = BigInt::from(p);
        let d = (((d % &m) + &m) % &m).to_u64()?;
        if d == 0 {
            return None;
        }
        let r = sqrt_mod(d, p)?;
        Some((re + self.im.mod_prime(p)? * r) % p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_inverse_and_norm() {
        let a = Quadratic::new(rat(3), rat(2), BigInt::from(2));
        assert_eq!(a.norm(), rat(1));
        let prod = a.clone() * a.inv().unwrap();
        assert!(prod.is_one());
    }

    #[test]
    fn quadratic_sqrt_recovers_square() {
        // (1 + √2)² = 3 + 2√2
        let (x, y) = quadratic_sqrt(&rat(3), &rat(2), &rat(2)).unwrap();
        assert_eq!((x.clone() * x.clone() + rat(2) * y.clone() * y.clone(), rat(2) * x * y), (rat(3), rat(2)));
        assert!(quadratic_sqrt(&rat(0), &rat(1), &rat(2)).is_none());
        assert_eq!(quadratic_sqrt(&rat(2), &rat(0), &rat(2)), Some((rat(0), rat(1))));
    }

    #[test]
    fn square_roots_mod_p() {
        for p in [7u64, 17, 2_147_483_647] {
            for a in 1..40u64 {
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(r * r % p, a % p),
                    None => assert_eq!(pow_mod(a, (p - 1) / 2, p), p - 1),
                }
            }
        }
    }

    #[test]
    fn display_forms() {
        let d = BigInt::from(2);
        assert_eq!(Quadratic::new(rat(3), rat(2), d.clone()).to_string(), "3+2*sqrt(2)");
        assert_eq!(Quadratic::new(rat(0), rat(-1), d.clone()).to_string(), "-sqrt(2)");
        assert_eq!(Quadratic::new(ratio(1, 2), rat(-3), d).to_string(), "1/2-3*sqrt(2)");
    }
}
