use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, Rational};
use super::poly::Poly;

/// Element of F(t) in lowest terms with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFunc<F> {
    num: Poly<F>,
    den: Poly<F>,
}

impl<F: Field> RatFunc<F> {
    /// Panics if `den` is zero.
    pub fn new(num: Poly<F>, den: Poly<F>) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = if den.is_constant() { Poly::one() } else { num.gcd(&den) };
        let (mut n, mut d) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lc = d.leading().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.inv().unwrap();
            n = n.scale(&inv);
            d = d.scale(&inv);
        }
        RatFunc { num: n, den: d }
    }

    /// From a fraction already in lowest terms; only normalises the denominator.
    fn new_reduced(num: Poly<F>, den: Poly<F>) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let lc = den.leading().unwrap().clone();
        if lc.is_one() {
            RatFunc { num, den }
        } else {
            let inv = lc.inv().unwrap();
            RatFunc { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly<F>) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: F) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::constant(F::from_rational(q))
    }

    pub fn t() -> Self {
        Self::from_poly(Poly::x())
    }

    pub fn num(&self) -> &Poly<F> {
        &self.num
    }

    pub fn den(&self) -> &Poly<F> {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<&Poly<F>> {
        self.is_poly().then_some(&self.num)
    }

    pub fn is_constant(&self) -> bool {
        self.is_poly() && self.num.is_constant()
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::new(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self * &i)
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::new(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: i64) -> Self {
        if e >= 0 {
            RatFunc { num: self.num.pow(e as u32), den: self.den.pow(e as u32) }
        } else {
            self.inv().expect("negative power of zero").pow(-e)
        }
    }

    /// `deg(den) - deg(num)`, the order at infinity; `None` for zero.
    pub fn order_at_infinity(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.den.deg_i() - self.num.deg_i())
    }

    /// `self(φ)`.
    pub fn compose(&self, phi: &Self) -> Self {
        let n = eval_poly(&self.num, phi);
        let d = eval_poly(&self.den, phi);
        n.checked_div(&d).expect("composition hits a pole of the denominator")
    }

    /// `self(1/s)`, as a rational function of `s`.
    pub fn invert_variable(&self) -> Self {
        let nd = self.num.deg_i().max(0) as usize;
        let dd = self.den.deg_i() as usize;
        let (n, d) = (self.num.reversed(nd), self.den.reversed(dd));
        if nd >= dd {
            Self::new(n, d.shift(nd - dd))
        } else {
            Self::new(n.shift(dd - nd), d)
        }
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(n, &self.den * &self.den)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G + Copy) -> RatFunc<G> {
        RatFunc::new(self.num.map(f), self.den.map(f))
    }

    pub fn lift(q: &RatFunc<Rational>) -> Self {
        RatFunc {
            num: Poly::lift(&q.num),
            den: Poly::lift(&q.den),
        }
    }

    pub fn to_rational(&self) -> Option<RatFunc<Rational>> {
        Some(RatFunc { num: self.num.to_rational()?, den: self.den.to_rational()? })
    }

    pub fn fmt_var(&self, var: &str) -> String {
        if self.is_poly() {
            return self.num.fmt_var(var);
        }
        let wrap = |p: &Poly<F>| {
            let s = p.fmt_var(var);
            if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1
                || s.contains('*')
                || s.starts_with('-')
            {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

fn eval_poly<F: Field>(p: &Poly<F>, phi: &RatFunc<F>) -> RatFunc<F> {
    let deg = match p.degree() {
        None => return RatFunc::zero(),
        Some(d) => d,
    };
    // Homogenise: p(N/D) = Σ c_i N^i D^(deg-i) / D^deg.
    let (n, d) = (&phi.num, &phi.den);
    let mut num = Poly::zero();
    let mut npow = Poly::one();
    let dpows: Vec<Poly<F>> = {
        let mut v = vec![Poly::one()];
        for _ in 0..deg {
            let next = v.last().unwrap() * d;
            v.push(next);
        }
        v
    };
    for (i, c) in p.coeffs().iter().enumerate() {
        if !c.is_zero() {
            num = &num + &(&npow * &dpows[deg - i]).scale(c);
        }
        npow = &npow * n;
    }
    RatFunc::new(num, dpows[deg].clone())
}

impl<F: Field> fmt::Display for RatFunc<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_var("t"))
    }
}

impl<F: Field> Add for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn add(self, o: &RatFunc<F>) -> RatFunc<F> {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den.is_constant() && o.den.is_constant() {
            return RatFunc { num: &self.num + &o.num, den: Poly::one() };
        }
        // Henrici: only the gcd of the denominators can survive.
        let g = self.den.gcd(&o.den);
        if g.is_constant() {
            let num = &(&self.num * &o.den) + &(&o.num * &self.den);
            return RatFunc::new_reduced(num, &self.den * &o.den);
        }
        let d1 = self.den.div_rem(&g).0;
        let d2 = o.den.div_rem(&g).0;
        let t = &(&self.num * &d2) + &(&o.num * &d1);
        if t.is_zero() {
            return RatFunc::zero();
        }
        let g2 = t.gcd(&g);
        if g2.is_constant() {
            RatFunc::new_reduced(t, &(&d1 * &d2) * &g)
        } else {
            RatFunc::new_reduced(t.div_rem(&g2).0, &(&d1 * &d2) * &g.div_rem(&g2).0)
        }
    }
}

impl<F: Field> Sub for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn sub(self, o: &RatFunc<F>) -> RatFunc<F> {
        self + &(-o)
    }
}

impl<F: Field> Mul for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn mul(self, o: &RatFunc<F>) -> RatFunc<F> {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        // Cross-cancel so that only the smaller gcds are computed.
        let g1 = if o.den.is_constant() { Poly::one() } else { self.num.gcd(&o.den) };
        let g2 = if self.den.is_constant() { Poly::one() } else { o.num.gcd(&self.den) };
        let cut = |p: &Poly<F>, g: &Poly<F>| if g.is_constant() { p.clone() } else { p.div_rem(g).0 };
        let num = &cut(&self.num, &g1) * &cut(&o.num, &g2);
        let den = &cut(&o.den, &g1) * &cut(&self.den, &g2);
        RatFunc::new_reduced(num, den)
    }
}

impl<F: Field> Neg for &RatFunc<F> {
    type Output = RatFunc<F>;
    fn neg(self) -> RatFunc<F> {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<F: Field> $tr for RatFunc<F> {
            type Output = RatFunc<F>;
            fn $m(self, o: RatFunc<F>) -> RatFunc<F> {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<F: Field> Neg for RatFunc<F> {
    type Output = RatFunc<F>;
    fn neg(self) -> RatFunc<F> {
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
    fn normalises() {
        let f = RatFunc::new(p(&[-2, 0, 2]), p(&[2, 2]));
        assert_eq!(f.num(), &p(&[-1, 1]));
        assert!(f.is_poly());
    }

    #[test]
    fn invert_variable_round_trips() {
        let f = RatFunc::new(p(&[1, 3]), p(&[5, 1]));
        assert_eq!(f.invert_variable().invert_variable(), f);
        let g = RatFunc::new(p(&[0, 0, 1]), p(&[1, 0, 0, 1]));
        assert_eq!(g.invert_variable(), RatFunc::new(p(&[0, 1]), p(&[1, 0, 0, 1])));
    }

    #[test]
    fn compose_matches_direct_evaluation() {
        let f = RatFunc::new(p(&[1, 1]), p(&[0, 1]));
        let phi = RatFunc::from_poly(p(&[1728, 0, 1]));
        let c = f.compose(&phi);
        assert_eq!(c, RatFunc::new(p(&[1729, 0, 1]), p(&[1728, 0, 1])));
    }
}
