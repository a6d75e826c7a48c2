use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::field::{quadratic_sqrt, rat, rational_sqrt, Field, Rational};
use super::place::{poly_valuation, Place};
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::FuncFieldError;

/// Element of a residue field ℚ[θ]/(μ), with μ monic irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueElt {
    rep: Poly<Rational>,
    modulus: Poly<Rational>,
}

/// Outcome of a square test in a residue field.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareTest {
    Yes,
    No,
    Undetermined,
}

impl ResidueElt {
    pub fn new(rep: Poly<Rational>, modulus: Poly<Rational>) -> Self {
        debug_assert!(modulus.is_monic() && !modulus.is_constant());
        ResidueElt { rep: rep.rem(&modulus), modulus }
    }

    /// ℚ viewed as ℚ[θ]/(θ).
    pub fn rational(q: Rational) -> Self {
        Self::new(Poly::constant(q), Poly::x())
    }

    pub fn from_rational_like(&self, q: Rational) -> Self {
        Self::new(Poly::constant(q), self.modulus.clone())
    }

    pub fn rep(&self) -> &Poly<Rational> {
        &self.rep
    }

    pub fn modulus(&self) -> &Poly<Rational> {
        &self.modulus
    }

    /// Degree of the residue field over ℚ.
    pub fn field_degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        match self.rep.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.rep.coeff(0)),
            _ => None,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let (g, s, _) = self.rep.ext_gcd(&self.modulus);
        debug_assert!(g.degree() == Some(0), "modulus not irreducible");
        Some(Self::new(s, self.modulus.clone()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = self.from_rational_like(rat(1));
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Lowest nonzero coefficient of the representative is positive.
    pub fn is_canonically_positive(&self) -> bool {
        self.rep
            .coeffs()
            .iter()
            .find(|c| !c.is_zero())
            .is_some_and(|c| c.is_positive())
    }

    /// Total order on representatives (coefficients from the constant term up).
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        let n = self.field_degree();
        (0..n)
            .map(|i| self.rep.coeff(i).cmp(&other.rep.coeff(i)))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }

    /// Exact square test for residue fields of degree at most 2.
    pub fn is_square(&self) -> Result<SquareTest, FuncFieldError> {
        if self.is_zero() {
            return Err(FuncFieldError::ZeroInput);
        }
        Ok(match self.sqrt() {
            Ok(Some(_)) => SquareTest::Yes,
            Ok(None) => SquareTest::No,
            Err(_) => SquareTest::Undetermined,
        })
    }

    /// A square root, when the field has degree at most 2.
    pub fn sqrt(&self) -> Result<Option<Self>, FuncFieldError> {
        match self.field_degree() {
            1 => Ok(rational_sqrt(&self.rep.coeff(0)).map(|r| self.from_rational_like(r))),
            2 => {
                // θ = (-b + √δ)/2 for μ = θ² + bθ + c, δ = b² - 4c.
                let b = self.modulus.coeff(1);
                let c = self.modulus.coeff(0);
                let delta = b.clone() * b.clone() - rat(4) * c;
                let (u, v) = (self.rep.coeff(0), self.rep.coeff(1));
                let a = u - v.clone() * b.clone() / rat(2);
                let bb = v / rat(2);
                Ok(quadratic_sqrt(&a, &bb, &delta).map(|(x, y)| {
                    // x + y√δ with √δ = 2θ + b.
                    let rep = Poly::from_coeffs(vec![x + y.clone() * b, rat(2) * y]);
                    Self::new(rep, self.modulus.clone())
                }))
            }
            _ => Err(FuncFieldError::Undetermined),
        }
    }

    pub fn fmt_var(&self, var: &str) -> String {
        self.rep.fmt_var(var)
    }
}

impl fmt::Display for ResidueElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.rep.fmt_var("θ"))
    }
}

impl Add for &ResidueElt {
    type Output = ResidueElt;
    fn add(self, o: &ResidueElt) -> ResidueElt {
        debug_assert_eq!(self.modulus, o.modulus);
        ResidueElt { rep: &self.rep + &o.rep, modulus: self.modulus.clone() }
    }
}

impl Sub for &ResidueElt {
    type Output = ResidueElt;
    fn sub(self, o: &ResidueElt) -> ResidueElt {
        debug_assert_eq!(self.modulus, o.modulus);
        ResidueElt { rep: &self.rep - &o.rep, modulus: self.modulus.clone() }
    }
}

impl Mul for &ResidueElt {
    type Output = ResidueElt;
    fn mul(self, o: &ResidueElt) -> ResidueElt {
        debug_assert_eq!(self.modulus, o.modulus);
        ResidueElt::new(&self.rep * &o.rep, self.modulus.clone())
    }
}

impl Neg for &ResidueElt {
    type Output = ResidueElt;
    fn neg(self) -> ResidueElt {
        ResidueElt { rep: -&self.rep, modulus: self.modulus.clone() }
    }
}

/// Image of `f` in the residue field κ(v).
pub fn reduce_at(f: &RatFunc<Rational>, v: &Place) -> Result<ResidueElt, FuncFieldError> {
    match v {
        Place::Infinity => {
            let g = f.invert_variable();
            LocalRing::new(Place::at(Rational::zero()), None)?.reduce(&g)
        }
        Place::Finite(_) => LocalRing::new(v.clone(), None)?.reduce(f),
    }
}

/// Square test for the class of a residue element.
pub fn is_square_in_residue(e: &ResidueElt) -> Result<SquareTest, FuncFieldError> {
    e.is_square()
}

/// Local data at a finite place for functions with coefficients in ℚ or ℚ(√D).
///
/// With a radicand the place must have degree 1, so that κ = ℚ(√D).
#[derive(Clone, Debug)]
pub struct LocalRing {
    place: Poly<Rational>,
    radicand: Option<BigInt>,
    modulus: Poly<Rational>,
}

impl LocalRing {
    pub fn new(place: Place, radicand: Option<BigInt>) -> Result<Self, FuncFieldError> {
        let Place::Finite(p) = place else {
            return Err(FuncFieldError::InfinityNeedsChart);
        };
        let modulus = match &radicand {
            None => p.clone(),
            Some(d) => {
                if p.degree() != Some(1) {
                    return Err(FuncFieldError::UnsupportedPlace(p.to_string()));
                }
                Poly::from_coeffs(vec![-Rational::from_integer(d.clone()), Rational::zero(), rat(1)])
            }
        };
        Ok(LocalRing { place: p, radicand, modulus })
    }

    pub fn place_poly(&self) -> &Poly<Rational> {
        &self.place
    }

    pub fn residue_degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn uniformizer<F: Field>(&self) -> RatFunc<F> {
        RatFunc::from_poly(Poly::lift(&self.place))
    }

    pub fn valuation<F: Field>(&self, f: &RatFunc<F>) -> Option<i64> {
        if f.is_zero() {
            return None;
        }
        let p = Poly::<F>::lift(&self.place);
        Some(poly_valuation(f.num(), &p)? - poly_valuation(f.den(), &p)?)
    }

    pub fn embed(&self, q: Rational) -> ResidueElt {
        ResidueElt::new(Poly::constant(q), self.modulus.clone())
    }

    /// Lift of a residue element to a polynomial in t, when κ = ℚ[t]/(p).
    pub fn lift_residue(&self, e: &ResidueElt) -> Option<Poly<Rational>> {
        self.radicand.is_none().then(|| e.rep.clone())
    }

    fn rational_reduce(&self, num: &Poly<Rational>, den: &Poly<Rational>) -> ResidueElt {
        let n = ResidueElt::new(num.clone(), self.place.clone());
        let d = ResidueElt::new(den.clone(), self.place.clone());
        let v = &n * &d.inv().expect("denominator is a unit");
        ResidueElt { rep: v.rep, modulus: self.modulus.clone() }
    }

    pub fn reduce<F: Field>(&self, f: &RatFunc<F>) -> Result<ResidueElt, FuncFieldError> {
        match self.valuation(f) {
            None => return Ok(self.embed(Rational::zero())),
            Some(k) if k < 0 => return Err(FuncFieldError::NegativeValuation),
            Some(k) if k > 0 => return Ok(self.embed(Rational::zero())),
            _ => {}
        }
        if let Some(q) = f.to_rational() {
            if self.radicand.is_none() {
                return Ok(self.rational_reduce(q.num(), q.den()));
            }
        }
        let Some(d) = &self.radicand else {
            return Err(FuncFieldError::FieldMismatch);
        };
        if f.num().coeffs().iter().chain(f.den().coeffs()).any(|c| c.radicand().is_some_and(|e| &e != d)) {
            return Err(FuncFieldError::FieldMismatch);
        }
        // Degree-one place t - c: evaluate, then read a + b√D as a + bθ.
        let c = F::from_rational(-self.place.coeff(0));
        let val = f.num().eval(&c) * f.den().eval(&c).inv().expect("unit denominator");
        let parts = val.rational_parts();
        let rep = Poly::from_coeffs(vec![parts[0].clone(), parts.get(1).cloned().unwrap_or_default()]);
        Ok(ResidueElt::new(rep, self.modulus.clone()))
    }
}
