use std::cmp::Ordering;
use std::fmt;

use super::factor::factorize;
use super::field::{Field, Rational};
use super::poly::Poly;
use super::ratfunc::RatFunc;
use super::FuncFieldError;

/// A closed point of the projective line over ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    /// Zero locus of a monic irreducible polynomial.
    Finite(Poly<Rational>),
    Infinity,
}

impl Place {
    /// Checks that `p` is monic and irreducible over ℚ.
    pub fn finite(p: Poly<Rational>) -> Result<Self, FuncFieldError> {
        if !p.is_monic() || p.is_constant() {
            return Err(FuncFieldError::NotAPlace(p.to_string()));
        }
        let f = factorize(&p)?;
        if f.factors.len() != 1 || f.factors[0].1 != 1 {
            return Err(FuncFieldError::NotAPlace(p.to_string()));
        }
        Ok(Place::Finite(p))
    }

    /// `t - a`.
    pub fn at(a: Rational) -> Self {
        Place::Finite(Poly::linear_root(a))
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(p) => p.degree().unwrap_or(0),
            Place::Infinity => 1,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }
}

impl Ord for Place {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Place::Finite(a), Place::Finite(b)) => a.canonical_cmp(b),
            (Place::Finite(_), Place::Infinity) => Ordering::Less,
            (Place::Infinity, Place::Finite(_)) => Ordering::Greater,
            (Place::Infinity, Place::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Place {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinity => f.write_str("inf"),
        }
    }
}

/// Order of vanishing of a polynomial at a finite place (`None` for zero).
pub fn poly_valuation<F: Field>(f: &Poly<F>, p: &Poly<F>) -> Option<i64> {
    if f.is_zero() {
        return None;
    }
    if p.degree() == Some(1) && p.coeff(0).is_zero() {
        return f.low_order().map(|k| k as i64);
    }
    Some(f.split_off(p).0 as i64)
}

/// Normalised valuation; `None` stands for +∞ (the zero function).
///
/// The place polynomial is lifted into the coefficient field and must stay
/// irreducible there.
pub fn valuation<F: Field>(f: &RatFunc<F>, v: &Place) -> Option<i64> {
    if f.is_zero() {
        return None;
    }
    match v {
        Place::Infinity => f.order_at_infinity(),
        Place::Finite(p) => {
            let p = Poly::<F>::lift(p);
            Some(poly_valuation(f.num(), &p)? - poly_valuation(f.den(), &p)?)
        }
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
    fn valuations() {
        let t = Place::at(rat(0));
        assert_eq!(valuation(&RatFunc::from_poly(p(&[0, 0, 1])), &t), Some(2));
        assert_eq!(valuation(&RatFunc::new(p(&[1]), p(&[0, 1])), &Place::Infinity), Some(1));
        let disc = &p(&[0, 0, 1]) * &p(&[-1728, 1]).pow(9);
        assert_eq!(valuation(&RatFunc::from_poly(disc), &Place::at(rat(1728))), Some(9));
        assert_eq!(valuation(&RatFunc::<Rational>::zero(), &t), None);
    }

    #[test]
    fn place_validation() {
        assert!(Place::finite(p(&[1, 0, 1])).is_ok());
        assert!(Place::finite(p(&[-1, 0, 1])).is_err());
        assert!(Place::finite(p(&[2, 2])).is_err());
    }
}
