use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::funcfield::{
    factorize, poly_valuation, split_square, squarefree_decomposition, Field, Place, Poly, RatFunc, Rational,
};

use super::model::{AdmissibleTransform, Chart, WeierstrassModel, WEIGHTS};
use super::WeierstrassError;

fn deg_at_most(p: &Poly<Rational>, bound: i64) -> bool {
    p.degree().is_none_or(|d| d as i64 <= bound)
}

fn at_least(v: Option<i64>, k: i64) -> bool {
    v.is_none_or(|v| v >= k)
}

/// `(x, y) ↦ (s^{2n} x(1/s), s^{3n} y(1/s))`: a point in the chart around infinity.
pub fn chart_point_at_infinity<F: Field>(x: &RatFunc<F>, y: &RatFunc<F>, weight: u32) -> (RatFunc<F>, RatFunc<F>) {
    let s = RatFunc::<F>::t();
    (
        &x.invert_variable() * &s.pow(2 * weight as i64),
        &y.invert_variable() * &s.pow(3 * weight as i64),
    )
}

impl WeierstrassModel {
    fn c4_c6_polys(&self) -> (Poly<Rational>, Poly<Rational>) {
        let c4 = self.c4().as_poly().cloned().expect("integral model");
        let c6 = self.c6().as_poly().cloned().expect("integral model");
        (c4, c6)
    }

    /// Integral model over ℚ[t] isomorphic to `self`, with the transform used.
    pub fn integralize(&self) -> (Self, AdmissibleTransform) {
        if self.is_integral() {
            return (self.clone(), AdmissibleTransform::identity());
        }
        let mut need: BTreeMap<Place, u32> = BTreeMap::new();
        for (c, w) in self.coeffs().iter().zip(WEIGHTS) {
            if c.is_zero() || c.is_poly() {
                continue;
            }
            let fac = factorize(c.den()).expect("non-zero denominator");
            for (q, e) in fac.factors {
                let k = e.div_ceil(w);
                let slot = need.entry(Place::Finite(q)).or_insert(0);
                *slot = (*slot).max(k);
            }
        }
        let d = need.into_iter().fold(Poly::one(), |acc, (pl, k)| match pl {
            Place::Finite(q) => &acc * &q.pow(k),
            Place::Infinity => acc,
        });
        let tr = AdmissibleTransform::scaling(RatFunc::from_poly(d).inv().unwrap());
        (self.apply_transform(&tr), tr)
    }

    /// Minimal model at a place and the number of `u = π` reductions used.
    pub fn minimalize_at(&self, v: &Place) -> Result<(Self, u32), WeierstrassError> {
        let (m, _, n) = self.minimalize_at_tracked(v)?;
        Ok((m, n))
    }

    pub(crate) fn minimalize_at_tracked(&self, v: &Place) -> Result<(Self, AdmissibleTransform, u32), WeierstrassError> {
        let (mut m, mut tr) = self.integralize();
        let mut count = 0;
        match v {
            Place::Finite(p) => loop {
                let (c4, c6) = m.c4_c6_polys();
                if !(at_least(poly_valuation(&c4, p), 4) && at_least(poly_valuation(&c6, p), 6)) {
                    break;
                }
                let coeffs = m.poly_coeffs().unwrap();
                let plain = coeffs
                    .iter()
                    .zip(WEIGHTS)
                    .all(|(a, w)| at_least(poly_valuation(a, p), w as i64));
                if !plain {
                    let st = m.short_transform();
                    m = m.apply_transform(&st);
                    tr = tr.then(&st);
                }
                let sc = AdmissibleTransform::scaling(RatFunc::from_poly(p.clone()));
                m = m.apply_transform(&sc);
                tr = tr.then(&sc);
                count += 1;
            },
            Place::Infinity => loop {
                let n = m.weight().unwrap() as i64;
                let (c4, c6) = m.c4_c6_polys();
                if n == 0 || !(deg_at_most(&c4, 4 * (n - 1)) && deg_at_most(&c6, 6 * (n - 1))) {
                    break;
                }
                if !m.is_short() {
                    let st = m.short_transform();
                    m = m.apply_transform(&st);
                    tr = tr.then(&st);
                }
                count += 1;
            },
        }
        Ok((m, tr, count))
    }

    /// Globally minimal integral model; errors if every fibre is smooth.
    pub fn globally_minimal(&self) -> Result<Self, WeierstrassError> {
        Ok(self.minimal_with_transform()?.0)
    }

    /// Globally minimal model together with the transform from `self`.
    pub fn minimal_with_transform(&self) -> Result<(Self, AdmissibleTransform), WeierstrassError> {
        let (mut m, mut tr) = self.integralize();
        let (c4, c6) = m.c4_c6_polys();
        let g = if c4.is_zero() {
            c6
        } else if c6.is_zero() {
            c4
        } else {
            c4.gcd(&c6)
        };
        if !g.is_constant() {
            for (q, e) in factorize(&g)?.factors {
                if e < 4 {
                    continue;
                }
                let (next, step, _) = m.minimalize_at_tracked(&Place::Finite(q))?;
                m = next;
                tr = tr.then(&step);
            }
        }
        let (next, step, _) = m.minimalize_at_tracked(&Place::Infinity)?;
        if next.weight() == Some(0) {
            return Err(WeierstrassError::NoSingularFibre);
        }
        Ok((next, tr.then(&step)))
    }

    /// The same surface written in `s = 1/t`; requires an integral model.
    pub fn chart_at_infinity(&self) -> Result<Self, WeierstrassError> {
        let polys = self.poly_coeffs().ok_or(WeierstrassError::NotIntegral)?;
        let n = self.weight().unwrap() as usize;
        let a = polys
            .iter()
            .zip(WEIGHTS)
            .map(|(p, w)| RatFunc::from_poly(p.reversed(n * w as usize)))
            .collect::<Vec<_>>();
        Ok(WeierstrassModel::from_ratfuncs(a.try_into().unwrap())?.with_chart(match self.chart() {
            Chart::AffineT => Chart::AffineS,
            Chart::AffineS => Chart::AffineT,
        }))
    }

    /// Twist by `y² = d(t)·(…)`: `a2 ↦ d a2, a4 ↦ d² a4, a6 ↦ d³ a6` on the
    /// extended form, then minimised. `d` must be squarefree.
    pub fn quadratic_twist(&self, d: &Poly<Rational>) -> Result<Self, WeierstrassError> {
        if d.is_zero() {
            return Err(WeierstrassError::ZeroTwist);
        }
        if !d.is_constant() && !d.gcd(&d.derivative()).is_constant() {
            return Err(WeierstrassError::NonSquarefreeTwist(d.to_string()));
        }
        let e = self.to_extended();
        let dd = RatFunc::from_poly(d.clone());
        let a = [
            RatFunc::zero(),
            &dd * e.a2(),
            RatFunc::zero(),
            &(&dd * &dd) * e.a4(),
            &(&(&dd * &dd) * &dd) * e.a6(),
        ];
        WeierstrassModel::from_ratfuncs(a)?.globally_minimal()
    }

    /// Twist by the squarefree part of `d`; the second value describes any
    /// square factor that was removed.
    pub fn quadratic_twist_reduced(&self, d: &Poly<Rational>) -> Result<(Self, Option<String>), WeierstrassError> {
        if d.is_zero() {
            return Err(WeierstrassError::ZeroTwist);
        }
        let (free, square) = squarefree_part(d);
        let note = (square != Poly::one()).then(|| {
            format!("twist parameter {d} has square factor ({square})^2; twisted by {free} instead")
        });
        Ok((self.quadratic_twist(&free)?, note))
    }

    /// Pull back along `t ↦ φ(t)` and minimise.
    pub fn base_change(&self, phi: &RatFunc<Rational>) -> Result<Self, WeierstrassError> {
        Ok(self.base_change_with_transform(phi)?.0)
    }

    /// Minimal pulled-back model and the transform from the naive pull-back.
    pub fn base_change_with_transform(
        &self,
        phi: &RatFunc<Rational>,
    ) -> Result<(Self, AdmissibleTransform), WeierstrassError> {
        if phi.is_constant() {
            return Err(WeierstrassError::ConstantMap);
        }
        let a = self.coeffs().clone().map(|c| c.compose(phi));
        WeierstrassModel::from_ratfuncs(a)?.minimal_with_transform()
    }
}

/// `d = free · square²` with `free` squarefree, its constant a squarefree integer.
pub(crate) fn squarefree_part(d: &Poly<Rational>) -> (Poly<Rational>, Poly<Rational>) {
    let lc = d.leading().cloned().unwrap();
    let mut free = Poly::one();
    let mut square = Poly::one();
    for (part, k) in squarefree_decomposition(&d.monic()) {
        if k % 2 == 1 {
            free = &free * &part;
        }
        square = &square * &part.pow(k / 2);
    }
    // lc = (a/b) = (a b) / b²; split the integer a b.
    let ab: BigInt = lc.numer() * lc.denom();
    let (s, f) = split_square(&ab);
    let const_square = Rational::new(s, lc.denom().abs());
    (free.scale(&Rational::from_integer(f)), square.scale(&const_square))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::{parse_poly, parse_ratfunc, rat};

    fn m(a: [&str; 5]) -> WeierstrassModel {
        let [a1, a2, a3, a4, a6] = a.map(|s| parse_poly(s).unwrap());
        WeierstrassModel::new(a1, a2, a3, a4, a6).unwrap()
    }

    #[test]
    fn local_minimalisation_keeps_generalised_form() {
        let model = m(["t^2", "0", "0", "-36*t^6", "-t^10"]);
        let (min, count) = model.minimalize_at(&Place::at(rat(0))).unwrap();
        assert_eq!(count, 1);
        assert_eq!(min, m(["t", "0", "0", "-36*t^2", "-t^4"]));
    }

    #[test]
    fn short_form_scaling() {
        let model = m(["0", "0", "0", "t^5", "t^7"]);
        let (min, count) = model.minimalize_at(&Place::at(rat(0))).unwrap();
        assert_eq!(count, 1);
        assert_eq!(min, m(["0", "0", "0", "t", "t"]));
    }

    #[test]
    fn global_minimality_and_infinity() {
        let model = m(["0", "0", "0", "t^5*(t-1)^4", "0"]);
        let min = model.globally_minimal().unwrap();
        assert_eq!(min, m(["0", "0", "0", "t", "0"]));
        assert_eq!(m(["0", "0", "0", "t^4*(t-1)^4", "0"]).globally_minimal(), Err(WeierstrassError::NoSingularFibre));
        // A constant curve has no singular fibres at all.
        assert_eq!(m(["0", "0", "0", "0", "1"]).globally_minimal(), Err(WeierstrassError::NoSingularFibre));
        // Degrees too high for the weight: minimal at infinity drops the weight.
        let tall = m(["0", "0", "0", "t", "0"]);
        assert_eq!(tall.globally_minimal().unwrap().weight(), Some(1));
    }

    #[test]
    fn non_integral_models_are_cleared() {
        let a4 = parse_ratfunc("-36/(t-1728)").unwrap();
        let a6 = parse_ratfunc("-1/(t-1728)").unwrap();
        let model = WeierstrassModel::from_ratfuncs([RatFunc::one(), RatFunc::zero(), RatFunc::zero(), a4, a6]).unwrap();
        let min = model.globally_minimal().unwrap();
        assert!(min.is_integral());
        assert_eq!(min.j_invariant(), RatFunc::t());
        assert_eq!(min.discriminant_poly().unwrap().degree(), Some(11));
    }

    #[test]
    fn chart_at_infinity_of_normal_form() {
        let model = m(["t-1728", "0", "0", "-36*(t-1728)^3", "-(t-1728)^5"]);
        assert_eq!(model.weight(), Some(1));
        let chart = model.chart_at_infinity().unwrap();
        let s_disc = chart.discriminant_poly().unwrap();
        assert_eq!(s_disc, parse_poly("t*(1-1728*t)^9").unwrap());
        assert_eq!(chart.chart(), Chart::AffineS);
    }

    #[test]
    fn twists() {
        let model = m(["0", "0", "0", "t", "0"]);
        assert_eq!(model.quadratic_twist(&parse_poly("1").unwrap()).unwrap(), model.globally_minimal().unwrap());
        assert!(matches!(
            model.quadratic_twist(&parse_poly("t^2").unwrap()),
            Err(WeierstrassError::NonSquarefreeTwist(_))
        ));
        let (tw, note) = model.quadratic_twist_reduced(&parse_poly("4*t^2*(t-1)").unwrap()).unwrap();
        assert!(note.is_some());
        assert_eq!(tw, model.quadratic_twist(&parse_poly("t-1").unwrap()).unwrap());
        let (f, s) = squarefree_part(&parse_poly("-12*t^3").unwrap());
        assert_eq!((f, s), (parse_poly("-3*t").unwrap(), parse_poly("2*t").unwrap()));
    }

    #[test]
    fn base_change_degree_two() {
        let model = m(["0", "0", "0", "t", "0"]);
        let bc = model.base_change(&parse_ratfunc("t^2").unwrap()).unwrap();
        assert_eq!(bc.discriminant_poly().unwrap(), parse_poly("-64*t^6").unwrap());
        assert_eq!(model.base_change(&parse_ratfunc("3").unwrap()), Err(WeierstrassError::ConstantMap));
    }

    #[test]
    fn chart_point_maps_onto_chart_model() {
        let model = m(["0", "0", "0", "t", "0"]);
        let chart = model.chart_at_infinity().unwrap();
        let (x, y) = (RatFunc::<Rational>::zero(), RatFunc::<Rational>::zero());
        let (xs, ys) = chart_point_at_infinity(&x, &y, 1);
        assert!(chart.equation_at(&xs, &ys).is_zero());
    }
}
