//! Valuations, factorisation and residue fields on random inputs.

use ellsurf_core::funcfield::{factorize, parse_poly, valuation, Place, Poly, RatFunc, Rational, ResidueElt};
use proptest::prelude::*;

fn poly(coeffs: &[i64]) -> Poly<Rational> {
    Poly::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly<Rational>> {
    prop::collection::vec(-6i64..=6, 1..=max_deg + 1)
        .prop_map(|c| poly(&c))
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn nonzero_ratfunc() -> impl Strategy<Value = RatFunc<Rational>> {
    (nonzero_poly(4), nonzero_poly(3)).prop_map(|(n, d)| RatFunc::new(n, d))
}

/// Every place where `f` has a zero or a pole, including infinity.
fn support(f: &RatFunc<Rational>) -> Vec<Place> {
    let mut places = vec![Place::Infinity];
    for p in [f.num(), f.den()] {
        if p.is_constant() {
            continue;
        }
        for (q, _) in factorize(p).unwrap().factors {
            places.push(Place::finite(q).unwrap());
        }
    }
    places
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, ..ProptestConfig::default() })]

    #[test]
    fn valuation_is_additive(f in nonzero_ratfunc(), g in nonzero_ratfunc()) {
        let fg = &f * &g;
        for v in support(&fg).into_iter().chain(support(&f)).chain(support(&g)) {
            let (a, b, c) = (valuation(&f, &v).unwrap(), valuation(&g, &v).unwrap(), valuation(&fg, &v).unwrap());
            prop_assert_eq!(a + b, c, "{}", v);
        }
    }

    #[test]
    fn principal_divisors_have_degree_zero(f in nonzero_ratfunc()) {
        let total: i64 = support(&f).iter().map(|v| valuation(&f, v).unwrap() * v.degree() as i64).sum();
        prop_assert_eq!(total, 0);
    }

    #[test]
    fn factorisation_round_trips(a in nonzero_poly(3), b in nonzero_poly(3), e in 1u32..=3) {
        let f = &a * &b.pow(e);
        let fac = factorize(&f).unwrap();
        prop_assert_eq!(fac.expand(), f);
        for (q, _) in &fac.factors {
            prop_assert!(q.is_monic());
            prop_assert!(Place::finite(q.clone()).is_ok(), "{} is not irreducible", q);
        }
    }

    #[test]
    fn residue_fields_are_fields(
        which in 0usize..5,
        a in prop::collection::vec(-5i64..=5, 1..5),
        b in prop::collection::vec(-5i64..=5, 1..5),
        c in prop::collection::vec(-5i64..=5, 1..5),
    ) {
        let modulus = parse_poly(["t - 3", "t^2 - 2", "t^2 + 1", "t^3 - 2", "t^4 + 1"][which]).unwrap();
        let elt = |v: &[i64]| ResidueElt::new(poly(v), modulus.clone());
        let (a, b, c) = (elt(&a), elt(&b), elt(&c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        let one = a.from_rational_like(Rational::from_integer(1.into()));
        match a.inv() {
            Some(inv) => prop_assert_eq!(&a * &inv, one),
            None => prop_assert!(a.is_zero()),
        }
    }
}

#[test]
fn degree_formula_on_a_fixed_function() {
    // (t² − 2)³ / (t (t + 1)²): zeros of total degree 6, poles of degree 3 plus 3 at infinity.
    let f = RatFunc::new(parse_poly("(t^2-2)^3").unwrap(), parse_poly("t*(t+1)^2").unwrap());
    assert_eq!(valuation(&f, &Place::Infinity), Some(-3));
    assert_eq!(valuation(&f, &Place::finite(parse_poly("t^2-2").unwrap()).unwrap()), Some(3));
    assert_eq!(valuation(&f, &Place::at(Rational::from_integer((-1).into()))), Some(-2));
}
