//! Whole-surface fixtures and fuzzed invariants of Weierstrass models.

mod common;

use common::{model, short, transform, types};
use ellsurf_core::funcfield::{parse_poly, parse_ratfunc, valuation, Place, Rational};
use ellsurf_core::kodaira::{analyze, KodairaError, KodairaType, SurfaceClass};
use ellsurf_core::weierstrass::{AdmissibleTransform, WeierstrassError};
use proptest::prelude::*;
use KodairaType::*;

#[test]
fn inose_fibration_and_its_cyclic_base_changes() {
    // A = 2, B = 3: y² = x³ − 6t⁴x + t⁵(t² − 6t + 1).
    let inose = short("-6*t^4", "t^5*(t^2-6*t+1)");
    let s = analyze(&inose).unwrap();
    assert_eq!(s.classification, SurfaceClass::K3);
    assert_eq!(s.geometric_types(), types(&[(IIStar, 2), (In(1), 4)]));

    let expected = [
        (2, types(&[(IVStar, 2), (In(1), 8)])),
        (3, types(&[(I0Star, 2), (In(1), 12)])),
        (4, types(&[(IV, 2), (In(1), 16)])),
        (5, types(&[(II, 2), (In(1), 20)])),
        (6, types(&[(In(1), 24)])),
    ];
    for (d, want) in expected {
        let phi = parse_ratfunc(&format!("t^{d}")).unwrap();
        let s = analyze(&inose.base_change(&phi).unwrap()).unwrap();
        assert_eq!(s.chi, 2, "degree {d}");
        assert_eq!(s.geometric_types(), want, "degree {d}");
    }
}

#[test]
fn kummer_fibration_of_a_product() {
    // g(t) y² = f(x) with f = x³ − x, g = t³ − t becomes y² = x³ − g²x.
    let kummer = short("-(t^3-t)^2", "0");
    let s = analyze(&kummer).unwrap();
    assert_eq!(s.geometric_types(), types(&[(I0Star, 4)]));
    assert_eq!(s.trivial_rank, 18);
    assert_eq!(s.classification, SurfaceClass::K3);
    assert!(s.isotrivial);
    for place in ["t", "t - 1", "t + 1"] {
        let v = Place::finite(parse_poly(place).unwrap()).unwrap();
        assert_eq!(s.fibre_at(&v).unwrap().kodaira, I0Star);
    }
    assert_eq!(s.fibre_at(&Place::Infinity).unwrap().kodaira, I0Star);
}

#[test]
fn discriminant_scales_by_the_twelfth_power() {
    let m = short("-36*(t-1728)^3", "-(t-1728)^5");
    let u = parse_ratfunc("(t+2)/3").unwrap();
    let scaled = m.apply_transform(&AdmissibleTransform::scaling(u.clone()));
    assert_eq!(&scaled.discriminant() * &u.pow(12), m.discriminant());
    assert_eq!(scaled.j_invariant(), m.j_invariant());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn j_invariant_survives_admissible_transforms(m in model(1), tr in transform()) {
        let moved = m.apply_transform(&tr);
        prop_assert_eq!(moved.j_invariant(), m.j_invariant());
        prop_assert_eq!(&moved.discriminant() * &tr.u.pow(12), m.discriminant());
        prop_assert_eq!(moved.apply_transform(&tr.inverse()), m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, max_global_rejects: 20_000, ..ProptestConfig::default() })]

    #[test]
    fn euler_numbers_sum_to_twelve_chi(m in (1usize..=2).prop_flat_map(model)) {
        let s = match analyze(&m) {
            Ok(s) => s,
            Err(KodairaError::Weierstrass(WeierstrassError::NoSingularFibre)) => {
                prop_assume!(false);
                unreachable!()
            }
            Err(e) => return Err(TestCaseError::fail(format!("{m}: {e}"))),
        };
        let total: u32 = s.geometric_types().iter().map(KodairaType::euler).sum();
        prop_assert_eq!(total, 12 * s.chi, "{}", m);
        // The fibre Euler number is v(Δ) on the minimal model, read off independently.
        let disc = s.model.discriminant();
        for f in &s.fibres {
            let v = match &f.place {
                Place::Infinity => valuation(&s.model.chart_at_infinity().unwrap().discriminant(), &Place::at(Rational::from_integer(0.into()))),
                finite => valuation(&disc, finite),
            };
            prop_assert_eq!(v, Some(f.euler as i64), "{} at {}", m, f.place);
        }
        prop_assert!(s.trivial_rank <= 10 * s.chi, "{}", m);
        prop_assert!(s.trivial_rank <= s.b2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, max_global_rejects: 20_000, ..ProptestConfig::default() })]

    #[test]
    fn fibre_types_survive_admissible_transforms(m in model(1), tr in transform()) {
        let before = match analyze(&m) {
            Ok(s) => s,
            Err(KodairaError::Weierstrass(WeierstrassError::NoSingularFibre)) => {
                prop_assume!(false);
                unreachable!()
            }
            Err(e) => return Err(TestCaseError::fail(format!("{m}: {e}"))),
        };
        let after = analyze(&m.apply_transform(&tr)).map_err(|e| TestCaseError::fail(format!("{m}: {e}")))?;
        let places = |s: &ellsurf_core::kodaira::SurfaceAnalysis| {
            s.fibres.iter().map(|f| (f.place.clone(), f.kodaira)).collect::<Vec<_>>()
        };
        prop_assert_eq!(places(&before), places(&after), "{}", m);
        prop_assert_eq!(before.chi, after.chi);
    }
}
