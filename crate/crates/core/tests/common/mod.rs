//! Fixture surfaces and generators shared by the integration tests.
#![allow(dead_code)]

use ellsurf_core::funcfield::{parse_poly, parse_quadratic, Poly, RatFunc, Rational};
use ellsurf_core::kodaira::KodairaType;
use ellsurf_core::mordell_weil::{EllipticSurface, Section};
use ellsurf_core::weierstrass::{AdmissibleTransform, WeierstrassModel};
use proptest::prelude::*;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn general(a: [&str; 5]) -> WeierstrassModel {
    let [a1, a2, a3, a4, a6] = a.map(|s| parse_poly(s).unwrap());
    WeierstrassModel::new(a1, a2, a3, a4, a6).unwrap()
}

pub fn short(a4: &str, a6: &str) -> WeierstrassModel {
    WeierstrassModel::short(parse_poly(a4).unwrap(), parse_poly(a6).unwrap()).unwrap()
}

pub fn section(x: &str, y: &str) -> Section {
    Section::new(parse_quadratic(x).unwrap(), parse_quadratic(y).unwrap())
}

/// Sorted list of fibre types with `n` copies of each `(type, n)`.
pub fn types(counts: &[(KodairaType, usize)]) -> Vec<KodairaType> {
    let mut out: Vec<KodairaType> = counts.iter().flat_map(|&(k, n)| std::iter::repeat_n(k, n)).collect();
    out.sort();
    out
}

/// The rational surface with a II fibre at 0 and III* at 1728, plus its section over ℚ(√2).
pub fn normal_form_model() -> WeierstrassModel {
    general(["t-1728", "0", "0", "-36*(t-1728)^3", "-(t-1728)^5"])
}

pub fn normal_form() -> (EllipticSurface, Section) {
    let surface = EllipticSurface::new(&normal_form_model()).unwrap();
    (surface, section("-(t-1728)^2/36", "(3+2*sqrt(2))*(t-1728)^3/216"))
}

/// `y² = x(x − 1)(x − t)` with its three 2-torsion sections.
pub fn legendre() -> (EllipticSurface, Vec<Section>) {
    let surface = EllipticSurface::new(&general(["0", "-(t+1)", "0", "t", "0"])).unwrap();
    (surface, vec![section("0", "0"), section("1", "0"), section("t", "0")])
}

/// `y² = x³ + a4 x + a6` through `(0, y₀)` and `(1, y₁)` with `y₀ = t³ − t + 2`, `y₁ = t³ + 3`.
pub fn two_section_surface() -> (EllipticSurface, Vec<Section>) {
    let (y0, y1) = ("t^3 - t + 2", "t^3 + 3");
    let model = short(&format!("({y1})^2 - ({y0})^2 - 1"), &format!("({y0})^2"));
    let surface = EllipticSurface::new(&model).unwrap();
    (surface, vec![section("0", y0), section("1", y1)])
}

pub fn poly(coeffs: &[i64]) -> Poly<Rational> {
    Poly::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
}

pub fn small_poly(max_deg: usize) -> impl Strategy<Value = Poly<Rational>> {
    prop::collection::vec(-4i64..=4, 0..=max_deg + 1).prop_map(|c| poly(&c))
}

/// Models with coefficient degrees bounded by weight `chi`; singular generic fibres are skipped.
pub fn model(chi: usize) -> impl Strategy<Value = WeierstrassModel> {
    (small_poly(chi), small_poly(2 * chi), small_poly(3 * chi), small_poly(4 * chi), small_poly(6 * chi))
        .prop_filter_map("singular generic fibre", |(a1, a2, a3, a4, a6)| WeierstrassModel::new(a1, a2, a3, a4, a6).ok())
}

pub fn ratfunc(num_deg: usize, den_deg: usize) -> impl Strategy<Value = RatFunc<Rational>> {
    (small_poly(num_deg), small_poly(den_deg)).prop_filter_map("zero denominator", |(n, d)| {
        (!d.is_zero()).then(|| RatFunc::new(n, d))
    })
}

pub fn transform() -> impl Strategy<Value = AdmissibleTransform> {
    transform_with_denominators(1)
}

/// Transforms whose coefficients have denominators of degree at most `den_deg`.
pub fn transform_with_denominators(den_deg: usize) -> impl Strategy<Value = AdmissibleTransform> {
    let f = |n| ratfunc(n, den_deg);
    (f(1), f(2), f(1), f(2)).prop_filter_map("zero scaling", |(u, r, s, w)| {
        (!u.is_zero()).then_some(AdmissibleTransform { u, r, s, w })
    })
}
