//! Height pairing on fixture surfaces with several sections.

mod common;

use common::{int, legendre, normal_form, two_section_surface};
use ellsurf_core::funcfield::{parse_ratfunc, RatFunc, Rational};
use ellsurf_core::mordell_weil::{EllipticSurface, Section};
use num_traits::Zero;

fn check_quadratic_growth(surface: &EllipticSurface, p: &Section) {
    let law = surface.law();
    let h = surface.height(p).unwrap().height;
    for n in 1..=5i64 {
        let np = law.mul(p, n).unwrap();
        assert_eq!(surface.height(&np).unwrap().height, h.clone() * int(n * n), "n = {n}");
        assert_eq!(surface.height(&law.neg(&np)).unwrap().height, h.clone() * int(n * n));
    }
}

#[test]
fn heights_grow_quadratically() {
    let (surface, p) = normal_form();
    check_quadratic_growth(&surface, &p);

    let (surface, sections) = two_section_surface();
    let law = surface.law();
    for p in &sections {
        assert!(law.contains(p));
        check_quadratic_growth(&surface, p);
    }
    check_quadratic_growth(&surface, &law.add(&sections[0], &sections[1]).unwrap());
}

#[test]
fn pairing_is_symmetric_and_bilinear() {
    let (surface, s) = two_section_surface();
    let law = surface.law();
    let (p, q) = (&s[0], &s[1]);
    let sum = law.add(p, q).unwrap();
    let diff = law.sub(p, q).unwrap();
    let two_q = law.mul(q, 2).unwrap();
    let pair = |a: &Section, b: &Section| surface.pairing_by_polarization(a, b).unwrap();
    let h = |a: &Section| surface.height(a).unwrap().height;

    assert_eq!(surface.pairing(p, q).unwrap(), surface.pairing(q, p).unwrap());
    assert_eq!(surface.pairing(p, q).unwrap(), pair(p, q));
    for r in [p, q, &diff, &two_q] {
        assert_eq!(pair(&sum, r), pair(p, r) + pair(q, r));
    }
    assert_eq!(pair(p, &two_q), pair(p, q) * int(2));
    // Parallelogram law.
    assert_eq!(h(&sum) + h(&diff), (h(p) + h(q)) * int(2));

    let gram = surface.gram_matrix(&s).unwrap();
    assert_eq!(gram[0][1], gram[1][0]);
    assert_eq!(gram[0][0], h(p));
}

#[test]
fn two_section_surface_heights() {
    let (surface, s) = two_section_surface();
    for p in &s {
        let report = surface.height(p).unwrap();
        assert!(report.height > Rational::zero());
        assert!(surface.is_integral(p).unwrap());
    }
    // Only I₁ fibres, no contact with O: h = 2χ = 2. In the chart at infinity the two
    // sections become (0, 1 − s² + 2s³) and (s², 1 + 3s³), meeting to order 2, so ⟨P, Q⟩ = χ − 2.
    let gram = surface.gram_matrix(&s).unwrap();
    assert_eq!(gram, vec![vec![int(2), int(-1)], vec![int(-1), int(2)]]);
}

#[test]
fn base_change_multiplies_heights_by_the_degree() {
    let (surface, sections) = two_section_surface();
    for (d, phi) in [(2, "t^2"), (3, "t^3 + 1")] {
        let phi: RatFunc<Rational> = parse_ratfunc(phi).unwrap();
        let pulled = surface.base_change(&phi).unwrap();
        for p in &sections {
            let before = surface.height(p).unwrap().height;
            let after = pulled.height(&surface.pull_back(p, &phi)).unwrap().height;
            assert_eq!(after, before * int(d), "degree {d}");
        }
    }
}

#[test]
fn legendre_torsion_labels_form_a_homomorphism() {
    let (surface, s) = legendre();
    let law = surface.law();
    let (a, b, c) = (s[0].clone(), s[1].clone(), s[2].clone());
    assert_eq!(law.add(&a, &b).unwrap(), c);
    let mut labels = Vec::new();
    for p in [&a, &b, &c] {
        assert!(law.mul(p, 2).unwrap().is_zero());
        assert_eq!(surface.height(p).unwrap().height, Rational::zero());
        labels.push(surface.components(p).unwrap());
    }
    labels.sort_by_key(|l| format!("{l:?}"));
    labels.dedup();
    assert_eq!(labels.len(), 3, "distinct torsion sections meet distinct components");
}
