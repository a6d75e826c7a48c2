use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::funcfield::{Place, Poly, RatFunc, Rational};
use crate::kodaira::{analyze, KodairaType, SurfaceAnalysis};
use crate::lattices::root_det;
use crate::weierstrass::{chart_point_at_infinity, AdmissibleTransform, WeierstrassModel};

use super::components::{identify_at_finite, ComponentLabel};
use super::section::{Coord, GroupLaw, Section};
use super::MordellWeilError;

/// The simple component met by a section at one place.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComponentId {
    pub place: Place,
    pub label: ComponentLabel,
}

/// A fibre as seen by a section: type, component met, degree of the place.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalContact {
    pub kodaira: KodairaType,
    pub label: ComponentLabel,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightReport {
    pub height: Rational,
    pub contact_o: u64,
    /// Non-zero local corrections, already weighted by the degree of the place.
    pub contributions: BTreeMap<Place, Rational>,
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Local correction `contr_v(P, Q)` for one geometric fibre.
pub fn correction(
    kodaira: KodairaType,
    p: ComponentLabel,
    q_label: ComponentLabel,
) -> Result<Rational, MordellWeilError> {
    use ComponentLabel::*;
    use KodairaType as K;
    if p == Zero || q_label == Zero {
        return Ok(Rational::zero());
    }
    let mismatch = || MordellWeilError::LabelMismatch(format!("{p}, {q_label} on {kodaira}"));
    let cyclic = |n: u32, i: u32, j: u32| {
        let (i, j) = (i.min(j) as i64, i.max(j) as i64);
        q(i * (n as i64 - j), n as i64)
    };
    let value = match (kodaira, p, q_label) {
        (K::In(n), Cyclic(i), Cyclic(j)) if i < n && j < n => cyclic(n, i, j),
        (K::III, NonZeroSimple(1), NonZeroSimple(1)) => cyclic(2, 1, 1),
        (K::IV, NonZeroSimple(i), NonZeroSimple(j)) if i <= 2 && j <= 2 => cyclic(3, i, j),
        (K::I0Star, FarAny(i), FarAny(j)) => {
            if i == j {
                q(1, 1)
            } else {
                q(1, 2)
            }
        }
        (K::InStar(_), Near, Near) => q(1, 1),
        (K::InStar(n), Far(i), Far(j)) => {
            let base = if i == j { q(1, 1) } else { q(1, 2) };
            base + q(n as i64, 4)
        }
        (K::InStar(_), Near, Far(_)) | (K::InStar(_), Far(_), Near) => q(1, 2),
        (K::IVStar, NonZeroSimple(i), NonZeroSimple(j)) if i <= 2 && j <= 2 => {
            if i == j {
                q(4, 3)
            } else {
                q(2, 3)
            }
        }
        (K::IIIStar, NonZeroSimple(1), NonZeroSimple(1)) => q(3, 2),
        _ => return Err(mismatch()),
    };
    Ok(value)
}

/// `2χ + 2·P̄Ō − Σ contr_v(P)` from the intersection data alone.
pub fn height_from_data(chi: u32, contact_o: u64, fibres: &[LocalContact]) -> Result<Rational, MordellWeilError> {
    let mut h = Rational::from_integer(BigInt::from(2 * chi as u64 + 2 * contact_o));
    for f in fibres {
        h -= correction(f.kodaira, f.label, f.label)? * Rational::from_integer(f.degree.into());
    }
    Ok(h)
}

/// `(-1)^r · disc(T) · det(gram) / #tor²` for the Néron-Severi lattice.
pub fn ns_discriminant(
    a: &SurfaceAnalysis,
    gram: &[Vec<Rational>],
    torsion_order: u64,
) -> Result<Rational, MordellWeilError> {
    // The hyperbolic plane spanned by the zero section and a fibre has discriminant -1.
    let mut disc_t = -BigInt::one();
    for f in &a.fibres {
        if let Some(root) = f.root {
            disc_t *= root_det(root)?.pow(f.degree() as u32);
        }
    }
    let det = rational_determinant(gram);
    if det.is_zero() {
        return Err(MordellWeilError::SingularGram);
    }
    let sign = if gram.len().is_multiple_of(2) { 1 } else { -1 };
    let tor = Rational::from_integer(BigInt::from(torsion_order));
    Ok(Rational::from_integer(disc_t * sign) * det / (tor.clone() * tor))
}

/// Determinant of a square matrix of rationals by Gaussian elimination.
pub fn rational_determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= p.clone();
        for r in col + 1..n {
            let f = a[r][col].clone() / p.clone();
            if f.is_zero() {
                continue;
            }
            for c in col..n {
                let v = a[col][c].clone() * f.clone();
                a[r][c] -= v;
            }
        }
    }
    det
}

/// An elliptic surface with its globally minimal model and singular fibres.
///
/// Sections are given in the coordinates of the model the surface was built
/// from and are moved to the minimal model internally.
#[derive(Clone, Debug)]
pub struct EllipticSurface {
    input: WeierstrassModel,
    to_minimal: AdmissibleTransform,
    analysis: SurfaceAnalysis,
    chart: WeierstrassModel,
}

impl EllipticSurface {
    pub fn new(model: &WeierstrassModel) -> Result<Self, MordellWeilError> {
        let (minimal, to_minimal) = model.minimal_with_transform()?;
        let analysis = analyze(&minimal)?;
        debug_assert_eq!(analysis.model, minimal);
        let chart = minimal.chart_at_infinity()?;
        Ok(EllipticSurface { input: model.clone(), to_minimal, analysis, chart })
    }

    pub fn input_model(&self) -> &WeierstrassModel {
        &self.input
    }

    pub fn minimal_model(&self) -> &WeierstrassModel {
        &self.analysis.model
    }

    pub fn analysis(&self) -> &SurfaceAnalysis {
        &self.analysis
    }

    pub fn chi(&self) -> u32 {
        self.analysis.chi
    }

    fn weight(&self) -> u32 {
        self.analysis.chi
    }

    /// Group law on the input model.
    pub fn law(&self) -> GroupLaw<'_> {
        GroupLaw::new(&self.input)
    }

    /// Validates `p` on the input model and returns it on the minimal one.
    pub fn to_minimal(&self, p: &Section) -> Result<Section, MordellWeilError> {
        self.law().check(p)?;
        Ok(p.map_coords(|x, y| self.to_minimal.map_point(x, y)))
    }

    fn finite(p: &Section) -> Result<(&Coord, &Coord), MordellWeilError> {
        p.coords().ok_or(MordellWeilError::FinitePointRequired)
    }

    /// `P̄·Ō` for a finite section on the minimal model.
    fn contact_minimal(&self, p: &Section) -> Result<u64, MordellWeilError> {
        let (x, y) = Self::finite(p)?;
        let malformed = |place: &str| MordellWeilError::MalformedPole {
            x: x.to_string(),
            y: y.to_string(),
            place: place.to_string(),
        };
        let (dx, dy) = (x.den(), y.den());
        if (dy * dy) != (&(dx * dx) * dx) {
            return Err(malformed("a finite place"));
        }
        let finite = (dy.deg_i() - dx.deg_i()) as u64;
        let n = self.weight() as i64;
        let vx = x.order_at_infinity().unwrap_or(i64::MAX / 4);
        let ex = 2 * n + vx;
        let at_inf = if ex < 0 {
            let vy = y.order_at_infinity().unwrap_or(i64::MAX / 4);
            if ex % 2 != 0 || 3 * n + vy != 3 * ex / 2 {
                return Err(malformed("infinity"));
            }
            (-ex / 2) as u64
        } else {
            0
        };
        Ok(finite + at_inf)
    }

    /// Intersection number of `P` with the zero section.
    pub fn contact_with_zero(&self, p: &Section) -> Result<u64, MordellWeilError> {
        let pm = self.to_minimal(p)?;
        self.contact_minimal(&pm)
    }

    /// Local model and the section's coordinates near `v`.
    fn local_point(&self, v: &Place, x: &Coord, y: &Coord) -> (&WeierstrassModel, Poly<Rational>, Coord, Coord) {
        match v {
            Place::Finite(p) => (&self.analysis.model, p.clone(), x.clone(), y.clone()),
            Place::Infinity => {
                let (xs, ys) = chart_point_at_infinity(x, y, self.weight());
                (&self.chart, Poly::x(), xs, ys)
            }
        }
    }

    fn components_minimal(&self, p: &Section) -> Result<Vec<(ComponentId, LocalContact)>, MordellWeilError> {
        let (x, y) = Self::finite(p)?;
        let radicand = p.radicand();
        let mut out = Vec::new();
        for f in &self.analysis.fibres {
            let (m, pl, xl, yl) = self.local_point(&f.place, x, y);
            let label = identify_at_finite(m, f.kodaira, &pl, &xl, &yl, radicand.clone())?;
            out.push((
                ComponentId { place: f.place.clone(), label },
                LocalContact { kodaira: f.kodaira, label, degree: f.degree() as u32 },
            ));
        }
        Ok(out)
    }

    /// Component met by `P` at every singular fibre.
    pub fn components(&self, p: &Section) -> Result<Vec<ComponentId>, MordellWeilError> {
        let pm = self.to_minimal(p)?;
        Ok(self.components_minimal(&pm)?.into_iter().map(|(c, _)| c).collect())
    }

    /// Component met by `P` at the place `v`; the zero component at smooth fibres.
    pub fn identify_component(&self, p: &Section, v: &Place) -> Result<ComponentId, MordellWeilError> {
        let pm = self.to_minimal(p)?;
        let (x, y) = Self::finite(&pm)?;
        let Some(f) = self.analysis.fibre_at(v) else {
            return Ok(ComponentId { place: v.clone(), label: ComponentLabel::Zero });
        };
        let (m, pl, xl, yl) = self.local_point(v, x, y);
        let label = identify_at_finite(m, f.kodaira, &pl, &xl, &yl, pm.radicand())?;
        Ok(ComponentId { place: v.clone(), label })
    }

    fn height_minimal(&self, p: &Section) -> Result<HeightReport, MordellWeilError> {
        if p.is_zero() {
            return Ok(HeightReport { height: Rational::zero(), contact_o: 0, contributions: BTreeMap::new() });
        }
        let contact_o = self.contact_minimal(p)?;
        let mut contributions = BTreeMap::new();
        let mut local = Vec::new();
        for (id, lc) in self.components_minimal(p)? {
            let c = correction(lc.kodaira, lc.label, lc.label)? * Rational::from_integer(lc.degree.into());
            if !c.is_zero() {
                contributions.insert(id.place, c);
            }
            local.push(lc);
        }
        let height = height_from_data(self.chi(), contact_o, &local)?;
        Ok(HeightReport { height, contact_o, contributions })
    }

    pub fn height(&self, p: &Section) -> Result<HeightReport, MordellWeilError> {
        let pm = self.to_minimal(p)?;
        Self::finite(&pm)?;
        self.height_minimal(&pm)
    }

    /// `P̄·Q̄` for distinct sections, as the contact of `P - Q` with `O`.
    pub fn mutual_contact(&self, p: &Section, q: &Section) -> Result<u64, MordellWeilError> {
        let (pm, qm) = (self.to_minimal(p)?, self.to_minimal(q)?);
        self.mutual_contact_minimal(&pm, &qm)
    }

    fn mutual_contact_minimal(&self, p: &Section, q: &Section) -> Result<u64, MordellWeilError> {
        if p == q {
            return Err(MordellWeilError::DistinctnessViolation);
        }
        let law = GroupLaw::new(&self.analysis.model);
        match law.sub(p, q)? {
            Section::Zero => Err(MordellWeilError::DistinctnessViolation),
            d => self.contact_minimal(&d),
        }
    }

    /// The height pairing from intersection numbers and local corrections.
    pub fn pairing(&self, p: &Section, q: &Section) -> Result<Rational, MordellWeilError> {
        let (pm, qm) = (self.to_minimal(p)?, self.to_minimal(q)?);
        Self::finite(&pm)?;
        Self::finite(&qm)?;
        if pm == qm {
            return Ok(self.height_minimal(&pm)?.height);
        }
        let po = self.contact_minimal(&pm)?;
        let qo = self.contact_minimal(&qm)?;
        let pq = self.mutual_contact_minimal(&pm, &qm)?;
        let mut value = Rational::from_integer(BigInt::from(self.chi() as u64 + po + qo) - BigInt::from(pq));
        let cp = self.components_minimal(&pm)?;
        let cq = self.components_minimal(&qm)?;
        for ((_, a), (_, b)) in cp.iter().zip(&cq) {
            value -= correction(a.kodaira, a.label, b.label)? * Rational::from_integer(a.degree.into());
        }
        Ok(value)
    }

    /// The same pairing through `(h(P+Q) - h(P) - h(Q))/2`.
    pub fn pairing_by_polarization(&self, p: &Section, q: &Section) -> Result<Rational, MordellWeilError> {
        let (pm, qm) = (self.to_minimal(p)?, self.to_minimal(q)?);
        Self::finite(&pm)?;
        Self::finite(&qm)?;
        let law = GroupLaw::new(&self.analysis.model);
        let sum = law.add(&pm, &qm)?;
        let h = |s: &Section| self.height_minimal(s).map(|r| r.height);
        Ok((h(&sum)? - h(&pm)? - h(&qm)?) / Rational::from_integer(2.into()))
    }

    pub fn gram_matrix(&self, sections: &[Section]) -> Result<Vec<Vec<Rational>>, MordellWeilError> {
        let n = sections.len();
        let mut g = vec![vec![Rational::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let v = self.pairing(&sections[i], &sections[j])?;
                g[j][i] = v.clone();
                g[i][j] = v;
            }
        }
        Ok(g)
    }

    pub fn is_torsion(&self, p: &Section) -> Result<bool, MordellWeilError> {
        Ok(self.height(p)?.height.is_zero())
    }

    /// Meets the zero component of every fibre.
    pub fn is_narrow(&self, p: &Section) -> Result<bool, MordellWeilError> {
        Ok(self.components(p)?.iter().all(|c| c.label == ComponentLabel::Zero))
    }

    /// Disjoint from the zero section.
    pub fn is_integral(&self, p: &Section) -> Result<bool, MordellWeilError> {
        Ok(self.contact_with_zero(p)? == 0)
    }

    /// The surface pulled back along `t ↦ φ(t)`, built on the naive pulled-back
    /// model so that `pull_back` gives sections in its coordinates.
    pub fn base_change(&self, phi: &RatFunc<Rational>) -> Result<EllipticSurface, MordellWeilError> {
        if phi.is_constant() {
            return Err(crate::weierstrass::WeierstrassError::ConstantMap.into());
        }
        let a = self.input.coeffs().clone().map(|c| c.compose(phi));
        EllipticSurface::new(&WeierstrassModel::from_ratfuncs(a)?)
    }

    pub fn pull_back(&self, p: &Section, phi: &RatFunc<Rational>) -> Section {
        let phi = RatFunc::lift(phi);
        p.map_coords(|x, y| (x.compose(&phi), y.compose(&phi)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::{parse_poly, parse_quadratic, parse_ratfunc};
    use ComponentLabel::*;

    fn m(a: [&str; 5]) -> WeierstrassModel {
        let [a1, a2, a3, a4, a6] = a.map(|s| parse_poly(s).unwrap());
        WeierstrassModel::new(a1, a2, a3, a4, a6).unwrap()
    }

    fn pt(x: &str, y: &str) -> Section {
        Section::rational(parse_ratfunc(x).unwrap(), parse_ratfunc(y).unwrap())
    }

    #[test]
    fn equation_free_height() {
        let h = height_from_data(
            1,
            0,
            &[
                LocalContact { kodaira: KodairaType::In(2), label: Cyclic(1), degree: 1 },
                LocalContact { kodaira: KodairaType::In(7), label: Cyclic(2), degree: 1 },
            ],
        )
        .unwrap();
        assert_eq!(h, q(1, 14));
    }

    #[test]
    fn legendre_two_torsion() {
        let s = EllipticSurface::new(&m(["0", "-t-1", "0", "t", "0"])).unwrap();
        for p in [pt("0", "0"), pt("1", "0"), pt("t", "0")] {
            let r = s.height(&p).unwrap();
            assert_eq!(r.height, Rational::zero(), "{p}");
            assert!(s.is_torsion(&p).unwrap());
            assert!(!s.is_narrow(&p).unwrap());
            assert!(s.is_integral(&p).unwrap());
        }
        let inf = |p: &Section| s.identify_component(p, &Place::Infinity).unwrap().label;
        assert_eq!(inf(&pt("t", "0")), Near);
        assert!(matches!(inf(&pt("0", "0")), Far(_)));
        assert_ne!(inf(&pt("0", "0")), inf(&pt("1", "0")));
    }

    #[test]
    fn correction_table_is_symmetric() {
        let labels = [Zero, Near, Far(1), Far(2)];
        for a in labels {
            for b in labels {
                assert_eq!(
                    correction(KodairaType::InStar(3), a, b).unwrap(),
                    correction(KodairaType::InStar(3), b, a).unwrap()
                );
            }
        }
        assert_eq!(correction(KodairaType::In(5), Cyclic(2), Cyclic(4)).unwrap(), q(2, 5));
        assert!(correction(KodairaType::IIIStar, Near, Near).is_err());
    }

    #[test]
    fn rational_determinant_matches_hand_value() {
        let g = vec![vec![q(1, 2), q(1, 1)], vec![q(1, 1), q(4, 1)]];
        assert_eq!(rational_determinant(&g), q(1, 1));
    }

    fn normal_form() -> (EllipticSurface, Section) {
        let model = m(["t-1728", "0", "0", "-36*(t-1728)^3", "-(t-1728)^5"]);
        let x = parse_quadratic("-(t-1728)^2/36").unwrap();
        let y = parse_quadratic("(3+2*sqrt(2))*(t-1728)^3/216").unwrap();
        (EllipticSurface::new(&model).unwrap(), Section::new(x, y))
    }

    #[test]
    fn normal_form_section() {
        let (s, p) = normal_form();
        assert_eq!(s.contact_with_zero(&p).unwrap(), 0);
        let c = s.identify_component(&p, &Place::at(Rational::from_integer(1728.into()))).unwrap();
        assert_eq!(c.label, NonZeroSimple(1));
        let r = s.height(&p).unwrap();
        assert_eq!(r.height, q(1, 2));
        let g = s.gram_matrix(std::slice::from_ref(&p)).unwrap();
        assert_eq!(ns_discriminant(s.analysis(), &g, 1).unwrap(), q(-1, 1));
    }

    #[test]
    fn normal_form_multiples() {
        let (s, p) = normal_form();
        let law = s.law();
        let p2 = law.mul(&p, 2).unwrap();
        assert_eq!(s.height(&p2).unwrap().height, q(2, 1));
        assert_eq!(s.contact_with_zero(&p2).unwrap(), 0);
        let p3 = law.mul(&p, 3).unwrap();
        assert_eq!(s.height(&p3).unwrap().height, q(9, 2));
        assert_eq!(s.pairing(&p, &p2).unwrap(), q(1, 1));
        assert_eq!(s.pairing_by_polarization(&p, &p2).unwrap(), q(1, 1));
        assert_eq!(s.pairing(&p, &law.neg(&p)).unwrap(), q(-1, 2));
    }

    #[test]
    fn base_change_doubles_height() {
        let (s, p) = normal_form();
        let phi = parse_ratfunc("t^2+1728").unwrap();
        let s2 = s.base_change(&phi).unwrap();
        let p2 = s.pull_back(&p, &phi);
        assert_eq!(s2.height(&p2).unwrap().height, q(1, 1));
    }

    fn torsion_orbit(model: WeierstrassModel, order: i64) -> Vec<KodairaType> {
        let s = EllipticSurface::new(&model).unwrap();
        let law = s.law();
        let p = pt("0", "0");
        assert_eq!(law.mul(&p, order).unwrap(), Section::Zero);
        let multiples: Vec<Section> = (1..order).map(|k| law.mul(&p, k).unwrap()).collect();
        for a in &multiples {
            assert_eq!(s.height(a).unwrap().height, Rational::zero(), "{a}");
            for b in &multiples {
                assert_eq!(s.pairing(a, b).unwrap(), Rational::zero(), "{a} {b}");
            }
        }
        s.analysis().geometric_types()
    }

    #[test]
    fn tate_normal_form_torsion() {
        use KodairaType::*;
        assert_eq!(torsion_orbit(m(["1", "0", "t", "0", "0"]), 3), vec![In(1), In(3), IVStar]);
        assert_eq!(torsion_orbit(m(["1", "-t", "-t", "0", "0"]), 4), vec![In(1), In(4), InStar(1)]);
        assert_eq!(torsion_orbit(m(["1-t", "-t", "-t", "0", "0"]), 5), vec![In(1), In(1), In(5), In(5)]);
        let b = "t^3-t^2";
        let c = "t^2-t";
        let seven = m([&format!("1-({c})"), &format!("-({b})"), &format!("-({b})"), "0", "0"]);
        assert_eq!(torsion_orbit(seven, 7).iter().filter(|k| **k == In(7)).count(), 3);
    }

    /// `y² = x(x - d)(x - d·e)` with its three 2-torsion sections.
    fn two_torsion(d: &str, e: &str) -> Vec<KodairaType> {
        let model = m(["0", &format!("-({d})*(1+{e})"), "0", &format!("({d})^2*{e}"), "0"]);
        let s = EllipticSurface::new(&model).unwrap();
        for (x, _) in [("0", ""), (d, ""), (&format!("({d})*{e}") as &str, "")] {
            let p = pt(x, "0");
            assert_eq!(s.height(&p).unwrap().height, Rational::zero(), "{p}");
        }
        s.analysis().geometric_types()
    }

    #[test]
    fn two_torsion_through_star_chains() {
        use KodairaType::*;
        assert_eq!(two_torsion("t*(t-1)", "t"), vec![InStar(2); 3]);
        assert_eq!(two_torsion("1", "t^2"), vec![In(2), In(2), In(4), In(4)]);
        assert_eq!(two_torsion("t", "t^2"), vec![In(2), In(2), InStar(4), InStar(4)]);
        assert_eq!(two_torsion("t", "t^4"), vec![In(2), In(2), In(2), In(2), InStar(8), InStar(8)]);
        assert_eq!(
            two_torsion("t^2-5", "t^3"),
            vec![In(2), In(2), In(2), In(6), I0Star, I0Star, InStar(6)]
        );
}
}
