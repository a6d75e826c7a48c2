//! Kodaira types of singular fibres (Tate's algorithm in characteristic 0)
//! and the global invariants of an elliptic surface over ℙ¹.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::funcfield::{factorize, is_square_in_residue, valuation, FuncFieldError, LocalRing, Place, Poly, RatFunc, Rational, SquareTest};
use crate::lattices::{AbelianGroup, RootLatticeLabel};
use crate::weierstrass::{WeierstrassError, WeierstrassModel};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum KodairaError {
    #[error("model is not minimal at {0}")]
    NotMinimal(String),
    #[error("valuations ({0}) match no Kodaira type")]
    Inconsistent(String),
    #[error("Euler numbers sum to {sum}, expected {expected}")]
    EulerMismatch { sum: i64, expected: i64 },
    #[error("surface is isotrivial (constant j)")]
    Isotrivial,
    #[error("surface has additive fibres")]
    NotSemiStable,
    #[error("unknown Kodaira type '{0}'")]
    UnknownType(String),
    #[error(transparent)]
    Weierstrass(#[from] WeierstrassError),
    #[error(transparent)]
    FuncField(#[from] FuncFieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KodairaType {
    I0,
    In(u32),
    II,
    III,
    IV,
    I0Star,
    InStar(u32),
    IVStar,
    IIIStar,
    IIStar,
}

impl KodairaType {
    /// `I_n` with `I_0` for `n = 0`.
    pub fn multiplicative(n: u32) -> Self {
        if n == 0 {
            KodairaType::I0
        } else {
            KodairaType::In(n)
        }
    }

    /// `I_n*` with `I_0*` for `n = 0`.
    pub fn star(n: u32) -> Self {
        if n == 0 {
            KodairaType::I0Star
        } else {
            KodairaType::InStar(n)
        }
    }

    pub fn is_multiplicative(&self) -> bool {
        matches!(self, KodairaType::In(_))
    }

    pub fn is_additive(&self) -> bool {
        !matches!(self, KodairaType::I0 | KodairaType::In(_))
    }

    /// Number of irreducible components `m_v`.
    pub fn components(&self) -> u32 {
        use KodairaType::*;
        match *self {
            I0 => 1,
            In(n) => n,
            II => 1,
            III => 2,
            IV => 3,
            I0Star => 5,
            InStar(n) => n + 5,
            IVStar => 7,
            IIIStar => 8,
            IIStar => 9,
        }
    }

    /// Euler number of the fibre, equal to `v(Δ)` on a minimal model.
    pub fn euler(&self) -> u32 {
        use KodairaType::*;
        match *self {
            I0 => 0,
            In(n) => n,
            II => 2,
            III => 3,
            IV => 4,
            I0Star => 6,
            InStar(n) => n + 6,
            IVStar => 8,
            IIIStar => 9,
            IIStar => 10,
        }
    }

    pub fn root_lattice(&self) -> Option<RootLatticeLabel> {
        use KodairaType::*;
        match *self {
            In(n) if n >= 2 => Some(RootLatticeLabel::A(n - 1)),
            III => Some(RootLatticeLabel::A(1)),
            IV => Some(RootLatticeLabel::A(2)),
            I0Star => Some(RootLatticeLabel::D(4)),
            InStar(n) => Some(RootLatticeLabel::D(n + 4)),
            IVStar => Some(RootLatticeLabel::E(6)),
            IIIStar => Some(RootLatticeLabel::E(7)),
            IIStar => Some(RootLatticeLabel::E(8)),
            _ => None,
        }
    }

    /// Group of simple components.
    pub fn component_group(&self) -> AbelianGroup {
        use KodairaType::*;
        match *self {
            I0 | II | IIStar => AbelianGroup::trivial(),
            In(n) => AbelianGroup::cyclic(n as u64),
            III | IIIStar => AbelianGroup::cyclic(2),
            IV | IVStar => AbelianGroup::cyclic(3),
            I0Star => AbelianGroup::from_cyclic_orders(&[2, 2]),
            InStar(n) if n % 2 == 0 => AbelianGroup::from_cyclic_orders(&[2, 2]),
            InStar(_) => AbelianGroup::cyclic(4),
        }
    }

    /// Type after a quadratic twist ramified at the place.
    pub fn twisted(&self) -> Self {
        use KodairaType::*;
        match *self {
            I0 => I0Star,
            In(n) => InStar(n),
            I0Star => I0,
            InStar(n) => In(n),
            II => IVStar,
            IVStar => II,
            III => IIIStar,
            IIIStar => III,
            IV => IIStar,
            IIStar => IV,
        }
    }
}

impl fmt::Display for KodairaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use KodairaType::*;
        match self {
            I0 => f.write_str("I0"),
            In(n) => write!(f, "I{n}"),
            II => f.write_str("II"),
            III => f.write_str("III"),
            IV => f.write_str("IV"),
            I0Star => f.write_str("I0*"),
            InStar(n) => write!(f, "I{n}*"),
            IVStar => f.write_str("IV*"),
            IIIStar => f.write_str("III*"),
            IIStar => f.write_str("II*"),
        }
    }
}

impl FromStr for KodairaType {
    type Err = KodairaError;

    /// Accepts `I5`, `I2*`, `II*` and the bare forms `5`, `2*`, `0*`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        use KodairaType::*;
        let s = s.trim();
        let unknown = || KodairaError::UnknownType(s.to_string());
        let fixed = match s {
            "II" => Some(II),
            "III" => Some(III),
            "IV" => Some(IV),
            "IV*" => Some(IVStar),
            "III*" => Some(IIIStar),
            "II*" => Some(IIStar),
            _ => None,
        };
        if let Some(k) = fixed {
            return Ok(k);
        }
        let body = s.strip_prefix('I').unwrap_or(s);
        let (digits, star) = match body.strip_suffix('*') {
            Some(d) => (d, true),
            None => (body, false),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(unknown());
        }
        let n: u32 = digits.parse().map_err(|_| unknown())?;
        Ok(if star { KodairaType::star(n) } else { KodairaType::multiplicative(n) })
    }
}

/// Whether the tangents at the node of an `I_n` fibre are defined over κ(v).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Split {
    Split,
    NonSplit,
    Undetermined,
    NotApplicable,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Split => "split",
            Split::NonSplit => "non-split",
            Split::Undetermined => "undetermined",
            Split::NotApplicable => "n/a",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibreData {
    pub place: Place,
    pub kodaira: KodairaType,
    pub components: u32,
    pub euler: u32,
    pub group: AbelianGroup,
    pub root: Option<RootLatticeLabel>,
    pub split: Split,
}

impl FibreData {
    /// Degree of the place: the number of geometric fibres it stands for.
    pub fn degree(&self) -> usize {
        self.place.degree()
    }
}

/// Local model at a place: the model itself at finite places, the chart in
/// `s = 1/t` (with the place `s = 0`) at infinity.
pub fn local_model(m: &WeierstrassModel, v: &Place) -> Result<(WeierstrassModel, Poly<Rational>), KodairaError> {
    match v {
        Place::Finite(p) => Ok((m.clone(), p.clone())),
        Place::Infinity => Ok((m.chart_at_infinity()?, Poly::x())),
    }
}

/// `(v(c4), v(c6), v(Δ))`, `None` meaning +∞.
fn local_valuations(m: &WeierstrassModel, p: &Poly<Rational>) -> (Option<i64>, Option<i64>, i64) {
    let place = Place::Finite(p.clone());
    let a = valuation(&m.c4(), &place);
    let b = valuation(&m.c6(), &place);
    let n = valuation(&m.discriminant(), &place).expect("nonzero discriminant");
    (a, b, n)
}

fn kodaira_from_valuations(a: Option<i64>, b: Option<i64>, n: i64) -> Option<KodairaType> {
    use KodairaType::*;
    let ge = |v: Option<i64>, k: i64| v.is_none_or(|v| v >= k);
    if n == 0 {
        return Some(I0);
    }
    if a == Some(0) {
        return Some(In(n as u32));
    }
    // Additive: c4 and c6 both vanish.
    if !(ge(a, 1) && ge(b, 1)) {
        return None;
    }
    let k = match n {
        2 => II,
        3 => III,
        4 => IV,
        6 if ge(a, 2) && ge(b, 3) => I0Star,
        _ if n > 6 && a == Some(2) && b == Some(3) => InStar((n - 6) as u32),
        8 if ge(a, 3) && b == Some(4) => IVStar,
        9 if a == Some(3) && ge(b, 5) => IIIStar,
        10 if ge(a, 4) && b == Some(5) => IIStar,
        _ => return None,
    };
    Some(k)
}

/// Classifies the fibre of `m` at `v`; `m` must be integral and minimal at `v`.
pub fn classify_fibre(m: &WeierstrassModel, v: &Place) -> Result<FibreData, KodairaError> {
    let (local, p) = local_model(m, v)?;
    let (a, b, n) = local_valuations(&local, &p);
    if a.is_none_or(|a| a >= 4) && b.is_none_or(|b| b >= 6) {
        return Err(KodairaError::NotMinimal(v.to_string()));
    }
    let kodaira = kodaira_from_valuations(a, b, n)
        .ok_or_else(|| KodairaError::Inconsistent(format!("v(c4)={a:?}, v(c6)={b:?}, v(disc)={n}")))?;
    let split = if kodaira.is_multiplicative() { split_flag(&local, &p)? } else { Split::NotApplicable };
    Ok(FibreData {
        place: v.clone(),
        kodaira,
        components: kodaira.components(),
        euler: kodaira.euler(),
        group: kodaira.component_group(),
        root: kodaira.root_lattice(),
        split,
    })
}

/// Squareness of the tangent slope `3x₀ + b` at the node of `y² = x³ + bx² + cx + d`.
fn split_flag(m: &WeierstrassModel, p: &Poly<Rational>) -> Result<Split, KodairaError> {
    if p.degree().unwrap_or(0) > 2 {
        return Ok(Split::Undetermined);
    }
    let e = m.to_extended();
    let (b, c, d) = (e.a2(), e.a4(), e.a6());
    let k = |n: i64| RatFunc::from_rational(Rational::from_integer(n.into()));
    let num = &(&k(9) * d) - &(b * c);
    let den = &(&k(2) * &(b * b)) - &(&k(6) * c);
    let x0 = num.checked_div(&den).expect("node denominator is a unit");
    let slope = &(&k(3) * &x0) + b;
    let ring = LocalRing::new(Place::Finite(p.clone()), None)?;
    let r = ring.reduce(&slope)?;
    if r.is_zero() {
        return Err(KodairaError::Inconsistent("cusp at a multiplicative place".into()));
    }
    Ok(match is_square_in_residue(&r)? {
        SquareTest::Yes => Split::Split,
        SquareTest::No => Split::NonSplit,
        SquareTest::Undetermined => Split::Undetermined,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurfaceClass {
    Rational,
    K3,
    HonestlyElliptic,
}

impl fmt::Display for SurfaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SurfaceClass::Rational => "rational",
            SurfaceClass::K3 => "K3",
            SurfaceClass::HonestlyElliptic => "honestly elliptic",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceAnalysis {
    pub model: WeierstrassModel,
    pub chi: u32,
    pub euler: u32,
    pub fibres: Vec<FibreData>,
    pub conductor_degree: u32,
    pub trivial_rank: u32,
    pub b2: u32,
    pub h11: u32,
    pub pg: u32,
    pub classification: SurfaceClass,
    pub isotrivial: bool,
}

impl SurfaceAnalysis {
    /// Kodaira types over ℚ̄, each place repeated by its degree.
    pub fn geometric_types(&self) -> Vec<KodairaType> {
        let mut out: Vec<KodairaType> = self
            .fibres
            .iter()
            .flat_map(|f| std::iter::repeat_n(f.kodaira, f.degree()))
            .collect();
        out.sort();
        out
    }

    pub fn fibre_at(&self, v: &Place) -> Option<&FibreData> {
        self.fibres.iter().find(|f| &f.place == v)
    }
}

/// Globally minimalises `m` and classifies every singular fibre.
pub fn analyze(m: &WeierstrassModel) -> Result<SurfaceAnalysis, KodairaError> {
    let model = m.globally_minimal()?;
    let chi = model.weight().expect("minimal models are integral");
    let disc = model.discriminant_poly()?;
    let mut fibres = Vec::new();
    if !disc.is_constant() {
        for (q, _) in factorize(&disc)?.factors {
            fibres.push(classify_fibre(&model, &Place::Finite(q))?);
        }
    }
    let at_infinity = 12 * chi as i64 - disc.deg_i();
    if at_infinity > 0 {
        fibres.push(classify_fibre(&model, &Place::Infinity)?);
    }
    let weighted = |f: &FibreData, x: u32| x * f.degree() as u32;
    let euler: u32 = fibres.iter().map(|f| weighted(f, f.euler)).sum();
    if euler != 12 * chi {
        return Err(KodairaError::EulerMismatch { sum: euler as i64, expected: 12 * chi as i64 });
    }
    let conductor_degree = fibres
        .iter()
        .map(|f| weighted(f, if f.kodaira.is_additive() { 2 } else { 1 }))
        .sum();
    let trivial_rank = 2 + fibres.iter().map(|f| weighted(f, f.components - 1)).sum::<u32>();
    let classification = match chi {
        1 => SurfaceClass::Rational,
        2 => SurfaceClass::K3,
        _ => SurfaceClass::HonestlyElliptic,
    };
    let isotrivial = model.j_invariant().is_constant();
    Ok(SurfaceAnalysis {
        model,
        chi,
        euler,
        fibres,
        conductor_degree,
        trivial_rank,
        b2: 12 * chi - 2,
        h11: 10 * chi,
        pg: chi - 1,
        classification,
        isotrivial,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SzpiroCheck {
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

/// `deg Δ ≤ 6(deg N − 2)` for non-isotrivial surfaces over ℙ¹.
pub fn szpiro_check(a: &SurfaceAnalysis) -> Result<SzpiroCheck, KodairaError> {
    if a.isotrivial {
        return Err(KodairaError::Isotrivial);
    }
    let lhs = 12 * a.chi as i64;
    let rhs = 6 * (a.conductor_degree as i64 - 2);
    Ok(SzpiroCheck { lhs, rhs, holds: lhs <= rhs })
}

/// Semi-stable surfaces are isomorphic over ℚ(t) iff their discriminant
/// divisors agree (places and multiplicities, infinity included).
pub fn isomorphism_test_semistable(m1: &WeierstrassModel, m2: &WeierstrassModel) -> Result<bool, KodairaError> {
    let divisor = |m: &WeierstrassModel| -> Result<Vec<(Place, u32)>, KodairaError> {
        let a = analyze(m)?;
        if a.fibres.iter().any(|f| f.kodaira.is_additive()) {
            return Err(KodairaError::NotSemiStable);
        }
        let mut d: Vec<(Place, u32)> = a.fibres.iter().map(|f| (f.place.clone(), f.euler)).collect();
        d.sort();
        Ok(d)
    };
    Ok(divisor(m1)? == divisor(m2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::{parse_poly, rat};
    use KodairaType::*;

    fn m(a: [&str; 5]) -> WeierstrassModel {
        let [a1, a2, a3, a4, a6] = a.map(|s| parse_poly(s).unwrap());
        WeierstrassModel::new(a1, a2, a3, a4, a6).unwrap()
    }

    fn normal_form() -> WeierstrassModel {
        m(["t-1728", "0", "0", "-36*(t-1728)^3", "-(t-1728)^5"])
    }

    #[test]
    fn normal_form_fibres() {
        let nf = normal_form();
        assert_eq!(classify_fibre(&nf, &Place::at(rat(0))).unwrap().kodaira, II);
        assert_eq!(classify_fibre(&nf, &Place::at(rat(1728))).unwrap().kodaira, IIIStar);
        assert_eq!(classify_fibre(&nf, &Place::Infinity).unwrap().kodaira, In(1));
        let a = analyze(&nf).unwrap();
        assert_eq!((a.chi, a.euler, a.trivial_rank, a.conductor_degree), (1, 12, 9, 5));
        assert_eq!(a.classification, SurfaceClass::Rational);
        let s = szpiro_check(&a).unwrap();
        assert!(s.holds);
        assert_eq!((s.lhs, s.rhs), (12, 18));
    }

    #[test]
    fn legendre_and_twists() {
        let legendre = m(["0", "-t-1", "0", "t", "0"]);
        let a = analyze(&legendre).unwrap();
        let types: Vec<_> = a.fibres.iter().map(|f| f.kodaira).collect();
        assert_eq!(types, vec![In(2), In(2), InStar(2)]);
        // y² = x²(x − 1) at t = 0 has tangents y = ±√−1·x; at t = 1 they are rational.
        assert_eq!((a.fibres[0].split, a.fibres[1].split), (Split::NonSplit, Split::Split));
        let tw = legendre.quadratic_twist(&parse_poly("t").unwrap()).unwrap();
        assert_eq!(classify_fibre(&tw, &Place::at(rat(0))).unwrap().kodaira, InStar(2));
        assert_eq!(isomorphism_test_semistable(&legendre, &tw), Err(KodairaError::NotSemiStable));
    }

    #[test]
    fn multiplicative_split_flag() {
        // y² = x³ + x² + t: node at (0, 0) with tangents y = ±x.
        let split = m(["0", "1", "0", "0", "t"]);
        assert_eq!(classify_fibre(&split, &Place::at(rat(0))).unwrap().split, Split::Split);
        let nonsplit = m(["0", "-1", "0", "0", "t"]);
        assert_eq!(classify_fibre(&nonsplit, &Place::at(rat(0))).unwrap().split, Split::NonSplit);
    }

    #[test]
    fn type_strings() {
        for k in [I0, In(7), II, III, IV, I0Star, InStar(3), IVStar, IIIStar, IIStar] {
            assert_eq!(k.to_string().parse::<KodairaType>().unwrap(), k);
        }
        assert_eq!("0*".parse::<KodairaType>().unwrap(), I0Star);
        assert_eq!("9".parse::<KodairaType>().unwrap(), In(9));
        assert!("V".parse::<KodairaType>().is_err());
    }

    #[test]
    fn not_minimal_rejected() {
        let model = m(["0", "0", "0", "t^4", "t^6"]);
        assert!(matches!(classify_fibre(&model, &Place::at(rat(0))), Err(KodairaError::NotMinimal(_))));
    }

    #[test]
    fn twist_involution_and_groups() {
        for k in [I0, In(4), II, III, IV, I0Star, InStar(3), IVStar, IIIStar, IIStar] {
            assert_eq!(k.twisted().twisted(), k);
            if k != I0 {
                assert_eq!(k.euler() - k.components(), u32::from(k.is_additive()));
            }
        }
    }
}
