use std::fmt;

use crate::funcfield::{rat, Field, Poly, RatFunc, Rational};

use super::WeierstrassError;

/// Which affine coordinate the coefficients are written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chart {
    /// The coordinate `t` on ℙ¹ minus infinity.
    AffineT,
    /// The coordinate `s = 1/t` around infinity.
    AffineS,
}

/// `y² + a1 xy + a3 y = x³ + a2 x² + a4 x + a6` over ℚ(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeierstrassModel {
    a: [RatFunc<Rational>; 5],
    chart: Chart,
}

/// Index into the coefficient array for `a1, a2, a3, a4, a6`.
pub const WEIGHTS: [u32; 5] = [1, 2, 3, 4, 6];

impl WeierstrassModel {
    pub fn new(a1: Poly<Rational>, a2: Poly<Rational>, a3: Poly<Rational>, a4: Poly<Rational>, a6: Poly<Rational>) -> Result<Self, WeierstrassError> {
        Self::from_ratfuncs([a1, a2, a3, a4, a6].map(RatFunc::from_poly))
    }

    pub fn short(a4: Poly<Rational>, a6: Poly<Rational>) -> Result<Self, WeierstrassError> {
        Self::new(Poly::zero(), Poly::zero(), Poly::zero(), a4, a6)
    }

    pub fn from_ratfuncs(a: [RatFunc<Rational>; 5]) -> Result<Self, WeierstrassError> {
        let m = WeierstrassModel { a, chart: Chart::AffineT };
        if m.discriminant().is_zero() {
            return Err(WeierstrassError::NotElliptic);
        }
        Ok(m)
    }

    pub(crate) fn with_chart(mut self, chart: Chart) -> Self {
        self.chart = chart;
        self
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn coeffs(&self) -> &[RatFunc<Rational>; 5] {
        &self.a
    }

    pub fn a1(&self) -> &RatFunc<Rational> {
        &self.a[0]
    }
    pub fn a2(&self) -> &RatFunc<Rational> {
        &self.a[1]
    }
    pub fn a3(&self) -> &RatFunc<Rational> {
        &self.a[2]
    }
    pub fn a4(&self) -> &RatFunc<Rational> {
        &self.a[3]
    }
    pub fn a6(&self) -> &RatFunc<Rational> {
        &self.a[4]
    }

    pub fn is_integral(&self) -> bool {
        self.a.iter().all(|c| c.is_poly())
    }

    /// Polynomial coefficients, if the model is integral over ℚ[t].
    pub fn poly_coeffs(&self) -> Option<[Poly<Rational>; 5]> {
        if !self.is_integral() {
            return None;
        }
        Some(self.a.clone().map(|c| c.num().clone()))
    }

    /// Least `n` with `deg a_i ≤ n·i`, for integral models.
    pub fn weight(&self) -> Option<u32> {
        let polys = self.poly_coeffs()?;
        Some(
            polys
                .iter()
                .zip(WEIGHTS)
                .filter_map(|(p, w)| p.degree().map(|d| (d as u32).div_ceil(w)))
                .max()
                .unwrap_or(0),
        )
    }

    pub fn is_extended(&self) -> bool {
        self.a[0].is_zero() && self.a[2].is_zero()
    }

    pub fn is_short(&self) -> bool {
        self.is_extended() && self.a[1].is_zero()
    }

    /// `[b2, b4, b6, b8]`.
    pub fn b_invariants(&self) -> [RatFunc<Rational>; 4] {
        let [a1, a2, a3, a4, a6] = &self.a;
        let c = |n: i64| RatFunc::from_rational(rat(n));
        let b2 = a1 * a1 + &c(4) * a2;
        let b4 = &c(2) * a4 + a1 * a3;
        let b6 = a3 * a3 + &c(4) * a6;
        let b8 = &(&(&(&(a1 * a1) * a6) + &(&(&c(4) * a2) * a6)) - &(&(a1 * a3) * a4)) + &(&(&(a2 * a3) * a3) - &(a4 * a4));
        [b2, b4, b6, b8]
    }

    pub fn c4(&self) -> RatFunc<Rational> {
        let [b2, b4, ..] = self.b_invariants();
        &(&b2 * &b2) - &(&RatFunc::from_rational(rat(24)) * &b4)
    }

    pub fn c6(&self) -> RatFunc<Rational> {
        let [b2, b4, b6, _] = self.b_invariants();
        let c = |n: i64| RatFunc::from_rational(rat(n));
        &(&(-&(&(&b2 * &b2) * &b2)) + &(&(&c(36) * &b2) * &b4)) - &(&c(216) * &b6)
    }

    pub fn discriminant(&self) -> RatFunc<Rational> {
        let [b2, b4, b6, b8] = self.b_invariants();
        let c = |n: i64| RatFunc::from_rational(rat(n));
        let t1 = -&(&(&b2 * &b2) * &b8);
        let t2 = &(&c(8) * &b4) * &(&b4 * &b4);
        let t3 = &(&c(27) * &b6) * &b6;
        let t4 = &(&(&c(9) * &b2) * &b4) * &b6;
        &(&(&t1 - &t2) - &t3) + &t4
    }

    /// Discriminant of an integral model.
    pub fn discriminant_poly(&self) -> Result<Poly<Rational>, WeierstrassError> {
        self.discriminant().as_poly().cloned().ok_or(WeierstrassError::NotIntegral)
    }

    pub fn j_invariant(&self) -> RatFunc<Rational> {
        let c4 = self.c4();
        (&(&c4 * &c4) * &c4)
            .checked_div(&self.discriminant())
            .expect("nonzero discriminant")
    }

    pub fn apply_transform(&self, tr: &AdmissibleTransform) -> Self {
        let [a1, a2, a3, a4, a6] = &self.a;
        let AdmissibleTransform { u, r, s, w } = tr;
        let c = |n: i64| RatFunc::from_rational(rat(n));
        let na1 = a1 + &(&c(2) * s);
        let na2 = &(&(a2 - &(s * a1)) + &(&c(3) * r)) - &(s * s);
        let na3 = &(a3 + &(r * a1)) + &(&c(2) * w);
        let na4 = &(&(&(a4 - &(s * a3)) + &(&(&c(2) * r) * a2)) - &(&(w + &(r * s)) * a1)) + &(&(&(&c(3) * r) * r) - &(&(&c(2) * s) * w));
        let na6 = &(&(&(a6 + &(r * a4)) + &(&(r * r) * a2)) + &(&(r * r) * r)) - &(&(&(w * a3) + &(w * w)) + &(&(r * w) * a1));
        let uinv = u.inv().expect("nonzero scaling");
        let scaled = [na1, na2, na3, na4, na6]
            .into_iter()
            .zip(WEIGHTS)
            .map(|(c, k)| &c * &uinv.pow(k as i64))
            .collect::<Vec<_>>();
        WeierstrassModel { a: scaled.try_into().unwrap(), chart: self.chart }
    }

    /// Transform to `y² = x³ + a2 x² + a4 x + a6`.
    pub fn extended_transform(&self) -> AdmissibleTransform {
        let half = RatFunc::from_rational(Rational::new(1.into(), 2.into()));
        let s = -&(&half * self.a1());
        let w = -&(&half * self.a3());
        AdmissibleTransform { u: RatFunc::one(), r: RatFunc::zero(), s, w }
    }

    /// Transform to `y² = x³ + a4 x + a6`.
    pub fn short_transform(&self) -> AdmissibleTransform {
        let b2 = &self.b_invariants()[0];
        let r = &RatFunc::from_rational(Rational::new((-1).into(), 12.into())) * b2;
        let half = RatFunc::from_rational(Rational::new(1.into(), 2.into()));
        let s = -&(&half * self.a1());
        let w = -&(&half * &(self.a3() + &(&r * self.a1())));
        AdmissibleTransform { u: RatFunc::one(), r, s, w }
    }

    pub fn to_extended(&self) -> Self {
        self.apply_transform(&self.extended_transform())
    }

    pub fn to_short(&self) -> Self {
        self.apply_transform(&self.short_transform())
    }

    /// Value of `y² + a1 xy + a3 y - x³ - a2 x² - a4 x - a6` at a point.
    pub fn equation_at<F: Field>(&self, x: &RatFunc<F>, y: &RatFunc<F>) -> RatFunc<F> {
        let [a1, a2, a3, a4, a6] = self.lifted::<F>();
        let lhs = &(&(y * y) + &(&(&a1 * x) * y)) + &(&a3 * y);
        let rhs = &(&(&(&(x * x) * x) + &(&(&a2 * x) * x)) + &(&a4 * x)) + &a6;
        &lhs - &rhs
    }

    pub fn lifted<F: Field>(&self) -> [RatFunc<F>; 5] {
        self.a.clone().map(|c| RatFunc::lift(&c))
    }

    pub fn variable(&self) -> &'static str {
        match self.chart {
            Chart::AffineT => "t",
            Chart::AffineS => "s",
        }
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["a1", "a2", "a3", "a4", "a6"];
        let parts: Vec<String> = names
            .iter()
            .zip(&self.a)
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| format!("{n}={}", c.fmt_var(self.variable()).replace(' ', "")))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// `x = u²x′ + r`, `y = u³y′ + s·u²x′ + w`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleTransform {
    pub u: RatFunc<Rational>,
    pub r: RatFunc<Rational>,
    pub s: RatFunc<Rational>,
    pub w: RatFunc<Rational>,
}

impl AdmissibleTransform {
    pub fn identity() -> Self {
        Self::scaling(RatFunc::one())
    }

    pub fn scaling(u: RatFunc<Rational>) -> Self {
        assert!(!u.is_zero(), "zero scaling");
        AdmissibleTransform { u, r: RatFunc::zero(), s: RatFunc::zero(), w: RatFunc::zero() }
    }

    pub fn translation(r: RatFunc<Rational>, s: RatFunc<Rational>, w: RatFunc<Rational>) -> Self {
        AdmissibleTransform { u: RatFunc::one(), r, s, w }
    }

    /// `self` followed by `next` (coordinates of `next` are the primed ones of `self`).
    pub fn then(&self, next: &Self) -> Self {
        let (u1, r1, s1, w1) = (&self.u, &self.r, &self.s, &self.w);
        let u1sq = u1 * u1;
        AdmissibleTransform {
            u: u1 * &next.u,
            r: &(&u1sq * &next.r) + r1,
            s: &(u1 * &next.s) + s1,
            w: &(w1 + &(&(&u1sq * u1) * &next.w)) + &(&(s1 * &u1sq) * &next.r),
        }
    }

    pub fn inverse(&self) -> Self {
        let ui = self.u.inv().expect("nonzero scaling");
        let ui2 = &ui * &ui;
        AdmissibleTransform {
            r: -&(&self.r * &ui2),
            s: -&(&self.s * &ui),
            w: &(&(&self.r * &self.s) - &self.w) * &(&ui2 * &ui),
            u: ui,
        }
    }

    /// New coordinates of a point given in old coordinates.
    pub fn map_point<F: Field>(&self, x: &RatFunc<F>, y: &RatFunc<F>) -> (RatFunc<F>, RatFunc<F>) {
        let (u, r, s, w) = (RatFunc::<F>::lift(&self.u), RatFunc::lift(&self.r), RatFunc::lift(&self.s), RatFunc::lift(&self.w));
        let u2 = &u * &u;
        let xn = (x - &r).checked_div(&u2).unwrap();
        let yn = (&(y - &(&(&s * &u2) * &xn)) - &w).checked_div(&(&u2 * &u)).unwrap();
        (xn, yn)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::parse_poly;

    fn m(a: [&str; 5]) -> WeierstrassModel {
        let p = a.map(|s| parse_poly(s).unwrap());
        let [a1, a2, a3, a4, a6] = p;
        WeierstrassModel::new(a1, a2, a3, a4, a6).unwrap()
    }

    #[test]
    fn discriminants() {
        assert_eq!(m(["0", "0", "0", "1", "1"]).discriminant_poly().unwrap(), parse_poly("-496").unwrap());
        assert_eq!(m(["0", "0", "0", "t", "0"]).discriminant_poly().unwrap(), parse_poly("-64*t^3").unwrap());
        let normal = m(["t-1728", "0", "0", "-36*(t-1728)^3", "-(t-1728)^5"]);
        assert_eq!(normal.discriminant_poly().unwrap(), parse_poly("t^2*(t-1728)^9").unwrap());
    }

    #[test]
    fn j_invariants() {
        assert_eq!(m(["0", "0", "0", "1", "0"]).j_invariant(), RatFunc::from_rational(rat(1728)));
        assert_eq!(m(["0", "0", "1", "0", "0"]).j_invariant(), RatFunc::zero());
        // Normal form with j = t.
        let j = "t";
        let a = format!("-36/({j}-1728)");
        let a1 = RatFunc::one();
        let a4 = crate::funcfield::parse_ratfunc(&a).unwrap();
        let a6 = crate::funcfield::parse_ratfunc(&format!("-1/({j}-1728)")).unwrap();
        let model = WeierstrassModel::from_ratfuncs([a1, RatFunc::zero(), RatFunc::zero(), a4, a6]).unwrap();
        assert_eq!(model.j_invariant(), RatFunc::t());
    }

    #[test]
    fn scaling_and_short_form() {
        let model = m(["0", "0", "0", "t^8", "t^12"]);
        let t = AdmissibleTransform::scaling(RatFunc::t());
        assert_eq!(model.apply_transform(&t), m(["0", "0", "0", "t^4", "t^6"]));
        let normal = m(["t-1728", "0", "0", "-36*(t-1728)^3", "-(t-1728)^5"]);
        let short = normal.to_short();
        let expect_a4 = parse_poly("-1/48*t*(t-1728)^3").unwrap();
        let expect_a6 = parse_poly("1/864*t*(t-1728)^5").unwrap();
        assert_eq!(short.a4().as_poly(), Some(&expect_a4));
        assert_eq!(short.a6().as_poly(), Some(&expect_a6));
        assert!(short.is_short());
    }

    #[test]
    fn transform_composition_and_inverse() {
        let model = m(["t", "1", "t^2", "t-3", "2*t^5"]);
        let c = |s: &str| crate::funcfield::parse_ratfunc(s).unwrap();
        let t1 = AdmissibleTransform { u: c("t+1"), r: c("t^2"), s: c("3"), w: c("1/t") };
        let t2 = AdmissibleTransform { u: c("2"), r: c("t"), s: c("t-1"), w: c("5") };
        let stepwise = model.apply_transform(&t1).apply_transform(&t2);
        assert_eq!(model.apply_transform(&t1.then(&t2)), stepwise);
        assert_eq!(model.apply_transform(&t1).apply_transform(&t1.inverse()), model);
    }
}
