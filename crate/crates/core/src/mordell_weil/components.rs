//! Which simple component of a singular fibre a section meets.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;

use crate::funcfield::{Field, LocalRing, Place, Poly, Quadratic, RatFunc, Rational, ResidueElt};
use crate::kodaira::KodairaType;
use crate::weierstrass::{AdmissibleTransform, WeierstrassModel};

use super::section::Coord;
use super::MordellWeilError;

/// A simple component of a fibre.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentLabel {
    /// The component met by the zero section.
    Zero,
    /// Component `i` of an `I_n` cycle, `0 < i < n`.
    Cyclic(u32),
    /// Non-zero simple component of III, IV, IV*, III* (numbered from 1).
    NonZeroSimple(u32),
    /// The simple component of `I_n*` (n ≥ 1) on the same side as the zero component.
    Near,
    /// One of the two simple components at the far end of `I_n*` (n ≥ 1).
    Far(u8),
    /// One of the three non-zero simple components of `I_0*`.
    FarAny(u8),
}

impl fmt::Display for ComponentLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentLabel::Zero => f.write_str("zero"),
            ComponentLabel::Cyclic(i) => write!(f, "cyclic {i}"),
            ComponentLabel::NonZeroSimple(i) => write!(f, "simple {i}"),
            ComponentLabel::Near => f.write_str("near"),
            ComponentLabel::Far(i) => write!(f, "far {i}"),
            ComponentLabel::FarAny(i) => write!(f, "far {i}"),
        }
    }
}

/// Reduction of a `v`-integral function to a polynomial modulo `p^prec`.
pub(crate) fn truncate(f: &RatFunc<Rational>, p: &Poly<Rational>, prec: u32) -> Poly<Rational> {
    let modulus = p.pow(prec);
    let (g, s, _) = f.den().ext_gcd(&modulus);
    assert!(g.degree() == Some(0), "denominator vanishes at the place");
    (f.num() * &s).rem(&modulus)
}

fn konst<F: Field>(n: i64) -> RatFunc<F> {
    RatFunc::from_rational(Rational::from_integer(n.into()))
}

/// Local data at a finite place, with a residue field large enough for the section.
struct Local {
    p: Poly<Rational>,
    ring: LocalRing,
}

impl Local {
    fn v<F: Field>(&self, f: &RatFunc<F>) -> Option<i64> {
        self.ring.valuation(f)
    }

    fn red<F: Field>(&self, f: &RatFunc<F>) -> Result<ResidueElt, MordellWeilError> {
        Ok(self.ring.reduce(f)?)
    }

    fn pi<F: Field>(&self, k: i64) -> RatFunc<F> {
        RatFunc::from_poly(Poly::lift(&self.p)).pow(k)
    }

    /// `f / π^k`.
    fn shift<F: Field>(&self, f: &RatFunc<F>, k: i64) -> RatFunc<F> {
        f * &self.pi(-k)
    }

    fn inconsistent(&self, what: &str) -> MordellWeilError {
        MordellWeilError::Inconsistent(format!("{what} at {}", self.p))
    }
}

fn sign_label(z: &ResidueElt, pos: u32, neg: u32) -> u32 {
    if z.is_canonically_positive() {
        pos
    } else {
        neg
    }
}

fn translate(
    m: &WeierstrassModel,
    x: &Coord,
    y: &Coord,
    r: Poly<Rational>,
) -> (WeierstrassModel, Coord, Coord) {
    let tr = AdmissibleTransform::translation(RatFunc::from_poly(r), RatFunc::zero(), RatFunc::zero());
    let (x, y) = tr.map_point(x, y);
    (m.apply_transform(&tr), x, y)
}

/// Component of the fibre of type `kodaira` at the finite place `p` met by
/// `(x, y)`; `m` must be integral and minimal at `p`.
pub fn identify_at_finite(
    m: &WeierstrassModel,
    kodaira: KodairaType,
    p: &Poly<Rational>,
    x: &Coord,
    y: &Coord,
    radicand: Option<BigInt>,
) -> Result<ComponentLabel, MordellWeilError> {
    if kodaira.component_group().is_trivial() {
        return Ok(ComponentLabel::Zero);
    }
    let ring = LocalRing::new(Place::Finite(p.clone()), radicand)?;
    let loc = Local { p: p.clone(), ring };
    if loc.v(x).is_some_and(|k| k < 0) {
        return Ok(ComponentLabel::Zero);
    }
    let [a1, a2, a3, a4, _] = m.lifted::<Quadratic>();
    let fy = &(&(&konst(2) * y) + &(&a1 * x)) + &a3;
    let fx = &(&(&a1 * y) - &(&konst(3) * &(x * x))) - &(&(&(&konst(2) * &a2) * x) + &a4);
    if !loc.red(&fy)?.is_zero() || !loc.red(&fx)?.is_zero() {
        return Ok(ComponentLabel::Zero);
    }
    use KodairaType::*;
    match kodaira {
        In(n) if n >= 2 => multiplicative(&loc, m, n, x, y),
        In(_) | I0 | II | IIStar => Err(loc.inconsistent("section through a non-regular point")),
        III | IIIStar => Ok(ComponentLabel::NonZeroSimple(1)),
        _ => {
            let tr = m.short_transform();
            let ms = m.apply_transform(&tr);
            let (xs, ys) = tr.map_point(x, y);
            match kodaira {
                IV => Ok(ComponentLabel::NonZeroSimple(sign_label(&loc.red(&loc.shift(&ys, 1))?, 1, 2))),
                IVStar => Ok(ComponentLabel::NonZeroSimple(sign_label(&loc.red(&loc.shift(&ys, 2))?, 1, 2))),
                I0Star => far_any(&loc, &ms, &xs),
                InStar(n) => star_chain(&loc, &ms, n, &xs, &ys),
                _ => unreachable!(),
            }
        }
    }
}

/// `I_n`: put the node at the origin with `f'` vanishing to high order there,
/// then read off `v(x)` and the branch `y/x`.
fn multiplicative(
    loc: &Local,
    m: &WeierstrassModel,
    n: u32,
    x: &Coord,
    y: &Coord,
) -> Result<ComponentLabel, MordellWeilError> {
    let tr = m.extended_transform();
    let me = m.apply_transform(&tr);
    let (xe, ye) = tr.map_point(x, y);
    let (b, c, d) = (me.a2().clone(), me.a4().clone(), me.a6().clone());
    let x0 = (&(&konst(9) * &d) - &(&b * &c))
        .checked_div(&(&(&konst(2) * &(&b * &b)) - &(&konst(6) * &c)))
        .ok_or_else(|| loc.inconsistent("degenerate node"))?;
    let prec = n + 1;
    let deriv = |r: &RatFunc<Rational>| &(&(&konst(3) * &(r * r)) + &(&(&konst(2) * &b) * r)) + &c;
    let second = |r: &RatFunc<Rational>| &(&konst(6) * r) + &(&konst(2) * &b);
    let mut r = truncate(&x0, &loc.p, 1);
    for _ in 0..64 {
        let rf = RatFunc::from_poly(r.clone());
        if loc.v(&deriv(&rf)).is_none_or(|k| k >= prec as i64) {
            break;
        }
        let step = deriv(&rf).checked_div(&second(&rf)).unwrap();
        r = truncate(&(&rf - &step), &loc.p, prec);
    }
    let (_, xt, yt) = translate(&me, &xe, &ye, r);
    let n = n as i64;
    let k = loc.v(&xt).unwrap_or(n);
    if k <= 0 {
        return Ok(ComponentLabel::Zero);
    }
    if 2 * k < n {
        let z = loc.red(&yt.checked_div(&xt).unwrap())?;
        Ok(ComponentLabel::Cyclic(sign_label(&z, k as u32, (n - k) as u32)))
    } else if n % 2 == 0 {
        Ok(ComponentLabel::Cyclic((n / 2) as u32))
    } else {
        Err(loc.inconsistent("section too close to the node"))
    }
}

/// Roots in κ of the monic quadratic `X² + eX + f`, if κ allows square roots.
fn quadratic_roots(e: &ResidueElt, f: &ResidueElt) -> Result<Vec<ResidueElt>, MordellWeilError> {
    let disc = &(e * e) - &(&e.from_rational_like(Rational::from_integer(4.into())) * f);
    let half = e.from_rational_like(Rational::new(1.into(), 2.into()));
    if disc.is_zero() {
        return Ok(vec![&(-e) * &half]);
    }
    let Some(s) = disc.sqrt()? else {
        return Ok(Vec::new());
    };
    Ok(vec![&(&(-e) + &s) * &half, &(&(-e) - &s) * &half])
}

/// `I_0*`: the section hits the root `x/π` of `X³ + (A/π²)X + B/π³`; roots
/// rational over κ are numbered in canonical order.
fn far_any(loc: &Local, ms: &WeierstrassModel, xs: &Coord) -> Result<ComponentLabel, MordellWeilError> {
    let a = loc.red(&loc.shift(ms.a4(), 2))?;
    let xr = loc.red(&loc.shift(xs, 1))?;
    // P(X) = (X - r)(X² + rX + r² + a).
    let r = xr.clone();
    let mut roots = quadratic_roots(&r, &(&(&r * &r) + &a))?;
    roots.push(r.clone());
    roots.sort_by(|u, v| u.canonical_cmp(v));
    roots.dedup();
    let idx = roots.iter().position(|u| u.canonical_cmp(&r) == Ordering::Equal).unwrap();
    Ok(ComponentLabel::FarAny(idx as u8 + 1))
}

/// `I_n*`, `n ≥ 1`: follow the chain of double components in Tate's algorithm.
fn star_chain(
    loc: &Local,
    ms: &WeierstrassModel,
    n: u32,
    xs: &Coord,
    ys: &Coord,
) -> Result<ComponentLabel, MordellWeilError> {
    // α = -3B₃/(2A₂) is the double root of X³ + A₂X + B₃.
    let a2 = loc.shift(ms.a4(), 2);
    let b3 = loc.shift(ms.a6(), 3);
    let alpha = (&konst(-3) * &b3).checked_div(&(&konst(2) * &a2)).unwrap();
    let xr = loc.red(&loc.shift(xs, 1))?;
    let alpha_red = loc.red(&alpha)?;
    if xr != alpha_red {
        return Ok(ComponentLabel::Near);
    }
    let shift = &truncate(&alpha, &loc.p, 1) * &loc.p;
    let (mut m, mut x, mut y) = translate(ms, xs, ys, shift);
    for k in 1..=n as i64 {
        let j = (k + 1) / 2;
        if k % 2 == 1 {
            let c = loc.red(&loc.shift(m.a6(), 2 * j + 2))?;
            if !c.is_zero() {
                if k != n as i64 {
                    return Err(loc.inconsistent("I_n* chain ended early"));
                }
                let yr = loc.red(&loc.shift(&y, j + 1))?;
                return Ok(ComponentLabel::Far(sign_label(&yr, 1, 2) as u8));
            }
        } else {
            let q2 = loc.shift(m.a2(), 1);
            let q1 = loc.shift(m.a4(), j + 2);
            let q0 = loc.shift(m.a6(), 2 * j + 3);
            let disc = &(&q1 * &q1) - &(&(&konst(4) * &q2) * &q0);
            if !loc.red(&disc)?.is_zero() {
                if k != n as i64 {
                    return Err(loc.inconsistent("I_n* chain ended early"));
                }
                let xk = loc.shift(&x, j + 1);
                let slope = &(&(&konst::<Quadratic>(2) * &RatFunc::lift(&q2)) * &xk) + &RatFunc::lift(&q1);
                return Ok(ComponentLabel::Far(sign_label(&loc.red(&slope)?, 1, 2) as u8));
            }
            let rho = (-&q1).checked_div(&(&konst(2) * &q2)).unwrap();
            let step = &truncate(&rho, &loc.p, 1) * &loc.p.pow(j as u32 + 1);
            (m, x, y) = translate(&m, &x, &y, step);
        }
    }
    Err(loc.inconsistent("I_n* chain did not terminate"))
}
