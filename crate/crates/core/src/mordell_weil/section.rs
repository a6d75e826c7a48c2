use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::funcfield::{Field, Quadratic, RatFunc, Rational};
use crate::weierstrass::WeierstrassModel;

use super::MordellWeilError;

pub type Coord = RatFunc<Quadratic>;

/// A point of the generic fibre over ℚ(t), or over ℚ(√D)(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Section {
    Zero,
    Finite { x: Coord, y: Coord },
}

impl Section {
    pub fn new(x: Coord, y: Coord) -> Self {
        Section::Finite { x, y }
    }

    pub fn rational(x: RatFunc<Rational>, y: RatFunc<Rational>) -> Self {
        Section::Finite { x: RatFunc::lift(&x), y: RatFunc::lift(&y) }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Section::Zero)
    }

    pub fn coords(&self) -> Option<(&Coord, &Coord)> {
        match self {
            Section::Zero => None,
            Section::Finite { x, y } => Some((x, y)),
        }
    }

    /// The quadratic field the coordinates live in, if any.
    pub fn radicand(&self) -> Option<BigInt> {
        let (x, y) = self.coords()?;
        [x, y]
            .into_iter()
            .flat_map(|f| f.num().coeffs().iter().chain(f.den().coeffs()))
            .find_map(|c| c.radicand().filter(|_| !c.im().is_zero()))
    }

    pub fn map_coords(&self, f: impl Fn(&Coord, &Coord) -> (Coord, Coord)) -> Section {
        match self {
            Section::Zero => Section::Zero,
            Section::Finite { x, y } => {
                let (x, y) = f(x, y);
                Section::Finite { x, y }
            }
        }
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Section::Zero => f.write_str("O"),
            Section::Finite { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

fn k(n: i64) -> Coord {
    RatFunc::from_rational(Rational::from_integer(n.into()))
}

/// Group law on the generic fibre of a fixed model.
pub struct GroupLaw<'a> {
    model: &'a WeierstrassModel,
    a: [Coord; 5],
}

impl<'a> GroupLaw<'a> {
    pub fn new(model: &'a WeierstrassModel) -> Self {
        GroupLaw { model, a: model.lifted() }
    }

    pub fn model(&self) -> &WeierstrassModel {
        self.model
    }

    pub fn contains(&self, p: &Section) -> bool {
        match p {
            Section::Zero => true,
            Section::Finite { x, y } => self.model.equation_at(x, y).is_zero(),
        }
    }

    pub fn check(&self, p: &Section) -> Result<(), MordellWeilError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(MordellWeilError::OffCurve(p.to_string()))
        }
    }

    pub fn neg(&self, p: &Section) -> Section {
        let [a1, _, a3, _, _] = &self.a;
        p.map_coords(|x, y| (x.clone(), &(&(-y) - &(a1 * x)) - a3))
    }

    pub fn add(&self, p: &Section, q: &Section) -> Result<Section, MordellWeilError> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &Section, q: &Section) -> Section {
        let [a1, a2, a3, a4, a6] = &self.a;
        let (x1, y1, x2, y2) = match (p, q) {
            (Section::Zero, _) => return q.clone(),
            (_, Section::Zero) => return p.clone(),
            (Section::Finite { x: x1, y: y1 }, Section::Finite { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let (lambda, nu) = if x1 != x2 {
            let dx = x2 - x1;
            let lambda = (y2 - y1).checked_div(&dx).unwrap();
            let nu = (&(y1 * x2) - &(y2 * x1)).checked_div(&dx).unwrap();
            (lambda, nu)
        } else {
            let denom = &(&(&k(2) * y1) + &(a1 * x1)) + a3;
            if denom.is_zero() {
                return Section::Zero;
            }
            if y1 != y2 {
                // x1 = x2 with y2 the other root: Q = -P.
                return Section::Zero;
            }
            let num = &(&(&(&k(3) * &(x1 * x1)) + &(&(&k(2) * a2) * x1)) + a4) - &(a1 * y1);
            let num_nu = &(&(&(-&(&(x1 * x1) * x1)) + &(a4 * x1)) + &(&k(2) * a6)) - &(a3 * y1);
            (num.checked_div(&denom).unwrap(), num_nu.checked_div(&denom).unwrap())
        };
        let x3 = &(&(&(&(&lambda * &lambda) + &(a1 * &lambda)) - a2) - x1) - x2;
        let y3 = &(&(-&(&(&lambda + a1) * &x3)) - &nu) - a3;
        Section::Finite { x: x3, y: y3 }
    }

    pub fn sub(&self, p: &Section, q: &Section) -> Result<Section, MordellWeilError> {
        self.add(p, &self.neg(q))
    }

    /// `n·P` by double-and-add.
    pub fn mul(&self, p: &Section, n: i64) -> Result<Section, MordellWeilError> {
        self.check(p)?;
        let base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Section::Zero;
        let mut pow = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.add_unchecked(&acc, &pow);
            }
            e >>= 1;
            if e > 0 {
                pow = self.add_unchecked(&pow, &pow);
            }
        }
        Ok(acc)
    }
}
