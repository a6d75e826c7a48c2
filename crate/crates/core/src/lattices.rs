//! Integral lattices: ADE root lattices, Smith normal form, discriminant
//! groups and discriminant forms. Root lattices are negative definite.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::funcfield::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("illegal rank {rank} for root lattice family {family}")]
    IllegalRank { family: char, rank: u32 },
    #[error("Gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("lattice is degenerate")]
    SingularLattice,
    #[error("discriminant forms need an even lattice")]
    OddLattice,
}

/// Label of an irreducible ADE root lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RootLatticeLabel {
    A(u32),
    D(u32),
    E(u32),
}

impl RootLatticeLabel {
    pub fn new(family: char, rank: u32) -> Result<Self, LatticeError> {
        let label = match family {
            'A' if rank >= 1 => RootLatticeLabel::A(rank),
            'D' if rank >= 4 => RootLatticeLabel::D(rank),
            'E' if (6..=8).contains(&rank) => RootLatticeLabel::E(rank),
            _ => return Err(LatticeError::IllegalRank { family, rank }),
        };
        Ok(label)
    }

    pub fn rank(&self) -> u32 {
        match *self {
            RootLatticeLabel::A(n) | RootLatticeLabel::D(n) | RootLatticeLabel::E(n) => n,
        }
    }
}

impl fmt::Display for RootLatticeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootLatticeLabel::A(n) => write!(f, "A{n}"),
            RootLatticeLabel::D(n) => write!(f, "D{n}"),
            RootLatticeLabel::E(n) => write!(f, "E{n}"),
        }
    }
}

/// Finite abelian group in invariant-factor form `ℤ/d₁ × … × ℤ/d_k`, `d₁ | d₂ | …`, all `dᵢ > 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AbelianGroup {
    invariants: Vec<u64>,
}

pub type DiscGroup = AbelianGroup;

fn prime_powers(mut n: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push((p, q));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, n));
    }
    out
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { invariants: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders(&[n])
    }

    /// `ℤ/n₁ × ℤ/n₂ × …` in any order, rewritten in invariant-factor form.
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        // Collect prime-power parts per prime, then stack the largest ones.
        let mut by_prime: std::collections::BTreeMap<u64, Vec<u64>> = Default::default();
        for &n in orders {
            assert!(n > 0, "cyclic group of order zero");
            for (p, q) in prime_powers(n) {
                by_prime.entry(p).or_default().push(q);
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut inv = vec![1u64; len];
        for parts in by_prime.values_mut() {
            parts.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in parts.iter().enumerate() {
                inv[len - 1 - i] *= q;
            }
        }
        AbelianGroup { invariants: inv }
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.last().copied().unwrap_or(1)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants.is_empty()
    }

    /// Number of invariant factors divisible by `p`.
    pub fn length_p(&self, p: u64) -> usize {
        self.invariants.iter().filter(|d| *d % p == 0).count()
    }

    /// Minimal number of generators.
    pub fn length(&self) -> usize {
        self.invariants.len()
    }

    pub fn product(&self, other: &Self) -> Self {
        let mut all = self.invariants.clone();
        all.extend(&other.invariants);
        Self::from_cyclic_orders(&all)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariants.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.invariants.iter().map(|d| format!("Z/{d}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

/// Integral lattice given by a symmetric Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: Vec<Vec<i64>>,
}

impl Lattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) || (0..n).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(Lattice { gram })
    }

    pub fn empty() -> Self {
        Lattice { gram: Vec::new() }
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        let (a, b) = (self.rank(), other.rank());
        let mut g = vec![vec![0i64; a + b]; a + b];
        for i in 0..a {
            g[i][..a].copy_from_slice(&self.gram[i]);
        }
        for i in 0..b {
            g[a + i][a..].copy_from_slice(&other.gram[i]);
        }
        Lattice { gram: g }
    }

    fn big(&self) -> Vec<Vec<BigInt>> {
        self.gram.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.big())
    }
}

pub fn root_gram(label: RootLatticeLabel) -> Result<Lattice, LatticeError> {
    let label = match label {
        RootLatticeLabel::A(n) => RootLatticeLabel::new('A', n)?,
        RootLatticeLabel::D(n) => RootLatticeLabel::new('D', n)?,
        RootLatticeLabel::E(n) => RootLatticeLabel::new('E', n)?,
    };
    let n = label.rank() as usize;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    match label {
        RootLatticeLabel::A(_) => edges.extend((1..n).map(|i| (i - 1, i))),
        RootLatticeLabel::D(_) => {
            edges.extend((1..n - 1).map(|i| (i - 1, i)));
            edges.push((n - 3, n - 1));
        }
        RootLatticeLabel::E(_) => {
            // Bourbaki: 1-3-4-5-…-n with 2 attached to 4.
            edges.push((0, 2));
            edges.push((1, 3));
            edges.extend((3..n).map(|i| (i - 1, i)));
        }
    }
    let mut g = vec![vec![0i64; n]; n];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    for (i, j) in edges {
        g[i][j] = 1;
        g[j][i] = 1;
    }
    Ok(Lattice { gram: g })
}

pub fn root_det(label: RootLatticeLabel) -> Result<BigInt, LatticeError> {
    Ok(root_gram(label)?.determinant())
}

/// Fraction-free (Bareiss) determinant.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// How the Smith reduction chooses its pivots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PivotStrategy {
    /// Smallest absolute value in the whole remaining block.
    #[default]
    MinAbsolute,
    /// Smallest absolute value in the current row and column only.
    RowColumn,
}

/// `U·M·V = D` with `U`, `V` unimodular and `D` diagonal, `d₁ | d₂ | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smith {
    pub u: Vec<Vec<BigInt>>,
    pub diagonal: Vec<BigInt>,
    pub v: Vec<Vec<BigInt>>,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn smith_normal_form(m: &[Vec<BigInt>], strategy: PivotStrategy) -> Smith {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let row_sub = |a: &mut Vec<Vec<BigInt>>, u: &mut Vec<Vec<BigInt>>, i: usize, k: usize, q: &BigInt| {
        for c in 0..a[i].len() {
            let t = q * &a[k][c];
            a[i][c] -= t;
        }
        for c in 0..u[i].len() {
            let t = q * &u[k][c];
            u[i][c] -= t;
        }
    };
    let col_sub = |a: &mut Vec<Vec<BigInt>>, v: &mut Vec<Vec<BigInt>>, j: usize, k: usize, q: &BigInt| {
        for row in a.iter_mut() {
            let t = q * &row[k];
            row[j] -= t;
        }
        for row in v.iter_mut() {
            let t = q * &row[k];
            row[j] -= t;
        }
    };

    for k in 0..rows.min(cols) {
        loop {
            let candidates: Vec<(usize, usize)> = match strategy {
                PivotStrategy::MinAbsolute => (k..rows).flat_map(|i| (k..cols).map(move |j| (i, j))).collect(),
                PivotStrategy::RowColumn => {
                    let mut c: Vec<(usize, usize)> = (k..rows).map(|i| (i, k)).chain((k + 1..cols).map(|j| (k, j))).collect();
                    if c.iter().all(|&(i, j)| a[i][j].is_zero()) {
                        c = (k..rows).flat_map(|i| (k..cols).map(move |j| (i, j))).collect();
                    }
                    c
                }
            };
            let Some((pi, pj)) = candidates
                .into_iter()
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by(|&(i1, j1), &(i2, j2)| a[i1][j1].abs().cmp(&a[i2][j2].abs()))
            else {
                break;
            };
            a.swap(k, pi);
            u.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            for row in v.iter_mut() {
                row.swap(k, pj);
            }
            let mut clean = true;
            for i in k + 1..rows {
                if !a[i][k].is_zero() {
                    let q = a[i][k].div_floor(&a[k][k]);
                    row_sub(&mut a, &mut u, i, k, &q);
                    clean &= a[i][k].is_zero();
                }
            }
            for j in k + 1..cols {
                if !a[k][j].is_zero() {
                    let q = a[k][j].div_floor(&a[k][k]);
                    col_sub(&mut a, &mut v, j, k, &q);
                    clean &= a[k][j].is_zero();
                }
            }
            if !clean {
                continue;
            }
            let bad = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !a[i][j].is_multiple_of(&a[k][k])));
            match bad {
                Some(i) => {
                    // Add row i to row k to expose the non-divisible entry.
                    row_sub(&mut a, &mut u, k, i, &BigInt::from(-1));
                }
                None => break,
            }
        }
        if a[k][k].is_negative() {
            for c in 0..cols {
                a[k][c] = -&a[k][c];
            }
            for c in 0..rows {
                u[k][c] = -&u[k][c];
            }
        }
    }
    let diagonal = (0..rows.min(cols)).map(|i| a[i][i].clone()).collect();
    Smith { u, diagonal, v }
}

pub fn disc_group(l: &Lattice) -> Result<DiscGroup, LatticeError> {
    let s = smith_normal_form(&l.big(), PivotStrategy::default());
    if s.diagonal.iter().any(|d| d.is_zero()) {
        return Err(LatticeError::SingularLattice);
    }
    let orders: Vec<u64> = s
        .diagonal
        .iter()
        .map(|d| d.to_u64().expect("invariant factor fits in u64"))
        .collect();
    Ok(AbelianGroup::from_cyclic_orders(&orders))
}

/// Discriminant form on Smith generators: `q` mod 2 on each generator and
/// the bilinear linkings mod 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiscForm {
    pub orders: Vec<u64>,
    pub values: Vec<Rational>,
    pub linkings: Vec<Vec<Rational>>,
}

fn mod_rational(q: Rational, m: i64) -> Rational {
    let m = Rational::from_integer(BigInt::from(m));
    let k = (q.clone() / m.clone()).floor();
    q - k * m
}

impl DiscForm {
    pub fn group(&self) -> DiscGroup {
        AbelianGroup::from_cyclic_orders(&self.orders)
    }

    /// Sorted list of `q(x)` over every element `x` of the group.
    pub fn value_multiset(&self) -> Vec<Rational> {
        let n = self.orders.len();
        let mut out = Vec::new();
        let mut coords = vec![0u64; n];
        loop {
            let mut q = Rational::zero();
            for i in 0..n {
                let ci = Rational::from_integer(BigInt::from(coords[i]));
                q += ci.clone() * ci.clone() * self.values[i].clone();
                for j in i + 1..n {
                    let cj = Rational::from_integer(BigInt::from(coords[j]));
                    q += Rational::from_integer(BigInt::from(2)) * ci.clone() * cj * self.linkings[i][j].clone();
                }
            }
            out.push(mod_rational(q, 2));
            let mut i = 0;
            while i < n {
                coords[i] += 1;
                if coords[i] < self.orders[i] {
                    break;
                }
                coords[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        out.sort();
        out
    }
}

pub fn disc_form(l: &Lattice) -> Result<DiscForm, LatticeError> {
    disc_form_with(l, PivotStrategy::default())
}

pub fn disc_form_with(l: &Lattice, strategy: PivotStrategy) -> Result<DiscForm, LatticeError> {
    if !l.is_even() {
        return Err(LatticeError::OddLattice);
    }
    let g = l.big();
    let s = smith_normal_form(&g, strategy);
    if s.diagonal.iter().any(|d| d.is_zero()) {
        return Err(LatticeError::SingularLattice);
    }
    let n = l.rank();
    // Generators V·eᵢ/dᵢ of the dual modulo the lattice, for dᵢ > 1.
    let gens: Vec<(Vec<BigInt>, BigInt)> = (0..n)
        .filter(|&i| !s.diagonal[i].is_one())
        .map(|i| ((0..n).map(|r| s.v[r][i].clone()).collect(), s.diagonal[i].clone()))
        .collect();
    let pair = |x: &[BigInt], y: &[BigInt]| -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..n {
            for j in 0..n {
                acc += &x[i] * &g[i][j] * &y[j];
            }
        }
        acc
    };
    let k = gens.len();
    let mut values = Vec::with_capacity(k);
    let mut linkings = vec![vec![Rational::zero(); k]; k];
    for i in 0..k {
        let (vi, di) = &gens[i];
        values.push(mod_rational(Rational::new(pair(vi, vi), di * di), 2));
        for j in 0..k {
            let (vj, dj) = &gens[j];
            linkings[i][j] = mod_rational(Rational::new(pair(vi, vj), di * dj), 1);
        }
    }
    let orders = gens.iter().map(|(_, d)| d.to_u64().expect("order fits in u64")).collect();
    Ok(DiscForm { orders, values, linkings })
}

pub fn length_p(g: &DiscGroup, p: u64) -> usize {
    g.length_p(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::ratio;

    fn big(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        (0..a.len())
            .map(|i| {
                (0..b[0].len())
                    .map(|j| (0..b.len()).map(|k| &a[i][k] * &b[k][j]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn root_determinants() {
        assert_eq!(root_det(RootLatticeLabel::A(1)).unwrap(), BigInt::from(-2));
        assert_eq!(root_det(RootLatticeLabel::E(8)).unwrap(), BigInt::from(1));
        assert_eq!(root_det(RootLatticeLabel::D(5)).unwrap(), BigInt::from(-4));
        assert_eq!(root_det(RootLatticeLabel::E(6)).unwrap(), BigInt::from(3));
        assert_eq!(root_det(RootLatticeLabel::E(7)).unwrap(), BigInt::from(-2));
        assert!(RootLatticeLabel::new('D', 3).is_err());
        assert!(RootLatticeLabel::new('E', 9).is_err());
    }

    #[test]
    fn smith_reconstructs() {
        let m = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        for strategy in [PivotStrategy::MinAbsolute, PivotStrategy::RowColumn] {
            let s = smith_normal_form(&m, strategy);
            assert_eq!(s.diagonal, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
            let d = mat_mul(&mat_mul(&s.u, &m), &s.v);
            for (i, row) in d.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    let want = if i == j { s.diagonal[i].clone() } else { BigInt::zero() };
                    assert_eq!(x, &want);
                }
            }
            assert!(determinant(&s.u).abs().is_one() && determinant(&s.v).abs().is_one());
        }
    }

    #[test]
    fn groups_and_forms() {
        let a2 = root_gram(RootLatticeLabel::A(2)).unwrap();
        assert_eq!(disc_group(&a2).unwrap(), AbelianGroup::cyclic(3));
        assert!(disc_group(&root_gram(RootLatticeLabel::E(8)).unwrap()).unwrap().is_trivial());
        assert_eq!(disc_group(&root_gram(RootLatticeLabel::D(4)).unwrap()).unwrap().invariants(), &[2, 2]);
        let a1 = disc_form(&root_gram(RootLatticeLabel::A(1)).unwrap()).unwrap();
        assert_eq!(a1.values, vec![ratio(3, 2)]); // −1/2 mod 2
        let e7 = disc_form(&root_gram(RootLatticeLabel::E(7)).unwrap()).unwrap();
        assert_eq!(e7.values, vec![ratio(1, 2)]); // −3/2 mod 2
        let g = AbelianGroup::from_cyclic_orders(&[2, 2, 4]);
        assert_eq!(length_p(&g, 2), 3);
        assert_eq!(AbelianGroup::from_cyclic_orders(&[6, 4]).invariants(), &[2, 12]);
        assert_eq!(AbelianGroup::from_cyclic_orders(&[1, 1]), AbelianGroup::trivial());
        assert!(disc_form(&Lattice::new(vec![vec![1]]).unwrap()).is_err());
    }
}
