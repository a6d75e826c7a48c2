//! Factorisation over ℚ: squarefree decomposition, Berlekamp modulo a small
//! prime, Hensel lifting and Zassenhaus recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::Rational;
use super::poly::Poly;
use super::FuncFieldError;

/// `unit · Π factor^multiplicity`, factors monic irreducible and sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Rational,
    pub factors: Vec<(Poly<Rational>, u32)>,
}

impl Factorization {
    pub fn expand(&self) -> Poly<Rational> {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (p, e)| &acc * &p.pow(*e))
    }
}

pub fn factorize(f: &Poly<Rational>) -> Result<Factorization, FuncFieldError> {
    let unit = f.leading().cloned().ok_or(FuncFieldError::ZeroPolynomial)?;
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(&f.monic()) {
        for q in factor_squarefree(&part) {
            factors.push((q, mult));
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));
    Ok(Factorization { unit, factors })
}

/// Yun's algorithm on a monic polynomial.
pub fn squarefree_decomposition(f: &Poly<Rational>) -> Vec<(Poly<Rational>, u32)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.derivative();
    let mut a = f.gcd(&df);
    let mut b = f.div_rem(&a).0;
    let mut c = df.div_rem(&a).0;
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while !b.is_constant() {
        a = b.gcd(&d);
        b = b.div_rem(&a).0;
        c = d.div_rem(&a).0;
        d = &c - &b.derivative();
        if !a.is_constant() {
            out.push((a.monic(), i));
        }
        i += 1;
    }
    out
}

type ZPoly = Vec<BigInt>;

fn trim(v: &mut ZPoly) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Primitive integer multiple of a rational polynomial, positive leading term.
fn primitive_integer(f: &Poly<Rational>) -> ZPoly {
    let l = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut v: ZPoly = f.coeffs().iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    for c in v.iter_mut() {
        *c = &*c / &g;
    }
    if v.last().is_some_and(|c| c.is_negative()) {
        for c in v.iter_mut() {
            *c = -&*c;
        }
    }
    v
}

fn to_monic_rational(v: &ZPoly) -> Poly<Rational> {
    Poly::from_coeffs(v.iter().map(|c| Rational::from_integer(c.clone())).collect()).monic()
}

fn factor_squarefree(f: &Poly<Rational>) -> Vec<Poly<Rational>> {
    let deg = f.degree().unwrap_or(0);
    if deg <= 1 {
        return vec![f.monic()];
    }
    let g = primitive_integer(f);
    zassenhaus(&g).iter().map(to_monic_rational).collect()
}

// ---- arithmetic in F_p[x] with small p ----

fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_inv(a: u64, p: u64) -> u64 {
    let (mut t, mut nt, mut r, mut nr) = (0i64, 1i64, p as i64, (a % p) as i64);
    while nr != 0 {
        let q = r / nr;
        (t, nt) = (nt, t - q * nt);
        (r, nr) = (nr, r - q * nr);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(p as i64) as u64
}

fn fp_from_z(v: &ZPoly, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut out: Vec<u64> = v.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap()).collect();
    fp_trim(&mut out);
    out
}

fn fp_monic(v: &[u64], p: u64) -> Vec<u64> {
    let inv = fp_inv(*v.last().unwrap(), p);
    v.iter().map(|c| c * inv % p).collect()
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut v: Vec<u64> = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    fp_trim(&mut v);
    v
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            v[i + j] = (v[i + j] + x * y) % p;
        }
    }
    fp_trim(&mut v);
    v
}

fn fp_divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = b.len() - 1;
    let inv = fp_inv(b[db], p);
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - c * bj % p) % p;
        }
        q[k] = c;
    }
    r.truncate(db);
    fp_trim(&mut r);
    fp_trim(&mut q);
    (q, r)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = fp_divrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    if a.is_empty() {
        a
    } else {
        fp_monic(&a, p)
    }
}

/// `(g, s, t)` with `s a + t b = g` monic.
fn fp_ext_gcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = fp_divrem(&r0, &r1, p);
        r0 = std::mem::replace(&mut r1, r);
        let s = fp_sub(&s0, &fp_mul(&q, &s1, p), p);
        s0 = std::mem::replace(&mut s1, s);
        let t = fp_sub(&t0, &fp_mul(&q, &t1, p), p);
        t0 = std::mem::replace(&mut t1, t);
    }
    let inv = fp_inv(*r0.last().unwrap(), p);
    let sc = |v: &[u64]| {
        let mut w: Vec<u64> = v.iter().map(|c| c * inv % p).collect();
        fp_trim(&mut w);
        w
    };
    (sc(&r0), sc(&s0), sc(&t0))
}

fn fp_derivative(a: &[u64], p: u64) -> Vec<u64> {
    let mut v: Vec<u64> = a.iter().enumerate().skip(1).map(|(i, c)| (i as u64 % p) * c % p).collect();
    fp_trim(&mut v);
    v
}

/// Berlekamp factorisation of a monic squarefree polynomial over F_p.
fn berlekamp(f: &[u64], p: u64) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    // Rows: x^(i p) mod f.
    let xp = {
        let mut acc = vec![1u64];
        let mut base = vec![0u64, 1];
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_divrem(&fp_mul(&acc, &base, p), f, p).1;
            }
            base = fp_divrem(&fp_mul(&base, &base, p), f, p).1;
            e >>= 1;
        }
        acc
    };
    let mut rows = vec![vec![0u64; n]; n];
    let mut cur = vec![1u64];
    for row in rows.iter_mut() {
        for (j, c) in cur.iter().enumerate() {
            row[j] = *c;
        }
        cur = fp_divrem(&fp_mul(&cur, &xp, p), f, p).1;
    }
    // Kernel of (Q - I)^T: solve M v = 0 with M[j][i] = Q[i][j] - δ_ij.
    let mut m = vec![vec![0u64; n]; n];
    for i in 0..n {
        for j in 0..n {
            m[j][i] = (rows[i][j] + if i == j { p - 1 } else { 0 }) % p;
        }
    }
    let kernel = fp_kernel(m, p);
    let r = kernel.len();
    let mut factors = vec![f.to_vec()];
    for v in kernel.iter() {
        if factors.len() == r {
            break;
        }
        let mut vpoly = v.clone();
        fp_trim(&mut vpoly);
        if vpoly.len() <= 1 {
            continue;
        }
        for s in 0..p {
            if factors.len() == r {
                break;
            }
            let shifted = fp_sub(&vpoly, &[s], p);
            let mut next = Vec::new();
            for u in factors.drain(..) {
                if u.len() <= 2 {
                    next.push(u);
                    continue;
                }
                let g = fp_gcd(&u, &shifted, p);
                if g.len() > 1 && g.len() < u.len() {
                    let h = fp_divrem(&u, &g, p).0;
                    next.push(g);
                    next.push(fp_monic(&h, p));
                } else {
                    next.push(u);
                }
            }
            factors = next;
        }
    }
    factors
}

fn fp_kernel(mut m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let mut pivot_col = vec![usize::MAX; n];
    let mut row = 0;
    for col in 0..n {
        let Some(pr) = (row..n).find(|&r| m[r][col] != 0) else { continue };
        m.swap(row, pr);
        let inv = fp_inv(m[row][col], p);
        for c in 0..n {
            m[row][c] = m[row][c] * inv % p;
        }
        for r in 0..n {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..n {
                    m[r][c] = (m[r][c] + p - f * m[row][c] % p) % p;
                }
            }
        }
        pivot_col[row] = col;
        row += 1;
    }
    let pivots: Vec<usize> = pivot_col[..row].to_vec();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = (p - m[r][free]) % p;
        }
        basis.push(v);
    }
    basis
}

// ---- arithmetic in (Z / M)[x] ----

fn zm_reduce(v: &ZPoly, m: &BigInt) -> ZPoly {
    let mut out: ZPoly = v.iter().map(|c| c.mod_floor(m)).collect();
    trim(&mut out);
    out
}

fn z_mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    trim(&mut v);
    v
}

fn z_sub(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    let mut v: ZPoly = (0..n).map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).collect();
    trim(&mut v);
    v
}

fn to_z(v: &[u64]) -> ZPoly {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// Lifts `f ≡ g h (mod p)` to modulus `p^k`; `f` monic modulo `p^k`, `g`, `h` monic.
fn hensel_pair(f: &ZPoly, g: &[u64], h: &[u64], p: u64, k: u32) -> (ZPoly, ZPoly) {
    let (one, _, t) = fp_ext_gcd(g, h, p);
    debug_assert_eq!(one, vec![1]);
    let pb = BigInt::from(p);
    let (mut gz, mut hz) = (to_z(g), to_z(h));
    let mut pj = pb.clone();
    for _ in 1..k {
        let next = &pj * &pb;
        let err = zm_reduce(&z_sub(f, &z_mul(&gz, &hz)), &next);
        let e: ZPoly = err.iter().map(|c| c / &pj).collect();
        let e = fp_from_z(&e, p);
        // δg = t e mod g, δh = (e - δg h) / g, both over F_p.
        let dg = fp_divrem(&fp_mul(&t, &e, p), g, p).1;
        let dh = fp_divrem(&fp_sub(&e, &fp_mul(&dg, h, p), p), g, p).0;
        gz = add_scaled(&gz, &dg, &pj);
        hz = add_scaled(&hz, &dh, &pj);
        pj = next;
    }
    (zm_reduce(&gz, &pj), zm_reduce(&hz, &pj))
}

fn add_scaled(a: &[BigInt], d: &[u64], scale: &BigInt) -> ZPoly {
    let n = a.len().max(d.len());
    let zero = BigInt::zero();
    let mut v: ZPoly = (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) + scale * BigInt::from(d.get(i).copied().unwrap_or(0)))
        .collect();
    trim(&mut v);
    v
}

fn symmetric(v: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    let mut out: ZPoly = v
        .iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect();
    trim(&mut out);
    out
}

fn z_primitive(v: &ZPoly) -> ZPoly {
    let g = v.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let mut out: ZPoly = v.iter().map(|c| c / &g).collect();
    if out.last().is_some_and(|c| c.is_negative()) {
        out.iter_mut().for_each(|c| *c = -&*c);
    }
    out
}

/// Exact quotient over ℤ, if `b` divides `a`.
fn z_exact_div(a: &ZPoly, b: &ZPoly) -> Option<ZPoly> {
    let db = b.len() - 1;
    let lb = &b[db];
    let mut r = a.clone();
    if r.len() < b.len() {
        return None;
    }
    let mut q = vec![BigInt::zero(); r.len() - db];
    for k in (0..q.len()).rev() {
        let (c, rem) = r[k + db].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    r.iter().all(|c| c.is_zero()).then_some(q)
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..2000).filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Irreducible factors of a primitive squarefree integer polynomial.
fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.len() - 1;
    let lc = f[n].clone();
    // Pick, among a few good primes, one giving the fewest modular factors.
    let mut best: Option<(u64, Vec<Vec<u64>>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp = fp_from_z(f, p);
        if fp.len() != f.len() || fp_gcd(&fp, &fp_derivative(&fp, p), p).len() > 1 {
            continue;
        }
        let facs = berlekamp(&fp_monic(&fp, p), p);
        if facs.len() == 1 {
            return vec![f.clone()];
        }
        if best.as_ref().is_none_or(|(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 5 {
            break;
        }
    }
    let (p, mut modular) = best.expect("a good prime exists");
    modular.sort();

    // Coefficient bound for factors of f, scaled by lc.
    let norm2: BigInt = f.iter().map(|c| c * c).sum::<BigInt>().sqrt() + 1;
    let bound = BigInt::from(2) * lc.abs() * (BigInt::one() << n) * norm2;
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut pk = pb.clone();
    while pk <= bound {
        pk *= &pb;
        k += 1;
    }

    // Multifactor lifting by peeling one factor at a time.
    let lc_inv = lc.modpow(&(&pk - &pk / &pb - 1), &pk); // lc^(φ(p^k)-1)
    let mut target = zm_reduce(&f.iter().map(|c| c * &lc_inv).collect(), &pk);
    let mut lifted: Vec<ZPoly> = Vec::new();
    for i in 0..modular.len() {
        if i + 1 == modular.len() {
            lifted.push(target.clone());
            break;
        }
        let g = &modular[i];
        let h = modular[i + 1..]
            .iter()
            .fold(vec![1u64], |acc, q| fp_mul(&acc, q, p));
        let (gz, hz) = hensel_pair(&target, g, &h, p, k);
        lifted.push(gz);
        target = hz;
    }

    // Recombination.
    let mut remaining = f.clone();
    let mut pool = lifted;
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= pool.len() {
        let mut hit = None;
        for subset in combinations(pool.len(), size) {
            let lcr = remaining.last().unwrap().clone();
            let prod = subset
                .iter()
                .fold(vec![lcr.clone()], |acc, &i| zm_reduce(&z_mul(&acc, &pool[i]), &pk));
            let cand = z_primitive(&symmetric(&prod, &pk));
            if let Some(q) = z_exact_div(&remaining, &cand) {
                hit = Some((subset, cand, q));
                break;
            }
        }
        match hit {
            Some((subset, cand, q)) => {
                found.push(cand);
                remaining = z_primitive(&q);
                pool = pool
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, v)| v)
                    .collect();
            }
            None => size += 1,
        }
    }
    if remaining.len() > 1 {
        found.push(remaining);
    }
    found
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcfield::field::rat;

    fn p(v: &[i64]) -> Poly<Rational> {
        Poly::from_coeffs(v.iter().map(|&c| rat(c)).collect())
    }

    #[test]
    fn discriminant_of_normal_form() {
        let f = &p(&[0, 0, 1]) * &p(&[-1728, 1]).pow(9);
        let fac = factorize(&f).unwrap();
        assert_eq!(fac.unit, rat(1));
        assert_eq!(fac.factors, vec![(p(&[0, 1]), 2), (p(&[-1728, 1]), 9)]);
    }

    #[test]
    fn small_cases() {
        let fac = factorize(&p(&[1, 0, 1])).unwrap();
        assert_eq!(fac.factors, vec![(p(&[1, 0, 1]), 1)]);
        let fac = factorize(&p(&[-4, 0, 4])).unwrap();
        assert_eq!(fac.unit, rat(4));
        assert_eq!(fac.factors, vec![(p(&[1, 1]), 1), (p(&[-1, 1]), 1)]);
        assert!(factorize(&Poly::zero()).is_err());
    }

    #[test]
    fn swinnerton_dyer_like_and_cyclotomic() {
        // t^12 + 1 = (t^4 + 1)(t^8 - t^4 + 1)
        let mut v = vec![0i64; 13];
        v[0] = 1;
        v[12] = 1;
        let fac = factorize(&p(&v)).unwrap();
        assert_eq!(fac.factors.len(), 2);
        assert_eq!(fac.expand(), p(&v));
        // x^4 - 10x^2 + 1 is irreducible but splits modulo every prime.
        let fac = factorize(&p(&[1, 0, -10, 0, 1])).unwrap();
        assert_eq!(fac.factors.len(), 1);
        // t^8 - 1 has four cyclotomic factors.
        let fac = factorize(&p(&[-1, 0, 0, 0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(fac.factors.len(), 4);
    }

    #[test]
    fn non_monic_recombination() {
        // (2t^2 + 3)(3t^3 - t + 5)(6t - 1)
        let f = &(&p(&[3, 0, 2]) * &p(&[5, -1, 0, 3])) * &p(&[-1, 6]);
        let fac = factorize(&f).unwrap();
        assert_eq!(fac.factors.len(), 3);
        assert_eq!(fac.expand(), f);
    }
}
