//! Monodromy of the j-map of a semi-stable surface over ℙ¹.
//!
//! A j-map of degree `n = 12χ` is determined by permutations `σ₀, σ₁, σ∞, τ₁, …, τ_r`
//! in `S_n` with product one generating a transitive group. Above 0 and 1 the
//! ramification is `3` and `2` everywhere, above ∞ it is the configuration, and the
//! remaining branch points are simple, so Riemann-Hurwitz forces `r = s − 2χ − 2`.

use std::fmt;

use super::{ConfigError, Configuration};

pub const MAX_DESSIN_DEGREE_VAR: &str = "ELLSURF_MAX_DESSIN_DEGREE";
const DEFAULT_MAX_DEGREE: u32 = 12;

/// Largest permutation degree the search accepts.
pub fn max_dessin_degree() -> u32 {
    std::env::var(MAX_DESSIN_DEGREE_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_DEGREE)
}

/// Permutation of `{0, …, n−1}` in image notation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for start in 0..self.0.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push(i);
                i = self.0[i];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut p: Vec<usize> = (0..n).collect();
        p.swap(a, b);
        Permutation(p)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<Vec<usize>> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let items: Vec<String> = c.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "({})", items.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonodromyTuple {
    pub sigma0: Permutation,
    pub sigma1: Permutation,
    pub sigma_inf: Permutation,
    pub taus: Vec<Permutation>,
}

impl MonodromyTuple {
    /// Checks product, transitivity and the cycle types against a configuration.
    pub fn audit(&self, c: &Configuration, chi: u32) -> bool {
        let n = 12 * chi as usize;
        let Ok(mut ns) = c.multiplicities() else {
            return false;
        };
        ns.sort_unstable_by(|a, b| b.cmp(a));
        let mut product = self.sigma0.compose(&self.sigma1).compose(&self.sigma_inf);
        for t in &self.taus {
            product = product.compose(t);
        }
        let all = |p: &Permutation, len: usize, count: usize| p.cycle_type() == vec![len; count];
        product == Permutation::identity(n)
            && all(&self.sigma0, 3, 4 * chi as usize)
            && all(&self.sigma1, 2, 6 * chi as usize)
            && self.sigma_inf.cycle_type() == ns.iter().map(|&k| k as usize).collect::<Vec<_>>()
            && self.taus.iter().all(|t| t.cycle_type().iter().filter(|&&l| l > 1).eq([2].iter()))
            && transitive(n, [&self.sigma1, &self.sigma_inf].into_iter().chain(&self.taus))
    }
}

fn transitive<'a>(n: usize, gens: impl IntoIterator<Item = &'a Permutation>) -> bool {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for g in gens {
        for i in 0..n {
            let (a, b) = (find(&mut parent, i), find(&mut parent, g.apply(i)));
            parent[a] = b;
        }
    }
    let root = find(&mut parent, 0);
    (0..n).all(|i| find(&mut parent, i) == root)
}

struct Search {
    n: usize,
    target_cycles: usize,
    sigma_inf: Permutation,
    /// Number of simple branch points besides 0, 1, ∞.
    extra: usize,
}

impl Search {
    /// Pairs the free points of a partial fixed-point-free involution.
    fn involutions(&self, partner: &mut Vec<Option<usize>>) -> Option<MonodromyTuple> {
        let Some(x) = partner.iter().position(Option::is_none) else {
            let sigma1 = Permutation(partner.iter().map(|p| p.expect("complete")).collect());
            let rho = sigma1.compose(&self.sigma_inf);
            return self.transpositions(&sigma1, rho, self.extra, &mut Vec::new());
        };
        for y in x + 1..self.n {
            if partner[y].is_some() {
                continue;
            }
            partner[x] = Some(y);
            partner[y] = Some(x);
            let found = self.involutions(partner);
            partner[x] = None;
            partner[y] = None;
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Appends `r` transpositions to `σ₁σ∞` until `σ₀⁻¹` is a product of disjoint 3-cycles.
    fn transpositions(
        &self,
        sigma1: &Permutation,
        rho: Permutation,
        r: usize,
        taus: &mut Vec<Permutation>,
    ) -> Option<MonodromyTuple> {
        let cycles = rho.cycles().len();
        // Each transposition changes the number of cycles by exactly one.
        if cycles.abs_diff(self.target_cycles) > r || !(cycles + r + self.target_cycles).is_multiple_of(2) {
            return None;
        }
        if r == 0 {
            if rho.cycle_type().iter().any(|&l| l != 3) {
                return None;
            }
            let tuple = MonodromyTuple {
                sigma0: rho.inverse(),
                sigma1: sigma1.clone(),
                sigma_inf: self.sigma_inf.clone(),
                taus: taus.clone(),
            };
            let gens = [&tuple.sigma1, &tuple.sigma_inf].into_iter().chain(&tuple.taus);
            return transitive(self.n, gens).then_some(tuple);
        }
        for a in 0..self.n {
            for b in a + 1..self.n {
                let tau = Permutation::transposition(self.n, a, b);
                taus.push(tau.clone());
                let found = self.transpositions(sigma1, rho.compose(&tau), r - 1, taus);
                taus.pop();
                if found.is_some() {
                    return found;
                }
            }
        }
        None
    }
}

/// Searches for the monodromy of a semi-stable j-map with the given configuration at ∞.
///
/// Only simple extra branch points are considered, so `None` is evidence of
/// nonexistence rather than a proof on its own.
pub fn dessin_search(c: &Configuration, chi: u32) -> Result<Option<MonodromyTuple>, ConfigError> {
    let mut ns = c.multiplicities()?;
    let n = 12 * chi;
    if c.euler() != n {
        return Err(ConfigError::WrongEuler { euler: c.euler(), expected: n });
    }
    let max = max_dessin_degree();
    if n > max {
        return Err(ConfigError::DegreeTooLarge { degree: n, max });
    }
    let s = ns.len();
    let Some(extra) = s.checked_sub(2 * chi as usize + 2) else {
        return Ok(None);
    };
    ns.sort_unstable_by(|a, b| b.cmp(a));
    let n = n as usize;
    let mut images = Vec::with_capacity(n);
    let mut start = 0;
    for &len in &ns {
        let len = len as usize;
        images.extend((start + 1..start + len).chain(std::iter::once(start)));
        start += len;
    }
    let search = Search { n, target_cycles: 4 * chi as usize, sigma_inf: Permutation(images), extra };
    Ok(search.involutions(&mut vec![None; n]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    #[test]
    fn extremal_semistable_covers_exist() {
        for c in ["[1,1,1,9]", "[1,1,2,8]", "[1,2,3,6]", "[1,1,5,5]", "[2,2,4,4]", "[3,3,3,3]"] {
            let tuple = dessin_search(&cfg(c), 1).unwrap().unwrap_or_else(|| panic!("{c}"));
            assert!(tuple.taus.is_empty());
            assert!(tuple.audit(&cfg(c), 1), "{c}");
        }
    }

    #[test]
    fn too_few_fibres_have_no_cover() {
        assert_eq!(dessin_search(&cfg("[12]"), 1).unwrap(), None);
        assert_eq!(dessin_search(&cfg("[1,2,9]"), 1).unwrap(), None);
    }

    #[test]
    fn degree_bound_and_preconditions() {
        assert!(matches!(dessin_search(&cfg("[1^24]"), 2), Err(ConfigError::DegreeTooLarge { degree: 24, .. })));
        assert!(matches!(dessin_search(&cfg("[1,1,II*]"), 1), Err(ConfigError::NotSemiStable)));
        assert!(matches!(dessin_search(&cfg("[1,1,1]"), 1), Err(ConfigError::WrongEuler { .. })));
    }

    #[test]
    fn permutation_basics() {
        let p = Permutation::from_images(vec![1, 2, 0, 3]).unwrap();
        assert_eq!(p.cycle_type(), vec![3, 1]);
        assert_eq!(p.compose(&p.inverse()), Permutation::identity(4));
        assert_eq!(p.to_string(), "(1 2 3)");
        assert!(Permutation::from_images(vec![0, 0]).is_none());
    }
}
