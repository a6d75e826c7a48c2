//! Configurations of singular fibres: numerical invariants, fibre-type
//! transforms, torsion and lattice criteria, and the search for monodromy
//! tuples of semi-stable j-maps.

mod dessin;
mod torsion;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::kodaira::{KodairaError, KodairaType};
use crate::lattices::{disc_group, root_gram, AbelianGroup, LatticeError};

pub use dessin::{dessin_search, max_dessin_degree, MonodromyTuple, Permutation, MAX_DESSIN_DEGREE_VAR};
pub use torsion::{
    abelian_groups_of_order, extremal_groups, extremal_res_classify, group_admissible, k3_length_check, rank_one_unimodular_search,
    torsion_admissible, LengthVerdict, RankOneWitness,
};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("cannot parse configuration '{0}'")]
    Parse(String),
    #[error("fibre {0} is not multiplicative")]
    NotMultiplicative(KodairaType),
    #[error("cannot split I{n} into {a} + {b}")]
    InvalidSplit { n: u32, a: u32, b: u32 },
    #[error("no fibre at index {0}")]
    NoSuchFibre(usize),
    #[error("trivial lattice has rank {rank}, expected {expected}")]
    PreconditionRank { rank: u32, expected: u32 },
    #[error("Euler numbers sum to {euler}, expected {expected}")]
    WrongEuler { euler: u32, expected: u32 },
    #[error("configuration has additive fibres")]
    NotSemiStable,
    #[error("permutation degree {degree} exceeds the bound {max}")]
    DegreeTooLarge { degree: u32, max: u32 },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Multiset of singular fibre types; smooth fibres are dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    fibres: Vec<KodairaType>,
}

impl Configuration {
    pub fn new(fibres: impl IntoIterator<Item = KodairaType>) -> Self {
        let mut fibres: Vec<KodairaType> = fibres.into_iter().filter(|k| *k != KodairaType::I0).collect();
        fibres.sort_unstable();
        Configuration { fibres }
    }

    /// Semi-stable configuration `[n₁, …, n_s]`.
    pub fn semistable(ns: &[u32]) -> Self {
        Self::new(ns.iter().map(|&n| KodairaType::multiplicative(n)))
    }

    pub fn fibres(&self) -> &[KodairaType] {
        &self.fibres
    }

    pub fn len(&self) -> usize {
        self.fibres.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fibres.is_empty()
    }

    pub fn is_semistable(&self) -> bool {
        self.fibres.iter().all(KodairaType::is_multiplicative)
    }

    /// The `I_n` indices, if the configuration is semi-stable.
    pub fn multiplicities(&self) -> Result<Vec<u32>, ConfigError> {
        self.fibres
            .iter()
            .map(|k| match k {
                KodairaType::In(n) => Ok(*n),
                _ => Err(ConfigError::NotSemiStable),
            })
            .collect()
    }

    pub fn euler(&self) -> u32 {
        self.fibres.iter().map(KodairaType::euler).sum()
    }

    /// Rank of the trivial lattice: `2 + Σ (m_v − 1)`.
    pub fn rank_t(&self) -> u32 {
        2 + self.fibres.iter().map(|k| k.components() - 1).sum::<u32>()
    }

    /// `Π |det T_v|`, the order of the product of the component groups.
    pub fn disc_product(&self) -> u64 {
        self.fibres.iter().map(|k| k.component_group().order()).product()
    }

    /// Arithmetic genus `e/12`, when the Euler number allows one.
    pub fn chi(&self) -> Option<u32> {
        let e = self.euler();
        (e > 0 && e.is_multiple_of(12)).then_some(e / 12)
    }

    /// Discriminant group of the trivial lattice, assembled from the root blocks.
    pub fn trivial_disc_group(&self) -> Result<AbelianGroup, ConfigError> {
        let mut g = AbelianGroup::trivial();
        for k in &self.fibres {
            if let Some(label) = k.root_lattice() {
                g = g.product(&disc_group(&root_gram(label)?)?);
            }
        }
        Ok(g)
    }

    /// Replaces the `I_n` at `index` by `I_a` and `I_b`.
    pub fn deformation_split(&self, index: usize, a: u32, b: u32) -> Result<Self, ConfigError> {
        let fibre = *self.fibres.get(index).ok_or(ConfigError::NoSuchFibre(index))?;
        let KodairaType::In(n) = fibre else {
            return Err(ConfigError::NotMultiplicative(fibre));
        };
        if a == 0 || b == 0 || a + b != n {
            return Err(ConfigError::InvalidSplit { n, a, b });
        }
        let mut fibres = self.fibres.clone();
        fibres.remove(index);
        fibres.push(KodairaType::In(a));
        fibres.push(KodairaType::In(b));
        Ok(Self::new(fibres))
    }

    /// Splits the first `I_n` fibre.
    pub fn split_fibre(&self, n: u32, a: u32, b: u32) -> Result<Self, ConfigError> {
        let index = self
            .fibres
            .iter()
            .position(|k| *k == KodairaType::In(n))
            .ok_or(ConfigError::InvalidSplit { n, a, b })?;
        self.deformation_split(index, a, b)
    }
}

/// Fibre type after a quadratic twist whose branch divisor has the given parity at the place.
pub fn twist_map(kodaira: KodairaType, odd_order: bool) -> KodairaType {
    if odd_order {
        kodaira.twisted()
    } else {
        kodaira
    }
}

/// Fibre type after a base change ramified to order `d` at the place.
pub fn base_change_map(kodaira: KodairaType, d: u32) -> KodairaType {
    use KodairaType::*;
    assert!(d >= 1, "ramification index must be positive");
    match kodaira {
        I0 => I0,
        In(n) => In(n * d),
        InStar(n) if d % 2 == 1 => InStar(n * d),
        InStar(n) => In(n * d),
        // Potentially good reduction: the type is read off from v(Δ) mod 12.
        _ => match (kodaira.euler() * d) % 12 {
            0 => I0,
            2 => II,
            3 => III,
            4 => IV,
            6 => I0Star,
            8 => IVStar,
            9 => IIIStar,
            10 => IIStar,
            r => unreachable!("v(Δ) ≡ {r} mod 12 has no additive type"),
        },
    }
}

fn short_name(k: &KodairaType) -> String {
    match k {
        KodairaType::In(n) => n.to_string(),
        KodairaType::I0Star => "0*".to_string(),
        KodairaType::InStar(n) => format!("{n}*"),
        other => other.to_string(),
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.fibres.iter().map(short_name).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl FromStr for Configuration {
    type Err = ConfigError;

    /// Accepts `[1,2,2,2,5]`, `[II, II*]`, `[0*,0*]` and exponents such as `[1, 2^7, 9]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ConfigError::Parse(s.to_string());
        let body = s.trim().strip_prefix('[').and_then(|b| b.strip_suffix(']')).ok_or_else(bad)?;
        let mut fibres = Vec::new();
        if body.trim().is_empty() {
            return Ok(Configuration::default());
        }
        for item in body.split(',') {
            let (base, count) = match item.split_once('^') {
                Some((b, e)) => (b, e.trim().parse::<usize>().map_err(|_| bad())?),
                None => (item, 1),
            };
            let k: KodairaType = base.trim().parse().map_err(|_: KodairaError| bad())?;
            fibres.extend(std::iter::repeat_n(k, count));
        }
        Ok(Configuration::new(fibres))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use KodairaType::*;

    fn cfg(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    #[test]
    fn invariants_of_small_configurations() {
        let c = cfg("[1,1,1,9]");
        assert_eq!((c.euler(), c.rank_t(), c.disc_product()), (12, 10, 9));
        let c = cfg("[II, II*]");
        assert_eq!((c.euler(), c.rank_t(), c.disc_product()), (12, 10, 1));
        let c = Configuration::default();
        assert_eq!((c.euler(), c.rank_t(), c.disc_product()), (0, 2, 1));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(cfg("[1, 2^7, 9]").len(), 9);
        assert_eq!(cfg("[I4*, 1, 1]").to_string(), "[1,1,4*]");
        assert_eq!(cfg("[0*,0*]").fibres(), &[I0Star, I0Star]);
        assert_eq!(cfg("[III*, 2, 1]").to_string(), "[1,2,III*]");
        assert_eq!(cfg("[]"), Configuration::default());
        assert!("1,2".parse::<Configuration>().is_err());
        assert!("[1,x]".parse::<Configuration>().is_err());
    }

    #[test]
    fn splits() {
        let c = cfg("[1,1,1,9]");
        assert_eq!(c.split_fibre(9, 4, 5).unwrap(), cfg("[1,1,1,4,5]"));
        assert_eq!(cfg("[3,3,3,3]").split_fibre(3, 1, 2).unwrap(), cfg("[1,2,3,3,3]"));
        assert_eq!(c.deformation_split(3, 0, 9), Err(ConfigError::InvalidSplit { n: 9, a: 0, b: 9 }));
        assert_eq!(cfg("[1,1,II*]").deformation_split(2, 1, 1), Err(ConfigError::NotMultiplicative(IIStar)));
    }

    #[test]
    fn transforms() {
        assert_eq!(twist_map(In(2), true), InStar(2));
        assert_eq!(twist_map(In(2), false), In(2));
        assert_eq!(base_change_map(IIStar, 2), IVStar);
        assert_eq!(base_change_map(II, 2), IV);
        assert_eq!(base_change_map(II, 3), I0Star);
        assert_eq!(base_change_map(III, 2), I0Star);
        assert_eq!(base_change_map(IV, 3), I0);
        assert_eq!(base_change_map(InStar(1), 2), In(2));
        assert_eq!(base_change_map(InStar(1), 3), InStar(3));
        for d in 1..8 {
            assert_eq!(base_change_map(I0, d), I0);
        }
    }

    #[test]
    fn trivial_disc_group_matches_component_groups() {
        let c = cfg("[1,2^7,9]");
        let g = c.trivial_disc_group().unwrap();
        assert_eq!(g.order(), c.disc_product());
        assert_eq!(g.length_p(2), 7);
    }
}
