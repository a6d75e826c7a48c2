//! Torsion sections, Mordell-Weil lattices and discriminant groups as
//! constraints on configurations.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::{ConfigError, Configuration};
use crate::funcfield::Rational;
use crate::kodaira::KodairaType;
use crate::lattices::AbelianGroup;
use crate::mordell_weil::{correction, ComponentLabel};

/// Simple components of a fibre as elements of its component group `ℤ/a × ℤ/b`.
#[derive(Clone, Copy)]
struct LocalGroup {
    kodaira: KodairaType,
    orders: [u32; 2],
}

impl LocalGroup {
    fn new(kodaira: KodairaType) -> Self {
        use KodairaType::*;
        let orders = match kodaira {
            In(n) => [n, 1],
            III | IIIStar => [2, 1],
            IV | IVStar => [3, 1],
            I0Star => [2, 2],
            InStar(n) if n % 2 == 0 => [2, 2],
            InStar(_) => [4, 1],
            I0 | II | IIStar => [1, 1],
        };
        LocalGroup { kodaira, orders }
    }

    fn elements(&self) -> impl Iterator<Item = [u32; 2]> + '_ {
        (0..self.orders[0]).flat_map(move |a| (0..self.orders[1]).map(move |b| [a, b]))
    }

    fn add(&self, x: [u32; 2], y: [u32; 2], times: u32) -> [u32; 2] {
        [
            (x[0] + y[0] * times) % self.orders[0],
            (x[1] + y[1] * times) % self.orders[1],
        ]
    }

    fn order_of(&self, x: [u32; 2]) -> u32 {
        let ord = |v: u32, n: u32| n / num_integer::gcd(v, n);
        num_integer::lcm(ord(x[0], self.orders[0]), ord(x[1], self.orders[1]))
    }

    fn label(&self, x: [u32; 2]) -> ComponentLabel {
        use KodairaType::*;
        if x == [0, 0] {
            return ComponentLabel::Zero;
        }
        match self.kodaira {
            In(_) => ComponentLabel::Cyclic(x[0]),
            III | IIIStar | IV | IVStar => ComponentLabel::NonZeroSimple(x[0]),
            I0Star => ComponentLabel::FarAny((x[0] + 2 * x[1]) as u8),
            InStar(n) if n % 2 == 0 => match x {
                [1, 0] => ComponentLabel::Near,
                [0, 1] => ComponentLabel::Far(1),
                _ => ComponentLabel::Far(2),
            },
            InStar(_) => match x[0] {
                2 => ComponentLabel::Near,
                1 => ComponentLabel::Far(1),
                _ => ComponentLabel::Far(2),
            },
            I0 | II | IIStar => unreachable!("trivial component group"),
        }
    }

    fn contribution(&self, x: [u32; 2]) -> Rational {
        let l = self.label(x);
        correction(self.kodaira, l, l).expect("labels come from the component group")
    }

    /// Euler numbers the fibre can have after dividing by a section of prime order `p`
    /// meeting the component `x`.
    fn quotient_euler(&self, x: [u32; 2], p: u32) -> Vec<u32> {
        use KodairaType::*;
        let zero = x == [0, 0];
        match self.kodaira {
            In(n) if zero => vec![n * p],
            In(n) => vec![n / p],
            InStar(n) => match self.label(x) {
                ComponentLabel::Near => vec![2 * n + 6],
                _ => vec![n / 2 + 6],
            },
            I0Star => vec![6],
            // Potentially good fibres keep their inertia order 12/gcd(12, v(Δ)).
            k => {
                let e = k.euler();
                if e == 0 {
                    vec![0]
                } else {
                    vec![e, 12 - e]
                }
            }
        }
    }
}

/// Elements of `ℤ/d₁ × … × ℤ/d_k` as coefficient vectors.
fn group_elements(invariants: &[u64]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &d in invariants {
        out = out
            .into_iter()
            .flat_map(|c| {
                (0..d as u32).map(move |i| {
                    let mut c = c.clone();
                    c.push(i);
                    c
                })
            })
            .collect();
    }
    out
}

fn element_order(c: &[u32], invariants: &[u64]) -> u32 {
    c.iter()
        .zip(invariants)
        .map(|(&ci, &d)| d as u32 / num_integer::gcd(ci, d as u32))
        .fold(1, num_integer::lcm)
}

struct Embedding<'a> {
    fibres: Vec<LocalGroup>,
    invariants: &'a [u64],
    elements: Vec<Vec<u32>>,
    target: Rational,
    euler: u32,
    /// `images[v][g]`: component met by the element `g` on fibre `v`.
    images: Vec<Vec<[u32; 2]>>,
}

impl Embedding<'_> {
    fn search(&mut self, v: usize, sums: &[Rational]) -> bool {
        if v == self.fibres.len() {
            return sums.iter().skip(1).all(|s| *s == self.target) && self.quotients_fit();
        }
        let local = self.fibres[v];
        // Generator images must have order dividing the invariant factors.
        let mut choices: Vec<Vec<[u32; 2]>> = vec![Vec::new()];
        for &d in self.invariants {
            let options: Vec<[u32; 2]> = local.elements().filter(|x| d % local.order_of(*x) as u64 == 0).collect();
            choices = choices
                .into_iter()
                .flat_map(|c| {
                    options.iter().map(move |x| {
                        let mut c = c.clone();
                        c.push(*x);
                        c
                    })
                })
                .collect();
        }
        'choice: for gens in choices {
            let images: Vec<[u32; 2]> = self
                .elements
                .iter()
                .map(|c| c.iter().zip(&gens).fold([0, 0], |acc, (&ci, &x)| local.add(acc, x, ci)))
                .collect();
            if local.kodaira.is_additive() && images.iter().skip(1).any(|x| *x == [0, 0]) {
                continue;
            }
            let mut next = Vec::with_capacity(sums.len());
            for (s, x) in sums.iter().zip(&images) {
                let s = s + local.contribution(*x);
                if s > self.target {
                    continue 'choice;
                }
                next.push(s);
            }
            self.images.push(images);
            if self.search(v + 1, &next) {
                return true;
            }
            self.images.pop();
        }
        false
    }

    /// The quotient by every section of prime order must keep the Euler number.
    fn quotients_fit(&self) -> bool {
        for (g, c) in self.elements.iter().enumerate().skip(1) {
            let p = element_order(c, self.invariants);
            if !is_prime(p) {
                continue;
            }
            let mut reachable = BTreeSet::from([0u32]);
            for (local, images) in self.fibres.iter().zip(&self.images) {
                let options = local.quotient_euler(images[g], p);
                reachable = reachable
                    .iter()
                    .flat_map(|s| options.iter().map(move |e| s + e))
                    .filter(|s| *s <= self.euler)
                    .collect();
            }
            if !reachable.contains(&self.euler) {
                return false;
            }
        }
        true
    }
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Whether the configuration leaves room for a torsion subgroup isomorphic to `group`.
///
/// Looks for a homomorphism into the component groups that is injective on every
/// additive fibre, gives every non-zero element height zero without meeting the zero
/// section, and for which each quotient by a section of prime order still has the
/// right Euler number.
pub fn group_admissible(c: &Configuration, group: &AbelianGroup) -> bool {
    if group.is_trivial() {
        return true;
    }
    let Some(chi) = c.chi() else {
        return false;
    };
    let elements = group_elements(group.invariants());
    let mut search = Embedding {
        fibres: c.fibres().iter().map(|k| LocalGroup::new(*k)).collect(),
        invariants: group.invariants(),
        target: Rational::from_integer((2 * chi).into()),
        euler: c.euler(),
        images: Vec::new(),
        elements,
    };
    let sums = vec![Rational::zero(); search.elements.len()];
    search.search(0, &sums)
}

/// Whether `ℤ/m` can be the torsion subgroup generated by one section.
pub fn torsion_admissible(c: &Configuration, m: u64) -> bool {
    m >= 1 && group_admissible(c, &AbelianGroup::cyclic(m))
}

/// All abelian groups of order `n` up to isomorphism.
pub fn abelian_groups_of_order(n: u64) -> Vec<AbelianGroup> {
    fn partitions(k: u32, max: u32) -> Vec<Vec<u32>> {
        if k == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for first in (1..=k.min(max)).rev() {
            for mut rest in partitions(k - first, first) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }
    let mut groups = vec![Vec::<u64>::new()];
    let mut m = n;
    let mut p = 2;
    while m > 1 {
        let mut k = 0;
        while m.is_multiple_of(p) {
            m /= p;
            k += 1;
        }
        if k > 0 {
            let parts = partitions(k, k);
            groups = groups
                .into_iter()
                .flat_map(|g| {
                    parts.iter().map(move |part| {
                        let mut g = g.clone();
                        g.extend(part.iter().map(|&e| p.pow(e)));
                        g
                    })
                })
                .collect();
        }
        p += 1;
    }
    let mut out: Vec<AbelianGroup> = groups.iter().map(|g| AbelianGroup::from_cyclic_orders(g)).collect();
    out.sort();
    out
}

fn candidate_types(max_euler: u32) -> Vec<KodairaType> {
    use KodairaType::*;
    let mut types: Vec<KodairaType> = (1..=max_euler).map(In).collect();
    types.extend([II, III, IV, I0Star, IVStar, IIIStar, IIStar]);
    types.extend((1..).map(InStar).take_while(|k| k.euler() <= max_euler));
    types.retain(|k| k.euler() <= max_euler);
    types.sort();
    types
}

/// Multisets of fibre types with the given Euler number and trivial-lattice rank.
fn configurations_with(euler: u32, rank_t: u32) -> Vec<Configuration> {
    fn go(
        types: &[KodairaType],
        start: usize,
        euler_left: u32,
        rank_left: u32,
        current: &mut Vec<KodairaType>,
        out: &mut Vec<Configuration>,
    ) {
        if euler_left == 0 {
            if rank_left == 0 {
                out.push(Configuration::new(current.iter().copied()));
            }
            return;
        }
        for (i, k) in types.iter().enumerate().skip(start) {
            let (e, r) = (k.euler(), k.components() - 1);
            if e <= euler_left && r <= rank_left {
                current.push(*k);
                go(types, i, euler_left - e, rank_left - r, current, out);
                current.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(&candidate_types(euler), 0, euler, rank_t.saturating_sub(2), &mut Vec::new(), &mut out);
    out
}

fn integer_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt().round() as u64;
    (r.checked_mul(r) == Some(n)).then_some(r)
}

/// Mordell-Weil groups compatible with `c` on an extremal surface, where the group is
/// finite of order `√disc_product`.
pub fn extremal_groups(c: &Configuration) -> Vec<AbelianGroup> {
    let Some(order) = integer_sqrt(c.disc_product()) else {
        return Vec::new();
    };
    abelian_groups_of_order(order).into_iter().filter(|g| group_admissible(c, g)).collect()
}

/// Extremal rational elliptic surfaces in characteristic zero, with their Mordell-Weil groups.
///
/// Rows are ordered semi-stable first, then by number of additive fibres.
pub fn extremal_res_classify() -> Vec<(Configuration, AbelianGroup)> {
    let mut rows = Vec::new();
    for c in configurations_with(12, 10) {
        let groups = extremal_groups(&c);
        match groups.as_slice() {
            [] => {}
            [g] => rows.push((c, g.clone())),
            _ => panic!("configuration {c} admits several Mordell-Weil groups: {groups:?}"),
        }
    }
    rows.sort_by_key(|(c, _)| (c.fibres().iter().filter(|k| k.is_additive()).count(), c.clone()));
    rows
}

/// Intersection data of a section that makes the Néron-Severi lattice unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneWitness {
    pub contact: u32,
    pub labels: Vec<ComponentLabel>,
    pub height: Rational,
}

/// Looks for a section on a rational surface of Mordell-Weil rank one without torsion
/// whose height `2 + 2k − Σ contr_v` satisfies `disc_product · h = 1`.
pub fn rank_one_unimodular_search(c: &Configuration) -> Result<Option<RankOneWitness>, ConfigError> {
    if c.euler() != 12 {
        return Err(ConfigError::WrongEuler { euler: c.euler(), expected: 12 });
    }
    if c.rank_t() != 9 {
        return Err(ConfigError::PreconditionRank { rank: c.rank_t(), expected: 9 });
    }
    let target = Rational::new(1.into(), c.disc_product().into());
    let fibres: Vec<LocalGroup> = c.fibres().iter().map(|k| LocalGroup::new(*k)).collect();
    // Distinct total corrections, each with one choice of labels.
    let mut totals: BTreeMap<Rational, Vec<ComponentLabel>> = BTreeMap::from([(Rational::zero(), Vec::new())]);
    for local in &fibres {
        let mut next = BTreeMap::new();
        for (sum, labels) in &totals {
            for x in local.elements() {
                let mut labels = labels.clone();
                labels.push(local.label(x));
                next.entry(sum + local.contribution(x)).or_insert(labels);
            }
        }
        totals = next;
    }
    let two = Rational::from_integer(2.into());
    for (sum, labels) in totals {
        // h = 2 + 2k − sum = target fixes k.
        let k2 = &target + &sum - &two;
        if k2 >= Rational::zero() && k2.denom().is_one() && (k2.numer() % 2u32).is_zero() {
            let contact = u32::try_from(k2.numer() / 2u32).expect("contact fits");
            return Ok(Some(RankOneWitness { contact, labels, height: target }));
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LengthVerdict {
    Consistent,
    /// The discriminant group is too long unless there is a `p`-torsion section.
    ForcesTorsion(u64),
    /// A forced 2-torsion section would make the quotient's Euler number exceed 24.
    Contradiction,
}

/// Length criterion for elliptic K3 surfaces, followed by the Euler bound for a forced
/// 2-isogeny.
pub fn k3_length_check(c: &Configuration) -> Result<LengthVerdict, ConfigError> {
    if c.euler() != 24 {
        return Err(ConfigError::WrongEuler { euler: c.euler(), expected: 24 });
    }
    let g = c.trivial_disc_group()?;
    let room = 22usize.saturating_sub(c.rank_t() as usize);
    let mut primes: Vec<u64> = (2..=g.exponent()).filter(|&p| is_prime(p as u32) && g.length_p(p) > room).collect();
    primes.sort_unstable();
    let Some(&p) = primes.first() else {
        return Ok(LengthVerdict::Consistent);
    };
    if p == 2 {
        let mut bound = 0u32;
        for k in c.fibres() {
            let local = LocalGroup::new(*k);
            let options: Vec<u32> = local
                .elements()
                .filter(|x| local.order_of(*x) <= 2 && (!k.is_additive() || *x != [0, 0]))
                .flat_map(|x| local.quotient_euler(x, 2))
                .collect();
            match options.iter().min() {
                Some(m) => bound += m,
                None => return Ok(LengthVerdict::Contradiction),
            }
        }
        if bound > 24 {
            return Ok(LengthVerdict::Contradiction);
        }
    }
    Ok(LengthVerdict::ForcesTorsion(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    #[test]
    fn torsion_examples() {
        assert!(!torsion_admissible(&cfg("[1,2,2,2,5]"), 2));
        assert!(group_admissible(&cfg("[3,3,3,3]"), &AbelianGroup::from_cyclic_orders(&[3, 3])));
        assert!(torsion_admissible(&cfg("[3,3,3,3]"), 3));
        assert!(!torsion_admissible(&cfg("[II,4*]"), 2));
        assert!(torsion_admissible(&cfg("[1,1,2,8]"), 4));
        assert!(!group_admissible(&cfg("[1,1,2,8]"), &AbelianGroup::from_cyclic_orders(&[2, 2])));
        assert!(!group_admissible(&cfg("[2,2,4,4]"), &AbelianGroup::from_cyclic_orders(&[2, 2, 2])));
    }

    #[test]
    fn groups_of_small_order() {
        let names = |n| abelian_groups_of_order(n).iter().map(|g| g.to_string()).collect::<Vec<_>>();
        assert_eq!(names(1), ["0"]);
        assert_eq!(names(8).len(), 3);
        assert_eq!(names(9).len(), 2);
        assert_eq!(names(6), ["Z/6"]);
    }

    #[test]
    fn rank_one_examples() {
        let w = rank_one_unimodular_search(&cfg("[1,1,1,2,7]")).unwrap().unwrap();
        assert_eq!(w.height, Rational::new(1.into(), 14.into()));
        assert_eq!(w.contact, 0);
        for c in ["[1,2,2,2,5]", "[1,1,3,3,4]", "[2,2,2,3,3]"] {
            assert_eq!(rank_one_unimodular_search(&cfg(c)).unwrap(), None, "{c}");
        }
        assert!(matches!(
            rank_one_unimodular_search(&cfg("[1,1,1,9]")),
            Err(ConfigError::PreconditionRank { rank: 10, expected: 9 })
        ));
    }

    #[test]
    fn k3_examples() {
        for c in ["[1,2^7,9]", "[2^7,3,7]", "[2^7,5,5]"] {
            assert_eq!(k3_length_check(&cfg(c)).unwrap(), LengthVerdict::Contradiction, "{c}");
        }
        assert_eq!(k3_length_check(&cfg("[1^24]")).unwrap(), LengthVerdict::Consistent);
        assert!(matches!(k3_length_check(&cfg("[1,1,1,9]")), Err(ConfigError::WrongEuler { .. })));
    }
}

#[cfg(test)]
mod classification {
    use super::*;

    #[test]
    fn extremal_table() {
        let rows: BTreeSet<(String, String)> =
            extremal_res_classify().into_iter().map(|(c, g)| (c.to_string(), g.to_string())).collect();
        let expected = [
            ("[1,1,1,9]", "Z/3"),
            ("[1,1,2,8]", "Z/4"),
            ("[1,1,5,5]", "Z/5"),
            ("[1,2,3,6]", "Z/6"),
            ("[2,2,4,4]", "Z/2 x Z/4"),
            ("[3,3,3,3]", "Z/3 x Z/3"),
            ("[1,1,II*]", "0"),
            ("[1,1,4*]", "Z/2"),
            ("[1,2,III*]", "Z/2"),
            ("[1,3,IV*]", "Z/3"),
            ("[1,4,1*]", "Z/4"),
            ("[2,2,2*]", "Z/2 x Z/2"),
            ("[0*,0*]", "Z/2 x Z/2"),
            ("[II,II*]", "0"),
            ("[III,III*]", "Z/2"),
            ("[IV,IV*]", "Z/3"),
        ];
        let expected: BTreeSet<(String, String)> = expected.iter().map(|(c, g)| (c.to_string(), g.to_string())).collect();
        assert_eq!(rows, expected);
    }
}
