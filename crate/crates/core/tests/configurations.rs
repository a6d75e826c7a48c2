//! Existence and nonexistence of fibre configurations on rational surfaces.

use ellsurf_core::configs::{
    base_change_map, dessin_search, extremal_res_classify, rank_one_unimodular_search, twist_map, Configuration,
};
use ellsurf_core::kodaira::KodairaType;
use proptest::prelude::*;

const DEFORMED: [&str; 10] = [
    "[1,1,1,1,8]",
    "[1,1,1,2,7]",
    "[1,1,1,3,6]",
    "[1,1,2,2,6]",
    "[1,1,1,4,5]",
    "[1,1,2,3,5]",
    "[1,1,2,4,4]",
    "[1,2,2,3,4]",
    "[2,2,2,2,4]",
    "[1,2,3,3,3]",
];

const MISSING: [&str; 3] = ["[1,2,2,2,5]", "[1,1,3,3,4]", "[2,2,2,3,3]"];

fn cfg(s: &str) -> Configuration {
    s.parse().unwrap()
}

#[test]
fn deformed_five_tuples_have_monodromy() {
    for c in DEFORMED {
        let tuple = dessin_search(&cfg(c), 1).unwrap().unwrap_or_else(|| panic!("no cover for {c}"));
        assert_eq!(tuple.taus.len(), 1);
        assert!(tuple.audit(&cfg(c), 1), "{c}");
    }
}

#[test]
fn deformed_five_tuples_split_from_extremal_ones() {
    let extremal: Vec<Configuration> =
        extremal_res_classify().into_iter().map(|(c, _)| c).filter(Configuration::is_semistable).collect();
    for c in DEFORMED {
        let target = cfg(c);
        let reached = extremal.iter().any(|e| {
            (0..e.len()).any(|i| match e.fibres()[i] {
                KodairaType::In(n) => (1..n).any(|a| e.deformation_split(i, a, n - a).unwrap() == target),
                _ => false,
            })
        });
        assert!(reached, "{c}");
    }
}

#[test]
fn missing_five_tuples_are_rejected_twice() {
    for c in MISSING {
        assert_eq!(dessin_search(&cfg(c), 1).unwrap(), None, "{c}");
        assert_eq!(rank_one_unimodular_search(&cfg(c)).unwrap(), None, "{c}");
    }
}

#[test]
fn deformed_rank_one_tuples_pass_lattice_test() {
    // Tuples without torsion must carry a section of height 1/disc.
    for c in ["[1,1,1,2,7]", "[1,1,1,4,5]", "[1,1,2,3,5]"] {
        assert!(rank_one_unimodular_search(&cfg(c)).unwrap().is_some(), "{c}");
    }
    // [1,1,1,3,6] keeps the 3-torsion of [1,2,3,6], so no section has height 1/18.
    assert_eq!(rank_one_unimodular_search(&cfg("[1,1,1,3,6]")).unwrap(), None);
}

const ADDITIVE_AND_SEMISTABLE: [KodairaType; 10] = [
    KodairaType::I0,
    KodairaType::In(3),
    KodairaType::II,
    KodairaType::III,
    KodairaType::IV,
    KodairaType::I0Star,
    KodairaType::InStar(2),
    KodairaType::IVStar,
    KodairaType::IIIStar,
    KodairaType::IIStar,
];

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn absent_results_do_not_depend_on_order(i in 0usize..3, seed in any::<u64>()) {
        let mut ns: Vec<u32> = cfg(MISSING[i]).multiplicities().unwrap();
        let k = ns.len();
        ns.rotate_left((seed % k as u64) as usize);
        ns.swap(0, (seed / 7 % k as u64) as usize);
        prop_assert_eq!(dessin_search(&Configuration::semistable(&ns), 1).unwrap(), None);
    }
}

proptest! {
    #[test]
    fn twist_is_an_involution(i in 0usize..10, odd in any::<bool>()) {
        let k = ADDITIVE_AND_SEMISTABLE[i];
        prop_assert_eq!(twist_map(twist_map(k, odd), odd), k);
    }

    #[test]
    fn base_change_composes(i in 0usize..10, d1 in 1u32..8, d2 in 1u32..8) {
        let k = ADDITIVE_AND_SEMISTABLE[i];
        prop_assert_eq!(base_change_map(base_change_map(k, d1), d2), base_change_map(k, d1 * d2));
    }
}
