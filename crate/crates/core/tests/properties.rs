use proptest::prelude::*;
use sepgraph::admissibility::{enumerate_paths, is_admissible};
use sepgraph::condition_n::check_condition_n;
use sepgraph::dynamics::{act, LazyConfiguration, Pattern};
use sepgraph::format::{parse, serialize};
use sepgraph::monoid::{presentation, MonoidElement};
use sepgraph::{SeparatedGraph, Symbol, Word};

fn graph() -> impl Strategy<Value = SeparatedGraph> {
    (1usize..=5)
        .prop_flat_map(|n| (Just(n), prop::collection::vec((0..n, 0..n, 0usize..3), 1..=8)))
        .prop_map(|(n, edges)| {
            let mut text = String::new();
            for i in 0..n {
                text.push_str(&format!("vertex v{i}\n"));
            }
            for (j, (s, r, l)) in edges.into_iter().enumerate() {
                text.push_str(&format!("edge e{j} : v{s} -> v{r} @ {}\n", ["a", "b", "c"][l]));
            }
            parse(&text).unwrap()
        })
}

fn word(g: &SeparatedGraph, picks: &[usize]) -> Word {
    let n = 2 * g.edge_count();
    Word(picks.iter().map(|&i| Symbol::from_index(i % n)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn serialization_is_stable(g in graph()) {
        let text = serialize(&g);
        prop_assert_eq!(serialize(&parse(&text).unwrap()), text);
    }

    #[test]
    fn reduced_product_is_a_group_law(g in graph(), a in prop::collection::vec(0usize..64, 0..6),
                                      b in prop::collection::vec(0usize..64, 0..6),
                                      c in prop::collection::vec(0usize..64, 0..6)) {
        let (a, b, c) = (word(&g, &a).reduced(), word(&g, &b).reduced(), word(&g, &c).reduced());
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&a * &a.inverse()).is_empty());
        prop_assert_eq!(&a * &Word::empty(), a.clone());
    }

    #[test]
    fn literals_round_trip(g in graph(), picks in prop::collection::vec(0usize..64, 1..6)) {
        let w = word(&g, &picks);
        prop_assert_eq!(Word::parse(&g, &w.literal(&g)).unwrap(), w);
    }

    #[test]
    fn prefixes_of_admissible_paths_are_admissible(g in graph()) {
        for v in g.vertices() {
            for p in enumerate_paths(&g, v, 4).into_iter().filter(|p| !p.is_trivial()) {
                for k in 1..=p.word().len() {
                    prop_assert!(is_admissible(&g, &p.word().prefix(k)));
                }
            }
        }
    }

    #[test]
    fn condition_n_passes_to_full_subgraphs(g in graph(), mask in 1u32..32) {
        let sub = g.full_subgraph(&g.vertices().filter(|v| mask >> v.index() & 1 == 1).collect());
        if check_condition_n(&g).unwrap().verdict && sub.vertex_count() > 0 {
            prop_assert!(check_condition_n(&sub).unwrap().verdict);
        }
    }

    #[test]
    fn lazy_patterns_are_valid_and_act_consistently(g in graph(), seed in any::<u64>()) {
        for v in g.vertices() {
            let xi = LazyConfiguration::new(v, seed);
            let p = Pattern::truncate(&g, &xi, 4).unwrap();
            prop_assert!(p.validate(&g).is_ok());
            prop_assert_eq!(Pattern::parse_dump(&g, &p.dump(&g)).unwrap(), p.clone());
            for w in p.members().iter().filter(|w| w.len() == 1) {
                let moved = act(&g, &p, w).unwrap();
                prop_assert!(moved.validate(&g).is_ok());
                let back = act(&g, &moved, &w.inverse()).unwrap();
                prop_assert_eq!(back, p.restrict(p.depth() - 2));
            }
        }
    }

    #[test]
    fn element_literals_round_trip(g in graph(), coeffs in prop::collection::vec(0u32..5, 8)) {
        let pres = presentation(&g);
        let x = MonoidElement(coeffs[..pres.rank()].to_vec());
        prop_assert_eq!(pres.element(&pres.literal(&x)).unwrap(), x);
    }
}
