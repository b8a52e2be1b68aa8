//! Property tests for the invariants the library relies on.

use proptest::prelude::*;

use matroid_forge::finitary::{FinitaryMatroid, Rank};
use matroid_forge::forcing::{self, Condition};
use matroid_forge::format::{emit_matroid_file, parse_matroid_file, MatroidDescription};
use matroid_forge::set::{Element, ElementSet, Mask};
use matroid_forge::template::TemplateSet;
use matroid_forge::{construct_matroid, FiniteMatroid, MatroidSpec};

/// Every template below has threshold and period small enough that
/// membership on `[0, PROBE)` determines it.
const PROBE: u64 = 200;

fn template() -> impl Strategy<Value = TemplateSet> {
    (1u64..=12, 0u64..20)
        .prop_flat_map(|(d, t)| {
            (
                Just(d),
                proptest::collection::btree_set(0..d, 0..=d as usize),
                Just(t),
                proptest::collection::btree_set(0..t.max(1), 0..=t as usize),
                proptest::collection::btree_set(0u64..40, 0..4),
            )
        })
        .prop_map(|(d, res, t, low, minus)| {
            let low: Vec<u64> = low.into_iter().filter(|&x| x < t).collect();
            TemplateSet::new(d, res, t, low, minus).unwrap()
        })
}

fn members(t: &TemplateSet) -> Vec<bool> {
    (0..PROBE).map(|n| t.contains(n)).collect()
}

fn graphic() -> impl Strategy<Value = FiniteMatroid> {
    proptest::collection::vec((1u64..=5, 1u64..=5), 1..=9).prop_map(|edges| FiniteMatroid::graphic(&edges).unwrap())
}

fn matroid_with_masks() -> impl Strategy<Value = (FiniteMatroid, Mask, Mask, Mask)> {
    graphic().prop_flat_map(|m| {
        let full = m.ground_mask();
        (Just(m), 0..=full, 0..=full, 0..=full).prop_map(move |(m, a, b, c)| (m, a & full, b & full, c & full))
    })
}

proptest! {
    #[test]
    fn template_operations_are_pointwise(x in template(), y in template()) {
        let (mx, my) = (members(&x), members(&y));
        let check = |t: TemplateSet, f: fn(bool, bool) -> bool| {
            members(&t).into_iter().enumerate().all(|(n, v)| v == f(mx[n], my[n]))
        };
        prop_assert!(check(x.union(&y), |a, b| a || b));
        prop_assert!(check(x.intersection(&y), |a, b| a && b));
        prop_assert!(check(x.difference(&y), |a, b| a && !b));
        prop_assert_eq!(x.is_subset(&y), mx.iter().zip(&my).all(|(a, b)| !a || *b));
        prop_assert_eq!(x.is_disjoint(&y), mx.iter().zip(&my).all(|(a, b)| !(a & b)));
    }

    #[test]
    fn templates_are_canonical(x in template(), y in template()) {
        prop_assert_eq!(x == y, members(&x) == members(&y));
    }

    #[test]
    fn template_text_round_trips(x in template()) {
        let back: TemplateSet = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn template_iteration_is_ordered_membership(x in template()) {
        let listed: Vec<Element> = x.iter().take_while(|&n| n < PROBE).collect();
        let expected: Vec<Element> = (0..PROBE).filter(|&n| x.contains(n)).collect();
        prop_assert_eq!(listed, expected);
    }

    #[test]
    fn rank_is_monotone_and_submodular((m, a, b, _) in matroid_with_masks()) {
        prop_assert!(m.rank_mask(a & b) <= m.rank_mask(a));
        prop_assert!(m.rank_mask(a) <= m.rank_mask(a | b));
        prop_assert!(m.rank_mask(a) <= a.count_ones() as usize);
        prop_assert!(m.rank_mask(a | b) + m.rank_mask(a & b) <= m.rank_mask(a) + m.rank_mask(b));
    }

    #[test]
    fn relative_rank_is_additive_on_chains((m, a, b, c) in matroid_with_masks()) {
        let (b, c) = (a & b, a & b & c);
        prop_assert_eq!(
            m.relative_rank_mask(a, c),
            m.relative_rank_mask(a, b) + m.relative_rank_mask(b, c)
        );
    }

    #[test]
    fn finitary_ranks_match_restrictions(
        schema in 0usize..3,
        n in 1usize..40,
        x in template(),
        y in template(),
    ) {
        let mf = match schema {
            0 => FinitaryMatroid::free(),
            1 => FinitaryMatroid::periodic_direct_sum(FiniteMatroid::uniform(1, 2).unwrap()).unwrap(),
            _ => FinitaryMatroid::periodic_direct_sum(FiniteMatroid::uniform(2, 3).unwrap()).unwrap(),
        };
        let n = n - n % mf.component_size() as usize + mf.component_size() as usize;
        let window = TemplateSet::finite(0..n as u64);
        let finite = mf.restrict(n).unwrap();
        let (x, y) = (x.intersection(&window), y.intersection(&window));
        let expected = finite
            .relative_rank(&x.finite_elements().unwrap(), &y.finite_elements().unwrap())
            .unwrap();
        prop_assert_eq!(mf.relative_rank_any(&x, &y), Rank::Finite(expected as u64));
    }

    #[test]
    fn condition_extension_is_a_partial_order(
        a in proptest::collection::btree_map(0u64..30, any::<bool>(), 0..8),
        b in proptest::collection::btree_map(0u64..30, any::<bool>(), 0..8),
    ) {
        let p: Condition = a.clone().into_iter().collect();
        let union: Condition = a.iter().chain(&b).map(|(&k, &v)| (k, a.get(&k).copied().unwrap_or(v))).collect();
        prop_assert!(p.extends(&p));
        prop_assert!(union.extends(&p));
        let q: Condition = b.into_iter().collect();
        if p.extends(&q) && q.extends(&p) {
            prop_assert_eq!(p, q);
        }
    }

    #[test]
    fn dense_extensions_extend_and_land_in_the_set(
        assigned in proptest::collection::btree_map(0u64..40, any::<bool>(), 0..10),
        n in 0usize..8,
    ) {
        let mf = FinitaryMatroid::free();
        let task = forcing::make_task(&mf, TemplateSet::empty(), TemplateSet::odds()).unwrap();
        let p: Condition = assigned.into_iter().map(|(k, v)| (2 * k + 1, v)).collect();
        let b = TemplateSet::multiples(4, 0);
        let q = forcing::dense_extend_c(&mf, &p, &b, n, &task).unwrap();
        prop_assert!(q.extends(&p));
        prop_assert!(forcing::in_c(&mf, &q, &b, n).unwrap());
        prop_assert!(q.len() <= p.len() + n);
    }

    #[test]
    fn matroid_files_round_trip(k in 0usize..6, extra in 0usize..4, edges in proptest::collection::vec((1u64..=6, 1u64..=6), 0..8)) {
        for spec in [MatroidSpec::Uniform { k, n: k + extra }, MatroidSpec::Graphic { edges: edges.clone() }] {
            let text = emit_matroid_file("sample", &MatroidDescription::Finite(spec.clone()));
            let parsed = parse_matroid_file(&text).unwrap();
            prop_assert_eq!(&parsed.description, &MatroidDescription::Finite(spec.clone()));
            prop_assert_eq!(emit_matroid_file(&parsed.name, &parsed.description), text);
            construct_matroid(&spec).unwrap();
        }
    }

    #[test]
    fn independence_agrees_with_rank(m in graphic(), s in any::<u16>()) {
        let mask = s as Mask & m.ground_mask();
        let set: ElementSet = m.set_of(mask);
        prop_assert_eq!(m.is_independent(&set).unwrap(), m.rank_mask(mask) == mask.count_ones() as usize);
    }
}
