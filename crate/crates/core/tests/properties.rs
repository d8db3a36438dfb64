mod support;

use proptest::prelude::*;
use support::strategies::*;
use tilt_forge_core::findim::{build_algebra, truncate};
use tilt_forge_core::homological::{quadratic_dual, relation_span};
use tilt_forge_core::mutation::{left_mutate, levelled_mutate_left, levelled_mutate_right, right_mutate};
use tilt_forge_core::presentation::{parse, path_degree, serialize};
use tilt_forge_core::skewgroup::fold_presentation;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn double_dual_restores_relations(pres in quadratic_presentation()) {
        let back = quadratic_dual(&quadratic_dual(&pres).unwrap()).unwrap();
        prop_assert_eq!(back.quiver(), pres.quiver());
        prop_assert_eq!(relation_span(&back), relation_span(&pres));
    }

    #[test]
    fn text_roundtrip(pres in any_presentation()) {
        let text = serialize(&pres);
        let parsed = parse(&text).unwrap();
        prop_assert_eq!(&parsed, &pres);
        prop_assert_eq!(serialize(&parsed), text);
    }

    #[test]
    fn single_mutations_are_inverse(c in exceptional_collection(), pick in 0usize..16) {
        prop_assume!(c.len() > 1);
        let i = pick % (c.len() - 1) + 1;
        let l = left_mutate(&c, i).unwrap();
        l.check_exceptional().unwrap();
        let back = right_mutate(&l, i - 1).unwrap();
        prop_assert_eq!(back.classes(), c.classes());
        prop_assert_eq!(back.chi(), c.chi());

        let r = right_mutate(&c, i - 1).unwrap();
        r.check_exceptional().unwrap();
        let back = left_mutate(&r, i).unwrap();
        prop_assert_eq!(back.classes(), c.classes());
    }

    #[test]
    fn levelled_mutations_stay_levelled(c in levelled_collection(), steps in prop::collection::vec((any::<bool>(), 0u32..8), 1..12)) {
        let mut c = c;
        for (right, pick) in steps {
            let top = c.top_level().unwrap();
            if top == 0 {
                break;
            }
            c = if right {
                levelled_mutate_right(&c, pick % top).unwrap()
            } else {
                levelled_mutate_left(&c, pick % top + 1).unwrap()
            };
            prop_assert!(c.check_exceptional().is_ok());
            prop_assert!(c.check_levelled().is_ok());
        }
    }

    #[test]
    fn truncation_closed_loop(pres in acyclic_presentation(), mask in 1u32..16) {
        let tab = build_algebra(&pres, 8).unwrap();
        let kept: Vec<usize> = (0..tab.num_vertices()).filter(|v| mask & (1 << v) != 0).collect();
        prop_assume!(!kept.is_empty());
        let corner = truncate(&tab, &kept).unwrap();
        let rebuilt = build_algebra(&corner, 8).unwrap();
        prop_assert_eq!(rebuilt.dimension(), tab.corner_dimension(&kept));
    }

    #[test]
    fn folding_arrow_count(pres in any_presentation(), ell in 1u32..5) {
        let pres = pres.with_relations(Vec::new());
        let folded = fold_presentation(&pres, ell).unwrap();
        let expected: u32 = pres.degrees().iter().map(|&d| ell.saturating_sub(d)).sum();
        prop_assert_eq!(folded.quiver().num_arrows() as u32, expected);
        prop_assert_eq!(folded.quiver().num_vertices(), pres.quiver().num_vertices() * ell as usize);
    }

    #[test]
    fn path_degree_is_additive(pres in any_presentation(), a in 0usize..6, b in 0usize..6) {
        let q = pres.quiver();
        let (a, b) = (a % q.num_arrows(), b % q.num_arrows());
        prop_assume!(q.arrows()[a].target == q.arrows()[b].source);
        let ids = [q.arrows()[a].id.as_str(), q.arrows()[b].id.as_str()];
        let whole = path_degree(&pres, &ids).unwrap();
        prop_assert_eq!(whole, pres.degree_of(a) + pres.degree_of(b));
    }
}
