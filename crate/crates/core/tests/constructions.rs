//! Separated families, the tower action and invariant semimetrics checked
//! against exhaustive scans.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use scaling_entropy::algebra::{sl2_for_order, GroupLaw, IntegerLattice, SL2_ENUMERATION_CAP};
use scaling_entropy::constructions::{
    component_metric, left_invariant_semimetric, separated_family, sl2_tower_action, InvariantRecipe,
    TOWER_ACTION_CAP,
};
use scaling_entropy::dynamics::{folner_average, ActionTable};

fn check_family<G: GroupLaw>(group: &G, window: &[G::Elem], forbidden: &[G::Elem]) {
    let fam = separated_family(group, window, forbidden).unwrap();
    let k: BTreeSet<G::Elem> = forbidden.iter().copied().collect();
    let w: BTreeSet<G::Elem> = window.iter().copied().collect();
    let covered: Vec<G::Elem> = fam.blocks.iter().flatten().copied().collect();
    assert_eq!(covered.len(), w.len());
    assert_eq!(covered.into_iter().collect::<BTreeSet<_>>(), w);
    assert!(fam.blocks.len() <= 2 * k.len() + 1);
    for block in &fam.blocks {
        assert!(!block.is_empty());
        for &g in block {
            for &h in block {
                if g != h {
                    assert!(!k.contains(&group.op(g, group.inverse(h))));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn separated_families_in_z2(window in prop::collection::vec((-5i64..=5, -5i64..=5), 1..40),
                                k in prop::collection::btree_set((-2i64..=2, -2i64..=2), 0..5)) {
        let window: Vec<[i64; 2]> = window.into_iter().map(|(a, b)| [a, b]).collect();
        let k: Vec<[i64; 2]> = k.into_iter().filter(|&v| v != (0, 0)).map(|(a, b)| [a, b]).collect();
        check_family(&IntegerLattice::<2>, &window, &k);
    }

    #[test]
    fn separated_families_in_sl2_f5(window in prop::collection::btree_set(0usize..120, 1..60),
                                    k in prop::collection::btree_set(0usize..120, 0..6)) {
        let (_, g) = sl2_for_order(5, SL2_ENUMERATION_CAP).unwrap();
        let k: Vec<usize> = k.into_iter().filter(|&x| x != g.identity()).collect();
        let window: Vec<usize> = window.into_iter().collect();
        check_family(&g, &window, &k);
    }
}

#[test]
fn tower_subgroups_fix_higher_components() {
    let t = sl2_tower_action(3, 2, TOWER_ACTION_CAP).unwrap();
    assert_eq!(t.atoms(), 24 * 30);
    for &g in t.inclusion(1) {
        for x in 0..t.atoms() {
            let y = t.action().apply(g, x);
            assert_eq!(t.component(2)[x], t.component(2)[y]);
        }
    }
    // the whole group G_2 does move the second coordinate
    assert!((0..t.atoms()).any(|g| t.component(2)[t.action().apply(g, 0)] != t.component(2)[0]));
}

#[test]
fn truncated_averages_are_constant_on_fibers() {
    // ρ = ½ρ_1 averaged over G_1 depends only on the first coordinates
    let t = sl2_tower_action(3, 2, TOWER_ACTION_CAP).unwrap();
    let rho = component_metric(&t, 1).unwrap();
    let avg = folner_average(t.action(), t.inclusion(1), &rho).unwrap();
    let c1 = t.component(1);
    let n = t.atoms();
    let mut rep = [usize::MAX; 24];
    for x in 0..n {
        if rep[c1[x] as usize] == usize::MAX {
            rep[c1[x] as usize] = x;
        }
    }
    for x in 0..n {
        for y in 0..n {
            let (rx, ry) = (rep[c1[x] as usize], rep[c1[y] as usize]);
            assert!((avg.get(x, y) - avg.get(rx, ry)).abs() < 1e-12);
        }
    }
}

#[test]
fn invariant_semimetrics_are_left_invariant() {
    for q in [5, 7] {
        let (_, g) = sl2_for_order(q, SL2_ENUMERATION_CAP).unwrap();
        let g = Arc::new(g);
        let action = ActionTable::left_regular(g.clone()).unwrap();
        for recipe in [InvariantRecipe::Word, InvariantRecipe::Random { seed: q }] {
            let rho = left_invariant_semimetric(&action, &recipe.root(&g).unwrap()).unwrap();
            rho.validate().unwrap();
            for h in g.elements() {
                for x in g.elements() {
                    let hx = g.mul(h, x);
                    for y in g.elements() {
                        assert_eq!(rho.get(hx, g.mul(h, y)), rho.get(x, y));
                    }
                }
            }
        }
    }
}
