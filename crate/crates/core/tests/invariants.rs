use proptest::prelude::*;

use eo_core::classify::Typing;
use eo_core::grid::builtin::f40;
use eo_core::grid::random::{random_family_grid, rng, GridFamily};
use eo_core::grid::{brute_force_value, dual_grid, parse_grid, to_canonical_json, EOGrid};
use eo_core::solve::{decide, evaluate, EvalOptions};
use eo_core::Signature;

fn grid(seed: u64, family: u8, typing: bool) -> EOGrid {
    let family = [GridFamily::PureUp, GridFamily::Rebalancing, GridFamily::Eom][family as usize];
    let typing = if typing { Typing::A } else { Typing::P };
    random_family_grid(&mut rng(seed), family, typing, 5, 6).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn auto_matches_brute_force(seed in any::<u64>(), family in 0u8..3, typing in any::<bool>()) {
        let g = grid(seed, family, typing);
        let e = evaluate(&g, &EvalOptions::default()).unwrap();
        prop_assert_eq!(e.value, brute_force_value(&g).unwrap());
    }

    #[test]
    fn dual_grid_preserves_value(seed in any::<u64>(), family in 0u8..3, typing in any::<bool>()) {
        let g = grid(seed, family, typing);
        let d = dual_grid(&g);
        prop_assert_eq!(brute_force_value(&d).unwrap(), brute_force_value(&g).unwrap());
        prop_assert_eq!(evaluate(&d, &EvalOptions::default()).unwrap().value, brute_force_value(&g).unwrap());
    }

    #[test]
    fn canonical_json_round_trips(seed in any::<u64>(), family in 0u8..3, typing in any::<bool>()) {
        let g = grid(seed, family, typing);
        let text = to_canonical_json(&g);
        let back = parse_grid(&text).unwrap();
        prop_assert_eq!(to_canonical_json(&back), text);
    }
}

#[test]
fn rebalancing_sets_are_tractable() {
    for set in [vec![f40()], vec![Signature::neq(6).unwrap()], vec![f40(), Signature::neq(4).unwrap()]] {
        let v = decide(&set).unwrap();
        assert!(v.is_tractable(), "{:?}", v.outcome);
    }
}
