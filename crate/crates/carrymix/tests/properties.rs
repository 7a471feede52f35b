//! Property tests over randomly generated inputs. Anything asserted here
//! also holds exhaustively on small grids (see the acceptance suite); the
//! random versions probe larger shapes.

use carrymix::bijections::{
    bar_inverse, bar_map, carry_positions, column_carry_trace, descent_positions, rank_label,
    shuffle_trace, star_inverse, star_map, star_product_check, ColumnArray,
};
use carrymix::carries::{self, ChainSpec};
use carrymix::exact::{is_totally_positive, rat, Rat};
use carrymix::shuffling::{all_permutations, qb_probability};
use num_traits::One;
use proptest::collection::vec;
use proptest::prelude::*;

fn arb_array() -> impl Strategy<Value = ColumnArray> {
    (1usize..=6, 1usize..=4, 2u64..=4).prop_flat_map(|(n, m, b)| {
        vec(vec(0u32..b as u32, m), n)
            .prop_map(move |rows| ColumnArray::from_rows(b, rows).expect("digits in range"))
    })
}

proptest! {
    #[test]
    fn bar_and_star_round_trip(array in arb_array()) {
        prop_assert_eq!(bar_inverse(&bar_map(&array)), array.clone());
        prop_assert_eq!(star_inverse(&star_map(&array)), array);
    }

    #[test]
    fn carries_become_descents(array in arb_array()) {
        let barred = bar_map(&array);
        prop_assert_eq!(descent_positions(&barred), carry_positions(&array.tuples()));
        prop_assert_eq!(rank_label(&barred).descent_positions(), descent_positions(&barred));
    }

    #[test]
    fn trace_descents_equal_carries(array in arb_array()) {
        // shuffle_trace asserts the pointwise identity internally
        let trace = shuffle_trace(&array);
        let kappa = column_carry_trace(&array);
        for (perm, k) in trace.perms.iter().zip(kappa) {
            prop_assert_eq!(perm.descents() as u32, k);
        }
    }

    #[test]
    fn labeling_products_collapse_through_star(array in arb_array()) {
        prop_assert!(star_product_check(&array));
    }

    #[test]
    fn transition_matrix_is_stochastic_and_tp2(n in 1usize..=8, b in 2u64..=10) {
        let p = carries::transition_matrix(&ChainSpec::new(n, b).unwrap());
        prop_assert!(p.is_row_stochastic());
        prop_assert!(is_totally_positive(&p, 2));
    }

    #[test]
    fn shuffle_law_sums_to_one(n in 1usize..=5, b in 1u64..=6) {
        let total: Rat = all_permutations(n)
            .iter()
            .map(|p| qb_probability(p, b))
            .sum();
        prop_assert_eq!(total, rat(1));
        prop_assert!(Rat::one().is_one());
    }

    #[test]
    fn separation_routes_agree(n in 1usize..=6, b in 2u64..=3, r in 0u64..=5) {
        let spec = ChainSpec::new(n, b).unwrap();
        prop_assert_eq!(
            carries::separation_exact(&spec, r),
            carries::separation_closed(&spec, r)
        );
    }
}
