mod common;

use common::{field, random_full_rank, random_matrix, rng};
use proptest::prelude::*;
use supdate_core::broadcast::{
    build_broadcast_scheme, compute_theta, optimal_broadcast_cost, verify_broadcast_exhaustive, BroadcastOptions,
    Receiver, Regime,
};
use supdate_core::codes::{is_mrsc, MrscMode};
use supdate_core::linalg::Combinations;
use supdate_core::{FieldMatrix, LinearCode};

/// Two full-rank matrices sharing `shared` planted rows.
fn overlapping_pair(n: usize, ma: usize, mb: usize, shared: usize, seed: u64) -> (FieldMatrix, FieldMatrix) {
    let f = field(2, 8);
    let mut g = rng(seed);
    loop {
        let common = random_matrix(&f, shared, n, &mut g);
        let a = common.vstack(&random_matrix(&f, ma - shared, n, &mut g)).unwrap();
        let b = common.vstack(&random_matrix(&f, mb - shared, n, &mut g)).unwrap();
        if a.rank() == ma && b.rank() == mb {
            return (a, b);
        }
    }
}

/// θ straight from its definition, with cores found through the dual code.
fn theta_oracle(a: &FieldMatrix, b: &FieldMatrix, eps: usize) -> usize {
    let common = a.row_space_intersection(b).unwrap();
    let n = a.cols();
    let mut best = usize::MAX;
    for x in [a, b] {
        let dual = LinearCode::new(x.clone()).unwrap().dual();
        let mut combos = Combinations::new(n, 2 * eps);
        while let Some(s) = combos.next_subset() {
            let set = supdate_core::SupportSet::new(n, s.to_vec()).unwrap();
            if dual.shorten(&set).unwrap().dim() == 0 {
                best = best.min(common.rank_of_columns(s));
            }
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn general_regime_invariants(n in 6usize..9, shared in 1usize..3, seed: u64) {
        let eps = 1;
        let (a, b) = overlapping_pair(n, 4, 3, shared, seed);
        let report = optimal_broadcast_cost(&a, &b, eps, u128::MAX).unwrap();
        prop_assert_eq!(report.regime, Regime::General);
        let theta = report.theta.clone().unwrap();
        prop_assert_eq!(theta.theta, theta_oracle(&a, &b, eps));
        prop_assert_eq!(theta.theta, theta.theta_a.min(theta.theta_b));
        prop_assert!(theta.theta <= 2 * eps);

        let options = BroadcastOptions { max_tries: 200, ..BroadcastOptions::default() };
        let scheme = build_broadcast_scheme(&a, &b, eps, seed, &options).unwrap();
        prop_assert_eq!(Some(scheme.cost()), report.cost);
        prop_assert_eq!(scheme.cost(), 4 * eps - theta.theta);

        let h_a = scheme.receiver_a.h();
        let h_b = scheme.receiver_b.h();
        prop_assert_eq!(&scheme.t_a.mul(&scheme.h).unwrap(), h_a);
        prop_assert_eq!(&scheme.t_b.mul(&scheme.h).unwrap(), h_b);
        prop_assert!(scheme.h.same_row_space(&h_a.vstack(h_b).unwrap()).unwrap());
        prop_assert!(scheme.h_hat.same_row_space(&h_a.row_space_intersection(h_b).unwrap()).unwrap());
        prop_assert_eq!(scheme.h_hat.rows(), theta.theta);
        for (h_x, theta_x) in [(h_a, theta.theta_a), (h_b, theta.theta_b)] {
            prop_assert!(scheme.h_hat.rows() + 2 * eps <= theta_x + h_x.rows());
        }
        let ca = LinearCode::new(a.clone()).unwrap();
        let cb = LinearCode::new(b.clone()).unwrap();
        prop_assert!(is_mrsc(&LinearCode::new(h_a.clone()).unwrap(), &ca, MrscMode::Definition).unwrap().holds);
        prop_assert!(is_mrsc(&LinearCode::new(h_b.clone()).unwrap(), &cb, MrscMode::Definition).unwrap().holds);

        let x = random_matrix(a.field(), 2, n, &mut rng(seed ^ 1)).to_rows();
        let sweep = verify_broadcast_exhaustive(&scheme, &x);
        prop_assert!(sweep.passed(), "{:?}", sweep.first_failure);
    }

    #[test]
    fn trivial_regime_stacks_point_to_point(n in 6usize..9, seed: u64) {
        let eps = 1;
        let (a, b) = overlapping_pair(n, 3, 3, 0, seed);
        prop_assume!(a.row_space_intersection(&b).unwrap().rows() == 0);
        let report = optimal_broadcast_cost(&a, &b, eps, 0).unwrap();
        prop_assert_eq!(report.regime, Regime::TrivialIntersection);
        prop_assert_eq!(report.cost, Some(4));
        let options = BroadcastOptions::default();
        let scheme = build_broadcast_scheme(&a, &b, eps, seed, &options).unwrap();
        prop_assert_eq!(scheme.cost(), 4);
        let stacked = scheme.receiver_a.h().vstack(scheme.receiver_b.h()).unwrap();
        prop_assert!(scheme.h.same_row_space(&stacked).unwrap());
        prop_assert_eq!(scheme.h_hat.rows(), 0);
    }

    #[test]
    fn equal_side_information(n in 5usize..8, seed: u64) {
        let f = field(2, 8);
        let a = random_full_rank(&f, 3, n, &mut rng(seed));
        for eps in 1..=1 {
            let theta = compute_theta(&a, &a, eps, u128::MAX).unwrap();
            prop_assert_eq!(theta.theta, 2 * eps);
            let scheme = build_broadcast_scheme(&a, &a, eps, seed, &BroadcastOptions::default()).unwrap();
            prop_assert_eq!(scheme.cost(), 2 * eps);
        }
    }
}

#[test]
fn zero_update_returns_side_information() {
    let (a, b) = overlapping_pair(7, 4, 4, 1, 3);
    let scheme = build_broadcast_scheme(&a, &b, 1, 3, &BroadcastOptions::default()).unwrap();
    let x: Vec<u32> = (0..7).map(|i| i * 17).collect();
    let y = scheme.encode(&x).unwrap();
    for r in [Receiver::A, Receiver::B] {
        let side = scheme.receiver(r).a().mul_vec(&x).unwrap();
        assert_eq!(scheme.decode(r, &y, &side).unwrap(), side);
    }
    let short = vec![0; 3];
    assert!(scheme.decode(Receiver::A, &y, &short).is_err());
}
