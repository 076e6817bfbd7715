mod common;

use common::{full_check, random_circuit, rng};
use proptest::prelude::*;
use qroute::baseline::{baseline_route, BaselineOptions};
use qroute::initial::{reverse_traversal, reverse_traversal_with, TraversalOptions};
use qroute::router::{route, RouterOptions};
use qroute::Architecture;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn traversal_result_is_best_and_valid(seed in any::<u64>()) {
        let c = random_circuit(&mut rng(seed), 6, 20);
        let arch = Architecture::grid(3, 3).unwrap();
        let opts = TraversalOptions { rounds: 2, restarts: 4, seed };
        let r = reverse_traversal_with(&c, &arch, &opts, |c, pi| route(c, &arch, pi, &RouterOptions::default())).unwrap();
        prop_assert_eq!(r.scores.len(), 4);
        prop_assert!(r.scores.iter().all(|&s| s >= r.score));
        prop_assert_eq!(r.scores[r.restart], r.score);
        prop_assert!(r.scores[..r.restart].iter().all(|&s| s > r.score));
        let mut f = r.mapping.forward().to_vec();
        f.sort_unstable();
        f.dedup();
        prop_assert_eq!(f.len(), c.num_logical);
        prop_assert!(f.iter().all(|&p| p < 9));
        let s = route(&c, &arch, &r.mapping, &RouterOptions::default()).unwrap();
        prop_assert_eq!(s.weighted_depth, r.score);
        prop_assert!(full_check(&c, &arch, &s).is_ok());
        let b = baseline_route(&c, &arch, &r.mapping, &BaselineOptions::default()).unwrap();
        prop_assert!(full_check(&c, &arch, &b).is_ok());
    }

    #[test]
    fn traversal_is_deterministic(seed in any::<u64>()) {
        let c = random_circuit(&mut rng(seed), 5, 15);
        let arch = Architecture::grid(2, 3).unwrap();
        let opts = TraversalOptions { rounds: 3, restarts: 6, seed };
        let a = reverse_traversal(&c, &arch, &opts, &RouterOptions::default()).unwrap();
        let b = reverse_traversal(&c, &arch, &opts, &RouterOptions::default()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn reversing_twice_is_identity(seed in any::<u64>()) {
        let c = random_circuit(&mut rng(seed), 6, 20);
        prop_assert_eq!(c.reversed().reversed(), c);
    }
}
