mod common;

use common::{random_circuit, rng};
use proptest::prelude::*;
use qroute::initial::random_mapping;
use qroute::qasm::{decompose_swaps, emit, emit_circuit, parse, parse_mapped};
use qroute::router::{route, RouterOptions};
use qroute::sched::asap_schedule;
use qroute::verify::statevector_equiv;
use qroute::Architecture;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn emit_parse_is_stable(seed in any::<u64>()) {
        let c = random_circuit(&mut rng(seed), 6, 20);
        let once = parse(&emit_circuit(&c)).unwrap();
        prop_assert_eq!(once.num_logical, c.num_logical);
        prop_assert_eq!(once.len(), c.len());
        for (a, b) in once.gates.iter().zip(&c.gates) {
            prop_assert_eq!(a.kind, b.kind);
            prop_assert_eq!(&a.qubits, &b.qubits);
            for (x, y) in a.params.iter().zip(&b.params) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
        let twice = parse(&emit_circuit(&once)).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn routed_text_round_trips(seed in any::<u64>()) {
        let c = random_circuit(&mut rng(seed), 5, 15);
        let arch = Architecture::grid(2, 3).unwrap();
        let pi = random_mapping(c.num_logical, 6, seed).unwrap();
        let s = route(&c, &arch, &pi, &RouterOptions::default()).unwrap();
        let back = parse_mapped(&emit(&s.mapped_circuit)).unwrap();
        prop_assert_eq!(&back.initial_mapping, &s.mapped_circuit.initial_mapping);
        prop_assert_eq!(&back.final_mapping, &s.mapped_circuit.final_mapping);
        prop_assert_eq!(back.swap_count(), s.mapped_circuit.swap_count());
        let inserted = |gs: &[qroute::Gate]| gs.iter().filter(|g| g.inserted).count();
        prop_assert_eq!(inserted(&back.gates), inserted(&s.mapped_circuit.gates));
    }

    #[test]
    fn decomposed_swaps_preserve_the_state(seed in any::<u64>()) {
        let c = random_circuit(&mut rng(seed), 5, 15);
        let arch = Architecture::line(5).unwrap();
        let pi = random_mapping(c.num_logical, 5, seed).unwrap();
        let s = route(&c, &arch, &pi, &RouterOptions::default()).unwrap();
        let d = decompose_swaps(&s.mapped_circuit);
        prop_assert!(d.gates.iter().all(|g| g.kind != qroute::GateKind::Swap));
        prop_assert!(statevector_equiv(&c, &d, 1e-9).unwrap().passed);
        prop_assert!(asap_schedule(&d, &arch).is_ok());
    }
}
