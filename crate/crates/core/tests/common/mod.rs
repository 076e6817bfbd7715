//! Shared helpers for integration tests.
#![allow(dead_code)]

use qroute::circuit::{Circuit, Gate, GateKind};
use qroute::router::MappedSchedule;
use qroute::sched::validate_schedule;
use qroute::verify::{permutation_check, statevector_equiv};
use qroute::Architecture;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const KINDS: [GateKind; 17] = [
    GateKind::H,
    GateKind::X,
    GateKind::Y,
    GateKind::Z,
    GateKind::S,
    GateKind::Sdg,
    GateKind::T,
    GateKind::Tdg,
    GateKind::Rx,
    GateKind::Ry,
    GateKind::Rz,
    GateKind::U1,
    GateKind::U2,
    GateKind::U3,
    GateKind::Cx,
    GateKind::Swap,
    GateKind::Measure,
];

/// Random circuit with roughly half two-qubit gates and the odd barrier.
pub fn random_circuit(rng: &mut ChaCha8Rng, max_qubits: usize, max_gates: usize) -> Circuit {
    let n = rng.random_range(2..=max_qubits);
    let len = rng.random_range(0..=max_gates);
    let mut c = Circuit::new(n);
    for _ in 0..len {
        let kind = if rng.random_bool(0.45) {
            GateKind::Cx
        } else if rng.random_bool(0.05) {
            GateKind::Barrier
        } else {
            KINDS[rng.random_range(0..KINDS.len())]
        };
        let qubits = match kind.arity() {
            Some(1) => vec![rng.random_range(0..n)],
            Some(_) => {
                let a = rng.random_range(0..n);
                let b = (a + rng.random_range(1..n)) % n;
                vec![a, b]
            }
            None => {
                let mut qs: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
                if qs.is_empty() {
                    qs.push(0);
                }
                qs
            }
        };
        let params = (0..kind.num_params())
            .map(|_| rng.random_range(-3.2..3.2))
            .collect();
        let mut g = Gate::new(kind, qubits).with_params(params);
        if kind == GateKind::Measure {
            g = g.with_cbit(0);
        }
        c.push(g);
    }
    c
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every check a routed result must pass; returns a description of the
/// first failure.
pub fn full_check(c: &Circuit, arch: &Architecture, s: &MappedSchedule) -> Result<(), String> {
    let v = validate_schedule(s, arch);
    if !v.is_empty() {
        return Err(format!("schedule violations {v:?}"));
    }
    let p = permutation_check(c, s);
    if !p.ok() {
        return Err(format!("permutation mismatches {:?}", p.mismatches));
    }
    let originals = s.scheduled.iter().filter(|g| !g.gate.inserted).count();
    if originals != c.len() {
        return Err(format!(
            "{originals} source gates emitted, expected {}",
            c.len()
        ));
    }
    let e = statevector_equiv(c, &s.mapped_circuit, 1e-9).map_err(|e| e.to_string())?;
    if !e.passed {
        return Err(format!("statevector mismatch {e:?}"));
    }
    Ok(())
}
