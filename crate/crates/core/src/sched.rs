//! ASAP scheduling of an emitted gate order, and schedule validation.
//!
//! The simulator issues gates strictly in the order given, each at the
//! earliest cycle its qubits are free. It never reorders commuting gates, so
//! it measures the sequence a router emitted rather than what the router
//! could have done.

use serde::Serialize;
use thiserror::Error;

use crate::arch::{Architecture, DurationMap};
use crate::circuit::{Circuit, Gate, GateId, GateKind, MappedCircuit};
use crate::commute::commutes;
use crate::router::{MappedSchedule, RouterStats, ScheduledGate};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScheduleError {
    #[error("gate {index} ({kind}) acts on uncoupled qubits {a} and {b}")]
    Uncoupled {
        index: usize,
        kind: GateKind,
        a: usize,
        b: usize,
    },
    #[error("gate {index} uses qubit {qubit}, device has {num_qubits}")]
    OutOfRange {
        index: usize,
        qubit: usize,
        num_qubits: usize,
    },
}

/// Earliest start of every gate in order over `num_qubits` wires.
fn asap_starts(gates: &[Gate], num_qubits: usize, durations: &DurationMap) -> Vec<u64> {
    let mut t_end = vec![0u64; num_qubits];
    gates
        .iter()
        .map(|g| {
            let start = g.qubits.iter().map(|&q| t_end[q]).max().unwrap_or(0);
            let end = start + durations.get(g.kind) as u64;
            for &q in &g.qubits {
                t_end[q] = end;
            }
            start
        })
        .collect()
}

/// Weighted depth of a logical circuit with every gate allowed, ignoring
/// coupling. This is the reference depth before routing.
pub fn original_depth(c: &Circuit, durations: &DurationMap) -> u64 {
    let starts = asap_starts(&c.gates, c.num_logical, durations);
    c.gates
        .iter()
        .zip(starts)
        .map(|(g, s)| s + durations.get(g.kind) as u64)
        .max()
        .unwrap_or(0)
}

/// ASAP schedule of `mc` on `arch`. Non-inserted gates are attributed to
/// source gates in the order they appear.
pub fn asap_schedule(
    mc: &MappedCircuit,
    arch: &Architecture,
) -> Result<MappedSchedule, ScheduleError> {
    let mut next = 0;
    let origins: Vec<Option<GateId>> = mc
        .gates
        .iter()
        .map(|g| {
            (!g.inserted).then(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    asap_schedule_with_origins(mc, arch, &origins)
}

/// ASAP schedule with explicit source attribution per gate.
pub fn asap_schedule_with_origins(
    mc: &MappedCircuit,
    arch: &Architecture,
    origins: &[Option<GateId>],
) -> Result<MappedSchedule, ScheduleError> {
    assert_eq!(origins.len(), mc.gates.len(), "one origin per gate");
    for (index, g) in mc.gates.iter().enumerate() {
        if let Some(&qubit) = g.qubits.iter().find(|&&q| q >= arch.num_qubits()) {
            return Err(ScheduleError::OutOfRange {
                index,
                qubit,
                num_qubits: arch.num_qubits(),
            });
        }
        if g.is_two_qubit() && !arch.is_coupled(g.qubits[0], g.qubits[1]) {
            return Err(ScheduleError::Uncoupled {
                index,
                kind: g.kind,
                a: g.qubits[0],
                b: g.qubits[1],
            });
        }
    }
    let starts = asap_starts(&mc.gates, arch.num_qubits(), arch.durations());
    let scheduled = mc
        .gates
        .iter()
        .zip(starts)
        .zip(origins)
        .map(|((g, start), &origin)| ScheduledGate {
            gate: g.clone(),
            start,
            duration: arch.duration(g.kind),
            origin,
        })
        .collect();
    Ok(MappedSchedule::from_scheduled(
        scheduled,
        mc.num_physical,
        mc.initial_mapping.clone(),
        mc.final_mapping.clone(),
        mc.cregs.clone(),
        RouterStats::default(),
    ))
}

pub fn weighted_depth(s: &MappedSchedule) -> u64 {
    s.scheduled
        .iter()
        .map(ScheduledGate::end)
        .max()
        .unwrap_or(0)
}

/// A broken scheduling rule. Indices refer to `MappedSchedule::scheduled`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// Two gates occupy a qubit at the same time.
    Overlap {
        qubit: usize,
        first: usize,
        second: usize,
    },
    /// A later-emitted gate that does not commute with an earlier one on a
    /// shared qubit starts before that one ends.
    OrderInversion {
        qubit: usize,
        first: usize,
        second: usize,
    },
    Uncoupled {
        index: usize,
        a: usize,
        b: usize,
    },
    Duration {
        index: usize,
        expected: u32,
        found: u32,
    },
}

/// Every rule broken by `s`, empty when it is a valid schedule on `arch`.
/// Each pair of gates is reported at most once; overlap wins.
pub fn validate_schedule(s: &MappedSchedule, arch: &Architecture) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = arch.num_qubits();
    let mut per_qubit: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, sg) in s.scheduled.iter().enumerate() {
        let g = &sg.gate;
        let expected = arch.duration(g.kind);
        if sg.duration != expected {
            out.push(Violation::Duration {
                index: i,
                expected,
                found: sg.duration,
            });
        }
        if g.is_two_qubit() && !arch.is_coupled(g.qubits[0], g.qubits[1]) {
            out.push(Violation::Uncoupled {
                index: i,
                a: g.qubits[0],
                b: g.qubits[1],
            });
        }
        for &q in &g.qubits {
            if q < n {
                per_qubit[q].push(i);
            }
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for (q, list) in per_qubit.iter().enumerate() {
        for (k, &i) in list.iter().enumerate() {
            for &j in &list[k + 1..] {
                if !seen.insert((i, j)) {
                    continue;
                }
                let (a, b) = (&s.scheduled[i], &s.scheduled[j]);
                if a.start < b.end() && b.start < a.end() {
                    out.push(Violation::Overlap {
                        qubit: q,
                        first: i,
                        second: j,
                    });
                } else if b.start < a.end() && !commutes(&a.gate, &b.gate) {
                    out.push(Violation::OrderInversion {
                        qubit: q,
                        first: i,
                        second: j,
                    });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind::*;
    use crate::mapping::Mapping;

    fn mc(n: usize, gates: &[(GateKind, &[usize])]) -> MappedCircuit {
        let c = Circuit::from_gates(
            n,
            gates
                .iter()
                .map(|(k, q)| Gate::new(*k, q.to_vec()))
                .collect(),
        );
        MappedCircuit::identity_of(&c, n)
    }

    #[test]
    fn h_then_cx() {
        let arch = Architecture::line(2).unwrap();
        let s = asap_schedule(&mc(2, &[(H, &[0]), (Cx, &[0, 1])]), &arch).unwrap();
        let starts: Vec<u64> = s.scheduled.iter().map(|g| g.start).collect();
        assert_eq!(starts, vec![0, 1]);
        assert_eq!(weighted_depth(&s), 3);
    }

    #[test]
    fn t_and_cx_in_parallel() {
        let arch = Architecture::new(
            "sq",
            4,
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
            None,
            Default::default(),
        )
        .unwrap();
        let s = asap_schedule(&mc(4, &[(T, &[1]), (Cx, &[0, 2])]), &arch).unwrap();
        let ends: Vec<u64> = s.scheduled.iter().map(ScheduledGate::end).collect();
        assert_eq!(ends, vec![1, 2]);
    }

    #[test]
    fn empty_has_zero_depth() {
        let arch = Architecture::line(2).unwrap();
        assert_eq!(asap_schedule(&mc(2, &[]), &arch).unwrap().weighted_depth, 0);
    }

    #[test]
    fn rejects_uncoupled() {
        let arch = Architecture::line(3).unwrap();
        assert!(matches!(
            asap_schedule(&mc(3, &[(Cx, &[0, 2])]), &arch),
            Err(ScheduleError::Uncoupled { index: 0, .. })
        ));
    }

    #[test]
    fn barrier_synchronises() {
        let arch = Architecture::line(2).unwrap();
        let s = asap_schedule(
            &mc(
                2,
                &[(Cx, &[0, 1]), (H, &[0]), (Barrier, &[0, 1]), (X, &[1])],
            ),
            &arch,
        )
        .unwrap();
        let starts: Vec<u64> = s.scheduled.iter().map(|g| g.start).collect();
        assert_eq!(starts, vec![0, 2, 3, 3]);
        assert!(validate_schedule(&s, &arch).is_empty());
    }

    fn hand(gates: Vec<(GateKind, Vec<usize>, u64)>) -> MappedSchedule {
        let arch = Architecture::line(3).unwrap();
        let scheduled = gates
            .into_iter()
            .enumerate()
            .map(|(i, (k, q, start))| ScheduledGate {
                gate: Gate::new(k, q),
                start,
                duration: arch.duration(k),
                origin: Some(i),
            })
            .collect();
        MappedSchedule::from_scheduled(
            scheduled,
            3,
            Mapping::identity(3, 3),
            Mapping::identity(3, 3),
            Vec::new(),
            RouterStats::default(),
        )
    }

    #[test]
    fn detects_overlap() {
        let arch = Architecture::line(3).unwrap();
        let v = validate_schedule(&hand(vec![(H, vec![0], 0), (X, vec![0], 0)]), &arch);
        assert_eq!(
            v,
            vec![Violation::Overlap {
                qubit: 0,
                first: 0,
                second: 1
            }]
        );
    }

    #[test]
    fn detects_order_inversion() {
        let arch = Architecture::line(3).unwrap();
        let v = validate_schedule(&hand(vec![(H, vec![0], 2), (Cx, vec![0, 1], 0)]), &arch);
        assert_eq!(v.len(), 1);
        assert!(matches!(
            v[0],
            Violation::OrderInversion {
                first: 0,
                second: 1,
                ..
            }
        ));
        // commuting pair may run in either order
        let ok = validate_schedule(&hand(vec![(T, vec![0], 2), (Cx, vec![0, 1], 0)]), &arch);
        assert!(ok.is_empty(), "{ok:?}");
    }

    #[test]
    fn depth_bounds_on_line() {
        let arch = Architecture::line(3).unwrap();
        let m = mc(
            3,
            &[
                (H, &[0]),
                (Cx, &[0, 1]),
                (Cx, &[1, 2]),
                (X, &[0]),
                (Swap, &[0, 1]),
            ],
        );
        let s = asap_schedule(&m, &arch).unwrap();
        let serial: u64 = m.gates.iter().map(|g| arch.duration(g.kind) as u64).sum();
        assert!(s.weighted_depth <= serial);
        assert_eq!(s.weighted_depth, 1 + 2 + 2 + 6);
    }
}
