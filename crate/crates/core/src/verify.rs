//! Correctness oracles for routed circuits.
//!
//! [`permutation_check`] replays a schedule and tracks where every logical
//! qubit lives. [`statevector_equiv`] simulates both circuits exactly on a
//! random product input and compares the results after undoing the final
//! placement.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateId, GateKind, MappedCircuit, PhysicalQubit};
use crate::commute::commutes;
use crate::mapping::Mapping;
use crate::router::MappedSchedule;

/// Largest register the dense simulator accepts.
pub const MAX_SIM_QUBITS: usize = 12;

type Matrix2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn u3(theta: f64, phi: f64, lambda: f64) -> Matrix2 {
    let (s, co) = (theta / 2.0).sin_cos();
    [
        [c(co, 0.0), -Complex64::from_polar(s, lambda)],
        [
            Complex64::from_polar(s, phi),
            Complex64::from_polar(co, phi + lambda),
        ],
    ]
}

/// Unitary of a single-qubit kind, `None` for kinds that act as identity
/// here (measure, barrier) or are not single-qubit.
pub fn single_qubit_matrix(kind: GateKind, params: &[f64]) -> Option<Matrix2> {
    use GateKind::*;
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let diag = |phase: f64| [[one, zero], [zero, Complex64::from_polar(1.0, phase)]];
    Some(match kind {
        H => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        X => [[zero, one], [one, zero]],
        Y => [[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]],
        Z => diag(std::f64::consts::PI),
        S => diag(std::f64::consts::FRAC_PI_2),
        Sdg => diag(-std::f64::consts::FRAC_PI_2),
        T => diag(std::f64::consts::FRAC_PI_4),
        Tdg => diag(-std::f64::consts::FRAC_PI_4),
        Rx => {
            let (s, co) = (params[0] / 2.0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        Ry => {
            let (s, co) = (params[0] / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        Rz => [
            [Complex64::from_polar(1.0, -params[0] / 2.0), zero],
            [zero, Complex64::from_polar(1.0, params[0] / 2.0)],
        ],
        U1 => diag(params[0]),
        U2 => u3(std::f64::consts::FRAC_PI_2, params[0], params[1]),
        U3 => u3(params[0], params[1], params[2]),
        Cx | Swap | Measure | Barrier => return None,
    })
}

/// Dense state over `n` qubits; qubit `k` is bit `k` of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[0] = c(1.0, 0.0);
        StateVector { n, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn apply_matrix(&mut self, q: usize, m: &Matrix2) {
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    pub fn apply_cx(&mut self, control: usize, target: usize) {
        let (cb, tb) = (1 << control, 1 << target);
        for i in 0..self.amps.len() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    pub fn apply_swap(&mut self, a: usize, b: usize) {
        let (ab, bb) = (1 << a, 1 << b);
        for i in 0..self.amps.len() {
            if i & ab != 0 && i & bb == 0 {
                self.amps.swap(i, (i & !ab) | bb);
            }
        }
    }

    /// Apply `g` with its operands renamed through `wire`.
    pub fn apply(&mut self, g: &Gate, wire: impl Fn(usize) -> usize) {
        match g.kind {
            GateKind::Cx => self.apply_cx(wire(g.qubits[0]), wire(g.qubits[1])),
            GateKind::Swap => self.apply_swap(wire(g.qubits[0]), wire(g.qubits[1])),
            GateKind::Measure | GateKind::Barrier => {}
            k => {
                let m = single_qubit_matrix(k, &g.params).expect("single-qubit kind");
                self.apply_matrix(wire(g.qubits[0]), &m);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("statevector check needs {needed} qubits, limit is {MAX_SIM_QUBITS}")]
    TooLarge { needed: usize },
    #[error("routed circuit covers {routed} logical qubits, original has {original}")]
    Shape { original: usize, routed: usize },
}

/// Comparison of an original and a routed state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Equivalence {
    /// `|<original|routed>|` after undoing the final placement.
    pub overlap: f64,
    /// Largest amplitude difference once the global phase is removed.
    pub max_deviation: f64,
    pub qubits_simulated: usize,
    pub passed: bool,
}

const PREP_SEED: u64 = 0x51ab_1e5e_ed00_0001;

/// Deterministic random product-state preparation, one `u3` per logical
/// qubit, so the check is not blind to gates that fix |0...0>.
fn preparation(n: usize) -> Vec<Matrix2> {
    let mut rng = ChaCha8Rng::seed_from_u64(PREP_SEED);
    (0..n)
        .map(|_| {
            let tau = std::f64::consts::TAU;
            u3(
                rng.random::<f64>() * tau,
                rng.random::<f64>() * tau,
                rng.random::<f64>() * tau,
            )
        })
        .collect()
}

/// Exact equivalence of `routed` to `original` up to global phase.
///
/// Only physical qubits that hold a logical qubit or are touched by a gate
/// are simulated; the rest stay in |0> by construction.
pub fn statevector_equiv(
    original: &Circuit,
    routed: &MappedCircuit,
    tol: f64,
) -> Result<Equivalence, VerifyError> {
    let n_l = original.num_logical;
    if routed.initial_mapping.num_logical() != n_l || routed.final_mapping.num_logical() != n_l {
        return Err(VerifyError::Shape {
            original: n_l,
            routed: routed.initial_mapping.num_logical(),
        });
    }
    let mut used = vec![false; routed.num_physical];
    for &p in routed.initial_mapping.forward() {
        used[p] = true;
    }
    for g in &routed.gates {
        for &q in &g.qubits {
            used[q] = true;
        }
    }
    let mut wire = vec![usize::MAX; routed.num_physical];
    let mut n_r = 0;
    for p in 0..routed.num_physical {
        if used[p] {
            wire[p] = n_r;
            n_r += 1;
        }
    }
    let needed = n_l.max(n_r);
    if needed > MAX_SIM_QUBITS {
        return Err(VerifyError::TooLarge { needed });
    }

    let prep = preparation(n_l);
    let mut a = StateVector::zero(n_l);
    for (l, m) in prep.iter().enumerate() {
        a.apply_matrix(l, m);
    }
    for g in &original.gates {
        a.apply(g, |q| q);
    }
    let mut b = StateVector::zero(n_r);
    for (l, m) in prep.iter().enumerate() {
        b.apply_matrix(wire[routed.initial_mapping.physical(l)], m);
    }
    for g in &routed.gates {
        b.apply(g, |q| wire[q]);
    }

    let fin: Vec<usize> = (0..n_l)
        .map(|l| wire[routed.final_mapping.physical(l)])
        .collect();
    let index = |x: usize| -> usize {
        (0..n_l)
            .filter(|&l| x >> l & 1 == 1)
            .map(|l| 1usize << fin[l])
            .sum()
    };
    let mut inner = c(0.0, 0.0);
    for x in 0..a.amps.len() {
        inner += a.amps[x].conj() * b.amps[index(x)];
    }
    let overlap = inner.norm();
    let phase = if overlap > 0.0 {
        inner / overlap
    } else {
        c(1.0, 0.0)
    };
    let mut max_deviation: f64 = 0.0;
    let mut matched = vec![false; b.amps.len()];
    for x in 0..a.amps.len() {
        let y = index(x);
        matched[y] = true;
        max_deviation = max_deviation.max((b.amps[y] - phase * a.amps[x]).norm());
    }
    // amplitude outside the image means an ancilla was disturbed
    for (y, amp) in b.amps.iter().enumerate() {
        if !matched[y] {
            max_deviation = max_deviation.max(amp.norm());
        }
    }
    Ok(Equivalence {
        overlap,
        max_deviation,
        qubits_simulated: needed,
        passed: overlap >= 1.0 - tol && max_deviation <= tol,
    })
}

/// One SWAP applied during replay.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub edge: (PhysicalQubit, PhysicalQubit),
    pub before: Mapping,
    pub after: Mapping,
}

/// Time-ordered SWAPs with the placement before and after each.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PermutationTrace {
    pub steps: Vec<TraceStep>,
}

impl PermutationTrace {
    /// Placement reached by composing the trace from `start`.
    pub fn compose(&self, start: &Mapping) -> Mapping {
        let mut pi = start.clone();
        for s in &self.steps {
            pi.swap_physical(s.edge.0, s.edge.1);
        }
        pi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Mismatch {
    /// An inserted gate that is not a SWAP.
    InsertedNotSwap {
        index: usize,
    },
    /// A non-inserted gate with no source gate.
    NoOrigin {
        index: usize,
    },
    UnknownOrigin {
        index: usize,
        origin: GateId,
    },
    Duplicate {
        index: usize,
        origin: GateId,
    },
    /// Kind, parameters or classical bit differ from the source.
    WrongOperation {
        index: usize,
        origin: GateId,
    },
    /// Physical operands do not match the tracked placement.
    WrongOperands {
        index: usize,
        origin: GateId,
        expected: Vec<PhysicalQubit>,
        found: Vec<PhysicalQubit>,
    },
    Missing {
        origin: GateId,
    },
    /// Two source gates that do not commute ran out of order.
    OrderViolation {
        first: GateId,
        second: GateId,
    },
    FinalMapping {
        expected: Mapping,
        found: Mapping,
    },
    InitialMapping,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::InsertedNotSwap { index } => {
                write!(f, "gate {index}: inserted gate is not a swap")
            }
            Mismatch::NoOrigin { index } => write!(f, "gate {index}: no source gate"),
            Mismatch::UnknownOrigin { index, origin } => {
                write!(f, "gate {index}: source {origin} does not exist")
            }
            Mismatch::Duplicate { index, origin } => {
                write!(f, "gate {index}: source {origin} already executed")
            }
            Mismatch::WrongOperation { index, origin } => {
                write!(f, "gate {index}: operation differs from source {origin}")
            }
            Mismatch::WrongOperands {
                index,
                origin,
                expected,
                found,
            } => write!(
                f,
                "gate {index}: source {origin} expects qubits {expected:?}, found {found:?}"
            ),
            Mismatch::Missing { origin } => write!(f, "source gate {origin} never executed"),
            Mismatch::OrderViolation { first, second } => {
                write!(
                    f,
                    "source gates {first} and {second} do not commute but ran out of order"
                )
            }
            Mismatch::FinalMapping { expected, found } => write!(
                f,
                "final mapping {} does not match replay {}",
                found.describe(),
                expected.describe()
            ),
            Mismatch::InitialMapping => write!(f, "initial mapping does not fit the circuit"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PermutationReport {
    pub mismatches: Vec<Mismatch>,
    pub trace: PermutationTrace,
}

impl PermutationReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Replay `routed` in start order (ties by emission order), tracking the
/// placement through every inserted SWAP.
pub fn permutation_check(original: &Circuit, routed: &MappedSchedule) -> PermutationReport {
    let mut report = PermutationReport::default();
    let mc = &routed.mapped_circuit;
    if mc.initial_mapping.num_logical() != original.num_logical {
        report.mismatches.push(Mismatch::InitialMapping);
        return report;
    }
    let mut order: Vec<usize> = (0..routed.scheduled.len()).collect();
    order.sort_by_key(|&i| (routed.scheduled[i].start, i));
    let mut pi = mc.initial_mapping.clone();
    let mut executed: Vec<Option<(u64, u64)>> = vec![None; original.len()];
    for &i in &order {
        let sg = &routed.scheduled[i];
        let g = &sg.gate;
        if g.inserted {
            if g.kind != GateKind::Swap {
                report
                    .mismatches
                    .push(Mismatch::InsertedNotSwap { index: i });
                continue;
            }
            let before = pi.clone();
            pi.swap_physical(g.qubits[0], g.qubits[1]);
            report.trace.steps.push(TraceStep {
                edge: (g.qubits[0], g.qubits[1]),
                before,
                after: pi.clone(),
            });
            continue;
        }
        let Some(o) = sg.origin else {
            report.mismatches.push(Mismatch::NoOrigin { index: i });
            continue;
        };
        let Some(src) = original.gates.get(o) else {
            report.mismatches.push(Mismatch::UnknownOrigin {
                index: i,
                origin: o,
            });
            continue;
        };
        if executed[o].is_some() {
            report.mismatches.push(Mismatch::Duplicate {
                index: i,
                origin: o,
            });
            continue;
        }
        executed[o] = Some((sg.start, sg.end()));
        if !src.same_operation(g) {
            report.mismatches.push(Mismatch::WrongOperation {
                index: i,
                origin: o,
            });
            continue;
        }
        let expected = pi.map_qubits(&src.qubits);
        if expected != g.qubits {
            report.mismatches.push(Mismatch::WrongOperands {
                index: i,
                origin: o,
                expected,
                found: g.qubits.clone(),
            });
        }
    }
    for (o, e) in executed.iter().enumerate() {
        if e.is_none() {
            report.mismatches.push(Mismatch::Missing { origin: o });
        }
    }
    // replay position of every source gate, for order checks
    let mut rank = vec![usize::MAX; original.len()];
    for (pos, &i) in order.iter().enumerate() {
        if let Some(o) = routed.scheduled[i].origin {
            if o < rank.len() && rank[o] == usize::MAX {
                rank[o] = pos;
            }
        }
    }
    let mut per_qubit: Vec<Vec<GateId>> = vec![Vec::new(); original.num_logical];
    for g in &original.gates {
        for &q in &g.qubits {
            per_qubit[q].push(g.id);
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for list in &per_qubit {
        for (k, &a) in list.iter().enumerate() {
            for &b in &list[k + 1..] {
                let (Some((_, end_a)), Some((start_b, _))) = (executed[a], executed[b]) else {
                    continue;
                };
                if commutes(&original.gates[a], &original.gates[b]) || !seen.insert((a, b)) {
                    continue;
                }
                if rank[a] > rank[b] || end_a > start_b {
                    report.mismatches.push(Mismatch::OrderViolation {
                        first: a,
                        second: b,
                    });
                }
            }
        }
    }
    if pi != mc.final_mapping {
        report.mismatches.push(Mismatch::FinalMapping {
            expected: pi,
            found: mc.final_mapping.clone(),
        });
    }
    report
}

/// Attribute each non-inserted gate of a routed program to a source gate:
/// replaying in order, take the earliest unused source gate with the same
/// operation on the qubits the current placement predicts.
pub fn assign_origins(original: &Circuit, mc: &MappedCircuit) -> Vec<Option<GateId>> {
    let mut pi = mc.initial_mapping.clone();
    let mut used = vec![false; original.len()];
    mc.gates
        .iter()
        .map(|g| {
            if g.inserted {
                if g.kind == GateKind::Swap && g.qubits.iter().all(|&q| q < pi.num_physical()) {
                    pi.swap_physical(g.qubits[0], g.qubits[1]);
                }
                return None;
            }
            let hit = original.gates.iter().position(|src| {
                !used[src.id]
                    && src.same_operation(g)
                    && src.qubits.iter().all(|&l| l < pi.num_logical())
                    && pi.map_qubits(&src.qubits) == g.qubits
            });
            if let Some(o) = hit {
                used[o] = true;
            }
            hit
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arch::Architecture;
    use crate::circuit::GateKind::*;
    use crate::router::{route, RouterOptions};

    fn circ(n: usize, gates: &[(GateKind, &[usize])]) -> Circuit {
        Circuit::from_gates(
            n,
            gates
                .iter()
                .map(|(k, q)| Gate::new(*k, q.to_vec()).with_params(vec![0.4; k.num_params()]))
                .collect(),
        )
    }

    fn close(a: &Matrix2, b: &Matrix2) -> bool {
        (0..2).all(|i| (0..2).all(|j| (a[i][j] - b[i][j]).norm() < 1e-12))
    }

    fn mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
        let mut m = [[c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        m
    }

    #[test]
    fn matrix_identities() {
        let m = |k, p: &[f64]| single_qubit_matrix(k, p).unwrap();
        assert!(close(&mul(&m(S, &[]), &m(S, &[])), &m(Z, &[])));
        assert!(close(&mul(&m(T, &[]), &m(T, &[])), &m(S, &[])));
        assert!(close(&mul(&m(Sdg, &[]), &m(S, &[])), &m(U1, &[0.0])));
        assert!(close(&mul(&m(H, &[]), &m(H, &[])), &m(U1, &[0.0])));
        assert!(close(
            &m(U3, &[std::f64::consts::PI, 0.0, std::f64::consts::PI]),
            &m(X, &[])
        ));
        assert!(close(&m(U2, &[0.0, std::f64::consts::PI]), &m(H, &[])));
    }

    #[test]
    fn swap_is_three_cx() {
        for input in 0..4 {
            let mut a = StateVector::zero(2);
            let mut b = StateVector::zero(2);
            for q in 0..2 {
                if input >> q & 1 == 1 {
                    a.apply_matrix(q, &single_qubit_matrix(X, &[]).unwrap());
                    b.apply_matrix(q, &single_qubit_matrix(X, &[]).unwrap());
                }
            }
            a.apply_swap(0, 1);
            b.apply_cx(0, 1);
            b.apply_cx(1, 0);
            b.apply_cx(0, 1);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn qft_fragment_routes_equivalently() {
        let arch = Architecture::new(
            "sq",
            4,
            &[(0, 1), (0, 2), (1, 3), (2, 3)],
            None,
            Default::default(),
        )
        .unwrap();
        let c = circ(4, &[(T, &[2]), (Cx, &[0, 2]), (Cx, &[0, 3])]);
        let s = route(
            &c,
            &arch,
            &Mapping::identity(4, 4),
            &RouterOptions::default(),
        )
        .unwrap();
        assert!(permutation_check(&c, &s).ok());
        assert!(
            statevector_equiv(&c, &s.mapped_circuit, 1e-9)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn flipped_cx_fails() {
        let c = circ(2, &[(H, &[0]), (Cx, &[0, 1])]);
        let mut mc = MappedCircuit::identity_of(&c, 2);
        mc.gates[1].qubits = vec![1, 0];
        assert!(!statevector_equiv(&c, &mc, 1e-9).unwrap().passed);
    }

    #[test]
    fn empty_is_equivalent() {
        let c = Circuit::new(3);
        let e = statevector_equiv(&c, &MappedCircuit::identity_of(&c, 5), 1e-9).unwrap();
        assert!(e.passed);
    }

    #[test]
    fn too_large_is_an_error() {
        let c = Circuit::new(13);
        assert!(matches!(
            statevector_equiv(&c, &MappedCircuit::identity_of(&c, 13), 1e-9),
            Err(VerifyError::TooLarge { needed: 13 })
        ));
    }

    #[test]
    fn deleted_swap_is_caught() {
        let arch = Architecture::line(3).unwrap();
        let c = circ(3, &[(Cx, &[0, 2]), (H, &[0])]);
        let mut s = route(
            &c,
            &arch,
            &Mapping::identity(3, 3),
            &RouterOptions::default(),
        )
        .unwrap();
        assert!(permutation_check(&c, &s).ok());
        let k = s.scheduled.iter().position(|g| g.gate.inserted).unwrap();
        s.scheduled.remove(k);
        s.mapped_circuit.gates.remove(k);
        assert!(!permutation_check(&c, &s).ok());
        assert!(
            !statevector_equiv(&c, &s.mapped_circuit, 1e-9)
                .unwrap()
                .passed
        );
    }

    #[test]
    fn origins_recovered_from_text() {
        let arch = Architecture::line(3).unwrap();
        let c = circ(3, &[(Cx, &[0, 2]), (H, &[0]), (Cx, &[1, 0])]);
        let s = route(
            &c,
            &arch,
            &Mapping::identity(3, 3),
            &RouterOptions::default(),
        )
        .unwrap();
        let origins = assign_origins(&c, &s.mapped_circuit);
        let direct: Vec<_> = s.scheduled.iter().map(|g| g.origin).collect();
        assert_eq!(origins, direct);
    }
}
