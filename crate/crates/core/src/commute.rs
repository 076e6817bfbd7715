//! Per-qubit dependency structure and the commutation-forward frontier.
//!
//! Two gates sharing a qubit commute there when both act in the same basis
//! class on it: the Z class holds the diagonal kinds and a CX control, the
//! X class holds `x`, `rx` and a CX target. Everything else, including
//! `measure` and `barrier`, commutes with nothing. Within a class the
//! relation is an equivalence, which keeps the frontier scan linear.

use crate::circuit::{Circuit, Gate, GateId, GateKind, LogicalQubit};

/// Basis class of a gate on one of its operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Z,
    X,
    Other,
}

/// Role of `gate` on its operand at position `slot`.
pub fn role(gate: &Gate, slot: usize) -> Role {
    use GateKind::*;
    match gate.kind {
        Z | S | Sdg | T | Tdg | Rz | U1 => Role::Z,
        X | Rx => Role::X,
        Cx if slot == 0 => Role::Z,
        Cx => Role::X,
        _ => Role::Other,
    }
}

fn role_on(gate: &Gate, q: LogicalQubit) -> Option<Role> {
    gate.qubits
        .iter()
        .position(|&p| p == q)
        .map(|slot| role(gate, slot))
}

/// Whether `a` and `b` commute on their shared qubit `q`.
///
/// Panics if either gate does not act on `q`.
pub fn commutes_on(a: &Gate, b: &Gate, q: LogicalQubit) -> bool {
    let ra = role_on(a, q).expect("first gate acts on qubit");
    let rb = role_on(b, q).expect("second gate acts on qubit");
    ra == rb && ra != Role::Other
}

/// Whether `a` and `b` commute on every qubit they share. Disjoint gates
/// trivially do.
pub fn commutes(a: &Gate, b: &Gate) -> bool {
    a.qubits
        .iter()
        .filter(|q| b.qubits.contains(q))
        .all(|&q| commutes_on(a, b, q))
}

/// Program-order occupancy of every logical qubit, plus direct
/// predecessors.
#[derive(Debug, Clone)]
pub struct DependencyDag {
    gates: Vec<Gate>,
    /// Gate ids touching each qubit, in program order.
    per_qubit: Vec<Vec<GateId>>,
    preds: Vec<Vec<GateId>>,
}

impl DependencyDag {
    pub fn new(c: &Circuit) -> Self {
        let mut per_qubit = vec![Vec::new(); c.num_logical];
        let mut preds = Vec::with_capacity(c.len());
        for g in &c.gates {
            let mut p = Vec::new();
            for &q in &g.qubits {
                if let Some(&prev) = per_qubit[q].last() {
                    if !p.contains(&prev) {
                        p.push(prev);
                    }
                }
                per_qubit[q].push(g.id);
            }
            p.sort_unstable();
            preds.push(p);
        }
        DependencyDag {
            gates: c.gates.clone(),
            per_qubit,
            preds,
        }
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gate(&self, id: GateId) -> &Gate {
        &self.gates[id]
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn num_qubits(&self) -> usize {
        self.per_qubit.len()
    }

    pub fn on_qubit(&self, q: LogicalQubit) -> &[GateId] {
        &self.per_qubit[q]
    }

    /// Nearest earlier gate on each shared qubit.
    pub fn predecessors(&self, id: GateId) -> &[GateId] {
        &self.preds[id]
    }
}

/// Incremental frontier state: which gates are done, and per qubit the
/// first occupancy index that is not.
#[derive(Debug, Clone)]
pub struct Frontier<'a> {
    dag: &'a DependencyDag,
    done: Vec<bool>,
    head: Vec<usize>,
    remaining: usize,
}

impl<'a> Frontier<'a> {
    pub fn new(dag: &'a DependencyDag) -> Self {
        Frontier {
            dag,
            done: vec![false; dag.len()],
            head: vec![0; dag.num_qubits()],
            remaining: dag.len(),
        }
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn is_done(&self, id: GateId) -> bool {
        self.done[id]
    }

    pub fn mark_done(&mut self, id: GateId) {
        assert!(!self.done[id], "gate {id} executed twice");
        self.done[id] = true;
        self.remaining -= 1;
        for &q in &self.dag.gate(id).qubits {
            let list = &self.dag.per_qubit[q];
            let h = &mut self.head[q];
            while *h < list.len() && self.done[list[*h]] {
                *h += 1;
            }
        }
    }

    /// The CF gates in ascending id.
    pub fn gates(&self) -> Vec<GateId> {
        cf_scan(self.dag, &self.done, &self.head)
    }
}

/// Every unexecuted gate whose earlier unexecuted sharers all commute with
/// it on every shared qubit, in ascending id.
pub fn cf_frontier(dag: &DependencyDag, done: &[bool]) -> Vec<GateId> {
    cf_scan(dag, done, &vec![0; dag.num_qubits()])
}

fn cf_scan(dag: &DependencyDag, done: &[bool], head: &[usize]) -> Vec<GateId> {
    // one hit per operand on which the gate is not blocked
    let mut hits: Vec<GateId> = Vec::new();
    for (q, list) in dag.per_qubit.iter().enumerate() {
        let mut class = None;
        for &id in &list[head[q]..] {
            if done[id] {
                continue;
            }
            let g = dag.gate(id);
            let slot = g
                .qubits
                .iter()
                .position(|&gq| gq == q)
                .expect("gate on its qubit");
            let r = role(g, slot);
            match class {
                None => class = Some(r),
                Some(c) if c == r && r != Role::Other => {}
                Some(_) => break,
            }
            hits.push(id);
            if r == Role::Other {
                break;
            }
        }
    }
    hits.sort_unstable();
    let mut out = Vec::new();
    let mut i = 0;
    while i < hits.len() {
        let id = hits[i];
        let mut n = 0;
        while i < hits.len() && hits[i] == id {
            n += 1;
            i += 1;
        }
        if n == dag.gate(id).qubits.len() {
            out.push(id);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind::*;

    fn circ(n: usize, gates: &[(GateKind, &[usize])]) -> Circuit {
        Circuit::from_gates(
            n,
            gates
                .iter()
                .map(|(k, q)| {
                    let g = Gate::new(*k, q.to_vec());
                    if k.num_params() > 0 {
                        g.with_params(vec![0.3; k.num_params()])
                    } else {
                        g
                    }
                })
                .collect(),
        )
    }

    /// Reference frontier straight from the definition, quadratic.
    fn naive(c: &Circuit, done: &[bool]) -> Vec<GateId> {
        (0..c.len())
            .filter(|&i| !done[i])
            .filter(|&i| (0..i).all(|j| done[j] || commutes(&c.gates[j], &c.gates[i])))
            .collect()
    }

    #[test]
    fn dag_edges() {
        let c = circ(2, &[(H, &[0]), (Cx, &[0, 1])]);
        assert_eq!(DependencyDag::new(&c).predecessors(1), &[0]);
        let c = circ(2, &[(H, &[0]), (X, &[1])]);
        assert!(DependencyDag::new(&c).predecessors(1).is_empty());
        let c = circ(4, &[(T, &[2]), (Cx, &[0, 2]), (Cx, &[0, 3])]);
        let d = DependencyDag::new(&c);
        assert_eq!(d.predecessors(1), &[0]);
        assert_eq!(d.predecessors(2), &[1]);
    }

    #[test]
    fn table_examples() {
        let a = Gate::new(Cx, vec![0, 1]);
        let b = Gate::new(Cx, vec![0, 2]);
        assert!(commutes_on(&a, &b, 0));
        assert!(!commutes_on(&Gate::new(T, vec![2]), &b, 2));
        assert!(commutes_on(&Gate::new(X, vec![1]), &a, 1));
        assert!(!commutes_on(&Gate::new(Barrier, vec![0, 1]), &a, 0));
        assert!(!commutes(&a, &Gate::new(Cx, vec![1, 0])));
    }

    #[test]
    fn qft_fragment_frontier() {
        // t and the cx target on q2 are in different classes, so the first
        // cx waits; the second shares only a control with it and may pass.
        let c = circ(4, &[(T, &[2]), (Cx, &[0, 2]), (Cx, &[0, 3])]);
        let d = DependencyDag::new(&c);
        assert_eq!(cf_frontier(&d, &[false; 3]), vec![0, 2]);
        let c = circ(4, &[(T, &[1]), (Cx, &[0, 2]), (Cx, &[0, 3])]);
        assert_eq!(
            cf_frontier(&DependencyDag::new(&c), &[false; 3]),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn frontier_edge_cases() {
        let c = circ(2, &[(H, &[0]), (Cx, &[0, 1])]);
        let d = DependencyDag::new(&c);
        assert_eq!(cf_frontier(&d, &[false, false]), vec![0]);
        assert!(cf_frontier(&d, &[true, true]).is_empty());
    }

    #[test]
    fn incremental_matches_stateless() {
        let c = circ(
            3,
            &[
                (Rz, &[0]),
                (Cx, &[0, 1]),
                (X, &[1]),
                (H, &[2]),
                (Cx, &[2, 1]),
            ],
        );
        let d = DependencyDag::new(&c);
        let mut f = Frontier::new(&d);
        let mut done = vec![false; c.len()];
        for id in [0, 3, 2, 1, 4] {
            assert_eq!(f.gates(), cf_frontier(&d, &done));
            assert!(f.gates().contains(&id), "{id} not in {:?}", f.gates());
            f.mark_done(id);
            done[id] = true;
        }
        assert_eq!(f.remaining(), 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        const KINDS: [GateKind; 10] = [H, X, Z, S, T, Rx, Rz, Cx, Measure, Barrier];

        fn arb_circuit() -> impl Strategy<Value = Circuit> {
            let gate = (0usize..KINDS.len(), 0usize..5, 1usize..5);
            proptest::collection::vec(gate, 0..25).prop_map(|raw| {
                let gates = raw
                    .into_iter()
                    .map(|(k, a, off)| {
                        let kind = KINDS[k];
                        let qs = match kind {
                            Cx => vec![a, (a + off) % 5],
                            Barrier => {
                                let mut v = vec![a, (a + off) % 5];
                                v.dedup();
                                v
                            }
                            _ => vec![a],
                        };
                        Gate::new(kind, qs).with_params(vec![0.7; kind.num_params()])
                    })
                    .collect();
                Circuit::from_gates(5, gates)
            })
        }

        proptest! {
            #[test]
            fn scan_matches_definition(c in arb_circuit(), order in any::<u64>()) {
                let d = DependencyDag::new(&c);
                let mut done = vec![false; c.len()];
                let mut f = Frontier::new(&d);
                let mut pick = order;
                while f.remaining() > 0 {
                    let fr = f.gates();
                    prop_assert_eq!(&fr, &naive(&c, &done));
                    prop_assert!(!fr.is_empty());
                    let id = fr[(pick % fr.len() as u64) as usize];
                    pick = pick.rotate_left(7) ^ 0x9e37;
                    f.mark_done(id);
                    done[id] = true;
                }
            }

            #[test]
            fn commutation_is_symmetric(c in arb_circuit()) {
                for a in &c.gates {
                    for b in &c.gates {
                        prop_assert_eq!(commutes(a, b), commutes(b, a));
                    }
                }
            }
        }
    }
}
