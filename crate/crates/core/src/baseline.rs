//! Duration-unaware comparator in the style of front-layer lookahead
//! routers.
//!
//! Gates are released in program order only. Whenever no front-layer
//! two-qubit gate is coupled, one SWAP is chosen by the summed front and
//! lookahead distances, scaled by a per-qubit decay that discourages moving
//! the same qubits repeatedly. Timing plays no part in the choice; the
//! emitted sequence is timed afterwards by [`crate::sched::asap_schedule`].

use serde::Serialize;

use crate::arch::Architecture;
use crate::circuit::{Circuit, Gate, GateId, MappedCircuit, PhysicalQubit};
use crate::commute::DependencyDag;
use crate::mapping::Mapping;
use crate::router::{check_inputs, MappedSchedule, RouteError, RouterStats};
use crate::sched::asap_schedule_with_origins;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineOptions {
    /// Two-qubit gates beyond the front layer considered by the score.
    pub lookahead: usize,
    /// Weight of the lookahead term.
    pub lookahead_weight: f64,
    /// Decay added to both qubits of each chosen SWAP. Larger values spread
    /// SWAPs over more qubits, trading gate count for depth; the default
    /// leans towards depth.
    pub decay_delta: f64,
    /// Decay is reset after this many SWAPs.
    pub decay_reset: usize,
}

impl Default for BaselineOptions {
    fn default() -> Self {
        BaselineOptions {
            lookahead: 20,
            lookahead_weight: 0.5,
            decay_delta: 0.5,
            decay_reset: 5,
        }
    }
}

struct Emitter {
    pi: Mapping,
    gates: Vec<Gate>,
    origins: Vec<Option<GateId>>,
}

impl Emitter {
    fn gate(&mut self, g: &Gate) {
        self.gates.push(Gate {
            qubits: self.pi.map_qubits(&g.qubits),
            ..g.clone()
        });
        self.origins.push(Some(g.id));
    }

    fn swap(&mut self, (a, b): (PhysicalQubit, PhysicalQubit)) {
        self.pi.swap_physical(a, b);
        self.gates.push(Gate::inserted_swap(a.min(b), a.max(b)));
        self.origins.push(None);
    }
}

/// Route `c` onto `arch` from `pi0`, then time the result ASAP.
pub fn baseline_route(
    c: &Circuit,
    arch: &Architecture,
    pi0: &Mapping,
    opts: &BaselineOptions,
) -> Result<MappedSchedule, RouteError> {
    check_inputs(c, arch, pi0)?;
    let dag = DependencyDag::new(c);
    let n = c.len();
    let mut indegree: Vec<usize> = (0..n).map(|i| dag.predecessors(i).len()).collect();
    let mut successors: Vec<Vec<GateId>> = vec![Vec::new(); n];
    for i in 0..n {
        for &p in dag.predecessors(i) {
            successors[p].push(i);
        }
    }
    let mut done = vec![false; n];
    let mut front: Vec<GateId> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut out = Emitter {
        pi: pi0.clone(),
        gates: Vec::new(),
        origins: Vec::new(),
    };
    let mut decay = vec![1.0f64; arch.num_qubits()];
    let mut swaps_since_reset = 0;
    let mut swaps_since_progress = 0;
    let stall_limit = 10 * arch.num_qubits().max(1);
    let mut stats = RouterStats::default();
    // scan cursor for the lookahead window
    let mut cursor = 0;

    while !front.is_empty() {
        stats.cycles += 1;
        stats.max_frontier = stats.max_frontier.max(front.len());
        let mut progressed = false;
        loop {
            front.sort_unstable();
            let ready: Vec<GateId> = front
                .iter()
                .copied()
                .filter(|&id| {
                    let g = dag.gate(id);
                    !g.is_two_qubit()
                        || arch
                            .is_coupled(out.pi.physical(g.qubits[0]), out.pi.physical(g.qubits[1]))
                })
                .collect();
            if ready.is_empty() {
                break;
            }
            progressed = true;
            front.retain(|id| !ready.contains(id));
            for id in ready {
                out.gate(dag.gate(id));
                done[id] = true;
                for &s in &successors[id] {
                    indegree[s] -= 1;
                    if indegree[s] == 0 {
                        front.push(s);
                    }
                }
            }
        }
        if front.is_empty() {
            break;
        }
        if progressed {
            swaps_since_progress = 0;
            decay.iter_mut().for_each(|d| *d = 1.0);
            swaps_since_reset = 0;
        }

        // every front gate is now an uncoupled two-qubit gate
        let front_gates: Vec<&Gate> = front.iter().map(|&id| dag.gate(id)).collect();
        if swaps_since_progress >= stall_limit {
            let g = front_gates[0];
            let path = shortest_path(
                arch,
                out.pi.physical(g.qubits[0]),
                out.pi.physical(g.qubits[1]),
            );
            for w in path.windows(2).take(path.len() - 2) {
                out.swap((w[0], w[1]));
                stats.swaps += 1;
            }
            stats.deadlocks += 1;
            swaps_since_progress = 0;
            continue;
        }

        while cursor < n && done[cursor] {
            cursor += 1;
        }
        let extended: Vec<&Gate> = (cursor..n)
            .filter(|&i| !done[i] && !front.contains(&i))
            .map(|i| dag.gate(i))
            .filter(|g| g.is_two_qubit())
            .take(opts.lookahead)
            .collect();

        let mut candidates = Vec::new();
        for g in &front_gates {
            for &l in &g.qubits {
                let p = out.pi.physical(l);
                for &q in arch.neighbors(p) {
                    candidates.push((p.min(q), p.max(q)));
                }
            }
        }
        candidates.sort_unstable();
        candidates.dedup();

        let mut best: Option<((PhysicalQubit, PhysicalQubit), f64)> = None;
        for &edge in &candidates {
            let score = swap_score(arch, &out.pi, edge, &front_gates, &extended, opts)
                * decay[edge.0].max(decay[edge.1]);
            // strict comparison keeps the smallest edge among ties
            if best.is_none_or(|(_, s)| score < s - 1e-12) {
                best = Some((edge, score));
            }
        }
        let (edge, _) = best.expect("front gate has a neighbour");
        out.swap(edge);
        stats.swaps += 1;
        swaps_since_progress += 1;
        decay[edge.0] += opts.decay_delta;
        decay[edge.1] += opts.decay_delta;
        swaps_since_reset += 1;
        if swaps_since_reset >= opts.decay_reset {
            decay.iter_mut().for_each(|d| *d = 1.0);
            swaps_since_reset = 0;
        }
    }

    let final_mapping = out.pi.clone();
    let mc = MappedCircuit {
        gates: out.gates,
        num_physical: arch.num_qubits(),
        initial_mapping: pi0.clone(),
        final_mapping,
        cregs: c.cregs.clone(),
    };
    let mut s = asap_schedule_with_origins(&mc, arch, &out.origins)
        .expect("baseline emits only coupled two-qubit gates");
    s.stats = stats;
    Ok(s)
}

fn swap_score(
    arch: &Architecture,
    pi: &Mapping,
    (a, b): (PhysicalQubit, PhysicalQubit),
    front: &[&Gate],
    extended: &[&Gate],
    opts: &BaselineOptions,
) -> f64 {
    let moved = |p: PhysicalQubit| {
        if p == a {
            b
        } else if p == b {
            a
        } else {
            p
        }
    };
    let dist = |gs: &[&Gate]| -> f64 {
        gs.iter()
            .map(|g| {
                let x = moved(pi.physical(g.qubits[0]));
                let y = moved(pi.physical(g.qubits[1]));
                arch.distance(x, y) as f64
            })
            .sum()
    };
    let mut score = dist(front) / front.len() as f64;
    if !extended.is_empty() {
        score += opts.lookahead_weight * dist(extended) / extended.len() as f64;
    }
    score
}

/// Vertices of one shortest path from `a` to `b`, endpoints included.
fn shortest_path(arch: &Architecture, a: PhysicalQubit, b: PhysicalQubit) -> Vec<PhysicalQubit> {
    let mut path = vec![a];
    let mut cur = a;
    while cur != b {
        cur = *arch
            .neighbors(cur)
            .iter()
            .filter(|&&n| arch.distance(n, b) < arch.distance(cur, b))
            .min()
            .expect("connected graph");
        path.push(cur);
    }
    path
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind::{self, *};
    use crate::sched::{asap_schedule, validate_schedule};

    fn circ(n: usize, gates: &[(GateKind, &[usize])]) -> Circuit {
        Circuit::from_gates(
            n,
            gates
                .iter()
                .map(|(k, q)| Gate::new(*k, q.to_vec()))
                .collect(),
        )
    }

    #[test]
    fn compliant_circuit_is_untouched() {
        let arch = Architecture::line(3).unwrap();
        let c = circ(
            3,
            &[(H, &[0]), (Cx, &[0, 1]), (Cx, &[2, 1]), (Measure, &[2])],
        );
        let pi = Mapping::identity(3, 3);
        let s = baseline_route(&c, &arch, &pi, &Default::default()).unwrap();
        assert_eq!(s.swap_count, 0);
        let direct = asap_schedule(&MappedCircuit::identity_of(&c, 3), &arch).unwrap();
        assert_eq!(s.weighted_depth, direct.weighted_depth);
    }

    #[test]
    fn line_needs_exactly_one_swap() {
        let arch = Architecture::line(3).unwrap();
        let c = circ(3, &[(Cx, &[0, 2])]);
        let s = baseline_route(&c, &arch, &Mapping::identity(3, 3), &Default::default()).unwrap();
        assert_eq!(s.swap_count, 1);
        assert!(validate_schedule(&s, &arch).is_empty());
    }

    #[test]
    fn deterministic() {
        let arch = Architecture::grid(2, 3).unwrap();
        let c = circ(
            6,
            &[
                (Cx, &[0, 5]),
                (Cx, &[1, 4]),
                (H, &[2]),
                (Cx, &[3, 2]),
                (Cx, &[5, 0]),
            ],
        );
        let pi = Mapping::identity(6, 6);
        let a = baseline_route(&c, &arch, &pi, &Default::default()).unwrap();
        let b = baseline_route(&c, &arch, &pi, &Default::default()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn shortest_path_on_grid() {
        let arch = Architecture::grid(3, 3).unwrap();
        let p = shortest_path(&arch, 0, 8);
        assert_eq!(p.len(), 5);
        assert_eq!((p[0], p[4]), (0, 8));
    }
}
