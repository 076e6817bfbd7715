//! Duration-aware SWAP insertion.
//!
//! The router simulates the device timeline. Every physical qubit carries a
//! lock `t_end`, the cycle at which it next becomes free. At each event time
//! it launches the commutation-forward gates that are free and coupled, then
//! greedily starts SWAPs on free edges around the waiting two-qubit gates,
//! ranked by total distance reduction and, on grid devices, by how balanced
//! the remaining horizontal and vertical separation is.

use serde::Serialize;
use thiserror::Error;

use crate::arch::Architecture;
use crate::circuit::{Circuit, Gate, GateId, GateKind, MappedCircuit, PhysicalQubit};
use crate::commute::{DependencyDag, Frontier};
use crate::mapping::Mapping;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RouteError {
    #[error("{num_logical} logical qubits do not fit on {num_physical} physical qubits")]
    Capacity {
        num_logical: usize,
        num_physical: usize,
    },
    #[error("initial mapping covers {mapping_logical} logical / {mapping_physical} physical qubits, circuit needs {num_logical} on {num_physical}")]
    MappingShape {
        mapping_logical: usize,
        mapping_physical: usize,
        num_logical: usize,
        num_physical: usize,
    },
    #[error("deadlock at cycle {time} with forced swaps disabled")]
    Deadlock { time: u64 },
    #[error("router exceeded its iteration budget of {budget} swap cycles")]
    Budget { budget: usize },
}

/// Check the shapes shared by every router entry point.
pub(crate) fn check_inputs(
    c: &Circuit,
    arch: &Architecture,
    pi0: &Mapping,
) -> Result<(), RouteError> {
    if c.num_logical > arch.num_qubits() {
        return Err(RouteError::Capacity {
            num_logical: c.num_logical,
            num_physical: arch.num_qubits(),
        });
    }
    if pi0.num_logical() != c.num_logical || pi0.num_physical() != arch.num_qubits() {
        return Err(RouteError::MappingShape {
            mapping_logical: pi0.num_logical(),
            mapping_physical: pi0.num_physical(),
            num_logical: c.num_logical,
            num_physical: arch.num_qubits(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeadlockPolicy {
    /// Apply the best candidate even though it does not pay off.
    #[default]
    ForcedSwap,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RouterOptions {
    /// Use the grid balance term as the second ranking key.
    pub fine: bool,
    pub deadlock: DeadlockPolicy,
    /// Maximum number of cycles that insert SWAPs. `None` means
    /// `10 * gates * N_P`.
    pub iteration_budget: Option<usize>,
}

impl Default for RouterOptions {
    fn default() -> Self {
        RouterOptions {
            fine: true,
            deadlock: DeadlockPolicy::ForcedSwap,
            iteration_budget: None,
        }
    }
}

/// A gate on physical qubits with its start cycle.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduledGate {
    pub gate: Gate,
    pub start: u64,
    pub duration: u32,
    /// Index of the source gate, `None` for inserted SWAPs.
    pub origin: Option<GateId>,
}

impl ScheduledGate {
    pub fn end(&self) -> u64 {
        self.start + self.duration as u64
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RouterStats {
    /// Event times visited.
    pub cycles: usize,
    /// Cycles in which at least one SWAP started.
    pub swap_cycles: usize,
    pub swaps: usize,
    /// SWAPs started by the deadlock rule.
    pub deadlocks: usize,
    pub max_frontier: usize,
}

/// Router output: the timed gate list and the plain gate sequence it
/// emits, in the same order.
#[derive(Debug, Clone, PartialEq)]
pub struct MappedSchedule {
    pub scheduled: Vec<ScheduledGate>,
    pub mapped_circuit: MappedCircuit,
    pub weighted_depth: u64,
    pub swap_count: usize,
    pub stats: RouterStats,
}

impl MappedSchedule {
    /// Assemble from scheduled gates in emission order.
    pub fn from_scheduled(
        mut scheduled: Vec<ScheduledGate>,
        num_physical: usize,
        initial_mapping: Mapping,
        final_mapping: Mapping,
        cregs: Vec<crate::circuit::Register>,
        stats: RouterStats,
    ) -> Self {
        for (i, s) in scheduled.iter_mut().enumerate() {
            s.gate.id = i;
        }
        let weighted_depth = scheduled.iter().map(ScheduledGate::end).max().unwrap_or(0);
        let gates: Vec<Gate> = scheduled.iter().map(|s| s.gate.clone()).collect();
        let swap_count = gates.iter().filter(|g| g.inserted).count();
        MappedSchedule {
            scheduled,
            mapped_circuit: MappedCircuit {
                gates,
                num_physical,
                initial_mapping,
                final_mapping,
                cregs,
            },
            weighted_depth,
            swap_count,
            stats,
        }
    }
}

/// A lock-free edge next to a waiting two-qubit gate, with its priority.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CandidateSwap {
    pub edge: (PhysicalQubit, PhysicalQubit),
    pub h_basic: i64,
    pub h_fine: i64,
}

impl CandidateSwap {
    /// Ranking key; larger is better. Ties go to the smaller edge.
    fn key(&self) -> (i64, i64, std::cmp::Reverse<(PhysicalQubit, PhysicalQubit)>) {
        (self.h_basic, self.h_fine, std::cmp::Reverse(self.edge))
    }
}

fn gate_distance(arch: &Architecture, pi: &Mapping, g: &Gate) -> u32 {
    arch.distance(pi.physical(g.qubits[0]), pi.physical(g.qubits[1]))
}

/// Physical operands of `g` after exchanging the occupants of `a` and `b`.
fn operands_after(
    pi: &Mapping,
    g: &Gate,
    (a, b): (PhysicalQubit, PhysicalQubit),
) -> (PhysicalQubit, PhysicalQubit) {
    let moved = |p: PhysicalQubit| {
        if p == a {
            b
        } else if p == b {
            a
        } else {
            p
        }
    };
    (
        moved(pi.physical(g.qubits[0])),
        moved(pi.physical(g.qubits[1])),
    )
}

/// Total distance reduction over `pending` if `edge` were swapped.
pub fn h_basic(
    edge: (PhysicalQubit, PhysicalQubit),
    pending: &[&Gate],
    pi: &Mapping,
    arch: &Architecture,
) -> i64 {
    pending
        .iter()
        .map(|g| {
            let (x, y) = operands_after(pi, g, edge);
            gate_distance(arch, pi, g) as i64 - arch.distance(x, y) as i64
        })
        .sum()
}

/// Sum of `-|VD - HD|` over `pending` after swapping `edge`; zero when the
/// device has no grid.
pub fn h_fine(
    edge: (PhysicalQubit, PhysicalQubit),
    pending: &[&Gate],
    pi: &Mapping,
    arch: &Architecture,
) -> i64 {
    if !arch.has_grid() {
        return 0;
    }
    pending
        .iter()
        .map(|g| {
            let (x, y) = operands_after(pi, g, edge);
            let (hd, vd) = arch.hd_vd(x, y).expect("grid present");
            -(vd as i64 - hd as i64).abs()
        })
        .sum()
}

/// Lock-free edges touching a mapped operand of any pending gate, sorted
/// and deduplicated.
pub fn candidate_swaps(
    pending: &[&Gate],
    t_end: &[u64],
    pi: &Mapping,
    arch: &Architecture,
    t: u64,
) -> Vec<(PhysicalQubit, PhysicalQubit)> {
    let mut out = Vec::new();
    for g in pending {
        for &l in &g.qubits {
            let p = pi.physical(l);
            if t_end[p] > t {
                continue;
            }
            for &n in arch.neighbors(p) {
                if t_end[n] <= t {
                    out.push((p.min(n), p.max(n)));
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Gates of `frontier` launchable at `t`: operands free and, for two-qubit
/// kinds, coupled.
pub fn directly_executable(
    frontier: &[GateId],
    gates: &[Gate],
    t_end: &[u64],
    pi: &Mapping,
    arch: &Architecture,
    t: u64,
) -> Vec<GateId> {
    frontier
        .iter()
        .copied()
        .filter(|&id| executable(&gates[id], t_end, pi, arch, t))
        .collect()
}

fn executable(g: &Gate, t_end: &[u64], pi: &Mapping, arch: &Architecture, t: u64) -> bool {
    let free = g.qubits.iter().all(|&l| t_end[pi.physical(l)] <= t);
    free && (!g.is_two_qubit()
        || arch.is_coupled(pi.physical(g.qubits[0]), pi.physical(g.qubits[1])))
}

/// Next event time after a cycle at `t`. `None` when every qubit is free.
pub fn advance_time(t_end: &[u64], t: u64, progress: bool) -> Option<u64> {
    match t_end.iter().copied().filter(|&e| e > t).min() {
        Some(next) => Some(next),
        None if progress => Some(t),
        None => None,
    }
}

struct State<'a> {
    arch: &'a Architecture,
    pi: Mapping,
    t_end: Vec<u64>,
    scheduled: Vec<ScheduledGate>,
    stats: RouterStats,
}

impl State<'_> {
    fn launch(&mut self, g: &Gate, t: u64) {
        let dur = self.arch.duration(g.kind);
        let phys = self.pi.map_qubits(&g.qubits);
        for &p in &phys {
            self.t_end[p] = self.t_end[p].max(t + dur as u64);
        }
        self.scheduled.push(ScheduledGate {
            gate: Gate {
                qubits: phys,
                ..g.clone()
            },
            start: t,
            duration: dur,
            origin: Some(g.id),
        });
    }

    fn swap(&mut self, (a, b): (PhysicalQubit, PhysicalQubit), t: u64) {
        let dur = self.arch.duration(GateKind::Swap);
        self.pi.swap_physical(a, b);
        self.t_end[a] = t + dur as u64;
        self.t_end[b] = t + dur as u64;
        self.scheduled.push(ScheduledGate {
            gate: Gate::inserted_swap(a, b),
            start: t,
            duration: dur,
            origin: None,
        });
        self.stats.swaps += 1;
    }

    fn rank(
        &self,
        edges: &[(PhysicalQubit, PhysicalQubit)],
        pending: &[&Gate],
        fine: bool,
    ) -> Vec<CandidateSwap> {
        edges
            .iter()
            .map(|&edge| CandidateSwap {
                edge,
                h_basic: h_basic(edge, pending, &self.pi, self.arch),
                h_fine: if fine {
                    h_fine(edge, pending, &self.pi, self.arch)
                } else {
                    0
                },
            })
            .collect()
    }
}

/// Route `c` onto `arch` starting from `pi0`.
pub fn route(
    c: &Circuit,
    arch: &Architecture,
    pi0: &Mapping,
    opts: &RouterOptions,
) -> Result<MappedSchedule, RouteError> {
    check_inputs(c, arch, pi0)?;
    let dag = DependencyDag::new(c);
    let mut frontier = Frontier::new(&dag);
    let budget = opts
        .iteration_budget
        .unwrap_or(10 * c.len().max(1) * arch.num_qubits().max(1));
    let mut st = State {
        arch,
        pi: pi0.clone(),
        t_end: vec![0; arch.num_qubits()],
        scheduled: Vec::with_capacity(c.len()),
        stats: RouterStats::default(),
    };
    // After a forced swap, the gate it served; no swap may lengthen it until
    // something launches.
    let mut escape: Option<GateId> = None;
    let mut t = 0u64;

    while frontier.remaining() > 0 {
        st.stats.cycles += 1;
        let cf = frontier.gates();
        st.stats.max_frontier = st.stats.max_frontier.max(cf.len());

        let mut launched = false;
        // a zero-duration launch may release successors at this same cycle
        let mut instant = false;
        for &id in &cf {
            let g = dag.gate(id);
            if executable(g, &st.t_end, &st.pi, arch, t) {
                st.launch(g, t);
                frontier.mark_done(id);
                launched = true;
                instant |= arch.duration(g.kind) == 0;
            }
        }
        if launched {
            escape = None;
        }

        let pending: Vec<&Gate> = cf
            .iter()
            .filter(|&&id| !frontier.is_done(id))
            .map(|&id| dag.gate(id))
            .filter(|g| g.is_two_qubit())
            .collect();
        let mut edges = candidate_swaps(&pending, &st.t_end, &st.pi, arch, t);
        if let Some(target) = escape {
            let g = dag.gate(target);
            let now = gate_distance(arch, &st.pi, g);
            edges.retain(|&e| {
                let (x, y) = operands_after(&st.pi, g, e);
                arch.distance(x, y) <= now
            });
        }

        let mut swapped = false;
        loop {
            let best = st
                .rank(&edges, &pending, opts.fine)
                .into_iter()
                .max_by_key(CandidateSwap::key);
            let Some(best) = best.filter(|c| c.h_basic > 0) else {
                break;
            };
            st.swap(best.edge, t);
            swapped = true;
            let (a, b) = best.edge;
            edges.retain(|&(x, y)| x != a && x != b && y != a && y != b);
            if let Some(target) = escape {
                let g = dag.gate(target);
                let now = gate_distance(arch, &st.pi, g);
                edges.retain(|&e| {
                    let (x, y) = operands_after(&st.pi, g, e);
                    arch.distance(x, y) <= now
                });
            }
        }

        let progress = launched || swapped;
        let next = advance_time(&st.t_end, t, progress);
        if next.is_none() {
            // Everything is idle and nothing pays off.
            if opts.deadlock == DeadlockPolicy::Error {
                return Err(RouteError::Deadlock { time: t });
            }
            let target = *pending
                .iter()
                .min_by_key(|g| g.id)
                .expect("deadlock implies a waiting two-qubit gate");
            let now = gate_distance(arch, &st.pi, target);
            let edges: Vec<_> = candidate_swaps(&pending, &st.t_end, &st.pi, arch, t)
                .into_iter()
                .filter(|&e| {
                    let (x, y) = operands_after(&st.pi, target, e);
                    arch.distance(x, y) < now
                })
                .collect();
            let best = st
                .rank(&edges, &pending, opts.fine)
                .into_iter()
                .max_by_key(CandidateSwap::key)
                .expect("an idle operand always has a shortening neighbour");
            st.swap(best.edge, t);
            st.stats.deadlocks += 1;
            swapped = true;
            escape = Some(target.id);
        }
        if swapped {
            st.stats.swap_cycles += 1;
            if st.stats.swap_cycles > budget {
                return Err(RouteError::Budget { budget });
            }
        }
        if !instant {
            t = advance_time(&st.t_end, t, true).expect("a lock is pending");
        }
    }

    Ok(MappedSchedule::from_scheduled(
        st.scheduled,
        arch.num_qubits(),
        pi0.clone(),
        st.pi,
        c.cregs.clone(),
        st.stats,
    ))
}
