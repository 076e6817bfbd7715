//! Gate and circuit types shared by every pass.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::mapping::Mapping;

/// Index of a qubit named in the program source.
pub type LogicalQubit = usize;
/// Index of a qubit on the device.
pub type PhysicalQubit = usize;
/// Position of a gate in its circuit.
pub type GateId = usize;

/// Every operation kind the toolkit understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    Rx,
    Ry,
    Rz,
    U1,
    U2,
    U3,
    Cx,
    Swap,
    Measure,
    Barrier,
}

impl GateKind {
    pub const ALL: [GateKind; 18] = [
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
        GateKind::Barrier,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::U1 => "u1",
            GateKind::U2 => "u2",
            GateKind::U3 => "u3",
            GateKind::Cx => "cx",
            GateKind::Swap => "swap",
            GateKind::Measure => "measure",
            GateKind::Barrier => "barrier",
        }
    }

    /// Number of angle parameters the kind takes.
    pub fn num_params(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::U1 => 1,
            GateKind::U2 => 2,
            GateKind::U3 => 3,
            _ => 0,
        }
    }

    /// Fixed operand count, or `None` for the variadic barrier.
    pub fn arity(self) -> Option<usize> {
        match self {
            GateKind::Cx | GateKind::Swap => Some(2),
            GateKind::Barrier => None,
            _ => Some(1),
        }
    }

    pub fn is_two_qubit(self) -> bool {
        matches!(self, GateKind::Cx | GateKind::Swap)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownGateKind(pub String);

impl fmt::Display for UnknownGateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown gate kind `{}`", self.0)
    }
}

impl std::error::Error for UnknownGateKind {}

impl FromStr for GateKind {
    type Err = UnknownGateKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GateKind::ALL
            .iter()
            .copied()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownGateKind(s.to_string()))
    }
}

/// A single operation. Operand indices are logical in a [`Circuit`] and
/// physical in a [`MappedCircuit`].
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub id: GateId,
    pub kind: GateKind,
    pub params: Vec<f64>,
    pub qubits: Vec<usize>,
    /// Flattened classical bit written by a `measure`.
    pub cbit: Option<usize>,
    /// Set on SWAPs added by a router.
    pub inserted: bool,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>) -> Self {
        Gate {
            id: 0,
            kind,
            params: Vec::new(),
            qubits,
            cbit: None,
            inserted: false,
        }
    }

    pub fn with_params(mut self, params: Vec<f64>) -> Self {
        self.params = params;
        self
    }

    pub fn with_cbit(mut self, cbit: usize) -> Self {
        self.cbit = Some(cbit);
        self
    }

    pub fn inserted_swap(a: PhysicalQubit, b: PhysicalQubit) -> Self {
        Gate {
            inserted: true,
            ..Gate::new(GateKind::Swap, vec![a, b])
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind.is_two_qubit()
    }

    /// Same operation, ignoring id, operands and the inserted flag.
    pub fn same_operation(&self, other: &Gate) -> bool {
        self.kind == other.kind && self.params == other.params && self.cbit == other.cbit
    }
}

/// A named quantum or classical register as declared in the source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Register {
    pub name: String,
    pub size: usize,
}

/// The ordered logical gate sequence of a program.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub gates: Vec<Gate>,
    pub num_logical: usize,
    pub qregs: Vec<Register>,
    pub cregs: Vec<Register>,
}

impl Circuit {
    /// Empty circuit over a single register `q` of `num_logical` qubits.
    pub fn new(num_logical: usize) -> Self {
        Circuit {
            gates: Vec::new(),
            num_logical,
            qregs: vec![Register {
                name: "q".into(),
                size: num_logical,
            }],
            cregs: Vec::new(),
        }
    }

    /// Build from a gate list, renumbering ids by position.
    pub fn from_gates(num_logical: usize, gates: Vec<Gate>) -> Self {
        let mut c = Circuit::new(num_logical);
        for g in gates {
            c.push(g);
        }
        c
    }

    pub fn push(&mut self, mut gate: Gate) -> GateId {
        let id = self.gates.len();
        gate.id = id;
        self.gates.push(gate);
        id
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn num_clbits(&self) -> usize {
        self.cregs.iter().map(|r| r.size).sum()
    }

    pub fn cx_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::Cx).count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Same gates in reverse order, renumbered. Gates are not inverted.
    pub fn reversed(&self) -> Circuit {
        let mut out = self.clone();
        out.gates.reverse();
        for (i, g) in out.gates.iter_mut().enumerate() {
            g.id = i;
        }
        out
    }
}

/// A routed gate sequence over physical qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct MappedCircuit {
    pub gates: Vec<Gate>,
    pub num_physical: usize,
    pub initial_mapping: Mapping,
    pub final_mapping: Mapping,
    pub cregs: Vec<Register>,
}

impl MappedCircuit {
    pub fn swap_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| g.kind == GateKind::Swap && g.inserted)
            .count()
    }

    pub fn cx_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::Cx).count()
    }

    /// An unrouted circuit viewed as a mapped one under the identity
    /// placement on `num_physical` qubits.
    pub fn identity_of(circuit: &Circuit, num_physical: usize) -> MappedCircuit {
        let mapping = Mapping::identity(circuit.num_logical, num_physical);
        MappedCircuit {
            gates: circuit.gates.clone(),
            num_physical,
            initial_mapping: mapping.clone(),
            final_mapping: mapping,
            cregs: circuit.cregs.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in GateKind::ALL {
            assert_eq!(k.name().parse::<GateKind>().unwrap(), k);
        }
        assert!("ccx".parse::<GateKind>().is_err());
    }

    #[test]
    fn reversing_twice_is_identity() {
        let c = Circuit::from_gates(
            3,
            vec![
                Gate::new(GateKind::H, vec![0]),
                Gate::new(GateKind::Cx, vec![0, 2]),
                Gate::new(GateKind::T, vec![1]),
            ],
        );
        let r = c.reversed();
        assert_eq!(r.gates[0].kind, GateKind::T);
        assert_eq!(r.gates[0].id, 0);
        assert_eq!(r.reversed(), c);
    }
}
