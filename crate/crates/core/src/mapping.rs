//! Logical-to-physical qubit placement.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{LogicalQubit, PhysicalQubit};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MappingError {
    #[error("logical qubit {logical} mapped to physical {physical}, outside [0, {num_physical})")]
    OutOfRange {
        logical: LogicalQubit,
        physical: PhysicalQubit,
        num_physical: usize,
    },
    #[error("physical qubit {0} assigned to more than one logical qubit")]
    NotInjective(PhysicalQubit),
    #[error("{num_logical} logical qubits do not fit on {num_physical} physical qubits")]
    Capacity {
        num_logical: usize,
        num_physical: usize,
    },
}

/// Injective map from logical to physical qubits, with its inverse kept in
/// step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MappingRepr", into = "MappingRepr")]
pub struct Mapping {
    forward: Vec<PhysicalQubit>,
    reverse: Vec<Option<LogicalQubit>>,
}

#[derive(Serialize, Deserialize)]
struct MappingRepr {
    num_physical: usize,
    forward: Vec<PhysicalQubit>,
}

impl TryFrom<MappingRepr> for Mapping {
    type Error = MappingError;

    fn try_from(r: MappingRepr) -> Result<Self, Self::Error> {
        Mapping::new(r.forward, r.num_physical)
    }
}

impl From<Mapping> for MappingRepr {
    fn from(m: Mapping) -> Self {
        MappingRepr {
            num_physical: m.num_physical(),
            forward: m.forward,
        }
    }
}

impl Mapping {
    pub fn new(forward: Vec<PhysicalQubit>, num_physical: usize) -> Result<Self, MappingError> {
        if forward.len() > num_physical {
            return Err(MappingError::Capacity {
                num_logical: forward.len(),
                num_physical,
            });
        }
        let mut reverse = vec![None; num_physical];
        for (l, &p) in forward.iter().enumerate() {
            if p >= num_physical {
                return Err(MappingError::OutOfRange {
                    logical: l,
                    physical: p,
                    num_physical,
                });
            }
            if reverse[p].is_some() {
                return Err(MappingError::NotInjective(p));
            }
            reverse[p] = Some(l);
        }
        Ok(Mapping { forward, reverse })
    }

    /// Logical qubit `i` on physical qubit `i`.
    ///
    /// Panics if `num_logical > num_physical`.
    pub fn identity(num_logical: usize, num_physical: usize) -> Self {
        Mapping::new((0..num_logical).collect(), num_physical).expect("identity mapping")
    }

    pub fn num_logical(&self) -> usize {
        self.forward.len()
    }

    pub fn num_physical(&self) -> usize {
        self.reverse.len()
    }

    pub fn physical(&self, l: LogicalQubit) -> PhysicalQubit {
        self.forward[l]
    }

    pub fn logical(&self, p: PhysicalQubit) -> Option<LogicalQubit> {
        self.reverse[p]
    }

    pub fn forward(&self) -> &[PhysicalQubit] {
        &self.forward
    }

    /// Exchange the logical occupants of two physical qubits. Either side may
    /// be unoccupied.
    pub fn swap_physical(&mut self, a: PhysicalQubit, b: PhysicalQubit) {
        let la = self.reverse[a];
        let lb = self.reverse[b];
        self.reverse[a] = lb;
        self.reverse[b] = la;
        if let Some(l) = la {
            self.forward[l] = b;
        }
        if let Some(l) = lb {
            self.forward[l] = a;
        }
    }

    pub fn map_qubits(&self, logical: &[LogicalQubit]) -> Vec<PhysicalQubit> {
        logical.iter().map(|&l| self.forward[l]).collect()
    }

    /// Compact text form `0->3 1->0 ...` used in emitted headers.
    pub fn describe(&self) -> String {
        self.forward
            .iter()
            .enumerate()
            .map(|(l, p)| format!("{l}->{p}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_collisions_and_range() {
        assert_eq!(
            Mapping::new(vec![1, 1], 3),
            Err(MappingError::NotInjective(1))
        );
        assert!(matches!(
            Mapping::new(vec![0, 5], 3),
            Err(MappingError::OutOfRange { physical: 5, .. })
        ));
        assert!(matches!(
            Mapping::new(vec![0, 1, 2], 2),
            Err(MappingError::Capacity { .. })
        ));
    }

    #[test]
    fn swap_with_empty_qubit_moves_occupant() {
        let mut m = Mapping::new(vec![0, 1], 3).unwrap();
        m.swap_physical(1, 2);
        assert_eq!(m.physical(1), 2);
        assert_eq!(m.logical(1), None);
        assert_eq!(m.logical(2), Some(1));
    }

    proptest! {
        #[test]
        fn swaps_keep_forward_and_reverse_consistent(
            swaps in proptest::collection::vec((0usize..6, 0usize..6), 0..30)
        ) {
            let mut m = Mapping::identity(4, 6);
            for (a, b) in swaps {
                if a != b {
                    m.swap_physical(a, b);
                }
            }
            for l in 0..4 {
                prop_assert_eq!(m.logical(m.physical(l)), Some(l));
            }
            let occupied = (0..6).filter(|&p| m.logical(p).is_some()).count();
            prop_assert_eq!(occupied, 4);
        }
    }
}
