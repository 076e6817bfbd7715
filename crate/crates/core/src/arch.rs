//! Static device model: coupling graph, gate durations, lattice coordinates
//! and the all-pairs hop-count matrix.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;
use std::sync::OnceLock;

use serde::Deserialize;
use thiserror::Error;

use crate::circuit::{GateKind, PhysicalQubit};

/// Environment variable pointing at an alternative data directory. Its
/// `architectures/` subdirectory is searched before the bundled files.
pub const DATA_DIR_ENV: &str = "QROUTE_DATA_DIR";

const BUNDLED: &[(&str, &str)] = &[
    (
        "grid-6x6",
        include_str!("../../../data/architectures/grid-6x6.toml"),
    ),
    (
        "q16-melbourne",
        include_str!("../../../data/architectures/q16-melbourne.toml"),
    ),
    (
        "q20-tokyo",
        include_str!("../../../data/architectures/q20-tokyo.toml"),
    ),
    (
        "sycamore-54",
        include_str!("../../../data/architectures/sycamore-54.toml"),
    ),
];

#[derive(Debug, Error)]
pub enum ArchError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("edge ({0}, {1}) listed more than once")]
    DuplicateEdge(PhysicalQubit, PhysicalQubit),
    #[error("edge ({0}, {0}) is a self-loop")]
    SelfLoop(PhysicalQubit),
    #[error("qubit {qubit} out of range for {num_qubits} qubits")]
    OutOfRange { qubit: usize, num_qubits: usize },
    #[error("coupling graph is disconnected: qubit {0} unreachable from qubit 0")]
    Disconnected(PhysicalQubit),
    #[error("grid: qubit {0} has no coordinates")]
    MissingCoordinate(PhysicalQubit),
    #[error("grid: qubit {0} given coordinates twice")]
    RepeatedQubit(PhysicalQubit),
    #[error("grid: qubits {0} and {1} share a cell")]
    SharedCell(PhysicalQubit, PhysicalQubit),
    #[error("grid: edge ({0}, {1}) joins non-adjacent cells")]
    NonAdjacentGrid(PhysicalQubit, PhysicalQubit),
    #[error("duration for `{kind}` must be at least {min}, got {value}")]
    InvalidDuration { kind: String, min: u32, value: i64 },
    #[error("unknown gate kind `{0}`")]
    UnknownGateKind(String),
    #[error("unknown architecture `{0}`")]
    UnknownArchitecture(String),
    #[error("architecture `{0}` has no grid coordinates")]
    NoGrid(String),
    #[error("architecture needs at least one qubit")]
    Empty,
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Gate kind to duration in clock cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DurationMap {
    entries: BTreeMap<GateKind, u32>,
}

impl Default for DurationMap {
    /// One cycle for single-qubit gates and measurement, two for CX, six for
    /// SWAP, zero for barrier.
    fn default() -> Self {
        DurationMap::preset("superconducting").expect("default preset")
    }
}

impl DurationMap {
    pub const PRESETS: [&'static str; 2] = ["superconducting", "uniform"];

    /// Named duration tables. `superconducting` has two-qubit gates at twice
    /// the single-qubit time; `uniform` makes every gate one cycle (SWAP is
    /// still three CX).
    pub fn preset(name: &str) -> Option<DurationMap> {
        let (single, cx) = match name {
            "superconducting" => (1, 2),
            "uniform" => (1, 1),
            _ => return None,
        };
        let entries = GateKind::ALL
            .iter()
            .map(|&k| {
                let d = match k {
                    GateKind::Cx => cx,
                    GateKind::Swap => 3 * cx,
                    GateKind::Barrier => 0,
                    _ => single,
                };
                (k, d)
            })
            .collect();
        Some(DurationMap { entries })
    }

    /// Defaults overridden by `overrides`. The key `single` sets every
    /// single-qubit kind at once; explicit kinds win over it.
    pub fn from_overrides(overrides: &BTreeMap<String, i64>) -> Result<DurationMap, ArchError> {
        let mut map = DurationMap::default();
        if let Some(&v) = overrides.get("single") {
            let v = check_duration("single", v, 1)?;
            for k in GateKind::ALL {
                if k.arity() == Some(1) {
                    map.entries.insert(k, v);
                }
            }
        }
        for (name, &v) in overrides {
            if name == "single" {
                continue;
            }
            let kind: GateKind = name
                .parse()
                .map_err(|_| ArchError::UnknownGateKind(name.clone()))?;
            let min = if kind == GateKind::Barrier { 0 } else { 1 };
            map.entries.insert(kind, check_duration(name, v, min)?);
        }
        Ok(map)
    }

    /// Parse a standalone durations document (`name = cycles` lines).
    pub fn from_toml(text: &str) -> Result<DurationMap, ArchError> {
        let overrides: BTreeMap<String, i64> =
            toml::from_str(text).map_err(|e| toml_error(text, e))?;
        DurationMap::from_overrides(&overrides)
    }

    pub fn get(&self, kind: GateKind) -> u32 {
        self.entries[&kind]
    }

    pub fn get_by_name(&self, name: &str) -> Result<u32, ArchError> {
        if name == "single" {
            return Ok(self.get(GateKind::H));
        }
        let kind: GateKind = name
            .parse()
            .map_err(|_| ArchError::UnknownGateKind(name.to_string()))?;
        Ok(self.get(kind))
    }

    pub fn iter(&self) -> impl Iterator<Item = (GateKind, u32)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }
}

fn check_duration(kind: &str, value: i64, min: u32) -> Result<u32, ArchError> {
    if value < i64::from(min) || value > i64::from(u32::MAX) {
        return Err(ArchError::InvalidDuration {
            kind: kind.to_string(),
            min,
            value,
        });
    }
    Ok(value as u32)
}

/// Hop counts between every pair of physical qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    dist: Vec<u32>,
}

impl DistanceMatrix {
    pub fn get(&self, a: PhysicalQubit, b: PhysicalQubit) -> u32 {
        self.dist[a * self.n + b]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn row(&self, a: PhysicalQubit) -> &[u32] {
        &self.dist[a * self.n..(a + 1) * self.n]
    }

    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }
}

/// Breadth-first search from every vertex.
pub fn compute_distances(arch: &Architecture) -> DistanceMatrix {
    let n = arch.num_qubits;
    let mut dist = vec![u32::MAX; n * n];
    let mut queue = VecDeque::with_capacity(n);
    for src in 0..n {
        let row = &mut dist[src * n..(src + 1) * n];
        row[src] = 0;
        queue.clear();
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for &v in &arch.neighbors[u] {
                if row[v] == u32::MAX {
                    row[v] = du + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    DistanceMatrix { n, dist }
}

/// A validated device description.
#[derive(Debug)]
pub struct Architecture {
    name: String,
    num_qubits: usize,
    edges: Vec<(PhysicalQubit, PhysicalQubit)>,
    neighbors: Vec<Vec<PhysicalQubit>>,
    coupled: Vec<bool>,
    grid: Option<Vec<(i32, i32)>>,
    durations: DurationMap,
    distances: OnceLock<DistanceMatrix>,
}

impl Clone for Architecture {
    fn clone(&self) -> Self {
        let distances = OnceLock::new();
        if let Some(d) = self.distances.get() {
            let _ = distances.set(d.clone());
        }
        Architecture {
            name: self.name.clone(),
            num_qubits: self.num_qubits,
            edges: self.edges.clone(),
            neighbors: self.neighbors.clone(),
            coupled: self.coupled.clone(),
            grid: self.grid.clone(),
            durations: self.durations.clone(),
            distances,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ArchDocument {
    name: String,
    num_qubits: usize,
    edges: Vec<[i64; 2]>,
    #[serde(default)]
    grid: Option<Vec<[i64; 3]>>,
    #[serde(default)]
    durations: BTreeMap<String, i64>,
}

fn toml_error(text: &str, e: toml::de::Error) -> ArchError {
    let line = e
        .span()
        .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1)
        .unwrap_or(0);
    ArchError::Parse {
        line,
        message: e.message().to_string(),
    }
}

fn qubit_index(v: i64, num_qubits: usize) -> Result<usize, ArchError> {
    if v < 0 || v as u64 >= num_qubits as u64 {
        return Err(ArchError::OutOfRange {
            qubit: v.max(0) as usize,
            num_qubits,
        });
    }
    Ok(v as usize)
}

impl Architecture {
    /// Validate and build. Edges are unordered; `grid` is `(qubit, row, col)`.
    pub fn new(
        name: impl Into<String>,
        num_qubits: usize,
        edges: &[(usize, usize)],
        grid: Option<&[(usize, i32, i32)]>,
        durations: DurationMap,
    ) -> Result<Architecture, ArchError> {
        if num_qubits == 0 {
            return Err(ArchError::Empty);
        }
        let mut seen = BTreeSet::new();
        let mut neighbors = vec![Vec::new(); num_qubits];
        let mut coupled = vec![false; num_qubits * num_qubits];
        for &(a, b) in edges {
            for q in [a, b] {
                if q >= num_qubits {
                    return Err(ArchError::OutOfRange {
                        qubit: q,
                        num_qubits,
                    });
                }
            }
            if a == b {
                return Err(ArchError::SelfLoop(a));
            }
            let key = (a.min(b), a.max(b));
            if !seen.insert(key) {
                return Err(ArchError::DuplicateEdge(key.0, key.1));
            }
            neighbors[a].push(b);
            neighbors[b].push(a);
            coupled[a * num_qubits + b] = true;
            coupled[b * num_qubits + a] = true;
        }
        for n in &mut neighbors {
            n.sort_unstable();
        }

        let grid = match grid {
            None => None,
            Some(cells) => {
                let mut coords: Vec<Option<(i32, i32)>> = vec![None; num_qubits];
                let mut owner: BTreeMap<(i32, i32), usize> = BTreeMap::new();
                for &(q, r, c) in cells {
                    if q >= num_qubits {
                        return Err(ArchError::OutOfRange {
                            qubit: q,
                            num_qubits,
                        });
                    }
                    if coords[q].is_some() {
                        return Err(ArchError::RepeatedQubit(q));
                    }
                    if let Some(&other) = owner.get(&(r, c)) {
                        return Err(ArchError::SharedCell(other, q));
                    }
                    owner.insert((r, c), q);
                    coords[q] = Some((r, c));
                }
                let coords = coords
                    .into_iter()
                    .enumerate()
                    .map(|(q, c)| c.ok_or(ArchError::MissingCoordinate(q)))
                    .collect::<Result<Vec<_>, _>>()?;
                for &(a, b) in &seen {
                    let (ra, ca) = coords[a];
                    let (rb, cb) = coords[b];
                    if (ra - rb).abs() + (ca - cb).abs() != 1 {
                        return Err(ArchError::NonAdjacentGrid(a, b));
                    }
                }
                Some(coords)
            }
        };

        let arch = Architecture {
            name: name.into(),
            num_qubits,
            edges: seen.into_iter().collect(),
            neighbors,
            coupled,
            grid,
            durations,
            distances: OnceLock::new(),
        };
        if let Some(q) = arch.first_unreachable() {
            return Err(ArchError::Disconnected(q));
        }
        Ok(arch)
    }

    fn first_unreachable(&self) -> Option<PhysicalQubit> {
        let mut seen = vec![false; self.num_qubits];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.neighbors[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    /// Parse an architecture description document.
    pub fn from_toml(text: &str) -> Result<Architecture, ArchError> {
        let doc: ArchDocument = toml::from_str(text).map_err(|e| toml_error(text, e))?;
        let n = doc.num_qubits;
        let edges = doc
            .edges
            .iter()
            .map(|&[a, b]| Ok((qubit_index(a, n)?, qubit_index(b, n)?)))
            .collect::<Result<Vec<_>, ArchError>>()?;
        let grid = doc
            .grid
            .map(|cells| {
                cells
                    .iter()
                    .map(|&[q, r, c]| Ok((qubit_index(q, n)?, r as i32, c as i32)))
                    .collect::<Result<Vec<_>, ArchError>>()
            })
            .transpose()?;
        let durations = DurationMap::from_overrides(&doc.durations)?;
        Architecture::new(doc.name, n, &edges, grid.as_deref(), durations)
    }

    pub fn from_file(path: &Path) -> Result<Architecture, ArchError> {
        let text = std::fs::read_to_string(path).map_err(|source| ArchError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Architecture::from_toml(&text)
    }

    /// Path graph `0 - 1 - ... - (n-1)` laid out on one row.
    pub fn line(n: usize) -> Result<Architecture, ArchError> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        let grid: Vec<_> = (0..n).map(|i| (i, 0, i as i32)).collect();
        Architecture::new(
            format!("line-{n}"),
            n,
            &edges,
            Some(&grid),
            DurationMap::default(),
        )
    }

    /// `rows x cols` nearest-neighbour lattice numbered row-major.
    pub fn grid(rows: usize, cols: usize) -> Result<Architecture, ArchError> {
        let mut edges = Vec::new();
        let mut cells = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let q = r * cols + c;
                cells.push((q, r as i32, c as i32));
                if c + 1 < cols {
                    edges.push((q, q + 1));
                }
                if r + 1 < rows {
                    edges.push((q, q + cols));
                }
            }
        }
        Architecture::new(
            format!("grid-{rows}x{cols}"),
            rows * cols,
            &edges,
            Some(&cells),
            DurationMap::default(),
        )
    }

    /// Look up a named architecture: a bundled device, `line-N` or
    /// `grid-RxC`. Files under `$QROUTE_DATA_DIR/architectures/` take
    /// precedence over the bundled copies.
    pub fn builtin(name: &str) -> Result<Architecture, ArchError> {
        if let Some(dir) = std::env::var_os(DATA_DIR_ENV) {
            let path = Path::new(&dir)
                .join("architectures")
                .join(format!("{name}.toml"));
            if path.is_file() {
                return Architecture::from_file(&path);
            }
        }
        if let Some((_, text)) = BUNDLED.iter().find(|(n, _)| *n == name) {
            return Architecture::from_toml(text);
        }
        let unknown = || ArchError::UnknownArchitecture(name.to_string());
        if let Some(n) = name.strip_prefix("line-") {
            let n: usize = n.parse().map_err(|_| unknown())?;
            return Architecture::line(n);
        }
        if let Some(dims) = name.strip_prefix("grid-") {
            let (r, c) = dims.split_once('x').ok_or_else(unknown)?;
            let r: usize = r.parse().map_err(|_| unknown())?;
            let c: usize = c.parse().map_err(|_| unknown())?;
            return Architecture::grid(r, c);
        }
        Err(unknown())
    }

    /// Names of the bundled devices (parameterised families excluded).
    pub fn builtin_names() -> Vec<&'static str> {
        BUNDLED.iter().map(|(n, _)| *n).collect()
    }

    pub fn with_durations(mut self, durations: DurationMap) -> Self {
        self.durations = durations;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> &[(PhysicalQubit, PhysicalQubit)] {
        &self.edges
    }

    pub fn neighbors(&self, p: PhysicalQubit) -> &[PhysicalQubit] {
        &self.neighbors[p]
    }

    pub fn is_coupled(&self, a: PhysicalQubit, b: PhysicalQubit) -> bool {
        self.coupled[a * self.num_qubits + b]
    }

    pub fn coordinates(&self, p: PhysicalQubit) -> Option<(i32, i32)> {
        self.grid.as_ref().map(|g| g[p])
    }

    pub fn has_grid(&self) -> bool {
        self.grid.is_some()
    }

    pub fn durations(&self) -> &DurationMap {
        &self.durations
    }

    pub fn duration(&self, kind: GateKind) -> u32 {
        self.durations.get(kind)
    }

    /// Hop-count matrix, computed on first use.
    pub fn distances(&self) -> &DistanceMatrix {
        self.distances.get_or_init(|| compute_distances(self))
    }

    pub fn distance(&self, a: PhysicalQubit, b: PhysicalQubit) -> u32 {
        self.distances().get(a, b)
    }

    /// Horizontal and vertical lattice separation `(|dcol|, |drow|)`.
    pub fn hd_vd(&self, a: PhysicalQubit, b: PhysicalQubit) -> Result<(u32, u32), ArchError> {
        let grid = self
            .grid
            .as_ref()
            .ok_or_else(|| ArchError::NoGrid(self.name.clone()))?;
        let (ra, ca) = grid[a];
        let (rb, cb) = grid[b];
        Ok((ca.abs_diff(cb), ra.abs_diff(rb)))
    }
}
