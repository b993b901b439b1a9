//! Coupling graphs and unit partitions for the supported architectures.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArchKind {
    Lnn,
    Grid,
    Sycamore,
    #[serde(rename = "heavyhex")]
    HeavyHex,
}

impl ArchKind {
    pub fn name(self) -> &'static str {
        match self {
            ArchKind::Lnn => "lnn",
            ArchKind::Grid => "grid",
            ArchKind::Sycamore => "sycamore",
            ArchKind::HeavyHex => "heavyhex",
        }
    }
}

impl fmt::Display for ArchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ArchKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lnn" => Ok(ArchKind::Lnn),
            "grid" => Ok(ArchKind::Grid),
            "sycamore" => Ok(ArchKind::Sycamore),
            "heavyhex" | "heavy-hex" => Ok(ArchKind::HeavyHex),
            other => Err(Error::Schema(format!("unknown architecture kind '{other}'"))),
        }
    }
}

/// Serializable description of one architecture instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArchDescriptor {
    pub kind: ArchKind,
    pub size: usize,
    pub faulty: Vec<usize>,
    /// Unit left empty next to a faulty one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub buffer_unit: Option<usize>,
}

impl ArchDescriptor {
    pub fn new(kind: ArchKind, size: usize) -> Self {
        ArchDescriptor { kind, size, faulty: Vec::new(), buffer_unit: None }
    }

    pub fn with_faulty(mut self, mut faulty: Vec<usize>) -> Self {
        faulty.sort_unstable();
        faulty.dedup();
        self.faulty = faulty;
        self
    }
}

/// Position of a physical qubit in its architecture's natural layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coord {
    Line(usize),
    Cell { row: usize, col: usize },
    Path(usize),
    Dangler { anchor: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingGraph {
    pub kind: ArchKind,
    pub size_param: usize,
    pub node_count: usize,
    /// Sorted, each pair stored as (low, high).
    pub edges: Vec<(usize, usize)>,
    pub coords: Vec<Coord>,
    adjacency: Vec<Vec<usize>>,
}

impl CouplingGraph {
    fn from_edges(kind: ArchKind, size_param: usize, coords: Vec<Coord>, raw: Vec<(usize, usize)>) -> Self {
        let node_count = coords.len();
        let mut edges: Vec<(usize, usize)> = raw.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        edges.sort_unstable();
        edges.dedup();
        let mut adjacency = vec![Vec::new(); node_count];
        for &(a, b) in &edges {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        CouplingGraph { kind, size_param, node_count, edges, coords, adjacency }
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.node_count && b < self.node_count && self.adjacency[a].binary_search(&b).is_ok()
    }

    pub fn neighbors(&self, q: usize) -> &[usize] {
        &self.adjacency[q]
    }

    pub fn degree(&self, q: usize) -> usize {
        self.adjacency[q].len()
    }

    pub fn is_connected(&self) -> bool {
        if self.node_count == 0 {
            return true;
        }
        let mut seen = vec![false; self.node_count];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(q) = queue.pop_front() {
            for &r in &self.adjacency[q] {
                if !seen[r] {
                    seen[r] = true;
                    count += 1;
                    queue.push_back(r);
                }
            }
        }
        count == self.node_count
    }

    /// True when consecutive entries of `line` are linked.
    pub fn is_path(&self, line: &[usize]) -> bool {
        line.iter().all(|&q| q < self.node_count) && line.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }

    /// Physical index of grid or sycamore cell (row, col).
    pub fn cell(&self, row: usize, col: usize) -> usize {
        row * self.size_param + col
    }

    pub fn descriptor(&self) -> ArchDescriptor {
        ArchDescriptor::new(self.kind, self.size_param)
    }
}

pub const DEFAULT_ANCHOR: usize = 3;

pub fn build_architecture(kind: ArchKind, size: usize) -> Result<CouplingGraph> {
    match kind {
        ArchKind::Lnn => build_lnn(size),
        ArchKind::Grid => build_grid(size),
        ArchKind::Sycamore => build_sycamore(size),
        ArchKind::HeavyHex => build_heavyhex(size, DEFAULT_ANCHOR),
    }
}

fn build_lnn(n: usize) -> Result<CouplingGraph> {
    if n < 1 {
        return Err(Error::SizeTooSmall { kind: "lnn", size: n, min: 1 });
    }
    let coords = (0..n).map(Coord::Line).collect();
    let edges = (1..n).map(|i| (i - 1, i)).collect();
    Ok(CouplingGraph::from_edges(ArchKind::Lnn, n, coords, edges))
}

fn cells(m: usize) -> Vec<Coord> {
    (0..m * m).map(|i| Coord::Cell { row: i / m, col: i % m }).collect()
}

fn build_grid(m: usize) -> Result<CouplingGraph> {
    if m < 2 {
        return Err(Error::SizeTooSmall { kind: "grid", size: m, min: 2 });
    }
    let mut edges = Vec::with_capacity(2 * m * (m - 1));
    for r in 0..m {
        for c in 0..m {
            let q = r * m + c;
            if c + 1 < m {
                edges.push((q, q + 1));
            }
            if r + 1 < m {
                edges.push((q, q + m));
            }
        }
    }
    Ok(CouplingGraph::from_edges(ArchKind::Grid, m, cells(m), edges))
}

fn build_sycamore(m: usize) -> Result<CouplingGraph> {
    if m < 2 {
        return Err(Error::SizeTooSmall { kind: "sycamore", size: m, min: 2 });
    }
    if m % 2 != 0 {
        return Err(Error::OddSycamoreSize(m));
    }
    let mut edges = Vec::new();
    for r in 0..m - 1 {
        for c in 0..m {
            let q = r * m + c;
            edges.push((q, q + m));
            if r % 2 == 0 {
                if c >= 1 {
                    edges.push((q, q + m - 1));
                }
            } else if c + 1 < m {
                edges.push((q, q + m + 1));
            }
        }
    }
    Ok(CouplingGraph::from_edges(ArchKind::Sycamore, m, cells(m), edges))
}

/// Heavy-hex line with one dangler per group of four path qubits, attached at
/// `anchor` within the group.
pub fn build_heavyhex(n: usize, anchor: usize) -> Result<CouplingGraph> {
    if n < 5 {
        return Err(Error::SizeTooSmall { kind: "heavyhex", size: n, min: 5 });
    }
    if n % 5 != 0 {
        return Err(Error::HeavyHexNotMultipleOfFive(n));
    }
    if anchor >= 4 {
        return Err(Error::BadAnchor(anchor));
    }
    let groups = n / 5;
    let path_len = 4 * groups;
    let mut coords: Vec<Coord> = (0..path_len).map(Coord::Path).collect();
    let mut edges: Vec<(usize, usize)> = (1..path_len).map(|i| (i - 1, i)).collect();
    for g in 0..groups {
        let a = 4 * g + anchor;
        coords.push(Coord::Dangler { anchor: a });
        edges.push((a, path_len + g));
    }
    Ok(CouplingGraph::from_edges(ArchKind::HeavyHex, n, coords, edges))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnitKind {
    Row,
    TwoRow,
    OnPath,
    OffPath,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unit {
    pub id: usize,
    pub qubit_line: Vec<usize>,
    pub kind: UnitKind,
}

impl Unit {
    pub fn len(&self) -> usize {
        self.qubit_line.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubit_line.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitPartition {
    pub units: Vec<Unit>,
    pub unit_adjacency: Vec<(usize, usize)>,
    owner: Vec<Option<(usize, usize)>>,
}

impl UnitPartition {
    fn new(graph: &CouplingGraph, units: Vec<Unit>) -> Self {
        let mut owner = vec![None; graph.node_count];
        for u in &units {
            for (pos, &q) in u.qubit_line.iter().enumerate() {
                owner[q] = Some((u.id, pos));
            }
        }
        let mut unit_adjacency: Vec<(usize, usize)> = graph
            .edges
            .iter()
            .filter_map(|&(a, b)| match (owner[a], owner[b]) {
                (Some((ua, _)), Some((ub, _))) if ua != ub => Some((ua.min(ub), ua.max(ub))),
                _ => None,
            })
            .collect();
        unit_adjacency.sort_unstable();
        unit_adjacency.dedup();
        UnitPartition { units, unit_adjacency, owner }
    }

    /// Unit id and line position of a physical qubit.
    pub fn locate(&self, q: usize) -> Option<(usize, usize)> {
        self.owner.get(q).copied().flatten()
    }

    pub fn unit(&self, id: usize) -> Result<&Unit> {
        self.units.get(id).ok_or(Error::UnknownUnit(id))
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.unit_adjacency.binary_search(&(u.min(v), u.max(v))).is_ok()
    }
}

pub fn unit_partition(graph: &CouplingGraph) -> UnitPartition {
    let m = graph.size_param;
    let units = match graph.kind {
        ArchKind::Lnn => vec![Unit { id: 0, qubit_line: (0..m).collect(), kind: UnitKind::Row }],
        ArchKind::Grid => (0..m)
            .map(|r| Unit { id: r, qubit_line: (0..m).map(|c| r * m + c).collect(), kind: UnitKind::Row })
            .collect(),
        ArchKind::Sycamore => (0..m / 2)
            .map(|u| Unit { id: u, qubit_line: sycamore_line(m, u), kind: UnitKind::TwoRow })
            .collect(),
        ArchKind::HeavyHex => {
            let groups = m / 5;
            let path_len = 4 * groups;
            let mut units = Vec::with_capacity(2 * groups);
            for g in 0..groups {
                units.push(Unit { id: 2 * g, qubit_line: (4 * g..4 * g + 4).collect(), kind: UnitKind::OnPath });
                units.push(Unit { id: 2 * g + 1, qubit_line: vec![path_len + g], kind: UnitKind::OffPath });
            }
            units
        }
    };
    UnitPartition::new(graph, units)
}

/// Serpentine line of a sycamore two-row unit: position p sits at
/// row 2u + p%2, column p/2.
pub fn sycamore_line(m: usize, unit: usize) -> Vec<usize> {
    (0..2 * m).map(|p| (2 * unit + p % 2) * m + p / 2).collect()
}

/// Links between units `u` and `v`, oriented (qubit in u, qubit in v) and
/// ordered by line position in u, then in v.
pub fn boundary_links(partition: &UnitPartition, graph: &CouplingGraph, u: usize, v: usize) -> Result<Vec<(usize, usize)>> {
    partition.unit(u)?;
    partition.unit(v)?;
    let mut keyed = Vec::new();
    for &(a, b) in &graph.edges {
        for (x, y) in [(a, b), (b, a)] {
            if let (Some((ux, px)), Some((uy, py))) = (partition.locate(x), partition.locate(y)) {
                if ux == u && uy == v {
                    keyed.push(((px, py), (x, y)));
                }
            }
        }
    }
    keyed.sort_unstable();
    Ok(keyed.into_iter().map(|(_, e)| e).collect())
}
