//! Layered circuits on physical qubits, mapping replay, metrics and serialization.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::topology::{build_architecture, ArchDescriptor, CouplingGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    Relaxed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Relaxed => "relaxed",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(Mode::Strict),
            "relaxed" => Ok(Mode::Relaxed),
            other => Err(Error::Schema(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    Cphase,
    Swap,
}

/// One gate placed on physical qubits. Cphase stores its logical pair with
/// the lower index first; `physical` follows the same order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlacedOp {
    H { logical: u32, physical: u32 },
    Cphase { logical: (u32, u32), physical: (u32, u32) },
    Swap { physical: (u32, u32) },
}

impl PlacedOp {
    pub fn h(logical: usize, physical: usize) -> Self {
        PlacedOp::H { logical: logical as u32, physical: physical as u32 }
    }

    /// Builds a cphase, normalizing the logical pair to ascending order.
    pub fn cphase(l1: usize, p1: usize, l2: usize, p2: usize) -> Self {
        let (l1, p1, l2, p2) = if l1 < l2 { (l1, p1, l2, p2) } else { (l2, p2, l1, p1) };
        PlacedOp::Cphase { logical: (l1 as u32, l2 as u32), physical: (p1 as u32, p2 as u32) }
    }

    pub fn swap(a: usize, b: usize) -> Self {
        PlacedOp::Swap { physical: (a as u32, b as u32) }
    }

    pub fn gate(&self) -> GateKind {
        match self {
            PlacedOp::H { .. } => GateKind::H,
            PlacedOp::Cphase { .. } => GateKind::Cphase,
            PlacedOp::Swap { .. } => GateKind::Swap,
        }
    }

    pub fn physical_args(&self) -> (usize, Option<usize>) {
        match *self {
            PlacedOp::H { physical, .. } => (physical as usize, None),
            PlacedOp::Cphase { physical, .. } | PlacedOp::Swap { physical } => {
                (physical.0 as usize, Some(physical.1 as usize))
            }
        }
    }

    /// Rotation exponent k for cp(pi/2^k).
    pub fn angle_exponent(&self) -> Option<u32> {
        match *self {
            PlacedOp::Cphase { logical, .. } => Some(logical.1 - logical.0),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Layer {
    pub ops: Vec<PlacedOp>,
}

impl Layer {
    pub fn new(ops: Vec<PlacedOp>) -> Self {
        Layer { ops }
    }

    pub fn has_two_qubit_gate(&self) -> bool {
        self.ops.iter().any(|op| op.gate() != GateKind::H)
    }
}

/// Injective assignment of logical qubits to physical qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mapping {
    log_to_phys: Vec<usize>,
    phys_to_log: Vec<Option<usize>>,
}

impl Mapping {
    pub fn identity(n: usize) -> Self {
        Mapping::from_assignment((0..n).collect(), n).expect("identity is injective")
    }

    /// `log_to_phys[l]` is the physical home of logical `l`.
    pub fn from_assignment(log_to_phys: Vec<usize>, physical_count: usize) -> Result<Self> {
        let mut phys_to_log = vec![None; physical_count];
        for (l, &p) in log_to_phys.iter().enumerate() {
            if p >= physical_count {
                return Err(Error::QubitOutOfRange(p));
            }
            if phys_to_log[p].replace(l).is_some() {
                return Err(Error::Schema(format!("physical qubit {p} assigned twice in mapping")));
            }
        }
        Ok(Mapping { log_to_phys, phys_to_log })
    }

    pub fn logical_count(&self) -> usize {
        self.log_to_phys.len()
    }

    pub fn physical_count(&self) -> usize {
        self.phys_to_log.len()
    }

    pub fn phys(&self, logical: usize) -> usize {
        self.log_to_phys[logical]
    }

    pub fn logical(&self, physical: usize) -> Option<usize> {
        self.phys_to_log[physical]
    }

    pub fn log_to_phys(&self) -> &[usize] {
        &self.log_to_phys
    }

    pub fn swap_physical(&mut self, a: usize, b: usize) {
        let (la, lb) = (self.phys_to_log[a], self.phys_to_log[b]);
        self.phys_to_log[a] = lb;
        self.phys_to_log[b] = la;
        if let Some(l) = la {
            self.log_to_phys[l] = b;
        }
        if let Some(l) = lb {
            self.log_to_phys[l] = a;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduledCircuit {
    pub arch: ArchDescriptor,
    pub mode: Mode,
    pub initial_mapping: Mapping,
    pub layers: Vec<Layer>,
    current: Mapping,
}

impl ScheduledCircuit {
    pub fn new(arch: ArchDescriptor, mode: Mode, initial_mapping: Mapping) -> Self {
        let current = initial_mapping.clone();
        ScheduledCircuit { arch, mode, initial_mapping, layers: Vec::new(), current }
    }

    /// Builds a circuit from trusted parts, replaying swaps to get the final mapping.
    pub fn from_parts(arch: ArchDescriptor, mode: Mode, initial_mapping: Mapping, layers: Vec<Layer>) -> Self {
        let mut current = initial_mapping.clone();
        for layer in &layers {
            for op in &layer.ops {
                if let PlacedOp::Swap { physical } = *op {
                    current.swap_physical(physical.0 as usize, physical.1 as usize);
                }
            }
        }
        ScheduledCircuit { arch, mode, initial_mapping, layers, current }
    }

    pub fn logical_count(&self) -> usize {
        self.initial_mapping.logical_count()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn current_mapping(&self) -> &Mapping {
        &self.current
    }

    /// Appends a layer after checking disjointness, links and mapping consistency.
    pub fn append_layer(&mut self, graph: &CouplingGraph, layer: Layer) -> Result<()> {
        let mut used = std::collections::HashSet::new();
        for op in &layer.ops {
            let (a, b) = op.physical_args();
            for q in std::iter::once(a).chain(b) {
                if q >= graph.node_count {
                    return Err(Error::QubitOutOfRange(q));
                }
                if !used.insert(q) {
                    return Err(Error::LayerOverlap(q));
                }
            }
            if let Some(b) = b {
                if !graph.has_edge(a, b) {
                    return Err(Error::NotAnEdge(a, b));
                }
            }
            let check = |l: u32, p: u32| {
                let actual = self.current.phys(l as usize);
                if actual == p as usize {
                    Ok(())
                } else {
                    Err(Error::MappingMismatch { logical: l as usize, claimed: p as usize, actual })
                }
            };
            match *op {
                PlacedOp::H { logical, physical } => check(logical, physical)?,
                PlacedOp::Cphase { logical, physical } => {
                    check(logical.0, physical.0)?;
                    check(logical.1, physical.1)?;
                }
                PlacedOp::Swap { .. } => {}
            }
        }
        for op in &layer.ops {
            if let PlacedOp::Swap { physical } = *op {
                self.current.swap_physical(physical.0 as usize, physical.1 as usize);
            }
        }
        self.layers.push(layer);
        Ok(())
    }

    pub fn metrics(&self) -> Metrics {
        metrics(self)
    }

    pub fn to_json(&self) -> String {
        export_json(self)
    }

    pub fn to_qasm(&self) -> String {
        export_qasm(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Metrics {
    /// Every layer counts.
    pub depth: usize,
    /// Layers containing at least one two-qubit gate.
    pub two_qubit_depth: usize,
    pub swap_count: usize,
    pub cphase_count: usize,
    pub h_count: usize,
    pub final_mapping: Mapping,
}

pub fn metrics(circuit: &ScheduledCircuit) -> Metrics {
    let mut m = Metrics {
        depth: circuit.layers.len(),
        two_qubit_depth: 0,
        swap_count: 0,
        cphase_count: 0,
        h_count: 0,
        final_mapping: circuit.current.clone(),
    };
    for layer in &circuit.layers {
        if layer.has_two_qubit_gate() {
            m.two_qubit_depth += 1;
        }
        for op in &layer.ops {
            match op.gate() {
                GateKind::H => m.h_count += 1,
                GateKind::Cphase => m.cphase_count += 1,
                GateKind::Swap => m.swap_count += 1,
            }
        }
    }
    m
}

#[derive(Serialize, Deserialize)]
struct OpDoc {
    g: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    q: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    k: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    p: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitDoc {
    version: u32,
    architecture: ArchDescriptor,
    mode: Mode,
    initial_mapping: Vec<usize>,
    layers: Vec<Vec<OpDoc>>,
}

/// Compact, key-ordered JSON; identical circuits give identical bytes.
pub fn export_json(circuit: &ScheduledCircuit) -> String {
    let doc = CircuitDoc {
        version: 1,
        architecture: circuit.arch.clone(),
        mode: circuit.mode,
        initial_mapping: circuit.initial_mapping.log_to_phys.clone(),
        layers: circuit
            .layers
            .iter()
            .map(|layer| {
                layer
                    .ops
                    .iter()
                    .map(|op| match *op {
                        PlacedOp::H { logical, physical } => OpDoc {
                            g: "h".into(),
                            q: Some(vec![logical as usize]),
                            k: None,
                            p: Some(vec![physical as usize]),
                        },
                        PlacedOp::Cphase { logical, physical } => OpDoc {
                            g: "cp".into(),
                            q: Some(vec![logical.0 as usize, logical.1 as usize]),
                            k: Some(logical.1 - logical.0),
                            p: Some(vec![physical.0 as usize, physical.1 as usize]),
                        },
                        PlacedOp::Swap { physical } => OpDoc {
                            g: "swap".into(),
                            q: None,
                            k: None,
                            p: Some(vec![physical.0 as usize, physical.1 as usize]),
                        },
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("circuit document serializes")
}

/// Parses a version-1 document. Physical positions of h and cp are taken
/// from their 'p' field when present, otherwise recovered by replaying the
/// swaps from the initial mapping. Stated positions are not checked here.
pub fn import_json(text: &str) -> Result<ScheduledCircuit> {
    let doc: CircuitDoc = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    if doc.version != 1 {
        return Err(Error::Schema(format!("field 'version': unsupported value {}", doc.version)));
    }
    let graph = build_architecture(doc.architecture.kind, doc.architecture.size)
        .map_err(|e| Error::Schema(format!("field 'architecture': {e}")))?;
    let initial = Mapping::from_assignment(doc.initial_mapping, graph.node_count)
        .map_err(|e| Error::Schema(format!("field 'initial_mapping': {e}")))?;
    let n = initial.logical_count();
    let mut current = initial.clone();
    let mut layers = Vec::with_capacity(doc.layers.len());
    for (li, ops) in doc.layers.into_iter().enumerate() {
        let mut placed = Vec::with_capacity(ops.len());
        for (oi, op) in ops.into_iter().enumerate() {
            let at = |what: &str| Error::Schema(format!("layers[{li}][{oi}]: {what}"));
            let logical = |v: &Option<Vec<usize>>, len: usize| -> Result<Vec<usize>> {
                match v {
                    Some(q) if q.len() == len && q.iter().all(|&l| l < n) => Ok(q.clone()),
                    Some(_) => Err(at("field 'q' has the wrong arity or an out-of-range index")),
                    None => Err(at("missing field 'q'")),
                }
            };
            let stated = |len: usize| -> Result<Option<Vec<usize>>> {
                match &op.p {
                    Some(p) if p.len() == len && p.iter().all(|&x| x < graph.node_count) => Ok(Some(p.clone())),
                    Some(_) => Err(at("field 'p' has the wrong arity or an out-of-range index")),
                    None => Ok(None),
                }
            };
            let op = match op.g.as_str() {
                "h" => {
                    let q = logical(&op.q, 1)?;
                    let p = stated(1)?.map_or_else(|| current.phys(q[0]), |p| p[0]);
                    PlacedOp::h(q[0], p)
                }
                "cp" => {
                    let q = logical(&op.q, 2)?;
                    if q[0] >= q[1] {
                        return Err(at("field 'q' must be an ascending pair"));
                    }
                    let k = op.k.ok_or_else(|| at("missing field 'k'"))?;
                    if k as usize != q[1] - q[0] {
                        return Err(at("field 'k' does not match the logical pair"));
                    }
                    let p = stated(2)?.unwrap_or_else(|| vec![current.phys(q[0]), current.phys(q[1])]);
                    PlacedOp::cphase(q[0], p[0], q[1], p[1])
                }
                "swap" => {
                    let p = op.p.ok_or_else(|| at("missing field 'p'"))?;
                    if p.len() != 2 || p.iter().any(|&x| x >= graph.node_count) {
                        return Err(at("field 'p' must be two in-range physical indices"));
                    }
                    PlacedOp::swap(p[0], p[1])
                }
                other => return Err(at(&format!("field 'g': unknown gate '{other}'"))),
            };
            placed.push(op);
        }
        for op in &placed {
            if let PlacedOp::Swap { physical } = *op {
                current.swap_physical(physical.0 as usize, physical.1 as usize);
            }
        }
        layers.push(Layer::new(placed));
    }
    Ok(ScheduledCircuit { arch: doc.architecture, mode: doc.mode, initial_mapping: initial, layers, current })
}

/// OpenQASM 2.0 on the physical register, one barrier after each layer.
pub fn export_qasm(circuit: &ScheduledCircuit) -> String {
    let width = circuit.initial_mapping.physical_count();
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "qreg q[{width}];");
    for layer in &circuit.layers {
        for op in &layer.ops {
            let _ = match *op {
                PlacedOp::H { physical, .. } => writeln!(out, "h q[{physical}];"),
                PlacedOp::Cphase { logical, physical } => {
                    let k = logical.1 - logical.0;
                    let angle = if k == 1 { "pi/2".to_string() } else { format!("pi/2^{k}") };
                    writeln!(out, "cp({angle}) q[{}],q[{}];", physical.0, physical.1)
                }
                PlacedOp::Swap { physical } => writeln!(out, "swap q[{}],q[{}];", physical.0, physical.1),
            };
        }
        out.push_str("barrier q;\n");
    }
    out
}
