//! Independent replay checker for scheduled circuits.

use std::path::Path;

use serde::Serialize;

use crate::circuit::{import_json, metrics, Mapping, Metrics, Mode, PlacedOp, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::qft::{check_order_capped, dependency_generators, GateLayers, LogicalGate};
use crate::topology::{build_architecture, CouplingGraph};

pub const DEFAULT_FINDING_CAP: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub layer: Option<usize>,
    pub qubits: Vec<usize>,
    pub detail: String,
}

/// Findings of one category, truncated to a cap but counted in full.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Findings {
    pub total: usize,
    pub items: Vec<Finding>,
    #[serde(skip)]
    cap: usize,
}

impl Findings {
    fn with_cap(cap: usize) -> Self {
        Findings { total: 0, items: Vec::new(), cap }
    }

    fn push(&mut self, layer: Option<usize>, qubits: Vec<usize>, detail: impl Into<String>) {
        self.total += 1;
        if self.items.len() < self.cap {
            self.items.push(Finding { layer, qubits, detail: detail.into() });
        }
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub ok: bool,
    pub connectivity_violations: Findings,
    pub overlap_violations: Findings,
    pub mapping_violations: Findings,
    pub dependency_violations: Findings,
    pub completeness_violations: Findings,
    pub metrics: Metrics,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        let m = &self.metrics;
        let value = serde_json::json!({
            "ok": self.ok,
            "connectivity_violations": self.connectivity_violations,
            "overlap_violations": self.overlap_violations,
            "mapping_violations": self.mapping_violations,
            "dependency_violations": self.dependency_violations,
            "completeness_violations": self.completeness_violations,
            "metrics": {
                "depth": m.depth,
                "two_qubit_depth": m.two_qubit_depth,
                "swap_count": m.swap_count,
                "cphase_count": m.cphase_count,
                "h_count": m.h_count,
                "final_mapping": m.final_mapping.log_to_phys(),
            }
        });
        serde_json::to_string_pretty(&value).expect("report serializes")
    }
}

pub fn verify(circuit: &ScheduledCircuit, graph: &CouplingGraph, mode: Mode, expected_logical: Option<&[usize]>) -> VerificationReport {
    verify_capped(circuit, graph, mode, expected_logical, DEFAULT_FINDING_CAP)
}

pub fn verify_capped(
    circuit: &ScheduledCircuit,
    graph: &CouplingGraph,
    mode: Mode,
    expected_logical: Option<&[usize]>,
    cap: usize,
) -> VerificationReport {
    let mut connectivity = Findings::with_cap(cap);
    let mut overlap = Findings::with_cap(cap);
    let mut mapping_f = Findings::with_cap(cap);
    let mut dependency = Findings::with_cap(cap);
    let mut completeness = Findings::with_cap(cap);

    let n = circuit.initial_mapping.logical_count();
    let faulty: Vec<bool> = {
        let mut f = vec![false; graph.node_count];
        for &q in &circuit.arch.faulty {
            if q < f.len() {
                f[q] = true;
            }
        }
        f
    };
    if circuit.arch.kind != graph.kind || circuit.arch.size != graph.size_param {
        connectivity.push(None, vec![], "circuit architecture does not match the graph");
    }

    // Own mapping replay, rebuilt from the raw initial assignment.
    let mut map = Mapping::from_assignment(circuit.initial_mapping.log_to_phys().to_vec(), graph.node_count.max(1))
        .unwrap_or_else(|_| Mapping::identity(0));
    if map.logical_count() != n {
        mapping_f.push(None, vec![], "initial mapping is not injective onto the graph");
    }
    for (l, &p) in circuit.initial_mapping.log_to_phys().iter().enumerate() {
        if p < faulty.len() && faulty[p] {
            connectivity.push(None, vec![p], format!("logical {l} starts on faulty qubit {p}"));
        }
    }

    let mut stamp = vec![usize::MAX; graph.node_count];
    let mut table = GateLayers::new(n);
    let mut h_seen = vec![0u32; n];
    let mut cp_seen = vec![0u8; n * n];
    let in_graph = |q: usize| q < graph.node_count;

    for (li, layer) in circuit.layers.iter().enumerate() {
        for op in &layer.ops {
            let (a, b) = op.physical_args();
            let qubits: Vec<usize> = std::iter::once(a).chain(b).collect();
            let mut usable = true;
            for &q in &qubits {
                if !in_graph(q) {
                    connectivity.push(Some(li), vec![q], "qubit outside the graph");
                    usable = false;
                    continue;
                }
                if faulty[q] {
                    connectivity.push(Some(li), vec![q], "op touches a faulty qubit");
                }
                if stamp[q] == li {
                    overlap.push(Some(li), vec![q], "qubit used twice in one layer");
                }
                stamp[q] = li;
            }
            if !usable || map.logical_count() != n {
                continue;
            }
            if let Some(b) = b {
                if !graph.has_edge(a, b) {
                    connectivity.push(Some(li), vec![a, b], "two-qubit op on a non-link");
                }
            }
            let mut check = |l: u32, p: u32| {
                if l as usize >= n {
                    mapping_f.push(Some(li), vec![p as usize], format!("logical {l} out of range"));
                    return false;
                }
                let actual = map.phys(l as usize);
                if actual != p as usize {
                    mapping_f.push(
                        Some(li),
                        vec![p as usize, actual],
                        format!("logical {l} claimed on {p} but sits on {actual}"),
                    );
                }
                true
            };
            match *op {
                PlacedOp::H { logical, physical } => {
                    if check(logical, physical) {
                        h_seen[logical as usize] += 1;
                        table.set(LogicalGate::H(logical as usize), li);
                    }
                }
                PlacedOp::Cphase { logical, physical } => {
                    let ok1 = check(logical.0, physical.0);
                    let ok2 = check(logical.1, physical.1);
                    if ok1 && ok2 {
                        let (i, j) = (logical.0 as usize, logical.1 as usize);
                        if i == j {
                            mapping_f.push(Some(li), vec![a], "cphase on a single logical qubit");
                        } else {
                            let slot = &mut cp_seen[i.min(j) * n + i.max(j)];
                            *slot = slot.saturating_add(1);
                            table.set(LogicalGate::Cphase(i, j), li);
                        }
                    }
                }
                PlacedOp::Swap { .. } => {}
            }
        }
        for op in &layer.ops {
            if let PlacedOp::Swap { physical } = *op {
                let (a, b) = (physical.0 as usize, physical.1 as usize);
                if in_graph(a) && in_graph(b) && map.logical_count() == n {
                    map.swap_physical(a, b);
                }
            }
        }
    }

    let expected: Vec<usize> = match expected_logical {
        Some(e) => {
            let mut e = e.to_vec();
            e.sort_unstable();
            e.dedup();
            e
        }
        None => (0..n).collect(),
    };
    let mut is_expected = vec![false; n];
    for &l in &expected {
        if l < n {
            is_expected[l] = true;
        } else {
            completeness.push(None, vec![l], format!("expected logical {l} does not exist"));
        }
    }
    for l in 0..n {
        let want = u32::from(is_expected[l]);
        if h_seen[l] != want {
            completeness.push(None, vec![l], format!("logical {l} has {} h gates, expected {want}", h_seen[l]));
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let want = u8::from(is_expected[i] && is_expected[j]);
            let got = cp_seen[i * n + j];
            if got != want {
                completeness.push(None, vec![i, j], format!("pair ({i},{j}) has {got} cphases, expected {want}"));
            }
        }
    }

    // Dependency order over the expected set, indexed by rank.
    let k = expected.iter().filter(|&&l| l < n).count();
    let mut ranked = GateLayers::new(k);
    let valid: Vec<usize> = expected.iter().copied().filter(|&l| l < n).collect();
    for (ri, &li) in valid.iter().enumerate() {
        if let Some(t) = table.get(LogicalGate::H(li)) {
            ranked.set(LogicalGate::H(ri), t);
        }
        for (rj, &lj) in valid.iter().enumerate().skip(ri + 1) {
            if let Some(t) = table.get(LogicalGate::Cphase(li, lj)) {
                ranked.set(LogicalGate::Cphase(ri, rj), t);
            }
        }
    }
    let order = dependency_generators(k, mode);
    let result = check_order_capped(&order, &ranked, cap);
    let name = |g: LogicalGate| match g {
        LogicalGate::H(r) => format!("H({})", valid[r]),
        LogicalGate::Cphase(r, s) => format!("G({},{})", valid[r], valid[s]),
    };
    for &(a, b) in &result.violations {
        let at = ranked.get(b);
        dependency.push(at, vec![], format!("{} must precede {}", name(a), name(b)));
    }
    dependency.total = result.violation_total;

    let ok = connectivity.is_empty()
        && overlap.is_empty()
        && mapping_f.is_empty()
        && dependency.is_empty()
        && completeness.is_empty();
    VerificationReport {
        ok,
        connectivity_violations: connectivity,
        overlap_violations: overlap,
        mapping_violations: mapping_f,
        dependency_violations: dependency,
        completeness_violations: completeness,
        metrics: metrics(circuit),
    }
}

/// Loads a circuit file and verifies it on a freshly built graph.
pub fn verify_file(path: &Path, mode_override: Option<Mode>) -> Result<VerificationReport> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let circuit = import_json(&text)?;
    let graph = build_architecture(circuit.arch.kind, circuit.arch.size)?;
    let mode = mode_override.unwrap_or(circuit.mode);
    Ok(verify(&circuit, &graph, mode, None))
}
