//! Architecture dispatch and the benchmark report.

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{Mode, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::faults::{hh_qft_faulty, syc_qft_faulty, FaultModel};
use crate::grid::grid_qft;
use crate::heavyhex::hh_qft;
use crate::lnn::lnn_qft;
use crate::sycamore::syc_qft;
use crate::topology::{build_architecture, ArchKind};
use crate::verify::{verify, VerificationReport};

/// QFT schedule for `kind` at `size` (line length, grid side or qubit count).
pub fn generate(kind: ArchKind, size: usize, mode: Mode, faults: &FaultModel) -> Result<ScheduledCircuit> {
    match kind {
        ArchKind::Sycamore => syc_qft_faulty(size, faults, mode),
        ArchKind::HeavyHex => hh_qft_faulty(size, faults, mode),
        _ if !faults.is_empty() => Err(Error::Schema(format!("fault sets are supported on sycamore and heavyhex only, not {kind}"))),
        ArchKind::Lnn => lnn_qft(size, mode),
        ArchKind::Grid => grid_qft(size, mode),
    }
}

/// Fault-free schedule.
pub fn generate_plain(kind: ArchKind, size: usize, mode: Mode) -> Result<ScheduledCircuit> {
    match kind {
        ArchKind::Lnn => lnn_qft(size, mode),
        ArchKind::Grid => grid_qft(size, mode),
        ArchKind::Sycamore => syc_qft(size, mode),
        ArchKind::HeavyHex => hh_qft(size, mode),
    }
}

/// Generates and verifies against a freshly built graph.
pub fn generate_verified(kind: ArchKind, size: usize, mode: Mode, faults: &FaultModel) -> Result<(ScheduledCircuit, VerificationReport)> {
    let circuit = generate(kind, size, mode, faults)?;
    let graph = build_architecture(kind, size)?;
    let report = verify(&circuit, &graph, mode, None);
    Ok((circuit, report))
}

/// Published depth and swap count for one "our approach" row of the
/// original comparison table. Reference data only; never read by a generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TableReference {
    pub arch: ArchKind,
    pub size: usize,
    pub depth: usize,
    pub swaps: usize,
}

pub const TABLE_REFERENCES: [TableReference; 10] = [
    TableReference { arch: ArchKind::Grid, size: 3, depth: 32, swaps: 33 },
    TableReference { arch: ArchKind::Grid, size: 4, depth: 66, swaps: 116 },
    TableReference { arch: ArchKind::Grid, size: 5, depth: 113, swaps: 295 },
    TableReference { arch: ArchKind::Grid, size: 6, depth: 172, swaps: 624 },
    TableReference { arch: ArchKind::Sycamore, size: 2, depth: 10, swaps: 6 },
    TableReference { arch: ArchKind::Sycamore, size: 4, depth: 81, swaps: 116 },
    TableReference { arch: ArchKind::Sycamore, size: 6, depth: 208, swaps: 540 },
    TableReference { arch: ArchKind::HeavyHex, size: 10, depth: 42, swaps: 52 },
    TableReference { arch: ArchKind::HeavyHex, size: 20, depth: 172, swaps: 189 },
    TableReference { arch: ArchKind::HeavyHex, size: 30, depth: 288, swaps: 444 },
];

/// Mode used for the table rows; the published rows do not state one.
pub const TABLE_MODE: Mode = Mode::Relaxed;

pub fn table_reference(arch: ArchKind, size: usize) -> Option<TableReference> {
    TABLE_REFERENCES.iter().copied().find(|r| r.arch == arch && r.size == size)
}

/// One benchmark run. Field order is the CSV column order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub arch: ArchKind,
    pub size: usize,
    pub mode: Mode,
    pub qubits: usize,
    pub depth: usize,
    /// Layers holding a two-qubit gate; compared against the reference depth.
    pub two_qubit_depth: usize,
    pub swaps: usize,
    pub cphases: usize,
    pub depth_per_qubit: f64,
    pub reference_depth: Option<usize>,
    pub reference_swaps: Option<usize>,
    pub depth_deviation_pct: Option<f64>,
    pub swap_deviation_pct: Option<f64>,
}

pub const CSV_HEADER: &str =
    "arch,size,mode,qubits,depth,two_qubit_depth,swaps,cphases,depth_per_qubit,reference_depth,reference_swaps,depth_deviation_pct,swap_deviation_pct";

fn deviation(ours: usize, theirs: usize) -> f64 {
    (ours as f64 - theirs as f64) / theirs as f64 * 100.0
}

impl BenchRow {
    pub fn from_circuit(circuit: &ScheduledCircuit) -> BenchRow {
        let m = circuit.metrics();
        let (arch, size) = (circuit.arch.kind, circuit.arch.size);
        let reference = table_reference(arch, size).filter(|_| circuit.arch.faulty.is_empty());
        let qubits = circuit.logical_count();
        BenchRow {
            arch,
            size,
            mode: circuit.mode,
            qubits,
            depth: m.depth,
            two_qubit_depth: m.two_qubit_depth,
            swaps: m.swap_count,
            cphases: m.cphase_count,
            depth_per_qubit: m.depth as f64 / qubits as f64,
            reference_depth: reference.map(|r| r.depth),
            reference_swaps: reference.map(|r| r.swaps),
            depth_deviation_pct: reference.map(|r| deviation(m.two_qubit_depth, r.depth)),
            swap_deviation_pct: reference.map(|r| deviation(m.swap_count, r.swaps)),
        }
    }

    pub fn csv_line(&self) -> String {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let pct = |v: Option<f64>| v.map(|x| format!("{x:.2}")).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{:.4},{},{},{},{}",
            self.arch,
            self.size,
            self.mode,
            self.qubits,
            self.depth,
            self.two_qubit_depth,
            self.swaps,
            self.cphases,
            self.depth_per_qubit,
            opt(self.reference_depth),
            opt(self.reference_swaps),
            pct(self.depth_deviation_pct),
            pct(self.swap_deviation_pct)
        )
    }
}

/// Generates, verifies and measures every size in parallel; rows come back
/// in input order. Fails on the first generation or verification failure.
pub fn run_bench(arch: ArchKind, sizes: &[usize], mode: Mode) -> Result<Vec<BenchRow>> {
    sizes
        .par_iter()
        .map(|&size| {
            let (circuit, report) = generate_verified(arch, size, mode, &FaultModel::default())?;
            if !report.ok {
                return Err(Error::Schema(format!("{arch} size {size} {mode} failed verification")));
            }
            Ok(BenchRow::from_circuit(&circuit))
        })
        .collect()
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r.csv_line());
        out.push('\n');
    }
    out
}

pub fn to_markdown(rows: &[BenchRow]) -> String {
    let mut out = String::from(
        "| arch | size | mode | qubits | depth | 2q depth | swaps | depth/N | ref depth | ref swaps | depth dev % | swap dev % |\n\
         |---|---|---|---|---|---|---|---|---|---|---|---|\n",
    );
    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_else(|| "-".into());
    let pct = |v: Option<f64>| v.map(|x| format!("{x:+.1}")).unwrap_or_else(|| "-".into());
    for r in rows {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} | {:.3} | {} | {} | {} | {} |\n",
            r.arch,
            r.size,
            r.mode,
            r.qubits,
            r.depth,
            r.two_qubit_depth,
            r.swaps,
            r.depth_per_qubit,
            opt(r.reference_depth),
            opt(r.reference_swaps),
            pct(r.depth_deviation_pct),
            pct(r.swap_deviation_pct)
        ));
    }
    out.push_str("\nReference columns are the published table values, stored as data.\n");
    out
}
