//! Schedules that leave faulty physical qubits untouched.
//!
//! Logical qubits are numbered compactly over the surviving qubits, so a run
//! with k faults computes the QFT on `node_count - excluded` qubits.

use std::collections::BTreeSet;

use crate::circuit::{Mode, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::heavyhex::{hh_qft, hh_schedule_with, HhPlan, HhScheme};
use crate::sycamore::{syc_qft, syc_schedule};
use crate::topology::{build_architecture, unit_partition, ArchKind, CouplingGraph};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FaultModel {
    pub faulty: BTreeSet<usize>,
}

impl FaultModel {
    pub fn new(faulty: impl IntoIterator<Item = usize>) -> Self {
        FaultModel { faulty: faulty.into_iter().collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.faulty.is_empty()
    }

    fn check_in(&self, graph: &CouplingGraph) -> Result<()> {
        match self.faulty.iter().find(|&&q| q >= graph.node_count) {
            Some(&q) => Err(Error::QubitOutOfRange(q)),
            None => Ok(()),
        }
    }

    fn sorted(&self) -> Vec<usize> {
        self.faulty.iter().copied().collect()
    }
}

/// Heavy-hex QFT with faulty danglers dropped. Runs the threaded scheme, in
/// which a column without its dangler is simply a shorter unit.
pub fn hh_qft_faulty(n: usize, faults: &FaultModel, mode: Mode) -> Result<ScheduledCircuit> {
    if faults.is_empty() {
        return hh_qft(n, mode);
    }
    if n < 10 {
        return Err(Error::SizeTooSmall { kind: "heavyhex", size: n, min: 10 });
    }
    let graph = build_architecture(ArchKind::HeavyHex, n)?;
    faults.check_in(&graph)?;
    let columns = n / 5;
    let path_len = 4 * columns;
    if let Some(&q) = faults.faulty.iter().find(|&&q| q < path_len) {
        return Err(Error::OnPathFault(q));
    }
    let off_columns = (0..columns).filter(|c| !faults.faulty.contains(&(path_len + c))).collect();
    let plan = HhPlan { columns, off_columns };
    let arch = graph.descriptor().with_faulty(faults.sorted());
    hh_schedule_with(&graph, &plan, mode, HhScheme::Threaded)
        .map(|c| ScheduledCircuit::from_parts(arch, c.mode, c.initial_mapping, c.layers))
}

/// Unit left empty next to `faulty`: the following unit, or the preceding
/// one when the faulty unit is last.
pub fn buffer_unit(units: usize, faulty: usize) -> usize {
    if faulty + 1 < units {
        faulty + 1
    } else {
        faulty - 1
    }
}

/// Sycamore QFT with the unit holding the faults and its buffer unit
/// excluded. The remaining units must form one block.
pub fn syc_qft_faulty(m: usize, faults: &FaultModel, mode: Mode) -> Result<ScheduledCircuit> {
    if faults.is_empty() {
        return syc_qft(m, mode);
    }
    let graph = build_architecture(ArchKind::Sycamore, m)?;
    faults.check_in(&graph)?;
    let part = unit_partition(&graph);
    let owners: BTreeSet<usize> = faults.faulty.iter().filter_map(|&q| part.locate(q)).map(|(u, _)| u).collect();
    if owners.len() != 1 {
        return Err(Error::FaultsSpanUnits);
    }
    let units = m / 2;
    let faulty = *owners.iter().next().expect("one owner");
    if units < 2 {
        return Err(Error::TooFewUnits);
    }
    let buffer = buffer_unit(units, faulty);
    let (lo, hi) = (faulty.min(buffer), faulty.max(buffer));
    let keep = match (lo > 0, hi + 1 < units) {
        (true, true) => return Err(Error::FaultBandSplits(lo, hi)),
        (true, false) => 0..lo,
        (false, true) => hi + 1..units,
        (false, false) => return Err(Error::TooFewUnits),
    };
    let mut arch = graph.descriptor().with_faulty(faults.sorted());
    arch.buffer_unit = Some(buffer);
    syc_schedule(&graph, arch, keep, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify;

    fn touched(c: &ScheduledCircuit) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for layer in &c.layers {
            for op in &layer.ops {
                let (a, b) = op.physical_args();
                out.insert(a);
                out.extend(b);
            }
        }
        out
    }

    #[test]
    fn heavyhex_single_dangler_faults() {
        for n in [10, 20, 30, 50] {
            let g = build_architecture(ArchKind::HeavyHex, n).unwrap();
            for d in 4 * n / 5..n {
                for mode in [Mode::Relaxed, Mode::Strict] {
                    let c = hh_qft_faulty(n, &FaultModel::new([d]), mode).unwrap();
                    assert_eq!(c.logical_count(), n - 1);
                    let r = verify(&c, &g, mode, None);
                    assert!(r.ok, "n={n} dangler {d} {mode}: {}", r.to_json());
                    assert!(!touched(&c).contains(&d));
                }
            }
        }
    }

    #[test]
    fn heavyhex_two_faults() {
        let g = build_architecture(ArchKind::HeavyHex, 40).unwrap();
        for mode in [Mode::Relaxed, Mode::Strict] {
            let c = hh_qft_faulty(40, &FaultModel::new([33, 37]), mode).unwrap();
            assert_eq!(c.logical_count(), 38);
            assert!(verify(&c, &g, mode, None).ok);
        }
    }

    #[test]
    fn heavyhex_rejects_path_faults() {
        assert_eq!(hh_qft_faulty(20, &FaultModel::new([5]), Mode::Relaxed).unwrap_err(), Error::OnPathFault(5));
        assert_eq!(hh_qft_faulty(20, &FaultModel::new([20]), Mode::Relaxed).unwrap_err(), Error::QubitOutOfRange(20));
    }

    #[test]
    fn empty_faults_reduce_exactly() {
        let e = FaultModel::default();
        assert_eq!(hh_qft_faulty(20, &e, Mode::Strict).unwrap().to_json(), hh_qft(20, Mode::Strict).unwrap().to_json());
        assert_eq!(syc_qft_faulty(6, &e, Mode::Relaxed).unwrap().to_json(), syc_qft(6, Mode::Relaxed).unwrap().to_json());
    }

    #[test]
    fn sycamore_edge_bands() {
        for (m, q) in [(6, 14), (8, 3), (8, 60), (10, 90)] {
            let g = build_architecture(ArchKind::Sycamore, m).unwrap();
            for mode in [Mode::Relaxed, Mode::Strict] {
                let c = syc_qft_faulty(m, &FaultModel::new([q]), mode).unwrap();
                assert_eq!(c.logical_count(), m * m - 4 * m);
                let r = verify(&c, &g, mode, None);
                assert!(r.ok, "m={m} fault {q} {mode}: {}", r.to_json());
                assert!(!touched(&c).contains(&q));
                assert!(c.arch.buffer_unit.is_some());
            }
        }
    }

    #[test]
    fn sycamore_guards() {
        assert_eq!(syc_qft_faulty(4, &FaultModel::new([1]), Mode::Relaxed).unwrap_err(), Error::TooFewUnits);
        assert_eq!(syc_qft_faulty(6, &FaultModel::new([1, 30]), Mode::Relaxed).unwrap_err(), Error::FaultsSpanUnits);
        // unit 1 of four: buffer 2 leaves units 0 and 3 apart
        assert_eq!(syc_qft_faulty(8, &FaultModel::new([17]), Mode::Relaxed).unwrap_err(), Error::FaultBandSplits(1, 2));
        assert_eq!(buffer_unit(3, 2), 1);
    }
}
