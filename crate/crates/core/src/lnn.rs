//! Triangular swap network QFT on a line of qubits.

use crate::circuit::{Mapping, Mode, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::sequencer::Sequencer;
use crate::topology::{build_architecture, ArchKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LnnOptions {
    pub n: usize,
    pub physical_offset: usize,
    /// Run on the segment read from its far end.
    pub reverse_orientation: bool,
    pub logical_base: usize,
}

impl LnnOptions {
    pub fn new(n: usize) -> Self {
        LnnOptions { n, physical_offset: 0, reverse_orientation: false, logical_base: 0 }
    }

    fn line(&self) -> Vec<usize> {
        let mut line: Vec<usize> = (self.physical_offset..self.physical_offset + self.n).collect();
        if self.reverse_orientation {
            line.reverse();
        }
        line
    }
}

/// Round count of the network on `n` qubits.
pub fn rounds(n: usize) -> usize {
    (2 * n).saturating_sub(3)
}

/// Pair positions swapped in round `r`: start parity r mod 2, extent capped by
/// min(r, 2(n-2) - r).
pub fn active_pairs(n: usize, r: usize) -> impl Iterator<Item = usize> {
    let hi = if n < 2 { None } else { Some(r.min((2 * (n - 2)).saturating_sub(r)).min(n - 2)) };
    let valid = n >= 2 && r <= 2 * (n - 2);
    (r % 2..=hi.unwrap_or(0)).step_by(2).filter(move |_| valid)
}

/// Emits the network on `line`, whose occupants must ascend from `line[0]`.
/// Each qubit climbs to `line[0]`, takes its Hadamard while pausing there,
/// then descends; the segment ends fully reversed.
pub fn lnn_line(seq: &mut Sequencer<'_>, line: &[usize]) {
    let n = line.len();
    for r in 0..rounds(n) {
        seq.h_once(line[0]);
        for i in active_pairs(n, r) {
            seq.cp(line[i], line[i + 1]);
            seq.swap(line[i], line[i + 1]);
        }
    }
    if n > 0 {
        seq.h_once(line[0]);
    }
}

/// Runs the network on the segment described by `opts` inside a larger schedule.
pub fn lnn_fragment(seq: &mut Sequencer<'_>, opts: &LnnOptions) -> Result<()> {
    if opts.n == 0 {
        return Err(Error::EmptyRegister);
    }
    let line = opts.line();
    if !seq.graph().is_path(&line) {
        return Err(Error::NotAPath);
    }
    for (k, &p) in line.iter().enumerate() {
        if seq.logical_at(p) != Some(opts.logical_base + k) {
            return Err(Error::Schema(format!("segment position {k} does not hold logical {}", opts.logical_base + k)));
        }
    }
    lnn_line(seq, &line);
    Ok(())
}

/// Whole-register QFT on LNN(n); the same network serves both modes.
pub fn lnn_qft(n: usize, mode: Mode) -> Result<ScheduledCircuit> {
    lnn_qft_with(&LnnOptions::new(n), mode)
}

pub fn lnn_qft_with(opts: &LnnOptions, mode: Mode) -> Result<ScheduledCircuit> {
    if opts.n == 0 {
        return Err(Error::EmptyRegister);
    }
    let width = opts.physical_offset + opts.n;
    let graph = build_architecture(ArchKind::Lnn, width)?;
    let mut placement = vec![0; opts.logical_base + opts.n];
    let line = opts.line();
    let mut free = (0..width).filter(|p| !line.contains(p));
    for (l, slot) in placement.iter_mut().enumerate() {
        *slot = if l >= opts.logical_base { line[l - opts.logical_base] } else { free.next().ok_or(Error::NotAPath)? };
    }
    let mut seq = Sequencer::new(&graph, Mapping::from_assignment(placement, width)?);
    // logical qubits below the base have no gates of their own here
    lnn_line(&mut seq, &line);
    Ok(seq.finish(graph.descriptor(), mode))
}
