//! Unit-level triangle driver shared by the grid and sycamore schedulers.
//!
//! Units play the role of single qubits in the line network: a unit's
//! intra-unit QFT stands in for the Hadamard, the inter-unit interaction for
//! the cphase, and a unit swap for the swap.

use crate::lnn::{active_pairs, lnn_line, rounds};
use crate::sequencer::Sequencer;

pub(crate) trait UnitOps {
    /// Physical line of the unit currently in `slot`.
    fn line(&self, slot: usize) -> &[usize];

    /// All cphases between slots `upper` and `upper + 1`, then exchange their contents.
    fn interact_and_swap(&mut self, seq: &mut Sequencer<'_>, upper: usize);

    /// The network's final interaction, after which no unit moves again. The
    /// exchange may be skipped; the closing intra-unit pass finds the unit
    /// still lacking it in either slot.
    fn interact_last(&mut self, seq: &mut Sequencer<'_>, upper: usize) {
        self.interact_and_swap(seq, upper);
    }

    /// Intra-unit QFT on `slot`, whichever way its contents ascend.
    fn intra(&mut self, seq: &mut Sequencer<'_>, slot: usize) {
        let line = oriented(seq, self.line(slot));
        lnn_line(seq, &line);
    }
}

/// `line` reordered so occupants ascend from its first entry.
pub(crate) fn oriented(seq: &Sequencer<'_>, line: &[usize]) -> Vec<usize> {
    let mut out = line.to_vec();
    if out.len() > 1 && seq.logical_at(out[0]) > seq.logical_at(out[out.len() - 1]) {
        out.reverse();
    }
    out
}

/// True when the occupants of `line` ascend from its first entry.
pub(crate) fn ascending(seq: &Sequencer<'_>, line: &[usize]) -> bool {
    line.len() < 2 || seq.logical_at(line[0]) < seq.logical_at(line[line.len() - 1])
}

fn intra_once<O: UnitOps>(seq: &mut Sequencer<'_>, ops: &mut O, slot: usize) {
    let first = ops.line(slot)[0];
    let done = seq.logical_at(first).map(|l| seq.h_done(l)).unwrap_or(true);
    if !done {
        ops.intra(seq, slot);
    }
}

pub(crate) fn run_unit_network<O: UnitOps>(seq: &mut Sequencer<'_>, ops: &mut O, slots: usize) {
    let total = rounds(slots);
    for r in 0..total {
        intra_once(seq, ops, 0);
        for i in active_pairs(slots, r) {
            if r + 1 == total {
                ops.interact_last(seq, i);
            } else {
                ops.interact_and_swap(seq, i);
            }
        }
    }
    for slot in 0..slots.min(2) {
        intra_once(seq, ops, slot);
    }
}

/// Initial placement: unit k holds logicals k*len.., ascending along its line
/// for even k and descending for odd k, so units meet with equal orientation.
pub(crate) fn alternating_placement(lines: &[Vec<usize>], physical_count: usize) -> Vec<usize> {
    let mut placement = Vec::new();
    for (k, line) in lines.iter().enumerate() {
        if k % 2 == 0 {
            placement.extend(line.iter().copied());
        } else {
            placement.extend(line.iter().rev().copied());
        }
    }
    debug_assert!(placement.iter().all(|&p| p < physical_count));
    placement
}
