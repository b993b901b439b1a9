//! QFT on the m x m grid with one unit per row.

use crate::circuit::{Mapping, Mode, ScheduledCircuit};
use crate::driver::{alternating_placement, ascending, run_unit_network, UnitOps};
use crate::error::{Error, Result};
use crate::sequencer::Sequencer;
use crate::topology::{build_architecture, ArchKind, CouplingGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridIeOptions {
    pub unit_top: usize,
    pub unit_bottom: usize,
    pub mode: Mode,
    pub m: usize,
}

fn row(m: usize, r: usize) -> Vec<usize> {
    (r * m..(r + 1) * m).collect()
}

fn check_rows(graph: &CouplingGraph, top: usize, bottom: usize) -> Result<()> {
    let m = graph.size_param;
    if top >= m {
        return Err(Error::UnknownUnit(top));
    }
    if bottom >= m {
        return Err(Error::UnknownUnit(bottom));
    }
    if top.abs_diff(bottom) != 1 {
        return Err(Error::UnitsNotAdjacent(top, bottom));
    }
    Ok(())
}

/// One layer of vertical swaps exchanging two adjacent rows.
pub fn grid_unit_swap(seq: &mut Sequencer<'_>, top: usize, bottom: usize) -> Result<()> {
    let graph = seq.graph();
    check_rows(graph, top, bottom)?;
    let m = graph.size_param;
    for c in 0..m {
        seq.swap(top * m + c, bottom * m + c);
    }
    Ok(())
}

/// Brick layer on one row: swaps (s, s+1), (s+2, s+3), ...
fn brick(seq: &mut Sequencer<'_>, line: &[usize], start: usize) {
    let mut c = start;
    while c + 1 < line.len() {
        seq.swap(line[c], line[c + 1]);
        c += 2;
    }
}

/// Relaxed interaction: m rounds of cphases on every vertical link, each
/// followed by offset brick layers (top starts at i mod 2, bottom at
/// (i+1) mod 2). Leaves both rows reversed.
pub fn grid_ie_relaxed(seq: &mut Sequencer<'_>, top: usize, bottom: usize) {
    let m = seq.graph().size_param;
    let (t, b) = (row(m, top), row(m, bottom));
    for i in 0..m {
        for c in 0..m {
            seq.cp_once(t[c], b[c]);
        }
        brick(seq, &t, i % 2);
        brick(seq, &b, (i + 1) % 2);
    }
}

/// Strict interaction fused with the unit swap: block passing along the
/// U-shaped path (top row, one end link, bottom row back). Pair (x, y) meets in
/// round x + y, so every qubit sees its partners in ascending order. Both rows
/// must share an orientation; both end up flipped and exchanged.
pub fn grid_ie_strict_swap(seq: &mut Sequencer<'_>, top: usize, bottom: usize) {
    let m = seq.graph().size_param;
    let (t, b) = (row(m, top), row(m, bottom));
    let asc_t = ascending(seq, &t);
    debug_assert_eq!(asc_t, ascending(seq, &b), "rows must share orientation");
    // ascending rows turn at the left end, descending rows at the right end
    let (mut tp, mut bp) = (t.clone(), b.clone());
    if asc_t {
        tp.reverse();
    } else {
        bp.reverse();
    }
    let path: Vec<usize> = tp.into_iter().chain(bp).collect();
    block_pass(seq, &path, m);
}

/// Exchanges the first `split` entries of `path` with the rest by adjacent
/// transpositions, cphasing every crossing pair once.
pub(crate) fn block_pass(seq: &mut Sequencer<'_>, path: &[usize], split: usize) {
    let mut side: Vec<bool> = (0..path.len()).map(|k| k < split).collect();
    loop {
        let movers: Vec<usize> = (0..path.len() - 1).filter(|&k| side[k] && !side[k + 1]).collect();
        if movers.is_empty() {
            break;
        }
        for &k in &movers {
            seq.cp(path[k], path[k + 1]);
            seq.swap(path[k], path[k + 1]);
            side.swap(k, k + 1);
        }
    }
}

pub fn grid_ie(seq: &mut Sequencer<'_>, opts: &GridIeOptions) -> Result<()> {
    check_rows(seq.graph(), opts.unit_top, opts.unit_bottom)?;
    if opts.m != seq.graph().size_param {
        return Err(Error::UnitLengthMismatch(opts.m, seq.graph().size_param));
    }
    match opts.mode {
        Mode::Relaxed => grid_ie_relaxed(seq, opts.unit_top, opts.unit_bottom),
        Mode::Strict => grid_ie_strict_swap(seq, opts.unit_top, opts.unit_bottom),
    }
    Ok(())
}

struct GridUnits {
    mode: Mode,
    rows: Vec<Vec<usize>>,
}

impl UnitOps for GridUnits {
    fn line(&self, slot: usize) -> &[usize] {
        &self.rows[slot]
    }

    fn interact_and_swap(&mut self, seq: &mut Sequencer<'_>, upper: usize) {
        match self.mode {
            Mode::Relaxed => {
                grid_ie_relaxed(seq, upper, upper + 1);
                grid_unit_swap(seq, upper, upper + 1).expect("adjacent rows");
            }
            Mode::Strict => grid_ie_strict_swap(seq, upper, upper + 1),
        }
    }

    fn interact_last(&mut self, seq: &mut Sequencer<'_>, upper: usize) {
        match self.mode {
            Mode::Relaxed => grid_ie_relaxed(seq, upper, upper + 1),
            Mode::Strict => grid_ie_strict_swap(seq, upper, upper + 1),
        }
    }
}

pub fn grid_qft(m: usize, mode: Mode) -> Result<ScheduledCircuit> {
    let graph = build_architecture(ArchKind::Grid, m)?;
    let rows: Vec<Vec<usize>> = (0..m).map(|r| row(m, r)).collect();
    let placement = alternating_placement(&rows, graph.node_count);
    let mut seq = Sequencer::new(&graph, Mapping::from_assignment(placement, graph.node_count)?);
    let mut units = GridUnits { mode, rows };
    run_unit_network(&mut seq, &mut units, m);
    Ok(seq.finish(graph.descriptor(), mode))
}
