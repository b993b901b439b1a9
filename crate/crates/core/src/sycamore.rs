//! QFT on the sycamore-style diagonal grid with two-row serpentine units.

use crate::circuit::{Mapping, Mode, ScheduledCircuit};
use crate::driver::{alternating_placement, oriented, run_unit_network, UnitOps};
use crate::error::{Error, Result};
use crate::sequencer::Sequencer;
use crate::topology::{build_architecture, sycamore_line, ArchDescriptor, ArchKind, CouplingGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SycIeOptions {
    pub unit_a: usize,
    pub unit_b: usize,
    pub len: usize,
    pub mode: Mode,
}

fn check_units(graph: &CouplingGraph, a: usize, b: usize) -> Result<()> {
    let units = graph.size_param / 2;
    for u in [a, b] {
        if u >= units {
            return Err(Error::UnknownUnit(u));
        }
    }
    if a.abs_diff(b) != 1 {
        return Err(Error::UnitsNotAdjacent(a, b));
    }
    Ok(())
}

/// Exchanges units `u` and `u + 1` in three layers using vertical links only:
/// per column with rows a, b (unit u) and c, d (unit u+1): (b,c); (a,b),(c,d); (b,c).
pub fn syc_unit_swap(seq: &mut Sequencer<'_>, u: usize, v: usize) -> Result<()> {
    check_units(seq.graph(), u, v)?;
    unit_swap_rows(seq, u.min(v), false);
    Ok(())
}

/// With `same_position`, the middle of the swap also cphases each qubit with
/// the other unit's qubit at the same line position: once rows b and c have
/// traded places, those pairs sit on the (a,b) and (c,d) vertical links.
fn unit_swap_rows(seq: &mut Sequencer<'_>, top: usize, same_position: bool) {
    let m = seq.graph().size_param;
    let rows = [2 * top, 2 * top + 1, 2 * top + 2, 2 * top + 3];
    let cell = |r: usize, c: usize| r * m + c;
    for c in 0..m {
        seq.swap(cell(rows[1], c), cell(rows[2], c));
    }
    if same_position {
        for c in 0..m {
            seq.cp_once(cell(rows[0], c), cell(rows[1], c));
            seq.cp_once(cell(rows[2], c), cell(rows[3], c));
        }
    }
    for c in 0..m {
        seq.swap(cell(rows[0], c), cell(rows[1], c));
        seq.swap(cell(rows[2], c), cell(rows[3], c));
    }
    for c in 0..m {
        seq.swap(cell(rows[1], c), cell(rows[2], c));
    }
}

/// Boundary link positions (p in upper line, q in lower line) for lines as given.
fn link_positions(graph: &CouplingGraph, upper: &[usize], lower: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (p, &a) in upper.iter().enumerate() {
        for (q, &b) in lower.iter().enumerate() {
            if graph.has_edge(a, b) {
                out.push((p, q));
            }
        }
    }
    out
}

/// Same-position pairs never meet under synchronized motion. Each gets a
/// detour: shift one unit by a column-local swap, cphase across the vertical
/// links, shift back while shifting the other unit, cphase again, shift back.
pub fn syc_same_position_detour(seq: &mut Sequencer<'_>, u: usize) {
    let m = seq.graph().size_param;
    let (a, b, c, d) = (2 * u, 2 * u + 1, 2 * u + 2, 2 * u + 3);
    let cell = |r: usize, col: usize| r * m + col;
    for col in 0..m {
        seq.swap(cell(a, col), cell(b, col));
    }
    for col in 0..m {
        seq.cp_once(cell(b, col), cell(c, col));
    }
    for col in 0..m {
        seq.swap(cell(a, col), cell(b, col));
        seq.swap(cell(c, col), cell(d, col));
    }
    for col in 0..m {
        seq.cp_once(cell(b, col), cell(c, col));
    }
    for col in 0..m {
        seq.swap(cell(c, col), cell(d, col));
    }
}

/// Synchronized brick layers on both lines with start parity i mod 2, with
/// cphases on every boundary link before each layer. L + 1 cphase rounds and
/// L swap layers; both lines end mirrored.
pub fn syc_ie_relaxed_loop(seq: &mut Sequencer<'_>, u: usize) {
    let m = seq.graph().size_param;
    let (ul, vl) = (sycamore_line(m, u), sycamore_line(m, u + 1));
    let len = ul.len();
    let links = link_positions(seq.graph(), &ul, &vl);
    for i in 0..=len {
        // the links form a path: alternate edges first so they share a layer
        for &(p, q) in links.iter().step_by(2).chain(links.iter().skip(1).step_by(2)) {
            seq.cp_once(ul[p], vl[q]);
        }
        if i < len {
            let mut k = i % 2;
            while k + 1 < len {
                seq.swap(ul[k], ul[k + 1]);
                seq.swap(vl[k], vl[k + 1]);
                k += 2;
            }
        }
    }
}

pub fn syc_ie_relaxed(seq: &mut Sequencer<'_>, u: usize) {
    syc_same_position_detour(seq, u);
    syc_ie_relaxed_loop(seq, u);
}

/// Relaxed interaction followed by the unit swap, with the same-position pairs
/// folded into the swap instead of a separate detour.
pub fn syc_ie_relaxed_swap(seq: &mut Sequencer<'_>, u: usize) {
    syc_ie_relaxed_loop(seq, u);
    unit_swap_rows(seq, u, true);
}

/// Strict interaction. Both lines run the line network in lockstep from the
/// end where their lowest qubits sit; after every step each qubit takes any
/// boundary partner that is next in its own ascending partner order. Equal
/// ranks reach the top end together and meet there through a short
/// shift-cphase-unshift. Both lines end mirrored.
pub fn syc_ie_strict(seq: &mut Sequencer<'_>, u: usize) {
    let m = seq.graph().size_param;
    let graph = seq.graph();
    let ul = oriented(seq, &sycamore_line(m, u));
    let vl = oriented(seq, &sycamore_line(m, u + 1));
    let len = ul.len();
    let links = link_positions(graph, &ul, &vl);
    let mut st = StrictState {
        upper_rank: (0..len).collect(),
        lower_rank: (0..len).collect(),
        next_for_upper: vec![0; len],
        next_for_lower: vec![0; len],
        ul: &ul,
        vl: &vl,
        links: &links,
    };
    let top_linked = graph.has_edge(ul[0], vl[0]);
    let rounds = crate::lnn::rounds(len);
    for r in 0..=rounds {
        st.flush(seq);
        let x = st.upper_rank[0];
        if !top_linked
            && st.lower_rank[0] == x
            && st.next_for_upper[x] == x
            && st.next_for_lower[x] == x
        {
            if graph.has_edge(ul[1], vl[0]) {
                st.swap_upper(seq, 0);
                st.flush(seq);
                st.swap_upper(seq, 0);
            } else {
                st.swap_lower(seq, 0);
                st.flush(seq);
                st.swap_lower(seq, 0);
            }
        }
        st.flush(seq);
        if r < rounds {
            for k in crate::lnn::active_pairs(len, r) {
                st.swap_upper(seq, k);
                st.swap_lower(seq, k);
            }
        }
    }
    st.flush(seq);
}

struct StrictState<'a> {
    upper_rank: Vec<usize>,
    lower_rank: Vec<usize>,
    next_for_upper: Vec<usize>,
    next_for_lower: Vec<usize>,
    ul: &'a [usize],
    vl: &'a [usize],
    links: &'a [(usize, usize)],
}

impl StrictState<'_> {
    fn swap_upper(&mut self, seq: &mut Sequencer<'_>, k: usize) {
        self.upper_rank.swap(k, k + 1);
        seq.swap(self.ul[k], self.ul[k + 1]);
    }

    fn swap_lower(&mut self, seq: &mut Sequencer<'_>, k: usize) {
        self.lower_rank.swap(k, k + 1);
        seq.swap(self.vl[k], self.vl[k + 1]);
    }

    /// Emits every boundary cphase that is next in line for both endpoints.
    fn flush(&mut self, seq: &mut Sequencer<'_>) {
        loop {
            let mut progress = false;
            for &(p, q) in self.links {
                let (x, y) = (self.upper_rank[p], self.lower_rank[q]);
                if self.next_for_upper[x] == y && self.next_for_lower[y] == x {
                    seq.cp(self.ul[p], self.vl[q]);
                    self.next_for_upper[x] += 1;
                    self.next_for_lower[y] += 1;
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }
    }
}

pub fn syc_ie(seq: &mut Sequencer<'_>, opts: &SycIeOptions) -> Result<()> {
    check_units(seq.graph(), opts.unit_a, opts.unit_b)?;
    if opts.len != 2 * seq.graph().size_param {
        return Err(Error::UnitLengthMismatch(opts.len, 2 * seq.graph().size_param));
    }
    let u = opts.unit_a.min(opts.unit_b);
    match opts.mode {
        Mode::Relaxed => syc_ie_relaxed(seq, u),
        Mode::Strict => syc_ie_strict(seq, u),
    }
    Ok(())
}

struct SycUnits {
    mode: Mode,
    /// Unit id of slot 0.
    first: usize,
    lines: Vec<Vec<usize>>,
}

impl UnitOps for SycUnits {
    fn line(&self, slot: usize) -> &[usize] {
        &self.lines[slot]
    }

    fn interact_and_swap(&mut self, seq: &mut Sequencer<'_>, slot: usize) {
        let upper = self.first + slot;
        match self.mode {
            Mode::Relaxed => syc_ie_relaxed_swap(seq, upper),
            Mode::Strict => {
                syc_ie_strict(seq, upper);
                unit_swap_rows(seq, upper, false);
            }
        }
    }

    fn interact_last(&mut self, seq: &mut Sequencer<'_>, slot: usize) {
        let upper = self.first + slot;
        match self.mode {
            Mode::Relaxed => syc_ie_relaxed_swap(seq, upper),
            Mode::Strict => syc_ie_strict(seq, upper),
        }
    }
}

pub fn syc_qft(m: usize, mode: Mode) -> Result<ScheduledCircuit> {
    let graph = build_architecture(ArchKind::Sycamore, m)?;
    syc_schedule(&graph, graph.descriptor(), 0..m / 2, mode)
}

/// Unit network over the consecutive units in `units` only; every other
/// qubit stays idle and holds no logical qubit.
pub(crate) fn syc_schedule(
    graph: &CouplingGraph,
    arch: ArchDescriptor,
    units: std::ops::Range<usize>,
    mode: Mode,
) -> Result<ScheduledCircuit> {
    let m = graph.size_param;
    let first = units.start;
    let lines: Vec<Vec<usize>> = units.map(|u| sycamore_line(m, u)).collect();
    let slots = lines.len();
    let placement = alternating_placement(&lines, graph.node_count);
    let mut seq = Sequencer::new(graph, Mapping::from_assignment(placement, graph.node_count)?);
    let mut ops = SycUnits { mode, first, lines };
    run_unit_network(&mut seq, &mut ops, slots);
    Ok(seq.finish(arch, mode))
}
