//! QFT on the unrolled heavy-hex line: a path of 4M qubits with one dangler
//! hanging off the last qubit of every group of four.
//!
//! Gates are not placed by the motion routines directly. Every routine only
//! moves qubits; after each move the sequencer settles whatever cphases and
//! Hadamards the dependency rule of the mode allows on the links it touched.

use crate::circuit::{Mapping, Mode, ScheduledCircuit};
use crate::error::{Error, Result};
use crate::lnn::{active_pairs, rounds};
use crate::sequencer::{Readiness, Sequencer};
use crate::topology::{build_architecture, unit_partition, ArchKind, CouplingGraph, UnitKind};

/// Column structure of a heavy-hex line, possibly with missing danglers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HhPlan {
    pub columns: usize,
    /// Columns whose dangler takes part in the computation, ascending.
    pub off_columns: Vec<usize>,
}

impl HhPlan {
    pub fn full(columns: usize) -> Self {
        HhPlan { columns, off_columns: (0..columns).collect() }
    }

    pub fn dangler(&self, col: usize) -> usize {
        4 * self.columns + col
    }

    fn has_dangler(&self, col: usize) -> bool {
        self.off_columns.binary_search(&col).is_ok()
    }

    /// Physical qubits of column `col` in logical order for a straight layout.
    fn straight(&self, col: usize) -> Vec<usize> {
        let mut line: Vec<usize> = (4 * col..4 * col + 4).collect();
        if self.has_dangler(col) {
            line.push(self.dangler(col));
        }
        line
    }

    /// Column `col` with its dangler threaded between the third qubit and the anchor.
    fn threaded(&self, col: usize) -> Vec<usize> {
        let base = 4 * col;
        let mut seg = vec![base, base + 1, base + 2];
        if self.has_dangler(col) {
            seg.push(self.dangler(col));
        }
        seg.push(base + 3);
        seg
    }

    pub fn logical_count(&self) -> usize {
        4 * self.columns + self.off_columns.len()
    }
}

struct Engine<'s, 'g, F> {
    seq: &'s mut Sequencer<'g>,
    rule: Readiness,
    allow: F,
    touched: Vec<usize>,
}

impl<'s, 'g, F: Fn(usize, usize) -> bool> Engine<'s, 'g, F> {
    fn new(seq: &'s mut Sequencer<'g>, rule: Readiness, allow: F) -> Self {
        Engine { seq, rule, allow, touched: Vec::new() }
    }

    fn occ(&self, p: usize) -> usize {
        self.seq.logical_at(p).unwrap_or(usize::MAX)
    }

    fn swap(&mut self, p: usize, q: usize) {
        self.seq.swap(p, q);
        self.touched.extend([p, q]);
    }

    fn flush(&mut self) {
        let seeds = std::mem::take(&mut self.touched);
        self.seq.settle_with(seeds, self.rule, &self.allow);
    }

    fn flush_all(&mut self) {
        self.touched.clear();
        let n = self.seq.graph().node_count;
        self.seq.settle_with(0..n, self.rule, &self.allow);
    }

    /// Exchanges the first `split` qubits of `path` with the rest.
    fn block_pass(&mut self, path: &[usize], split: usize) {
        let mut side: Vec<bool> = (0..path.len()).map(|k| k < split).collect();
        loop {
            let movers: Vec<usize> = (0..path.len() - 1).filter(|&k| side[k] && !side[k + 1]).collect();
            if movers.is_empty() {
                break;
            }
            self.flush();
            for k in movers {
                self.swap(path[k], path[k + 1]);
                side.swap(k, k + 1);
            }
        }
        self.flush();
    }

    /// Triangle network on `line`, oriented so its lowest occupant starts at an end.
    fn triangle(&mut self, line: &[usize]) {
        let mut line = line.to_vec();
        if self.occ(line[0]) > self.occ(line[line.len() - 1]) {
            line.reverse();
        }
        let n = line.len();
        for r in 0..rounds(n) {
            self.flush();
            for i in active_pairs(n, r) {
                self.swap(line[i], line[i + 1]);
            }
        }
        self.flush();
    }

    /// Exchanges the occupants of two neighbours on the threaded line. The one
    /// non-link there, third group qubit to dangler, goes through the anchor.
    fn vswap(&mut self, p: usize, q: usize) {
        if self.seq.graph().has_edge(p, q) {
            self.swap(p, q);
            return;
        }
        let (a, d) = (p.min(q), p.max(q));
        let anchor = a + 1;
        debug_assert!(self.seq.graph().has_edge(anchor, d));
        self.swap(a, anchor);
        self.flush();
        self.swap(anchor, d);
        self.flush();
        self.swap(a, anchor);
    }

    fn virtual_pass(&mut self, line: &[usize], split: usize) {
        let mut side: Vec<bool> = (0..line.len()).map(|k| k < split).collect();
        loop {
            let movers: Vec<usize> = (0..line.len() - 1).filter(|&k| side[k] && !side[k + 1]).collect();
            if movers.is_empty() {
                break;
            }
            self.flush();
            for k in movers {
                self.vswap(line[k], line[k + 1]);
                side.swap(k, k + 1);
            }
        }
        self.flush();
    }

    fn virtual_triangle(&mut self, line: &[usize]) {
        let mut line = line.to_vec();
        if self.occ(line[0]) > self.occ(line[line.len() - 1]) {
            line.reverse();
        }
        let n = line.len();
        for r in 0..rounds(n) {
            self.flush();
            for i in active_pairs(n, r) {
                self.vswap(line[i], line[i + 1]);
            }
        }
        self.flush();
    }

    fn on_swap(&mut self, col: usize) {
        let path: Vec<usize> = (4 * col..4 * col + 8).collect();
        self.block_pass(&path, 4);
    }

    /// Exchanges the dangler contents of columns `a < b`. Both travel along
    /// the path between the anchors in opposite directions, cross once, and
    /// the path occupants end where they started.
    fn off_swap(&mut self, plan: &HhPlan, a: usize, b: usize) {
        let (da, db) = (plan.dangler(a), plan.dangler(b));
        let (first, last) = (4 * a + 3, 4 * b + 3);
        self.flush();
        self.swap(db, last);
        self.swap(da, first);
        let (mut left, mut right) = (first, last);
        // `left` carries the qubit from `da` rightwards, `right` the one from `db` leftwards
        let mut crossed = false;
        while left != last || right != first {
            self.flush();
            if !crossed {
                if left + 1 == right {
                    self.swap(left, right);
                    std::mem::swap(&mut left, &mut right);
                    crossed = true;
                    continue;
                }
                if left + 2 != right {
                    self.swap(left, left + 1);
                    left += 1;
                }
                self.swap(right - 1, right);
                right -= 1;
                continue;
            }
            if right != first {
                self.swap(right - 1, right);
                right -= 1;
            }
            if left != last {
                self.swap(left, left + 1);
                left += 1;
            }
        }
        self.flush();
        self.swap(first, da);
        self.swap(last, db);
        self.flush();
    }
}

fn check_plan(graph: &CouplingGraph) -> Result<HhPlan> {
    if graph.kind != ArchKind::HeavyHex {
        return Err(Error::Schema("heavy-hex routine on a different architecture".into()));
    }
    Ok(HhPlan::full(graph.size_param / 5))
}

fn on_column(graph: &CouplingGraph, unit: usize) -> Result<usize> {
    let part = unit_partition(graph);
    match part.unit(unit)?.kind {
        UnitKind::OnPath => Ok(unit / 2),
        _ => Err(Error::UnknownUnit(unit)),
    }
}

fn off_column(graph: &CouplingGraph, unit: usize) -> Result<usize> {
    let part = unit_partition(graph);
    match part.unit(unit)?.kind {
        UnitKind::OffPath => Ok(unit / 2),
        _ => Err(Error::UnknownUnit(unit)),
    }
}

/// Exchanges two consecutive on-path units by block passing on their
/// 8-qubit segment. Every crossing pair interacts, and so does every passing
/// qubit with the dangler it brushes against.
pub fn hh_on_path_unit_swap(seq: &mut Sequencer<'_>, u: usize, v: usize) -> Result<()> {
    let graph = seq.graph();
    let plan = check_plan(graph)?;
    let (cu, cv) = (on_column(graph, u)?, on_column(graph, v)?);
    if cu.abs_diff(cv) != 1 {
        return Err(Error::UnitsNotAdjacent(u, v));
    }
    let col = cu.min(cv);
    let holders = |nodes: &[usize]| -> Vec<usize> { nodes.iter().filter_map(|&p| seq.logical_at(p)).collect() };
    let left = holders(&(4 * col..4 * col + 4).collect::<Vec<_>>());
    let right = holders(&(4 * col + 4..4 * col + 8).collect::<Vec<_>>());
    let off = holders(&[plan.dangler(col), plan.dangler(col + 1)]);
    let allow = |a: usize, b: usize| {
        let cross = |x: usize, y: usize| left.contains(&x) && (right.contains(&y) || off.contains(&y));
        cross(a, b) || cross(b, a)
    };
    let mut eng = Engine::new(seq, Readiness::Forced, allow);
    eng.on_swap(col);
    Ok(())
}

/// Exchanges the danglers of adjacent columns through the on-path unit
/// between their anchors. The lower column's dangler interacts with every
/// qubit of that unit on the way.
pub fn hh_off_path_unit_swap(seq: &mut Sequencer<'_>, a: usize, b: usize, via: usize) -> Result<()> {
    let graph = seq.graph();
    let plan = check_plan(graph)?;
    let (ca, cb) = (off_column(graph, a)?, off_column(graph, b)?);
    if ca.abs_diff(cb) != 1 {
        return Err(Error::UnitsNotAdjacent(a, b));
    }
    let (lo, hi) = (ca.min(cb), ca.max(cb));
    if on_column(graph, via)? != hi {
        return Err(Error::ViaNotBetween(via));
    }
    let traveller = seq.logical_at(plan.dangler(lo));
    let partners: Vec<usize> = (4 * hi..4 * hi + 4).filter_map(|p| seq.logical_at(p)).collect();
    let allow = |x: usize, y: usize| {
        (Some(x) == traveller && partners.contains(&y)) || (Some(y) == traveller && partners.contains(&x))
    };
    let mut eng = Engine::new(seq, Readiness::Forced, allow);
    eng.off_swap(&plan, lo, hi);
    Ok(())
}

fn threaded_line(plan: &HhPlan) -> Vec<usize> {
    (0..plan.columns).flat_map(|col| plan.threaded(col)).collect()
}

/// Logical placement for the given plan. Logicals are numbered column by
/// column, on-path qubits first. `descending` puts each column's lowest
/// logical at its anchor.
fn placement(plan: &HhPlan, descending: bool) -> Vec<usize> {
    let mut out = Vec::with_capacity(plan.logical_count());
    for col in 0..plan.columns {
        for j in 0..4 {
            out.push(if descending { 4 * col + 3 - j } else { 4 * col + j });
        }
        if plan.has_dangler(col) {
            out.push(plan.dangler(col));
        }
    }
    out
}

/// Two-row unit network: on-path units form the top row and run the line
/// network by block passing; dangler units form the bottom row and follow the
/// same rounds with off-path swaps. Column 0 runs the intra-unit network
/// whenever a fresh unit arrives there.
fn ladder<F: Fn(usize, usize) -> bool>(eng: &mut Engine<'_, '_, F>, plan: &HhPlan) {
    let m = plan.columns;
    let off = &plan.off_columns;
    let ia_needed = |eng: &Engine<'_, '_, F>, col: usize| (4 * col..4 * col + 4).any(|p| !eng.seq.h_done(eng.occ(p)));
    let ia = |eng: &mut Engine<'_, '_, F>, col: usize| {
        let line: Vec<usize> = (4 * col..4 * col + 4).rev().collect();
        eng.triangle(&line);
    };
    let total = rounds(m);
    for t in 0..=total {
        if ia_needed(eng, 0) {
            ia(eng, 0);
        }
        eng.flush();
        if t < total {
            for i in active_pairs(m, t) {
                eng.on_swap(i);
            }
            for i in active_pairs(off.len(), t) {
                eng.off_swap(plan, off[i], off[i + 1]);
            }
        }
        eng.flush();
    }
    for col in 0..m {
        if ia_needed(eng, col) {
            ia(eng, col);
        }
    }
    eng.flush();
}

/// Column network: each column with its dangler is one 5-qubit unit, and the
/// columns run the line network among themselves. Two columns interact by
/// block passing along a virtual line that threads the left dangler between
/// its anchor's neighbours.
fn columns<F: Fn(usize, usize) -> bool>(eng: &mut Engine<'_, '_, F>, plan: &HhPlan) {
    let m = plan.columns;
    let total = rounds(m);
    let needs_ia = |eng: &Engine<'_, '_, F>, col: usize| plan.straight(col).iter().any(|&p| !eng.seq.h_done(eng.occ(p)));
    let do_ia = |eng: &mut Engine<'_, '_, F>, col: usize| {
        let line = plan.straight(col);
        let v: Vec<usize> = line.iter().map(|&p| eng.occ(p)).collect();
        let sorted = v.windows(2).all(|w| w[0] < w[1]) || v.windows(2).all(|w| w[0] > w[1]);
        if !sorted && plan.has_dangler(col) {
            eng.swap(4 * col + 3, plan.dangler(col));
        }
        eng.triangle(&line);
    };
    for t in 0..total {
        if needs_ia(eng, 0) {
            do_ia(eng, 0);
        }
        for i in active_pairs(m, t) {
            column_prep(eng, plan, i, true);
            column_prep(eng, plan, i + 1, false);
            column_ie(eng, plan, i);
        }
    }
    for col in 0..m.min(2) {
        if needs_ia(eng, col) {
            do_ia(eng, col);
        }
    }
    eng.flush();
}

/// Orders a column's anchor and dangler for its side of the virtual line.
fn column_prep<F: Fn(usize, usize) -> bool>(eng: &mut Engine<'_, '_, F>, plan: &HhPlan, col: usize, left: bool) {
    if !plan.has_dangler(col) {
        return;
    }
    let (d, anchor, base) = (plan.dangler(col), 4 * col + 3, 4 * col);
    let o = |p: usize| eng.occ(p);
    let fine = if left {
        o(anchor) < o(d) && o(d) < o(base + 2)
    } else {
        o(anchor) < o(d) && o(base) < o(base + 1)
    };
    if !fine {
        eng.swap(anchor, d);
    }
}

fn column_ie<F: Fn(usize, usize) -> bool>(eng: &mut Engine<'_, '_, F>, plan: &HhPlan, col: usize) {
    let mut virt = plan.threaded(col);
    let split = virt.len();
    virt.extend(plan.straight(col + 1));
    eng.virtual_pass(&virt, split);
}

/// Line network over all columns threaded into one virtual line, where the
/// dangler sits between the third qubit of its group and the anchor. Units
/// are the columns' segments of that line; they keep their sizes while their
/// positions shift, so columns without a dangler need no special casing.
fn threaded<F: Fn(usize, usize) -> bool>(eng: &mut Engine<'_, '_, F>, plan: &HhPlan) {
    let vline = threaded_line(plan);
    let mut sizes: Vec<usize> = (0..plan.columns).map(|col| plan.threaded(col).len()).collect();
    let start = |sizes: &[usize], slot: usize| sizes[..slot].iter().sum::<usize>();
    let needs_ia = |eng: &Engine<'_, '_, F>, seg: &[usize]| seg.iter().any(|&p| !eng.seq.h_done(eng.occ(p)));
    let slots = plan.columns;
    for t in 0..rounds(slots) {
        if needs_ia(eng, &vline[..sizes[0]]) {
            eng.virtual_triangle(&vline[..sizes[0]]);
        }
        for i in active_pairs(slots, t) {
            let s = start(&sizes, i);
            eng.virtual_pass(&vline[s..s + sizes[i] + sizes[i + 1]], sizes[i]);
            sizes.swap(i, i + 1);
        }
    }
    for slot in 0..slots.min(2) {
        let s = start(&sizes, slot);
        if needs_ia(eng, &vline[s..s + sizes[slot]]) {
            eng.virtual_triangle(&vline[s..s + sizes[slot]]);
        }
    }
    eng.flush();
}

/// Full QFT on `graph` restricted to `plan`. Faulty danglers are simply
/// absent from the plan and never touched.
/// Motion pattern of a heavy-hex schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HhScheme {
    /// On-path and dangler units as a two-row unit grid. Relaxed order only.
    Ladder,
    /// Each column with its dangler as one unit. Needs every dangler present.
    Columns,
    /// Columns threaded into one virtual line. Works with any dangler subset.
    Threaded,
}

/// Default scheme per mode: the ladder for relaxed order, columns for strict.
pub(crate) fn hh_schedule(graph: &CouplingGraph, plan: &HhPlan, mode: Mode) -> Result<ScheduledCircuit> {
    let scheme = match mode {
        Mode::Relaxed => HhScheme::Ladder,
        Mode::Strict => HhScheme::Columns,
    };
    hh_schedule_with(graph, plan, mode, scheme)
}

/// Rejects scheme and plan combinations that cannot complete.
pub fn hh_schedule_with(graph: &CouplingGraph, plan: &HhPlan, mode: Mode, scheme: HhScheme) -> Result<ScheduledCircuit> {
    if scheme == HhScheme::Columns && plan.off_columns.len() != plan.columns {
        return Err(Error::Schema("column scheme needs every dangler".into()));
    }
    if scheme == HhScheme::Ladder && (mode == Mode::Strict || plan.off_columns.len() != plan.columns) {
        return Err(Error::Schema("ladder scheme needs relaxed order and every dangler".into()));
    }
    let place = match scheme {
        HhScheme::Ladder => placement(plan, true),
        HhScheme::Columns => placement(plan, false),
        HhScheme::Threaded => threaded_line(plan),
    };
    let mapping = Mapping::from_assignment(place, graph.node_count)?;
    let mut seq = Sequencer::new(graph, mapping);
    {
        let mut eng = Engine::new(&mut seq, Readiness::Ordered(mode), |_, _| true);
        eng.flush_all();
        match scheme {
            HhScheme::Ladder => ladder(&mut eng, plan),
            HhScheme::Columns => columns(&mut eng, plan),
            HhScheme::Threaded => threaded(&mut eng, plan),
        }
    }
    Ok(seq.finish(graph.descriptor(), mode))
}

pub fn hh_qft(n: usize, mode: Mode) -> Result<ScheduledCircuit> {
    if n < 10 {
        return Err(Error::SizeTooSmall { kind: "heavyhex", size: n, min: 10 });
    }
    let graph = build_architecture(ArchKind::HeavyHex, n)?;
    hh_schedule(&graph, &HhPlan::full(n / 5), mode)
}
