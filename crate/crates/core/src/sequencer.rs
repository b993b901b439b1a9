//! Sequential op emission with as-soon-as-possible layer assignment.
//!
//! Schedulers emit gates one at a time on physical qubits. Each gate lands in
//! the earliest layer after every earlier gate touching the same physical
//! qubits, so per-qubit order (and with it every logical dependency and the
//! mapping replay) is exactly the emission order.

use crate::circuit::{Layer, Mapping, Mode, PlacedOp, ScheduledCircuit};
use crate::topology::{ArchDescriptor, CouplingGraph};

pub struct Sequencer<'g> {
    graph: &'g CouplingGraph,
    initial: Mapping,
    map: Mapping,
    busy: Vec<u32>,
    ops: Vec<(u32, PlacedOp)>,
    met: Vec<u64>,
    h_done: Vec<bool>,
    cp_count: Vec<u32>,
    queued: Vec<bool>,
    depth: u32,
}

/// Which cphases a [`Sequencer::settle`] pass may emit on its own.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Readiness {
    /// Any pair that has not met yet. Hadamards are left alone.
    Forced,
    /// Gate order of the given mode; Hadamards fire once a qubit has met all lower partners.
    Ordered(Mode),
}

impl<'g> Sequencer<'g> {
    pub fn new(graph: &'g CouplingGraph, initial: Mapping) -> Self {
        let n = initial.logical_count();
        Sequencer {
            graph,
            map: initial.clone(),
            initial,
            busy: vec![0; graph.node_count],
            ops: Vec::new(),
            met: vec![0; (n * n).div_ceil(64)],
            h_done: vec![false; n],
            cp_count: vec![0; n],
            queued: Vec::new(),
            depth: 0,
        }
    }

    pub fn graph(&self) -> &'g CouplingGraph {
        self.graph
    }

    pub fn mapping(&self) -> &Mapping {
        &self.map
    }

    pub fn logical_at(&self, p: usize) -> Option<usize> {
        self.map.logical(p)
    }

    pub fn depth(&self) -> usize {
        self.depth as usize
    }

    pub fn op_count(&self) -> usize {
        self.ops.len()
    }

    /// Earliest layer at which `p` is free.
    pub fn ready_at(&self, p: usize) -> usize {
        self.busy[p] as usize
    }

    fn pair_bit(&self, a: usize, b: usize) -> usize {
        let (lo, hi) = (a.min(b), a.max(b));
        lo * self.h_done.len() + hi
    }

    pub fn has_met(&self, a: usize, b: usize) -> bool {
        let bit = self.pair_bit(a, b);
        self.met[bit / 64] >> (bit % 64) & 1 == 1
    }

    pub fn h_done(&self, logical: usize) -> bool {
        self.h_done[logical]
    }

    fn place(&mut self, qubits: &[usize], op: PlacedOp) {
        let t = qubits.iter().map(|&q| self.busy[q]).max().unwrap_or(0);
        for &q in qubits {
            self.busy[q] = t + 1;
        }
        self.depth = self.depth.max(t + 1);
        self.ops.push((t, op));
    }

    /// Hadamard on whatever logical qubit sits at `p`.
    pub fn h(&mut self, p: usize) {
        let l = self.map.logical(p).expect("h on an empty physical qubit");
        assert!(!self.h_done[l], "second h on logical {l}");
        self.h_done[l] = true;
        self.place(&[p], PlacedOp::h(l, p));
    }

    /// Hadamard at `p` unless already applied to its occupant.
    pub fn h_once(&mut self, p: usize) -> bool {
        match self.map.logical(p) {
            Some(l) if !self.h_done[l] => {
                self.h(p);
                true
            }
            _ => false,
        }
    }

    pub fn cp(&mut self, p: usize, q: usize) {
        assert!(self.graph.has_edge(p, q), "cphase on non-link ({p},{q})");
        let a = self.map.logical(p).expect("cphase on an empty physical qubit");
        let b = self.map.logical(q).expect("cphase on an empty physical qubit");
        let bit = self.pair_bit(a, b);
        self.met[bit / 64] |= 1 << (bit % 64);
        self.cp_count[a] += 1;
        self.cp_count[b] += 1;
        self.place(&[p, q], PlacedOp::cphase(a, p, b, q));
    }

    /// Gates already applied to `logical`, its Hadamard included.
    fn progress(&self, logical: usize) -> usize {
        self.cp_count[logical] as usize + usize::from(self.h_done[logical])
    }

    fn h_ready(&self, logical: usize) -> bool {
        !self.h_done[logical] && self.cp_count[logical] as usize == logical
    }

    fn cp_ready(&self, a: usize, b: usize, rule: Readiness) -> bool {
        if self.has_met(a, b) {
            return false;
        }
        let (lo, hi) = (a.min(b), a.max(b));
        match rule {
            Readiness::Forced => true,
            Readiness::Ordered(Mode::Relaxed) => self.h_done[lo] && !self.h_done[hi],
            Readiness::Ordered(Mode::Strict) => self.progress(lo) == hi && self.progress(hi) == lo,
        }
    }

    /// Emits every gate that becomes ready around `seeds`, repeating until
    /// nothing changes. Each emitted gate re-seeds the qubits it touched.
    pub fn settle(&mut self, seeds: impl IntoIterator<Item = usize>, rule: Readiness) {
        self.settle_with(seeds, rule, |_, _| true);
    }

    /// [`Sequencer::settle`] restricted to logical pairs accepted by `allow`.
    pub fn settle_with(&mut self, seeds: impl IntoIterator<Item = usize>, rule: Readiness, allow: impl Fn(usize, usize) -> bool) {
        let mut queued = std::mem::take(&mut self.queued);
        queued.resize(self.graph.node_count, false);
        let mut work = std::collections::VecDeque::new();
        for p in seeds {
            if !queued[p] {
                queued[p] = true;
                work.push_back(p);
            }
        }
        while let Some(p) = work.pop_front() {
            queued[p] = false;
            let Some(a) = self.map.logical(p) else { continue };
            let mut fired = Vec::new();
            if matches!(rule, Readiness::Ordered(_)) && self.h_ready(a) {
                self.h(p);
                fired.push(p);
            }
            let graph = self.graph;
            for &q in graph.neighbors(p) {
                let (Some(a), Some(b)) = (self.map.logical(p), self.map.logical(q)) else { continue };
                if allow(a, b) && self.cp_ready(a, b, rule) {
                    self.cp(p, q);
                    fired.extend([p, q]);
                }
            }
            for r in fired {
                if !queued[r] {
                    queued[r] = true;
                    work.push_back(r);
                }
            }
        }
        self.queued = queued;
    }

    /// Cphase on a link unless its occupants already interacted or either is empty.
    pub fn cp_once(&mut self, p: usize, q: usize) -> bool {
        match (self.map.logical(p), self.map.logical(q)) {
            (Some(a), Some(b)) if !self.has_met(a, b) => {
                self.cp(p, q);
                true
            }
            _ => false,
        }
    }

    pub fn swap(&mut self, p: usize, q: usize) {
        assert!(self.graph.has_edge(p, q), "swap on non-link ({p},{q})");
        if self.map.logical(p).is_none() && self.map.logical(q).is_none() {
            return;
        }
        self.map.swap_physical(p, q);
        self.place(&[p, q], PlacedOp::swap(p, q));
    }

    pub fn finish(self, arch: ArchDescriptor, mode: Mode) -> ScheduledCircuit {
        let mut layers = vec![Layer::default(); self.depth as usize];
        for (t, op) in self.ops {
            layers[t as usize].ops.push(op);
        }
        ScheduledCircuit::from_parts(arch, mode, self.initial, layers)
    }
}
