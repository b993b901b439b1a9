//! Logical QFT gates and their strict / relaxed dependency orders.

use crate::circuit::Mode;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LogicalGate {
    H(usize),
    /// Lower index first.
    Cphase(usize, usize),
}

/// Reference gate order: H(i) then every G(i, j) for j > i.
pub fn logical_gates(n: usize) -> Result<Vec<LogicalGate>> {
    if n == 0 {
        return Err(Error::EmptyRegister);
    }
    let mut out = Vec::with_capacity(n + n * (n - 1) / 2);
    for i in 0..n {
        out.push(LogicalGate::H(i));
        out.extend((i + 1..n).map(|j| LogicalGate::Cphase(i, j)));
    }
    Ok(out)
}

/// Generator pairs (a before b) whose transitive closure is the full order.
/// Generated lazily: strict mode at 1600 qubits has several million pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DependencyOrder {
    pub mode: Mode,
    pub n: usize,
}

pub fn dependency_generators(n: usize, mode: Mode) -> DependencyOrder {
    DependencyOrder { mode, n }
}

impl DependencyOrder {
    pub fn generators(&self) -> impl Iterator<Item = (LogicalGate, LogicalGate)> + '_ {
        use LogicalGate::{Cphase as G, H};
        let n = self.n;
        let strict = self.mode == Mode::Strict;
        let pairs = move || (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)));
        let h_edges = pairs().flat_map(|(i, j)| [(H(i), G(i, j)), (G(i, j), H(j))]);
        let same_control = pairs().filter(move |&(_, j)| strict && j + 1 < n).map(|(i, j)| (G(i, j), G(i, j + 1)));
        let same_target = pairs().filter(move |&(i, j)| strict && i + 1 < j).map(|(i, j)| (G(i, j), G(i + 1, j)));
        let seeds = (1..n).filter(move |&j| strict && j + 1 < n).map(|j| (G(j - 1, j), G(j, j + 1)));
        h_edges.chain(same_control).chain(same_target).chain(seeds)
    }

    pub fn to_vec(&self) -> Vec<(LogicalGate, LogicalGate)> {
        self.generators().collect()
    }
}

/// Layer index of every logical gate in a schedule.
#[derive(Debug, Clone)]
pub struct GateLayers {
    n: usize,
    h: Vec<u32>,
    cp: Vec<u32>,
}

const UNSET: u32 = u32::MAX;

impl GateLayers {
    pub fn new(n: usize) -> Self {
        GateLayers { n, h: vec![UNSET; n], cp: vec![UNSET; n * n] }
    }

    pub fn set(&mut self, gate: LogicalGate, layer: usize) {
        match gate {
            LogicalGate::H(i) => self.h[i] = layer as u32,
            LogicalGate::Cphase(i, j) => self.cp[i.min(j) * self.n + i.max(j)] = layer as u32,
        }
    }

    pub fn get(&self, gate: LogicalGate) -> Option<usize> {
        let v = match gate {
            LogicalGate::H(i) => self.h[i],
            LogicalGate::Cphase(i, j) => self.cp[i.min(j) * self.n + i.max(j)],
        };
        (v != UNSET).then_some(v as usize)
    }

    /// Builds the table from a gate sequence, one gate per layer.
    pub fn sequential(gates: &[LogicalGate]) -> Self {
        let n = gates
            .iter()
            .map(|g| match *g {
                LogicalGate::H(i) => i + 1,
                LogicalGate::Cphase(i, j) => i.max(j) + 1,
            })
            .max()
            .unwrap_or(0);
        let mut t = GateLayers::new(n);
        for (k, &g) in gates.iter().enumerate() {
            t.set(g, k);
        }
        t
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrderCheck {
    pub violations: Vec<(LogicalGate, LogicalGate)>,
    pub violation_total: usize,
    pub missing: Vec<LogicalGate>,
}

impl OrderCheck {
    pub fn is_clean(&self) -> bool {
        self.violation_total == 0 && self.missing.is_empty()
    }
}

/// Every generator (a, b) with layer(a) >= layer(b). Gates absent from the
/// table are reported as missing instead.
pub fn check_order(order: &DependencyOrder, layers: &GateLayers) -> OrderCheck {
    check_order_capped(order, layers, usize::MAX)
}

pub fn check_order_capped(order: &DependencyOrder, layers: &GateLayers, cap: usize) -> OrderCheck {
    let mut out = OrderCheck::default();
    if let Ok(gates) = logical_gates(order.n) {
        out.missing = gates.into_iter().filter(|&g| layers.get(g).is_none()).collect();
    }
    for (a, b) in order.generators() {
        if let (Some(la), Some(lb)) = (layers.get(a), layers.get(b)) {
            if la >= lb {
                out.violation_total += 1;
                if out.violations.len() < cap {
                    out.violations.push((a, b));
                }
            }
        }
    }
    out
}
