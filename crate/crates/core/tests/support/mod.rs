//! Test-only oracles that share no code with the verifier.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use qftatlas::circuit::{Layer, PlacedOp};
use qftatlas::{CouplingGraph, ScheduledCircuit};
use rand::Rng;

/// Runs the physical circuit on the basis state where logical qubit `j`
/// holds bit `j` of `input` (qubit 0 most significant), empty qubits at 0.
pub fn simulate(c: &ScheduledCircuit, physical: usize, input: u64) -> Vec<Complex64> {
    let n = c.logical_count();
    let mut start = 0usize;
    for (l, &p) in c.initial_mapping.log_to_phys().iter().enumerate() {
        if (input >> (n - 1 - l)) & 1 == 1 {
            start |= 1 << p;
        }
    }
    let mut state = vec![Complex64::new(0.0, 0.0); 1 << physical];
    state[start] = Complex64::new(1.0, 0.0);
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for layer in &c.layers {
        for op in &layer.ops {
            match *op {
                PlacedOp::H { physical: p, .. } => {
                    let bit = 1usize << p;
                    for i in 0..state.len() {
                        if i & bit == 0 {
                            let (a, b) = (state[i], state[i | bit]);
                            state[i] = (a + b) * h;
                            state[i | bit] = (a - b) * h;
                        }
                    }
                }
                PlacedOp::Cphase { .. } => {
                    let (a, b) = op.physical_args();
                    let mask = (1usize << a) | (1usize << b.unwrap());
                    let phase = Complex64::from_polar(1.0, PI / f64::from(1u32 << op.angle_exponent().unwrap()));
                    for (i, amp) in state.iter_mut().enumerate() {
                        if i & mask == mask {
                            *amp *= phase;
                        }
                    }
                }
                PlacedOp::Swap { physical: (a, b) } => {
                    let (ba, bb) = (1usize << a, 1usize << b);
                    for i in 0..state.len() {
                        if i & ba != 0 && i & bb == 0 {
                            state.swap(i, (i & !ba) | bb);
                        }
                    }
                }
            }
        }
    }
    state
}

/// Largest amplitude error against the closed-form transform of `input`,
/// reading logical qubit `j` at its final position. The transform leaves
/// its output bit-reversed, as the gate list carries no reversal swaps.
pub fn qft_error(c: &ScheduledCircuit, physical: usize, input: u64) -> f64 {
    let n = c.logical_count();
    let state = simulate(c, physical, input);
    let finals = c.metrics().final_mapping;
    let dim = 1u64 << n;
    let norm = 1.0 / (dim as f64).sqrt();
    let mut worst: f64 = 0.0;
    for z in 0..dim {
        let mut index = 0usize;
        let mut y = 0u64;
        for j in 0..n {
            let bit = (z >> (n - 1 - j)) & 1;
            if bit == 1 {
                index |= 1 << finals.phys(j);
                y |= 1 << j;
            }
        }
        let angle = 2.0 * PI * ((input * y) % dim) as f64 / dim as f64;
        let want = Complex64::from_polar(norm, angle);
        worst = worst.max((state[index] - want).norm());
    }
    worst
}

/// Physical action of a circuit up to commutation of diagonal gates: each
/// cphase keyed by the wires it touches and how many Hadamards each wire
/// has seen, plus Hadamard counts and the final wire placement. `None` when
/// a layer reuses a qubit or a two-qubit gate is off the graph.
///
/// Circuit files carry no final mapping; readers take it from swap replay.
/// Two actions differing only in placement therefore compute the same
/// transform with a different, correctly reported output layout.
#[derive(Debug, PartialEq, Eq)]
pub struct Action {
    cphases: Vec<(usize, u32, usize, u32, u32)>,
    hadamards: Vec<u32>,
    placement: Vec<Option<usize>>,
}

impl Action {
    pub fn same_gates(&self, other: &Action) -> bool {
        self.cphases == other.cphases && self.hadamards == other.hadamards
    }
}

pub fn action(c: &ScheduledCircuit, g: &CouplingGraph) -> Option<Action> {
    let nodes = g.node_count;
    // wires beyond the logical count stand for empty qubits
    let mut wire: Vec<Option<usize>> = vec![None; nodes];
    for (l, &p) in c.initial_mapping.log_to_phys().iter().enumerate() {
        wire[p] = Some(l);
    }
    for (p, w) in wire.iter_mut().enumerate() {
        if w.is_none() {
            *w = Some(c.logical_count() + p);
        }
    }
    let total = c.logical_count() + nodes;
    let mut seg = vec![0u32; total];
    let mut cphases = Vec::new();
    for layer in &c.layers {
        let mut used = vec![false; nodes];
        for op in &layer.ops {
            let (a, b) = op.physical_args();
            for q in std::iter::once(a).chain(b) {
                if q >= nodes || std::mem::replace(&mut used[q], true) {
                    return None;
                }
            }
            if let Some(b) = b {
                if !g.has_edge(a, b) {
                    return None;
                }
            }
            match *op {
                PlacedOp::H { .. } => seg[wire[a].unwrap()] += 1,
                PlacedOp::Cphase { .. } => {
                    let (x, y) = (wire[a].unwrap(), wire[b.unwrap()].unwrap());
                    let (x, y) = (x.min(y), x.max(y));
                    cphases.push((x, seg[x], y, seg[y], op.angle_exponent().unwrap()));
                }
                PlacedOp::Swap { .. } => wire.swap(a, b.unwrap()),
            }
        }
    }
    cphases.sort_unstable();
    Some(Action { cphases, hadamards: seg, placement: wire })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    EndpointFlip,
    LayerDeletion,
    LayerTransposition,
}

pub const MUTATIONS: [Mutation; 3] = [Mutation::EndpointFlip, Mutation::LayerDeletion, Mutation::LayerTransposition];

/// One random mutation of `kind`, built without any validation.
pub fn mutate(c: &ScheduledCircuit, g: &CouplingGraph, kind: Mutation, rng: &mut impl Rng) -> ScheduledCircuit {
    let mut layers: Vec<Layer> = c.layers.clone();
    match kind {
        Mutation::EndpointFlip => {
            let sites: Vec<(usize, usize)> = layers
                .iter()
                .enumerate()
                .flat_map(|(li, l)| l.ops.iter().enumerate().filter(|(_, op)| op.physical_args().1.is_some()).map(move |(oi, _)| (li, oi)))
                .collect();
            let (li, oi) = sites[rng.gen_range(0..sites.len())];
            let op = layers[li].ops[oi];
            let (a, b) = op.physical_args();
            let b = b.unwrap();
            let (keep, moved) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
            let neighbors: Vec<usize> = g.neighbors(keep).iter().copied().filter(|&q| q != moved).collect();
            let fresh = if !neighbors.is_empty() && rng.gen_bool(0.5) {
                neighbors[rng.gen_range(0..neighbors.len())]
            } else {
                loop {
                    let q = rng.gen_range(0..g.node_count);
                    if q != keep && q != moved {
                        break q;
                    }
                }
            };
            let (na, nb) = if keep == a { (a, fresh) } else { (fresh, b) };
            layers[li].ops[oi] = match op {
                PlacedOp::Cphase { logical, .. } => PlacedOp::Cphase { logical, physical: (na as u32, nb as u32) },
                _ => PlacedOp::swap(na, nb),
            };
        }
        Mutation::LayerDeletion => {
            layers.remove(rng.gen_range(0..layers.len()));
        }
        Mutation::LayerTransposition => {
            let i = rng.gen_range(0..layers.len() - 1);
            layers.swap(i, i + 1);
        }
    }
    ScheduledCircuit::from_parts(c.arch.clone(), c.mode, c.initial_mapping.clone(), layers)
}

#[derive(Debug, Default)]
pub struct MutationTally {
    pub total: usize,
    pub changed: usize,
    pub caught: usize,
    /// Mutants whose only effect is a different final layout.
    pub layout_only: usize,
}

impl MutationTally {
    pub fn complete(&self) -> bool {
        self.caught == self.changed
    }
}

/// `count` mutations of `golden`; a mutation counts as semantic when its
/// gates act differently or it stops being executable.
pub fn mutation_run(golden: &ScheduledCircuit, g: &CouplingGraph, count: usize, rng: &mut impl Rng) -> MutationTally {
    let reference = action(golden, g).expect("golden circuit is executable");
    let mut tally = MutationTally::default();
    for k in 0..count {
        let mutant = mutate(golden, g, MUTATIONS[k % MUTATIONS.len()], rng);
        tally.total += 1;
        let act = action(&mutant, g);
        if act.as_ref().is_some_and(|a| a.same_gates(&reference) && a != &reference) {
            tally.layout_only += 1;
        }
        if !act.is_some_and(|a| a.same_gates(&reference)) {
            tally.changed += 1;
            if !qftatlas::verify::verify(&mutant, g, golden.mode, None).ok {
                tally.caught += 1;
            }
        }
    }
    tally
}
