//! Enumerative sketch solver.
//!
//! A sketch is a loop whose bounds and swap offsets contain integer holes.
//! The solver walks every hole assignment in lexicographic order, simulates
//! the loop on the two unit lines of a [`SynthSpec`], and keeps assignments
//! that cover every required pair without breaking links, layer
//! disjointness, duplicate policy or gate order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::Mode;
use crate::error::{Error, Result};
use crate::topology::{build_architecture, sycamore_line, ArchKind};

pub const DEFAULT_CAP: u128 = 100_000_000;
pub const COEFFICIENT_RANGE: (i64, i64) = (-3, 3);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Lnn,
    GridIeStrict,
    GridIeRelaxed,
    SycIeStrict,
    SycIeRelaxed,
}

impl Shape {
    pub const ALL: [Shape; 5] = [Shape::Lnn, Shape::GridIeStrict, Shape::GridIeRelaxed, Shape::SycIeStrict, Shape::SycIeRelaxed];

    pub fn name(self) -> &'static str {
        match self {
            Shape::Lnn => "lnn",
            Shape::GridIeStrict => "grid-ie-strict",
            Shape::GridIeRelaxed => "grid-ie-relaxed",
            Shape::SycIeStrict => "syc-ie-strict",
            Shape::SycIeRelaxed => "syc-ie-relaxed",
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Shape {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Shape::ALL.into_iter().find(|sh| sh.name() == s).ok_or_else(|| Error::UnknownShape(s.to_string()))
    }
}

/// A coefficient inside an affine term: a hole or a fixed integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coef {
    Hole(usize),
    Fixed(i64),
}

impl Coef {
    fn get(self, holes: &[i64]) -> i64 {
        match self {
            Coef::Hole(h) => holes[h],
            Coef::Fixed(v) => v,
        }
    }
}

/// `i * i_coef + L * l_coef + constant`, where `i` is the loop variable and
/// `L` the unit line length.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Affine {
    pub i: Coef,
    pub l: Coef,
    pub c: Coef,
}

impl Affine {
    pub fn fixed(i: i64, l: i64, c: i64) -> Self {
        Affine { i: Coef::Fixed(i), l: Coef::Fixed(l), c: Coef::Fixed(c) }
    }

    fn eval(&self, holes: &[i64], i: i64, l: i64) -> i64 {
        self.i.get(holes) * i + self.l.get(holes) * l + self.c.get(holes)
    }

    fn holes(&self) -> impl Iterator<Item = usize> + '_ {
        [self.i, self.l, self.c].into_iter().filter_map(|c| match c {
            Coef::Hole(h) => Some(h),
            Coef::Fixed(_) => None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Expr {
    Affine(Affine),
    Mod2(Affine),
    Min(Affine, Affine),
}

impl Expr {
    pub fn eval(&self, holes: &[i64], i: i64, l: i64) -> i64 {
        match self {
            Expr::Affine(a) => a.eval(holes, i, l),
            Expr::Mod2(a) => a.eval(holes, i, l).rem_euclid(2),
            Expr::Min(a, b) => a.eval(holes, i, l).min(b.eval(holes, i, l)),
        }
    }

    fn holes(&self) -> Vec<usize> {
        match self {
            Expr::Affine(a) | Expr::Mod2(a) => a.holes().collect(),
            Expr::Min(a, b) => a.holes().chain(b.holes()).collect(),
        }
    }

    fn without_mod(self) -> Expr {
        match self {
            Expr::Mod2(a) => Expr::Affine(a),
            other => other,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Line {
    Top,
    Bottom,
}

/// One layer per statement per iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Statement {
    /// Cphases on links `k` with `lo <= k < hi`, stepping by `step`.
    Cphase { lo: Expr, hi: Expr, step: usize },
    /// Swaps `(k, k+1)` on `line` for `beg <= k < end`, stepping by two.
    Swap { line: Line, beg: Expr, end: Expr },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoleDecl {
    pub name: String,
    pub lo: i64,
    pub hi: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SketchTemplate {
    pub shape: String,
    /// Iteration count, evaluated at `i = 0`.
    pub count: Expr,
    pub body: Vec<Statement>,
    pub holes: Vec<HoleDecl>,
}

impl SketchTemplate {
    pub fn new(shape: impl Into<String>, count: Expr, body: Vec<Statement>, holes: Vec<HoleDecl>) -> Result<Self> {
        let sketch = SketchTemplate { shape: shape.into(), count, body, holes };
        let mut used = vec![false; sketch.holes.len()];
        for e in sketch.exprs() {
            for h in e.holes() {
                *used.get_mut(h).ok_or_else(|| Error::Schema(format!("hole index {h} is not declared")))? = true;
            }
        }
        if let Some(h) = used.iter().position(|u| !u) {
            return Err(Error::Schema(format!("hole '{}' appears in no expression", sketch.holes[h].name)));
        }
        if let Some(h) = sketch.holes.iter().find(|h| h.lo > h.hi) {
            return Err(Error::Schema(format!("hole '{}' has an empty domain", h.name)));
        }
        Ok(sketch)
    }

    fn exprs(&self) -> Vec<Expr> {
        let mut out = vec![self.count];
        for s in &self.body {
            match *s {
                Statement::Cphase { lo, hi, .. } => out.extend([lo, hi]),
                Statement::Swap { beg, end, .. } => out.extend([beg, end]),
            }
        }
        out
    }

    /// The same sketch over the grammar without the mod-2 form.
    pub fn without_mod(&self) -> SketchTemplate {
        let body = self
            .body
            .iter()
            .map(|s| match *s {
                Statement::Cphase { lo, hi, step } => Statement::Cphase { lo: lo.without_mod(), hi: hi.without_mod(), step },
                Statement::Swap { line, beg, end } => Statement::Swap { line, beg: beg.without_mod(), end: end.without_mod() },
            })
            .collect();
        SketchTemplate { shape: self.shape.clone(), count: self.count.without_mod(), body, holes: self.holes.clone() }
    }

    pub fn search_space(&self) -> u128 {
        self.holes.iter().map(|h| (h.hi - h.lo + 1) as u128).product()
    }

    fn decode(&self, mut index: u128) -> Vec<i64> {
        let mut values = vec![0; self.holes.len()];
        for (k, h) in self.holes.iter().enumerate().rev() {
            let width = (h.hi - h.lo + 1) as u128;
            values[k] = h.lo + (index % width) as i64;
            index /= width;
        }
        values
    }
}

/// Where a fragment is checked: one or two unit lines and the links between
/// them. Logical qubits number the top line first, then the bottom line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthSpec {
    pub size: usize,
    pub top_len: usize,
    pub bottom_len: usize,
    /// Links as (line, position) pairs, in the order cphase ranges index them.
    pub links: Vec<((Line, usize), (Line, usize))>,
    /// Logical pairs that must interact, each as (low, high).
    pub required: Vec<(usize, usize)>,
    pub mode: Mode,
    pub allow_duplicates: bool,
}

impl SynthSpec {
    /// Spec of `shape` at `size`: the line length for LNN, the grid side
    /// otherwise. Sycamore specs leave out same-position pairs.
    pub fn for_shape(shape: Shape, size: usize) -> Result<SynthSpec> {
        match shape {
            Shape::Lnn => {
                if size < 2 {
                    return Err(Error::SizeTooSmall { kind: "lnn", size, min: 2 });
                }
                let links = (0..size - 1).map(|k| ((Line::Top, k), (Line::Top, k + 1))).collect();
                let required = (0..size).flat_map(|a| (a + 1..size).map(move |b| (a, b))).collect();
                Ok(SynthSpec { size, top_len: size, bottom_len: 0, links, required, mode: Mode::Strict, allow_duplicates: false })
            }
            Shape::GridIeStrict | Shape::GridIeRelaxed => {
                let g = build_architecture(ArchKind::Grid, size)?;
                let top: Vec<usize> = (0..size).collect();
                let bottom: Vec<usize> = (size..2 * size).collect();
                let mode = if shape == Shape::GridIeStrict { Mode::Strict } else { Mode::Relaxed };
                Ok(two_line_spec(size, &g, &top, &bottom, mode, false))
            }
            Shape::SycIeStrict | Shape::SycIeRelaxed => {
                let g = build_architecture(ArchKind::Sycamore, size)?;
                if size < 4 {
                    return Err(Error::SizeTooSmall { kind: "sycamore", size, min: 4 });
                }
                let (top, bottom) = (sycamore_line(size, 0), sycamore_line(size, 1));
                let mode = if shape == Shape::SycIeStrict { Mode::Strict } else { Mode::Relaxed };
                Ok(two_line_spec(size, &g, &top, &bottom, mode, true))
            }
        }
    }

    fn line_len(&self, line: Line) -> usize {
        match line {
            Line::Top => self.top_len,
            Line::Bottom => self.bottom_len,
        }
    }
}

fn two_line_spec(
    size: usize,
    g: &crate::topology::CouplingGraph,
    top: &[usize],
    bottom: &[usize],
    mode: Mode,
    exclude_same_position: bool,
) -> SynthSpec {
    let mut links = Vec::new();
    for (p, &a) in top.iter().enumerate() {
        for (q, &b) in bottom.iter().enumerate() {
            if g.has_edge(a, b) {
                links.push(((Line::Top, p), (Line::Bottom, q)));
            }
        }
    }
    let n = top.len();
    let required = (0..n)
        .flat_map(|p| (0..bottom.len()).map(move |q| (p, q)))
        .filter(|&(p, q)| !(exclude_same_position && p == q))
        .map(|(p, q)| (p, n + q))
        .collect();
    SynthSpec { size, top_len: n, bottom_len: bottom.len(), links, required, mode, allow_duplicates: true }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Failure {
    /// A gate on a position that does not exist.
    OffLine { position: i64 },
    /// Two gates in one layer share a qubit.
    Overlap { qubit: usize },
    Duplicate { pair: (usize, usize) },
    /// A qubit met a partner below one it already met.
    Order { qubit: usize, partner: usize, after: usize },
    Uncovered { pair: (usize, usize) },
    /// The size itself has no spec.
    InvalidSize { message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub layer: usize,
    #[serde(flatten)]
    pub failure: Failure,
}

/// Simulates `values` on `spec`. With `prune` the run stops at the first
/// violation; otherwise it finishes and reports the earliest one anyway.
pub fn evaluate(sketch: &SketchTemplate, spec: &SynthSpec, values: &[i64], prune: bool) -> std::result::Result<(), Violation> {
    let l = spec.top_len as i64;
    let n = spec.top_len + spec.bottom_len;
    let mut at: [Vec<usize>; 2] = [(0..spec.top_len).collect(), (spec.top_len..n).collect()];
    let mut met = vec![false; n * n];
    let mut last_partner: Vec<Option<usize>> = vec![None; n];
    let mut stamp = vec![usize::MAX; n];
    let mut first: Option<Violation> = None;
    let mut layer = 0;
    let count = sketch.count.eval(values, 0, l).max(0);
    let line_idx = |line: Line| usize::from(line == Line::Bottom);
    let note = |first: &mut Option<Violation>, layer: usize, failure: Failure| {
        if first.is_none() {
            *first = Some(Violation { layer, failure });
        }
    };
    'outer: for i in 0..count {
        for st in &sketch.body {
            match *st {
                Statement::Cphase { lo, hi, step } => {
                    let (lo, hi) = (lo.eval(values, i, l), hi.eval(values, i, l));
                    let mut k = lo;
                    while k < hi {
                        if k < 0 || k as usize >= spec.links.len() {
                            note(&mut first, layer, Failure::OffLine { position: k });
                            break;
                        }
                        let (sa, sb) = spec.links[k as usize];
                        let a = at[line_idx(sa.0)][sa.1];
                        let b = at[line_idx(sb.0)][sb.1];
                        for q in [a, b] {
                            if stamp[q] == layer {
                                note(&mut first, layer, Failure::Overlap { qubit: q });
                            }
                            stamp[q] = layer;
                        }
                        let (x, y) = (a.min(b), a.max(b));
                        if met[x * n + y] {
                            if !spec.allow_duplicates {
                                note(&mut first, layer, Failure::Duplicate { pair: (x, y) });
                            }
                        } else {
                            met[x * n + y] = true;
                            if spec.mode == Mode::Strict {
                                for (q, p) in [(x, y), (y, x)] {
                                    if let Some(prev) = last_partner[q] {
                                        if p < prev {
                                            note(&mut first, layer, Failure::Order { qubit: q, partner: p, after: prev });
                                        }
                                    }
                                    last_partner[q] = Some(p);
                                }
                            }
                        }
                        k += step.max(1) as i64;
                    }
                }
                Statement::Swap { line, beg, end } => {
                    let (beg, end) = (beg.eval(values, i, l), end.eval(values, i, l));
                    let len = spec.line_len(line) as i64;
                    let row = &mut at[line_idx(line)];
                    let mut k = beg;
                    while k < end {
                        if k < 0 || k + 1 >= len {
                            note(&mut first, layer, Failure::OffLine { position: k });
                            break;
                        }
                        let k_us = k as usize;
                        for q in [row[k_us], row[k_us + 1]] {
                            if stamp[q] == layer {
                                note(&mut first, layer, Failure::Overlap { qubit: q });
                            }
                            stamp[q] = layer;
                        }
                        row.swap(k_us, k_us + 1);
                        k += 2;
                    }
                }
            }
            layer += 1;
            if prune && first.is_some() {
                break 'outer;
            }
        }
    }
    if first.is_none() {
        if let Some(&(a, b)) = spec.required.iter().find(|&&(a, b)| !met[a * n + b]) {
            note(&mut first, layer, Failure::Uncovered { pair: (a, b) });
        }
    }
    match first {
        Some(v) => Err(v),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoleValue {
    pub hole: String,
    pub value: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HoleAssignment {
    pub shape: String,
    pub size: usize,
    pub values: Vec<HoleValue>,
    pub satisfies: bool,
    pub sizes_tested: Vec<usize>,
}

impl HoleAssignment {
    pub fn raw(&self) -> Vec<i64> {
        self.values.iter().map(|v| v.value).collect()
    }

    pub fn get(&self, hole: &str) -> Option<i64> {
        self.values.iter().find(|v| v.hole == hole).map(|v| v.value)
    }
}

/// Up to `limit` satisfying assignments in lexicographic hole order. An
/// empty result means the sketch is unsatisfiable over its domains.
pub fn solve(sketch: &SketchTemplate, spec: &SynthSpec, limit: usize) -> Result<Vec<HoleAssignment>> {
    solve_capped(sketch, spec, limit, DEFAULT_CAP)
}

pub fn solve_capped(sketch: &SketchTemplate, spec: &SynthSpec, limit: usize, cap: u128) -> Result<Vec<HoleAssignment>> {
    solve_where(sketch, spec, limit, cap, |_| true)
}

/// Like [`solve_capped`], keeping only satisfying assignments accepted by `keep`.
pub fn solve_where(
    sketch: &SketchTemplate,
    spec: &SynthSpec,
    limit: usize,
    cap: u128,
    keep: impl Fn(&[i64]) -> bool + Sync,
) -> Result<Vec<HoleAssignment>> {
    let space = sketch.search_space();
    if space > cap {
        return Err(Error::SearchSpaceTooLarge(space, cap));
    }
    const CHUNK: u128 = 1 << 16;
    let mut found = Vec::new();
    let mut start = 0;
    while start < space && found.len() < limit {
        let end = (start + CHUNK).min(space);
        let hits: Vec<u128> = (start as u64..end as u64)
            .into_par_iter()
            .filter(|&idx| {
                let v = sketch.decode(idx as u128);
                evaluate(sketch, spec, &v, true).is_ok() && keep(&v)
            })
            .map(u128::from)
            .collect();
        for idx in hits {
            if found.len() == limit {
                break;
            }
            found.push(assignment(sketch, spec.size, sketch.decode(idx)));
        }
        start = end;
    }
    Ok(found)
}

fn assignment(sketch: &SketchTemplate, size: usize, raw: Vec<i64>) -> HoleAssignment {
    HoleAssignment {
        shape: sketch.shape.clone(),
        size,
        values: sketch.holes.iter().zip(raw).map(|(h, value)| HoleValue { hole: h.name.clone(), value }).collect(),
        satisfies: true,
        sizes_tested: vec![size],
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SizeFailure {
    pub size: usize,
    pub violation: Violation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneralizationReport {
    pub passing: Vec<usize>,
    pub failing: Vec<SizeFailure>,
    pub generalizing: bool,
}

/// Re-runs a fixed assignment at other sizes.
pub fn cross_validate(
    assignment: &HoleAssignment,
    sketch: &SketchTemplate,
    sizes: &[usize],
    spec_at: impl Fn(usize) -> Result<SynthSpec>,
) -> GeneralizationReport {
    let raw = assignment.raw();
    let mut passing = Vec::new();
    let mut failing = Vec::new();
    for &size in sizes {
        match spec_at(size) {
            Ok(spec) => match evaluate(sketch, &spec, &raw, true) {
                Ok(()) => passing.push(size),
                Err(violation) => failing.push(SizeFailure { size, violation }),
            },
            Err(e) => failing.push(SizeFailure {
                size,
                violation: Violation { layer: 0, failure: Failure::InvalidSize { message: e.to_string() } },
            }),
        }
    }
    let generalizing = failing.is_empty();
    GeneralizationReport { passing, failing, generalizing }
}

struct Holes {
    decls: Vec<HoleDecl>,
    size: i64,
}

impl Holes {
    fn new(line_len: usize) -> Self {
        Holes { decls: Vec::new(), size: line_len as i64 }
    }

    fn coef(&mut self, name: &str) -> Coef {
        self.push(name, COEFFICIENT_RANGE.0, COEFFICIENT_RANGE.1)
    }

    /// Offsets range over `[-2L, 2L]`.
    fn offset(&mut self, name: &str) -> Coef {
        self.push(name, -2 * self.size, 2 * self.size)
    }

    fn push(&mut self, name: &str, lo: i64, hi: i64) -> Coef {
        self.decls.push(HoleDecl { name: name.into(), lo, hi });
        Coef::Hole(self.decls.len() - 1)
    }
}

fn aff(i: Coef, l: Coef, c: Coef) -> Affine {
    Affine { i, l, c }
}

const ZERO: Coef = Coef::Fixed(0);
const ONE: Coef = Coef::Fixed(1);

/// Built-in sketch of `shape` for unit line length `line_len`.
pub fn sketch_for(shape: Shape, line_len: usize) -> SketchTemplate {
    let mut h = Holes::new(line_len);
    let all_links = |step: usize, lo: i64, links: i64| Statement::Cphase {
        lo: Expr::Affine(Affine::fixed(0, 0, lo)),
        hi: Expr::Affine(Affine::fixed(0, links, 0)),
        step,
    };
    let full_end = Expr::Affine(Affine::fixed(0, 1, -1));
    let (count, body) = match shape {
        Shape::Lnn => {
            let count = Expr::Affine(aff(ZERO, h.coef("count_l"), h.offset("count_c")));
            let beg = Expr::Mod2(aff(h.coef("beg_i"), ZERO, h.offset("beg_c")));
            let end = Expr::Min(aff(ONE, ZERO, h.offset("rise_c")), aff(Coef::Fixed(-1), h.coef("fall_l"), h.offset("fall_c")));
            (count, vec![Statement::Cphase { lo: beg, hi: end, step: 2 }, Statement::Swap { line: Line::Top, beg, end }])
        }
        Shape::GridIeRelaxed | Shape::SycIeRelaxed => {
            let count = Expr::Affine(aff(ZERO, h.coef("count_l"), h.offset("count_c")));
            let beg_top = Expr::Mod2(aff(h.coef("top_i"), ZERO, h.offset("top_c")));
            let beg_bottom = Expr::Mod2(aff(h.coef("bottom_i"), ZERO, h.offset("bottom_c")));
            let mut body = if shape == Shape::GridIeRelaxed {
                vec![all_links(1, 0, 1)]
            } else {
                // 2L - 1 boundary links forming a path
                vec![
                    Statement::Cphase { lo: Expr::Affine(Affine::fixed(0, 0, 0)), hi: Expr::Affine(Affine::fixed(0, 1, -1)), step: 2 },
                    Statement::Cphase { lo: Expr::Affine(Affine::fixed(0, 0, 1)), hi: Expr::Affine(Affine::fixed(0, 1, -1)), step: 2 },
                ]
            };
            body.push(Statement::Swap { line: Line::Top, beg: beg_top, end: full_end });
            body.push(Statement::Swap { line: Line::Bottom, beg: beg_bottom, end: full_end });
            (count, body)
        }
        Shape::GridIeStrict | Shape::SycIeStrict => {
            let two = Coef::Fixed(2);
            let count = Expr::Affine(aff(ZERO, two, h.offset("count_c")));
            let cp_hi = Expr::Min(aff(ONE, ZERO, h.offset("cp_rise_c")), aff(Coef::Fixed(-1), two, h.offset("cp_fall_c")));
            // top line moves as the plain line network
            let top_beg = Expr::Mod2(Affine::fixed(1, 0, 0));
            let top_end = Expr::Min(Affine::fixed(1, 0, 1), Affine::fixed(-1, 2, -3));
            let bottom_beg = Expr::Mod2(aff(ONE, ZERO, h.offset("bottom_c")));
            // the sycamore bottom line reuses the cphase bound to stay under the cap
            let bottom_end = if shape == Shape::GridIeStrict {
                Expr::Min(aff(ONE, ZERO, h.offset("bottom_rise_c")), aff(Coef::Fixed(-1), two, h.offset("bottom_fall_c")))
            } else {
                cp_hi
            };
            let step = if shape == Shape::GridIeStrict { 1 } else { 2 };
            let mut body = vec![Statement::Cphase { lo: Expr::Affine(Affine::fixed(0, 0, 0)), hi: cp_hi, step }];
            if step == 2 {
                body.push(Statement::Cphase { lo: Expr::Affine(Affine::fixed(0, 0, 1)), hi: cp_hi, step });
            }
            body.push(Statement::Swap { line: Line::Top, beg: top_beg, end: top_end });
            body.push(Statement::Swap { line: Line::Bottom, beg: bottom_beg, end: bottom_end });
            (count, body)
        }
    };
    SketchTemplate::new(shape.name(), count, body, h.decls).expect("built-in sketches are well formed")
}

/// Unit line length of `shape` at `size`.
pub fn line_len(shape: Shape, size: usize) -> usize {
    match shape {
        Shape::SycIeStrict | Shape::SycIeRelaxed => 2 * size,
        _ => size,
    }
}

/// True when `expr` equals `i mod 2` for every `i` in `0..count`.
pub fn is_i_mod_2(expr: &Expr, values: &[i64], line_len: usize, count: i64) -> bool {
    (0..count.max(2)).all(|i| expr.eval(values, i, line_len as i64) == i.rem_euclid(2))
}
