//! The cube of resolutions and its chain-level operators over F2.
//!
//! Generators are pairs (cube vertex, circle labeling). A labeling assigns
//! each circle of the resolution a bit: 1 for the plus generator, 0 for the
//! minus generator of the rank-two circle algebra. Trivial circles carry
//! labels v+/v-, nontrivial ones w+/w-.
//!
//! Gradings attached to each generator:
//!   r = number of 1-smoothings (homological),
//!   q = (#plus - #minus) + r (quantum, before orientation shifts),
//!   k = #plus on nontrivial circles - #minus on nontrivial circles.
//!
//! The Khovanov differential preserves q and shifts r by one; split by the
//! k-change it decomposes as d0 (k-preserving) + d_minus (k lowered by 2).
//! The Bar-Natan deformation term raises q by four and decomposes as
//! d0_lee (k-preserving) + d_plus_lee (k raised by 2). Any other k-change
//! would contradict how embedded circles can sit in the annulus, so it is
//! reported as a grading leak rather than silently folded in.

use crate::diagram::{AnnularDiagram, Resolution};
use crate::error::{Error, Result};
use crate::homology::{F2Matrix, GradingTag};
use std::collections::BTreeMap;

/// All generators of the cube complex of one diagram, in a fixed order:
/// vertices ascending, labelings ascending as integers within a vertex.
#[derive(Debug, Clone)]
pub struct GeneratorTable {
    pub diagram: AnnularDiagram,
    /// Resolution of every cube vertex, indexed by vertex.
    pub resolutions: Vec<Resolution>,
    /// offsets[v] = index of the first generator at vertex v; one extra
    /// entry at the end equal to the total count.
    pub offsets: Vec<usize>,
    pub total: usize,
    /// (r, q, k) of each generator.
    pub gradings: Vec<GradingTag>,
}

/// Enumerate every generator, with a budget on the total count so that a
/// diagram with many crossings fails fast instead of exhausting memory.
pub fn enumerate_generators(diagram: &AnnularDiagram, budget: u64) -> Result<GeneratorTable> {
    diagram.validate()?;
    let n = diagram.n_crossings();
    let n_vertices = 1u64 << n;
    let mut resolutions = Vec::new();
    let mut offsets = Vec::with_capacity(n_vertices as usize + 1);
    let mut running: u128 = 0;
    for v in 0..n_vertices {
        let res = diagram.resolve(v)?;
        if res.circles.len() >= 63 {
            return Err(Error::CapacityExceeded { needed: u128::MAX, budget });
        }
        offsets.push(running as usize);
        running += 1u128 << res.circles.len();
        if running > budget as u128 {
            // Lower bound: the remaining vertices hold at least two
            // generators each (every resolution has at least one circle).
            let remaining = (n_vertices - v - 1) as u128;
            return Err(Error::CapacityExceeded { needed: running + 2 * remaining, budget });
        }
        resolutions.push(res);
    }
    offsets.push(running as usize);
    let total = running as usize;

    let mut gradings = Vec::with_capacity(total);
    for (v, res) in resolutions.iter().enumerate() {
        let r = (v as u64).count_ones() as i64;
        let n_circles = res.circles.len();
        for labels in 0..1u64 << n_circles {
            let plus = labels.count_ones() as i64;
            let minus = n_circles as i64 - plus;
            let mut k = 0i64;
            for (c, circle) in res.circles.iter().enumerate() {
                if !circle.is_trivial() {
                    k += if labels >> c & 1 == 1 { 1 } else { -1 };
                }
            }
            gradings.push(GradingTag { r, q: plus - minus + r, k });
        }
    }
    Ok(GeneratorTable {
        diagram: diagram.clone(),
        resolutions,
        offsets,
        total,
        gradings,
    })
}

impl GeneratorTable {
    pub fn n_crossings(&self) -> usize {
        self.diagram.n_crossings()
    }

    pub fn index(&self, vertex: u64, labels: u64) -> usize {
        self.offsets[vertex as usize] + labels as usize
    }

    /// (vertex, labels) of a generator index.
    pub fn coords(&self, index: usize) -> (u64, u64) {
        let v = self.offsets.partition_point(|&o| o <= index) - 1;
        (v as u64, (index - self.offsets[v]) as u64)
    }

    /// Human-readable name, e.g. "011|w+ v-": vertex bits (crossing 0
    /// first), then one label per circle in canonical circle order, with
    /// trivial circles written w± and nontrivial circles v±.
    pub fn describe(&self, index: usize) -> String {
        let (v, labels) = self.coords(index);
        let res = &self.resolutions[v as usize];
        let mut out = self.diagram.vertex_string(v);
        out.push('|');
        for (c, circle) in res.circles.iter().enumerate() {
            if c > 0 {
                out.push(' ');
            }
            out.push(if circle.is_trivial() { 'w' } else { 'v' });
            out.push(if labels >> c & 1 == 1 { '+' } else { '-' });
        }
        if res.circles.is_empty() {
            out.push('1');
        }
        out
    }

    /// Normalized bidegrees (i, j) = (r - n_minus, q + n_plus - 2 n_minus),
    /// available when the diagram carries an orientation.
    pub fn normalization(&self) -> Option<(i64, i64)> {
        self.diagram.crossing_counts().map(|(p, m)| (-(m as i64), p as i64 - 2 * m as i64))
    }
}

/// How circles transform along one cube edge.
enum EdgeKind {
    /// Source circles (a, b) merge into target circle t.
    Merge { a: usize, b: usize, t: usize, perm: Vec<usize> },
    /// Source circle s splits into target circles (t1, t2).
    Split { s: usize, t1: usize, t2: usize, perm: Vec<usize> },
}

/// Match circles across the cube edge from `src` to `tgt` (one crossing
/// changes from the 0- to the 1-smoothing). `perm` maps each non-participant
/// source circle index to its target circle index.
fn classify_edge(src: &Resolution, tgt: &Resolution) -> Result<EdgeKind> {
    let ns = src.circles.len();
    let nt = tgt.circles.len();
    let free = src.circles.iter().filter(|c| c.edges.is_empty()).count();
    if nt + 1 == ns {
        // Merge. Every source circle's edges land in a single target circle.
        let mut perm = vec![usize::MAX; ns];
        let mut hits: Vec<Vec<usize>> = vec![Vec::new(); nt];
        for (s, circle) in src.circles.iter().enumerate() {
            if circle.edges.is_empty() {
                // Free loops keep their relative position at the tail.
                let pos = s - (ns - free);
                perm[s] = nt - free + pos;
            } else {
                perm[s] = tgt.edge_circle[circle.edges[0]];
            }
            hits[perm[s]].push(s);
        }
        let joined: Vec<&Vec<usize>> = hits.iter().filter(|h| h.len() == 2).collect();
        if joined.len() != 1 || hits.iter().any(|h| h.is_empty() || h.len() > 2) {
            return Err(Error::InvalidDiagram(format!(
                "edge {:b} -> {:b} does not merge exactly two circles",
                src.vertex, tgt.vertex
            )));
        }
        let (a, b) = (joined[0][0], joined[0][1]);
        let t = perm[a];
        Ok(EdgeKind::Merge { a, b, t, perm })
    } else if ns + 1 == nt {
        // Split. Every target circle's edges come from a single source circle.
        let mut back = vec![usize::MAX; nt];
        let mut hits: Vec<Vec<usize>> = vec![Vec::new(); ns];
        for (t, circle) in tgt.circles.iter().enumerate() {
            if circle.edges.is_empty() {
                let pos = t - (nt - free);
                back[t] = ns - free + pos;
            } else {
                back[t] = src.edge_circle[circle.edges[0]];
            }
            hits[back[t]].push(t);
        }
        let doubled: Vec<&Vec<usize>> = hits.iter().filter(|h| h.len() == 2).collect();
        if doubled.len() != 1 || hits.iter().any(|h| h.is_empty() || h.len() > 2) {
            return Err(Error::InvalidDiagram(format!(
                "edge {:b} -> {:b} does not split exactly one circle",
                src.vertex, tgt.vertex
            )));
        }
        let (t1, t2) = (doubled[0][0], doubled[0][1]);
        let s = back[t1];
        let mut perm = vec![usize::MAX; ns];
        for (t, &b) in back.iter().enumerate() {
            if b != s {
                perm[b] = t;
            }
        }
        Ok(EdgeKind::Split { s, t1, t2, perm })
    } else {
        Err(Error::InvalidDiagram(format!(
            "edge {:b} -> {:b} changes the circle count by {}",
            src.vertex,
            tgt.vertex,
            nt as i64 - ns as i64
        )))
    }
}

fn carry_spectators(labels: u64, perm: &[usize], skip: impl Fn(usize) -> bool) -> u64 {
    let mut out = 0u64;
    for (s, &t) in perm.iter().enumerate() {
        if !skip(s) && labels >> s & 1 == 1 {
            out |= 1 << t;
        }
    }
    out
}

/// Walk all cube edges and collect matrix entries for the standard
/// differential and the deformation term in one pass.
fn cube_entries(table: &GeneratorTable) -> Result<(Vec<(usize, usize)>, Vec<(usize, usize)>)> {
    let n = table.n_crossings();
    let mut standard = Vec::new();
    let mut deformation = Vec::new();
    for v in 0..1u64 << n {
        for c in 0..n {
            if v >> c & 1 == 1 {
                continue;
            }
            let w = v | 1 << c;
            let src = &table.resolutions[v as usize];
            let tgt = &table.resolutions[w as usize];
            match classify_edge(src, tgt)? {
                EdgeKind::Merge { a, b, t, ref perm } => {
                    for labels in 0..1u64 << src.circles.len() {
                        let col = table.index(v, labels);
                        let base = carry_spectators(labels, perm, |s| s == a || s == b);
                        let (la, lb) = (labels >> a & 1 == 1, labels >> b & 1 == 1);
                        match (la, lb) {
                            (true, true) => standard.push((table.index(w, base | 1 << t), col)),
                            (true, false) | (false, true) => {
                                standard.push((table.index(w, base), col))
                            }
                            (false, false) => {
                                deformation.push((table.index(w, base | 1 << t), col))
                            }
                        }
                    }
                }
                EdgeKind::Split { s, t1, t2, ref perm } => {
                    for labels in 0..1u64 << src.circles.len() {
                        let col = table.index(v, labels);
                        let base = carry_spectators(labels, perm, |x| x == s);
                        if labels >> s & 1 == 1 {
                            standard.push((table.index(w, base | 1 << t1), col));
                            standard.push((table.index(w, base | 1 << t2), col));
                        } else {
                            standard.push((table.index(w, base), col));
                            deformation.push((table.index(w, base | 1 << t1 | 1 << t2), col));
                        }
                    }
                }
            }
        }
    }
    Ok((standard, deformation))
}

/// The full Khovanov differential (all k-changes together).
pub fn khovanov_differential(table: &GeneratorTable) -> Result<F2Matrix> {
    let (standard, _) = cube_entries(table)?;
    Ok(F2Matrix::from_entries(table.total, table.total, standard))
}

/// The Bar-Natan deformation term: merges send minus/minus to plus, splits
/// send minus to plus/plus. Raises q by four.
pub fn deformation_term(table: &GeneratorTable) -> Result<F2Matrix> {
    let (_, deformation) = cube_entries(table)?;
    Ok(F2Matrix::from_entries(table.total, table.total, deformation))
}

/// Split a chain-level operator by how much it shifts the k-grading.
/// Entries whose k-change is not in `allowed` are a grading leak.
pub fn split_by_k_change(
    table: &GeneratorTable,
    matrix: &F2Matrix,
    allowed: &[i64],
) -> Result<BTreeMap<i64, F2Matrix>> {
    let mut buckets: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
    for (row, col) in matrix.entries() {
        let dk = table.gradings[row].k - table.gradings[col].k;
        if !allowed.contains(&dk) {
            return Err(Error::GradingLeak(format!(
                "entry {} -> {} changes k by {dk}, allowed {allowed:?}",
                table.describe(col),
                table.describe(row)
            )));
        }
        buckets.entry(dk).or_default().push((row, col));
    }
    Ok(allowed
        .iter()
        .map(|&dk| {
            let entries = buckets.remove(&dk).unwrap_or_default();
            (dk, F2Matrix::from_entries(table.total, table.total, entries))
        })
        .collect())
}

/// Which standard generator of sl2 to realize on the complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sl2Generator {
    E,
    F,
    H,
}

/// The chain-level sl2 action: e raises one minus label to plus on a
/// nontrivial circle (summed over circles), f lowers one plus to minus,
/// h multiplies by k. Trivial circles are inert. Over F2 the h action is
/// the parity of the number of nontrivial circles of the resolution.
pub fn sl2_action(table: &GeneratorTable, which: Sl2Generator) -> F2Matrix {
    let mut entries = Vec::new();
    for (v, res) in table.resolutions.iter().enumerate() {
        let nontrivial: Vec<usize> = (0..res.circles.len())
            .filter(|&c| !res.circles[c].is_trivial())
            .collect();
        for labels in 0..1u64 << res.circles.len() {
            let col = table.index(v as u64, labels);
            match which {
                Sl2Generator::E => {
                    for &c in &nontrivial {
                        if labels >> c & 1 == 0 {
                            entries.push((table.index(v as u64, labels | 1 << c), col));
                        }
                    }
                }
                Sl2Generator::F => {
                    for &c in &nontrivial {
                        if labels >> c & 1 == 1 {
                            entries.push((table.index(v as u64, labels & !(1 << c)), col));
                        }
                    }
                }
                Sl2Generator::H => {
                    if nontrivial.len() % 2 == 1 {
                        entries.push((col, col));
                    }
                }
            }
        }
    }
    F2Matrix::from_entries(table.total, table.total, entries)
}

/// The (r, q, k) shift of a homogeneous operator, or a grading-leak error
/// naming the offending entry. Zero matrices report as (0, 0, 0).
pub fn operator_tridegree(table: &GeneratorTable, matrix: &F2Matrix) -> Result<(i64, i64, i64)> {
    let mut seen: Option<(i64, i64, i64)> = None;
    for (row, col) in matrix.entries() {
        let d = (
            table.gradings[row].r - table.gradings[col].r,
            table.gradings[row].q - table.gradings[col].q,
            table.gradings[row].k - table.gradings[col].k,
        );
        match seen {
            None => seen = Some(d),
            Some(prev) if prev == d => {}
            Some(prev) => {
                return Err(Error::GradingLeak(format!(
                    "operator entries shift gradings by both {prev:?} and {d:?}"
                )))
            }
        }
    }
    Ok(seen.unwrap_or((0, 0, 0)))
}
