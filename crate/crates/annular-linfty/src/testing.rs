//! Deterministic randomized builders used by the test suites: invertible
//! matrices, graded complexes with known homology, valid contractions, and
//! strict modules with arbitrary action tables.
//!
//! The generators run off a small explicit PRNG instead of an external RNG
//! crate so that every suite is byte-reproducible across platforms and
//! dependency upgrades.

use crate::complex::{deformation_term, enumerate_generators, khovanov_differential};
use crate::diagram::AnnularDiagram;
use crate::homology::{
    contract_onto_homology, F2Matrix, GradingTag, ModuleContraction, PivotStrategy,
};
use crate::linfty::{LInftyAlgebraOps, LInftyModuleOps};
use std::collections::BTreeMap;

/// SplitMix64 generator; seed fully determines the stream.
#[derive(Debug, Clone)]
pub struct TestRng {
    state: u64,
}

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform-enough value in 0..n (n > 0); modulo bias is irrelevant here.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    /// True with probability num/den.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.next_u64() % den < num
    }
}

/// Random matrix with roughly `num/den` of its entries set.
pub fn random_matrix(rng: &mut TestRng, rows: usize, cols: usize, num: u64, den: u64) -> F2Matrix {
    let mut m = F2Matrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            if rng.chance(num, den) {
                m.set(r, c, true);
            }
        }
    }
    m
}

/// A random invertible matrix together with its inverse, built as a product
/// of elementary row operations (their inverses are tracked exactly, and
/// over GF(2) every elementary operation is an involution).
pub fn random_invertible_pair(rng: &mut TestRng, dim: usize) -> (F2Matrix, F2Matrix) {
    assert!(dim <= 64, "invertible-pair generator is capped at 64");
    let mut p: Vec<u64> = (0..dim).map(|i| 1u64 << i).collect();
    let mut pinv = p.clone();
    if dim >= 2 {
        for _ in 0..(4 * dim + 8) {
            let i = rng.below(dim);
            let j = rng.below(dim);
            if i == j {
                continue;
            }
            if rng.chance(1, 4) {
                // P <- (swap rows i,j) P, so Pinv gets its columns i,j swapped
                p.swap(i, j);
                for row in pinv.iter_mut() {
                    let bi = (*row >> i) & 1;
                    let bj = (*row >> j) & 1;
                    if bi != bj {
                        *row ^= (1 << i) | (1 << j);
                    }
                }
            } else {
                // P <- (row j += row i) P, so Pinv gets column i += column j
                p[j] ^= p[i];
                for row in pinv.iter_mut() {
                    if (*row >> j) & 1 == 1 {
                        *row ^= 1 << i;
                    }
                }
            }
        }
    }
    let to_matrix = |rows: &[u64]| {
        let mut entries = Vec::new();
        for (r, bits) in rows.iter().enumerate() {
            for c in 0..dim {
                if (bits >> c) & 1 == 1 {
                    entries.push((r, c));
                }
            }
        }
        F2Matrix::from_entries(dim, dim, entries)
    };
    (to_matrix(&p), to_matrix(&pinv))
}

/// A random chain complex homogeneous for [`GradingTag`] gradings, with its
/// graded homology known by construction.
///
/// The sample is a direct sum of strands. Each strand has constant (q, k),
/// a chain of r-levels, and per level a split of its basis into incoming
/// pairing targets, outgoing pairing sources and homology classes; the
/// canonical pairing differential is then conjugated by a random invertible
/// map of each level, which reaches every graded complex of this shape.
/// Finally the global basis order is shuffled.
pub fn random_graded_complex(
    rng: &mut TestRng,
    max_dim: usize,
) -> (F2Matrix, Vec<GradingTag>, BTreeMap<GradingTag, usize>) {
    assert!(max_dim >= 2);
    let strands = 1 + rng.below(3);
    // per basis vector: grading, role (source pairs with the next level)
    let mut gradings: Vec<GradingTag> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new(); // (source, target) indices
    let mut expected: BTreeMap<GradingTag, usize> = BTreeMap::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new(); // indices sharing (strand, level)

    for _ in 0..strands {
        let q = rng.below(7) as i64 - 3;
        let k = rng.below(5) as i64 - 2;
        let levels = 2 + rng.below(3);
        let r0 = rng.below(3) as i64 - 1;
        let mut incoming = 0usize; // targets owed to the previous level
        let mut prev_sources: Vec<usize> = Vec::new();
        for level in 0..levels {
            if gradings.len() >= max_dim.saturating_sub(1) {
                break;
            }
            let room = max_dim - gradings.len();
            let extra = rng.below(3.min(room - incoming + 1).max(1));
            let n = incoming + extra;
            if n == 0 {
                incoming = 0;
                prev_sources = Vec::new();
                continue;
            }
            let tag = GradingTag::new(r0 + level as i64, q, k);
            let start = gradings.len();
            let mut block = Vec::with_capacity(n);
            for t in 0..n {
                gradings.push(tag);
                block.push(start + t);
            }
            blocks.push(block);
            // first `incoming` vectors are targets of the previous level
            for (j, &src) in prev_sources.iter().enumerate() {
                pairs.push((src, start + j));
            }
            // among the rest, later levels may pair into the next one
            let free = n - incoming;
            let sources = if level + 1 < levels { rng.below(free + 1) } else { 0 };
            prev_sources = (0..sources).map(|j| start + incoming + j).collect();
            incoming = sources;
            *expected.entry(tag).or_insert(0) += free - sources;
            if gradings.len() >= max_dim {
                break;
            }
        }
        // sources whose target level never materialized (capacity cut the
        // strand short) were never paired, so they are homology classes
        for &src in &prev_sources {
            *expected.entry(gradings[src]).or_insert(0) += 1;
        }
    }
    expected.retain(|_, n| *n > 0);

    let dim = gradings.len();
    let mut d = F2Matrix::zeros(dim, dim);
    for &(src, tgt) in &pairs {
        d.set(tgt, src, true);
    }

    // conjugate by a block-diagonal invertible map, one block per level
    for block in &blocks {
        let (p, pinv) = random_invertible_pair(rng, block.len());
        d = conjugate_block(&d, block, &p, &pinv);
    }

    // shuffle the global basis order
    let mut perm: Vec<usize> = (0..dim).collect();
    for i in (1..dim).rev() {
        let j = rng.below(i + 1);
        perm.swap(i, j);
    }
    let mut shuffled = F2Matrix::zeros(dim, dim);
    for (r, c) in d.entries() {
        shuffled.set(perm[r], perm[c], true);
    }
    let mut shuffled_gradings = vec![GradingTag::new(0, 0, 0); dim];
    for (old, tag) in gradings.iter().enumerate() {
        shuffled_gradings[perm[old]] = *tag;
    }
    (shuffled, shuffled_gradings, expected)
}

/// Replace d by (P on block) d (P^-1 on block), identity elsewhere.
fn conjugate_block(d: &F2Matrix, block: &[usize], p: &F2Matrix, pinv: &F2Matrix) -> F2Matrix {
    let dim = d.nrows();
    let mut big_p = F2Matrix::identity(dim);
    let mut big_pinv = F2Matrix::identity(dim);
    for (bi, &gi) in block.iter().enumerate() {
        big_p.set(gi, gi, false);
        big_pinv.set(gi, gi, false);
        for (bj, &gj) in block.iter().enumerate() {
            if p.get(bi, bj) {
                big_p.set(gi, gj, true);
            }
            if pinv.get(bi, bj) {
                big_pinv.set(gi, gj, true);
            }
        }
    }
    big_p.mul(d).mul(&big_pinv)
}

/// A valid contraction of a random differential on `dim` generators:
/// a canonical pairing conjugated by a random level-preserving isomorphism,
/// then contracted with a seeded pivot order.
pub fn random_contraction(rng: &mut TestRng, dim: usize) -> ModuleContraction {
    assert!(dim >= 1);
    let paired = rng.below(dim / 2 + 1);
    let level0 = dim - paired; // sources then free vectors
    let mut d0 = F2Matrix::zeros(dim, dim);
    for j in 0..paired {
        d0.set(level0 + j, j, true);
    }
    let mut gradings = vec![GradingTag::new(0, 0, 0); dim];
    for tag in gradings.iter_mut().skip(level0) {
        tag.r = 1;
    }
    let mut d = d0;
    let blocks = [
        (0..level0).collect::<Vec<_>>(),
        (level0..dim).collect::<Vec<_>>(),
    ];
    for block in blocks.iter().filter(|b| !b.is_empty()) {
        let (p, pinv) = random_invertible_pair(rng, block.len());
        d = conjugate_block(&d, block, &p, &pinv);
    }
    contract_onto_homology(&d, &gradings, PivotStrategy::Seeded(rng.next_u64()))
        .expect("conjugated pairing is a graded differential")
}

/// A strict module with the given differential and random action tables.
/// The tables are not required to satisfy any relation; generators feeding
/// formula-level identities use this.
pub fn random_strict_module(
    rng: &mut TestRng,
    algebra: LInftyAlgebraOps,
    differential: F2Matrix,
) -> LInftyModuleOps {
    let dim = differential.nrows();
    let mut module = LInftyModuleOps::new(algebra, dim, vec![0; dim]);
    module.insert(1, vec![], differential).unwrap();
    let n_basis = module.algebra.dim();
    for a in 0..n_basis {
        let table = random_matrix(rng, dim, dim, 1, 3);
        module.insert(2, vec![a as u8], table).unwrap();
    }
    module
}

/// Every 1- and 2-crossing diagram this exhaustive enumeration accepts:
/// all ways to pair off the 4n crossing corners with 2n edge labels (each
/// edge used exactly twice, crossing order quotiented out), combined with a
/// small family of axis decorations, kept whenever the result passes
/// validation and yields a well-formed cube (circle windings at most one,
/// every cube edge a plain merge or split).
pub fn small_diagrams(max_crossings: usize) -> Vec<AnnularDiagram> {
    let mut out = Vec::new();
    for n in 1..=max_crossings {
        let n_edges = 2 * n;
        let mut axes: Vec<Vec<(usize, i64)>> = vec![Vec::new()];
        for e in 0..n_edges {
            axes.push(vec![(e, 1)]);
        }
        for e in 0..n_edges {
            for f in e + 1..n_edges {
                axes.push(vec![(e, 1), (f, -1)]);
            }
        }
        for quads in quad_pairings(n) {
            for axis in &axes {
                let diagram = AnnularDiagram {
                    crossings: quads.clone(),
                    n_edges,
                    axis: axis.clone(),
                    free_loops: Vec::new(),
                    signs: None,
                };
                if diagram.validate().is_err() {
                    continue;
                }
                let Ok(table) = enumerate_generators(&diagram, 1 << 12) else {
                    continue;
                };
                if khovanov_differential(&table).is_err() || deformation_term(&table).is_err() {
                    continue;
                }
                out.push(diagram);
            }
        }
    }
    out
}

/// All ways to fill n counterclockwise quads with edges 0..2n, each used
/// exactly twice; the (unordered) set of crossings is listed once.
fn quad_pairings(n: usize) -> Vec<Vec<[usize; 4]>> {
    let n_edges = 2 * n;
    let mut remaining = vec![2u8; n_edges];
    let mut slots = vec![0usize; 4 * n];
    let mut seen = std::collections::BTreeSet::new();
    fn go(
        pos: usize,
        slots: &mut Vec<usize>,
        remaining: &mut Vec<u8>,
        seen: &mut std::collections::BTreeSet<Vec<[usize; 4]>>,
    ) {
        if pos == slots.len() {
            let mut quads: Vec<[usize; 4]> = slots
                .chunks_exact(4)
                .map(|q| [q[0], q[1], q[2], q[3]])
                .collect();
            quads.sort_unstable();
            seen.insert(quads);
            return;
        }
        for e in 0..remaining.len() {
            if remaining[e] > 0 {
                remaining[e] -= 1;
                slots[pos] = e;
                go(pos + 1, slots, remaining, seen);
                remaining[e] += 1;
            }
        }
    }
    go(0, &mut slots, &mut remaining, &mut seen);
    seen.into_iter().collect()
}
