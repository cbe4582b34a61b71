//! Exhaustive relation checkers for L-infinity structures over F2.
//!
//! Each checker evaluates its defining identity on every non-decreasing
//! tuple of basis indices up to a given arity and reports the tuples where
//! the defect is nonzero. Over F2 the operations are symmetric, so the
//! defect on an arbitrary tuple is a re-indexing of the defect on its sorted
//! form and sorted tuples are exhaustive.

use crate::homology::{F2Matrix, F2Vec};
use crate::linfty::ops::{LInftyAlgebraOps, LInftyModuleOps, LInftyMorphism, ModuleMorphism};
use crate::linfty::unshuffle::{sorted_compositions, sorted_unshuffles, unshuffles};
use rayon::prelude::*;

/// One failing instance of a relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Arity of the relation instance.
    pub n: usize,
    /// The basis-index tuple it was evaluated on.
    pub args: Vec<u8>,
    /// What is nonzero, for diagnostics.
    pub detail: String,
}

/// All non-decreasing tuples of the given length over 0..dim.
pub(crate) fn sorted_tuples(dim: usize, len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut current = vec![0u8; len];
    fn go(dim: u8, pos: usize, start: u8, current: &mut Vec<u8>, out: &mut Vec<Vec<u8>>) {
        if pos == current.len() {
            out.push(current.clone());
            return;
        }
        for b in start..dim {
            current[pos] = b;
            go(dim, pos + 1, b, current, out);
        }
    }
    go(dim as u8, 0, 0, &mut current, &mut out);
    out
}

fn pick(args: &[u8], slots: &[usize]) -> Vec<u8> {
    slots.iter().map(|&s| args[s]).collect()
}

/// Check the generalized Jacobi identities
///   sum over i+j = n+1 and (i, n-i)-unshuffles of  l_j(l_i(block1), block2)
/// for 1 <= n <= n_max.
pub fn check_algebra_relation(alg: &LInftyAlgebraOps, n_max: usize) -> Vec<Violation> {
    let mut violations = Vec::new();
    for n in 1..=n_max {
        let tuples = sorted_tuples(alg.dim(), n);
        let mut batch: Vec<Violation> = tuples
            .par_iter()
            .filter_map(|args| {
                let mut defect = F2Vec::zeros(alg.dim());
                for i in 1..=n {
                    for u in unshuffles(&[i, n - i]) {
                        let head = alg.op(i, &pick(args, &u[..i]));
                        defect.xor_assign(&alg.op_mixed(n - i + 1, &head, &pick(args, &u[i..])));
                    }
                }
                if defect.is_zero() {
                    None
                } else {
                    Some(Violation {
                        n,
                        args: args.clone(),
                        detail: format!(
                            "defect supported on basis indices {:?}",
                            defect.iter_ones().collect::<Vec<_>>()
                        ),
                    })
                }
            })
            .collect();
        violations.append(&mut batch);
    }
    violations
}

/// Check the L-infinity module identities for 1 <= n <= n_max: over F2,
///   sum_{p<n} k_{n-p+1}(l_p(block1), block2; -)
/// + sum_{p<=n} k_{n-p+1}(block2; -) . k_p(block1; -)  = 0,
/// where in the second sum the module input threads through the inner k_p.
pub fn check_module_relation(module: &LInftyModuleOps, n_max: usize) -> Vec<Violation> {
    let alg = &module.algebra;
    let mut violations = Vec::new();
    for n in 1..=n_max {
        let tuples = sorted_tuples(alg.dim(), n - 1);
        let mut batch: Vec<Violation> = tuples
            .par_iter()
            .filter_map(|args| {
                let mut defect = F2Matrix::zeros(module.dim, module.dim);
                for p in 1..n {
                    for u in unshuffles(&[p, n - 1 - p]) {
                        let head = alg.op(p, &pick(args, &u[..p]));
                        defect = defect.add(&module.k_mixed(&head, &pick(args, &u[p..])));
                    }
                }
                for p in 1..=n {
                    for u in unshuffles(&[p - 1, n - p]) {
                        let inner = module.k(&pick(args, &u[..p - 1]));
                        let outer = module.k(&pick(args, &u[p - 1..]));
                        defect = defect.add(&outer.mul(&inner));
                    }
                }
                if defect.is_zero() {
                    None
                } else {
                    Some(Violation {
                        n,
                        args: args.clone(),
                        detail: format!("defect matrix has {} entries", defect.count_ones()),
                    })
                }
            })
            .collect();
        violations.append(&mut batch);
    }
    violations
}

/// Check the L-infinity algebra homomorphism identities for f: L -> L',
/// 1 <= n <= n_max: over F2,
///   sum f_{n-k+1}(l_k(block1), block2)
/// + sum over sorted compositions  l'_r(f_{i_1}(block1), ..., f_{i_r}(block_r)) = 0.
pub fn check_algebra_morphism(f: &LInftyMorphism, n_max: usize) -> Vec<Violation> {
    let src = &f.source;
    let tgt = &f.target;
    let mut violations = Vec::new();
    for n in 1..=n_max {
        let tuples = sorted_tuples(src.dim(), n);
        let mut batch: Vec<Violation> = tuples
            .par_iter()
            .filter_map(|args| {
                let mut defect = F2Vec::zeros(tgt.dim());
                for k in 1..=n {
                    for u in unshuffles(&[k, n - k]) {
                        let head = src.op(k, &pick(args, &u[..k]));
                        defect.xor_assign(&f.term_mixed(&head, &pick(args, &u[k..])));
                    }
                }
                for comp in sorted_compositions(n) {
                    for tau in sorted_unshuffles(&comp) {
                        let mut vectors = Vec::with_capacity(comp.len());
                        let mut start = 0;
                        for &size in &comp {
                            vectors.push(f.term(&pick(args, &tau[start..start + size])));
                            start += size;
                        }
                        defect.xor_assign(&tgt.op_vecs(&vectors));
                    }
                }
                if defect.is_zero() {
                    None
                } else {
                    Some(Violation {
                        n,
                        args: args.clone(),
                        detail: format!(
                            "defect supported on target indices {:?}",
                            defect.iter_ones().collect::<Vec<_>>()
                        ),
                    })
                }
            })
            .collect();
        violations.append(&mut batch);
    }
    violations
}

/// Check the L-infinity module homomorphism identities for h: source ->
/// target (modules over one algebra), 1 <= n <= n_max: over F2,
///   sum h_{n-i+1}(l_i(block1), block2; -)
/// + sum h_{n-i+1}(block2; -) . k^src_i(block1; -)
/// + sum k^tgt_r(block1; -) . h_s(block2; -)  = 0.
pub fn check_module_morphism(
    h: &ModuleMorphism,
    source: &LInftyModuleOps,
    target: &LInftyModuleOps,
    n_max: usize,
) -> Vec<Violation> {
    let alg = &h.algebra;
    let mut violations = Vec::new();
    for n in 1..=n_max {
        let tuples = sorted_tuples(alg.dim(), n - 1);
        let mut batch: Vec<Violation> = tuples
            .par_iter()
            .filter_map(|args| {
                let mut defect = F2Matrix::zeros(h.target_dim, h.source_dim);
                for i in 1..n {
                    for u in unshuffles(&[i, n - 1 - i]) {
                        let head = alg.op(i, &pick(args, &u[..i]));
                        defect = defect.add(&h.h_mixed(&head, &pick(args, &u[i..])));
                    }
                }
                for i in 1..=n {
                    for u in unshuffles(&[i - 1, n - i]) {
                        let inner = source.k(&pick(args, &u[..i - 1]));
                        let outer = h.h(&pick(args, &u[i - 1..]));
                        defect = defect.add(&outer.mul(&inner));
                    }
                }
                for s in 1..=n {
                    for u in unshuffles(&[n - s, s - 1]) {
                        let outer = target.k(&pick(args, &u[..n - s]));
                        let inner = h.h(&pick(args, &u[n - s..]));
                        defect = defect.add(&outer.mul(&inner));
                    }
                }
                if defect.is_zero() {
                    None
                } else {
                    Some(Violation {
                        n,
                        args: args.clone(),
                        detail: format!("defect matrix has {} entries", defect.count_ones()),
                    })
                }
            })
            .collect();
        violations.append(&mut batch);
    }
    violations
}
