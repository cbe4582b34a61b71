//! Operation tables for L-infinity algebras, modules, and morphisms over F2.
//!
//! Over F2 every Koszul sign vanishes, so all operations are symmetric in
//! their algebra arguments and a table keyed by non-decreasing basis-index
//! tuples is a complete description. Degrees are cohomological: l_n and k_n
//! have intrinsic degree 2-n, morphism components f_n and h_n have degree
//! 1-n.

use crate::error::{Error, Result};
use crate::homology::{F2Matrix, F2Vec};
use crate::lie::LieSuperalgebra;
use std::collections::BTreeMap;

fn sorted_key(args: &[u8]) -> Vec<u8> {
    let mut key = args.to_vec();
    key.sort_unstable();
    key
}

/// An L-infinity algebra on a finite named basis: `ops[n][args] = l_n(args)`
/// with `args` a non-decreasing tuple of basis indices of length n. Missing
/// entries are zero.
#[derive(Debug, Clone)]
pub struct LInftyAlgebraOps {
    pub name: String,
    pub basis: Vec<String>,
    pub degree: Vec<i64>,
    pub ops: BTreeMap<usize, BTreeMap<Vec<u8>, F2Vec>>,
}

impl LInftyAlgebraOps {
    pub fn new(name: &str, basis: Vec<String>, degree: Vec<i64>) -> Self {
        LInftyAlgebraOps { name: name.to_string(), basis, degree, ops: BTreeMap::new() }
    }

    /// A strict algebra: l2 is the Lie bracket, l1 the given differential,
    /// and all higher operations vanish.
    pub fn strict_from_lie(lie: &LieSuperalgebra, differential: Option<&F2Matrix>) -> Result<Self> {
        let mut alg = Self::new(&lie.name, lie.basis.clone(), lie.degree.clone());
        if let Some(d) = differential {
            for (row, col) in d.entries() {
                let mut v = alg.op(1, &[col as u8]);
                v.flip(row);
                alg.insert(1, vec![col as u8], v)?;
            }
        }
        for i in 0..lie.dim() {
            for j in i..lie.dim() {
                let out = lie.bracket_basis(i, j).clone();
                if !out.is_zero() {
                    alg.insert(2, vec![i as u8, j as u8], out)?;
                }
            }
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Insert l_n(args) = out, enforcing degree discipline
    /// |out| = sum |args| + (2 - n).
    pub fn insert(&mut self, n: usize, args: Vec<u8>, out: F2Vec) -> Result<()> {
        if args.len() != n {
            return Err(Error::MalformedInput(format!(
                "l_{n} takes {n} arguments, got {}",
                args.len()
            )));
        }
        let key = sorted_key(&args);
        let expected: i64 =
            key.iter().map(|&a| self.degree[a as usize]).sum::<i64>() + 2 - n as i64;
        for b in out.iter_ones() {
            if self.degree[b] != expected {
                return Err(Error::MalformedInput(format!(
                    "{}: l_{n}{:?} output {} has degree {}, expected {expected}",
                    self.name, key, self.basis[b], self.degree[b]
                )));
            }
        }
        if out.is_zero() {
            if let Some(table) = self.ops.get_mut(&n) {
                table.remove(&key);
                if table.is_empty() {
                    self.ops.remove(&n);
                }
            }
        } else {
            self.ops.entry(n).or_default().insert(key, out);
        }
        Ok(())
    }

    /// l_n evaluated on basis indices (any order).
    pub fn op(&self, n: usize, args: &[u8]) -> F2Vec {
        debug_assert_eq!(args.len(), n);
        self.ops
            .get(&n)
            .and_then(|table| table.get(&sorted_key(args)))
            .cloned()
            .unwrap_or_else(|| F2Vec::zeros(self.dim()))
    }

    /// l_n with one vector argument in front of basis-index arguments.
    pub fn op_mixed(&self, n: usize, head: &F2Vec, tail: &[u8]) -> F2Vec {
        let mut out = F2Vec::zeros(self.dim());
        let mut args = Vec::with_capacity(n);
        for b in head.iter_ones() {
            args.clear();
            args.push(b as u8);
            args.extend_from_slice(tail);
            out.xor_assign(&self.op(n, &args));
        }
        out
    }

    /// Full multilinear evaluation of l_n on vector arguments.
    pub fn op_vecs(&self, vecs: &[F2Vec]) -> F2Vec {
        let n = vecs.len();
        let mut out = F2Vec::zeros(self.dim());
        let supports: Vec<Vec<usize>> = vecs.iter().map(|v| v.iter_ones().collect()).collect();
        if supports.iter().any(|s| s.is_empty()) {
            return out;
        }
        let mut cursor = vec![0usize; n];
        loop {
            let args: Vec<u8> = cursor.iter().zip(&supports).map(|(&c, s)| s[c] as u8).collect();
            out.xor_assign(&self.op(n, &args));
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cursor[i] += 1;
                if cursor[i] < supports[i].len() {
                    break;
                }
                cursor[i] = 0;
            }
        }
    }

    /// The differential l_1 as a matrix.
    pub fn l1_matrix(&self) -> F2Matrix {
        let mut entries = Vec::new();
        if let Some(table) = self.ops.get(&1) {
            for (args, out) in table {
                for row in out.iter_ones() {
                    entries.push((row, args[0] as usize));
                }
            }
        }
        F2Matrix::from_entries(self.dim(), self.dim(), entries)
    }

    /// Largest arity with a stored (nonzero) operation.
    pub fn max_arity(&self) -> usize {
        self.ops.iter().rev().find(|(_, t)| !t.is_empty()).map_or(0, |(&n, _)| n)
    }
}

/// An L-infinity module over a fixed algebra: `ops[n][args]` is the matrix
/// of k_n(args; -) on the carrier, with `args` a non-decreasing tuple of
/// n-1 algebra basis indices. `ops[1][[]]` is the module differential.
#[derive(Debug, Clone)]
pub struct LInftyModuleOps {
    pub algebra: LInftyAlgebraOps,
    pub dim: usize,
    /// Cohomological degree of each carrier basis vector; used only by the
    /// optional grading validation.
    pub r_grading: Vec<i64>,
    pub ops: BTreeMap<usize, BTreeMap<Vec<u8>, F2Matrix>>,
}

impl LInftyModuleOps {
    pub fn new(algebra: LInftyAlgebraOps, dim: usize, r_grading: Vec<i64>) -> Self {
        assert_eq!(r_grading.len(), dim);
        LInftyModuleOps { algebra, dim, r_grading, ops: BTreeMap::new() }
    }

    pub fn insert(&mut self, n: usize, args: Vec<u8>, matrix: F2Matrix) -> Result<()> {
        if args.len() + 1 != n {
            return Err(Error::MalformedInput(format!(
                "k_{n} takes {} algebra arguments, got {}",
                n - 1,
                args.len()
            )));
        }
        if matrix.nrows() != self.dim || matrix.ncols() != self.dim {
            return Err(Error::MalformedInput(format!(
                "k_{n} matrix is {}x{}, carrier has dimension {}",
                matrix.nrows(), matrix.ncols(), self.dim
            )));
        }
        let key = sorted_key(&args);
        if matrix.is_zero() {
            if let Some(table) = self.ops.get_mut(&n) {
                table.remove(&key);
                if table.is_empty() {
                    self.ops.remove(&n);
                }
            }
        } else {
            self.ops.entry(n).or_default().insert(key, matrix);
        }
        Ok(())
    }

    /// k_{args.len()+1} evaluated on basis indices (any order).
    pub fn k(&self, args: &[u8]) -> F2Matrix {
        self.ops
            .get(&(args.len() + 1))
            .and_then(|table| table.get(&sorted_key(args)))
            .cloned()
            .unwrap_or_else(|| F2Matrix::zeros(self.dim, self.dim))
    }

    pub fn k_mixed(&self, head: &F2Vec, tail: &[u8]) -> F2Matrix {
        let mut out = F2Matrix::zeros(self.dim, self.dim);
        let mut args = Vec::with_capacity(tail.len() + 1);
        for b in head.iter_ones() {
            args.clear();
            args.push(b as u8);
            args.extend_from_slice(tail);
            out = out.add(&self.k(&args));
        }
        out
    }

    /// Full multilinear evaluation on vector algebra arguments.
    pub fn k_vecs(&self, vecs: &[F2Vec]) -> F2Matrix {
        let n = vecs.len();
        let mut out = F2Matrix::zeros(self.dim, self.dim);
        let supports: Vec<Vec<usize>> = vecs.iter().map(|v| v.iter_ones().collect()).collect();
        if supports.iter().any(|s| s.is_empty()) {
            return out;
        }
        let mut cursor = vec![0usize; n];
        loop {
            let args: Vec<u8> = cursor.iter().zip(&supports).map(|(&c, s)| s[c] as u8).collect();
            out = out.add(&self.k(&args));
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cursor[i] += 1;
                if cursor[i] < supports[i].len() {
                    break;
                }
                cursor[i] = 0;
            }
        }
    }

    pub fn differential(&self) -> F2Matrix {
        self.k(&[])
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().rev().find(|(_, t)| !t.is_empty()).map_or(0, |(&n, _)| n)
    }

    /// Check that every stored operation is homogeneous: each entry of
    /// k_n(args) must shift the carrier grading by (2 - n) + sum deg(args).
    pub fn validate_grading(&self) -> Result<()> {
        for (&n, table) in &self.ops {
            for (args, matrix) in table {
                let shift: i64 = args.iter().map(|&a| self.algebra.degree[a as usize]).sum::<i64>()
                    + 2
                    - n as i64;
                for (row, col) in matrix.entries() {
                    if self.r_grading[row] - self.r_grading[col] != shift {
                        return Err(Error::GradingLeak(format!(
                            "k_{n}{args:?} entry ({row},{col}) shifts degree by {}, expected {shift}",
                            self.r_grading[row] - self.r_grading[col]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// An L-infinity algebra morphism given by component tables
/// `terms[n][args] = f_n(args)`, a vector in the target.
#[derive(Debug, Clone)]
pub struct LInftyMorphism {
    pub source: LInftyAlgebraOps,
    pub target: LInftyAlgebraOps,
    pub terms: BTreeMap<usize, BTreeMap<Vec<u8>, F2Vec>>,
}

impl LInftyMorphism {
    pub fn new(source: LInftyAlgebraOps, target: LInftyAlgebraOps) -> Self {
        LInftyMorphism { source, target, terms: BTreeMap::new() }
    }

    /// The identity morphism of an algebra.
    pub fn identity(alg: &LInftyAlgebraOps) -> Self {
        let mut m = Self::new(alg.clone(), alg.clone());
        for b in 0..alg.dim() {
            m.insert(1, vec![b as u8], F2Vec::from_indices(alg.dim(), &[b])).unwrap();
        }
        m
    }

    /// Insert f_n(args) = out, enforcing |out| = sum |args| + (1 - n).
    pub fn insert(&mut self, n: usize, args: Vec<u8>, out: F2Vec) -> Result<()> {
        if args.len() != n {
            return Err(Error::MalformedInput(format!(
                "f_{n} takes {n} arguments, got {}",
                args.len()
            )));
        }
        let key = sorted_key(&args);
        let expected: i64 =
            key.iter().map(|&a| self.source.degree[a as usize]).sum::<i64>() + 1 - n as i64;
        for b in out.iter_ones() {
            if self.target.degree[b] != expected {
                return Err(Error::MalformedInput(format!(
                    "f_{n}{key:?} output {} has degree {}, expected {expected}",
                    self.target.basis[b], self.target.degree[b]
                )));
            }
        }
        if out.is_zero() {
            if let Some(table) = self.terms.get_mut(&n) {
                table.remove(&key);
                if table.is_empty() {
                    self.terms.remove(&n);
                }
            }
        } else {
            self.terms.entry(n).or_default().insert(key, out);
        }
        Ok(())
    }

    pub fn term(&self, args: &[u8]) -> F2Vec {
        self.terms
            .get(&args.len())
            .and_then(|table| table.get(&sorted_key(args)))
            .cloned()
            .unwrap_or_else(|| F2Vec::zeros(self.target.dim()))
    }

    pub fn term_mixed(&self, head: &F2Vec, tail: &[u8]) -> F2Vec {
        let mut out = F2Vec::zeros(self.target.dim());
        let mut args = Vec::with_capacity(tail.len() + 1);
        for b in head.iter_ones() {
            args.clear();
            args.push(b as u8);
            args.extend_from_slice(tail);
            out.xor_assign(&self.term(&args));
        }
        out
    }
}

/// A morphism of L-infinity modules over one algebra:
/// `terms[n][args] = h_n(args; -)` as a target_dim x source_dim matrix over
/// n-1 algebra basis indices.
#[derive(Debug, Clone)]
pub struct ModuleMorphism {
    pub algebra: LInftyAlgebraOps,
    pub source_dim: usize,
    pub target_dim: usize,
    pub terms: BTreeMap<usize, BTreeMap<Vec<u8>, F2Matrix>>,
}

impl ModuleMorphism {
    pub fn new(algebra: LInftyAlgebraOps, source_dim: usize, target_dim: usize) -> Self {
        ModuleMorphism { algebra, source_dim, target_dim, terms: BTreeMap::new() }
    }

    pub fn insert(&mut self, n: usize, args: Vec<u8>, matrix: F2Matrix) -> Result<()> {
        if args.len() + 1 != n {
            return Err(Error::MalformedInput(format!(
                "h_{n} takes {} algebra arguments, got {}",
                n - 1,
                args.len()
            )));
        }
        if matrix.nrows() != self.target_dim || matrix.ncols() != self.source_dim {
            return Err(Error::MalformedInput(format!(
                "h_{n} matrix is {}x{}, expected {}x{}",
                matrix.nrows(), matrix.ncols(), self.target_dim, self.source_dim
            )));
        }
        let key = sorted_key(&args);
        if matrix.is_zero() {
            if let Some(table) = self.terms.get_mut(&n) {
                table.remove(&key);
                if table.is_empty() {
                    self.terms.remove(&n);
                }
            }
        } else {
            self.terms.entry(n).or_default().insert(key, matrix);
        }
        Ok(())
    }

    pub fn h(&self, args: &[u8]) -> F2Matrix {
        self.terms
            .get(&(args.len() + 1))
            .and_then(|table| table.get(&sorted_key(args)))
            .cloned()
            .unwrap_or_else(|| F2Matrix::zeros(self.target_dim, self.source_dim))
    }

    pub fn h_mixed(&self, head: &F2Vec, tail: &[u8]) -> F2Matrix {
        let mut out = F2Matrix::zeros(self.target_dim, self.source_dim);
        let mut args = Vec::with_capacity(tail.len() + 1);
        for b in head.iter_ones() {
            args.clear();
            args.push(b as u8);
            args.extend_from_slice(tail);
            out = out.add(&self.h(&args));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{builtin_algebra, dg_contraction, BuiltinAlgebra};

    fn dg_ops() -> LInftyAlgebraOps {
        let c = dg_contraction();
        LInftyAlgebraOps::strict_from_lie(&c.big, Some(&c.differential)).unwrap()
    }

    #[test]
    fn strict_algebra_reproduces_bracket_and_differential() {
        let alg = dg_ops();
        let big = builtin_algebra(BuiltinAlgebra::Sl2WedgeDg);
        let (e, f, h) = (0u8, 1u8, 2);
        assert_eq!(alg.op(2, &[e, f]).iter_ones().collect::<Vec<_>>(), vec![h as usize]);
        assert_eq!(alg.op(2, &[f, e]), alg.op(2, &[e, f]));
        assert_eq!(alg.l1_matrix(), big.ad(big.index_of("d").unwrap()));
        assert_eq!(alg.max_arity(), 2);
    }

    #[test]
    fn degree_discipline_is_enforced() {
        let mut alg = dg_ops();
        // l2(e, f) has degree 0, x has degree 2: must be rejected
        let x = alg.basis.iter().position(|b| b == "x").unwrap();
        let bad = F2Vec::from_indices(alg.dim(), &[x]);
        assert!(alg.insert(2, vec![0, 1], bad).is_err());
    }

    #[test]
    fn mixed_and_vector_evaluation_are_multilinear() {
        let alg = dg_ops();
        let dim = alg.dim();
        let (e, f, v2, vm2) = (0u8, 1u8, 3u8, 4u8);
        // (e + v2) bracket (f + v-2) = h + vt0 + vt0 + x = h + x
        let a = F2Vec::from_indices(dim, &[e as usize, v2 as usize]);
        let b = F2Vec::from_indices(dim, &[f as usize, vm2 as usize]);
        let mut expected = alg.op(2, &[e, f]);
        expected.xor_assign(&alg.op(2, &[e, vm2]));
        expected.xor_assign(&alg.op(2, &[v2, f]));
        expected.xor_assign(&alg.op(2, &[v2, vm2]));
        assert_eq!(alg.op_vecs(&[a.clone(), b.clone()]), expected);
        assert_eq!(alg.op_mixed(2, &a, &[f]), {
            let mut v = alg.op(2, &[e, f]);
            v.xor_assign(&alg.op(2, &[v2, f]));
            v
        });
        assert_eq!(b.iter_ones().count(), 2);
    }

    #[test]
    fn module_tables_store_by_sorted_key() {
        let alg = dg_ops();
        let dim = 3;
        let mut module = LInftyModuleOps::new(alg, dim, vec![0, 1, 2]);
        let m = F2Matrix::from_entries(dim, dim, vec![(1, 0)]);
        module.insert(3, vec![4, 3], m.clone()).unwrap();
        assert_eq!(module.k(&[3, 4]), m);
        assert_eq!(module.k(&[4, 3]), m);
        assert!(module.k(&[3, 3]).is_zero());
        // degree check: k_3(v2, v-2) should shift by (2-3)+1+1 = 1; entry
        // (1,0) shifts by 1, so validation passes
        module.validate_grading().unwrap();
        // a degree-0 entry for the same arguments leaks
        let mut bad = module.clone();
        bad.insert(3, vec![3, 4], F2Matrix::identity(dim)).unwrap();
        assert!(bad.validate_grading().is_err());
    }

    #[test]
    fn identity_morphism_is_degreewise_identity() {
        let alg = dg_ops();
        let id = LInftyMorphism::identity(&alg);
        for b in 0..alg.dim() as u8 {
            assert_eq!(
                id.term(&[b]).iter_ones().collect::<Vec<_>>(),
                vec![b as usize]
            );
        }
        assert!(id.term(&[0, 1]).is_zero());
    }
}
