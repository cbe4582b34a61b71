//! Finite-dimensional graded Lie algebras over F2 and the specific family
//! acting on annular Khovanov complexes.
//!
//! Over F2 all Koszul signs vanish, so a graded Lie bracket is a symmetric
//! bilinear map satisfying the Jacobi identity
//!   [a,[b,c]] + [[a,b],c] + [b,[a,c]] = 0.
//! Degrees are cohomological: brackets add degrees, differentials raise
//! degree by one.
//!
//! Four algebras are built in:
//!   - `sl2`: e, f, h in degree 0 with [e,f] = h (and [h,-] = 0 mod 2);
//!   - `sl2wedge`: sl2 extended by v2, v-2, v0 in degree 1 with
//!     [e,v-2] = [f,v2] = v0;
//!   - `sl2wedge_dg`: a differential graded enlargement with extra degree-1
//!     elements d, D, the degree-2 element x, brackets [v2,v-2] = [d,D] = x,
//!     v0 renamed vt0, and differential ad_d (so D is a primitive for x);
//!   - `h_sl2wedge_dg`: the homology of the previous one, which is sl2wedge
//!     with a central degree-1 element d adjoined.

use crate::error::{Error, Result};
use crate::homology::{check_side_conditions, F2Matrix, F2Vec};

/// A graded Lie algebra over F2 on a finite named basis.
#[derive(Debug, Clone)]
pub struct LieSuperalgebra {
    pub name: String,
    pub basis: Vec<String>,
    pub degree: Vec<i64>,
    /// bracket[i][j] = [x_i, x_j]; symmetric because signs vanish mod 2.
    bracket: Vec<Vec<F2Vec>>,
}

impl LieSuperalgebra {
    /// Build an algebra from the nonzero brackets, given as
    /// (left basis name, right basis name, output basis name) triples.
    /// Symmetric completion is automatic; degrees must be additive.
    pub fn new(
        name: &str,
        basis: &[&str],
        degree: &[i64],
        nonzero: &[(&str, &str, &str)],
    ) -> Result<Self> {
        let dim = basis.len();
        if degree.len() != dim {
            return Err(Error::MalformedInput(format!(
                "{name}: {} degrees for {dim} basis elements",
                degree.len()
            )));
        }
        let mut alg = LieSuperalgebra {
            name: name.to_string(),
            basis: basis.iter().map(|s| s.to_string()).collect(),
            degree: degree.to_vec(),
            bracket: vec![vec![F2Vec::zeros(dim); dim]; dim],
        };
        for &(a, b, out) in nonzero {
            let (i, j, o) = (alg.require(a)?, alg.require(b)?, alg.require(out)?);
            if alg.degree[i] + alg.degree[j] != alg.degree[o] {
                return Err(Error::MalformedInput(format!(
                    "{name}: [{a},{b}] = {out} violates degree additivity"
                )));
            }
            alg.bracket[i][j].flip(o);
            if i != j {
                alg.bracket[j][i].flip(o);
            }
        }
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b == name)
    }

    fn require(&self, name: &str) -> Result<usize> {
        self.index_of(name)
            .ok_or_else(|| Error::MalformedInput(format!("{}: no basis element {name}", self.name)))
    }

    pub fn bracket_basis(&self, i: usize, j: usize) -> &F2Vec {
        &self.bracket[i][j]
    }

    pub fn bracket_vec(&self, a: &F2Vec, b: &F2Vec) -> F2Vec {
        let mut out = F2Vec::zeros(self.dim());
        for i in a.iter_ones() {
            for j in b.iter_ones() {
                out.xor_assign(&self.bracket[i][j]);
            }
        }
        out
    }

    /// The adjoint action of basis element i as a matrix.
    pub fn ad(&self, i: usize) -> F2Matrix {
        let mut entries = Vec::new();
        for j in 0..self.dim() {
            for row in self.bracket[i][j].iter_ones() {
                entries.push((row, j));
            }
        }
        F2Matrix::from_entries(self.dim(), self.dim(), entries)
    }

    /// All basis triples (i <= j <= k) where the Jacobi identity fails.
    pub fn jacobi_violations(&self) -> Vec<(usize, usize, usize)> {
        let mut bad = Vec::new();
        for i in 0..self.dim() {
            for j in i..self.dim() {
                for k in j..self.dim() {
                    let ei = F2Vec::from_indices(self.dim(), &[i]);
                    let ej = F2Vec::from_indices(self.dim(), &[j]);
                    let ek = F2Vec::from_indices(self.dim(), &[k]);
                    let mut defect = self.bracket_vec(&ei, &self.bracket_vec(&ej, &ek));
                    defect.xor_assign(&self.bracket_vec(&self.bracket_vec(&ei, &ej), &ek));
                    defect.xor_assign(&self.bracket_vec(&ej, &self.bracket_vec(&ei, &ek)));
                    if !defect.is_zero() {
                        bad.push((i, j, k));
                    }
                }
            }
        }
        bad
    }

    /// The bracket table as JSON: the named basis with degrees, and every
    /// nonzero bracket [a, b] for a <= b as a list of output basis names.
    pub fn bracket_table(&self) -> serde_json::Value {
        let basis: Vec<serde_json::Value> = self
            .basis
            .iter()
            .zip(&self.degree)
            .map(|(name, &degree)| serde_json::json!({ "name": name, "degree": degree }))
            .collect();
        let mut brackets = Vec::new();
        for i in 0..self.dim() {
            for j in i..self.dim() {
                let out = self.bracket_basis(i, j);
                if out.is_zero() {
                    continue;
                }
                let names: Vec<&str> = out.iter_ones().map(|o| self.basis[o].as_str()).collect();
                brackets.push(serde_json::json!([self.basis[i], self.basis[j], names]));
            }
        }
        serde_json::json!({ "name": self.name, "basis": basis, "brackets": brackets })
    }
}

/// The built-in algebras.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinAlgebra {
    Sl2,
    Sl2Wedge,
    Sl2WedgeDg,
    Sl2WedgeDgHomology,
}

impl BuiltinAlgebra {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "sl2" => Some(Self::Sl2),
            "sl2wedge" => Some(Self::Sl2Wedge),
            "sl2wedge_dg" => Some(Self::Sl2WedgeDg),
            "h_sl2wedge_dg" => Some(Self::Sl2WedgeDgHomology),
            _ => None,
        }
    }
}

pub fn builtin_algebra(which: BuiltinAlgebra) -> LieSuperalgebra {
    let alg = match which {
        BuiltinAlgebra::Sl2 => LieSuperalgebra::new(
            "sl2",
            &["e", "f", "h"],
            &[0, 0, 0],
            &[("e", "f", "h")],
        ),
        BuiltinAlgebra::Sl2Wedge => LieSuperalgebra::new(
            "sl2wedge",
            &["e", "f", "h", "v2", "v-2", "v0"],
            &[0, 0, 0, 1, 1, 1],
            &[("e", "f", "h"), ("e", "v-2", "v0"), ("f", "v2", "v0")],
        ),
        BuiltinAlgebra::Sl2WedgeDg => LieSuperalgebra::new(
            "sl2wedge_dg",
            &["e", "f", "h", "v2", "v-2", "vt0", "d", "D", "x"],
            &[0, 0, 0, 1, 1, 1, 1, 1, 2],
            &[
                ("e", "f", "h"),
                ("e", "v-2", "vt0"),
                ("f", "v2", "vt0"),
                ("v2", "v-2", "x"),
                ("d", "D", "x"),
            ],
        ),
        BuiltinAlgebra::Sl2WedgeDgHomology => LieSuperalgebra::new(
            "h_sl2wedge_dg",
            &["e", "f", "h", "v2", "v-2", "v0", "d"],
            &[0, 0, 0, 1, 1, 1, 1],
            &[("e", "f", "h"), ("e", "v-2", "v0"), ("f", "v2", "v0")],
        ),
    };
    alg.expect("built-in bracket tables are degree-consistent")
}

/// A deformation retraction of `sl2wedge_dg` (with differential ad d) onto
/// its homology `h_sl2wedge_dg`, packaged as inclusion/projection/homotopy
/// matrices satisfying the standard side conditions.
#[derive(Debug, Clone)]
pub struct AlgebraContraction {
    pub big: LieSuperalgebra,
    pub small: LieSuperalgebra,
    /// Differential on the big algebra.
    pub differential: F2Matrix,
    /// dim(big) x dim(small) chain inclusion.
    pub inclusion: F2Matrix,
    /// dim(small) x dim(big) chain projection.
    pub projection: F2Matrix,
    /// Homotopy on the big algebra: id + inclusion . projection = Th + hT.
    pub homotopy: F2Matrix,
}

/// The canonical contraction: e, f, h, v2, v-2, vt0, d survive (vt0 is
/// called v0 downstairs), D and x cancel along ad d.
pub fn dg_contraction() -> AlgebraContraction {
    let big = builtin_algebra(BuiltinAlgebra::Sl2WedgeDg);
    let small = builtin_algebra(BuiltinAlgebra::Sl2WedgeDgHomology);
    let d_idx = big.index_of("d").unwrap();
    let differential = big.ad(d_idx);
    let cap_d = big.index_of("D").unwrap();
    let x = big.index_of("x").unwrap();
    let inclusion = F2Matrix::from_entries(
        big.dim(),
        small.dim(),
        (0..small.dim()).map(|j| (j, j)).collect::<Vec<_>>(),
    );
    let projection = inclusion.transpose();
    let homotopy = F2Matrix::from_entries(big.dim(), big.dim(), vec![(cap_d, x)]);
    debug_assert!(differential.mul(&differential).is_zero());
    check_side_conditions(&differential, &inclusion, &projection, &homotopy)
        .expect("canonical contraction satisfies the side conditions");
    AlgebraContraction { big, small, differential, inclusion, projection, homotopy }
}
