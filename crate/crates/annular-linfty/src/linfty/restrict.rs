//! Restriction of an L-infinity module along an L-infinity morphism.
//!
//! Given a module (M, k_n) over L and a morphism I: L' -> L, the same
//! carrier M becomes a module over L' with
//!
//!   k'_n(x_1, ..., x_{n-1}; m) =
//!     sum over non-decreasing compositions i_1 + ... + i_t = n-1 and
//!     ordered unshuffles tau of
//!       k_{t+1}(I_{i_1}(block_1), ..., I_{i_t}(block_t); m)
//!
//! and k'_1 = k_1 unchanged.

use crate::error::{Error, Result};
use crate::homology::F2Matrix;
use crate::linfty::check::sorted_tuples;
use crate::linfty::ops::{LInftyModuleOps, LInftyMorphism};
use crate::linfty::unshuffle::{sorted_compositions, sorted_unshuffles};
use rayon::prelude::*;

/// Pull the module structure back along `morphism`, whose target algebra
/// must be the algebra the module is defined over.
pub fn restrict_scalars(
    module: &LInftyModuleOps,
    morphism: &LInftyMorphism,
    n_max: usize,
) -> Result<LInftyModuleOps> {
    if morphism.target.basis != module.algebra.basis {
        return Err(Error::MalformedInput(format!(
            "morphism lands in {} but the module is over {}",
            morphism.target.name, module.algebra.name
        )));
    }
    let mut out = LInftyModuleOps::new(
        morphism.source.clone(),
        module.dim,
        module.r_grading.clone(),
    );
    out.insert(1, vec![], module.differential())?;

    for n in 2..=n_max {
        let tuples = sorted_tuples(morphism.source.dim(), n - 1);
        let computed: Vec<(Vec<u8>, F2Matrix)> = tuples
            .par_iter()
            .map(|args| {
                let mut acc = F2Matrix::zeros(module.dim, module.dim);
                for comp in sorted_compositions(n - 1) {
                    for tau in sorted_unshuffles(&comp) {
                        let mut vectors = Vec::with_capacity(comp.len());
                        let mut start = 0;
                        for &size in &comp {
                            let block: Vec<u8> =
                                tau[start..start + size].iter().map(|&s| args[s]).collect();
                            start += size;
                            vectors.push(morphism.term(&block));
                        }
                        acc = acc.add(&module.k_vecs(&vectors));
                    }
                }
                (args.clone(), acc)
            })
            .collect();
        for (args, acc) in computed {
            out.insert(n, args, acc)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{builtin_algebra, BuiltinAlgebra};
    use crate::linfty::check::check_module_relation;
    use crate::linfty::ops::LInftyAlgebraOps;

    fn adjoint_module(which: BuiltinAlgebra) -> LInftyModuleOps {
        let lie = builtin_algebra(which);
        let alg = LInftyAlgebraOps::strict_from_lie(&lie, None).unwrap();
        let mut module = LInftyModuleOps::new(alg, lie.dim(), lie.degree.clone());
        for a in 0..lie.dim() as u8 {
            module.insert(2, vec![a], lie.ad(a as usize)).unwrap();
        }
        module
    }

    #[test]
    fn restricting_along_the_identity_changes_nothing() {
        let module = adjoint_module(BuiltinAlgebra::Sl2Wedge);
        let ident = LInftyMorphism::identity(&module.algebra);
        let restricted = restrict_scalars(&module, &ident, 4).unwrap();
        assert_eq!(restricted.ops, module.ops);
    }

    #[test]
    fn restriction_along_a_strict_inclusion_is_composition() {
        // sl2 sits inside sl2wedge; restricting the adjoint module along the
        // inclusion gives k_2 = ad of the image and nothing in higher arity
        let sl2 = builtin_algebra(BuiltinAlgebra::Sl2);
        let wedge = builtin_algebra(BuiltinAlgebra::Sl2Wedge);
        let src = LInftyAlgebraOps::strict_from_lie(&sl2, None).unwrap();
        let module = adjoint_module(BuiltinAlgebra::Sl2Wedge);
        let mut inc = LInftyMorphism::new(src, module.algebra.clone());
        for (b, name) in sl2.basis.iter().enumerate() {
            let target = wedge.index_of(name).unwrap();
            let mut v = crate::homology::F2Vec::zeros(wedge.dim());
            v.set(target, true);
            inc.insert(1, vec![b as u8], v).unwrap();
        }
        let restricted = restrict_scalars(&module, &inc, 4).unwrap();
        assert_eq!(check_module_relation(&restricted, 4), vec![]);
        for a in 0..sl2.dim() as u8 {
            assert_eq!(restricted.k(&[a]), wedge.ad(a as usize));
        }
        assert!(restricted.ops.get(&3).map_or(true, |t| t.is_empty()));
        assert!(restricted.ops.get(&4).map_or(true, |t| t.is_empty()));
    }
}
