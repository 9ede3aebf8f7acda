//! Syzygies relative to a presented module.

use crate::error::Result;
use crate::field::Field;
use crate::gb::Gb;
use crate::module::Module;
use crate::ring::MODULE_ORDER;
use crate::vector::{FreeCtx, Term, Vector};

/// Minimal generators (modulo I) of {a ∈ S^k : Σ a_j g_j = 0 in `target`}, where
/// g_j has degree `gen_degs[j]`.
pub fn syzygies_into<F: Field>(target: &Module<F>, gens: &[Vector<F>], gen_degs: &[i32]) -> Result<Vec<Vector<F>>> {
    let ring = target.ring();
    let poly = ring.poly();
    let r = target.rank();
    let k = gens.len();
    if k == 0 {
        return Ok(vec![]);
    }
    let mut shifts = target.degs().to_vec();
    shifts.extend_from_slice(gen_degs);
    let big = FreeCtx::new(poly, MODULE_ORDER, &shifts);
    let tag_ctx = FreeCtx::new(poly, MODULE_ORDER, gen_degs);
    let mut seeds = target.gb().elems().to_vec();
    seeds.extend(ring.ideal_seeds(k).iter().map(|v| tag_ctx.offset(v, r as u32)));
    let one = poly.field().one();
    let inputs: Vec<Vector<F>> = gens
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let mut terms = g.terms.clone();
            terms.push(Term {
                mono: poly.one_mono(),
                comp: (r + j) as u32,
                coef: one.clone(),
            });
            big.from_terms(terms)
        })
        .collect();
    let run = Gb::compute(poly.clone(), MODULE_ORDER, shifts.clone(), seeds, inputs)?;
    let found: Vec<Vector<F>> = run
        .gb
        .elems()
        .iter()
        .filter(|v| v.terms[0].comp as usize >= r)
        .map(|v| {
            let tail = Vector {
                terms: v.terms.iter().filter(|t| t.comp as usize >= r).cloned().collect(),
            };
            big.remap(&tail, |c| Some(c - r as u32))
        })
        .map(|v| ring.reduce_vec(&v))
        .filter(|v| !v.is_zero())
        .collect();
    minimalize(target, gen_degs, found)
}

/// Drops redundant generators of a submodule of the free module with degrees
/// `degs` over the ring of `like`, modulo I.
pub(crate) fn minimalize<F: Field>(like: &Module<F>, degs: &[i32], vecs: Vec<Vector<F>>) -> Result<Vec<Vector<F>>> {
    let ring = like.ring();
    let run = Gb::compute(
        ring.poly().clone(),
        MODULE_ORDER,
        degs.to_vec(),
        ring.ideal_seeds(degs.len()),
        vecs.clone(),
    )?;
    Ok(vecs
        .into_iter()
        .zip(run.new_generators)
        .filter_map(|(v, g)| g.map(|_| v))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::poly::PolyRing;
    use crate::ring::GradedRing;
    use std::sync::Arc;

    #[test]
    fn koszul_syzygies_of_two_variables() {
        let poly = Arc::new(PolyRing::standard(PrimeField::default(), &["x", "y"]));
        let ring = GradedRing::polynomial(poly.clone());
        let a = Module::free(ring.clone(), vec![0]);
        let ctx = a.ctx();
        let gens = vec![ctx.from_poly_at(&poly.var(0), 0), ctx.from_poly_at(&poly.var(1), 0)];
        let syz = syzygies_into(&a, &gens, &[1, 1]).unwrap();
        assert_eq!(syz.len(), 1);
        let degs = [1, 1];
        let c2 = FreeCtx::new(&poly, MODULE_ORDER, &degs);
        assert_eq!(c2.degree(&syz[0]), Some(2));
    }
}
