//! Graded quotient rings A = S/I of a weighted polynomial ring S.

use std::sync::{Arc, OnceLock};

use crate::error::{precondition, validation, Result};
use crate::field::Field;
use crate::gb::Gb;
use crate::hilbert::HilbertSeries;
use crate::mono::{ModuleOrder, MonomialOrder};
use crate::poly::{Poly, PolyRing};
use crate::vector::{FreeCtx, Term, Vector};

/// Module computations always use position-over-term so that syzygies can be
/// read off by elimination.
pub const MODULE_ORDER: ModuleOrder = ModuleOrder::PositionOverTerm;

#[derive(Debug)]
pub struct GradedRing<F: Field> {
    poly: Arc<PolyRing<F>>,
    ideal: Vec<Poly<F>>,
    gb: Gb<F>,
    ambient: OnceLock<Arc<GradedRing<F>>>,
    series: OnceLock<HilbertSeries>,
}

impl<F: Field> GradedRing<F> {
    /// S/I for homogeneous generators of I; stores minimal generators and a GB.
    pub fn new(poly: Arc<PolyRing<F>>, gens: Vec<Poly<F>>) -> Result<Arc<Self>> {
        for g in &gens {
            if !g.is_homogeneous() {
                return Err(validation(format!(
                    "ideal generator `{}` is not homogeneous",
                    poly.render(g)
                )));
            }
            if g.as_constant().is_some() {
                return Err(validation(format!("ideal generator `{}` is a unit", poly.render(g))));
            }
        }
        let shifts = vec![0];
        let ctx = FreeCtx::new(&poly, MODULE_ORDER, &shifts);
        let vecs: Vec<Vector<F>> = gens.iter().map(|g| ctx.from_poly_at(g, 0)).collect();
        let run = Gb::compute(poly.clone(), MODULE_ORDER, shifts.clone(), vec![], vecs)?;
        let ideal = gens
            .iter()
            .zip(&run.new_generators)
            .filter_map(|(g, n)| n.as_ref().map(|_| g.clone()))
            .collect();
        Ok(Arc::new(GradedRing {
            poly,
            ideal,
            gb: run.gb,
            ambient: OnceLock::new(),
            series: OnceLock::new(),
        }))
    }

    pub fn polynomial(poly: Arc<PolyRing<F>>) -> Arc<Self> {
        GradedRing::new(poly, vec![]).expect("zero ideal")
    }

    /// A(m): the cone over the rational normal curve of degree m, cut out by the
    /// 2×2 minors of the Hankel matrix [[z0..z(m-1)], [z1..zm]].
    pub fn veronese(field: F, m: usize) -> Result<Arc<Self>> {
        if m < 1 {
            return Err(validation("A(m) needs m >= 1"));
        }
        let names: Vec<String> = (0..=m).map(|i| format!("z{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let poly = Arc::new(PolyRing::standard(field, &refs));
        let z = |i: usize| poly.var(i);
        let mut gens = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                gens.push(poly.sub(&poly.mul(&z(i), &z(j + 1)), &poly.mul(&z(i + 1), &z(j))));
            }
        }
        GradedRing::new(poly, gens)
    }

    pub fn poly(&self) -> &Arc<PolyRing<F>> {
        &self.poly
    }
    pub fn field(&self) -> &F {
        self.poly.field()
    }
    pub fn nvars(&self) -> usize {
        self.poly.nvars()
    }
    pub fn weights(&self) -> &[i32] {
        self.poly.weights()
    }
    /// Minimal generators of the defining ideal.
    pub fn ideal(&self) -> &[Poly<F>] {
        &self.ideal
    }
    pub fn ideal_gb(&self) -> &Gb<F> {
        &self.gb
    }
    pub fn is_polynomial(&self) -> bool {
        self.ideal.is_empty()
    }
    /// Sum of the variable degrees.
    pub fn sigma(&self) -> i32 {
        self.weights().iter().sum()
    }

    /// The ambient polynomial ring S as a graded ring.
    pub fn ambient(&self) -> Arc<GradedRing<F>> {
        self.ambient
            .get_or_init(|| GradedRing::polynomial(self.poly.clone()))
            .clone()
    }

    /// A/(extra) over the same polynomial ring.
    pub fn quotient(&self, extra: &[Poly<F>]) -> Result<Arc<Self>> {
        let mut gens = self.ideal.clone();
        gens.extend(extra.iter().cloned());
        GradedRing::new(self.poly.clone(), gens)
    }

    /// True when both rings have the same ambient ring and the same ideal.
    pub fn same_as(&self, other: &GradedRing<F>) -> bool {
        self.poly.same_shape(&other.poly) && self.gb.elems() == other.gb.elems()
    }

    pub fn reduce(&self, p: &Poly<F>) -> Poly<F> {
        if self.ideal.is_empty() {
            return p.clone();
        }
        let shifts = [0];
        let ctx = FreeCtx::new(&self.poly, MODULE_ORDER, &shifts);
        let v = self.gb.reduce(&ctx.from_poly_at(p, 0));
        ctx.to_polys(&v, 1).pop().unwrap()
    }

    pub fn is_zero(&self, p: &Poly<F>) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn mul(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        self.reduce(&self.poly.mul(a, b))
    }

    /// Normal form of a vector modulo I in every component.
    pub fn reduce_vec(&self, v: &Vector<F>) -> Vector<F> {
        if self.ideal.is_empty() || v.is_zero() {
            return v.clone();
        }
        let mut terms: Vec<Term<F>> = Vec::with_capacity(v.len());
        let mut start = 0;
        while start < v.terms.len() {
            let c = v.terms[start].comp;
            let mut end = start;
            while end < v.terms.len() && v.terms[end].comp == c {
                end += 1;
            }
            let part = Vector {
                terms: v.terms[start..end]
                    .iter()
                    .map(|t| Term {
                        mono: t.mono.clone(),
                        comp: 0,
                        coef: t.coef.clone(),
                    })
                    .collect(),
            };
            let r = self.gb.reduce(&part);
            terms.extend(r.terms.into_iter().map(|t| Term { comp: c, ..t }));
            start = end;
        }
        // components were visited in decreasing POT order, so `terms` stays sorted
        Vector { terms }
    }

    /// GB(I)·e_c for every component c < rank: a Gröbner basis of I·S^rank.
    pub fn ideal_seeds(&self, rank: usize) -> Vec<Vector<F>> {
        let mut out = Vec::with_capacity(rank * self.gb.elems().len());
        for c in 0..rank as u32 {
            for g in self.gb.elems() {
                out.push(Vector {
                    terms: g.terms.iter().map(|t| Term { comp: c, ..t.clone() }).collect(),
                });
            }
        }
        out
    }

    pub fn hilbert_series(&self) -> &HilbertSeries {
        self.series
            .get_or_init(|| HilbertSeries::of_monomial_module(self.weights(), &[0], &[self.gb.leading_monomials(0)]))
    }

    pub fn krull_dim(&self) -> i32 {
        self.hilbert_series().krull_dim()
    }

    /// k-dimension when A is Artinian.
    pub fn vector_dim(&self) -> Option<i64> {
        self.hilbert_series().total_length()
    }

    pub fn render_ideal(&self) -> String {
        let parts: Vec<String> = self.ideal.iter().map(|g| self.poly.render(g)).collect();
        format!("({})", parts.join(", "))
    }

    pub fn describe(&self) -> String {
        let vars: Vec<String> = self
            .poly
            .names()
            .iter()
            .zip(self.weights())
            .map(|(n, w)| if *w == 1 { n.clone() } else { format!("{n}:{w}") })
            .collect();
        if self.ideal.is_empty() {
            format!("{}[{}]", self.field().spec(), vars.join(","))
        } else {
            format!("{}[{}]/{}", self.field().spec(), vars.join(","), self.render_ideal())
        }
    }

    /// Maps a polynomial of this ring into `target`, sending variable i to
    /// variable `positions[i]` there.
    pub fn embed_into(&self, target: &GradedRing<F>, p: &Poly<F>, positions: &[usize]) -> Poly<F> {
        target.reduce(&target.poly.embed_from(p, positions))
    }
}

/// A polynomial ring with extra variables appended.
pub fn adjoin_vars<F: Field>(base: &PolyRing<F>, names: &[&str], weights: &[i32]) -> Result<Arc<PolyRing<F>>> {
    let mut all: Vec<String> = base.names().to_vec();
    all.extend(names.iter().map(|s| s.to_string()));
    let mut w = base.weights().to_vec();
    w.extend_from_slice(weights);
    let order = match base.order() {
        MonomialOrder::Weighted(v) => {
            let mut v = v.clone();
            v.extend_from_slice(weights);
            MonomialOrder::Weighted(v)
        }
        o => o.clone(),
    };
    Ok(Arc::new(PolyRing::new(base.field().clone(), all, w, order)?))
}

/// The same variables with new degrees.
pub fn regrade<F: Field>(base: &PolyRing<F>, weights: Vec<i32>) -> Result<Arc<PolyRing<F>>> {
    let order = match base.order() {
        MonomialOrder::Weighted(_) => MonomialOrder::Weighted(weights.clone()),
        o => o.clone(),
    };
    Ok(Arc::new(PolyRing::new(
        base.field().clone(),
        base.names().to_vec(),
        weights,
        order,
    )?))
}

/// A ⊗_k R for two quotients of disjoint variable sets: returns the tensor ring
/// and the variable positions of each factor.
pub fn tensor_rings<F: Field>(
    a: &GradedRing<F>,
    r: &GradedRing<F>,
) -> Result<(Arc<GradedRing<F>>, Vec<usize>, Vec<usize>)> {
    for n in r.poly().names() {
        if a.poly().var_index(n).is_some() {
            return Err(validation(format!("variable `{n}` occurs in both tensor factors")));
        }
    }
    let names: Vec<&str> = r.poly().names().iter().map(|s| s.as_str()).collect();
    let poly = adjoin_vars(a.poly(), &names, r.weights())?;
    let pa: Vec<usize> = (0..a.nvars()).collect();
    let pr: Vec<usize> = (a.nvars()..a.nvars() + r.nvars()).collect();
    let mut gens: Vec<Poly<F>> = a.ideal().iter().map(|g| poly.embed_from(g, &pa)).collect();
    gens.extend(r.ideal().iter().map(|g| poly.embed_from(g, &pr)));
    Ok((GradedRing::new(poly, gens)?, pa, pr))
}

/// Checks the Cohen–Macaulay property of the ring itself (depth A = dim A).
pub fn require_cm<F: Field>(ring: &Arc<GradedRing<F>>) -> Result<()> {
    let m = crate::module::Module::free(ring.clone(), vec![0]);
    let depth = crate::resolve::depth(&m)?;
    if depth != ring.krull_dim() {
        return Err(precondition(format!(
            "ring {} is not Cohen-Macaulay (depth {depth}, dim {})",
            ring.describe(),
            ring.krull_dim()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn veronese_two_is_the_quadric_cone() {
        let a = GradedRing::veronese(PrimeField::default(), 2).unwrap();
        assert_eq!(a.ideal().len(), 1);
        assert_eq!(a.krull_dim(), 2);
        assert_eq!(a.hilbert_series().dims(0, 3), vec![1, 3, 5, 7]);
    }

    #[test]
    fn veronese_three_has_three_minors() {
        let a = GradedRing::veronese(PrimeField::default(), 3).unwrap();
        assert_eq!(a.ideal().len(), 3);
        assert_eq!(a.krull_dim(), 2);
        // A(3)_d = S^{3d}(k^2): dimension 3d + 1
        assert_eq!(a.hilbert_series().dims(0, 4), vec![1, 4, 7, 10, 13]);
    }

    #[test]
    fn reduction_uses_the_relation() {
        let a = GradedRing::veronese(PrimeField::default(), 2).unwrap();
        let p = a.poly();
        let z1_3_z2 = p.mul(&p.pow(&p.var(1), 3), &p.var(2));
        let nf = a.reduce(&z1_3_z2);
        let expect = p.mul(&p.mul(&p.var(0), &p.var(1)), &p.pow(&p.var(2), 2));
        assert_eq!(nf, expect);
    }
}
