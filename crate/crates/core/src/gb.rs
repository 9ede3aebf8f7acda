//! Gröbner bases of homogeneous submodules of graded free modules.
//!
//! Buchberger's algorithm processed degree by degree (normal selection, which is
//! the sugar strategy on homogeneous input) with the Gebauer–Möller chain
//! criterion and the product criterion for single-component pairs. Inputs are
//! processed interleaved with pairs in increasing degree, so an input that reduces
//! to zero is exactly one lying in the submodule generated by its predecessors;
//! this yields minimal generators as a by-product.

use std::sync::Arc;

use crate::error::{validation, Result};
use crate::field::Field;
use crate::mono::{ModuleOrder, Mono};
use crate::poly::PolyRing;
use crate::vector::{FreeCtx, Term, Vector};

/// A reduced Gröbner basis together with the module it lives in.
#[derive(Clone, Debug)]
pub struct Gb<F: Field> {
    ring: Arc<PolyRing<F>>,
    order: ModuleOrder,
    shifts: Vec<i32>,
    elems: Vec<Vector<F>>,
    by_comp: Vec<Vec<usize>>,
}

/// Result of a run: the basis and, per input generator, its reduced form when it
/// was not in the submodule generated by earlier-degree (and earlier-listed) inputs.
pub struct GbRun<F: Field> {
    pub gb: Gb<F>,
    pub new_generators: Vec<Option<Vector<F>>>,
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    deg: i32,
}

fn find_divisor<F: Field>(elems: &[Vector<F>], by_comp: &[Vec<usize>], mono: &Mono, comp: u32) -> Option<usize> {
    by_comp
        .get(comp as usize)?
        .iter()
        .copied()
        .find(|&k| elems[k].terms[0].mono.divides(mono))
}

/// Full normal form of `v` against monic `elems`.
fn normal_form<F: Field>(
    ctx: &FreeCtx<'_, F>,
    elems: &[Vector<F>],
    by_comp: &[Vec<usize>],
    v: &Vector<F>,
    skip: Option<usize>,
) -> Vector<F> {
    let f = ctx.ring.field();
    let mut done: Vec<Term<F>> = Vec::new();
    let mut rem: Vec<Term<F>> = v.terms.clone();
    let mut start = 0;
    while start < rem.len() {
        let lead = &rem[start];
        let hit = match skip {
            None => find_divisor(elems, by_comp, &lead.mono, lead.comp),
            Some(s) => by_comp.get(lead.comp as usize).and_then(|list| {
                list.iter()
                    .copied()
                    .find(|&k| k != s && elems[k].terms[0].mono.divides(&lead.mono))
            }),
        };
        match hit {
            Some(k) => {
                let g = &elems[k];
                let q = lead.mono.div(&g.terms[0].mono).expect("divisor");
                let c = f.neg(&lead.coef);
                // the leading terms cancel; merge the rest
                rem = ctx.merge(&rem[start + 1..], &c, Some(&q), &g.terms[1..]);
                start = 0;
            }
            None => {
                done.push(rem[start].clone());
                start += 1;
            }
        }
    }
    Vector { terms: done }
}

impl<F: Field> Gb<F> {
    /// The zero submodule.
    pub fn empty(ring: Arc<PolyRing<F>>, order: ModuleOrder, shifts: Vec<i32>) -> Self {
        let rank = shifts.len();
        Gb {
            ring,
            order,
            shifts,
            elems: Vec::new(),
            by_comp: vec![Vec::new(); rank],
        }
    }

    /// Wraps vectors already known to form a reduced Gröbner basis.
    pub fn from_known(ring: Arc<PolyRing<F>>, order: ModuleOrder, shifts: Vec<i32>, elems: Vec<Vector<F>>) -> Self {
        let mut by_comp = vec![Vec::new(); shifts.len()];
        for (k, e) in elems.iter().enumerate() {
            by_comp[e.terms[0].comp as usize].push(k);
        }
        Gb {
            ring,
            order,
            shifts,
            elems,
            by_comp,
        }
    }

    /// Gröbner basis of the submodule generated by `seeds ∪ gens`, where `seeds`
    /// is already a Gröbner basis (its internal pairs are skipped).
    pub fn compute(
        ring: Arc<PolyRing<F>>,
        order: ModuleOrder,
        shifts: Vec<i32>,
        seeds: Vec<Vector<F>>,
        gens: Vec<Vector<F>>,
    ) -> Result<GbRun<F>> {
        let ctx = FreeCtx::new(&ring, order, &shifts);
        for (k, g) in seeds.iter().chain(gens.iter()).enumerate() {
            if let Some(c) = g.max_comp() {
                if c as usize >= shifts.len() {
                    return Err(validation(format!(
                        "generator {k} has component {c} outside a module of rank {}",
                        shifts.len()
                    )));
                }
            }
            if !ctx.is_homogeneous(g) {
                return Err(validation(format!(
                    "inhomogeneous generator {}",
                    ctx.render(g, shifts.len())
                )));
            }
        }
        let mut eng = Engine::new(ctx);
        for s in seeds {
            if !s.is_zero() {
                eng.push(ctx.make_monic(&s));
            }
        }
        let mut order_idx: Vec<usize> = (0..gens.len()).filter(|&k| !gens[k].is_zero()).collect();
        order_idx.sort_by_key(|&k| (ctx.degree(&gens[k]).unwrap(), k));
        let mut new_generators: Vec<Option<Vector<F>>> = vec![None; gens.len()];
        let mut next = 0;
        loop {
            let pair_deg = eng.pairs.iter().map(|p| p.deg).min();
            let in_deg = order_idx.get(next).map(|&k| ctx.degree(&gens[k]).unwrap());
            let d = match (pair_deg, in_deg) {
                (None, None) => break,
                (Some(a), None) => a,
                (None, Some(b)) => b,
                (Some(a), Some(b)) => a.min(b),
            };
            let (mut now, later): (Vec<Pair>, Vec<Pair>) = eng.pairs.drain(..).partition(|p| p.deg == d);
            eng.pairs = later;
            now.sort_by_key(|p| (p.i, p.j));
            for p in now {
                let s = eng.spoly(&p);
                let r = eng.reduce(&s);
                if !r.is_zero() {
                    let r = ctx.make_monic(&r);
                    eng.insert(r);
                }
            }
            while next < order_idx.len() {
                let k = order_idx[next];
                if ctx.degree(&gens[k]).unwrap() != d {
                    break;
                }
                next += 1;
                let r = eng.reduce(&gens[k]);
                if !r.is_zero() {
                    new_generators[k] = Some(r.clone());
                    eng.insert(ctx.make_monic(&r));
                }
            }
        }
        let gb = eng.finish();
        Ok(GbRun {
            gb: Gb::from_known(ring.clone(), order, shifts.clone(), gb),
            new_generators,
        })
    }

    pub fn ring(&self) -> &Arc<PolyRing<F>> {
        &self.ring
    }
    pub fn order(&self) -> ModuleOrder {
        self.order
    }
    pub fn shifts(&self) -> &[i32] {
        &self.shifts
    }
    pub fn rank(&self) -> usize {
        self.shifts.len()
    }
    pub fn elems(&self) -> &[Vector<F>] {
        &self.elems
    }
    pub fn ctx(&self) -> FreeCtx<'_, F> {
        FreeCtx::new(&self.ring, self.order, &self.shifts)
    }

    /// Normal form: no term is divisible by a leading term of the basis.
    pub fn reduce(&self, v: &Vector<F>) -> Vector<F> {
        normal_form(&self.ctx(), &self.elems, &self.by_comp, v, None)
    }

    pub fn contains(&self, v: &Vector<F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Leading monomials of basis elements in component `comp`.
    pub fn leading_monomials(&self, comp: usize) -> Vec<Mono> {
        self.by_comp[comp]
            .iter()
            .map(|&k| self.elems[k].terms[0].mono.clone())
            .collect()
    }

    /// True when `mono * e_comp` is a standard monomial.
    pub fn is_standard(&self, mono: &Mono, comp: u32) -> bool {
        find_divisor(&self.elems, &self.by_comp, mono, comp).is_none()
    }

    /// Same basis viewed in a module of larger rank (extra components are free).
    pub fn widen(&self, shifts: Vec<i32>) -> Self {
        assert!(shifts.len() >= self.shifts.len());
        Gb::from_known(self.ring.clone(), self.order, shifts, self.elems.clone())
    }
}

struct Engine<'a, F: Field> {
    ctx: FreeCtx<'a, F>,
    basis: Vec<Vector<F>>,
    by_comp: Vec<Vec<usize>>,
    single: Vec<bool>,
    pairs: Vec<Pair>,
}

impl<'a, F: Field> Engine<'a, F> {
    fn new(ctx: FreeCtx<'a, F>) -> Self {
        Engine {
            ctx,
            basis: Vec::new(),
            by_comp: vec![Vec::new(); ctx.shifts.len()],
            single: Vec::new(),
            pairs: Vec::new(),
        }
    }

    fn lt(&self, k: usize) -> &Term<F> {
        &self.basis[k].terms[0]
    }

    /// Adds a seed element without generating pairs against other seeds.
    fn push(&mut self, v: Vector<F>) {
        let k = self.basis.len();
        self.by_comp[v.terms[0].comp as usize].push(k);
        self.single.push(v.single_component());
        self.basis.push(v);
    }

    fn reduce(&self, v: &Vector<F>) -> Vector<F> {
        normal_form(&self.ctx, &self.basis, &self.by_comp, v, None)
    }

    fn spoly(&self, p: &Pair) -> Vector<F> {
        let f = self.ctx.ring.field();
        let gi = &self.basis[p.i];
        let gj = &self.basis[p.j];
        let qi = p.lcm.div(&gi.terms[0].mono).unwrap();
        let qj = p.lcm.div(&gj.terms[0].mono).unwrap();
        let a = self.ctx.mul_term(gi, &qi, &f.one());
        self.ctx.axpy(&a, &f.neg(&f.one()), Some(&qj), &gj.terms)
    }

    fn product_applicable(&self, i: usize, j: usize) -> bool {
        self.single[i] && self.single[j] && self.lt(i).mono.coprime(&self.lt(j).mono)
    }

    /// Gebauer–Möller update for a new element.
    fn insert(&mut self, h: Vector<F>) {
        let weights = self.ctx.ring.weights();
        let comp = h.terms[0].comp;
        let hk = self.basis.len();
        self.by_comp[comp as usize].push(hk);
        self.single.push(h.single_component());
        self.basis.push(h);
        let shift = self.ctx.shifts[comp as usize];
        let hm = self.lt(hk).mono.clone();

        let mut c: Vec<Pair> = self.by_comp[comp as usize]
            .iter()
            .copied()
            .filter(|&g| g != hk)
            .map(|g| {
                let lcm = hm.lcm(&self.lt(g).mono, weights);
                let deg = lcm.deg() + shift;
                Pair { i: g, j: hk, lcm, deg }
            })
            .collect();
        let mut d: Vec<Pair> = Vec::new();
        while !c.is_empty() {
            let p = c.remove(0);
            let keep = self.product_applicable(p.i, hk)
                || (!c.iter().any(|q| q.lcm.divides(&p.lcm)) && !d.iter().any(|q| q.lcm.divides(&p.lcm)));
            if keep {
                d.push(p);
            }
        }
        let e: Vec<Pair> = d.into_iter().filter(|p| !self.product_applicable(p.i, hk)).collect();
        let basis = &self.basis;
        self.pairs.retain(|p| {
            let pc = basis[p.i].terms[0].comp;
            if pc != comp || !hm.divides(&p.lcm) {
                return true;
            }
            let li = hm.lcm(&basis[p.i].terms[0].mono, weights);
            let lj = hm.lcm(&basis[p.j].terms[0].mono, weights);
            li == p.lcm || lj == p.lcm
        });
        self.pairs.extend(e);
    }

    /// Drops redundant elements and tail-reduces the rest.
    fn finish(self) -> Vec<Vector<F>> {
        let n = self.basis.len();
        let mut keep = vec![true; n];
        for a in 0..n {
            for b in 0..n {
                if a != b && keep[b] {
                    let (ta, tb) = (self.lt(a), self.lt(b));
                    if ta.comp == tb.comp && tb.mono.divides(&ta.mono) && (ta.mono != tb.mono || b < a) {
                        keep[a] = false;
                        break;
                    }
                }
            }
        }
        let kept: Vec<Vector<F>> = self
            .basis
            .into_iter()
            .zip(keep)
            .filter_map(|(v, k)| k.then_some(v))
            .collect();
        let mut by_comp = vec![Vec::new(); self.ctx.shifts.len()];
        for (k, e) in kept.iter().enumerate() {
            by_comp[e.terms[0].comp as usize].push(k);
        }
        let mut out = Vec::with_capacity(kept.len());
        for (k, v) in kept.iter().enumerate() {
            let head = Vector {
                terms: vec![v.terms[0].clone()],
            };
            let tail = Vector {
                terms: v.terms[1..].to_vec(),
            };
            let tail = normal_form(&self.ctx, &kept, &by_comp, &tail, Some(k));
            out.push(self.ctx.add(&head, &tail));
        }
        // deterministic presentation: decreasing leading term
        out.sort_by(|a, b| self.ctx.cmp_terms(&b.terms[0], &a.terms[0]));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::poly::Poly;

    fn ring(names: &[&str]) -> Arc<PolyRing<PrimeField>> {
        Arc::new(PolyRing::standard(PrimeField::default(), names))
    }

    fn ideal_gb(r: &Arc<PolyRing<PrimeField>>, gens: &[Poly<PrimeField>]) -> Gb<PrimeField> {
        let shifts = vec![0];
        let ctx = FreeCtx::new(r, ModuleOrder::PositionOverTerm, &shifts);
        let v = gens.iter().map(|g| ctx.from_poly_at(g, 0)).collect();
        Gb::compute(r.clone(), ModuleOrder::PositionOverTerm, vec![0], vec![], v)
            .unwrap()
            .gb
    }

    #[test]
    fn single_quadric_is_its_own_basis() {
        let r = ring(&["z0", "z1", "z2"]);
        let f = r.sub(&r.mul(&r.var(1), &r.var(1)), &r.mul(&r.var(0), &r.var(2)));
        let gb = ideal_gb(&r, &[f]);
        assert_eq!(gb.elems().len(), 1);
        let z1_4 = r.pow(&r.var(1), 4);
        let ctx = gb.ctx();
        let nf = gb.reduce(&ctx.from_poly_at(&z1_4, 0));
        let expect = r.mul(&r.pow(&r.var(0), 2), &r.pow(&r.var(2), 2));
        assert_eq!(nf, ctx.from_poly_at(&expect, 0));
    }

    #[test]
    fn twisted_cubic_minors() {
        let r = ring(&["z0", "z1", "z2", "z3"]);
        let z = |i| r.var(i);
        let minor = |a: usize, b: usize, c: usize, d: usize| r.sub(&r.mul(&z(a), &z(b)), &r.mul(&z(c), &z(d)));
        let gens = [minor(0, 2, 1, 1), minor(0, 3, 1, 2), minor(1, 3, 2, 2)];
        let gb = ideal_gb(&r, &gens);
        assert_eq!(gb.elems().len(), 3);
        for g in &gens {
            assert!(gb.contains(&gb.ctx().from_poly_at(g, 0)));
        }
    }

    #[test]
    fn redundant_inputs_are_flagged() {
        let r = ring(&["x", "y"]);
        let x = r.var(0);
        let y = r.var(1);
        let shifts = vec![0];
        let ctx = FreeCtx::new(&r, ModuleOrder::PositionOverTerm, &shifts);
        let gens = vec![
            ctx.from_poly_at(&r.mul(&x, &y), 0),
            ctx.from_poly_at(&x, 0),
            ctx.from_poly_at(&y, 0),
        ];
        let run = Gb::compute(r.clone(), ModuleOrder::PositionOverTerm, shifts.clone(), vec![], gens).unwrap();
        assert!(run.new_generators[0].is_none());
        assert!(run.new_generators[1].is_some());
        assert!(run.new_generators[2].is_some());
    }

    #[test]
    fn inhomogeneous_input_is_rejected() {
        let r = ring(&["x", "y"]);
        let p = r.add(&r.var(0), &r.mul(&r.var(1), &r.var(1)));
        let shifts = vec![0];
        let ctx = FreeCtx::new(&r, ModuleOrder::PositionOverTerm, &shifts);
        let res = Gb::compute(
            r.clone(),
            ModuleOrder::PositionOverTerm,
            shifts.clone(),
            vec![],
            vec![ctx.from_poly_at(&p, 0)],
        );
        assert!(res.is_err());
    }
}
