//! Finitely presented graded modules, module maps and degreewise linear algebra.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Ratio;

use crate::error::{precondition, validation, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::gb::Gb;
use crate::hilbert::HilbertSeries;
use crate::linalg::{DenseMat, Span};
use crate::matrix::Matrix;
use crate::mono::Mono;
use crate::ring::{GradedRing, MODULE_ORDER};
use crate::vector::{FreeCtx, Term, Vector};

/// k-basis of one graded piece: standard monomials (monomial, generator).
#[derive(Debug)]
pub struct Basis {
    pub elems: Vec<(Mono, u32)>,
    index: HashMap<(Mono, u32), usize>,
}

impl Basis {
    pub fn len(&self) -> usize {
        self.elems.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
    pub fn position(&self, mono: &Mono, comp: u32) -> Option<usize> {
        self.index.get(&(mono.clone(), comp)).copied()
    }
}

#[derive(Debug)]
struct Inner<F: Field> {
    ring: Arc<GradedRing<F>>,
    degs: Vec<i32>,
    rels: Vec<Vector<F>>,
    gb: OnceLock<Gb<F>>,
    series: OnceLock<HilbertSeries>,
    bases: Mutex<HashMap<i32, Arc<Basis>>>,
}

/// coker(F1 → F0) over a graded ring: generators with degrees `degs`, relations
/// as vectors in F0. Cheap to clone; caches are shared.
#[derive(Clone, Debug)]
pub struct Module<F: Field>(Arc<Inner<F>>);

/// Result of pruning: a minimal presentation plus the identifications with the
/// original generators.
#[derive(Clone, Debug)]
pub struct Pruned<F: Field> {
    pub module: Module<F>,
    /// Image of each old generator, in the new generators.
    pub to_new: Vec<Vector<F>>,
    /// Each new generator, in the old generators.
    pub to_old: Vec<Vector<F>>,
}

impl<F: Field> Module<F> {
    pub fn new(ring: Arc<GradedRing<F>>, degs: Vec<i32>, rels: Vec<Vector<F>>) -> Result<Self> {
        {
            let ctx = FreeCtx::new(ring.poly(), MODULE_ORDER, &degs);
            for (k, r) in rels.iter().enumerate() {
                if let Some(c) = r.max_comp() {
                    if c as usize >= degs.len() {
                        return Err(validation(format!(
                            "relation {k} refers to generator {c} of {}",
                            degs.len()
                        )));
                    }
                }
                if !ctx.is_homogeneous(r) {
                    return Err(validation(format!(
                        "relation {k} `{}` is not homogeneous",
                        ctx.render(r, degs.len())
                    )));
                }
            }
        }
        let rels = rels
            .iter()
            .map(|r| ring.reduce_vec(r))
            .filter(|r| !r.is_zero())
            .collect();
        Ok(Self::raw(ring, degs, rels, None))
    }

    fn raw(ring: Arc<GradedRing<F>>, degs: Vec<i32>, rels: Vec<Vector<F>>, gb: Option<Gb<F>>) -> Self {
        let cell = OnceLock::new();
        if let Some(g) = gb {
            let _ = cell.set(g);
        }
        Module(Arc::new(Inner {
            ring,
            degs,
            rels,
            gb: cell,
            series: OnceLock::new(),
            bases: Mutex::new(HashMap::new()),
        }))
    }

    pub fn free(ring: Arc<GradedRing<F>>, degs: Vec<i32>) -> Self {
        Self::raw(ring, degs, vec![], None)
    }

    /// The cokernel of a matrix.
    pub fn coker(ring: Arc<GradedRing<F>>, m: &Matrix<F>) -> Result<Self> {
        Module::new(ring, m.rows().to_vec(), m.columns().to_vec())
    }

    /// k placed in degree `deg`.
    pub fn residue_field(ring: Arc<GradedRing<F>>, deg: i32) -> Self {
        let poly = ring.poly().clone();
        let one = ring.field().one();
        let rels = (0..ring.nvars())
            .map(|i| Vector {
                terms: vec![Term {
                    mono: Mono::var(i, poly.weights()),
                    comp: 0,
                    coef: one.clone(),
                }],
            })
            .collect();
        Module::new(ring, vec![deg], rels).expect("residue field presentation")
    }

    /// The ideal generated by `gens`, as a submodule of A.
    pub fn ideal(ring: Arc<GradedRing<F>>, gens: &[crate::poly::Poly<F>]) -> Result<Self> {
        let a = Module::free(ring.clone(), vec![0]);
        let ctx = a.ctx();
        let vecs: Vec<Vector<F>> = gens.iter().map(|g| ctx.from_poly_at(g, 0)).collect();
        Ok(a.submodule(&vecs)?.0)
    }

    pub fn ring(&self) -> &Arc<GradedRing<F>> {
        &self.0.ring
    }
    pub fn degs(&self) -> &[i32] {
        &self.0.degs
    }
    /// Number of generators of this presentation.
    pub fn rank(&self) -> usize {
        self.0.degs.len()
    }
    pub fn rels(&self) -> &[Vector<F>] {
        &self.0.rels
    }

    pub fn ctx(&self) -> FreeCtx<'_, F> {
        FreeCtx::new(self.0.ring.poly(), MODULE_ORDER, &self.0.degs)
    }

    pub fn rel_degrees(&self) -> Vec<i32> {
        let ctx = self.ctx();
        self.0.rels.iter().map(|r| ctx.degree(r).unwrap()).collect()
    }

    /// The presentation matrix F1 → F0.
    pub fn presentation(&self) -> Matrix<F> {
        Matrix::new(
            self.0.ring.poly(),
            self.0.degs.clone(),
            self.rel_degrees(),
            self.0.rels.clone(),
        )
        .expect("relations are homogeneous")
    }

    /// Gröbner basis of im(relations) + I·F0.
    pub fn gb(&self) -> &Gb<F> {
        self.0.gb.get_or_init(|| {
            let ring = &self.0.ring;
            Gb::compute(
                ring.poly().clone(),
                MODULE_ORDER,
                self.0.degs.clone(),
                ring.ideal_seeds(self.rank()),
                self.0.rels.clone(),
            )
            .expect("validated presentation")
            .gb
        })
    }

    pub fn reduce(&self, v: &Vector<F>) -> Vector<F> {
        self.gb().reduce(v)
    }

    pub fn is_zero_elem(&self, v: &Vector<F>) -> bool {
        self.gb().contains(v)
    }

    pub fn degree_of(&self, v: &Vector<F>) -> Option<i32> {
        self.ctx().degree(v)
    }

    pub fn hilbert_series(&self) -> &HilbertSeries {
        self.0.series.get_or_init(|| {
            let gb = self.gb();
            let lts: Vec<Vec<Mono>> = (0..self.rank()).map(|c| gb.leading_monomials(c)).collect();
            HilbertSeries::of_monomial_module(self.0.ring.weights(), &self.0.degs, &lts)
        })
    }

    pub fn is_zero(&self) -> bool {
        self.hilbert_series().is_zero()
    }

    pub fn krull_dim(&self) -> i32 {
        self.hilbert_series().krull_dim()
    }

    pub fn hilbert_function(&self, lo: i32, hi: i32) -> Vec<i64> {
        self.hilbert_series().dims(lo, hi)
    }

    /// Total k-dimension when of finite length.
    pub fn length(&self) -> Option<i64> {
        self.hilbert_series().total_length()
    }

    /// Rank over A: ratio of Hilbert-polynomial leading terms (0 when of lower dimension).
    pub fn rank_over_ring(&self) -> Ratio<i64> {
        let a = self.0.ring.hilbert_series();
        let s = self.hilbert_series();
        if s.krull_dim() < a.krull_dim() {
            return Ratio::from_integer(0);
        }
        s.multiplicity() / a.multiplicity()
    }

    /// Minimal number of generators.
    pub fn mu(&self) -> usize {
        self.prune().module.rank()
    }

    /// Standard monomials of degree `d`.
    pub fn basis(&self, d: i32) -> Arc<Basis> {
        if let Some(b) = self.0.bases.lock().unwrap().get(&d) {
            return b.clone();
        }
        let gb = self.gb();
        let poly = self.0.ring.poly();
        let mut elems = Vec::new();
        for (c, &s) in self.0.degs.iter().enumerate() {
            for m in poly.monomials_of_degree(d - s).iter() {
                if gb.is_standard(m, c as u32) {
                    elems.push((m.clone(), c as u32));
                }
            }
        }
        let index = elems.iter().enumerate().map(|(k, e)| (e.clone(), k)).collect();
        let b = Arc::new(Basis { elems, index });
        self.0.bases.lock().unwrap().insert(d, b.clone());
        b
    }

    /// Coordinates of a degree-`d` element in `basis(d)`.
    pub fn coords(&self, v: &Vector<F>, d: i32) -> Vec<F::Elem> {
        let basis = self.basis(d);
        let f = self.0.ring.field();
        let mut out = vec![f.zero(); basis.len()];
        let nf = self.reduce(v);
        for t in &nf.terms {
            let k = basis
                .position(&t.mono, t.comp)
                .unwrap_or_else(|| panic!("element is not homogeneous of degree {d}"));
            out[k] = t.coef.clone();
        }
        out
    }

    /// The element with the given coordinates in `basis(d)`.
    pub fn from_coords(&self, d: i32, coords: &[F::Elem]) -> Vector<F> {
        let basis = self.basis(d);
        let f = self.0.ring.field();
        let terms = basis
            .elems
            .iter()
            .zip(coords)
            .filter(|(_, c)| !f.is_zero(c))
            .map(|((m, comp), c)| Term {
                mono: m.clone(),
                comp: *comp,
                coef: c.clone(),
            })
            .collect();
        self.ctx().from_terms(terms)
    }

    /// The basis vector e_i of F0.
    pub fn gen(&self, i: usize) -> Vector<F> {
        unit_vector(self.0.ring.poly(), i as u32)
    }

    /// Generator degrees moved by `delta` (the twist M(−delta)).
    pub fn shifted(&self, delta: i32) -> Module<F> {
        let degs: Vec<i32> = self.0.degs.iter().map(|d| d + delta).collect();
        let gb = self.0.gb.get().map(|g| g.widen(degs.clone()));
        Self::raw(self.0.ring.clone(), degs, self.0.rels.clone(), gb)
    }

    /// Same presentation over another quotient of the same polynomial ring
    /// (relations are reduced there).
    pub fn over(&self, ring: Arc<GradedRing<F>>) -> Result<Module<F>> {
        Module::new(ring, self.0.degs.clone(), self.0.rels.clone())
    }

    /// The module viewed over the ambient polynomial ring S.
    pub fn over_ambient(&self) -> Module<F> {
        let ring = &self.0.ring;
        let s = ring.ambient();
        let mut rels = self.0.rels.clone();
        let ctx = self.ctx();
        for c in 0..self.rank() as u32 {
            for g in ring.ideal() {
                rels.push(ctx.from_poly_at(g, c));
            }
        }
        let gb = self.0.gb.get().cloned();
        Self::raw(s, self.0.degs.clone(), rels, gb)
    }

    /// M ⊗ A/(extra) over the quotient ring.
    pub fn base_change(&self, ring: Arc<GradedRing<F>>) -> Result<Module<F>> {
        self.over(ring)
    }

    /// M with further relations; the existing GB seeds the new one.
    pub fn quotient(&self, extra: &[Vector<F>]) -> Result<Module<F>> {
        let ring = self.0.ring.clone();
        let extra: Vec<Vector<F>> = extra
            .iter()
            .map(|v| ring.reduce_vec(v))
            .filter(|v| !v.is_zero())
            .collect();
        let run = Gb::compute(
            ring.poly().clone(),
            MODULE_ORDER,
            self.0.degs.clone(),
            self.gb().elems().to_vec(),
            extra.clone(),
        )?;
        let mut rels = self.0.rels.clone();
        rels.extend(extra);
        Ok(Self::raw(ring, self.0.degs.clone(), rels, Some(run.gb)))
    }

    /// Direct sum; the Gröbner basis is assembled blockwise.
    pub fn direct_sum(parts: &[&Module<F>]) -> Module<F> {
        assert!(!parts.is_empty(), "empty direct sum");
        let ring = parts[0].0.ring.clone();
        let poly = ring.poly().clone();
        let mut degs = Vec::new();
        let mut rels = Vec::new();
        let mut gb_elems = Vec::new();
        for m in parts {
            let off = degs.len() as u32;
            let ctx = m.ctx();
            rels.extend(m.rels().iter().map(|r| ctx.offset(r, off)));
            gb_elems.extend(m.gb().elems().iter().map(|r| ctx.offset(r, off)));
            degs.extend_from_slice(m.degs());
        }
        let gb = Gb::from_known(poly, MODULE_ORDER, degs.clone(), gb_elems);
        Self::raw(ring, degs, rels, Some(gb))
    }

    /// Copies of `self` with generator degrees shifted by `shifts[j]` (block j).
    pub fn sum_shifted(&self, shifts: &[i32]) -> Module<F> {
        if shifts.is_empty() {
            return Module::free(self.0.ring.clone(), vec![]);
        }
        let parts: Vec<Module<F>> = shifts.iter().map(|&s| self.shifted(s)).collect();
        let refs: Vec<&Module<F>> = parts.iter().collect();
        Module::direct_sum(&refs)
    }

    /// Presents the submodule generated by `gens` (vectors in F0); returns it
    /// with the inclusion map.
    pub fn submodule(&self, gens: &[Vector<F>]) -> Result<(Module<F>, ModMap<F>)> {
        let ctx = self.ctx();
        let mut degs = Vec::with_capacity(gens.len());
        for g in gens {
            match ctx.degree(g) {
                Some(d) => degs.push(d),
                None if g.is_zero() => degs.push(0),
                None => return Err(validation("inhomogeneous submodule generator")),
            }
        }
        let rels = crate::syz::syzygies_into(self, gens, &degs)?;
        let sub = Module::new(self.0.ring.clone(), degs, rels)?;
        let inc = ModMap::new_unchecked(sub.clone(), self.clone(), gens.to_vec());
        Ok((sub, inc))
    }

    /// A minimal presentation: unit entries eliminated, relations minimalized.
    pub fn prune(&self) -> Pruned<F> {
        let ring = self.0.ring.clone();
        let poly = ring.poly().clone();
        let f = ring.field().clone();
        let n = self.rank();
        let ctx = self.ctx();
        let mut rels: Vec<Vector<F>> = self.0.rels.clone();
        let mut alive = vec![true; n];
        let mut eliminated: Vec<(usize, Vector<F>)> = Vec::new();
        loop {
            let hit = rels.iter().enumerate().find_map(|(k, r)| {
                r.terms
                    .iter()
                    .find(|t| t.mono.is_one())
                    .map(|t| (k, t.comp as usize, t.coef.clone()))
            });
            let Some((k, i, c)) = hit else { break };
            let rel = rels.swap_remove(k);
            let inv = f.inv(&c);
            // e_i = -(1/c) (rel - c e_i)
            let rest = Vector {
                terms: rel.terms.iter().filter(|t| t.comp as usize != i).cloned().collect(),
            };
            eliminated.push((i, ctx.scale(&rest, &f.neg(&inv))));
            alive[i] = false;
            for r in rels.iter_mut() {
                let coeff: Vec<Term<F>> = r.terms.iter().filter(|t| t.comp as usize == i).cloned().collect();
                if coeff.is_empty() {
                    continue;
                }
                let mut acc = r.clone();
                for t in coeff {
                    let s = f.neg(&f.mul(&t.coef, &inv));
                    acc = ctx.axpy(&acc, &s, Some(&t.mono), &rel.terms);
                }
                *r = ring.reduce_vec(&acc);
            }
            rels.retain(|r| !r.is_zero());
        }
        let mut new_index = vec![None; n];
        let mut new_degs = Vec::new();
        for i in 0..n {
            if alive[i] {
                new_index[i] = Some(new_degs.len() as u32);
                new_degs.push(self.0.degs[i]);
            }
        }
        // old generators in terms of surviving old generators
        let mut resolved: Vec<Option<Vector<F>>> = vec![None; n];
        for (i, expr) in eliminated.iter().rev() {
            let mut acc = Vector::zero();
            for t in &expr.terms {
                let j = t.comp as usize;
                if alive[j] {
                    acc = ctx.axpy(&acc, &f.one(), None, std::slice::from_ref(t));
                } else {
                    let sub = resolved[j].as_ref().expect("eliminated later");
                    acc = ctx.axpy(&acc, &t.coef, Some(&t.mono), &sub.terms);
                }
            }
            resolved[*i] = Some(ring.reduce_vec(&acc));
        }
        let new_ctx = FreeCtx::new(&poly, MODULE_ORDER, &new_degs);
        let to_new: Vec<Vector<F>> = (0..n)
            .map(|i| match new_index[i] {
                Some(j) => unit_vector(&poly, j),
                None => new_ctx.remap(resolved[i].as_ref().unwrap(), |c| new_index[c as usize]),
            })
            .collect();
        let to_old: Vec<Vector<F>> = (0..n)
            .filter(|&i| alive[i])
            .map(|i| unit_vector(&poly, i as u32))
            .collect();
        let rels: Vec<Vector<F>> = rels
            .iter()
            .map(|r| new_ctx.remap(r, |c| new_index[c as usize]))
            .collect();
        let run = Gb::compute(
            poly.clone(),
            MODULE_ORDER,
            new_degs.clone(),
            ring.ideal_seeds(new_degs.len()),
            rels.clone(),
        )
        .expect("homogeneous relations");
        let minimal: Vec<Vector<F>> = rels
            .into_iter()
            .zip(&run.new_generators)
            .filter_map(|(r, g)| g.as_ref().map(|_| r))
            .collect();
        let module = Self::raw(ring, new_degs, minimal, Some(run.gb));
        Pruned { module, to_new, to_old }
    }

    /// True when the presentation has no unit entries and no redundant relations.
    pub fn is_minimal_presentation(&self) -> bool {
        let p = self.prune();
        p.module.rank() == self.rank() && p.module.rels().len() == self.rels().len()
    }

    pub fn describe(&self) -> String {
        let poly = self.0.ring.poly();
        format!(
            "generators in degrees {:?}; relations {}",
            self.0.degs,
            self.presentation().render(poly)
        )
    }
}

pub(crate) fn unit_vector<F: Field>(poly: &crate::poly::PolyRing<F>, comp: u32) -> Vector<F> {
    Vector {
        terms: vec![Term {
            mono: poly.one_mono(),
            comp,
            coef: poly.field().one(),
        }],
    }
}

/// A degree-0 homomorphism of presented modules: the images of the source
/// generators, as vectors in the target's F0.
#[derive(Clone, Debug)]
pub struct ModMap<F: Field> {
    source: Module<F>,
    target: Module<F>,
    images: Vec<Vector<F>>,
}

impl<F: Field> ModMap<F> {
    /// Checks degrees and that every source relation maps to zero.
    pub fn new(source: Module<F>, target: Module<F>, images: Vec<Vector<F>>) -> Result<Self> {
        if images.len() != source.rank() {
            return Err(validation(format!(
                "{} images for {} generators",
                images.len(),
                source.rank()
            )));
        }
        let tctx = target.ctx();
        for (j, v) in images.iter().enumerate() {
            if let Some(c) = v.max_comp() {
                if c as usize >= target.rank() {
                    return Err(validation(format!("image {j} leaves the target")));
                }
            }
            if !v.is_zero() && tctx.degree(v) != Some(source.degs()[j]) {
                return Err(validation(format!(
                    "image of generator {j} is not homogeneous of degree {}",
                    source.degs()[j]
                )));
            }
        }
        let m = ModMap::new_unchecked(source, target, images);
        for (k, r) in m.source.rels().iter().enumerate() {
            if !m.target.is_zero_elem(&m.apply_raw(r)) {
                return Err(validation(format!("relation {k} of the source does not map to zero")));
            }
        }
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: Module<F>, target: Module<F>, images: Vec<Vector<F>>) -> Self {
        ModMap { source, target, images }
    }

    pub fn identity(m: &Module<F>) -> Self {
        let poly = m.ring().poly();
        let images = (0..m.rank() as u32).map(|c| unit_vector(poly, c)).collect();
        ModMap::new_unchecked(m.clone(), m.clone(), images)
    }

    pub fn zero(source: Module<F>, target: Module<F>) -> Self {
        let n = source.rank();
        ModMap::new_unchecked(source, target, vec![Vector::zero(); n])
    }

    pub fn source(&self) -> &Module<F> {
        &self.source
    }
    pub fn target(&self) -> &Module<F> {
        &self.target
    }
    pub fn images(&self) -> &[Vector<F>] {
        &self.images
    }

    pub fn matrix(&self) -> Matrix<F> {
        Matrix::new(
            self.source.ring().poly(),
            self.target.degs().to_vec(),
            self.source.degs().to_vec(),
            self.images.clone(),
        )
        .expect("homogeneous images")
    }

    fn apply_raw(&self, v: &Vector<F>) -> Vector<F> {
        let ring = self.target.ring();
        let ctx = self.target.ctx();
        let mut acc = Vector::zero();
        for t in &v.terms {
            acc = ctx.axpy(&acc, &t.coef, Some(&t.mono), &self.images[t.comp as usize].terms);
        }
        ring.reduce_vec(&acc)
    }

    /// Image of a source element, in normal form in the target.
    pub fn apply(&self, v: &Vector<F>) -> Vector<F> {
        self.target.reduce(&self.apply_raw(v))
    }

    /// self ∘ other.
    pub fn compose(&self, other: &ModMap<F>) -> ModMap<F> {
        let images = other.images.iter().map(|v| self.apply(v)).collect();
        ModMap::new_unchecked(other.source.clone(), self.target.clone(), images)
    }

    pub fn add(&self, other: &ModMap<F>) -> ModMap<F> {
        let ctx = self.target.ctx();
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| self.target.reduce(&ctx.add(a, b)))
            .collect();
        ModMap::new_unchecked(self.source.clone(), self.target.clone(), images)
    }

    pub fn scale(&self, c: &F::Elem) -> ModMap<F> {
        let ctx = self.target.ctx();
        let images = self.images.iter().map(|a| ctx.scale(a, c)).collect();
        ModMap::new_unchecked(self.source.clone(), self.target.clone(), images)
    }

    /// Linear combination Σ c_k maps[k] of maps with a common source and target.
    pub fn combination(maps: &[ModMap<F>], coefs: &[F::Elem]) -> Option<ModMap<F>> {
        let first = maps.first()?;
        let ctx = first.target.ctx();
        let mut images = vec![Vector::zero(); first.source.rank()];
        for (m, c) in maps.iter().zip(coefs) {
            for (acc, v) in images.iter_mut().zip(&m.images) {
                *acc = ctx.axpy(acc, c, None, &v.terms);
            }
        }
        let images = images.iter().map(|v| first.target.reduce(v)).collect();
        Some(ModMap::new_unchecked(
            first.source.clone(),
            first.target.clone(),
            images,
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(|v| self.target.is_zero_elem(v))
    }

    pub fn equals(&self, other: &ModMap<F>) -> bool {
        let ctx = self.target.ctx();
        self.images
            .iter()
            .zip(&other.images)
            .all(|(a, b)| self.target.is_zero_elem(&ctx.sub(a, b)))
    }

    /// target / image.
    pub fn cokernel(&self) -> Result<Module<F>> {
        self.target.quotient(&self.images)
    }

    /// Submodule of the source generated by minimal generators of the kernel.
    pub fn kernel(&self) -> Result<(Module<F>, ModMap<F>)> {
        let gens = crate::syz::syzygies_into(&self.target, &self.images, self.source.degs())?;
        let gens: Vec<Vector<F>> = gens.into_iter().filter(|g| !self.source.is_zero_elem(g)).collect();
        self.source.submodule(&gens)
    }

    /// HS(image) = HS(target) − HS(coker).
    pub fn image_series(&self) -> Result<HilbertSeries> {
        Ok(self.target.hilbert_series().sub(self.cokernel()?.hilbert_series()))
    }

    pub fn is_surjective(&self) -> Result<bool> {
        Ok(self.cokernel()?.is_zero())
    }

    pub fn is_injective(&self) -> Result<bool> {
        Ok(self.image_series()? == *self.source.hilbert_series())
    }

    pub fn is_isomorphism(&self) -> Result<bool> {
        Ok(self.is_surjective()? && self.source.hilbert_series() == self.target.hilbert_series())
    }

    /// Matrix of the degree-`d` piece: rows index `target.basis(d)`, columns
    /// `source.basis(d)`.
    pub fn degree_matrix(&self, d: i32, exec: Exec) -> DenseMat<F> {
        let sb = self.source.basis(d);
        let tb = self.target.basis(d);
        let f = self.source.ring().field().clone();
        let cols: Vec<Vec<F::Elem>> = exec.map(&sb.elems, |(m, c)| {
            let v = Vector {
                terms: vec![Term {
                    mono: m.clone(),
                    comp: *c,
                    coef: f.one(),
                }],
            };
            self.target.coords(&self.apply_raw(&v), d)
        });
        DenseMat::from_cols(&f, &cols, tb.len())
    }
}

/// Solves f(x) = y for x, degree by degree, caching one echelon form per degree.
pub struct Lifter<F: Field> {
    map: ModMap<F>,
    exec: Exec,
    cache: Mutex<HashMap<i32, Arc<Span<F>>>>,
}

impl<F: Field> Lifter<F> {
    pub fn new(map: ModMap<F>, exec: Exec) -> Self {
        Lifter {
            map,
            exec,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn map(&self) -> &ModMap<F> {
        &self.map
    }

    fn span(&self, d: i32) -> Arc<Span<F>> {
        if let Some(s) = self.cache.lock().unwrap().get(&d) {
            return s.clone();
        }
        let f = self.map.source.ring().field().clone();
        let m = self.map.degree_matrix(d, self.exec);
        let t = m.transpose(&f);
        let mut span = Span::new(m.nrows());
        for col in &t.rows {
            span.push(&f, col);
        }
        let span = Arc::new(span);
        self.cache.lock().unwrap().insert(d, span.clone());
        span
    }

    /// Some x in the source with f(x) = y in the target, if one exists.
    pub fn preimage(&self, y: &Vector<F>) -> Option<Vector<F>> {
        let target = &self.map.target;
        let y = target.reduce(y);
        if y.is_zero() {
            return Some(Vector::zero());
        }
        let d = target.degree_of(&y)?;
        let span = self.span(d);
        let coords = target.coords(&y, d);
        let comb = span.express(target.ring().field(), &coords)?;
        Some(self.map.source.from_coords(d, &comb))
    }

    /// Like `preimage` but a missing preimage is a precondition failure.
    pub fn solve(&self, y: &Vector<F>, what: &str) -> Result<Vector<F>> {
        self.preimage(y)
            .ok_or_else(|| precondition(format!("{what}: element is not in the image")))
    }
}

/// Basis of the degree-`d` homomorphisms M → N (as image lists), by solving the
/// relation constraints degreewise.
pub fn hom_basis<F: Field>(m: &Module<F>, n: &Module<F>, d: i32, exec: Exec) -> Vec<ModMap<F>> {
    let f = m.ring().field().clone();
    let ctx = n.ctx();
    // unknowns: (generator i of M, basis element of N_{deg_i + d})
    let mut unknowns: Vec<(usize, Mono, u32)> = Vec::new();
    for (i, &di) in m.degs().iter().enumerate() {
        for (mono, c) in n.basis(di + d).elems.iter() {
            unknowns.push((i, mono.clone(), *c));
        }
    }
    let rel_degs = m.rel_degrees();
    let blocks: Vec<Arc<Basis>> = rel_degs.iter().map(|&rd| n.basis(rd + d)).collect();
    let nrows: usize = blocks.iter().map(|b| b.len()).sum();
    let cols: Vec<Vec<F::Elem>> = exec.map(&unknowns, |(i, mono, c)| {
        let mut col = Vec::with_capacity(nrows);
        for (r, rd) in m.rels().iter().zip(&rel_degs) {
            let mut acc = Vector::zero();
            for t in r.terms.iter().filter(|t| t.comp as usize == *i) {
                let term = Term {
                    mono: t.mono.mul(mono),
                    comp: *c,
                    coef: t.coef.clone(),
                };
                acc = ctx.axpy(&acc, &f.one(), None, std::slice::from_ref(&term));
            }
            col.extend(n.coords(&acc, rd + d));
        }
        col
    });
    let a = DenseMat::from_cols(&f, &cols, nrows);
    let kernel = a.kernel(&f, exec);
    kernel
        .into_iter()
        .map(|k| {
            let mut images: Vec<Vec<Term<F>>> = vec![Vec::new(); m.rank()];
            for ((i, mono, c), x) in unknowns.iter().zip(&k) {
                if !f.is_zero(x) {
                    images[*i].push(Term {
                        mono: mono.clone(),
                        comp: *c,
                        coef: x.clone(),
                    });
                }
            }
            let images = images.into_iter().map(|t| ctx.from_terms(t)).collect();
            ModMap::new_unchecked(m.shifted(d), n.clone(), images)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn a2() -> Arc<GradedRing<PrimeField>> {
        GradedRing::veronese(PrimeField::default(), 2).unwrap()
    }

    #[test]
    fn residue_field_has_one_piece() {
        let k = Module::residue_field(a2(), 0);
        assert_eq!(k.hilbert_function(0, 2), vec![1, 0, 0]);
        assert_eq!(k.krull_dim(), 0);
    }

    #[test]
    fn prune_removes_unit_relations() {
        let ring = a2();
        let poly = ring.poly().clone();
        // A^2 / (e0 - z0 e1): isomorphic to A(-1) ... generated by e1 alone
        let degs = vec![1, 0];
        let ctx = FreeCtx::new(&poly, MODULE_ORDER, &degs);
        let rel = ctx.from_polys(&[&poly.one(), &poly.neg(&poly.var(0))]);
        let m = Module::new(ring.clone(), degs, vec![rel]).unwrap();
        let p = m.prune();
        assert_eq!(p.module.rank(), 1);
        assert_eq!(p.module.rels().len(), 0);
        assert_eq!(p.module.degs(), &[0]);
        assert_eq!(m.hilbert_series(), p.module.hilbert_series());
    }

    #[test]
    fn maximal_ideal_of_the_cone() {
        let ring = a2();
        let poly = ring.poly().clone();
        let gens: Vec<_> = (0..3).map(|i| poly.var(i)).collect();
        let m = Module::ideal(ring.clone(), &gens).unwrap();
        assert_eq!(m.rank(), 3);
        // HS(m) = HS(A) - 1
        assert_eq!(m.hilbert_function(0, 3), vec![0, 3, 5, 7]);
        assert_eq!(m.rank_over_ring(), Ratio::from_integer(1));
    }

    #[test]
    fn hom_from_k_to_k() {
        let ring = a2();
        let k = Module::residue_field(ring, 0);
        let maps = hom_basis(&k, &k, 0, Exec::Sequential);
        assert_eq!(maps.len(), 1);
    }
}
