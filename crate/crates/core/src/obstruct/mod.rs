//! Liftings of modules along square-zero surjections B′ → B = B′/J: the
//! obstruction class in Ext²_B(N, N ⊗ J), liftings built from a bounding
//! cochain, the torsor action of Ext¹_B(N, N ⊗ J) and the four-term
//! representative of the obstruction.

mod artin;
mod compat;
mod oracle;
mod regular;

pub use artin::{ArtinAlgebra, FamilyModule, FlatnessCertificate, SmallExtension};
pub use compat::{base_change_ob, omap_check, BaseChange, BaseChangeReport, OmapReport};
pub use oracle::{brute_force_liftings, finite_rep, liftings_isomorphic, BruteForceReport, FiniteRep, BRUTE_FORCE_CAP};
pub use regular::{
    ext_vanishing_report, ob_regular_quotient, splits_pibar, tangent_sigma, RegularQuotientOb, Splitting, TangentSigma,
    VanishingReport,
};

use std::sync::Arc;

use crate::error::{precondition, validation, Error, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::homalg::{cochain_to_images, four_term_class, hom_map, res_d, res_degs, tensor_product, ExtSpace};
use crate::matrix::Matrix;
use crate::module::{unit_vector, Lifter, ModMap, Module, Pruned};
use crate::poly::Poly;
use crate::resolve::{resolve, Complex, Resolution};
use crate::ring::{GradedRing, MODULE_ORDER};
use crate::vector::{FreeCtx, Vector};

/// A surjection B′ → B = B′/J of quotients of one polynomial ring with J² = 0.
#[derive(Clone, Debug)]
pub struct LiftingProblem<F: Field> {
    big: Arc<GradedRing<F>>,
    small: Arc<GradedRing<F>>,
    j: Vec<Poly<F>>,
    j_module: Module<F>,
}

impl<F: Field> LiftingProblem<F> {
    /// B′ → B′/(j); the generators must be homogeneous, nonzero in B′ and
    /// multiply to zero.
    pub fn new(big: Arc<GradedRing<F>>, j: &[Poly<F>]) -> Result<Self> {
        if j.is_empty() {
            return Err(validation("the kernel J needs at least one generator"));
        }
        let poly = big.poly().clone();
        let mut gens = Vec::with_capacity(j.len());
        for (l, g) in j.iter().enumerate() {
            let r = big.reduce(g);
            if r.is_zero() {
                return Err(validation(format!("generator {l} of J is zero in B′")));
            }
            if !r.is_homogeneous() {
                return Err(validation(format!("generator {l} of J is not homogeneous")));
            }
            gens.push(r);
        }
        for a in 0..gens.len() {
            for b in a..gens.len() {
                if !big.is_zero(&poly.mul(&gens[a], &gens[b])) {
                    return Err(precondition(format!(
                        "J² ≠ 0 in B′: ({})·({}) ≠ 0",
                        poly.render(&gens[a]),
                        poly.render(&gens[b])
                    )));
                }
            }
        }
        let small = big.quotient(&gens)?;
        let j_module = Module::ideal(big.clone(), &gens)?.over(small.clone())?;
        Ok(LiftingProblem {
            big,
            small,
            j: gens,
            j_module,
        })
    }

    pub fn big(&self) -> &Arc<GradedRing<F>> {
        &self.big
    }
    pub fn small(&self) -> &Arc<GradedRing<F>> {
        &self.small
    }
    pub fn j(&self) -> &[Poly<F>] {
        &self.j
    }
    /// J as a B-module, generator l being j_l.
    pub fn j_module(&self) -> &Module<F> {
        &self.j_module
    }
    pub fn j_degrees(&self) -> Vec<i32> {
        self.j_module.degs().to_vec()
    }
}

/// Class coordinates in a fixed basis of Ext²_B(N, N ⊗ J).
#[derive(Clone, Debug)]
pub struct ObstructionClass<F: Field> {
    field: F,
    pub coords: Vec<F::Elem>,
    /// Degree of each basis class.
    pub degrees: Vec<i32>,
}

impl<F: Field> ObstructionClass<F> {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| self.field.is_zero(c))
    }
    pub fn same_as(&self, other: &ObstructionClass<F>) -> bool {
        self.coords == other.coords
    }
    pub fn render(&self) -> Vec<String> {
        self.coords.iter().map(|c| self.field.render(c)).collect()
    }
}

/// A lifting N′ = coker(d′₁) over B′ whose differential reduces to d₁ of the
/// context's resolution column by column.
#[derive(Clone, Debug)]
pub struct Lifting<F: Field> {
    pub d1: Matrix<F>,
    pub module: Module<F>,
}

/// What `lift` found.
#[derive(Clone, Debug)]
pub enum LiftOutcome<F: Field> {
    Lifted(Lifting<F>),
    Obstructed(ObstructionClass<F>),
}

/// The checks making N′ a lifting of N: N′ ⊗ B = N on generators, and
/// HS(N′) = HS(N) + HS(N ⊗ J), which forces N ⊗ J ≅ J·N′ (Tor₁ vanishes).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftCertificate {
    pub reduces: bool,
    pub flat: bool,
}

impl LiftCertificate {
    pub fn holds(&self) -> bool {
        self.reduces && self.flat
    }
}

/// A lifting problem together with a resolution of N over B.
pub struct LiftingContext<F: Field> {
    problem: LiftingProblem<F>,
    res: Arc<Resolution<F>>,
    x: Module<F>,
    ext1: ExtSpace<F>,
    ext2: ExtSpace<F>,
    /// B′^{a·s} → B′^a, (i, l) ↦ j_l e_i.
    iota: Lifter<F>,
    f0: Vec<i32>,
    d1: Matrix<F>,
    d2: Matrix<F>,
    exec: Exec,
}

impl<F: Field> std::fmt::Debug for LiftingContext<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LiftingContext({})", self.res.module.describe())
    }
}

fn not_common(e: Error) -> Error {
    match e {
        Error::Precondition(_) => precondition("inputs are not liftings of a common family"),
        e => e,
    }
}

impl<F: Field> LiftingContext<F> {
    pub fn new(problem: &LiftingProblem<F>, n: &Module<F>, exec: Exec) -> Result<Self> {
        if !n.ring().same_as(&problem.small) {
            return Err(validation("N must be a module over B = B′/J"));
        }
        let res = Arc::new(resolve(n, 3)?);
        Self::with_resolution(problem, res, exec)
    }

    /// Uses a given resolution of N over B (three differentials or complete).
    pub fn with_resolution(problem: &LiftingProblem<F>, res: Arc<Resolution<F>>, exec: Exec) -> Result<Self> {
        if !res.ring().same_as(&problem.small) {
            return Err(validation("the resolution must live over B = B′/J"));
        }
        let x = tensor_product(&res.pruned.module, &problem.j_module)?;
        let ext1 = ExtSpace::new(res.clone(), 1, &x, exec)?;
        let ext2 = ExtSpace::new(res.clone(), 2, &x, exec)?;
        let f0 = res_degs(&res, 0)?;
        let big = problem.big.clone();
        let jd = problem.j_degrees();
        let src: Vec<i32> = f0.iter().flat_map(|a| jd.iter().map(move |d| a + d)).collect();
        let free0 = Module::free(big.clone(), f0.clone());
        let images: Vec<Vector<F>> = {
            let ctx = free0.ctx();
            (0..f0.len())
                .flat_map(|i| problem.j.iter().map(move |g| (i, g)))
                .map(|(i, g)| ctx.from_poly_at(g, i as u32))
                .collect()
        };
        let iota = Lifter::new(ModMap::new_unchecked(Module::free(big, src), free0, images), exec);
        let d1 = res_d(&res, 1)?;
        let d2 = res_d(&res, 2)?;
        Ok(LiftingContext {
            problem: problem.clone(),
            res,
            x,
            ext1,
            ext2,
            iota,
            f0,
            d1,
            d2,
            exec,
        })
    }

    pub fn problem(&self) -> &LiftingProblem<F> {
        &self.problem
    }
    pub fn resolution(&self) -> &Arc<Resolution<F>> {
        &self.res
    }
    /// N in its minimal presentation (generators = basis of F₀).
    pub fn n(&self) -> &Module<F> {
        &self.res.pruned.module
    }
    /// N ⊗_B J, generator (i, l) = e_i ⊗ j_l at index i·|J| + l.
    pub fn x(&self) -> &Module<F> {
        &self.x
    }
    pub fn ext1(&self) -> &ExtSpace<F> {
        &self.ext1
    }
    pub fn ext2(&self) -> &ExtSpace<F> {
        &self.ext2
    }
    pub fn d1(&self) -> &Matrix<F> {
        &self.d1
    }

    fn class(&self, coords: Vec<F::Elem>) -> ObstructionClass<F> {
        ObstructionClass {
            field: self.problem.big.field().clone(),
            coords,
            degrees: self.ext2.basis_degrees(),
        }
    }

    /// Writes v ∈ J·B′^a as Σ c_il j_l e_i and returns Σ c̄_il (e_i ⊗ j_l).
    pub fn to_x(&self, v: &Vector<F>) -> Result<Vector<F>> {
        let y = self
            .iota
            .preimage(v)
            .ok_or_else(|| precondition("element does not lie in J·F₀"))?;
        Ok(self.x.reduce(&self.problem.small.reduce_vec(&y)))
    }

    /// ι: Σ c_il (e_i ⊗ j_l) ↦ Σ c_il j_l e_i in B′^a.
    pub fn iota_apply(&self, v: &Vector<F>) -> Vector<F> {
        let big = &self.problem.big;
        let poly = big.poly();
        let s = self.problem.j.len();
        let ctx = FreeCtx::new(poly, MODULE_ORDER, &self.f0);
        let mut acc = Vector::zero();
        for t in &v.terms {
            let (i, l) = (t.comp as usize / s, t.comp as usize % s);
            let p = poly.mul_term(&self.problem.j[l], &t.mono, &t.coef);
            acc = ctx.add(&acc, &ctx.from_poly_at(&p, i as u32));
        }
        big.reduce_vec(&acc)
    }

    /// η̄₂ with d̃₁ d̃₂ = ι η₂, as images of the generators of F₂.
    pub(crate) fn eta2(&self) -> Result<Vec<Vector<F>>> {
        let p = self.d1.compose(&self.problem.big, &self.d2);
        p.columns().iter().map(|c| self.to_x(c)).collect()
    }

    /// ob(q, N): the class of η̄₂.
    pub fn obstruction(&self) -> Result<ObstructionClass<F>> {
        let z = self.ext2.from_images(&self.eta2()?);
        Ok(self.class(self.ext2.classify(&z)?))
    }

    /// The Yoneda class of 0 → N ⊗ J → N̄′₁ → F̄₀ → N → 0 with
    /// N′₁ = d̃₁(F′₁) + J·F′₀.
    pub fn four_term_ob(&self) -> Result<ObstructionClass<F>> {
        let big = self.problem.big.clone();
        let small = self.problem.small.clone();
        let s = self.problem.j.len();
        let a = self.f0.len();
        let f0 = Module::free(big.clone(), self.f0.clone());
        let mut gens: Vec<Vector<F>> = self.d1.columns().to_vec();
        let n1 = gens.len();
        {
            let ctx = f0.ctx();
            for i in 0..a {
                for g in &self.problem.j {
                    gens.push(ctx.from_poly_at(g, i as u32));
                }
            }
        }
        let (sub, _) = f0.submodule(&gens)?;
        let sub = sub.over(small.clone())?;
        let poly = small.poly();
        let am = ModMap::new(
            self.x.clone(),
            sub.clone(),
            (0..a * s).map(|k| unit_vector(poly, (n1 + k) as u32)).collect(),
        )?;
        let fbar = Module::free(small.clone(), self.f0.clone());
        let bm = ModMap::new(
            sub,
            fbar.clone(),
            (0..gens.len())
                .map(|k| {
                    if k < n1 {
                        small.reduce_vec(self.d1.column(k))
                    } else {
                        Vector::zero()
                    }
                })
                .collect(),
        )?;
        let cm = ModMap::new(fbar, self.res.module.clone(), self.res.pruned.to_old.clone())?;
        Ok(self.class(four_term_class(&self.ext2, &am, &bm, &cm)?))
    }

    fn lifting_from_columns(&self, cols: Vec<Vector<F>>) -> Result<Lifting<F>> {
        let big = self.problem.big.clone();
        let cols = cols.iter().map(|c| big.reduce_vec(c)).collect();
        let d1 = Matrix::new(big.poly(), self.d1.rows().to_vec(), self.d1.cols().to_vec(), cols)?;
        let module = Module::coker(big, &d1)?;
        Ok(Lifting { d1, module })
    }

    /// The lifting with differential d̃₁ itself (J·d₁ = 0 need not hold).
    fn naive(&self) -> Vec<Vector<F>> {
        self.d1.columns().to_vec()
    }

    /// N′ = coker(d̃₁ − ιξ̄) where δξ̄ = η̄₂, or the nonzero obstruction.
    pub fn lift(&self) -> Result<LiftOutcome<F>> {
        let ob = self.obstruction()?;
        if !ob.is_zero() {
            return Ok(LiftOutcome::Obstructed(ob));
        }
        let c2 = self.ext2.from_images(&self.eta2()?);
        let delta = hom_map(&self.x, &self.d2);
        let xi = Lifter::new(delta, self.exec).solve(&c2, "bounding the obstruction cocycle")?;
        let images = cochain_to_images(&self.x, self.d1.ncols(), &xi);
        let ctx = FreeCtx::new(self.problem.big.poly(), MODULE_ORDER, &self.f0);
        let cols = self
            .naive()
            .iter()
            .zip(&images)
            .map(|(c, y)| ctx.sub(c, &self.iota_apply(y)))
            .collect();
        Ok(LiftOutcome::Lifted(self.lifting_from_columns(cols)?))
    }

    pub fn certify(&self, l: &Lifting<F>) -> Result<LiftCertificate> {
        let small = &self.problem.small;
        let reduces = l.d1.rows() == self.d1.rows()
            && l.d1.cols() == self.d1.cols()
            && l.d1
                .columns()
                .iter()
                .zip(self.d1.columns())
                .all(|(a, b)| small.reduce_vec(a) == small.reduce_vec(b));
        let expected = self.n().hilbert_series().add(self.x.hilbert_series());
        let flat = reduces && *l.module.hilbert_series() == expected;
        Ok(LiftCertificate { reduces, flat })
    }

    fn require_lifting(&self, l: &Lifting<F>) -> Result<()> {
        if !self.certify(l)?.holds() {
            return Err(precondition("inputs are not liftings of a common family"));
        }
        Ok(())
    }

    /// N′ + ξ: the differential d′₁ + ιξ₁ for a degree-0 class ξ of Ext¹_B(N, N ⊗ J).
    pub fn torsor_act(&self, l: &Lifting<F>, xi: &[F::Elem]) -> Result<Lifting<F>> {
        self.require_lifting(l)?;
        if xi.len() != self.ext1.basis_len() {
            return Err(validation(format!(
                "{} coordinates for an Ext¹ basis of size {}",
                xi.len(),
                self.ext1.basis_len()
            )));
        }
        let f = self.problem.big.field();
        let degs = self.ext1.basis_degrees();
        if let Some(k) = (0..xi.len()).find(|&k| !f.is_zero(&xi[k]) && degs[k] != 0) {
            return Err(precondition(format!(
                "class {k} has degree {}; only degree-0 classes act on graded liftings",
                degs[k]
            )));
        }
        let images = self.ext1.to_images(&self.ext1.cochain_of(xi));
        let ctx = FreeCtx::new(self.problem.big.poly(), MODULE_ORDER, &self.f0);
        let cols =
            l.d1.columns()
                .iter()
                .zip(&images)
                .map(|(c, y)| ctx.add(c, &self.iota_apply(y)))
                .collect();
        self.lifting_from_columns(cols)
    }

    /// ξ with N′₁ = N′₂ + ξ.
    pub fn lifting_difference(&self, l1: &Lifting<F>, l2: &Lifting<F>) -> Result<Vec<F::Elem>> {
        self.require_lifting(l1)?;
        self.require_lifting(l2)?;
        let ctx = FreeCtx::new(self.problem.big.poly(), MODULE_ORDER, &self.f0);
        let images: Vec<Vector<F>> = l1
            .d1
            .columns()
            .iter()
            .zip(l2.d1.columns())
            .map(|(a, b)| self.to_x(&ctx.sub(a, b)))
            .collect::<Result<_>>()
            .map_err(not_common)?;
        self.ext1.classify(&self.ext1.from_images(&images)).map_err(not_common)
    }

    /// Two liftings are equivalent iff their difference vanishes.
    pub fn equivalent(&self, l1: &Lifting<F>, l2: &Lifting<F>) -> Result<bool> {
        let f = self.problem.big.field();
        Ok(self.lifting_difference(l1, l2)?.iter().all(|c| f.is_zero(c)))
    }

    /// Brings a lifting N′ (any presentation over B′) with an isomorphism
    /// θ: N′ ⊗ B → N (N the module resolved by the context) into the form
    /// coker(d′₁) with d′₁ reducing to d₁.
    pub fn canonical_lifting(&self, n_prime: &Module<F>, theta: &ModMap<F>) -> Result<Lifting<F>> {
        let big = self.problem.big.clone();
        if !n_prime.ring().same_as(&big) {
            return Err(validation("a lifting must be a module over B′"));
        }
        if !theta.is_isomorphism()? {
            return Err(precondition("θ: N′ ⊗ B → N is not an isomorphism"));
        }
        let inv = Lifter::new(theta.clone(), self.exec);
        // ψ: F′₀ → N′ lifting θ⁻¹ ∘ augmentation
        let psi_images: Vec<Vector<F>> = self
            .res
            .pruned
            .to_old
            .iter()
            .map(|y| inv.solve(y, "inverting θ"))
            .collect::<Result<_>>()?;
        let free0 = Module::free(big.clone(), self.f0.clone());
        let psi = ModMap::new(free0, n_prime.clone(), psi_images)?;
        let s = self.problem.j.len();
        let jd = self.problem.j_degrees();
        let src: Vec<i32> = self.f0.iter().flat_map(|a| jd.iter().map(move |d| a + d)).collect();
        let jimages: Vec<Vector<F>> = (0..self.f0.len() * s)
            .map(|k| {
                let (i, l) = (k / s, k % s);
                let ctx = n_prime.ctx();
                let v = ctx.mul_poly(&psi.images()[i], &self.problem.j[l]);
                n_prime.reduce(&big.reduce_vec(&v))
            })
            .collect();
        let jmap = Lifter::new(
            ModMap::new_unchecked(Module::free(big.clone(), src), n_prime.clone(), jimages),
            self.exec,
        );
        let ctx = FreeCtx::new(big.poly(), MODULE_ORDER, &self.f0);
        let mut cols = Vec::with_capacity(self.d1.ncols());
        for c in self.d1.columns() {
            let y = jmap.solve(&psi.apply(c), "N′ is not a lifting of N")?;
            cols.push(ctx.sub(c, &self.iota_apply(&y)));
        }
        let l = self.lifting_from_columns(cols)?;
        if !self.certify(&l)?.holds() || l.module.hilbert_series() != n_prime.hilbert_series() {
            return Err(precondition("N′ is not a lifting of N"));
        }
        Ok(l)
    }
}

/// The free resolution F ⊗ R of coker(d₁ ⊗ R), certified exact on the
/// computed range; `why` names the failing hypothesis.
pub(crate) fn reduced_resolution<F: Field>(
    res: &Resolution<F>,
    ring: &Arc<GradedRing<F>>,
    why: &str,
) -> Result<Resolution<F>> {
    let maps: Vec<Matrix<F>> = res.complex.maps.iter().map(|m| m.reduce(ring)).collect();
    let complex = Complex::new(ring.clone(), res.complex.degs.clone(), maps);
    if !complex.is_exact()? {
        return Err(precondition(format!("the reduced complex is not a resolution: {why}")));
    }
    let module = complex.coker(1)?;
    let poly = ring.poly();
    let units: Vec<Vector<F>> = (0..module.rank()).map(|i| unit_vector(poly, i as u32)).collect();
    Ok(Resolution {
        module: module.clone(),
        pruned: Pruned {
            module,
            to_new: units.clone(),
            to_old: units,
        },
        complex,
        complete: res.complete,
    })
}

/// An element of the module resolved by `res`, in its pruned generators.
pub(crate) fn to_pruned<F: Field>(res: &Resolution<F>, v: &Vector<F>) -> Vector<F> {
    let target = &res.pruned.module;
    let ctx = target.ctx();
    let mut acc = Vector::zero();
    for t in &v.terms {
        acc = ctx.axpy(&acc, &t.coef, Some(&t.mono), &res.pruned.to_new[t.comp as usize].terms);
    }
    target.reduce(&target.ring().reduce_vec(&acc))
}

/// ob(q, N) for q: B′ → B and a B-module N.
pub fn obstruction<F: Field>(q: &LiftingProblem<F>, n: &Module<F>, exec: Exec) -> Result<ObstructionClass<F>> {
    LiftingContext::new(q, n, exec)?.obstruction()
}

/// A certified lifting of N along q, or the obstruction.
pub fn lift_module<F: Field>(q: &LiftingProblem<F>, n: &Module<F>, exec: Exec) -> Result<LiftOutcome<F>> {
    LiftingContext::new(q, n, exec)?.lift()
}

pub fn four_term_ob<F: Field>(q: &LiftingProblem<F>, n: &Module<F>, exec: Exec) -> Result<ObstructionClass<F>> {
    LiftingContext::new(q, n, exec)?.four_term_ob()
}

#[cfg(test)]
mod tests;
