//! Quotients by regular sequences: B = A/J with q: A/J² → B. The reduced MCM
//! approximation gives a four-term representative of ob(q, N), π̄ splits
//! exactly when it vanishes, and a split π̄ yields the tangent map
//! Ext¹_B(N, N) → Ext¹_A(M, M).

use std::sync::Arc;

use super::{reduced_resolution, LiftingContext, LiftingProblem, ObstructionClass};
use crate::cmapprox::{fid_hull, mcm_approx_cm, ApproxTriple};
use crate::error::{precondition, validation, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::homalg::{ext_contra, ext_cov, four_term_class, ExtSpace};
use crate::linalg::DenseMat;
use crate::module::{hom_basis, Lifter, ModMap, Module};
use crate::poly::Poly;
use crate::resolve::{depth, first_koszul_obstruction, is_mcm, resolve};
use crate::ring::GradedRing;

fn regular_quotient<F: Field>(a: &Arc<GradedRing<F>>, j: &[Poly<F>]) -> Result<Arc<GradedRing<F>>> {
    if let Some(k) = first_koszul_obstruction(a, j)? {
        return Err(precondition(format!("J is not a regular sequence: H_{k}(K(J)) ≠ 0")));
    }
    a.quotient(j)
}

/// N over B viewed over A (relations J·e_i added).
fn over_a<F: Field>(a: &Arc<GradedRing<F>>, n: &Module<F>, j: &[Poly<F>]) -> Result<Module<F>> {
    let ctx = n.ctx();
    let mut rels = n.rels().to_vec();
    for i in 0..n.rank() {
        for g in j {
            rels.push(ctx.from_poly_at(g, i as u32));
        }
    }
    Module::new(a.clone(), n.degs().to_vec(), rels)
}

fn reduce_map<F: Field>(f: &ModMap<F>, source: &Module<F>, target: &Module<F>) -> Result<ModMap<F>> {
    let ring = target.ring();
    let images = f.images().iter().map(|v| target.reduce(&ring.reduce_vec(v))).collect();
    ModMap::new(source.clone(), target.clone(), images)
}

/// ob(A/J² → B, N) from the reduced approximation sequence, next to the one
/// computed from lifted differentials.
#[derive(Debug)]
pub struct RegularQuotientOb<F: Field> {
    pub context: LiftingContext<F>,
    /// 0 → L → M → N → 0 over A.
    pub triple: ApproxTriple<F>,
    pub l_bar: Module<F>,
    pub m_bar: Module<F>,
    pub rho_bar: ModMap<F>,
    pub pi_bar: ModMap<F>,
    /// N ⊗ J/J² → L̄, the connecting map of the reduced sequence.
    pub connecting: ModMap<F>,
    /// Class of 0 → N ⊗ J/J² → L̄ → M̄ → N → 0.
    pub class: ObstructionClass<F>,
    /// ob(q, N) from d̃₁ d̃₂.
    pub direct: ObstructionClass<F>,
}

pub fn ob_regular_quotient<F: Field>(
    a: &Arc<GradedRing<F>>,
    j: &[Poly<F>],
    n: &Module<F>,
    exec: Exec,
) -> Result<RegularQuotientOb<F>> {
    if j.is_empty() {
        return Err(validation("J needs at least one generator"));
    }
    let b = regular_quotient(a, j)?;
    if !n.ring().same_as(&b) {
        return Err(validation("N must be a module over B = A/J"));
    }
    if !is_mcm(n)? {
        return Err(precondition("N is not maximal Cohen-Macaulay over B"));
    }
    let poly = a.poly().clone();
    let mut squares = Vec::new();
    for x in 0..j.len() {
        for y in x..j.len() {
            squares.push(poly.mul(&j[x], &j[y]));
        }
    }
    let problem = LiftingProblem::new(a.quotient(&squares)?, j)?;
    let context = LiftingContext::new(&problem, n, exec)?;
    let n_a = over_a(a, n, j)?;
    let triple = mcm_approx_cm(&n_a, j.len() as i32, exec)?;
    let l_bar = triple.l.over(b.clone())?;
    let m_bar = triple.m.over(b.clone())?;
    let rho_bar = reduce_map(&triple.rho, &l_bar, &m_bar)?;
    let pi_bar = reduce_map(&triple.pi, &m_bar, n)?;
    // n_i ⊗ j_l ↦ ρ⁻¹(j_l · π⁻¹(n_i))
    let lift_pi = Lifter::new(triple.pi.clone(), exec);
    let lift_rho = Lifter::new(triple.rho.clone(), exec);
    let mctx = triple.m.ctx();
    let mut images = Vec::new();
    for y in &context.resolution().pruned.to_old {
        let pre = lift_pi.solve(y, "lifting through π")?;
        for g in problem.j() {
            let z = triple.m.reduce(&a.reduce_vec(&mctx.mul_poly(&pre, g)));
            let w = lift_rho.solve(&z, "lifting into L")?;
            images.push(l_bar.reduce(&b.reduce_vec(&w)));
        }
    }
    let connecting = ModMap::new(context.x().clone(), l_bar.clone(), images)?;
    let coords = four_term_class(context.ext2(), &connecting, &rho_bar, &pi_bar)?;
    let class = ObstructionClass {
        field: a.field().clone(),
        coords,
        degrees: context.ext2().basis_degrees(),
    };
    let direct = context.obstruction()?;
    Ok(RegularQuotientOb {
        context,
        triple,
        l_bar,
        m_bar,
        rho_bar,
        pi_bar,
        connecting,
        class,
        direct,
    })
}

/// Whether π̄: M̄ → N splits, with ν: N → M̄ and π̄ν = id when it does.
#[derive(Clone, Debug)]
pub struct Splitting<F: Field> {
    pub splits: bool,
    pub witness: Option<ModMap<F>>,
    pub m_bar: Module<F>,
    pub n_bar: Module<F>,
    pub pi_bar: ModMap<F>,
}

/// Solves Σ c_k π̄∘ν_k = id over a basis ν_k of Hom_B(N, M̄)₀.
pub fn splits_pibar<F: Field>(t: &ApproxTriple<F>, j: &[Poly<F>], exec: Exec) -> Result<Splitting<F>> {
    let a = t.m.ring().clone();
    let b = a.quotient(j)?;
    let n_bar = t.n.over(b.clone())?;
    let m_bar = t.m.over(b.clone())?;
    let pi_bar = reduce_map(&t.pi, &m_bar, &n_bar)?;
    let f = b.field().clone();
    let basis = hom_basis(&n_bar, &m_bar, 0, exec);
    let mut target = Vec::new();
    let mut cols: Vec<Vec<F::Elem>> = vec![Vec::new(); basis.len()];
    for (i, &deg) in n_bar.degs().iter().enumerate() {
        target.extend(n_bar.coords(&n_bar.gen(i), deg));
        for (k, nu) in basis.iter().enumerate() {
            let img = pi_bar.apply(&nu.images()[i]);
            cols[k].extend(n_bar.coords(&img, deg));
        }
    }
    let sol = if basis.is_empty() {
        target.iter().all(|c| f.is_zero(c)).then(Vec::new)
    } else {
        DenseMat::from_cols(&f, &cols, target.len()).solve(&f, &target, exec)
    };
    let witness = match &sol {
        Some(c) if !basis.is_empty() => {
            let m = ModMap::combination(&basis, c).expect("nonempty basis");
            Some(ModMap::new(n_bar.clone(), m_bar.clone(), m.images().to_vec())?)
        }
        Some(_) => Some(ModMap::zero(n_bar.clone(), m_bar.clone())),
        None => None,
    };
    Ok(Splitting {
        splits: witness.is_some(),
        witness,
        m_bar,
        n_bar,
        pi_bar,
    })
}

/// σ = (π_*)⁻¹ ∘ τ* ∘ π̄*: Ext¹_B(N, N) → Ext¹_A(M, M).
#[derive(Clone, Debug)]
pub struct TangentSigma<F: Field> {
    /// dim Ext¹_A(M, M) × dim Ext¹_B(N, N).
    pub matrix: DenseMat<F>,
    pub rank: usize,
    pub source_dim: usize,
    pub target_dim: usize,
    pub coker_dim: usize,
    /// dim Ext²_B(N, N), computed from its own resolution.
    pub ext2_dim: Option<usize>,
    pub injective: bool,
}

pub fn tangent_sigma<F: Field>(t: &ApproxTriple<F>, j: &[Poly<F>], exec: Exec) -> Result<TangentSigma<F>> {
    let split = splits_pibar(t, j, exec)?;
    if !split.splits {
        return Err(precondition("π̄ does not split; the tangent map needs a split π̄"));
    }
    let a = t.m.ring().clone();
    let b = regular_quotient(&a, j)?;
    let f = a.field().clone();
    let n_b = t.n.over(b.clone())?;
    let res_m = Arc::new(resolve(&t.m, 2)?);
    let e_mm = ExtSpace::new(res_m.clone(), 1, &t.m, exec)?;
    let e_mn = ExtSpace::new(res_m.clone(), 1, &t.n, exec)?;
    let push = ext_cov(&t.pi, &e_mm, &e_mn)?;
    let res_n = Arc::new(resolve(&n_b, 2)?);
    let e_nn = ExtSpace::new(res_n, 1, &n_b, exec)?;
    let res_mb = Arc::new(reduced_resolution(&res_m, &b, "J is not regular on M")?);
    let e_mbn = ExtSpace::new(res_mb.clone(), 1, &n_b, exec)?;
    let pi_b = ModMap::new(
        res_mb.module.clone(),
        n_b.clone(),
        res_m
            .pruned
            .to_old
            .iter()
            .map(|v| n_b.reduce(&b.reduce_vec(&t.pi.apply(v))))
            .collect(),
    )?;
    let pull = ext_contra(&pi_b, &e_nn, &e_mbn)?;
    // Hom_B(F ⊗ B, N) = Hom_A(F, N): the change of rings is the identity on cochains
    let tau = e_mbn.induced_matrix(&e_mn, |z| Ok(z.clone()))?;
    let y = tau.mul(&f, &pull);
    let (src, tgt) = (e_nn.basis_len(), e_mm.basis_len());
    let mut cols = Vec::with_capacity(src);
    for c in 0..src {
        let col: Vec<F::Elem> = y.rows.iter().map(|r| r[c].clone()).collect();
        let x = if tgt == 0 {
            (col.iter().all(|v| f.is_zero(v))).then(Vec::new)
        } else {
            push.solve(&f, &col, exec)
        };
        cols.push(x.ok_or_else(|| precondition("τ*π̄* leaves the image of π_*"))?);
    }
    let matrix = DenseMat::from_cols(&f, &cols, tgt);
    let rank = if src == 0 || tgt == 0 { 0 } else { matrix.rank(&f, exec) };
    let ext2_dim = ExtSpace::compute(2, &n_b, &n_b, exec)?.dim();
    Ok(TangentSigma {
        matrix,
        rank,
        source_dim: src,
        target_dim: tgt,
        coker_dim: tgt - rank,
        ext2_dim,
        injective: rank == src,
    })
}

/// One hypothesis dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingEntry {
    pub name: String,
    /// None when the space has infinite length.
    pub dim: Option<usize>,
    pub vanishes: bool,
}

/// Ext-vanishing flags for an approximation and its hull.
#[derive(Clone, Debug)]
pub struct VanishingReport {
    pub entries: Vec<VanishingEntry>,
    /// min{i : Ext^i(N, A) ≠ 0}, searched up to dim A.
    pub grade: Option<usize>,
    pub depth_n: i32,
    pub l_free: bool,
}

fn entry<F: Field>(name: &str, i: usize, x: &Module<F>, y: &Module<F>, exec: Exec) -> Result<VanishingEntry> {
    if x.is_zero() || y.is_zero() {
        return Ok(VanishingEntry {
            name: name.into(),
            dim: Some(0),
            vanishes: true,
        });
    }
    let e = ExtSpace::compute(i, x, y, exec)?;
    Ok(VanishingEntry {
        name: name.into(),
        dim: e.dim(),
        vanishes: e.series().is_zero(),
    })
}

pub fn ext_vanishing_report<F: Field>(t: &ApproxTriple<F>, exec: Exec) -> Result<VanishingReport> {
    let hull = fid_hull(t)?;
    let (n, l, m) = (&t.n, &t.l, &t.m);
    let (lp, mp) = (&hull.l_prime, &hull.m_prime);
    let entries = vec![
        entry("Ext1(N,M')", 1, n, mp, exec)?,
        entry("Ext1(L,N)", 1, l, n, exec)?,
        entry("Hom(N,M')", 0, n, mp, exec)?,
        entry("Hom(L,N)", 0, l, n, exec)?,
        entry("Ext2(N,M)", 2, n, m, exec)?,
        entry("Ext2(L',N)", 2, lp, n, exec)?,
    ];
    let ring = n.ring().clone();
    let free = Module::free(ring.clone(), vec![0]);
    let mut grade = None;
    for i in 0..=ring.krull_dim().max(0) as usize {
        if !ExtSpace::compute(i, n, &free, exec)?.series().is_zero() {
            grade = Some(i);
            break;
        }
    }
    let pl = l.prune();
    let l_free = pl.module.rels().is_empty();
    Ok(VanishingReport {
        entries,
        grade,
        depth_n: depth(n)?,
        l_free,
    })
}
