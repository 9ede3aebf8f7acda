//! Naturality of the obstruction: base change along a map of square-zero
//! extensions, and the identities relating ob(𝒩) to ob(𝓜) and ob(𝓛′) through
//! the approximation and hull sequences.

use std::sync::Arc;

use super::{reduced_resolution, to_pruned, LiftOutcome, Lifting, LiftingContext, LiftingProblem, ObstructionClass};
use crate::cmapprox::{fid_hull, ApproxTriple};
use crate::error::{precondition, validation, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::homalg::{ext_contra, ext_cov, ExtSpace};
use crate::module::{Lifter, ModMap, Module};
use crate::poly::Poly;
use crate::vector::{Term, Vector};

/// S′ = B′/K and S = S′/H, all in the polynomial ring of B′. The square
/// B′ → B, S′ → S commutes when J ⊂ K + H.
#[derive(Clone, Debug)]
pub struct BaseChange<F: Field> {
    pub k: Vec<Poly<F>>,
    pub h: Vec<Poly<F>>,
}

#[derive(Clone, Debug)]
pub struct BaseChangeReport<F: Field> {
    /// τ_* ob(q, N), in the basis of Ext²_S(N_S, N_S ⊗ H) over F ⊗ S.
    pub pushed: ObstructionClass<F>,
    /// ob(q_S, N_S) from F ⊗ S.
    pub reduced: ObstructionClass<F>,
    /// ob(q_S, N_S) from a fresh resolution, carried to the same basis.
    pub fresh: ObstructionClass<F>,
    pub agree: bool,
    /// Per degree-0 Ext¹ basis class ξ: (L + ξ)_S = L_S + τ_*ξ. None when obstructed.
    pub torsor: Option<Vec<bool>>,
}

impl<F: Field> BaseChangeReport<F> {
    pub fn holds(&self) -> bool {
        self.agree && self.torsor.as_ref().is_none_or(|t| t.iter().all(|&b| b))
    }
}

/// Σ c_m h_m with τ(j_l) = Σ c_lm h_m in S′: the map X → X_S on
/// generators (i, l) ↦ Σ c_lm (i, m).
fn tau_images<F: Field>(ctx: &LiftingContext<F>, ctx_s: &LiftingContext<F>, exec: Exec) -> Result<Vec<Vector<F>>> {
    let q = ctx.problem();
    let qs = ctx_s.problem();
    let s_big = qs.big().clone();
    let one = Module::free(s_big.clone(), vec![0]);
    let hmap = ModMap::new_unchecked(
        Module::free(s_big.clone(), qs.j_degrees()),
        one.clone(),
        qs.j().iter().map(|h| one.ctx().from_poly_at(h, 0)).collect(),
    );
    let lifter = Lifter::new(hmap, exec);
    let coefs: Vec<Vector<F>> = q
        .j()
        .iter()
        .map(|g| {
            let v = one.ctx().from_poly_at(&s_big.reduce(g), 0);
            lifter.solve(&v, "J ⊂ K + H")
        })
        .collect::<Result<_>>()?;
    let small = qs.small();
    let (s, t) = (q.j().len(), qs.j().len());
    let xs = ctx_s.x();
    let mut out = Vec::with_capacity(ctx.n().rank() * s);
    for i in 0..ctx.n().rank() {
        for c in &coefs {
            let terms = c
                .terms
                .iter()
                .map(|tm| Term {
                    mono: tm.mono.clone(),
                    comp: (i * t) as u32 + tm.comp,
                    coef: tm.coef.clone(),
                })
                .collect();
            let v = xs.ctx().from_terms(terms);
            out.push(xs.reduce(&small.reduce_vec(&v)));
        }
    }
    Ok(out)
}

fn reduce_lifting<F: Field>(l: &Lifting<F>, ring: &Arc<crate::ring::GradedRing<F>>) -> Result<Lifting<F>> {
    let d1 = l.d1.reduce(ring);
    let module = Module::coker(ring.clone(), &d1)?;
    Ok(Lifting { d1, module })
}

/// Compares τ_* ob(q, N) with ob(q_S, N ⊗ S), and (when N lifts) checks
/// (L + ξ) ⊗ S′ = L ⊗ S′ + τ_*ξ for each degree-0 class ξ.
pub fn base_change_ob<F: Field>(
    q: &LiftingProblem<F>,
    n: &Module<F>,
    bc: &BaseChange<F>,
    exec: Exec,
) -> Result<BaseChangeReport<F>> {
    let ctx = LiftingContext::new(q, n, exec)?;
    let s_big = q.big().quotient(&bc.k)?;
    let hs: Vec<Poly<F>> = bc.h.iter().map(|h| s_big.reduce(h)).filter(|h| !h.is_zero()).collect();
    if hs.is_empty() {
        return Err(validation("H must be nonzero in S′"));
    }
    let qs = LiftingProblem::new(s_big.clone(), &hs)?;
    if let Some(g) = q.j().iter().find(|g| !qs.small().is_zero(g)) {
        return Err(precondition(format!(
            "base change square does not commute: {} ∉ K + H",
            q.big().poly().render(g)
        )));
    }
    let f_s = reduced_resolution(
        ctx.resolution(),
        qs.small(),
        "Tor₁ of N against the base change does not vanish",
    )?;
    let ctx_s = LiftingContext::with_resolution(&qs, Arc::new(f_s), exec)?;
    let tau = tau_images(&ctx, &ctx_s, exec)?;
    let xs = ctx_s.x();
    let small = qs.small();
    let apply_tau = |v: &Vector<F>| -> Vector<F> {
        let c = xs.ctx();
        let mut acc = Vector::zero();
        for t in &v.terms {
            acc = c.axpy(&acc, &t.coef, Some(&t.mono), &tau[t.comp as usize].terms);
        }
        xs.reduce(&small.reduce_vec(&acc))
    };
    let field = q.big().field().clone();

    let pushed_images: Vec<Vector<F>> = ctx.eta2()?.iter().map(&apply_tau).collect();
    let pushed = ctx_s.class(ctx_s.ext2().classify(&ctx_s.ext2().from_images(&pushed_images))?);
    let reduced = ctx_s.obstruction()?;

    // a fresh resolution of N_S, compared through X_fresh → X_S and the identity
    let n_s = ctx_s.resolution().module.clone();
    let fresh_ctx = LiftingContext::new(&qs, &n_s, exec)?;
    let ob_fresh = fresh_ctx.obstruction()?;
    let t = qs.j().len();
    let fres = fresh_ctx.resolution();
    let mut g_images = Vec::new();
    for old in &fres.pruned.to_old {
        for m in 0..t {
            let terms = old
                .terms
                .iter()
                .map(|tm| Term {
                    mono: tm.mono.clone(),
                    comp: tm.comp * t as u32 + m as u32,
                    coef: tm.coef.clone(),
                })
                .collect();
            g_images.push(xs.reduce(&small.reduce_vec(&xs.ctx().from_terms(terms))));
        }
    }
    let g = ModMap::new(fresh_ctx.x().clone(), xs.clone(), g_images)?;
    let mid = ExtSpace::new(fres.clone(), 2, xs, exec)?;
    let cov = ext_cov(&g, fresh_ctx.ext2(), &mid)?;
    let contra = ext_contra(&ModMap::identity(&n_s), &mid, ctx_s.ext2())?;
    let carried = contra.mul_vec(&field, &cov.mul_vec(&field, &ob_fresh.coords));
    let fresh = ctx_s.class(carried);
    let agree = pushed.same_as(&reduced) && pushed.same_as(&fresh);

    let torsor = match ctx.lift()? {
        LiftOutcome::Obstructed(_) => None,
        LiftOutcome::Lifted(l) => {
            let l_s = reduce_lifting(&l, &s_big)?;
            let degs = ctx.ext1().basis_degrees();
            let mut out = Vec::new();
            for k in (0..degs.len()).filter(|&k| degs[k] == 0) {
                let mut xi = vec![field.zero(); degs.len()];
                xi[k] = field.one();
                let l2 = reduce_lifting(&ctx.torsor_act(&l, &xi)?, &s_big)?;
                let images: Vec<Vector<F>> = ctx
                    .ext1()
                    .to_images(&ctx.ext1().cochain_of(&xi))
                    .iter()
                    .map(&apply_tau)
                    .collect();
                let zeta = ctx_s.ext1().classify(&ctx_s.ext1().from_images(&images))?;
                out.push(ctx_s.lifting_difference(&l2, &l_s)? == zeta);
            }
            Some(out)
        }
    };
    Ok(BaseChangeReport {
        pushed,
        reduced,
        fresh,
        agree,
        torsor,
    })
}

/// f ⊗ J: X_P → X_Q for f: P → Q, in the generators (i, l) of both contexts.
fn tensor_j<F: Field>(f: &ModMap<F>, cp: &LiftingContext<F>, cq: &LiftingContext<F>) -> Result<ModMap<F>> {
    let s = cp.problem().j().len() as u32;
    let xq = cq.x();
    let ring = xq.ring().clone();
    let mut images = Vec::new();
    for old in &cp.resolution().pruned.to_old {
        let w = to_pruned(cq.resolution(), &f.apply(old));
        for l in 0..s {
            let terms = w
                .terms
                .iter()
                .map(|t| Term {
                    mono: t.mono.clone(),
                    comp: t.comp * s + l,
                    coef: t.coef.clone(),
                })
                .collect();
            images.push(xq.reduce(&ring.reduce_vec(&xq.ctx().from_terms(terms))));
        }
    }
    ModMap::new(cp.x().clone(), xq.clone(), images)
}

/// f_* ob(P) and f^* ob(Q) in Ext²_B(P, Q ⊗ J) for f: P → Q.
fn compare_along<F: Field>(
    f: &ModMap<F>,
    cp: &LiftingContext<F>,
    cq: &LiftingContext<F>,
    exec: Exec,
) -> Result<(Vec<F::Elem>, Vec<F::Elem>)> {
    let field = f.source().ring().field().clone();
    let mid = ExtSpace::new(cp.resolution().clone(), 2, cq.x(), exec)?;
    let push = ext_cov(&tensor_j(f, cp, cq)?, cp.ext2(), &mid)?;
    let pull = ext_contra(f, cq.ext2(), &mid)?;
    let lhs = push.mul_vec(&field, &cp.obstruction()?.coords);
    let rhs = pull.mul_vec(&field, &cq.obstruction()?.coords);
    Ok((lhs, rhs))
}

#[derive(Clone, Debug)]
pub struct OmapReport<F: Field> {
    /// π^* ob(𝒩) and (π ⊗ J)_* ob(𝓜) in Ext²_B(𝓜, 𝒩 ⊗ J).
    pub approx: (Vec<F::Elem>, Vec<F::Elem>),
    /// (ι ⊗ J)_* ob(𝒩) and ι^* ob(𝓛′) in Ext²_B(𝒩, 𝓛′ ⊗ J).
    pub hull: (Vec<F::Elem>, Vec<F::Elem>),
    /// For free 𝓛 and a liftable 𝓜: per degree-0 class ξ of Ext¹_B(𝓜, 𝓜 ⊗ J),
    /// whether π^*δ = (π ⊗ J)_*ξ, δ the difference of the induced liftings of 𝒩.
    pub difference: Option<Vec<bool>>,
}

impl<F: Field> OmapReport<F> {
    pub fn holds(&self) -> bool {
        self.approx.0 == self.approx.1
            && self.hull.0 == self.hull.1
            && self.difference.as_ref().is_none_or(|d| d.iter().all(|&b| b))
    }
}

/// The induced lifting of 𝒩 = 𝓜̃/ρ̃(𝓛) in the context of 𝒩.
fn quotient_lifting<F: Field>(
    t: &ApproxTriple<F>,
    m_lift: &Lifting<F>,
    cm: &LiftingContext<F>,
    cn: &LiftingContext<F>,
    l_gens: &[Vector<F>],
) -> Result<Lifting<F>> {
    let b = cn.problem().small().clone();
    let rho: Vec<Vector<F>> = l_gens
        .iter()
        .map(|v| to_pruned(cm.resolution(), &t.rho.apply(v)))
        .collect();
    let n_tilde = m_lift.module.quotient(&rho)?;
    let n_bar = n_tilde.over(b.clone())?;
    let theta = ModMap::new(
        n_bar,
        t.n.clone(),
        cm.resolution()
            .pruned
            .to_old
            .iter()
            .map(|v| t.n.reduce(&b.reduce_vec(&t.pi.apply(v))))
            .collect(),
    )?;
    cn.canonical_lifting(&n_tilde, &theta)
}

/// Checks the identities tying ob(𝒩) to ob(𝓜) and ob(𝓛′) for an
/// approximation triple over B.
pub fn omap_check<F: Field>(q: &LiftingProblem<F>, t: &ApproxTriple<F>, exec: Exec) -> Result<OmapReport<F>> {
    if !t.n.ring().same_as(q.small()) {
        return Err(validation("the triple must live over B = B′/J"));
    }
    let cn = LiftingContext::new(q, &t.n, exec)?;
    let cm = LiftingContext::new(q, &t.m, exec)?;
    let approx = compare_along(&t.pi, &cm, &cn, exec)?;
    let hull = fid_hull(t)?;
    let cl = LiftingContext::new(q, &hull.l_prime, exec)?;
    let hull_pair = compare_along(&hull.iota, &cn, &cl, exec)?;

    let pruned_l = t.l.prune();
    let difference = if !pruned_l.module.rels().is_empty() {
        None
    } else {
        match cm.lift()? {
            LiftOutcome::Obstructed(_) => None,
            LiftOutcome::Lifted(m1) => {
                let field = q.big().field().clone();
                let l_gens = &pruned_l.to_old;
                let n1 = quotient_lifting(t, &m1, &cm, &cn, l_gens)?;
                let mid = ExtSpace::new(cm.resolution().clone(), 1, cn.x(), exec)?;
                let push = ext_cov(&tensor_j(&t.pi, &cm, &cn)?, cm.ext1(), &mid)?;
                let pull = ext_contra(&t.pi, cn.ext1(), &mid)?;
                let degs = cm.ext1().basis_degrees();
                let mut out = Vec::new();
                for k in (0..degs.len()).filter(|&k| degs[k] == 0) {
                    let mut xi = vec![field.zero(); degs.len()];
                    xi[k] = field.one();
                    let m2 = cm.torsor_act(&m1, &xi)?;
                    let n2 = quotient_lifting(t, &m2, &cm, &cn, l_gens)?;
                    let delta = cn.lifting_difference(&n2, &n1)?;
                    out.push(pull.mul_vec(&field, &delta) == push.mul_vec(&field, &xi));
                }
                Some(out)
            }
        }
    };
    Ok(OmapReport {
        approx,
        hull: hull_pair,
        difference,
    })
}
