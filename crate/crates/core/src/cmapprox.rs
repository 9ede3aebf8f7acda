//! Canonical modules, MCM approximations, FID hulls, ω-covers and the
//! fundamental module.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{precondition, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::homalg::{
    canonical_module, cochain_module, ext_dual, extension_from_class, hom_map, hom_module, is_short_exact, res_d,
    ExtSpace, Extension,
};
use crate::module::{hom_basis, unit_vector, Lifter, ModMap, Module};
use crate::resolve::{is_mcm, resolve, Resolution};
use crate::ring::GradedRing;
use crate::vector::{Term, Vector};

/// Seed for the random choices that pick isomorphisms inside Hom spaces.
pub const ISO_SEED: u64 = 0x5eed_0001;

/// 0 → L →ρ M →π N → 0 with M maximal Cohen–Macaulay and L resolved by sums
/// of twists of ω.
#[derive(Clone, Debug)]
pub struct ApproxTriple<F: Field> {
    pub n: Module<F>,
    pub l: Module<F>,
    pub m: Module<F>,
    pub rho: ModMap<F>,
    pub pi: ModMap<F>,
    pub omega: Module<F>,
    /// ω-sum resolution of L: maps ω^{G_0} → … → ω^{G_{c−1}} followed by the
    /// cover ω^{G_{c−1}} → L (empty when L = 0).
    pub l_resolution: Vec<ModMap<F>>,
    pub minimal: bool,
}

/// 0 → N →ι L′ →η M′ → 0 with M′ MCM and L′ of finite ω-resolution.
#[derive(Clone, Debug)]
pub struct HullTriple<F: Field> {
    pub n: Module<F>,
    pub l_prime: Module<F>,
    pub m_prime: Module<F>,
    pub iota: ModMap<F>,
    pub eta: ModMap<F>,
    /// Shift vectors of the ω-sums in the resolution of L′, from the far end to L′'s cover.
    pub l_prime_resolution: Vec<Vec<i32>>,
}

/// 0 → M →ev ω^n → M′ → 0.
#[derive(Clone, Debug)]
pub struct OmegaCover<F: Field> {
    pub ev: ModMap<F>,
    pub cokernel: Module<F>,
    pub proj: ModMap<F>,
    /// Shift of each ω copy (block k is ω shifted by `shifts[k]`).
    pub shifts: Vec<i32>,
}

/// Kernel of a map as a minimally presented module with its inclusion.
pub fn kernel_pruned<F: Field>(f: &ModMap<F>) -> Result<(Module<F>, ModMap<F>)> {
    let (sub, inc) = f.kernel()?;
    let p = sub.prune();
    let images = p.to_old.iter().map(|w| inc.apply(w)).collect();
    Ok((
        p.module.clone(),
        ModMap::new_unchecked(p.module, inc.target().clone(), images),
    ))
}

/// A certified isomorphism Q → N of degree 0, found as a random element of
/// Hom_0(Q, N).
pub fn find_isomorphism<F: Field>(q: &Module<F>, n: &Module<F>, exec: Exec) -> Result<ModMap<F>> {
    if q.hilbert_series() != n.hilbert_series() {
        return Err(precondition("modules have different Hilbert series"));
    }
    find_surjection(q, n, exec).map_err(|_| precondition("no isomorphism found among degree-0 homomorphisms"))
}

/// A surjection Q → N of degree 0, found as a random element of Hom_0(Q, N).
pub fn find_surjection<F: Field>(q: &Module<F>, n: &Module<F>, exec: Exec) -> Result<ModMap<F>> {
    let basis = hom_basis(q, n, 0, exec);
    if basis.is_empty() {
        return Err(precondition("no degree-0 homomorphisms"));
    }
    let f = q.ring().field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(ISO_SEED);
    for _ in 0..8 {
        let coefs: Vec<F::Elem> = basis.iter().map(|_| f.random(&mut rng)).collect();
        let m = ModMap::combination(&basis, &coefs).expect("nonempty");
        let m = ModMap::new_unchecked(q.clone(), n.clone(), m.images().to_vec());
        if m.is_surjective()? {
            return Ok(m);
        }
    }
    Err(precondition("no surjection found among degree-0 homomorphisms"))
}

/// Checks that ω-sum complexes resolve L: every composite vanishes and the
/// alternating sum of series equals HS(L), with each spot exact.
fn certify_omega_resolution<F: Field>(maps: &[ModMap<F>]) -> Result<bool> {
    for w in maps.windows(2) {
        if !w[1].compose(&w[0]).is_zero() {
            return Ok(false);
        }
    }
    let Some(last) = maps.last() else { return Ok(true) };
    if !last.is_surjective()? {
        return Ok(false);
    }
    if let Some(first) = maps.first() {
        if !first.is_injective()? {
            return Ok(false);
        }
    }
    for w in maps.windows(2) {
        // ker w[1] = im w[0]
        let ker = w[1].source().hilbert_series().sub(&w[1].image_series()?);
        if ker != w[0].image_series()? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimal MCM approximation of N, Cohen–Macaulay of codimension c, by
/// ω-dualising the c-th syzygy of N^∨ = Ext^c(N, ω).
pub fn mcm_approx_cm<F: Field>(n: &Module<F>, c: i32, exec: Exec) -> Result<ApproxTriple<F>> {
    let ring = n.ring().clone();
    let omega = canonical_module(&ring)?;
    if c < 0 {
        return Err(precondition("codimension must be non-negative"));
    }
    let nd = ext_dual(n, c)?;
    if c == 0 {
        let zero = Module::free(ring.clone(), vec![]);
        return Ok(ApproxTriple {
            n: n.clone(),
            l: zero.clone(),
            m: n.clone(),
            rho: ModMap::zero(zero, n.clone()),
            pi: ModMap::identity(n),
            omega,
            l_resolution: vec![],
            minimal: true,
        });
    }
    let c = c as usize;
    let res = resolve(&nd, c + 1)?;
    let deltas: Vec<ModMap<F>> = (1..=c + 1)
        .map(|k| Ok(hom_map(&omega, &res_d(&res, k)?)))
        .collect::<Result<_>>()?;
    // deltas[k] = δ^k : ω^{G_k} → ω^{G_{k+1}}
    let (m, inc) = kernel_pruned(&deltas[c])?;
    let dc1 = &deltas[c - 1];
    let lifter = Lifter::new(inc.clone(), exec);
    let l_gens: Vec<Vector<F>> = dc1
        .images()
        .iter()
        .map(|y| lifter.solve(y, "coboundary into the kernel"))
        .collect::<Result<_>>()?;
    let (l, rho) = m.submodule(&l_gens)?;
    let q = rho.cokernel()?;
    let iso = find_isomorphism(&q, n, exec)?;
    let pi = ModMap::new(m.clone(), n.clone(), iso.images().to_vec())?;
    if !is_short_exact(&rho, &pi)? {
        return Err(precondition("approximation sequence failed its exactness certificate"));
    }
    if !is_mcm(&m)? {
        return Err(precondition("approximating module is not maximal Cohen-Macaulay"));
    }
    let poly = ring.poly().clone();
    let cover = ModMap::new_unchecked(
        dc1.source().clone(),
        l.clone(),
        (0..l.rank()).map(|g| unit_vector(&poly, g as u32)).collect(),
    );
    let mut l_resolution: Vec<ModMap<F>> = deltas[..c - 1].to_vec();
    l_resolution.push(cover);
    if !certify_omega_resolution(&l_resolution)? {
        return Err(precondition("omega resolution of the kernel failed its certificate"));
    }
    // the ω-dual complex has no scalar entries exactly when the resolution is minimal
    let minimal = deltas.iter().all(|d| !d.matrix().has_unit_entry());
    Ok(ApproxTriple {
        n: n.clone(),
        l,
        m,
        rho,
        pi,
        omega,
        l_resolution,
        minimal,
    })
}

/// Second construction of the approximation of k in dimension 2:
/// M = Hom(Syz²k, ω) from the generic Hom computation, with L = ω^{β₁}/ω.
pub fn approx_residue_field_dim2<F: Field>(ring: &Arc<GradedRing<F>>, exec: Exec) -> Result<ApproxTriple<F>> {
    if ring.krull_dim() != 2 {
        return Err(precondition(format!("ring has dimension {}, not 2", ring.krull_dim())));
    }
    let omega = canonical_module(ring)?;
    let k = Module::residue_field(ring.clone(), 0);
    let res = resolve(&k, 3)?;
    let syz2 = res.syzygy_module(2)?;
    let hom = hom_module(&syz2, &omega)?;
    let m = hom.module.clone();
    // Hom(Syz², ω) ⊆ Hom(G_2, ω): generator k ↦ its cochain
    let g2 = res.degs(2).to_vec();
    let c2 = cochain_module(&omega, &g2);
    // syz2 is presented on G_2, so each map is already a cochain on G_2
    let incl_images: Vec<Vector<F>> = hom
        .maps
        .iter()
        .map(|imgs| crate::homalg::images_to_cochain(&omega, imgs))
        .collect();
    let incl = ModMap::new_unchecked(m.clone(), c2.clone(), incl_images);
    let d1 = hom_map(&omega, res.d(2));
    let lifter = Lifter::new(incl, exec);
    let l_gens: Vec<Vector<F>> = d1
        .images()
        .iter()
        .map(|y| lifter.solve(y, "cocycle into Hom(Syz2, omega)"))
        .collect::<Result<_>>()?;
    let (l, rho) = m.submodule(&l_gens)?;
    let q = rho.cokernel()?;
    let nd = Module::residue_field(ring.clone(), q.hilbert_series().numerator().low());
    let iso = find_isomorphism(&q, &nd, exec)?;
    let pi = ModMap::new(m.clone(), nd.clone(), iso.images().to_vec())?;
    if !is_short_exact(&rho, &pi)? {
        return Err(precondition("approximation sequence failed its exactness certificate"));
    }
    let d0 = hom_map(&omega, res.d(1));
    let poly = ring.poly().clone();
    let cover = ModMap::new_unchecked(
        d1.source().clone(),
        l.clone(),
        (0..l.rank()).map(|g| unit_vector(&poly, g as u32)).collect(),
    );
    let l_resolution = vec![d0, cover];
    if !certify_omega_resolution(&l_resolution)? {
        return Err(precondition("omega resolution of the kernel failed its certificate"));
    }
    let minimal = l_resolution[..1].iter().all(|d| !d.matrix().has_unit_entry());
    Ok(ApproxTriple {
        n: nd,
        l,
        m,
        rho,
        pi,
        omega,
        l_resolution,
        minimal,
    })
}

/// The evaluation map M → ⊕ ω(d_k) over generators φ_k of Hom(M, ω).
pub fn omega_cover<F: Field>(m: &Module<F>, omega: &Module<F>) -> Result<OmegaCover<F>> {
    if !is_mcm(m)? {
        return Err(precondition("omega cover needs a maximal Cohen-Macaulay module"));
    }
    let hom = hom_module(m, omega)?;
    let mu = omega.rank();
    let shifts: Vec<i32> = hom.module.degs().iter().map(|d| -d).collect();
    let target = omega.sum_shifted(&shifts);
    let ctx = target.ctx();
    let images: Vec<Vector<F>> = (0..m.rank())
        .map(|j| {
            let mut terms = Vec::new();
            for (k, phi) in hom.maps.iter().enumerate() {
                for t in &phi[j].terms {
                    terms.push(Term {
                        mono: t.mono.clone(),
                        comp: (k * mu) as u32 + t.comp,
                        coef: t.coef.clone(),
                    });
                }
            }
            ctx.from_terms(terms)
        })
        .collect();
    let ev = ModMap::new(m.clone(), target.clone(), images)?;
    if !ev.is_injective()? {
        return Err(precondition("evaluation into omega is not injective"));
    }
    let cokernel = ev.cokernel()?;
    let poly = m.ring().poly().clone();
    let proj = ModMap::new_unchecked(
        target.clone(),
        cokernel.clone(),
        (0..target.rank()).map(|g| unit_vector(&poly, g as u32)).collect(),
    );
    Ok(OmegaCover {
        ev,
        cokernel,
        proj,
        shifts,
    })
}

/// FID hull by pushing the ω-cover of M out along π.
pub fn fid_hull<F: Field>(t: &ApproxTriple<F>) -> Result<HullTriple<F>> {
    let cover = omega_cover(&t.m, &t.omega)?;
    let w = cover.ev.target();
    let n = &t.n;
    let ring = n.ring().clone();
    let poly = ring.poly().clone();
    let off = w.rank() as u32;
    let sum = Module::direct_sum(&[w, n]);
    let ctx = sum.ctx();
    let rels: Vec<Vector<F>> = (0..t.m.rank())
        .map(|j| {
            let a = &cover.ev.images()[j];
            ctx.sub(a, &ctx.offset(&t.pi.images()[j], off))
        })
        .collect();
    let l_prime = sum.quotient(&rels)?;
    let iota = ModMap::new(
        n.clone(),
        l_prime.clone(),
        (0..n.rank()).map(|g| unit_vector(&poly, off + g as u32)).collect(),
    )?;
    let mut eta_images: Vec<Vector<F>> = (0..w.rank()).map(|g| unit_vector(&poly, g as u32)).collect();
    eta_images.extend((0..n.rank()).map(|_| Vector::zero()));
    let eta = ModMap::new(l_prime.clone(), cover.cokernel.clone(), eta_images)?;
    if !is_short_exact(&iota, &eta)? {
        return Err(precondition("hull sequence failed its exactness certificate"));
    }
    if !cover.cokernel.is_zero() && !is_mcm(&cover.cokernel)? {
        return Err(precondition("hull cokernel is not maximal Cohen-Macaulay"));
    }
    // 0 → L → ω^n → L′ → 0 extends L's ω-resolution by one step
    let mut l_prime_resolution: Vec<Vec<i32>> = t
        .l_resolution
        .iter()
        .map(|m| omega_shifts(m.source(), &t.omega))
        .collect();
    l_prime_resolution.push(cover.shifts.clone());
    Ok(HullTriple {
        n: n.clone(),
        l_prime,
        m_prime: cover.cokernel,
        iota,
        eta,
        l_prime_resolution,
    })
}

/// Block shifts of an ω-sum built by `sum_shifted`.
fn omega_shifts<F: Field>(sum: &Module<F>, omega: &Module<F>) -> Vec<i32> {
    let mu = omega.rank();
    sum.degs().chunks(mu).map(|blk| blk[0] - omega.degs()[0]).collect()
}

/// Q′ = Hom(ω, L′) with a certificate of finite projective dimension.
#[derive(Clone, Debug)]
pub struct QPrime<F: Field> {
    pub module: Module<F>,
    pub resolution: Resolution<F>,
    pub pd: usize,
}

pub fn q_prime<F: Field>(hull: &HullTriple<F>, omega: &Module<F>) -> Result<QPrime<F>> {
    if hull.l_prime_resolution.is_empty() {
        return Err(precondition("L' carries no omega resolution"));
    }
    let h = hom_module(omega, &hull.l_prime)?;
    let ring = omega.ring();
    let steps = ring.krull_dim().max(0) as usize + hull.l_prime_resolution.len() + 1;
    let resolution = resolve(&h.module, steps)?;
    let pd = resolution
        .pd()
        .ok_or_else(|| precondition("Hom(omega, L') has no finite free resolution in range"))?;
    Ok(QPrime {
        module: h.module,
        resolution,
        pd,
    })
}

/// E in 0 → ω → E → 𝔪 → 0 from the generator of Ext¹(𝔪, ω).
pub fn fundamental_module<F: Field>(ring: &Arc<GradedRing<F>>, exec: Exec) -> Result<Extension<F>> {
    if ring.krull_dim() != 2 {
        return Err(precondition(format!(
            "fundamental module needs dimension 2, ring has {}",
            ring.krull_dim()
        )));
    }
    let omega = canonical_module(ring)?;
    let poly = ring.poly();
    let vars: Vec<_> = (0..ring.nvars()).map(|i| poly.var(i)).collect();
    let m = Module::ideal(ring.clone(), &vars)?;
    let ext = ExtSpace::compute(1, &m, &omega, exec)?;
    match ext.dim() {
        Some(1) => {}
        Some(0) => return Err(precondition("Ext^1(m, omega) = 0")),
        other => {
            return Err(precondition(format!(
                "Ext^1(m, omega) has dimension {other:?}, expected 1"
            )))
        }
    }
    let one = vec![ring.field().one()];
    let e = extension_from_class(&ext, &one)?;
    if !is_short_exact(&e.rho, &e.pi)? {
        return Err(precondition("fundamental sequence failed its exactness certificate"));
    }
    Ok(e)
}

/// Type t(A) = μ(ω).
pub fn ring_type<F: Field>(ring: &Arc<GradedRing<F>>) -> Result<usize> {
    Ok(canonical_module(ring)?.mu())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use num_rational::Ratio;

    #[test]
    fn approximation_of_k_over_the_quadric_cone() {
        let a = GradedRing::veronese(PrimeField::default(), 2).unwrap();
        let k = Module::residue_field(a.clone(), 0);
        let t = mcm_approx_cm(&k, 2, Exec::Sequential).unwrap();
        assert_eq!(t.m.mu(), 4);
        assert_eq!(t.m.rank_over_ring(), Ratio::from_integer(2));
        assert!(t.minimal);
        let other = approx_residue_field_dim2(&a, Exec::Sequential).unwrap();
        assert_eq!(other.m.mu(), 4);
        assert_eq!(
            other.m.hilbert_series().shift(0).numerator().eval_one(),
            t.m.hilbert_series().numerator().eval_one()
        );
    }

    #[test]
    fn mcm_input_is_its_own_approximation() {
        let a = GradedRing::veronese(PrimeField::default(), 2).unwrap();
        let free = Module::free(a, vec![0]);
        let t = mcm_approx_cm(&free, 0, Exec::Sequential).unwrap();
        assert!(t.l.is_zero());
    }
}
