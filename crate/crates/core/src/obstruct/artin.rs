//! Artin coefficient algebras, small extensions between them and flat
//! families of modules over A ⊗ R.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::LiftingProblem;
use crate::error::{precondition, validation, Result};
use crate::field::Field;
use crate::hilbert::HilbertSeries;
use crate::homalg::tor_series;
use crate::linalg::Span;
use crate::module::Module;
use crate::poly::{Poly, PolyRing};
use crate::resolve::resolve;
use crate::ring::{tensor_rings, GradedRing};

/// A finite-dimensional graded quotient k[x₁..x_r]/I, variables in positive degree.
#[derive(Clone, Debug)]
pub struct ArtinAlgebra<F: Field> {
    ring: Arc<GradedRing<F>>,
    basis: Vec<Poly<F>>,
}

impl<F: Field> ArtinAlgebra<F> {
    pub fn new(ring: Arc<GradedRing<F>>) -> Result<Self> {
        if ring.weights().iter().any(|&w| w <= 0) {
            return Err(validation("coefficient algebras need variables of positive degree"));
        }
        let support = ring
            .hilbert_series()
            .support()
            .ok_or_else(|| precondition("coefficient algebra is not finite-dimensional"))?;
        let one = Module::free(ring.clone(), vec![0]);
        let poly = ring.poly();
        let basis = support
            .iter()
            .flat_map(|&d| {
                one.basis(d)
                    .elems
                    .iter()
                    .map(|(m, _)| poly.term(m.clone(), ring.field().one()))
                    .collect::<Vec<_>>()
            })
            .collect();
        Ok(ArtinAlgebra { ring, basis })
    }

    /// k[name]/(name^n) with the variable in degree 1.
    pub fn truncated(field: F, name: &str, n: u32) -> Result<Self> {
        let poly = Arc::new(PolyRing::standard(field, &[name]));
        let g = poly.pow(&poly.var(0), n);
        ArtinAlgebra::new(GradedRing::new(poly, vec![g])?)
    }

    pub fn ring(&self) -> &Arc<GradedRing<F>> {
        &self.ring
    }
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    /// Standard monomials, in increasing degree.
    pub fn basis(&self) -> &[Poly<F>] {
        &self.basis
    }
    /// Standard monomials of positive degree.
    pub fn max_ideal_basis(&self) -> Vec<Poly<F>> {
        self.basis
            .iter()
            .filter(|p| p.homogeneous_degree() != Some(0))
            .cloned()
            .collect()
    }
}

/// p: R′ → R = R′/I with 𝔪_{R′}·I = 0.
#[derive(Clone, Debug)]
pub struct SmallExtension<F: Field> {
    big: ArtinAlgebra<F>,
    small: ArtinAlgebra<F>,
    kernel: Vec<Poly<F>>,
}

impl<F: Field> SmallExtension<F> {
    pub fn new(big: ArtinAlgebra<F>, kernel: &[Poly<F>]) -> Result<Self> {
        let ring = big.ring.clone();
        let poly = ring.poly().clone();
        let gens: Vec<Poly<F>> = kernel.iter().map(|g| ring.reduce(g)).filter(|g| !g.is_zero()).collect();
        if gens.is_empty() {
            return Err(validation("the kernel of a small extension must be nonzero"));
        }
        for g in &gens {
            if !g.is_homogeneous() {
                return Err(validation("kernel generators must be homogeneous"));
            }
            for v in 0..ring.nvars() {
                let p = poly.mul(&poly.var(v), g);
                if !ring.is_zero(&p) {
                    return Err(precondition(format!(
                        "𝔪·I ≠ 0: {} · ({}) ≠ 0",
                        poly.names()[v],
                        poly.render(g)
                    )));
                }
            }
        }
        // 𝔪·I = 0 makes I the k-span of its generators
        let one = Module::free(ring.clone(), vec![0]);
        let ctx = one.ctx();
        let mut spans: BTreeMap<i32, Span<F>> = BTreeMap::new();
        let mut basis = Vec::new();
        for g in gens {
            let d = g.homogeneous_degree().unwrap_or(0);
            let coords = one.coords(&ctx.from_poly_at(&g, 0), d);
            let span = spans.entry(d).or_insert_with(|| Span::new(coords.len()));
            if span.push(ring.field(), &coords) {
                basis.push(g);
            }
        }
        let small = ArtinAlgebra::new(ring.quotient(&basis)?)?;
        Ok(SmallExtension {
            big,
            small,
            kernel: basis,
        })
    }

    pub fn big(&self) -> &ArtinAlgebra<F> {
        &self.big
    }
    pub fn small(&self) -> &ArtinAlgebra<F> {
        &self.small
    }
    /// A k-basis of I.
    pub fn kernel(&self) -> &[Poly<F>] {
        &self.kernel
    }

    /// The induced surjection A ⊗ R′ → A ⊗ R with kernel I·(A ⊗ R′).
    pub fn induced(&self, a: &Arc<GradedRing<F>>) -> Result<LiftingProblem<F>> {
        let (ab, _, pr) = tensor_rings(a, &self.big.ring)?;
        let j: Vec<Poly<F>> = self.kernel.iter().map(|g| ab.poly().embed_from(g, &pr)).collect();
        LiftingProblem::new(ab, &j)
    }
}

/// Certificate of flatness of a family over R: HS(𝒩) = HS(R)·HS(N₀) and
/// Tor₁^{A⊗R}(A, 𝒩) = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FlatnessCertificate {
    pub series: bool,
    pub tor1: bool,
}

impl FlatnessCertificate {
    pub fn holds(&self) -> bool {
        self.series && self.tor1
    }
}

/// A module over A ⊗ R with its closed fiber N₀ = 𝒩 ⊗_R k, certified flat over R.
#[derive(Clone, Debug)]
pub struct FamilyModule<F: Field> {
    base: ArtinAlgebra<F>,
    module: Module<F>,
    /// A ⊗ k: the tensor ring with the variables of R set to zero.
    closed: Arc<GradedRing<F>>,
    fiber: Module<F>,
    certificate: FlatnessCertificate,
}

impl<F: Field> FamilyModule<F> {
    /// `module` must live over tensor_rings(a, base); errors when not flat.
    pub fn new(a: &Arc<GradedRing<F>>, base: &ArtinAlgebra<F>, module: Module<F>) -> Result<Self> {
        let (ab, _, pr) = tensor_rings(a, &base.ring)?;
        if !module.ring().same_as(&ab) {
            return Err(validation("family modules live over A ⊗ R"));
        }
        let poly = ab.poly().clone();
        let rvars: Vec<Poly<F>> = pr.iter().map(|&i| poly.var(i)).collect();
        let closed = ab.quotient(&rvars)?;
        let fiber = module.over(closed.clone())?;
        let rpoly = base
            .ring
            .hilbert_series()
            .as_polynomial()
            .ok_or_else(|| precondition("coefficient algebra is not finite-dimensional"))?;
        let expected = HilbertSeries::new(
            fiber.hilbert_series().numerator().mul(&rpoly),
            fiber.hilbert_series().weights().to_vec(),
        );
        let series = *module.hilbert_series() == expected;
        let residue = {
            let one = Module::free(ab.clone(), vec![0]);
            let ctx = one.ctx();
            let rels = rvars.iter().map(|v| ctx.from_poly_at(v, 0)).collect();
            Module::new(ab.clone(), vec![0], rels)?
        };
        let tor1 = tor_series(&resolve(&residue, 2)?, 1, &module)?.is_zero();
        let certificate = FlatnessCertificate { series, tor1 };
        if !certificate.holds() {
            return Err(precondition(format!(
                "family is not flat over the base (series {}, Tor₁ {})",
                if series { "ok" } else { "wrong" },
                if tor1 { "0" } else { "≠ 0" }
            )));
        }
        Ok(FamilyModule {
            base: base.clone(),
            module,
            closed,
            fiber,
            certificate,
        })
    }

    /// N₀ ⊗_k R over A ⊗ R.
    pub fn trivial(base: &ArtinAlgebra<F>, n0: &Module<F>) -> Result<Self> {
        let a = n0.ring().clone();
        let (ab, pa, _) = tensor_rings(&a, &base.ring)?;
        let src = n0.ctx();
        let rank = n0.rank();
        let tgt = Module::free(ab.clone(), n0.degs().to_vec());
        let ctx = tgt.ctx();
        let rels = n0
            .rels()
            .iter()
            .map(|r| {
                let polys: Vec<Poly<F>> = src
                    .to_polys(r, rank)
                    .iter()
                    .map(|p| ab.poly().embed_from(p, &pa))
                    .collect();
                let refs: Vec<&Poly<F>> = polys.iter().collect();
                ctx.from_polys(&refs)
            })
            .collect();
        let module = Module::new(ab, n0.degs().to_vec(), rels)?;
        FamilyModule::new(&a, base, module)
    }

    pub fn base(&self) -> &ArtinAlgebra<F> {
        &self.base
    }
    pub fn module(&self) -> &Module<F> {
        &self.module
    }
    pub fn closed_ring(&self) -> &Arc<GradedRing<F>> {
        &self.closed
    }
    /// N₀ over A ⊗ k.
    pub fn fiber(&self) -> &Module<F> {
        &self.fiber
    }
    pub fn certificate(&self) -> FlatnessCertificate {
        self.certificate
    }
}
