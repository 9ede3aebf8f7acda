//! Verification suites: named identities with both sides evaluated
//! independently and rendered for reports.

use std::fmt::{Debug, Display};
use std::sync::Arc;

use num_rational::Ratio;

use crate::cmapprox::{approx_residue_field_dim2, fundamental_module, mcm_approx_cm, ring_type, ApproxTriple};
use crate::error::Result;
use crate::exec::Exec;
use crate::field::{Field, PrimeField};
use crate::homalg::{is_short_exact, ExtSpace};
use crate::mf::{eisenbud_resolution, knorrer, knorrer_approx, MatrixFactorization};
use crate::module::Module;
use crate::mono::MonomialOrder;
use crate::obstruct::{
    base_change_ob, brute_force_liftings, liftings_isomorphic, ob_regular_quotient, omap_check, splits_pibar,
    tangent_sigma, ArtinAlgebra, BaseChange, FamilyModule, LiftOutcome, Lifting, LiftingContext, LiftingProblem,
    SmallExtension,
};
use crate::poly::{Poly, PolyRing};
use crate::resolve::resolve;
use crate::ring::{tensor_rings, GradedRing};
use crate::text::parse_poly;

/// One checked identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub name: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl Identity {
    pub fn eq<T: PartialEq + Debug>(name: impl Into<String>, lhs: T, rhs: T) -> Self {
        Identity {
            name: name.into(),
            pass: lhs == rhs,
            lhs: format!("{lhs:?}"),
            rhs: format!("{rhs:?}"),
        }
    }

    /// Like `eq`, rendering both sides with `Display`.
    pub fn shown<T: PartialEq + Display>(name: impl Into<String>, lhs: T, rhs: T) -> Self {
        Identity {
            name: name.into(),
            pass: lhs == rhs,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }

    pub fn holds(name: impl Into<String>, what: impl Into<String>, ok: bool) -> Self {
        Identity {
            name: name.into(),
            lhs: what.into(),
            rhs: "true".into(),
            pass: ok,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub identities: Vec<Identity>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|i| i.pass)
    }
    pub fn failures(&self) -> Vec<&Identity> {
        self.identities.iter().filter(|i| !i.pass).collect()
    }
}

type K = PrimeField;
type R = Arc<GradedRing<K>>;

fn ring(names: &[&str], weights: &[i32], rels: &[&str]) -> Result<R> {
    let poly = Arc::new(PolyRing::new(
        K::default(),
        names.iter().map(|s| s.to_string()).collect(),
        weights.to_vec(),
        MonomialOrder::Grevlex,
    )?);
    let gens = rels.iter().map(|r| parse_poly(&poly, r)).collect::<Result<Vec<_>>>()?;
    GradedRing::new(poly, gens)
}

fn poly(r: &R, s: &str) -> Result<Poly<K>> {
    parse_poly(r.poly(), s)
}

/// The cyclic module R/(rels).
fn cyclic(r: &R, rels: &[&str]) -> Result<Module<K>> {
    let one = Module::free(r.clone(), vec![0]);
    let v = rels
        .iter()
        .map(|s| Ok(one.ctx().from_poly_at(&poly(r, s)?, 0)))
        .collect::<Result<Vec<_>>>()?;
    Module::new(r.clone(), vec![0], v)
}

/// The residue field approximation and fundamental module of A(m).
pub fn veronese(m: usize, exec: Exec) -> Result<SuiteReport> {
    let a = GradedRing::veronese(K::default(), m)?;
    let k = Module::residue_field(a.clone(), 0);
    let t = mcm_approx_cm(&k, 2, exec)?;
    let mm = &t.m;
    let mi = m as i64;
    let mu = mm.mu() as i64;
    let rank = mm.rank_over_ring();
    let beta1 = resolve(&k, 1)?.degs(1).len() as i64;
    let ta = ring_type(&a)? as i64;
    let e1 = ExtSpace::compute(1, mm, mm, exec)?.dim().map(|d| d as i64);
    let mut ids = vec![
        Identity::holds(
            "approximation certified",
            "0 → L → M → k → 0 exact, M MCM",
            is_short_exact(&t.rho, &t.pi)?,
        ),
        Identity::eq("mu(M) = m^2", mu, mi * mi),
        Identity::shown("rank(M) = beta1 - 1", rank, Ratio::from_integer(beta1 - 1)),
        Identity::shown("rank(M) = m", rank, Ratio::from_integer(mi)),
        Identity::eq("beta1 = m + 1", beta1, mi + 1),
        Identity::eq("dim Ext1(M,M) = (m-1) m^2", e1, Some((mi - 1) * mi * mi)),
        Identity::eq("mu(M) = t(A) beta1 + 1", mu, ta * beta1 + 1),
    ];
    let other = approx_residue_field_dim2(&a, exec)?;
    ids.push(Identity::eq("two constructions: mu", other.m.mu(), mm.mu()));
    let (h1, h2) = (other.m.hilbert_series(), mm.hilbert_series());
    ids.push(Identity {
        name: "two constructions: Hilbert series".into(),
        lhs: h1.render(),
        rhs: h2.render(),
        pass: h1 == h2,
    });
    let e = fundamental_module(&a, exec)?;
    let em = &e.module;
    ids.push(Identity::shown(
        "rank(E) = 2",
        em.rank_over_ring(),
        Ratio::from_integer(2),
    ));
    ids.push(Identity::eq("mu(E) = 2m", em.mu() as i64, 2 * mi));
    ids.push(Identity::eq(
        "dim Ext1(E,E) = 4(m-1)",
        ExtSpace::compute(1, em, em, exec)?.dim().map(|d| d as i64),
        Some(4 * (mi - 1)),
    ));
    Ok(SuiteReport {
        suite: format!("veronese m={m}"),
        identities: ids,
    })
}

/// (x, x^{k-1}) over k[x]: the node for k = 2, the cusp for k = 3.
pub fn knorrer_case(k: u32, exec: Exec) -> Result<SuiteReport> {
    let q = ring(&["x"], &[1], &[])?;
    let p = q.poly().clone();
    let x = p.var(0);
    let mf = MatrixFactorization::from_entries(q.clone(), p.pow(&x, k), &[vec![x.clone()]], &[vec![p.pow(&x, k - 1)]])?;
    let big = knorrer(&mf)?;
    let mut ids = vec![Identity::holds(
        "Phi Psi = Psi Phi = F I",
        big.render(),
        big.check().is_ok(),
    )];
    let b = GradedRing::new(p.clone(), vec![p.pow(&x, k)])?;
    let n = Module::residue_field(b.clone(), 0);
    let ka = knorrer_approx(&n, exec)?;
    let c = eisenbud_resolution(&ka.dual_mf, 6)?;
    ids.push(Identity::holds("Eisenbud complex: d^2 = 0", "6 steps", c.is_complex()));
    ids.push(Identity::holds("Eisenbud complex exact", "6 steps", c.is_exact()?));
    let ap = c.ring.poly().clone();
    let periodic = (2..c.len().saturating_sub(1))
        .all(|i| c.degs[i].len() == c.degs[i + 1].len() && c.d(i).entries(&ap) == c.d(i + 2).entries(&ap))
        && c.len() == 6;
    ids.push(Identity::holds(
        "Eisenbud complex 2-periodic",
        "d_{i+2} = d_i for i >= 2",
        periodic,
    ));
    let t = &ka.triple;
    ids.push(Identity::holds(
        "approximation exact",
        "0 → L → M → N → 0",
        is_short_exact(&t.rho, &t.pi)?,
    ));
    let l_free = t.l.prune().module.rels().is_empty();
    ids.push(Identity::holds("kernel free", format!("rank {}", ka.free_rank), l_free));
    let e1a = ExtSpace::compute(1, &t.m, &t.m, exec)?.dim();
    let e1b = ExtSpace::compute(1, &n, &n, exec)?.dim();
    let e2b = ExtSpace::compute(2, &n, &n, exec)?.dim();
    ids.push(Identity::eq(
        "dim Ext1_A(M,M) = dim Ext1_B(N,N) + dim Ext2_B(N,N)",
        e1a,
        e1b.zip(e2b).map(|(a, b)| a + b),
    ));
    let a = ka.rings.a.clone();
    let j = vec![a.poly().var(ka.rings.t)];
    let split = splits_pibar(t, &j, exec)?;
    let n_b = t.n.over(a.quotient(&j)?)?;
    let ob = ob_regular_quotient(&a, &j, &n_b, exec)?;
    ids.push(Identity::eq("pi-bar splits", split.splits, true));
    ids.push(Identity::eq(
        "pi-bar splits <=> ob = 0",
        split.splits,
        ob.direct.is_zero(),
    ));
    ids.push(Identity::eq(
        "sequence class = ob",
        ob.class.coords.clone(),
        ob.direct.coords.clone(),
    ));
    let s = tangent_sigma(t, &j, exec)?;
    ids.push(Identity::eq("sigma injective", s.rank, s.source_dim));
    ids.push(Identity::eq(
        "dim coker sigma = dim Ext2_B(N,N)",
        Some(s.coker_dim),
        e2b,
    ));
    Ok(SuiteReport {
        suite: format!("knorrer {}", if k == 2 { "node" } else { "cusp" }),
        identities: ids,
    })
}

pub fn knorrer_suite(exec: Exec) -> Result<Vec<SuiteReport>> {
    Ok(vec![knorrer_case(2, exec)?, knorrer_case(3, exec)?])
}

/// A lifting problem with the module to lift.
#[derive(Clone, Debug)]
pub struct LiftCase {
    pub name: String,
    pub problem: LiftingProblem<K>,
    pub module: Module<K>,
}

/// A over k[vars]/(rels), a small extension of truncated or given Artin
/// algebras, and N = (A ⊗ R)/(rels).
pub struct CaseSpec<'a> {
    pub name: &'a str,
    pub a_vars: &'a [&'a str],
    pub a_rels: &'a [&'a str],
    pub r_vars: &'a [&'a str],
    pub r_rels: &'a [&'a str],
    pub kernel: &'a [&'a str],
    pub n_rels: &'a [&'a str],
    /// Whether N should be flat over R.
    pub flat: bool,
}

impl CaseSpec<'_> {
    pub fn build(&self) -> Result<(LiftCase, bool)> {
        let a = ring(self.a_vars, &vec![1; self.a_vars.len()], self.a_rels)?;
        let r_big = ring(self.r_vars, &vec![1; self.r_vars.len()], self.r_rels)?;
        let art = ArtinAlgebra::new(r_big.clone())?;
        let kernel = self
            .kernel
            .iter()
            .map(|s| poly(&r_big, s))
            .collect::<Result<Vec<_>>>()?;
        let ext = SmallExtension::new(art, &kernel)?;
        let problem = ext.induced(&a)?;
        let module = cyclic(problem.small(), self.n_rels)?;
        let flat = FamilyModule::new(&a, ext.small(), module.clone()).is_ok();
        Ok((
            LiftCase {
                name: self.name.to_string(),
                problem,
                module,
            },
            flat,
        ))
    }
}

/// The deterministic cases: coefficient algebras of dimension ≤ 4 and
/// liftings of dimension ≤ 8.
pub fn brute_force_specs() -> Vec<CaseSpec<'static>> {
    vec![
        CaseSpec {
            name: "k over k[s]/(s^2) to s^3",
            a_vars: &[],
            a_rels: &[],
            r_vars: &["s"],
            r_rels: &["s^3"],
            kernel: &["s^2"],
            n_rels: &["s"],
            flat: false,
        },
        CaseSpec {
            name: "R over k[s]/(s^2) to s^3",
            a_vars: &[],
            a_rels: &[],
            r_vars: &["s"],
            r_rels: &["s^3"],
            kernel: &["s^2"],
            n_rels: &[],
            flat: true,
        },
        CaseSpec {
            name: "k over k[x] with k[e]",
            a_vars: &["x"],
            a_rels: &[],
            r_vars: &["e"],
            r_rels: &["e^2"],
            kernel: &["e"],
            n_rels: &["x", "e"],
            flat: true,
        },
        CaseSpec {
            name: "k over k[x]/(x^2) with k[e]",
            a_vars: &["x"],
            a_rels: &["x^2"],
            r_vars: &["e"],
            r_rels: &["e^2"],
            kernel: &["e"],
            n_rels: &["x", "e"],
            flat: true,
        },
        CaseSpec {
            name: "k[x]/(x^2) free with k[e]",
            a_vars: &["x"],
            a_rels: &["x^2"],
            r_vars: &["e"],
            r_rels: &["e^2"],
            kernel: &["e"],
            n_rels: &["e"],
            flat: true,
        },
        CaseSpec {
            name: "k over k[x]/(x^3) with k[e]",
            a_vars: &["x"],
            a_rels: &["x^3"],
            r_vars: &["e"],
            r_rels: &["e^2"],
            kernel: &["e"],
            n_rels: &["x", "e"],
            flat: true,
        },
        CaseSpec {
            name: "coker(x - s) over k[x]/(x^2), s^2 to s^3",
            a_vars: &["x"],
            a_rels: &["x^2"],
            r_vars: &["s"],
            r_rels: &["s^3"],
            kernel: &["s^2"],
            n_rels: &["x - s"],
            flat: true,
        },
        CaseSpec {
            name: "coker(x - s) over k[x]/(x^2), k[s,u] socle u",
            a_vars: &["x"],
            a_rels: &["x^2"],
            r_vars: &["s", "u"],
            r_rels: &["s^2", "s*u", "u^2"],
            kernel: &["u"],
            n_rels: &["x - s", "u"],
            flat: true,
        },
        CaseSpec {
            name: "k over k[x,y]/(x,y)^2 with k[e]",
            a_vars: &["x", "y"],
            a_rels: &["x^2", "x*y", "y^2"],
            r_vars: &["e"],
            r_rels: &["e^2"],
            kernel: &["e"],
            n_rels: &["x", "y", "e"],
            flat: true,
        },
        CaseSpec {
            name: "k over k[x] with k[s]/(s^3), s^2",
            a_vars: &["x"],
            a_rels: &[],
            r_vars: &["s"],
            r_rels: &["s^3"],
            kernel: &["s^2"],
            n_rels: &["x", "s"],
            flat: false,
        },
    ]
}

fn degree_zero_vector(ctx: &LiftingContext<K>, seed: i64) -> Vec<u32> {
    let f = K::default();
    ctx.ext1()
        .basis_degrees()
        .iter()
        .enumerate()
        .map(|(k, &d)| {
            if d == 0 {
                f.from_i64(seed + 2 * k as i64)
            } else {
                f.zero()
            }
        })
        .collect()
}

fn neg(v: &[u32]) -> Vec<u32> {
    let f = K::default();
    v.iter().map(|c| f.neg(c)).collect()
}

fn add(a: &[u32], b: &[u32]) -> Vec<u32> {
    let f = K::default();
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

/// Lifting, four-term and torsor identities for one case.
pub fn check_lift_case(case: &LiftCase, cap: usize, exec: Exec) -> Result<Vec<Identity>> {
    let name = &case.name;
    let ctx = LiftingContext::new(&case.problem, &case.module, exec)?;
    let ob = ctx.obstruction()?;
    let bf = brute_force_liftings(&case.problem, &case.module, cap, exec)?;
    let mut ids = vec![
        Identity::eq(format!("{name}: ob = 0 <=> a lifting exists"), ob.is_zero(), bf.exists),
        Identity::eq(
            format!("{name}: four-term class = ob"),
            ctx.four_term_ob()?.coords,
            ob.coords.clone(),
        ),
    ];
    match ctx.lift()? {
        LiftOutcome::Obstructed(c) => {
            ids.push(Identity::holds(
                format!("{name}: lift reports the class"),
                "obstructed",
                c.same_as(&ob),
            ));
        }
        LiftOutcome::Lifted(l) => {
            ids.push(Identity::holds(
                format!("{name}: lifting certificate"),
                "reduces + flat",
                ctx.certify(&l)?.holds(),
            ));
            let deg0 = ctx.ext1().basis_degrees().iter().filter(|&&d| d == 0).count();
            ids.push(Identity::eq(
                format!("{name}: moduli dim = dim Ext1_0"),
                bf.moduli_dim,
                deg0,
            ));
            ids.extend(torsor_identities(name, &ctx, &l, exec)?);
        }
    }
    Ok(ids)
}

fn torsor_identities(name: &str, ctx: &LiftingContext<K>, l: &Lifting<K>, exec: Exec) -> Result<Vec<Identity>> {
    let xi = degree_zero_vector(ctx, 1);
    let eta = degree_zero_vector(ctx, 7);
    let zero = vec![0u32; xi.len()];
    let lx = ctx.torsor_act(l, &xi)?;
    let lxe = ctx.torsor_act(&lx, &eta)?;
    let lsum = ctx.torsor_act(l, &add(&xi, &eta))?;
    let nonzero = xi.iter().any(|&c| c != 0);
    Ok(vec![
        Identity::holds(
            format!("{name}: L + 0 ~ L"),
            "equivalent",
            ctx.equivalent(&ctx.torsor_act(l, &zero)?, l)?,
        ),
        Identity::holds(
            format!("{name}: (L + xi) + eta ~ L + (xi + eta)"),
            "equivalent",
            ctx.equivalent(&lxe, &lsum)?,
        ),
        Identity::eq(
            format!("{name}: diff(L + xi, L) = xi"),
            ctx.lifting_difference(&lx, l)?,
            xi.clone(),
        ),
        Identity::eq(
            format!("{name}: diff(X, Y) = -diff(Y, X)"),
            ctx.lifting_difference(&lxe, l)?,
            neg(&ctx.lifting_difference(l, &lxe)?),
        ),
        Identity::holds(
            format!("{name}: L + diff(X, L) ~ X"),
            "equivalent",
            ctx.equivalent(&ctx.torsor_act(l, &ctx.lifting_difference(&lxe, l)?)?, &lxe)?,
        ),
        Identity::eq(
            format!("{name}: L + xi isomorphic to L <=> xi = 0 (isomorphism search)"),
            liftings_isomorphic(ctx, &lx, l, exec)?,
            !nonzero,
        ),
    ])
}

/// Base-change squares (J ⊂ K + H).
pub fn base_change_cases() -> Result<Vec<(String, LiftingProblem<K>, Module<K>, BaseChange<K>)>> {
    let mut out = Vec::new();
    let big = ring(&["x", "s", "u"], &[1, 1, 2], &["x^2", "s^3", "u^2", "s*u"])?;
    let q = LiftingProblem::new(big.clone(), &[poly(&big, "s^2")?])?;
    let n = cyclic(q.small(), &["x - s"])?;
    for (k, h) in [("u", "s^2"), ("u - s^2", "u")] {
        out.push((
            format!("coker(x - s), K = ({k}), H = ({h})"),
            q.clone(),
            n.clone(),
            BaseChange {
                k: vec![poly(&big, k)?],
                h: vec![poly(&big, h)?],
            },
        ));
    }
    let big = ring(&["y", "s"], &[1, 1], &["s^3"])?;
    let q = LiftingProblem::new(big.clone(), &[poly(&big, "s^2")?])?;
    let n = cyclic(q.small(), &["y - s"])?;
    out.push((
        "k[s]/(s^3) onto k[e]/(e^2), coker(y - s)".into(),
        q.clone(),
        n.clone(),
        BaseChange {
            k: vec![poly(&big, "s^2")?],
            h: vec![poly(&big, "s")?],
        },
    ));
    out.push((
        "identity base change, coker(y - s)".into(),
        q,
        n,
        BaseChange {
            k: vec![],
            h: vec![poly(&big, "s^2")?],
        },
    ));
    let big = ring(&["x", "s", "u"], &[2, 1, 2], &["s^3", "u^2", "s*u"])?;
    let q = LiftingProblem::new(big.clone(), &[poly(&big, "s^2")?])?;
    let n = cyclic(q.small(), &["x"])?;
    out.push((
        "coker(x), K = (u - s^2), H = (u)".into(),
        q,
        n,
        BaseChange {
            k: vec![poly(&big, "u - s^2")?],
            h: vec![poly(&big, "u")?],
        },
    ));
    let big = ring(&["x", "e", "u"], &[1, 1, 1], &["e^2", "u^2", "e*u"])?;
    let q = LiftingProblem::new(big.clone(), &[poly(&big, "e")?])?;
    let n = cyclic(q.small(), &["x"])?;
    out.push((
        "coker(x) over k[e,u], K = (u)".into(),
        q,
        n,
        BaseChange {
            k: vec![poly(&big, "u")?],
            h: vec![poly(&big, "e")?],
        },
    ));
    Ok(out)
}

/// Criteria on liftings: brute-force agreement, four-term class, torsor
/// axioms, base change and the regular-quotient splitting criterion.
pub fn obstruction_suite(cap: usize, exec: Exec) -> Result<SuiteReport> {
    let mut ids = Vec::new();
    for spec in brute_force_specs() {
        let (case, flat) = spec.build()?;
        ids.push(Identity::eq(
            format!("{}: flatness over R as expected", case.name),
            flat,
            spec.flat,
        ));
        ids.extend(check_lift_case(&case, cap, exec)?);
    }
    for (name, q, n, bc) in base_change_cases()? {
        let r = base_change_ob(&q, &n, &bc, exec)?;
        ids.push(Identity::eq(
            format!("{name}: tau_* ob = ob(q_S, N_S)"),
            r.pushed.coords.clone(),
            r.reduced.coords.clone(),
        ));
        ids.push(Identity::eq(
            format!("{name}: tau_* ob = ob via a fresh resolution"),
            r.pushed.coords.clone(),
            r.fresh.coords.clone(),
        ));
        if let Some(t) = &r.torsor {
            ids.push(Identity::eq(
                format!("{name}: (L + xi)_S = L_S + tau_* xi"),
                t.clone(),
                vec![true; t.len()],
            ));
        }
    }
    let a = ring(&["x"], &[1], &[])?;
    let j = vec![poly(&a, "x^2")?];
    let b = a.quotient(&j)?;
    let n = Module::residue_field(b, 0);
    let r = ob_regular_quotient(&a, &j, &n, exec)?;
    let split = splits_pibar(&r.triple, &j, exec)?;
    ids.push(Identity::eq(
        "k[x], J = (x^2), N = k: pi-bar splits",
        split.splits,
        false,
    ));
    ids.push(Identity::eq(
        "k[x], J = (x^2), N = k: splits <=> ob = 0",
        split.splits,
        r.direct.is_zero(),
    ));
    ids.push(Identity::eq(
        "k[x], J = (x^2), N = k: sequence class = ob",
        r.class.coords.clone(),
        r.direct.coords.clone(),
    ));
    Ok(SuiteReport {
        suite: "obstruction".into(),
        identities: ids,
    })
}

fn omap_identities(name: &str, q: &LiftingProblem<K>, t: &ApproxTriple<K>, exec: Exec) -> Result<Vec<Identity>> {
    let r = omap_check(q, t, exec)?;
    let mut ids = vec![
        Identity::eq(
            format!("{name}: pi^* ob(N) = pi_* ob(M)"),
            r.approx.0.clone(),
            r.approx.1.clone(),
        ),
        Identity::eq(
            format!("{name}: iota_* ob(N) = iota^* ob(L')"),
            r.hull.0.clone(),
            r.hull.1.clone(),
        ),
    ];
    if let Some(d) = &r.difference {
        ids.push(Identity::eq(
            format!("{name}: pi^* delta = pi_* xi"),
            d.clone(),
            vec![true; d.len()],
        ));
    }
    Ok(ids)
}

/// The compatibilities of ob with the approximation and hull sequences.
pub fn omap_suite(exec: Exec) -> Result<SuiteReport> {
    let mut ids = Vec::new();
    let big = ring(&["x", "y", "e"], &[1, 1, 1], &["x*y", "e^2"])?;
    let q = LiftingProblem::new(big.clone(), &[poly(&big, "e")?])?;
    let n = cyclic(q.small(), &["x", "y", "e"])?;
    ids.extend(omap_identities(
        "node, first order",
        &q,
        &mcm_approx_cm(&n, 1, exec)?,
        exec,
    )?);
    let big = ring(&["x", "y", "s"], &[1, 1, 1], &["x*y", "s^3"])?;
    let q = LiftingProblem::new(big.clone(), &[poly(&big, "s^2")?])?;
    let n = cyclic(q.small(), &["x", "y", "s"])?;
    ids.extend(omap_identities(
        "node, s^2 to s^3",
        &q,
        &mcm_approx_cm(&n, 1, exec)?,
        exec,
    )?);
    // k over A(2) ⊗ k[e]
    let a = GradedRing::veronese(K::default(), 2)?;
    let r = ArtinAlgebra::truncated(K::default(), "e", 2)?;
    let (ab, _, pr) = tensor_rings(&a, r.ring())?;
    let ev = ab.poly().var(pr[0]);
    let q = LiftingProblem::new(ab.clone(), std::slice::from_ref(&ev))?;
    let n = Module::residue_field(q.small().clone(), 0);
    ids.extend(omap_identities(
        "k over A(2), first order",
        &q,
        &mcm_approx_cm(&n, 2, exec)?,
        exec,
    )?);
    Ok(SuiteReport {
        suite: "omap".into(),
        identities: ids,
    })
}
