use super::*;
use crate::cmapprox::mcm_approx_cm;
use crate::field::PrimeField;
use crate::mono::MonomialOrder;
use crate::poly::PolyRing;
use crate::text::parse_poly;

type R = Arc<GradedRing<PrimeField>>;
const SEQ: Exec = Exec::Sequential;

fn ring(names: &[&str], weights: &[i32], rels: &[&str]) -> R {
    let poly = Arc::new(
        PolyRing::new(
            PrimeField::default(),
            names.iter().map(|s| s.to_string()).collect(),
            weights.to_vec(),
            MonomialOrder::Grevlex,
        )
        .unwrap(),
    );
    let gens = rels.iter().map(|r| parse_poly(&poly, r).unwrap()).collect();
    GradedRing::new(poly, gens).unwrap()
}

fn p(r: &R, s: &str) -> Poly<PrimeField> {
    parse_poly(r.poly(), s).unwrap()
}

fn cyclic(r: &R, rels: &[&str]) -> Module<PrimeField> {
    let one = Module::free(r.clone(), vec![0]);
    let v = rels.iter().map(|s| one.ctx().from_poly_at(&p(r, s), 0)).collect();
    Module::new(r.clone(), vec![0], v).unwrap()
}

/// k[x]/(x³) → k[x]/(x²) with N = k: no flat lifting exists.
fn truncation() -> (LiftingProblem<PrimeField>, Module<PrimeField>) {
    let big = ring(&["x"], &[1], &["x^3"]);
    let q = LiftingProblem::new(big.clone(), &[p(&big, "x^2")]).unwrap();
    let n = Module::residue_field(q.small().clone(), 0);
    (q, n)
}

/// k[x, e]/(e²) → k[x] with N = k.
fn dual_numbers() -> (LiftingProblem<PrimeField>, Module<PrimeField>) {
    let big = ring(&["x", "e"], &[1, 1], &["e^2"]);
    let q = LiftingProblem::new(big.clone(), &[p(&big, "e")]).unwrap();
    let n = cyclic(q.small(), &["x", "e"]);
    (q, n)
}

#[test]
fn rejects_non_square_zero_kernel() {
    let big = ring(&["x"], &[1], &["x^3"]);
    let err = LiftingProblem::new(big.clone(), &[p(&big, "x")]).unwrap_err();
    assert!(err.to_string().contains("J² ≠ 0"), "{err}");
}

#[test]
fn truncation_is_obstructed() {
    let (q, n) = truncation();
    let ctx = LiftingContext::new(&q, &n, SEQ).unwrap();
    let ob = ctx.obstruction().unwrap();
    assert!(!ob.is_zero());
    assert!(matches!(ctx.lift().unwrap(), LiftOutcome::Obstructed(_)));
    let bf = brute_force_liftings(&q, &n, BRUTE_FORCE_CAP, SEQ).unwrap();
    assert!(!bf.exists);
}

#[test]
fn four_term_representative_matches() {
    let (q, n) = truncation();
    let ctx = LiftingContext::new(&q, &n, SEQ).unwrap();
    assert!(ctx.four_term_ob().unwrap().same_as(&ctx.obstruction().unwrap()));
    let (q, n) = dual_numbers();
    let ctx = LiftingContext::new(&q, &n, SEQ).unwrap();
    let ft = ctx.four_term_ob().unwrap();
    assert!(ft.is_zero() && ft.same_as(&ctx.obstruction().unwrap()));
}

#[test]
fn dual_numbers_lift_and_count() {
    let (q, n) = dual_numbers();
    let ctx = LiftingContext::new(&q, &n, SEQ).unwrap();
    let LiftOutcome::Lifted(l) = ctx.lift().unwrap() else {
        panic!("k lifts over the dual numbers");
    };
    assert!(ctx.certify(&l).unwrap().holds());
    let deg0 = ctx.ext1().basis_degrees().iter().filter(|&&d| d == 0).count();
    let bf = brute_force_liftings(&q, &n, BRUTE_FORCE_CAP, SEQ).unwrap();
    assert!(bf.exists);
    assert_eq!(bf.moduli_dim, deg0);
    assert_eq!(deg0, 1);
}

#[test]
fn torsor_round_trip() {
    let (q, n) = dual_numbers();
    let ctx = LiftingContext::new(&q, &n, SEQ).unwrap();
    let LiftOutcome::Lifted(l) = ctx.lift().unwrap() else {
        panic!("expected a lifting");
    };
    let f = PrimeField::default();
    let degs = ctx.ext1().basis_degrees();
    let xi: Vec<_> = degs
        .iter()
        .map(|&d| if d == 0 { f.from_i64(3) } else { f.zero() })
        .collect();
    let moved = ctx.torsor_act(&l, &xi).unwrap();
    assert!(ctx.certify(&moved).unwrap().holds());
    assert_eq!(ctx.lifting_difference(&moved, &l).unwrap(), xi);
    assert!(!ctx.equivalent(&moved, &l).unwrap());
    assert!(ctx.equivalent(&l, &l).unwrap());
    assert!(!liftings_isomorphic(&ctx, &moved, &l, SEQ).unwrap());
    assert!(liftings_isomorphic(&ctx, &l, &l, SEQ).unwrap());
}

#[test]
fn torsor_rejects_positive_degree() {
    let (q, n) = dual_numbers();
    let ctx = LiftingContext::new(&q, &n, SEQ).unwrap();
    let LiftOutcome::Lifted(l) = ctx.lift().unwrap() else {
        panic!("expected a lifting");
    };
    let f = PrimeField::default();
    let degs = ctx.ext1().basis_degrees();
    if let Some(k) = degs.iter().position(|&d| d != 0) {
        let mut xi = vec![f.zero(); degs.len()];
        xi[k] = f.one();
        assert!(ctx.torsor_act(&l, &xi).is_err());
    }
}

#[test]
fn canonical_form_of_a_relabelled_lifting() {
    let (q, n) = dual_numbers();
    let ctx = LiftingContext::new(&q, &n, SEQ).unwrap();
    let big = q.big().clone();
    // coker(x - 2e) written in a different presentation
    let n_prime = cyclic(&big, &["x - 2*e", "e*x"]);
    let theta = ModMap::new(
        n_prime.over(q.small().clone()).unwrap(),
        ctx.resolution().module.clone(),
        vec![ctx.resolution().module.gen(0)],
    )
    .unwrap();
    let l = ctx.canonical_lifting(&n_prime, &theta).unwrap();
    assert!(ctx.certify(&l).unwrap().holds());
    let LiftOutcome::Lifted(l0) = ctx.lift().unwrap() else {
        panic!("expected a lifting");
    };
    let delta = ctx.lifting_difference(&l, &l0).unwrap();
    assert!(delta.iter().any(|c| *c != 0));
}

#[test]
fn non_liftings_are_rejected() {
    let (q, n) = dual_numbers();
    let ctx = LiftingContext::new(&q, &n, SEQ).unwrap();
    let big = q.big().clone();
    let bad = cyclic(&big, &["x", "e"]);
    let theta = ModMap::new(
        bad.over(q.small().clone()).unwrap(),
        ctx.resolution().module.clone(),
        vec![ctx.resolution().module.gen(0)],
    )
    .unwrap();
    let err = ctx.canonical_lifting(&bad, &theta).unwrap_err();
    assert!(err.to_string().contains("not a lifting"), "{err}");
}

#[test]
fn regular_quotient_of_a_line() {
    let a = ring(&["x"], &[1], &[]);
    let b = a.quotient(&[p(&a, "x^2")]).unwrap();
    let n = Module::residue_field(b, 0);
    let r = ob_regular_quotient(&a, &[p(&a, "x^2")], &n, SEQ).unwrap();
    assert!(!r.direct.is_zero());
    assert!(!r.class.is_zero());
    assert!(
        r.class.same_as(&r.direct),
        "{:?} vs {:?}",
        r.class.render(),
        r.direct.render()
    );
    let split = splits_pibar(&r.triple, &[p(&a, "x^2")], SEQ).unwrap();
    assert!(!split.splits);
}

fn knorrer_triple(rel: &str, weights: &[i32]) -> (R, ApproxTripleP) {
    let a = ring(&["x", "t"], weights, &[rel]);
    let b = a.quotient(&[p(&a, "t")]).unwrap();
    let n = Module::residue_field(b, 0);
    let one = Module::free(a.clone(), vec![0]);
    let mut rels = n.rels().to_vec();
    rels.push(one.ctx().from_poly_at(&p(&a, "t"), 0));
    let n_a = Module::new(a.clone(), vec![0], rels).unwrap();
    let t = mcm_approx_cm(&n_a, 1, SEQ).unwrap();
    (a, t)
}

type ApproxTripleP = crate::cmapprox::ApproxTriple<PrimeField>;

#[test]
fn knorrer_quotient_splits_and_is_unobstructed() {
    for (rel, w) in [("x^2 + t^2", [1, 1]), ("x^3 + t^2", [2, 3])] {
        let (a, t) = knorrer_triple(rel, &w);
        let j = [p(&a, "t")];
        assert!(splits_pibar(&t, &j, SEQ).unwrap().splits, "{rel}");
        let n = t.n.over(a.quotient(&j).unwrap()).unwrap();
        let r = ob_regular_quotient(&a, &j, &n, SEQ).unwrap();
        assert!(r.direct.is_zero() && r.class.is_zero(), "{rel}");
    }
}

#[test]
fn tangent_sigma_node_and_cusp() {
    for (rel, w) in [("x^2 + t^2", [1, 1]), ("x^3 + t^2", [2, 3])] {
        let (a, t) = knorrer_triple(rel, &w);
        let s = tangent_sigma(&t, &[p(&a, "t")], SEQ).unwrap();
        assert!(s.injective, "{rel}");
        assert_eq!(s.source_dim, 1, "{rel}");
        assert_eq!(s.target_dim, 2, "{rel}");
        assert_eq!(Some(s.coker_dim), s.ext2_dim, "{rel}");
    }
}

#[test]
fn irregular_kernel_is_refused() {
    let a = ring(&["x", "y"], &[1, 1], &["x*y"]);
    let b = a.quotient(&[p(&a, "x")]).unwrap();
    let n = Module::residue_field(b, 0);
    let err = ob_regular_quotient(&a, &[p(&a, "x")], &n, SEQ).unwrap_err();
    assert!(err.to_string().contains("regular sequence"), "{err}");
}

#[test]
fn small_extension_and_flat_family() {
    let a = ring(&["x"], &[1], &["x^2"]);
    let big = ArtinAlgebra::truncated(PrimeField::default(), "s", 3).unwrap();
    let ext = SmallExtension::new(big.clone(), &[p(big.ring(), "s^2")]).unwrap();
    assert_eq!(ext.small().dim(), 2);
    let q = ext.induced(&a).unwrap();
    let n = cyclic(q.small(), &["x - s"]);
    let fam = FamilyModule::new(&a, ext.small(), n.clone()).unwrap();
    assert!(fam.certificate().holds());
    assert_eq!(fam.fiber().hilbert_series().as_polynomial().map(|_| ()), Some(()));
    let ctx = LiftingContext::new(&q, &n, SEQ).unwrap();
    let ob = ctx.obstruction().unwrap();
    let bf = brute_force_liftings(&q, &n, BRUTE_FORCE_CAP, SEQ).unwrap();
    assert_eq!(bf.exists, ob.is_zero());
}

#[test]
fn non_flat_family_is_refused() {
    let a = ring(&["x"], &[1], &["x^2"]);
    let base = ArtinAlgebra::truncated(PrimeField::default(), "s", 2).unwrap();
    let (ab, _, _) = crate::ring::tensor_rings(&a, base.ring()).unwrap();
    let n = cyclic(&ab, &["x", "s"]);
    assert!(FamilyModule::new(&a, &base, n).is_err());
}

#[test]
fn small_extension_needs_socle_kernel() {
    let big = ArtinAlgebra::truncated(PrimeField::default(), "s", 3).unwrap();
    let err = SmallExtension::new(big.clone(), &[p(big.ring(), "s")]).unwrap_err();
    assert!(err.to_string().contains("𝔪·I"), "{err}");
}

#[test]
fn base_change_commutes_with_obstruction() {
    let big = ring(&["x", "s", "u"], &[1, 1, 2], &["x^2", "s^3", "u^2", "s*u"]);
    let q = LiftingProblem::new(big.clone(), &[p(&big, "s^2")]).unwrap();
    let n = cyclic(q.small(), &["x - s"]);
    for (k, h) in [("u", "s^2"), ("u - s^2", "u")] {
        let bc = BaseChange {
            k: vec![p(&big, k)],
            h: vec![p(&big, h)],
        };
        let r = base_change_ob(&q, &n, &bc, SEQ).unwrap();
        assert!(r.holds(), "K = ({k}): {r:?}");
    }
}

#[test]
fn base_change_with_lifting_moves_torsor() {
    let big = ring(&["x", "e", "u"], &[1, 1, 1], &["e^2", "u^2", "e*u"]);
    let q = LiftingProblem::new(big.clone(), &[p(&big, "e")]).unwrap();
    let n = cyclic(q.small(), &["x"]);
    let bc = BaseChange {
        k: vec![p(&big, "u")],
        h: vec![p(&big, "e")],
    };
    let r = base_change_ob(&q, &n, &bc, SEQ).unwrap();
    assert!(r.pushed.is_zero());
    let t = r.torsor.as_ref().expect("N lifts");
    assert!(!t.is_empty());
    assert!(r.holds(), "{r:?}");
}

#[test]
fn base_change_square_must_commute() {
    let big = ring(&["x", "e", "u"], &[1, 1, 1], &["e^2", "u^2", "e*u"]);
    let q = LiftingProblem::new(big.clone(), &[p(&big, "e")]).unwrap();
    let n = cyclic(q.small(), &["x"]);
    let bc = BaseChange {
        k: vec![p(&big, "x^2")],
        h: vec![p(&big, "u")],
    };
    let err = base_change_ob(&q, &n, &bc, SEQ).unwrap_err();
    assert!(err.to_string().contains("does not commute"), "{err}");
}

#[test]
fn omap_identities_on_a_node() {
    let big = ring(&["x", "y", "e"], &[1, 1, 1], &["x*y", "e^2"]);
    let q = LiftingProblem::new(big.clone(), &[p(&big, "e")]).unwrap();
    let n = cyclic(q.small(), &["x", "y", "e"]);
    let t = mcm_approx_cm(&n, 1, SEQ).unwrap();
    let r = omap_check(&q, &t, SEQ).unwrap();
    assert!(r.holds(), "{r:?}");
    assert!(!r.difference.as_ref().expect("L is free").is_empty());
}

#[test]
fn omap_identities_when_obstructed() {
    let big = ring(&["x", "y", "s"], &[1, 1, 1], &["x*y", "s^3"]);
    let q = LiftingProblem::new(big.clone(), &[p(&big, "s^2")]).unwrap();
    let n = cyclic(q.small(), &["x", "y", "s"]);
    let t = mcm_approx_cm(&n, 1, SEQ).unwrap();
    let r = omap_check(&q, &t, SEQ).unwrap();
    assert!(r.approx.0.iter().any(|c| *c != 0));
    assert!(r.holds(), "{r:?}");
}
