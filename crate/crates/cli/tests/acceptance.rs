//! Acceptance criteria 1 to 9: one PASS/FAIL line per criterion.
//!
//! Every identity is exact; the only tolerances are wall-clock budgets,
//! pinned below. Runs without the libtest harness so the lines always print.

use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use cmapx_cli::doc::{Document, Source};
use cmapx_core::error::Error;
use cmapx_core::exec::Exec;
use cmapx_core::field::{Field, PrimeField};
use cmapx_core::hilbert::{HilbertSeries, Laurent};
use cmapx_core::mf::eisenbud_resolution;
use cmapx_core::module::Module;
use cmapx_core::mono::MonomialOrder;
use cmapx_core::poly::PolyRing;
use cmapx_core::resolve::{resolve, Complex};
use cmapx_core::ring::GradedRing;
use cmapx_core::suite::{self, CaseSpec, Identity};

/// Budget per Veronese degree m.
const VERONESE_BUDGET: Duration = Duration::from_secs(120);
/// Budget per Knörrer case.
const KNORRER_BUDGET: Duration = Duration::from_secs(60);
/// Brute-force cap on the total k-dimension of a lifting.
const CAP: usize = 8;
const RANDOM_LIFT_CASES: u32 = 40;
const RANDOM_HYPERSURFACES: u32 = 40;
const RANDOM_COMBINATIONS: u32 = 24;
const RESOLUTION_STEPS: usize = 4;
const FIXTURES: [&str; 4] = ["a2.ring", "a3.ring", "node.ring", "cusp.ring"];

type K = PrimeField;

struct Line {
    ok: bool,
    detail: String,
}

impl Line {
    fn from_ids(ids: &[Identity], extra: &str) -> Line {
        let failed: Vec<&str> = ids.iter().filter(|i| !i.pass).map(|i| i.name.as_str()).collect();
        let mut detail = format!("{} of {} identities hold", ids.len() - failed.len(), ids.len());
        if !extra.is_empty() {
            detail.push_str("; ");
            detail.push_str(extra);
        }
        if !failed.is_empty() {
            detail.push_str(&format!("; failed: {}", failed.join(", ")));
        }
        Line {
            ok: failed.is_empty() && !ids.is_empty(),
            detail,
        }
    }

    fn error(e: impl std::fmt::Display) -> Line {
        Line {
            ok: false,
            detail: format!("error: {e}"),
        }
    }
}

/// A runner with a fixed seed, so every run checks the same cases.
fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn exec() -> Exec {
    Exec::default()
}

fn criteria_1_2() -> (Line, Line) {
    let mut c1 = Vec::new();
    let mut c2 = Vec::new();
    let mut times = Vec::new();
    for m in [2, 3] {
        let start = Instant::now();
        let report = match suite::veronese(m, exec()) {
            Ok(r) => r,
            Err(e) => return (Line::error(&e), Line::error(e)),
        };
        let took = start.elapsed();
        times.push(format!("m={m} {} ms", took.as_millis()));
        c1.push(Identity::holds(
            format!("m={m}: within {} s", VERONESE_BUDGET.as_secs()),
            format!("{took:?}"),
            took <= VERONESE_BUDGET,
        ));
        for mut id in report.identities {
            id.name = format!("m={m}: {}", id.name);
            if id.name.contains("(E") {
                c2.push(id);
            } else {
                c1.push(id);
            }
        }
    }
    let t = times.join(", ");
    (Line::from_ids(&c1, &t), Line::from_ids(&c2, ""))
}

fn criteria_3_7_8(regular: &[Identity]) -> (Line, Line, Line) {
    let mut c3 = Vec::new();
    let mut c7 = regular.to_vec();
    let mut c8 = Vec::new();
    let mut times = Vec::new();
    for k in [2, 3] {
        let start = Instant::now();
        let report = match suite::knorrer_case(k, exec()) {
            Ok(r) => r,
            Err(e) => return (Line::error(&e), Line::error(&e), Line::error(e)),
        };
        let took = start.elapsed();
        times.push(format!("{} {} ms", report.suite, took.as_millis()));
        c3.push(Identity::holds(
            format!("{}: within {} s", report.suite, KNORRER_BUDGET.as_secs()),
            format!("{took:?}"),
            took <= KNORRER_BUDGET,
        ));
        for mut id in report.identities {
            id.name = format!("{}: {}", report.suite, id.name);
            if id.name.contains("splits") || id.name.contains("sequence class") {
                c7.push(id);
            } else if id.name.contains("sigma") {
                c8.push(id);
            } else {
                c3.push(id);
            }
        }
    }
    let t = times.join(", ");
    (
        Line::from_ids(&c3, &t),
        Line::from_ids(&c7, ""),
        Line::from_ids(&c8, ""),
    )
}

const A_CHOICES: [&[&str]; 4] = [&[], &["x^2"], &["x^3"], &["x^4"]];
/// (R variables, R relations, kernel of R → R/I).
const R_CHOICES: [(&[&str], &[&str], &[&str]); 4] = [
    (&["s"], &["s^2"], &["s"]),
    (&["s"], &["s^3"], &["s^2"]),
    (&["s"], &["s^4"], &["s^3"]),
    (&["s", "u"], &["s^2", "s*u", "u^2"], &["u"]),
];
const N_CHOICES: [&str; 8] = ["x", "x - s", "x + 2*s", "x - 3*s", "x^2", "x*s", "s", "x^2 - x*s"];

/// Random lifting problems checked against the exhaustive search. Returns
/// the identities of every case that fits under the cap and the number of
/// cases skipped for size.
fn random_lift_cases() -> Result<(Vec<Identity>, usize), String> {
    let ids = std::cell::RefCell::new(Vec::new());
    let skipped = std::cell::Cell::new(0usize);
    let mut runner = runner(RANDOM_LIFT_CASES);
    let strategy = (
        0..A_CHOICES.len(),
        0..R_CHOICES.len(),
        proptest::sample::subsequence(N_CHOICES.to_vec(), 1..=2),
    );
    let result = runner.run(&strategy, |(a, r, n)| {
        let (r_vars, r_rels, kernel) = R_CHOICES[r];
        let name = format!(
            "random: A = k[x]/{:?}, R = k[{}]/{:?} mod {:?}, N = {:?}",
            A_CHOICES[a],
            r_vars.join(","),
            r_rels,
            kernel,
            n
        );
        let spec = CaseSpec {
            name: &name,
            a_vars: &["x"],
            a_rels: A_CHOICES[a],
            r_vars,
            r_rels,
            kernel,
            n_rels: &n,
            flat: true,
        };
        let (case, _) = spec.build().map_err(|e| TestCaseError::fail(e.to_string()))?;
        match suite::check_lift_case(&case, CAP, exec()) {
            Ok(found) => {
                let bad: Vec<String> = found
                    .iter()
                    .filter(|i| !i.pass)
                    .map(|i| format!("{}: {} | {}", i.name, i.lhs, i.rhs))
                    .collect();
                ids.borrow_mut().extend(found);
                if bad.is_empty() {
                    Ok(())
                } else {
                    Err(TestCaseError::fail(bad.join("; ")))
                }
            }
            Err(Error::Limit(_)) | Err(Error::Precondition(_)) => {
                skipped.set(skipped.get() + 1);
                Ok(())
            }
            Err(e) => Err(TestCaseError::fail(e.to_string())),
        }
    });
    result.map_err(|e| e.to_string())?;
    Ok((ids.into_inner(), skipped.get()))
}

fn criteria_4_5_6(obstruction: &[Identity]) -> (Line, Line, Line) {
    let mut c4 = Vec::new();
    let mut c5 = Vec::new();
    let mut c6 = Vec::new();
    let (random, skipped) = match random_lift_cases() {
        Ok(r) => r,
        Err(e) => return (Line::error(&e), Line::error(&e), Line::error(e)),
    };
    let random_cases = random.iter().filter(|i| i.name.contains("four-term")).count();
    for id in obstruction.iter().chain(&random).cloned() {
        if id.name.contains("four-term") {
            c5.push(id);
        } else if id.name.contains("ob = 0 <=>")
            || id.name.contains("flatness")
            || id.name.contains("lifting certificate")
            || id.name.contains("lift reports")
            || id.name.contains("moduli dim")
        {
            c4.push(id);
        } else {
            c6.push(id);
        }
    }
    let obstructed = random.iter().filter(|i| i.name.contains("lift reports")).count();
    let note = format!("{random_cases} random cases, {obstructed} obstructed, {skipped} over the cap skipped");
    (
        Line::from_ids(&c4, &note),
        Line::from_ids(&c5, &note),
        Line::from_ids(&c6, ""),
    )
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn load(name: &str) -> anyhow::Result<Document<K>> {
    let src = Source::load(&fixture(name))?;
    Ok(Document::new(src, K::default(), MonomialOrder::Grevlex, exec()))
}

/// d_k ∘ d_{k+1} = 0, checked column by column through ring reduction.
fn squares_to_zero(c: &Complex<K>) -> bool {
    (1..c.len()).all(|k| {
        let (outer, inner) = (c.d(k), c.d(k + 1));
        inner
            .columns()
            .iter()
            .all(|col| c.ring.reduce_vec(&outer.apply(&c.ring, col)).is_zero())
    })
}

/// Σ (-1)^i HS(F_i) for a finite complex of free modules.
fn euler_series(c: &Complex<K>) -> HilbertSeries {
    let mut acc = HilbertSeries::new(Laurent::zero(), c.ring.weights().to_vec());
    for i in 0..=c.len() {
        let f = c.free(i);
        let s = f.hilbert_series().clone();
        acc = if i % 2 == 0 { acc.add(&s) } else { acc.sub(&s) };
    }
    acc
}

/// Number of monomials of weighted degree d.
fn monomials(weights: &[i32], d: i32) -> i64 {
    match weights.split_first() {
        None => (d == 0) as i64,
        Some((&w, rest)) => (0..=d / w).map(|e| monomials(rest, d - e * w)).sum(),
    }
}

/// dim (S/f)_d = #monomials of degree d - #monomials of degree d - deg f.
fn hypersurface_dims(weights: &[i32], e: i32, hi: i32) -> Vec<i64> {
    (0..=hi)
        .map(|d| monomials(weights, d) - if d >= e { monomials(weights, d - e) } else { 0 })
        .collect()
}

fn check_hypersurface(ring: &GradedRing<K>, hi: i32) -> Option<bool> {
    let [f] = ring.ideal() else { return None };
    let e = f.homogeneous_degree()?;
    Some(ring.hilbert_series().dims(0, hi) == hypersurface_dims(ring.weights(), e, hi))
}

/// Normal forms: relations reduce to 0, reduction is idempotent, and a
/// vector differs from its normal form by an element of the submodule.
fn gb_round_trip(m: &Module<K>, coeffs: &[(u32, usize, usize)]) -> bool {
    let ctx = m.ctx();
    let poly = m.ring().poly().clone();
    let field = *poly.field();
    let rels = m.rels();
    if !rels.iter().all(|r| m.gb().contains(r)) {
        return false;
    }
    let mut combo = ctx.from_terms(Vec::new());
    let mut probe = ctx.from_terms(Vec::new());
    for (i, &(c, mono, comp)) in coeffs.iter().enumerate() {
        let c = field.from_i64(c as i64);
        if !rels.is_empty() {
            let r = &rels[i % rels.len()];
            let monos = poly.monomials_of_degree(1);
            let t = &monos[mono % monos.len()];
            combo = ctx.add(&combo, &ctx.mul_term(r, t, &c));
        }
        if m.rank() > 0 {
            let comp = comp % m.rank();
            let monos = poly.monomials_of_degree(2 + (mono % 2) as i32);
            let t = &monos[mono % monos.len()];
            probe = ctx.add(&probe, &ctx.from_poly_at(&poly.term(t.clone(), c), comp as u32));
        }
    }
    if !m.gb().contains(&combo) {
        return false;
    }
    let nf = m.gb().reduce(&probe);
    m.gb().reduce(&nf) == nf && m.gb().contains(&ctx.sub(&probe, &nf))
}

fn criterion_9() -> Line {
    let mut ids = Vec::new();
    let mut runner = runner(RANDOM_COMBINATIONS);
    let combos = prop::collection::vec((1u32..32003, 0usize..64, 0usize..8), 1..6);
    for file in FIXTURES {
        let doc = match load(file) {
            Ok(d) => d,
            Err(e) => return Line::error(format!("{file}: {e:#}")),
        };
        for name in doc.ring_names() {
            let ring = match doc.ring(&name) {
                Ok(r) => r,
                Err(e) => return Line::error(format!("{file}: {e:#}")),
            };
            let gens_in = ring
                .ideal()
                .iter()
                .all(|g| ring.ideal_gb().contains(&ring.ideal_gb().ctx().from_poly_at(g, 0)));
            ids.push(Identity::holds(
                format!("{file} ring {name}: generators reduce to 0"),
                "ideal GB",
                gens_in,
            ));
            if let Some(ok) = check_hypersurface(&ring, 12) {
                ids.push(Identity::holds(
                    format!("{file} ring {name}: hypersurface Hilbert function"),
                    "degrees 0..12",
                    ok,
                ));
            }
        }
        for name in doc.module_names() {
            let m = match doc.module(&name) {
                Ok(m) => m,
                Err(e) => return Line::error(format!("{file} module {name}: {e:#}")),
            };
            let tag = format!("{file} module {name}");
            match resolve(&m, RESOLUTION_STEPS) {
                Ok(res) => {
                    ids.push(Identity::holds(
                        format!("{tag}: d^2 = 0"),
                        "resolution",
                        squares_to_zero(&res.complex),
                    ));
                    let window = res.verify().unwrap_or(false);
                    ids.push(Identity::holds(
                        format!("{tag}: exact with H_0 = M"),
                        "resolution",
                        window,
                    ));
                    if res.complete {
                        let euler = euler_series(&res.complex) == *m.hilbert_series();
                        ids.push(Identity::holds(
                            format!("{tag}: Euler characteristic"),
                            "finite resolution",
                            euler,
                        ));
                    }
                }
                Err(e) => ids.push(Identity::holds(format!("{tag}: resolves"), e.to_string(), false)),
            }
            let all = runner
                .run(&combos, |c| {
                    prop_assert!(gb_round_trip(&m, &c));
                    Ok(())
                })
                .is_ok();
            ids.push(Identity::holds(
                format!("{tag}: GB membership round trip"),
                "random combinations",
                all,
            ));
        }
        for name in doc.mf_names() {
            let tag = format!("{file} mf {name}");
            match doc
                .mf(&name)
                .map_err(|e| e.to_string())
                .and_then(|mf| eisenbud_resolution(&mf, 6).map_err(|e| e.to_string()))
            {
                Ok(c) => {
                    ids.push(Identity::holds(
                        format!("{tag}: Eisenbud d^2 = 0"),
                        "6 steps",
                        squares_to_zero(&c),
                    ));
                    ids.push(Identity::holds(
                        format!("{tag}: Eisenbud exact"),
                        "6 steps",
                        c.is_exact().unwrap_or(false),
                    ));
                }
                Err(e) => ids.push(Identity::holds(format!("{tag}: Eisenbud complex"), e, false)),
            }
        }
    }
    match random_hypersurfaces() {
        Ok(n) => ids.push(Identity::holds(
            "random hypersurfaces: Hilbert function",
            format!("{n} cases"),
            true,
        )),
        Err(e) => ids.push(Identity::holds("random hypersurfaces: Hilbert function", e, false)),
    }
    Line::from_ids(&ids, "")
}

/// Random homogeneous f over weighted k[x,y,z]: the Hilbert function of
/// S/(f) agrees with the monomial count.
fn random_hypersurfaces() -> Result<u32, String> {
    let mut runner = runner(RANDOM_HYPERSURFACES);
    let strategy = (
        prop::collection::vec(1i32..=3, 3),
        2i32..=6,
        prop::collection::vec((1i64..32003, any::<prop::sample::Index>()), 1..5),
    );
    runner
        .run(&strategy, |(weights, e, terms)| {
            let poly = Arc::new(
                PolyRing::new(
                    K::default(),
                    vec!["x".into(), "y".into(), "z".into()],
                    weights.clone(),
                    MonomialOrder::Grevlex,
                )
                .map_err(|e| TestCaseError::fail(e.to_string()))?,
            );
            let monos = poly.monomials_of_degree(e);
            prop_assume!(!monos.is_empty());
            let f = poly.from_terms(
                terms
                    .iter()
                    .map(|(c, i)| (i.get(&monos).clone(), poly.field().from_i64(*c)))
                    .collect(),
            );
            prop_assume!(!f.is_zero());
            let ring = GradedRing::new(poly.clone(), vec![f]).map_err(|e| TestCaseError::fail(e.to_string()))?;
            let want = hypersurface_dims(&weights, e, 14);
            prop_assert_eq!(ring.hilbert_series().dims(0, 14), want);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(RANDOM_HYPERSURFACES)
}

fn main() -> ExitCode {
    let obstruction = suite::obstruction_suite(CAP, exec());
    let (ob_ids, regular): (Vec<Identity>, Vec<Identity>) = match &obstruction {
        Ok(r) => r
            .identities
            .iter()
            .cloned()
            .partition(|i| !i.name.starts_with("k[x], J = (x^2)")),
        Err(_) => (Vec::new(), Vec::new()),
    };
    let (c1, c2) = criteria_1_2();
    let (c3, c7, c8) = criteria_3_7_8(&regular);
    let (c4, c5, c6) = match &obstruction {
        Ok(_) => criteria_4_5_6(&ob_ids),
        Err(e) => (Line::error(e), Line::error(e), Line::error(e)),
    };
    let c9 = criterion_9();
    let lines = [
        ("Veronese suite, m = 2, 3", c1),
        ("fundamental module, m = 2, 3", c2),
        ("Knörrer suite, node and cusp", c3),
        ("obstruction vanishes iff a lifting exists", c4),
        ("four-term representative", c5),
        ("torsor axioms and base change", c6),
        ("splitting criteria", c7),
        ("tangent map sigma", c8),
        ("engine soundness on all fixtures", c9),
    ];
    let mut ok = true;
    for (i, (what, line)) in lines.iter().enumerate() {
        ok &= line.ok;
        println!(
            "criterion {}: {}  {what}  ({})",
            i + 1,
            if line.ok { "PASS" } else { "FAIL" },
            line.detail
        );
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
