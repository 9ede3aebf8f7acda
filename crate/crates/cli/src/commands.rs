//! Command definitions and their evaluation over a document.

use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{anyhow, bail};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use cmapx_core::cmapprox::{fid_hull, fundamental_module, ring_type, ApproxTriple};
use cmapx_core::exec::Exec;
use cmapx_core::field::Field;
use cmapx_core::hilbert::HilbertSeries;
use cmapx_core::homalg::{canonical_module, is_short_exact, ExtSpace};
use cmapx_core::mf::{eisenbud_resolution, knorrer, knorrer_approx, mf_stats};
use cmapx_core::module::Module;
use cmapx_core::obstruct::{
    ext_vanishing_report, ob_regular_quotient, omap_check, splits_pibar, tangent_sigma, LiftOutcome, LiftingContext,
    LiftingProblem, ObstructionClass,
};
use cmapx_core::resolve::{depth, is_mcm, resolve, BettiTable, Complex};
use cmapx_core::ring::GradedRing;

use crate::doc::Document;
use crate::report::Obj;

#[derive(Parser, Debug)]
#[command(
    name = "cmapx",
    version,
    about = "Exact computations with MCM approximations, matrix factorizations and lifting obstructions"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Run every kernel sequentially.
    #[arg(long, global = true)]
    pub sequential: bool,
    /// Include wall-clock time in the report (reports are otherwise reproducible byte for byte).
    #[arg(long, global = true)]
    pub timing: bool,
    /// Coefficient field, overriding the document and CMAPX_FIELD: gf(p) or qq.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Monomial order, overriding the document and CMAPX_ORDER: grevlex, lex or weighted(w1,..).
    #[arg(long, global = true)]
    pub order: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Input document.
    pub file: PathBuf,
}

/// A square-zero problem B′ → B = B′/J, given directly or induced by a small
/// extension R′ → R over a ring A (then B′ = A ⊗ R′).
#[derive(Args, Debug, Clone)]
pub struct ProblemArgs {
    /// B′, or A when --extension is given.
    #[arg(long)]
    pub ring: String,
    /// Generators of J in B′ (comma separated).
    #[arg(long, value_delimiter = ',', conflicts_with = "extension")]
    pub kernel: Vec<String>,
    /// A small-extension block.
    #[arg(long)]
    pub extension: Option<String>,
}

/// A regular quotient B = A/J.
#[derive(Args, Debug, Clone)]
pub struct RegularArgs {
    #[arg(long)]
    pub ring: String,
    /// Generators of J in A (comma separated).
    #[arg(long, value_delimiter = ',', required = true)]
    pub kernel: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gröbner basis of a ring's ideal or a module's relations.
    Gb {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "module")]
        ring: Option<String>,
        #[arg(long)]
        module: Option<String>,
    },
    /// Minimal free resolution with its certificate.
    Resolve {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 6)]
        steps: usize,
        /// Print the differentials.
        #[arg(long)]
        maps: bool,
    },
    /// Graded Betti table.
    Betti {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[arg(long, default_value_t = 6)]
        steps: usize,
    },
    /// Ext^i(M, N) with its graded dimensions.
    Ext {
        #[command(flatten)]
        input: Input,
        #[arg(long = "i")]
        i: usize,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Degree window for infinite-length Ext.
        #[arg(long, default_value_t = 12)]
        window: i32,
    },
    /// Depth of a module.
    Depth {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
    },
    /// Krull dimension, multiplicity and Hilbert series.
    Dim {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "ring")]
        module: Option<String>,
        #[arg(long)]
        ring: Option<String>,
    },
    /// Canonical module and type.
    Canonical {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        ring: String,
    },
    /// Minimal MCM approximation 0 → L → M → N → 0.
    McmApprox {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        /// Codimension of N (default: dim A − dim N).
        #[arg(long)]
        codim: Option<i32>,
    },
    /// Hull of finite injective dimension 0 → N → L′ → M′ → 0.
    FidHull {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[arg(long)]
        codim: Option<i32>,
    },
    /// Fundamental module 0 → ω → E → 𝔪 → 0 of a two-dimensional ring.
    Fundamental {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        ring: String,
    },
    /// Knörrer factorization of an mf block, or the approximation of an MCM
    /// module over a hypersurface through it.
    Knorrer {
        #[command(flatten)]
        input: Input,
        #[arg(long, conflicts_with = "module")]
        mf: Option<String>,
        #[arg(long)]
        module: Option<String>,
    },
    /// The periodic resolution over Q[t]/(f + t²) built from a factorization.
    Eisenbud {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        mf: String,
        #[arg(long, default_value_t = 6)]
        steps: usize,
    },
    /// Obstruction class ob(q, N) in Ext²_B(N, N ⊗ J).
    Obstruction {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[command(flatten)]
        problem: ProblemArgs,
        /// Also compute the class through the four-term sequence.
        #[arg(long)]
        four_term: bool,
    },
    /// A lifting of N along q, or the obstruction.
    Lift {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[command(flatten)]
        problem: ProblemArgs,
        /// Also run the exhaustive search (needs total dimension at most --cap).
        #[arg(long)]
        brute_force: bool,
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
    /// Acts on the computed lifting by a class of Ext¹_B(N, N ⊗ J).
    Torsor {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[command(flatten)]
        problem: ProblemArgs,
        /// Coordinates of ξ in the Ext¹ basis (comma separated integers).
        #[arg(long, value_delimiter = ',')]
        xi: Vec<i64>,
    },
    /// Whether π̄: M ⊗ B → N splits, against ob(A/J², N).
    Splits {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[command(flatten)]
        regular: RegularArgs,
    },
    /// The tangent map Ext¹_B(N, N) → Ext¹_A(M, M).
    TangentSigma {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[command(flatten)]
        regular: RegularArgs,
    },
    /// Obstruction identities along π and ι of an approximation over B.
    OmapCheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[command(flatten)]
        problem: ProblemArgs,
    },
    /// Ext-vanishing hypotheses for an approximation and its hull.
    Hypotheses {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        module: String,
        #[arg(long)]
        codim: Option<i32>,
    },
    /// Runs a verification suite over GF(32003).
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
}

#[derive(Subcommand, Debug, Clone)]
pub enum Suite {
    /// A(m) identities and the fundamental module.
    Veronese {
        #[arg(long, default_value_t = 2)]
        m: usize,
    },
    /// Node and cusp.
    Knorrer,
    /// Brute-force lifting suite, torsor and base-change identities.
    Obstruction {
        #[arg(long, default_value_t = 8)]
        cap: usize,
    },
    /// Obstructions along approximation maps.
    Omap,
}

impl Command {
    pub fn input(&self) -> Option<&PathBuf> {
        use Command::*;
        match self {
            Gb { input, .. }
            | Resolve { input, .. }
            | Betti { input, .. }
            | Ext { input, .. }
            | Depth { input, .. }
            | Dim { input, .. }
            | Canonical { input, .. }
            | McmApprox { input, .. }
            | FidHull { input, .. }
            | Fundamental { input, .. }
            | Knorrer { input, .. }
            | Eisenbud { input, .. }
            | Obstruction { input, .. }
            | Lift { input, .. }
            | Torsor { input, .. }
            | Splits { input, .. }
            | TangentSigma { input, .. }
            | OmapCheck { input, .. }
            | Hypotheses { input, .. } => Some(&input.file),
            Verify { .. } => None,
        }
    }
}

fn series(s: &HilbertSeries) -> Value {
    Value::String(s.render())
}

fn betti(b: &BettiTable) -> Value {
    let graded: Vec<Value> = b
        .entries
        .iter()
        .map(|m| Value::Array(m.iter().map(|(d, n)| Value::from(vec![*d as i64, *n as i64])).collect()))
        .collect();
    Obj::new()
        .set("totals", b.totals())
        .set("graded", graded)
        .set("table", b.render())
        .build()
}

fn module_info<F: Field>(m: &Module<F>) -> Value {
    let p = m.prune().module;
    let poly = p.ring().poly().clone();
    Obj::new()
        .set("ring", p.ring().describe())
        .set("mu", p.mu())
        .set("generator_degrees", p.degs().to_vec())
        .set(
            "presentation",
            if p.rels().is_empty() {
                "free".to_string()
            } else {
                p.presentation().render(&poly)
            },
        )
        .set("krull_dim", p.krull_dim())
        .set("rank", p.rank_over_ring().to_string())
        .set("hilbert_series", series(p.hilbert_series()))
        .build()
}

fn class<F: Field>(c: &ObstructionClass<F>) -> Value {
    Obj::new()
        .set("zero", c.is_zero())
        .set("coords", c.render())
        .set("degrees", c.degrees.clone())
        .build()
}

fn complex_info<F: Field>(c: &Complex<F>, maps: bool) -> anyhow::Result<Value> {
    let mut o = Obj::new()
        .set("steps", c.len())
        .set("betti", betti(&c.betti()))
        .set("d_squared_zero", c.is_complex())
        .set("exact", c.is_exact()?);
    if maps {
        let poly = c.ring.poly();
        let ds: Vec<Value> = (1..=c.len()).map(|k| Value::String(c.d(k).render(poly))).collect();
        o.push("differentials", ds);
    }
    Ok(o.build())
}

fn approx_info<F: Field>(t: &ApproxTriple<F>) -> anyhow::Result<Value> {
    let l_free = t.l.prune().module.rels().is_empty();
    Ok(Obj::new()
        .set("N", module_info(&t.n))
        .set("M", module_info(&t.m))
        .set("L", module_info(&t.l))
        .set("M_is_mcm", is_mcm(&t.m)?)
        .set("exact", is_short_exact(&t.rho, &t.pi)?)
        .set("minimal", t.minimal)
        .set("L_free", l_free)
        .set("L_omega_resolution_length", t.l_resolution.len())
        .build())
}

fn problem<F: Field>(doc: &Document<F>, p: &ProblemArgs, n: &Module<F>) -> anyhow::Result<LiftingProblem<F>> {
    let q = match &p.extension {
        Some(e) => doc.induced(&p.ring, e)?,
        None => {
            if p.kernel.is_empty() {
                bail!("give --kernel or --extension");
            }
            let big = doc.ring(&p.ring)?;
            let j = doc.parse_polys(&big, &p.kernel)?;
            LiftingProblem::new(big, &j)?
        }
    };
    if !n.ring().same_as(q.small()) {
        bail!(
            "the module lives over {}, not over B = {}",
            n.ring().describe(),
            q.small().describe()
        );
    }
    Ok(q)
}

fn regular<F: Field>(
    doc: &Document<F>,
    r: &RegularArgs,
) -> anyhow::Result<(Arc<GradedRing<F>>, Vec<cmapx_core::poly::Poly<F>>)> {
    let a = doc.ring(&r.ring)?;
    let j = doc.parse_polys(&a, &r.kernel)?;
    Ok((a, j))
}

fn problem_info<F: Field>(q: &LiftingProblem<F>) -> Value {
    let poly = q.big().poly().clone();
    Obj::new()
        .set("big", q.big().describe())
        .set("small", q.small().describe())
        .set("kernel", q.j().iter().map(|p| poly.render(p)).collect::<Vec<_>>())
        .build()
}

/// Evaluates a document command.
pub fn evaluate<F: Field>(doc: &Document<F>, cmd: &Command, exec: Exec) -> anyhow::Result<Value> {
    doc.validate()?;
    Ok(match cmd {
        Command::Gb { ring, module, .. } => match (ring, module) {
            (Some(r), None) => {
                let r = doc.ring(r)?;
                let gb = r.ideal_gb();
                let ctx = gb.ctx();
                let elems: Vec<String> = gb.elems().iter().map(|v| ctx.render(v, 1)).collect();
                Obj::new()
                    .set("ring", r.describe())
                    .set("size", elems.len())
                    .set("basis", elems)
                    .build()
            }
            (None, Some(m)) => {
                let m = doc.module(m)?;
                let gb = m.gb();
                let ctx = gb.ctx();
                let elems: Vec<String> = gb.elems().iter().map(|v| ctx.render(v, m.rank())).collect();
                Obj::new()
                    .set("module", m.describe())
                    .set("size", elems.len())
                    .set("basis", elems)
                    .build()
            }
            _ => bail!("give --ring or --module"),
        },
        Command::Resolve {
            module, steps, maps, ..
        } => {
            let m = doc.module(module)?;
            let res = resolve(&m, *steps)?;
            Obj::new()
                .set("module", module_info(&m))
                .set("complete", res.complete)
                .set("pd", res.pd())
                .set("resolution", complex_info(&res.complex, *maps)?)
                .set("certified", res.verify()?)
                .build()
        }
        Command::Betti { module, steps, .. } => {
            let res = resolve(&doc.module(module)?, *steps)?;
            Obj::new()
                .set("complete", res.complete)
                .set("betti", betti(&res.betti()))
                .build()
        }
        Command::Ext {
            i, from, to, window, ..
        } => {
            let m = doc.module(from)?;
            let n = doc.module(to)?;
            let e = ExtSpace::compute(*i, &m, &n, exec)?.with_window(*window);
            let graded: Vec<Value> = e
                .graded_dims()
                .into_iter()
                .map(|(d, n)| Value::from(vec![d as i64, n as i64]))
                .collect();
            Obj::new()
                .set("i", *i)
                .set("finite_length", e.is_finite())
                .set("dim", e.dim())
                .set("graded_dims", graded)
                .set(
                    "window",
                    if e.is_finite() {
                        Value::Null
                    } else {
                        Value::from(*window)
                    },
                )
                .set("hilbert_series", series(e.series()))
                .build()
        }
        Command::Depth { module, .. } => {
            let m = doc.module(module)?;
            let d = depth(&m)?;
            Obj::new()
                .set("depth", d)
                .set("krull_dim", m.krull_dim())
                .set("ring_dim", m.ring().krull_dim())
                .set("cohen_macaulay", d == m.krull_dim())
                .set("mcm", is_mcm(&m)?)
                .build()
        }
        Command::Dim { module, ring, .. } => {
            let s = match (module, ring) {
                (Some(m), None) => doc.module(m)?.hilbert_series().clone(),
                (None, Some(r)) => doc.ring(r)?.hilbert_series().clone(),
                _ => bail!("give --ring or --module"),
            };
            let lo = s.numerator().low().min(0);
            Obj::new()
                .set("krull_dim", s.krull_dim())
                .set("multiplicity", s.multiplicity().to_string())
                .set("hilbert_series", series(&s))
                .set("hilbert_function_from", lo)
                .set("hilbert_function", s.dims(lo, lo + 10))
                .set("length", s.total_length())
                .build()
        }
        Command::Canonical { ring, .. } => {
            let a = doc.ring(ring)?;
            let w = canonical_module(&a)?;
            let t = ring_type(&a)?;
            Obj::new()
                .set("omega", module_info(&w))
                .set("type", t)
                .set("gorenstein", t == 1)
                .build()
        }
        Command::McmApprox { module, codim, .. } => approx_info(&*doc.approximation(module, None, *codim)?)?,
        Command::FidHull { module, codim, .. } => {
            let t = doc.approximation(module, None, *codim)?;
            let h = fid_hull(&t)?;
            Obj::new()
                .set("N", module_info(&h.n))
                .set("L_prime", module_info(&h.l_prime))
                .set("M_prime", module_info(&h.m_prime))
                .set("M_prime_is_mcm", is_mcm(&h.m_prime)?)
                .set("exact", is_short_exact(&h.iota, &h.eta)?)
                .set("L_prime_omega_shifts", h.l_prime_resolution.clone())
                .build()
        }
        Command::Fundamental { ring, .. } => {
            let a = doc.ring(ring)?;
            let e = fundamental_module(&a, exec)?;
            let ext1 = ExtSpace::compute(1, &e.module, &e.module, exec)?;
            Obj::new()
                .set("E", module_info(&e.module))
                .set("exact", is_short_exact(&e.rho, &e.pi)?)
                .set("twist", e.twist)
                .set("ext1_EE", ext1.dim())
                .build()
        }
        Command::Knorrer { mf, module, .. } => match (mf, module) {
            (Some(name), None) => {
                let x = doc.mf(name)?;
                let big = knorrer(&x)?;
                let stats = mf_stats(&x)?;
                Obj::new()
                    .set("input", x.render())
                    .set("size", x.size())
                    .set("multiplicity", stats.multiplicity.to_string())
                    .set("rank", stats.rank)
                    .set("rank_note", stats.flag)
                    .set("knorrer", big.render())
                    .set("knorrer_size", big.size())
                    .set("checked", big.check().is_ok())
                    .build()
            }
            (None, Some(name)) => {
                let n = doc.module(name)?;
                let k = knorrer_approx(&n, exec)?;
                let b = k.rings.b.clone();
                let e1a = ExtSpace::compute(1, &k.triple.m, &k.triple.m, exec)?.dim();
                let e1b = ExtSpace::compute(1, &n, &n, exec)?.dim();
                let e2b = ExtSpace::compute(2, &n, &n, exec)?.dim();
                Obj::new()
                    .set("A", k.rings.a.describe())
                    .set("B", b.describe())
                    .set("dual_factorization", k.dual_mf.render())
                    .set("approximation", approx_info(&k.triple)?)
                    .set("free_rank", k.free_rank)
                    .set("twist", k.twist)
                    .set("ext1_A_MM", e1a)
                    .set("ext1_B_NN", e1b)
                    .set("ext2_B_NN", e2b)
                    .build()
            }
            _ => bail!("give --mf or --module"),
        },
        Command::Eisenbud { mf, steps, .. } => {
            let x = doc.mf(mf)?;
            let c = eisenbud_resolution(&x, *steps)?;
            Obj::new()
                .set("ring", c.ring.describe())
                .set("complex", complex_info(&c, true)?)
                .build()
        }
        Command::Obstruction {
            module,
            problem: p,
            four_term,
            ..
        } => {
            let n = doc.module(module)?;
            let q = problem(doc, p, &n)?;
            let ctx = LiftingContext::new(&q, &n, exec)?;
            let ob = ctx.obstruction()?;
            let mut o = Obj::new()
                .set("problem", problem_info(&q))
                .set("ext2_dim", ctx.ext2().dim())
                .set("obstruction", class(&ob))
                .set("lifts", ob.is_zero());
            if *four_term {
                let ft = ctx.four_term_ob()?;
                o.push("agrees", ft.same_as(&ob));
                o.push("four_term", class(&ft));
            }
            o.build()
        }
        Command::Lift {
            module,
            problem: p,
            brute_force,
            cap,
            ..
        } => {
            let n = doc.module(module)?;
            let q = problem(doc, p, &n)?;
            let ctx = LiftingContext::new(&q, &n, exec)?;
            let mut o = Obj::new().set("problem", problem_info(&q));
            let lifts = match ctx.lift()? {
                LiftOutcome::Lifted(l) => {
                    let cert = ctx.certify(&l)?;
                    o.push("lifted", true);
                    o.push("d1", l.d1.render(q.big().poly()));
                    o.push(
                        "certificate",
                        Obj::new().set("reduces", cert.reduces).set("flat", cert.flat),
                    );
                    o.push("lifting", module_info(&l.module));
                    true
                }
                LiftOutcome::Obstructed(c) => {
                    o.push("lifted", false);
                    o.push("obstruction", class(&c));
                    false
                }
            };
            if *brute_force {
                let b = cmapx_core::obstruct::brute_force_liftings(&q, &n, *cap, exec)?;
                o.push(
                    "brute_force",
                    Obj::new()
                        .set("total_dim", b.total_dim)
                        .set("unknowns", b.unknowns)
                        .set("equations", b.equations)
                        .set("exists", b.exists)
                        .set("moduli_dim", b.moduli_dim)
                        .set("agrees", b.exists == lifts),
                );
            }
            o.build()
        }
        Command::Torsor {
            module, problem: p, xi, ..
        } => {
            let n = doc.module(module)?;
            let q = problem(doc, p, &n)?;
            let ctx = LiftingContext::new(&q, &n, exec)?;
            let LiftOutcome::Lifted(l) = ctx.lift()? else {
                bail!("N does not lift along q; the torsor is empty");
            };
            let f = n.ring().field().clone();
            let degs = ctx.ext1().basis_degrees();
            let mut o = Obj::new()
                .set("problem", problem_info(&q))
                .set("ext1_basis_degrees", degs.clone())
                .set("degree0_classes", degs.iter().filter(|&&d| d == 0).count())
                .set("lifting", l.d1.render(q.big().poly()));
            if !xi.is_empty() {
                let coords: Vec<F::Elem> = xi.iter().map(|&c| f.from_i64(c)).collect();
                let moved = ctx.torsor_act(&l, &coords)?;
                let back = ctx.lifting_difference(&moved, &l)?;
                o.push("acted", moved.d1.render(q.big().poly()));
                o.push("difference", back.iter().map(|c| f.render(c)).collect::<Vec<_>>());
                o.push("difference_recovers_xi", back == coords);
                o.push("equivalent_to_original", ctx.equivalent(&moved, &l)?);
            }
            o.build()
        }
        Command::Splits { module, regular: r, .. } => {
            let n = doc.module(module)?;
            let (a, j) = regular(doc, r)?;
            let rq = ob_regular_quotient(&a, &j, &n, exec)?;
            let s = splits_pibar(&rq.triple, &j, exec)?;
            Obj::new()
                .set("splits", s.splits)
                .set("obstruction", class(&rq.direct))
                .set("sequence_class", class(&rq.class))
                .set("agrees", s.splits == rq.direct.is_zero())
                .set("M_bar", module_info(&s.m_bar))
                .build()
        }
        Command::TangentSigma { module, regular: r, .. } => {
            let n = doc.module(module)?;
            let (a, j) = regular(doc, r)?;
            let rq = ob_regular_quotient(&a, &j, &n, exec)?;
            let s = tangent_sigma(&rq.triple, &j, exec)?;
            Obj::new()
                .set("source_dim", s.source_dim)
                .set("target_dim", s.target_dim)
                .set("rank", s.rank)
                .set("injective", s.injective)
                .set("coker_dim", s.coker_dim)
                .set("ext2_B_NN", s.ext2_dim)
                .build()
        }
        Command::OmapCheck { module, problem: p, .. } => {
            let n = doc.module(module)?;
            let q = problem(doc, p, &n)?;
            let c = n.ring().krull_dim() - n.krull_dim();
            let t = cmapx_core::cmapprox::mcm_approx_cm(&n, c, exec)?;
            let r = omap_check(&q, &t, exec)?;
            let f = n.ring().field().clone();
            let show = |v: &[F::Elem]| v.iter().map(|c| f.render(c)).collect::<Vec<_>>();
            Obj::new()
                .set("pi_push_ob_M", show(&r.approx.0))
                .set("pi_pull_ob_N", show(&r.approx.1))
                .set("iota_push_ob_N", show(&r.hull.0))
                .set("iota_pull_ob_L_prime", show(&r.hull.1))
                .set("difference_checks", r.difference.clone())
                .set("holds", r.holds())
                .build()
        }
        Command::Hypotheses { module, codim, .. } => {
            let t = doc.approximation(module, None, *codim)?;
            let h = ext_vanishing_report(&t, exec)?;
            let entries: Vec<Value> = h
                .entries
                .iter()
                .map(|e| {
                    Obj::new()
                        .set("name", e.name.clone())
                        .set("dim", e.dim)
                        .set("vanishes", e.vanishes)
                        .build()
                })
                .collect();
            Obj::new()
                .set("entries", entries)
                .set("grade", h.grade)
                .set("depth_N", h.depth_n)
                .set("L_free", h.l_free)
                .build()
        }
        Command::Verify { .. } => return Err(anyhow!("verify takes no document")),
    })
}
