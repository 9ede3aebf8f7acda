//! Input documents.
//!
//! A document is TOML with named blocks that refer to each other by name:
//!
//! ```toml
//! field = "gf(32003)"
//!
//! [ring.A]
//! vars = ["x", "y", "t"]
//! relations = ["x*y - t^2"]
//!
//! [ring.B]
//! base = "A"
//! relations = ["t"]
//!
//! [module.k]
//! ring = "B"
//! kind = "residue"
//!
//! [module.M]
//! ring = "A"
//! kind = "approx"
//! of = "k"
//! part = "M"
//! ```
//!
//! Module relations are free-module elements written as comma-separated
//! components (`"x, -y"`) over generators of the given `degrees`. Every
//! parse or validation error points at the offending token.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, Context};
use serde::Deserialize;
use toml::Spanned;

use cmapx_core::cmapprox::{fid_hull, fundamental_module, mcm_approx_cm, ApproxTriple};
use cmapx_core::error::Error as CoreError;
use cmapx_core::exec::Exec;
use cmapx_core::field::{Field, FieldSpec};
use cmapx_core::homalg::canonical_module;
use cmapx_core::mf::MatrixFactorization;
use cmapx_core::module::Module;
use cmapx_core::mono::MonomialOrder;
use cmapx_core::obstruct::{ArtinAlgebra, LiftingProblem, SmallExtension};
use cmapx_core::poly::{Poly, PolyRing};
use cmapx_core::resolve::resolve;
use cmapx_core::ring::GradedRing;
use cmapx_core::text::parse_poly;

pub const FIELD_ENV: &str = "CMAPX_FIELD";
pub const ORDER_ENV: &str = "CMAPX_ORDER";

/// An error at a position of the input file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located {
    pub path: PathBuf,
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for Located {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}: {}", self.path.display(), self.line, self.col, self.msg)
    }
}

impl std::error::Error for Located {}

type S = Spanned<String>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    field: Option<S>,
    order: Option<S>,
    #[serde(default)]
    ring: BTreeMap<String, Spanned<RawRing>>,
    #[serde(default)]
    module: BTreeMap<String, Spanned<RawModule>>,
    #[serde(default)]
    mf: BTreeMap<String, Spanned<RawMf>>,
    #[serde(default)]
    artin: BTreeMap<String, Spanned<RawRing>>,
    #[serde(default, rename = "small-extension")]
    small_extension: BTreeMap<String, Spanned<RawExtension>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRing {
    vars: Option<Vec<S>>,
    weights: Option<Spanned<Vec<i32>>>,
    #[serde(default)]
    relations: Vec<S>,
    base: Option<S>,
    veronese: Option<Spanned<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModule {
    ring: S,
    over: Option<S>,
    kind: Option<S>,
    degrees: Option<Spanned<Vec<i32>>>,
    relations: Option<Vec<S>>,
    generators: Option<Vec<S>>,
    of: Option<S>,
    part: Option<S>,
    index: Option<usize>,
    codim: Option<i32>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMf {
    ring: S,
    f: S,
    phi: Vec<Vec<S>>,
    psi: Vec<Vec<S>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExtension {
    artin: S,
    kernel: Vec<S>,
}

/// A parsed but not yet interpreted document.
pub struct Source {
    path: PathBuf,
    text: String,
    raw: RawDoc,
}

impl Source {
    pub fn load(path: &Path) -> anyhow::Result<Source> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Source::parse(path, text)
    }

    pub fn parse(path: &Path, text: String) -> anyhow::Result<Source> {
        let raw: RawDoc = match toml::from_str(&text) {
            Ok(r) => r,
            Err(e) => {
                let span = e.span().unwrap_or(0..0);
                let (line, col) = line_col(&text, span.start);
                return Err(Located {
                    path: path.to_path_buf(),
                    line,
                    col,
                    msg: e.message().trim().to_string(),
                }
                .into());
            }
        };
        Ok(Source {
            path: path.to_path_buf(),
            text,
            raw,
        })
    }

    fn located(&self, offset: usize, msg: impl Into<String>) -> anyhow::Error {
        let (line, col) = line_col(&self.text, offset);
        Located {
            path: self.path.clone(),
            line,
            col,
            msg: msg.into(),
        }
        .into()
    }

    /// Field: the override, else the document, else the environment, else GF(32003).
    pub fn field_spec(&self, flag: Option<&str>) -> anyhow::Result<FieldSpec> {
        if let Some(f) = flag {
            return Ok(FieldSpec::parse(f)?);
        }
        if let Some(f) = &self.raw.field {
            return FieldSpec::parse(f.get_ref()).map_err(|e| self.located(f.span().start, msg(&e)));
        }
        default_field()
    }

    pub fn order(&self, flag: Option<&str>) -> anyhow::Result<MonomialOrder> {
        if let Some(o) = flag {
            return Ok(MonomialOrder::parse(o)?);
        }
        if let Some(o) = &self.raw.order {
            return MonomialOrder::parse(o.get_ref()).map_err(|e| self.located(o.span().start, msg(&e)));
        }
        default_order()
    }
}

pub fn default_field() -> anyhow::Result<FieldSpec> {
    match std::env::var(FIELD_ENV) {
        Ok(v) => FieldSpec::parse(&v).with_context(|| format!("in {FIELD_ENV}")),
        Err(_) => Ok(FieldSpec::Prime(FieldSpec::DEFAULT_PRIME)),
    }
}

pub fn default_order() -> anyhow::Result<MonomialOrder> {
    match std::env::var(ORDER_ENV) {
        Ok(v) => MonomialOrder::parse(&v).with_context(|| format!("in {ORDER_ENV}")),
        Err(_) => Ok(MonomialOrder::Grevlex),
    }
}

fn msg(e: &CoreError) -> String {
    match e {
        CoreError::Validation(m) | CoreError::Precondition(m) | CoreError::Limit(m) => m.clone(),
        CoreError::Parse { msg, .. } => msg.clone(),
    }
}

/// 1-based line and column (in characters) of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let start = before.rfind('\n').map_or(0, |i| i + 1);
    (line, text[start..offset].chars().count() + 1)
}

/// Which of `[ring]` or `[artin]` a ring name refers to.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Table {
    Ring,
    Artin,
}

/// A document interpreted over a concrete field.
pub struct Document<F: Field> {
    src: Source,
    field: F,
    order: MonomialOrder,
    exec: Exec,
    rings: RefCell<BTreeMap<(Table, String), Arc<GradedRing<F>>>>,
    modules: RefCell<BTreeMap<String, Module<F>>>,
    approx: RefCell<BTreeMap<String, Arc<ApproxTriple<F>>>>,
    visiting: RefCell<BTreeSet<String>>,
}

impl<F: Field> Document<F> {
    pub fn new(src: Source, field: F, order: MonomialOrder, exec: Exec) -> Self {
        Document {
            src,
            field,
            order,
            exec,
            rings: RefCell::default(),
            modules: RefCell::default(),
            approx: RefCell::default(),
            visiting: RefCell::default(),
        }
    }

    pub fn path(&self) -> &Path {
        &self.src.path
    }

    /// Interprets every block except derived modules, which may be expensive.
    pub fn validate(&self) -> anyhow::Result<()> {
        let raw = &self.src.raw;
        for name in raw.ring.keys() {
            self.ring(name)?;
        }
        for name in raw.artin.keys() {
            self.artin(name)?;
        }
        for name in raw.small_extension.keys() {
            self.extension(name)?;
        }
        for name in raw.mf.keys() {
            self.mf(name)?;
        }
        for (name, m) in &raw.module {
            if !is_derived(m.get_ref()) {
                self.module(name)?;
            }
        }
        Ok(())
    }

    pub fn ring_names(&self) -> Vec<String> {
        self.src.raw.ring.keys().cloned().collect()
    }

    pub fn module_names(&self) -> Vec<String> {
        self.src.raw.module.keys().cloned().collect()
    }

    pub fn mf_names(&self) -> Vec<String> {
        self.src.raw.mf.keys().cloned().collect()
    }

    fn enter(&self, key: String, at: usize) -> anyhow::Result<Guard<'_>> {
        if !self.visiting.borrow_mut().insert(key.clone()) {
            return Err(self.src.located(at, format!("circular reference through `{key}`")));
        }
        Ok(Guard {
            set: &self.visiting,
            key,
        })
    }

    fn poly(&self, ring: &PolyRing<F>, s: &S) -> anyhow::Result<Poly<F>> {
        self.poly_at(ring, s.get_ref(), s.span().start + 1)
    }

    /// Parses `text`, which starts at byte `offset` of the file.
    fn poly_at(&self, ring: &PolyRing<F>, text: &str, offset: usize) -> anyhow::Result<Poly<F>> {
        parse_poly(ring, text).map_err(|e| match e {
            CoreError::Parse { col, msg, .. } => {
                let shift: usize = text.chars().take(col - 1).map(char::len_utf8).sum();
                self.src.located(offset + shift, msg)
            }
            other => self.src.located(offset, msg(&other)),
        })
    }

    fn homogeneous(&self, ring: &PolyRing<F>, s: &S) -> anyhow::Result<Poly<F>> {
        let p = self.poly(ring, s)?;
        if !p.is_homogeneous() {
            return Err(self
                .src
                .located(s.span().start, format!("`{}` is not homogeneous", s.get_ref())));
        }
        Ok(p)
    }

    fn lookup_ring(&self, table: Table, name: &str) -> Option<&Spanned<RawRing>> {
        match table {
            Table::Ring => self.src.raw.ring.get(name),
            Table::Artin => self.src.raw.artin.get(name),
        }
    }

    pub fn ring(&self, name: &str) -> anyhow::Result<Arc<GradedRing<F>>> {
        self.ring_in(Table::Ring, name, None)
    }

    fn ring_ref(&self, s: &S) -> anyhow::Result<Arc<GradedRing<F>>> {
        self.ring_in(Table::Ring, s.get_ref(), Some(s.span().start))
    }

    fn ring_in(&self, table: Table, name: &str, at: Option<usize>) -> anyhow::Result<Arc<GradedRing<F>>> {
        let key = (table, name.to_string());
        if let Some(r) = self.rings.borrow().get(&key) {
            return Ok(r.clone());
        }
        let what = if table == Table::Ring { "ring" } else { "artin" };
        let Some(raw) = self.lookup_ring(table, name) else {
            let e = anyhow!("unknown {what} `{name}`");
            return Err(match at {
                Some(at) => self.src.located(at, e.to_string()),
                None => e,
            });
        };
        let _g = self.enter(format!("{what}.{name}"), raw.span().start)?;
        let r = self.build_ring(table, raw)?;
        self.rings.borrow_mut().insert(key, r.clone());
        Ok(r)
    }

    fn build_ring(&self, table: Table, raw: &Spanned<RawRing>) -> anyhow::Result<Arc<GradedRing<F>>> {
        let at = raw.span().start;
        let r = raw.get_ref();
        let forms = [r.vars.is_some(), r.base.is_some(), r.veronese.is_some()];
        if forms.iter().filter(|&&b| b).count() != 1 {
            return Err(self
                .src
                .located(at, "a ring needs exactly one of `vars`, `base` or `veronese`"));
        }
        if let Some(m) = &r.veronese {
            if !r.relations.is_empty() || r.weights.is_some() {
                return Err(self.src.located(at, "`veronese` takes no relations or weights"));
            }
            return GradedRing::veronese(self.field.clone(), *m.get_ref())
                .map_err(|e| self.src.located(m.span().start, msg(&e)));
        }
        if let Some(b) = &r.base {
            if r.weights.is_some() {
                return Err(self.src.located(at, "a quotient ring inherits its weights"));
            }
            let base = self.ring_in(table, b.get_ref(), Some(b.span().start))?;
            let extra = r
                .relations
                .iter()
                .map(|s| self.homogeneous(base.poly(), s))
                .collect::<anyhow::Result<Vec<_>>>()?;
            return base.quotient(&extra).map_err(|e| self.src.located(at, msg(&e)));
        }
        let vars = r.vars.as_ref().expect("checked above");
        let mut seen = BTreeSet::new();
        for v in vars {
            let ok = v
                .get_ref()
                .chars()
                .next()
                .is_some_and(|c| c.is_alphabetic() || c == '_')
                && v.get_ref().chars().all(|c| c.is_alphanumeric() || c == '_');
            if !ok {
                return Err(self
                    .src
                    .located(v.span().start, format!("bad variable name `{}`", v.get_ref())));
            }
            if !seen.insert(v.get_ref().clone()) {
                return Err(self
                    .src
                    .located(v.span().start, format!("duplicate variable `{}`", v.get_ref())));
            }
        }
        let names: Vec<String> = vars.iter().map(|v| v.get_ref().clone()).collect();
        let weights = match &r.weights {
            Some(w) => {
                if w.get_ref().len() != names.len() || w.get_ref().iter().any(|&d| d <= 0) {
                    return Err(self
                        .src
                        .located(w.span().start, format!("need {} positive weights", names.len())));
                }
                w.get_ref().clone()
            }
            None => vec![1; names.len()],
        };
        let order = match &self.order {
            MonomialOrder::Weighted(w) if w.len() != names.len() => {
                return Err(self
                    .src
                    .located(at, format!("order weights do not match the {} variables", names.len())))
            }
            o => o.clone(),
        };
        let poly = Arc::new(
            PolyRing::new(self.field.clone(), names, weights, order).map_err(|e| self.src.located(at, msg(&e)))?,
        );
        let rels = r
            .relations
            .iter()
            .map(|s| self.homogeneous(&poly, s))
            .collect::<anyhow::Result<Vec<_>>>()?;
        for (s, p) in r.relations.iter().zip(&rels) {
            if p.as_constant().is_some() {
                return Err(self.src.located(s.span().start, format!("`{}` is a unit", s.get_ref())));
            }
        }
        GradedRing::new(poly, rels).map_err(|e| self.src.located(at, msg(&e)))
    }

    pub fn artin(&self, name: &str) -> anyhow::Result<ArtinAlgebra<F>> {
        self.artin_at(name, None)
    }

    fn artin_at(&self, name: &str, at: Option<usize>) -> anyhow::Result<ArtinAlgebra<F>> {
        let r = self.ring_in(Table::Artin, name, at)?;
        let start = self.src.raw.artin[name].span().start;
        ArtinAlgebra::new(r).map_err(|e| self.src.located(start, msg(&e)))
    }

    pub fn extension(&self, name: &str) -> anyhow::Result<SmallExtension<F>> {
        self.extension_at(name, None)
    }

    fn extension_at(&self, name: &str, at: Option<usize>) -> anyhow::Result<SmallExtension<F>> {
        let Some(raw) = self.src.raw.small_extension.get(name) else {
            let m = format!("unknown small-extension `{name}`");
            return Err(match at {
                Some(at) => self.src.located(at, m),
                None => anyhow!(m),
            });
        };
        let e = raw.get_ref();
        let big = self.artin_at(e.artin.get_ref(), Some(e.artin.span().start))?;
        let kernel = e
            .kernel
            .iter()
            .map(|s| self.homogeneous(big.ring().poly(), s))
            .collect::<anyhow::Result<Vec<_>>>()?;
        SmallExtension::new(big, &kernel).map_err(|err| self.src.located(raw.span().start, msg(&err)))
    }

    pub fn mf(&self, name: &str) -> anyhow::Result<MatrixFactorization<F>> {
        let raw = self
            .src
            .raw
            .mf
            .get(name)
            .ok_or_else(|| anyhow!("unknown mf `{name}`"))?;
        let m = raw.get_ref();
        let ring = self.ring_ref(&m.ring)?;
        let poly = ring.poly().clone();
        let f = self.homogeneous(&poly, &m.f)?;
        let rows = |rows: &[Vec<S>]| -> anyhow::Result<Vec<Vec<Poly<F>>>> {
            rows.iter()
                .map(|r| r.iter().map(|s| self.poly(&poly, s)).collect())
                .collect()
        };
        let phi = rows(&m.phi)?;
        let psi = rows(&m.psi)?;
        MatrixFactorization::from_entries(ring, f, &phi, &psi).map_err(|e| {
            let m = msg(&e);
            // Point at the failing entry when the message names one.
            let at = entry_of(&m)
                .and_then(|(i, j)| raw.get_ref().phi.get(i).and_then(|r| r.get(j)))
                .map_or(raw.span().start, |s| s.span().start);
            self.src.located(at, m)
        })
    }

    /// The lifting problem A ⊗ R′ → A ⊗ R of a small extension over a ring.
    pub fn induced(&self, ring: &str, ext: &str) -> anyhow::Result<LiftingProblem<F>> {
        let a = self.ring(ring)?;
        Ok(self.extension(ext)?.induced(&a)?)
    }

    pub fn module(&self, name: &str) -> anyhow::Result<Module<F>> {
        self.module_at(name, None)
    }

    fn module_at(&self, name: &str, at: Option<usize>) -> anyhow::Result<Module<F>> {
        if let Some(m) = self.modules.borrow().get(name) {
            return Ok(m.clone());
        }
        let Some(raw) = self.src.raw.module.get(name) else {
            let m = format!("unknown module `{name}`");
            return Err(match at {
                Some(at) => self.src.located(at, m),
                None => anyhow!(m),
            });
        };
        let _g = self.enter(format!("module.{name}"), raw.span().start)?;
        let m = self.build_module(raw)?;
        self.modules.borrow_mut().insert(name.to_string(), m.clone());
        Ok(m)
    }

    fn module_ref(&self, s: &S) -> anyhow::Result<Module<F>> {
        self.module_at(s.get_ref(), Some(s.span().start))
    }

    /// The ring a module block lives over: its `ring`, or A ⊗ R for a family
    /// over the small end R of the `over` extension.
    fn module_ring(&self, m: &RawModule) -> anyhow::Result<Arc<GradedRing<F>>> {
        let a = self.ring_ref(&m.ring)?;
        match &m.over {
            None => Ok(a),
            Some(q) => {
                let ext = self.extension_at(q.get_ref(), Some(q.span().start))?;
                let p = ext.induced(&a).map_err(|e| self.src.located(q.span().start, msg(&e)))?;
                Ok(p.small().clone())
            }
        }
    }

    fn build_module(&self, raw: &Spanned<RawModule>) -> anyhow::Result<Module<F>> {
        let at = raw.span().start;
        let m = raw.get_ref();
        let ring = self.module_ring(m)?;
        let kind = match &m.kind {
            Some(k) => k.get_ref().as_str(),
            None if m.relations.is_some() => "coker",
            None if m.generators.is_some() => "ideal",
            None => "free",
        };
        let kat = m.kind.as_ref().map_or(at, |k| k.span().start);
        let degrees = m.degrees.as_ref().map(|d| d.get_ref().clone());
        let fail = |e: CoreError| self.src.located(at, msg(&e));
        let allowed: &[&str] = match kind {
            "residue" | "free" => &["degrees"],
            "coker" => &["degrees", "relations"],
            "ideal" => &["generators"],
            "approx" | "hull" => &["of", "part", "codim"],
            "syzygy" => &["of", "index"],
            "canonical" | "fundamental" => &[],
            other => {
                return Err(self.src.located(
                    kat,
                    format!("unknown module kind `{other}`: expected residue, free, coker, ideal, approx, hull, syzygy, canonical or fundamental"),
                ))
            }
        };
        let given = [
            ("degrees", m.degrees.is_some()),
            ("relations", m.relations.is_some()),
            ("generators", m.generators.is_some()),
            ("of", m.of.is_some()),
            ("part", m.part.is_some()),
            ("index", m.index.is_some()),
            ("codim", m.codim.is_some()),
        ];
        for (key, present) in given {
            if present && !allowed.contains(&key) {
                return Err(self
                    .src
                    .located(kat, format!("`{key}` does not apply to kind `{kind}`")));
            }
        }
        if is_derived(m) && m.over.is_some() {
            return Err(self
                .src
                .located(kat, format!("kind `{kind}` cannot be a family (`over`)")));
        }
        match kind {
            "residue" => {
                let d = match degrees.as_deref() {
                    None => 0,
                    Some([d]) => *d,
                    Some(_) => return Err(self.src.located(at, "a residue field takes one degree")),
                };
                Ok(Module::residue_field(ring, d))
            }
            "free" => Ok(Module::free(ring, degrees.unwrap_or_else(|| vec![0]))),
            "coker" => {
                let rels = m.relations.as_deref().unwrap_or_default();
                let rank = match (&degrees, rels.first()) {
                    (Some(d), _) => d.len(),
                    (None, Some(r)) => r.get_ref().split(',').count(),
                    (None, None) => 1,
                };
                let degs = degrees.unwrap_or_else(|| vec![0; rank]);
                let ctx = cmapx_core::vector::FreeCtx::new(ring.poly(), cmapx_core::ring::MODULE_ORDER, &degs);
                let mut vecs = Vec::new();
                for r in rels {
                    let parts = self.components(ring.poly(), r)?;
                    if parts.len() != rank {
                        return Err(self.src.located(
                            r.span().start,
                            format!("relation has {} components, the module has rank {rank}", parts.len()),
                        ));
                    }
                    let refs: Vec<&Poly<F>> = parts.iter().collect();
                    let v = ctx.from_polys(&refs);
                    if !ctx.is_homogeneous(&v) {
                        return Err(self.src.located(
                            r.span().start,
                            format!(
                                "relation `{}` is not homogeneous for generator degrees {degs:?}",
                                r.get_ref()
                            ),
                        ));
                    }
                    vecs.push(v);
                }
                Module::new(ring, degs, vecs).map_err(fail)
            }
            "ideal" => {
                let gens = m
                    .generators
                    .as_deref()
                    .unwrap_or_default()
                    .iter()
                    .map(|s| self.homogeneous(ring.poly(), s))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                if gens.is_empty() {
                    return Err(self.src.located(at, "an ideal needs generators"));
                }
                Module::ideal(ring, &gens).map_err(fail)
            }
            "approx" | "hull" => {
                let of = self.required(&m.of, at, "of")?;
                let part = self.required(&m.part, at, "part")?;
                let t = self.approximation(of.get_ref(), Some(of.span().start), m.codim)?;
                self.same_ring(&ring, t.m.ring(), at)?;
                let pat = part.span().start;
                match (kind, part.get_ref().as_str()) {
                    ("approx", "N") => Ok(t.n.clone()),
                    ("approx", "L") => Ok(t.l.clone()),
                    ("approx", "M") => Ok(t.m.clone()),
                    ("approx", p) => Err(self.src.located(pat, format!("unknown part `{p}`: expected N, L or M"))),
                    (_, p @ ("L'" | "M'")) => {
                        let h = fid_hull(&t).map_err(fail)?;
                        Ok(if p == "L'" { h.l_prime } else { h.m_prime })
                    }
                    (_, p) => Err(self.src.located(pat, format!("unknown part `{p}`: expected L' or M'"))),
                }
            }
            "syzygy" => {
                let of = self.required(&m.of, at, "of")?;
                let n = self.module_ref(of)?;
                self.same_ring(&ring, n.ring(), at)?;
                let i = m.index.unwrap_or(1);
                let res = resolve(&n, i.max(1)).map_err(fail)?;
                res.syzygy_module(i).map_err(fail)
            }
            "canonical" => canonical_module(&ring).map_err(fail),
            "fundamental" => Ok(fundamental_module(&ring, self.exec).map_err(fail)?.module),
            _ => unreachable!(),
        }
    }

    fn required<'a>(&self, v: &'a Option<S>, at: usize, key: &str) -> anyhow::Result<&'a S> {
        v.as_ref()
            .ok_or_else(|| self.src.located(at, format!("missing `{key}`")))
    }

    fn same_ring(&self, declared: &GradedRing<F>, actual: &GradedRing<F>, at: usize) -> anyhow::Result<()> {
        if declared.same_as(actual) {
            Ok(())
        } else {
            Err(self.src.located(
                at,
                format!(
                    "module lives over {}, not the declared {}",
                    actual.describe(),
                    declared.describe()
                ),
            ))
        }
    }

    /// Splits `"p1, p2"` into polynomials, locating errors per component.
    fn components(&self, ring: &PolyRing<F>, s: &S) -> anyhow::Result<Vec<Poly<F>>> {
        let mut out = Vec::new();
        let mut offset = s.span().start + 1;
        for part in s.get_ref().split(',') {
            out.push(self.poly_at(ring, part, offset)?);
            offset += part.len() + 1;
        }
        Ok(out)
    }

    /// The minimal MCM approximation of a module; c defaults to its codimension.
    pub fn approximation(
        &self,
        name: &str,
        at: Option<usize>,
        codim: Option<i32>,
    ) -> anyhow::Result<Arc<ApproxTriple<F>>> {
        let key = format!("{name}/{codim:?}");
        if let Some(t) = self.approx.borrow().get(&key) {
            return Ok(t.clone());
        }
        let n = self.module_at(name, at)?;
        let c = codim.unwrap_or_else(|| n.ring().krull_dim() - n.krull_dim());
        let t = Arc::new(mcm_approx_cm(&n, c, self.exec)?);
        self.approx.borrow_mut().insert(key, t.clone());
        Ok(t)
    }

    /// Parses polynomials given on the command line in a ring.
    pub fn parse_polys(&self, ring: &GradedRing<F>, texts: &[String]) -> anyhow::Result<Vec<Poly<F>>> {
        texts
            .iter()
            .map(|t| {
                let p = parse_poly(ring.poly(), t).with_context(|| format!("in `{t}`"))?;
                if !p.is_homogeneous() {
                    return Err(anyhow!("`{t}` is not homogeneous"));
                }
                Ok(p)
            })
            .collect()
    }
}

fn is_derived(m: &RawModule) -> bool {
    matches!(
        m.kind.as_ref().map(|k| k.get_ref().as_str()),
        Some("approx" | "hull" | "syzygy" | "canonical" | "fundamental")
    )
}

/// `(i, j)` from a message of the form `... at entry (i, j) ...`.
fn entry_of(m: &str) -> Option<(usize, usize)> {
    let rest = &m[m.find("entry (")? + 7..];
    let inner = &rest[..rest.find(')')?];
    let (i, j) = inner.split_once(',')?;
    Some((i.trim().parse().ok()?, j.trim().parse().ok()?))
}

struct Guard<'a> {
    set: &'a RefCell<BTreeSet<String>>,
    key: String,
}

impl Drop for Guard<'_> {
    fn drop(&mut self) {
        self.set.borrow_mut().remove(&self.key);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use cmapx_core::field::PrimeField;

    fn doc(text: &str) -> anyhow::Result<Document<PrimeField>> {
        let src = Source::parse(Path::new("t.ring"), text.to_string())?;
        let d = Document::new(src, PrimeField::default(), MonomialOrder::Grevlex, Exec::Sequential);
        d.validate()?;
        Ok(d)
    }

    fn located(text: &str) -> Located {
        match doc(text) {
            Ok(_) => panic!("expected an error"),
            Err(e) => e.downcast::<Located>().expect("a located error"),
        }
    }

    #[test]
    fn line_and_column() {
        assert_eq!(line_col("ab\ncd", 0), (1, 1));
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
    }

    #[test]
    fn unknown_variable_points_at_token() {
        let e = located("[ring.A]\nvars = [\"z0\", \"z1\", \"z2\"]\nrelations = [\"z1^2 - z0*z3\"]\n");
        assert_eq!((e.line, e.col), (3, 25));
        assert!(e.msg.contains("z3"), "{e}");
    }

    #[test]
    fn syntax_errors_are_located() {
        let e = located("[ring.A]\nvars = [\"x\"\n");
        assert_eq!(e.line, 2);
    }

    #[test]
    fn unresolved_reference() {
        let e = located("[module.k]\nring = \"A\"\nkind = \"residue\"\n");
        assert_eq!((e.line, e.col), (2, 8));
        assert!(e.msg.contains("unknown ring `A`"));
    }

    #[test]
    fn inhomogeneous_relation() {
        let e = located("[ring.A]\nvars = [\"x\", \"y\"]\nrelations = [\"x^2 - y\"]\n");
        assert!(e.msg.contains("not homogeneous"));
    }

    #[test]
    fn cycles_are_reported() {
        let e = located("[ring.A]\nbase = \"B\"\n[ring.B]\nbase = \"A\"\n");
        assert!(e.msg.contains("circular"), "{e}");
    }

    #[test]
    fn mf_failure_names_the_entry() {
        let e = located(
            "[ring.Q]\nvars = [\"x\", \"y\"]\n[mf.X]\nring = \"Q\"\nf = \"x*y\"\nphi = [[\"x\"]]\npsi = [[\"x\"]]\n",
        );
        assert!(e.msg.contains("entry (0, 0)"), "{e}");
        assert_eq!(e.line, 6);
    }

    #[test]
    fn modules_and_quotients() {
        let d = doc("[ring.A]\nvars = [\"x\", \"y\"]\nrelations = [\"x*y\"]\n[ring.B]\nbase = \"A\"\nrelations = [\"y\"]\n[module.N]\nring = \"A\"\nrelations = [\"x, y\", \"0, x\"]\n[module.I]\nring = \"A\"\ngenerators = [\"x\"]\n[module.k]\nring = \"B\"\nkind = \"residue\"\n")
            .unwrap();
        assert_eq!(d.module("N").unwrap().rank(), 2);
        assert_eq!(d.module("I").unwrap().mu(), 1);
        assert_eq!(d.ring("B").unwrap().krull_dim(), 1);
        let e = located("[ring.A]\nvars = [\"x\", \"y\"]\n[module.N]\nring = \"A\"\nrelations = [\"x, y\", \"x\"]\n");
        assert!(e.msg.contains("components"), "{e}");
    }

    #[test]
    fn families_live_over_the_tensor_ring() {
        let d = doc("[ring.A]\nvars = [\"x\"]\n[artin.R1]\nvars = [\"s\"]\nrelations = [\"s^3\"]\n[small-extension.q]\nartin = \"R1\"\nkernel = [\"s^2\"]\n[module.N]\nring = \"A\"\nover = \"q\"\nrelations = [\"x - s\"]\n")
            .unwrap();
        let n = d.module("N").unwrap();
        assert_eq!(n.ring().nvars(), 2);
        assert!(n.ring().same_as(d.induced("A", "q").unwrap().small()));
    }
}
