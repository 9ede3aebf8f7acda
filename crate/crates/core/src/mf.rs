//! Matrix factorizations of hypersurfaces, the Knörrer functor and the
//! Eisenbud periodic resolutions.

use std::collections::VecDeque;
use std::sync::Arc;

use num_rational::Ratio;

use crate::cmapprox::{find_isomorphism, find_surjection, kernel_pruned, mcm_approx_cm, ApproxTriple};
use crate::error::{precondition, validation, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::homalg::{ext_dual, is_short_exact};
use crate::matrix::Matrix;
use crate::module::{Lifter, ModMap, Module};
use crate::poly::{Poly, PolyRing};
use crate::resolve::{is_mcm, resolve_ambient, Complex};
use crate::ring::{adjoin_vars, regrade, GradedRing, MODULE_ORDER};
use crate::vector::{FreeCtx, Term, Vector};

/// A pair (φ, ψ) of square matrices over a polynomial ring Q with
/// φψ = ψφ = f·I. φ maps Q(b) → Q(a), ψ maps Q(a + e) → Q(b), e = deg f.
#[derive(Clone, Debug)]
pub struct MatrixFactorization<F: Field> {
    ring: Arc<GradedRing<F>>,
    f: Poly<F>,
    phi: Matrix<F>,
    psi: Matrix<F>,
}

impl<F: Field> MatrixFactorization<F> {
    pub fn new(ring: Arc<GradedRing<F>>, f: Poly<F>, phi: Matrix<F>, psi: Matrix<F>) -> Result<Self> {
        if !ring.is_polynomial() {
            return Err(validation("a matrix factorization lives over a polynomial ring"));
        }
        let e = match f.homogeneous_degree() {
            Some(e) if e > 0 => e,
            _ => return Err(validation("f must be homogeneous of positive degree")),
        };
        let n = phi.nrows();
        if phi.ncols() != n || psi.nrows() != n || psi.ncols() != n {
            return Err(validation(format!(
                "φ is {}×{} and ψ is {}×{}; both must be square of the same size",
                phi.nrows(),
                phi.ncols(),
                psi.nrows(),
                psi.ncols()
            )));
        }
        if psi.rows() != phi.cols() || psi.cols().iter().zip(phi.rows()).any(|(c, r)| *c != r + e) {
            return Err(validation("degrees of φ and ψ do not fit together"));
        }
        let mf = MatrixFactorization { ring, f, phi, psi };
        mf.check()?;
        Ok(mf)
    }

    /// Builds from entry lists, inferring a consistent grading.
    pub fn from_entries(
        ring: Arc<GradedRing<F>>,
        f: Poly<F>,
        phi: &[Vec<Poly<F>>],
        psi: &[Vec<Poly<F>>],
    ) -> Result<Self> {
        let e = f
            .homogeneous_degree()
            .ok_or_else(|| validation("f must be homogeneous"))?;
        let (a, b) = infer_degrees(ring.poly(), e, phi, psi)?;
        let poly = ring.poly().clone();
        let ae: Vec<i32> = a.iter().map(|d| d + e).collect();
        let phi = Matrix::from_entries(&poly, a, b.clone(), phi)?;
        let psi = Matrix::from_entries(&poly, b, ae, psi)?;
        MatrixFactorization::new(ring, f, phi, psi)
    }

    /// Rechecks φψ = f·I and ψφ = f·I entrywise.
    pub fn check(&self) -> Result<()> {
        let poly = self.ring.poly();
        let e = self.degree();
        let pp = self.phi.compose(&self.ring, &self.psi);
        let qp = self.psi.compose(&self.ring, &self.phi.shifted(e));
        for (name, m) in [("φψ", pp), ("ψφ", qp)] {
            let ents = m.entries(poly);
            for (i, row) in ents.iter().enumerate() {
                for (j, p) in row.iter().enumerate() {
                    let want = if i == j { self.f.clone() } else { poly.zero() };
                    if *p != want {
                        return Err(validation(format!(
                            "{name} ≠ f·I at entry ({i}, {j}): got `{}`, expected `{}`",
                            poly.render(p),
                            poly.render(&want)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &Arc<GradedRing<F>> {
        &self.ring
    }
    pub fn f(&self) -> &Poly<F> {
        &self.f
    }
    pub fn phi(&self) -> &Matrix<F> {
        &self.phi
    }
    pub fn psi(&self) -> &Matrix<F> {
        &self.psi
    }
    pub fn size(&self) -> usize {
        self.phi.nrows()
    }
    pub fn degree(&self) -> i32 {
        self.f.homogeneous_degree().expect("checked in new")
    }

    /// No unit entries in φ or ψ.
    pub fn is_minimal(&self) -> bool {
        !self.phi.has_unit_entry() && !self.psi.has_unit_entry()
    }

    /// The hypersurface ring Q/(f).
    pub fn hypersurface(&self) -> Result<Arc<GradedRing<F>>> {
        GradedRing::new(self.ring.poly().clone(), vec![self.f.clone()])
    }

    /// coker φ over Q/(f).
    pub fn cokernel(&self) -> Result<Module<F>> {
        let b = self.hypersurface()?;
        Module::coker(b.clone(), &self.phi.reduce(&b))
    }

    /// The factorization over a regraded copy of Q with every degree multiplied by `scale`.
    pub fn regraded(&self, scale: i32) -> Result<Self> {
        if scale == 1 {
            return Ok(self.clone());
        }
        let old = self.ring.poly();
        let w: Vec<i32> = old.weights().iter().map(|x| x * scale).collect();
        let poly = regrade(old, w)?;
        let ring = GradedRing::polynomial(poly.clone());
        let positions: Vec<usize> = (0..old.nvars()).collect();
        let f = poly.recast(&self.f);
        let phi = transport_matrix(&self.phi, old, &poly, &positions, scale)?;
        let psi = transport_matrix(&self.psi, old, &poly, &positions, scale)?;
        MatrixFactorization::new(ring, f, phi, psi)
    }

    pub fn render(&self) -> String {
        let poly = self.ring.poly();
        format!(
            "f = {}\nphi = {}\npsi = {}",
            poly.render(&self.f),
            self.phi.render(poly),
            self.psi.render(poly)
        )
    }
}

/// Solves b_j − a_i = deg φ_ij and a_i + e − b_j = deg ψ_ji over the nonzero
/// entries; components without constraints start at degree 0.
fn infer_degrees<F: Field>(
    poly: &PolyRing<F>,
    e: i32,
    phi: &[Vec<Poly<F>>],
    psi: &[Vec<Poly<F>>],
) -> Result<(Vec<i32>, Vec<i32>)> {
    let n = phi.len();
    if phi.iter().any(|r| r.len() != n) || psi.len() != n || psi.iter().any(|r| r.len() != n) {
        return Err(validation("φ and ψ must be square matrices of the same size"));
    }
    // nodes 0..n are rows of φ (a), n..2n are columns of φ (b)
    let mut adj: Vec<Vec<(usize, i32)>> = vec![Vec::new(); 2 * n];
    let deg = |p: &Poly<F>, what: &str, i: usize, j: usize| -> Result<Option<i32>> {
        if p.is_zero() {
            return Ok(None);
        }
        p.homogeneous_degree().map(Some).ok_or_else(|| {
            validation(format!(
                "{what} entry ({i}, {j}) `{}` is not homogeneous",
                poly.render(p)
            ))
        })
    };
    for i in 0..n {
        for j in 0..n {
            if let Some(d) = deg(&phi[i][j], "φ", i, j)? {
                adj[i].push((n + j, d));
                adj[n + j].push((i, -d));
            }
            // ψ_ij: b_i + d = a_j + e
            if let Some(d) = deg(&psi[i][j], "ψ", i, j)? {
                adj[n + i].push((j, d - e));
                adj[j].push((n + i, e - d));
            }
        }
    }
    let mut val: Vec<Option<i32>> = vec![None; 2 * n];
    for start in 0..2 * n {
        if val[start].is_some() {
            continue;
        }
        val[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let du = val[u].unwrap();
            for &(v, w) in &adj[u] {
                match val[v] {
                    None => {
                        val[v] = Some(du + w);
                        queue.push_back(v);
                    }
                    Some(dv) if dv != du + w => {
                        return Err(validation("entries of φ and ψ admit no consistent grading"))
                    }
                    _ => {}
                }
            }
        }
    }
    let vals: Vec<i32> = val.into_iter().map(|v| v.unwrap()).collect();
    let lo = vals[..n].iter().copied().min().unwrap_or(0);
    Ok((
        vals[..n].iter().map(|v| v - lo).collect(),
        vals[n..].iter().map(|v| v - lo).collect(),
    ))
}

fn transport_vector<F: Field>(v: &Vector<F>, target: &PolyRing<F>, positions: &[usize], shifts: &[i32]) -> Vector<F> {
    let ctx = FreeCtx::new(target, MODULE_ORDER, shifts);
    ctx.from_terms(
        v.terms()
            .iter()
            .map(|t| Term {
                mono: t.mono.embed(positions, target.weights()),
                comp: t.comp,
                coef: t.coef.clone(),
            })
            .collect(),
    )
}

fn transport_matrix<F: Field>(
    m: &Matrix<F>,
    _source: &PolyRing<F>,
    target: &PolyRing<F>,
    positions: &[usize],
    scale: i32,
) -> Result<Matrix<F>> {
    let rows: Vec<i32> = m.rows().iter().map(|d| d * scale).collect();
    let cols: Vec<i32> = m.cols().iter().map(|d| d * scale).collect();
    let columns = m
        .columns()
        .iter()
        .map(|c| transport_vector(c, target, positions, &rows))
        .collect();
    Matrix::new(target, rows, cols, columns)
}

/// Q, S = Q[t], A = S/(f + t²) and B = S/(f, t) ≅ Q/(f), all sharing the
/// polynomial ring of S. Q is regraded by 2 when deg f is odd so that
/// deg t = deg F / 2 is an integer.
#[derive(Clone, Debug)]
pub struct KnorrerRings<F: Field> {
    /// The original polynomial ring of f.
    pub base: Arc<PolyRing<F>>,
    /// Q after regrading.
    pub q: Arc<GradedRing<F>>,
    pub s: Arc<GradedRing<F>>,
    pub a: Arc<GradedRing<F>>,
    pub b: Arc<GradedRing<F>>,
    /// f in Q.
    pub f: Poly<F>,
    /// F = f + t² in S.
    pub big_f: Poly<F>,
    /// Index of t in S.
    pub t: usize,
    /// Degree multiplier applied to Q.
    pub scale: i32,
    /// deg t.
    pub h: i32,
}

impl<F: Field> KnorrerRings<F> {
    pub fn new(base: &Arc<PolyRing<F>>, f: &Poly<F>) -> Result<Self> {
        if base.field().characteristic() == 2 {
            return Err(precondition("the Knörrer construction requires Char k ≠ 2"));
        }
        let e = match f.homogeneous_degree() {
            Some(e) if e > 0 => e,
            _ => return Err(validation("f must be homogeneous of positive degree")),
        };
        let scale = if e % 2 == 1 { 2 } else { 1 };
        let qpoly = if scale == 1 {
            base.clone()
        } else {
            regrade(base, base.weights().iter().map(|w| w * scale).collect())?
        };
        let fq = qpoly.recast(f);
        let h = e * scale / 2;
        let mut name = String::from("t");
        while base.var_index(&name).is_some() {
            name.push('_');
        }
        let spoly = adjoin_vars(&qpoly, &[name.as_str()], &[h])?;
        let t = base.nvars();
        let positions: Vec<usize> = (0..t).collect();
        let fs = spoly.embed_from(&fq, &positions);
        let tv = spoly.var(t);
        let big_f = spoly.add(&fs, &spoly.mul(&tv, &tv));
        let s = GradedRing::polynomial(spoly.clone());
        let a = GradedRing::new(spoly.clone(), vec![big_f.clone()])?;
        let b = GradedRing::new(spoly, vec![fs, tv])?;
        Ok(KnorrerRings {
            base: base.clone(),
            q: GradedRing::polynomial(qpoly),
            s,
            a,
            b,
            f: fq,
            big_f,
            t,
            scale,
            h,
        })
    }

    fn positions(&self) -> Vec<usize> {
        (0..self.t).collect()
    }

    /// A polynomial of the original ring, viewed in S.
    pub fn lift_poly(&self, p: &Poly<F>) -> Poly<F> {
        self.s.poly().embed_from(p, &self.positions())
    }

    /// A module over a quotient of the original ring, viewed over `target`
    /// (a quotient of S) with degrees scaled.
    pub fn lift_module(&self, n: &Module<F>, target: &Arc<GradedRing<F>>) -> Result<Module<F>> {
        let degs: Vec<i32> = n.degs().iter().map(|d| d * self.scale).collect();
        let pos = self.positions();
        let rels = n
            .rels()
            .iter()
            .map(|v| transport_vector(v, self.s.poly(), &pos, &degs))
            .collect();
        Module::new(target.clone(), degs, rels)
    }

    /// A module over B viewed over A (t acts as zero).
    pub fn b_to_a(&self, n: &Module<F>) -> Result<Module<F>> {
        let ctx = n.ctx();
        let tv = self.s.poly().var(self.t);
        let mut rels = n.rels().to_vec();
        rels.extend((0..n.rank() as u32).map(|c| ctx.from_poly_at(&tv, c)));
        Module::new(self.a.clone(), n.degs().to_vec(), rels)
    }
}

/// (Φ, Ψ) with Φ = [[φ, t],[−t, ψ]] and Ψ = [[ψ, −t],[t, φ]], a factorization of
/// F = f + t² over Q[t]. Odd-degree f is regraded first.
pub fn knorrer<F: Field>(mf: &MatrixFactorization<F>) -> Result<MatrixFactorization<F>> {
    let rings = KnorrerRings::new(mf.ring().poly(), mf.f())?;
    knorrer_in(&rings, mf)
}

/// The Knörrer factorization inside a prepared ring setting; `mf` lives over
/// the original ring.
pub fn knorrer_in<F: Field>(rings: &KnorrerRings<F>, mf: &MatrixFactorization<F>) -> Result<MatrixFactorization<F>> {
    let sp = rings.s.poly().clone();
    let pos = rings.positions();
    let phi = transport_matrix(mf.phi(), mf.ring().poly(), &sp, &pos, rings.scale)?;
    let psi = transport_matrix(mf.psi(), mf.ring().poly(), &sp, &pos, rings.scale)?;
    let n = mf.size();
    let h = rings.h;
    let e = 2 * h;
    let (a, b) = (phi.rows().to_vec(), phi.cols().to_vec());
    let ph = phi.entries(&sp);
    let ps = psi.entries(&sp);
    let t = sp.var(rings.t);
    let mt = sp.neg(&t);
    let diag = |i: usize, j: usize, p: &Poly<F>| if i == j { p.clone() } else { sp.zero() };
    let block = |tl: &[Vec<Poly<F>>], tr: &Poly<F>, bl: &Poly<F>, br: &[Vec<Poly<F>>]| {
        let mut rows = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut r = tl[i].clone();
            r.extend((0..n).map(|j| diag(i, j, tr)));
            rows.push(r);
        }
        for i in 0..n {
            let mut r: Vec<Poly<F>> = (0..n).map(|j| diag(i, j, bl)).collect();
            r.extend(br[i].iter().cloned());
            rows.push(r);
        }
        rows
    };
    let cat = |x: &[i32], dx: i32, y: &[i32], dy: i32| -> Vec<i32> {
        x.iter().map(|d| d + dx).chain(y.iter().map(|d| d + dy)).collect()
    };
    let big_phi = Matrix::from_entries(&sp, cat(&a, h, &b, 0), cat(&b, h, &a, e), &block(&ph, &t, &mt, &ps))?;
    let big_psi = Matrix::from_entries(&sp, cat(&b, h, &a, e), cat(&a, e + h, &b, e), &block(&ps, &mt, &t, &ph))?;
    MatrixFactorization::new(rings.s.clone(), rings.big_f.clone(), big_phi, big_psi)
}

/// The minimal factorization of an MCM module N over a hypersurface Q/(f):
/// φ is the minimal Q-presentation of N and ψ solves φψ = f·I.
pub fn mf_from_module<F: Field>(n: &Module<F>, exec: Exec) -> Result<MatrixFactorization<F>> {
    let ring = n.ring();
    if ring.ideal().len() != 1 {
        return Err(precondition(format!(
            "{} is not a hypersurface quotient of a polynomial ring",
            ring.describe()
        )));
    }
    if !is_mcm(n)? {
        return Err(precondition("N is not maximal Cohen-Macaulay"));
    }
    let q = ring.ambient();
    let f = ring.ideal()[0].clone();
    let e = f.homogeneous_degree().expect("homogeneous ideal");
    let res = resolve_ambient(n)?;
    if res.pd() != Some(1) {
        return Err(precondition("N does not have projective dimension 1 over Q"));
    }
    let phi = res.d(1).clone();
    if phi.nrows() != phi.ncols() {
        return Err(precondition("the Q-presentation of N is not square"));
    }
    let a = phi.rows().to_vec();
    let source = Module::free(q.clone(), phi.cols().to_vec());
    let target = Module::free(q.clone(), a.clone());
    let map = ModMap::new(source, target.clone(), phi.columns().to_vec())?;
    let lifter = Lifter::new(map, exec);
    let ctx = target.ctx();
    let cols = (0..a.len() as u32)
        .map(|j| lifter.solve(&ctx.from_poly_at(&f, j), "f·e_j in the image of φ"))
        .collect::<Result<Vec<_>>>()?;
    let psi = Matrix::new(q.poly(), phi.cols().to_vec(), a.iter().map(|d| d + e).collect(), cols)?;
    let mf = MatrixFactorization::new(q, f, phi, psi)?;
    // coker φ ≅ N through the generators of the pruned presentation
    let coker = Module::coker(ring.clone(), &mf.phi().reduce(ring))?;
    let images: Vec<Vector<F>> = res.pruned.to_old.clone();
    let iso = ModMap::new(coker, n.clone(), images)?;
    if !iso.is_isomorphism()? {
        return Err(precondition("coker φ is not isomorphic to N"));
    }
    Ok(mf)
}

fn periodic<F: Field>(
    ring: Arc<GradedRing<F>>,
    first: Option<Matrix<F>>,
    even: &Matrix<F>,
    odd: &Matrix<F>,
    e: i32,
    steps: usize,
) -> Result<Complex<F>> {
    if steps < 2 {
        return Err(validation("a periodic resolution needs at least 2 steps"));
    }
    let mut maps: Vec<Matrix<F>> = Vec::new();
    if let Some(m) = first {
        maps.push(m);
    }
    let mut k = 0;
    while maps.len() < steps {
        let m = if k % 2 == 0 { even } else { odd };
        maps.push(m.shifted((k / 2) * e).reduce(&ring));
        k += 1;
    }
    let mut degs = vec![maps[0].rows().to_vec()];
    degs.extend(maps.iter().map(|m| m.cols().to_vec()));
    Ok(Complex::new(ring, degs, maps))
}

/// The 2-periodic resolution … ←φ Q/(f)^n ←ψ … of coker φ over Q/(f).
pub fn periodic_resolution<F: Field>(mf: &MatrixFactorization<F>, steps: usize) -> Result<Complex<F>> {
    let b = mf.hypersurface()?;
    periodic(b, None, mf.phi(), mf.psi(), mf.degree(), steps)
}

/// The Eisenbud resolution over A = Q[t]/(f + t²) of N = coker φ over Q/(f):
/// A^n ← A^{2n} via [t·I | φ], then alternately Φ and Ψ.
pub fn eisenbud_resolution<F: Field>(mf: &MatrixFactorization<F>, steps: usize) -> Result<Complex<F>> {
    let rings = KnorrerRings::new(mf.ring().poly(), mf.f())?;
    eisenbud_in(&rings, mf, steps)
}

pub fn eisenbud_in<F: Field>(rings: &KnorrerRings<F>, mf: &MatrixFactorization<F>, steps: usize) -> Result<Complex<F>> {
    let big = knorrer_in(rings, mf)?;
    let sp = rings.s.poly();
    let n = mf.size();
    let phi = transport_matrix(mf.phi(), mf.ring().poly(), sp, &rings.positions(), rings.scale)?;
    let a = phi.rows().to_vec();
    let tcol = Matrix::from_entries(
        sp,
        a.clone(),
        a.iter().map(|d| d + rings.h).collect(),
        &(0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { sp.var(rings.t) } else { sp.zero() })
                    .collect()
            })
            .collect::<Vec<_>>(),
    )?;
    let d1 = tcol.hconcat(&phi);
    periodic(rings.a.clone(), Some(d1), big.phi(), big.psi(), big.degree(), steps)
}

/// Size, multiplicity of Q/(f) and the rank of coker φ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MfStats {
    pub n: usize,
    pub multiplicity: Ratio<i64>,
    /// e(N)/e(B) when it is an integer and B has positive dimension.
    pub rank: Option<i64>,
    /// Why the rank is not reported.
    pub flag: Option<String>,
}

pub fn mf_stats<F: Field>(mf: &MatrixFactorization<F>) -> Result<MfStats> {
    let b = mf.hypersurface()?;
    let n = mf.size();
    let e = b.hilbert_series().multiplicity();
    if b.krull_dim() == 0 {
        return Ok(MfStats {
            n,
            multiplicity: e,
            rank: None,
            flag: Some("dimension-0 base: rank is not defined".into()),
        });
    }
    let r = mf.cokernel()?.rank_over_ring();
    if !r.is_integer() {
        return Ok(MfStats {
            n,
            multiplicity: e,
            rank: None,
            flag: Some(format!("rank e(N)/e(B) = {r} is not constant")),
        });
    }
    let rank = r.to_integer();
    if e * rank != Ratio::from_integer(n as i64) {
        return Err(precondition(format!(
            "n = {n} differs from e(B)·rank = {}; the factorization is not minimal",
            e * rank
        )));
    }
    Ok(MfStats {
        n,
        multiplicity: e,
        rank: Some(rank),
        flag: None,
    })
}

/// MCM approximation of N over A = Q[t]/(f + t²) through M = G(N^∨)^∨, with
/// G(X) = coker Φ of the Knörrer factorization of X.
#[derive(Clone, Debug)]
pub struct KnorrerApprox<F: Field> {
    pub rings: KnorrerRings<F>,
    /// N over B ⊂ S.
    pub n_b: Module<F>,
    /// N over A.
    pub n_a: Module<F>,
    /// The factorization of N^∨ over the original ring.
    pub dual_mf: MatrixFactorization<F>,
    pub knorrer: MatrixFactorization<F>,
    /// G(N^∨) over A.
    pub g: Module<F>,
    /// 0 → L → M → N → 0 with M = G(N^∨)^∨ (twisted to degree 0 over N).
    pub triple: ApproxTriple<F>,
    /// Twist applied to G(N^∨)^∨.
    pub twist: i32,
    /// The approximation computed by ω-dualising syzygies, for the cross-check.
    pub reference: ApproxTriple<F>,
    /// Certified isomorphism from `triple.m` onto `reference.m`.
    pub iso: ModMap<F>,
    pub free_rank: usize,
}

pub fn knorrer_approx<F: Field>(n: &Module<F>, exec: Exec) -> Result<KnorrerApprox<F>> {
    let bring = n.ring();
    if bring.ideal().len() != 1 {
        return Err(precondition(format!(
            "{} is not a hypersurface quotient of a polynomial ring",
            bring.describe()
        )));
    }
    let rings = KnorrerRings::new(bring.poly(), &bring.ideal()[0])?;
    if !is_mcm(n)? {
        return Err(precondition("N is not maximal Cohen-Macaulay"));
    }
    let n_b = rings.lift_module(n, &rings.b)?;
    let n_a = rings.b_to_a(&n_b)?;

    let dual = ext_dual(n, 0)?;
    let dual_mf = mf_from_module(&dual, exec)?;
    let big = knorrer_in(&rings, &dual_mf)?;
    let g = Module::coker(rings.a.clone(), &big.phi().reduce(&rings.a))?;
    let m0 = ext_dual(&g, 0)?;

    let reference = mcm_approx_cm(&n_a, 1, exec)?;
    let twist = initial_degree(reference.m.hilbert_series()) - initial_degree(m0.hilbert_series());
    let m = m0.shifted(twist).prune().module;
    let iso = find_isomorphism(&m, &reference.m, exec)?;

    let pi = find_surjection(&m, &n_a, exec)?;
    let (l, rho) = kernel_pruned(&pi)?;
    if !l.rels().is_empty() {
        return Err(precondition("the kernel of G(N^∨)^∨ → N is not free"));
    }
    if !is_short_exact(&rho, &pi)? || !is_mcm(&m)? {
        return Err(precondition("the Knörrer approximation failed certification"));
    }
    let free_rank = l.rank();
    let triple = ApproxTriple {
        n: n_a.clone(),
        l,
        m,
        rho,
        pi,
        omega: reference.omega.clone(),
        l_resolution: Vec::new(),
        minimal: true,
    };
    Ok(KnorrerApprox {
        rings,
        n_b,
        n_a,
        dual_mf,
        knorrer: big,
        g,
        triple,
        twist,
        reference,
        iso,
        free_rank,
    })
}

fn initial_degree(hs: &crate::hilbert::HilbertSeries) -> i32 {
    hs.numerator().low()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::homalg::ExtSpace;

    fn qx() -> Arc<GradedRing<PrimeField>> {
        GradedRing::polynomial(Arc::new(PolyRing::standard(PrimeField::default(), &["x"])))
    }

    fn mf_xk(k: u32) -> MatrixFactorization<PrimeField> {
        let q = qx();
        let p = q.poly().clone();
        let x = p.var(0);
        let f = p.pow(&x, k + 1);
        MatrixFactorization::from_entries(q, f, &[vec![x.clone()]], &[vec![p.pow(&x, k)]]).unwrap()
    }

    #[test]
    fn node_knorrer_blocks() {
        let big = knorrer(&mf_xk(1)).unwrap();
        let p = big.ring().poly();
        assert_eq!(big.size(), 2);
        assert_eq!(p.render(big.f()), "x^2 + t^2");
        let e = big.phi().entries(p);
        assert_eq!(p.render(&e[0][1]), "t");
        assert_eq!(p.render(&e[1][0]), "-t");
    }

    #[test]
    fn cusp_is_regraded() {
        let big = knorrer(&mf_xk(2)).unwrap();
        assert_eq!(big.ring().weights(), &[2, 3]);
        assert_eq!(big.degree(), 6);
    }

    #[test]
    fn bad_factorization_names_the_entry() {
        let q = qx();
        let p = q.poly().clone();
        let x = p.var(0);
        let psi = p.scale(&p.pow(&x, 2), &p.field().from_i64(2));
        let err = MatrixFactorization::from_entries(q, p.pow(&x, 3), &[vec![x.clone()]], &[vec![psi]]).unwrap_err();
        assert!(err.to_string().contains("(0, 0)"), "{err}");
    }

    #[test]
    fn eisenbud_node_is_exact_and_periodic() {
        let c = eisenbud_resolution(&mf_xk(1), 6).unwrap();
        assert!(c.is_exact().unwrap());
        let ranks: Vec<usize> = c.degs.iter().map(|d| d.len()).collect();
        assert_eq!(ranks, vec![1, 2, 2, 2, 2, 2, 2]);
    }

    #[test]
    fn factorization_of_residue_field() {
        let q = qx();
        let p = q.poly().clone();
        let b = GradedRing::new(p.clone(), vec![p.pow(&p.var(0), 3)]).unwrap();
        let k = Module::residue_field(b, 0);
        let mf = mf_from_module(&k, Exec::Sequential).unwrap();
        assert_eq!(p.render(&mf.phi().entry(&p, 0, 0)), "x");
        assert_eq!(p.render(&mf.psi().entry(&p, 0, 0)), "x^2");
    }

    #[test]
    fn node_approximation_ext_split() {
        let q = qx();
        let p = q.poly().clone();
        let b = GradedRing::new(p.clone(), vec![p.pow(&p.var(0), 2)]).unwrap();
        let k = Module::residue_field(b, 0);
        let ka = knorrer_approx(&k, Exec::Sequential).unwrap();
        let m = &ka.triple.m;
        let e1 = ExtSpace::compute(1, m, m, Exec::Sequential).unwrap();
        assert_eq!(e1.dim(), Some(2));
    }
}
