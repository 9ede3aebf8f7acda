//! Brute-force liftings on a fixed k-basis, independent of resolutions and Ext.
//!
//! A lifting N′ of N along B′ → B has N′ ≅ W ⊕ U as graded vector spaces with
//! W = N ⊗ J = J·N′ and U = N. Each variable acts by [[A_v, C_v], [0, D_v]]
//! with A, D fixed; the off-diagonal blocks C solve a linear system:
//! commuting actions, the relations of B′, and j_l acting as u ↦ u ⊗ j_l.
//! Isomorphisms of liftings are [[1, H], [0, 1]] and move C_v by A_v H − H D_v.

use std::collections::BTreeMap;

use super::{Lifting, LiftingContext, LiftingProblem};
use crate::error::{limit, precondition, validation, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::homalg::tensor_product;
use crate::linalg::DenseMat;
use crate::module::{hom_basis, Module};
use crate::mono::Mono;
use crate::poly::Poly;
use crate::vector::{Term, Vector};

/// Default bound on dim_k N′ for the exhaustive search.
pub const BRUTE_FORCE_CAP: usize = 8;

/// A finite-length module as matrices of the variable actions on its
/// standard-monomial basis (degrees increasing).
#[derive(Clone, Debug)]
pub struct FiniteRep<F: Field> {
    pub degrees: Vec<i32>,
    /// action[v].rows[r][c]: coefficient of basis r in x_v · basis c.
    pub action: Vec<DenseMat<F>>,
    offsets: BTreeMap<i32, usize>,
}

impl<F: Field> FiniteRep<F> {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }
}

fn basis_vector<F: Field>(m: &Module<F>, mono: &Mono, comp: u32) -> Vector<F> {
    m.ctx().from_terms(vec![Term {
        mono: mono.clone(),
        comp,
        coef: m.ring().field().one(),
    }])
}

/// Coordinates of a homogeneous element in the global basis of `rep`.
fn global_coords<F: Field>(m: &Module<F>, rep: &FiniteRep<F>, v: &Vector<F>, d: i32) -> Vec<F::Elem> {
    let f = m.ring().field();
    let mut out = vec![f.zero(); rep.dim()];
    if let Some(&off) = rep.offsets.get(&d) {
        for (k, c) in m.coords(v, d).into_iter().enumerate() {
            out[off + k] = c;
        }
    }
    out
}

pub fn finite_rep<F: Field>(m: &Module<F>) -> Result<FiniteRep<F>> {
    let support = m
        .hilbert_series()
        .support()
        .ok_or_else(|| precondition("the brute-force search needs modules of finite length"))?;
    let f = m.ring().field().clone();
    let weights = m.ring().weights().to_vec();
    let mut degrees = Vec::new();
    let mut offsets = BTreeMap::new();
    for &d in &support {
        offsets.insert(d, degrees.len());
        degrees.extend(std::iter::repeat_n(d, m.basis(d).len()));
    }
    let mut rep = FiniteRep {
        degrees,
        action: Vec::new(),
        offsets,
    };
    let n = rep.dim();
    for v in 0..weights.len() {
        let xv = Mono::var(v, &weights);
        let mut mat = DenseMat::zeros(&f, n, n);
        for &d in &support {
            let off = rep.offsets[&d];
            for (k, (mono, comp)) in m.basis(d).elems.iter().enumerate() {
                let img = m.reduce(&basis_vector(m, &mono.mul(&xv), *comp));
                let col = global_coords(m, &rep, &img, d + weights[v]);
                for (r, c) in col.into_iter().enumerate() {
                    mat.rows[r][off + k] = c;
                }
            }
        }
        rep.action.push(mat);
    }
    Ok(rep)
}

/// Outcome of the exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BruteForceReport {
    /// dim_k N′ = dim_k N + dim_k N ⊗ J.
    pub total_dim: usize,
    pub unknowns: usize,
    pub equations: usize,
    pub exists: bool,
    /// Dimension of the affine space of structures (0 when none exist).
    pub solution_dim: usize,
    pub gauge_rank: usize,
    /// Dimension of the set of liftings up to equivalence.
    pub moduli_dim: usize,
}

/// One block equation Σ coef · P · C_v · Q = rhs.
struct Block<F: Field> {
    terms: Vec<(F::Elem, DenseMat<F>, usize, DenseMat<F>)>,
    rhs: Option<DenseMat<F>>,
}

/// The 12-block of a monomial evaluated on [[A, C], [0, D]], linear in C.
fn monomial_terms<F: Field>(
    f: &F,
    coef: &F::Elem,
    mono: &Mono,
    a: &[DenseMat<F>],
    d: &[DenseMat<F>],
) -> Vec<(F::Elem, DenseMat<F>, usize, DenseMat<F>)> {
    let seq: Vec<usize> = mono
        .exps()
        .iter()
        .enumerate()
        .flat_map(|(v, &e)| std::iter::repeat_n(v, e as usize))
        .collect();
    let nw = a.first().map_or(0, |m| m.nrows());
    let nu = d.first().map_or(0, |m| m.nrows());
    let mut out = Vec::new();
    for p in 0..seq.len() {
        let mut pre = DenseMat::identity(f, nw);
        for &v in &seq[..p] {
            pre = pre.mul(f, &a[v]);
        }
        let mut suf = DenseMat::identity(f, nu);
        for &v in &seq[p + 1..] {
            suf = suf.mul(f, &d[v]);
        }
        out.push((coef.clone(), pre, seq[p], suf));
    }
    out
}

fn poly_terms<F: Field>(
    f: &F,
    g: &Poly<F>,
    a: &[DenseMat<F>],
    d: &[DenseMat<F>],
) -> Vec<(F::Elem, DenseMat<F>, usize, DenseMat<F>)> {
    g.terms()
        .iter()
        .flat_map(|(m, c)| monomial_terms(f, c, m, a, d))
        .collect()
}

/// Enumerates liftings of N along q on a fixed basis; errors past `cap`.
pub fn brute_force_liftings<F: Field>(
    q: &LiftingProblem<F>,
    n: &Module<F>,
    cap: usize,
    exec: Exec,
) -> Result<BruteForceReport> {
    if !n.ring().same_as(q.small()) {
        return Err(validation("N must be a module over B = B′/J"));
    }
    let f = n.ring().field().clone();
    let x = tensor_product(n, q.j_module())?;
    let u = finite_rep(n)?;
    let w = finite_rep(&x)?;
    let (nu, nw) = (u.dim(), w.dim());
    if nu + nw > cap {
        return Err(limit(format!(
            "brute-force search capped at total dimension {cap}; this lifting has {}",
            nu + nw
        )));
    }
    let weights = n.ring().weights().to_vec();
    let nv = weights.len();
    // unknown (v, r, c) for C_v: U_c → W_r of degree w_v
    let mut index = vec![vec![None; nw * nu]; nv];
    let mut unknowns = 0;
    for (v, row) in index.iter_mut().enumerate() {
        for r in 0..nw {
            for c in 0..nu {
                if w.degrees[r] == u.degrees[c] + weights[v] {
                    row[r * nu + c] = Some(unknowns);
                    unknowns += 1;
                }
            }
        }
    }
    let (a, d) = (&w.action, &u.action);
    let id_w = DenseMat::identity(&f, nw);
    let id_u = DenseMat::identity(&f, nu);
    let one = f.one();
    let minus = f.neg(&one);
    let mut blocks: Vec<Block<F>> = Vec::new();
    for v in 0..nv {
        for v2 in v + 1..nv {
            blocks.push(Block {
                terms: vec![
                    (one.clone(), a[v].clone(), v2, id_u.clone()),
                    (one.clone(), id_w.clone(), v, d[v2].clone()),
                    (minus.clone(), a[v2].clone(), v, id_u.clone()),
                    (minus.clone(), id_w.clone(), v2, d[v].clone()),
                ],
                rhs: None,
            });
        }
    }
    for g in q.big().ideal() {
        blocks.push(Block {
            terms: poly_terms(&f, g, a, d),
            rhs: None,
        });
    }
    let s = q.j().len();
    for (l, g) in q.j().iter().enumerate() {
        // T_l: u ↦ u ⊗ j_l
        let dj = q.j_module().degs()[l];
        let mut t = DenseMat::zeros(&f, nw, nu);
        for (&deg, &off) in &u.offsets {
            for (k, (mono, comp)) in n.basis(deg).elems.iter().enumerate() {
                let img = x.reduce(&basis_vector(&x, mono, comp * s as u32 + l as u32));
                let col = global_coords(&x, &w, &img, deg + dj);
                for (r, c) in col.into_iter().enumerate() {
                    t.rows[r][off + k] = c;
                }
            }
        }
        blocks.push(Block {
            terms: poly_terms(&f, g, a, d),
            rhs: Some(t),
        });
    }
    let rows: Vec<Vec<(Vec<F::Elem>, F::Elem)>> = exec.map(&blocks, |b| {
        let mut out = Vec::with_capacity(nw * nu);
        for r0 in 0..nw {
            for c0 in 0..nu {
                let mut row = vec![f.zero(); unknowns];
                for (coef, p, v, qm) in &b.terms {
                    for r in 0..nw {
                        if f.is_zero(&p.rows[r0][r]) {
                            continue;
                        }
                        for c in 0..nu {
                            if let Some(k) = index[*v][r * nu + c] {
                                let t = f.mul(&f.mul(coef, &p.rows[r0][r]), &qm.rows[c][c0]);
                                row[k] = f.add(&row[k], &t);
                            }
                        }
                    }
                }
                let rhs = b.rhs.as_ref().map_or(f.zero(), |t| t.rows[r0][c0].clone());
                out.push((row, rhs));
            }
        }
        out
    });
    let (mat_rows, rhs): (Vec<Vec<F::Elem>>, Vec<F::Elem>) = rows.into_iter().flatten().unzip();
    let equations = mat_rows.len();
    let mat = DenseMat::from_rows(mat_rows, unknowns);
    let exists = if unknowns == 0 {
        rhs.iter().all(|c| f.is_zero(c))
    } else {
        mat.solve(&f, &rhs, exec).is_some()
    };
    let rank = if unknowns == 0 { 0 } else { mat.rank(&f, exec) };
    // gauge H: U_c → W_r of degree 0
    let mut gauge_cols = Vec::new();
    for r in 0..nw {
        for c in 0..nu {
            if w.degrees[r] != u.degrees[c] {
                continue;
            }
            let mut col = vec![f.zero(); unknowns];
            for v in 0..nv {
                for r2 in 0..nw {
                    for c2 in 0..nu {
                        // (A_v E_rc − E_rc D_v)[r2][c2]
                        let mut val = f.zero();
                        if c2 == c {
                            val = f.add(&val, &a[v].rows[r2][r]);
                        }
                        if r2 == r {
                            val = f.sub(&val, &d[v].rows[c][c2]);
                        }
                        if !f.is_zero(&val) {
                            let k = index[v][r2 * nu + c2].expect("gauge moves respect degrees");
                            col[k] = val;
                        }
                    }
                }
            }
            gauge_cols.push(col);
        }
    }
    let gauge_rank = if gauge_cols.is_empty() || unknowns == 0 {
        0
    } else {
        DenseMat::from_cols(&f, &gauge_cols, unknowns).rank(&f, exec)
    };
    let solution_dim = if exists { unknowns - rank } else { 0 };
    Ok(BruteForceReport {
        total_dim: nu + nw,
        unknowns,
        equations,
        exists,
        solution_dim,
        gauge_rank,
        moduli_dim: if exists { solution_dim - gauge_rank } else { 0 },
    })
}

/// Whether two liftings are isomorphic by a map reducing to the identity on
/// N, searched in Hom_{B′}(N′₁, N′₂)₀ by linear algebra.
pub fn liftings_isomorphic<F: Field>(
    ctx: &LiftingContext<F>,
    l1: &Lifting<F>,
    l2: &Lifting<F>,
    exec: Exec,
) -> Result<bool> {
    let small = ctx.problem().small().clone();
    let n = ctx.n();
    let f = small.field().clone();
    let basis = hom_basis(&l1.module, &l2.module, 0, exec);
    let mut target = Vec::new();
    let mut cols: Vec<Vec<F::Elem>> = vec![Vec::new(); basis.len()];
    for (i, &deg) in n.degs().iter().enumerate() {
        target.extend(n.coords(&n.gen(i), deg));
        for (k, phi) in basis.iter().enumerate() {
            let img = n.reduce(&small.reduce_vec(&phi.images()[i]));
            cols[k].extend(n.coords(&img, deg));
        }
    }
    if basis.is_empty() {
        return Ok(target.iter().all(|c| f.is_zero(c)));
    }
    let mat = DenseMat::from_cols(&f, &cols, target.len());
    Ok(mat.solve(&f, &target, exec).is_some())
}
