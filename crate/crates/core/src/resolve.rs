//! Minimal graded free resolutions, Betti tables and depth.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{precondition, validation, Result};
use crate::field::Field;
use crate::hilbert::HilbertSeries;
use crate::matrix::Matrix;
use crate::module::{ModMap, Module, Pruned};
use crate::poly::Poly;
use crate::ring::GradedRing;
use crate::syz::syzygies_into;
use crate::vector::Vector;

/// Number of syzygy steps computed when none is requested.
pub const DEFAULT_STEPS: usize = 6;

/// A graded complex of free modules F_0 ← F_1 ← … ; `maps[k]` is
/// d_{k+1}: F_{k+1} → F_k.
#[derive(Clone, Debug)]
pub struct Complex<F: Field> {
    pub ring: Arc<GradedRing<F>>,
    pub degs: Vec<Vec<i32>>,
    pub maps: Vec<Matrix<F>>,
}

impl<F: Field> Complex<F> {
    pub fn new(ring: Arc<GradedRing<F>>, degs: Vec<Vec<i32>>, maps: Vec<Matrix<F>>) -> Self {
        debug_assert_eq!(degs.len(), maps.len() + 1);
        Complex { ring, degs, maps }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// d_k : F_k → F_{k−1}, for 1 ≤ k ≤ len.
    pub fn d(&self, k: usize) -> &Matrix<F> {
        &self.maps[k - 1]
    }

    /// F_k, zero past the end.
    pub fn free(&self, k: usize) -> Module<F> {
        Module::free(self.ring.clone(), self.degs.get(k).cloned().unwrap_or_default())
    }

    /// coker d_k on F_{k−1}, with coker d_0 meaning F_{−1} = 0.
    pub fn coker(&self, k: usize) -> Result<Module<F>> {
        Module::coker(self.ring.clone(), self.d(k))
    }

    /// d_k ∘ d_{k+1} = 0 for all k.
    pub fn is_complex(&self) -> bool {
        self.maps.windows(2).all(|w| w[0].compose(&self.ring, &w[1]).is_zero())
    }

    /// HS(H_k) for 1 ≤ k < len, from
    /// HS(H_k) = HS(coker d_{k+1}) + HS(coker d_k) − HS(F_{k−1}).
    pub fn homology_series(&self, k: usize) -> Result<HilbertSeries> {
        let a = self.coker(k + 1)?;
        let b = self.coker(k)?;
        let f = self.free(k - 1);
        Ok(a.hilbert_series().add(b.hilbert_series()).sub(f.hilbert_series()))
    }

    /// Certifies d² = 0 and H_k = 0 for 1 ≤ k < len.
    pub fn is_exact(&self) -> Result<bool> {
        if !self.is_complex() {
            return Ok(false);
        }
        for k in 1..self.len() {
            if !self.homology_series(k)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// No unit entries in any differential.
    pub fn is_minimal(&self) -> bool {
        self.maps.iter().all(|m| !m.has_unit_entry())
    }

    /// Cancels unit entries until the complex is minimal; the result is
    /// homotopy equivalent with the same H_0.
    pub fn minimalize(&self) -> Complex<F> {
        let ring = self.ring.clone();
        let poly = ring.poly().clone();
        let f = ring.field().clone();
        let mut degs = self.degs.clone();
        let mut ents: Vec<Vec<Vec<crate::poly::Poly<F>>>> = self.maps.iter().map(|m| m.entries(&poly)).collect();
        loop {
            let mut hit = None;
            'search: for (k, e) in ents.iter().enumerate() {
                for (i, row) in e.iter().enumerate() {
                    for (j, p) in row.iter().enumerate() {
                        if let Some(c) = p.as_constant() {
                            if !f.is_zero(c) {
                                hit = Some((k, i, j, c.clone()));
                                break 'search;
                            }
                        }
                    }
                }
            }
            let Some((k, i, j, u)) = hit else { break };
            // maps[k]: F_{k+1} → F_k, entry (i, j) is the unit
            let uinv = f.inv(&u);
            let old = ents[k].clone();
            let nrows = old.len();
            let ncols = old[0].len();
            let mut next = Vec::new();
            for a in (0..nrows).filter(|&a| a != i) {
                let mut row = Vec::new();
                for b in (0..ncols).filter(|&b| b != j) {
                    let t = poly.scale(&ring.mul(&old[a][j], &old[i][b]), &uinv);
                    row.push(ring.reduce(&poly.sub(&old[a][b], &t)));
                }
                next.push(row);
            }
            ents[k] = next;
            // maps[k+1]: F_{k+2} → F_{k+1} loses row j
            if k + 1 < ents.len() {
                ents[k + 1].remove(j);
            }
            // maps[k-1]: F_k → F_{k-1} loses column i
            if k > 0 {
                for row in ents[k - 1].iter_mut() {
                    row.remove(i);
                }
            }
            degs[k].remove(i);
            degs[k + 1].remove(j);
        }
        let maps = ents
            .iter()
            .enumerate()
            .map(|(k, e)| {
                Matrix::from_entries(&poly, degs[k].clone(), degs[k + 1].clone(), e)
                    .expect("cancellation preserves degrees")
            })
            .collect();
        Complex::new(ring, degs, maps)
    }

    /// β_{i,j}: rank of the degree-j part of F_i's generators.
    pub fn betti(&self) -> BettiTable {
        BettiTable::from_degs(&self.degs)
    }
}

/// Graded Betti numbers, indexed by homological index and internal degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    pub entries: Vec<BTreeMap<i32, usize>>,
}

impl BettiTable {
    pub fn from_degs(degs: &[Vec<i32>]) -> Self {
        let entries = degs
            .iter()
            .map(|d| {
                let mut m = BTreeMap::new();
                for &x in d {
                    *m.entry(x).or_insert(0) += 1;
                }
                m
            })
            .collect();
        BettiTable { entries }
    }

    pub fn totals(&self) -> Vec<usize> {
        self.entries.iter().map(|m| m.values().sum()).collect()
    }

    pub fn get(&self, i: usize, j: i32) -> usize {
        self.entries.get(i).and_then(|m| m.get(&j)).copied().unwrap_or(0)
    }

    /// Macaulay layout: row r, column i holds β_{i, i+r}.
    pub fn grid(&self) -> (i32, Vec<Vec<usize>>) {
        let rows: Vec<i32> = self
            .entries
            .iter()
            .enumerate()
            .flat_map(|(i, m)| m.keys().map(move |&j| j - i as i32))
            .collect();
        let (Some(&lo), Some(&hi)) = (rows.iter().min(), rows.iter().max()) else {
            return (0, vec![]);
        };
        let grid = (lo..=hi)
            .map(|r| (0..self.entries.len()).map(|i| self.get(i, i as i32 + r)).collect())
            .collect();
        (lo, grid)
    }

    pub fn render(&self) -> String {
        let (lo, grid) = self.grid();
        let n = self.entries.len();
        let mut out = String::from("       ");
        for i in 0..n {
            out.push_str(&format!("{i:>6}"));
        }
        out.push_str("\ntotal:");
        for t in self.totals() {
            out.push_str(&format!("{t:>6}"));
        }
        for (r, row) in grid.iter().enumerate() {
            out.push_str(&format!("\n{:>5}:", lo + r as i32));
            for &b in row {
                if b == 0 {
                    out.push_str("     .");
                } else {
                    out.push_str(&format!("{b:>6}"));
                }
            }
        }
        out
    }
}

/// A minimal free resolution of a module, possibly truncated.
#[derive(Clone, Debug)]
pub struct Resolution<F: Field> {
    pub module: Module<F>,
    /// Minimal presentation of `module`; F_0 is its free module.
    pub pruned: Pruned<F>,
    pub complex: Complex<F>,
    /// True when the resolution ended (some syzygy module vanished).
    pub complete: bool,
}

impl<F: Field> Resolution<F> {
    pub fn ring(&self) -> &Arc<GradedRing<F>> {
        &self.complex.ring
    }

    /// Generator degrees of F_k (empty beyond the computed range).
    pub fn degs(&self, k: usize) -> &[i32] {
        self.complex.degs.get(k).map_or(&[], |d| d.as_slice())
    }

    pub fn d(&self, k: usize) -> &Matrix<F> {
        self.complex.d(k)
    }

    /// Number of differentials computed.
    pub fn len(&self) -> usize {
        self.complex.len()
    }

    pub fn is_empty(&self) -> bool {
        self.complex.is_empty()
    }

    /// Projective dimension when the resolution is complete.
    pub fn pd(&self) -> Option<usize> {
        if !self.complete {
            return None;
        }
        let last = self.complex.degs.iter().rposition(|d| !d.is_empty());
        Some(last.unwrap_or(0))
    }

    pub fn betti(&self) -> BettiTable {
        self.complex.betti()
    }

    /// Ω^i M = coker d_{i+1} on F_i (i = 0 gives the pruned module).
    pub fn syzygy_module(&self, i: usize) -> Result<Module<F>> {
        if i == 0 {
            return Ok(self.pruned.module.clone());
        }
        if i >= self.complex.degs.len() {
            return Err(precondition(format!("syzygy {i} is beyond the computed range")));
        }
        if i < self.len() {
            self.complex.coker(i + 1)
        } else {
            Ok(self.complex.free(i))
        }
    }

    /// Certificate: d² = 0, H_k = 0 in the computed range and H_0 ≅ M.
    pub fn verify(&self) -> Result<bool> {
        if !self.complex.is_exact()? {
            return Ok(false);
        }
        let h0 = if self.is_empty() {
            self.complex.free(0)
        } else {
            self.complex.coker(1)?
        };
        Ok(h0.hilbert_series() == self.module.hilbert_series())
    }
}

/// Resolves `m` over its own ring for up to `steps` differentials.
pub fn resolve<F: Field>(m: &Module<F>, steps: usize) -> Result<Resolution<F>> {
    if steps < 1 {
        return Err(validation("a resolution needs at least one step"));
    }
    let pruned = m.prune();
    let ring = m.ring().clone();
    let poly = ring.poly().clone();
    let p = &pruned.module;
    let mut degs = vec![p.degs().to_vec()];
    let mut maps: Vec<Matrix<F>> = Vec::new();
    let mut complete = false;
    if steps > 0 {
        let d1 = p.presentation();
        let empty = d1.ncols() == 0;
        degs.push(d1.cols().to_vec());
        maps.push(d1);
        if empty {
            complete = true;
        }
    } else if p.rels().is_empty() {
        complete = true;
    }
    while !complete && maps.len() < steps {
        let last = maps.last().unwrap();
        let target = Module::free(ring.clone(), last.rows().to_vec());
        let syz = syzygies_into(&target, last.columns(), last.cols())?;
        let source = syz_degrees(&poly, last.cols(), &syz);
        let d = Matrix::new(&poly, last.cols().to_vec(), source.clone(), syz)?;
        if source.is_empty() {
            complete = true;
        }
        degs.push(source);
        maps.push(d);
    }
    // trailing zero module
    while degs.len() > 1 && degs.last().unwrap().is_empty() && complete {
        degs.pop();
        maps.pop();
    }
    Ok(Resolution {
        module: m.clone(),
        pruned,
        complex: Complex::new(ring, degs, maps),
        complete,
    })
}

fn syz_degrees<F: Field>(poly: &crate::poly::PolyRing<F>, degs: &[i32], vecs: &[Vector<F>]) -> Vec<i32> {
    let ctx = crate::vector::FreeCtx::new(poly, crate::ring::MODULE_ORDER, degs);
    vecs.iter().map(|v| ctx.degree(v).unwrap()).collect()
}

/// Minimal resolution of `m` viewed as a module over the ambient polynomial ring.
pub fn resolve_ambient<F: Field>(m: &Module<F>) -> Result<Resolution<F>> {
    let over_s = m.over_ambient();
    let n = m.ring().nvars();
    let res = resolve(&over_s, n + 1)?;
    debug_assert!(res.complete);
    Ok(res)
}

/// depth M = n − pd_S M (Auslander–Buchsbaum over the ambient ring).
pub fn depth<F: Field>(m: &Module<F>) -> Result<i32> {
    if m.is_zero() {
        return Err(precondition("depth of the zero module"));
    }
    let res = resolve_ambient(m)?;
    let pd = res.pd().expect("resolutions over S terminate");
    Ok(m.ring().nvars() as i32 - pd as i32)
}

/// Maximal Cohen–Macaulay over its ring: nonzero with depth = dim A.
pub fn is_mcm<F: Field>(m: &Module<F>) -> Result<bool> {
    if m.is_zero() {
        return Ok(false);
    }
    Ok(depth(m)? == m.ring().krull_dim())
}

/// Koszul complex on the variables over the ring.
pub fn koszul<F: Field>(ring: Arc<GradedRing<F>>) -> Complex<F> {
    let vars: Vec<Poly<F>> = (0..ring.nvars()).map(|i| ring.poly().var(i)).collect();
    koszul_complex(ring, &vars).expect("variables are homogeneous")
}

/// Koszul complex K(f) over the ring: F_k = ∧^k of a free module on |f|
/// generators of degrees deg f_i.
pub fn koszul_complex<F: Field>(ring: Arc<GradedRing<F>>, f: &[Poly<F>]) -> Result<Complex<F>> {
    let poly = ring.poly().clone();
    let n = f.len();
    let mut w = Vec::with_capacity(n);
    for p in f {
        if p.is_zero() {
            w.push(0);
            continue;
        }
        w.push(
            p.homogeneous_degree()
                .ok_or_else(|| validation(format!("`{}` is not homogeneous", poly.render(p))))?,
        );
    }
    let subsets: Vec<Vec<Vec<usize>>> = (0..=n).map(|k| k_subsets(n, k)).collect();
    let deg = |s: &Vec<usize>| s.iter().map(|&i| w[i]).sum::<i32>();
    let degs: Vec<Vec<i32>> = subsets.iter().map(|l| l.iter().map(deg).collect()).collect();
    let mut maps = Vec::new();
    for k in 1..=n {
        let rows = &subsets[k - 1];
        let cols = &subsets[k];
        let mut ents = vec![vec![poly.zero(); cols.len()]; rows.len()];
        for (j, s) in cols.iter().enumerate() {
            for (pos, &v) in s.iter().enumerate() {
                let mut t = s.clone();
                t.remove(pos);
                let i = rows.iter().position(|r| *r == t).unwrap();
                let x = ring.reduce(&f[v]);
                ents[i][j] = if pos % 2 == 0 { x } else { poly.neg(&x) };
            }
        }
        let m = Matrix::from_entries(&poly, degs[k - 1].clone(), degs[k].clone(), &ents)?;
        maps.push(m);
    }
    Ok(Complex::new(ring, degs, maps))
}

/// Hilbert series of H_k(K(f)) for k = 1..=|f|.
pub fn koszul_homology<F: Field>(ring: &Arc<GradedRing<F>>, f: &[Poly<F>]) -> Result<Vec<HilbertSeries>> {
    let c = koszul_complex(ring.clone(), f)?;
    let n = c.len();
    let mut out = Vec::with_capacity(n);
    for k in 1..n {
        out.push(c.homology_series(k)?);
    }
    if n > 0 {
        // H_n = ker d_n = F_n − (F_{n−1} − coker d_n)
        let top = c
            .free(n)
            .hilbert_series()
            .sub(c.free(n - 1).hilbert_series())
            .add(c.coker(n)?.hilbert_series());
        out.push(top);
    }
    Ok(out)
}

/// The first k ≥ 1 with H_k(K(f)) ≠ 0, or None when f is a regular sequence.
pub fn first_koszul_obstruction<F: Field>(ring: &Arc<GradedRing<F>>, f: &[Poly<F>]) -> Result<Option<usize>> {
    Ok(koszul_homology(ring, f)?
        .iter()
        .position(|h| !h.is_zero())
        .map(|i| i + 1))
}

/// M/JM over A/J, after certifying that J is a regular sequence on A.
pub fn base_change_regular<F: Field>(m: &Module<F>, j: &[Poly<F>]) -> Result<Module<F>> {
    let ring = m.ring();
    if let Some(k) = first_koszul_obstruction(ring, j)? {
        return Err(precondition(format!("J is not a regular sequence: H_{k}(K(J)) ≠ 0")));
    }
    let quotient = ring.quotient(j)?;
    m.base_change(quotient)
}

/// The reduction of a map modulo J, between the reduced modules.
pub fn base_change_map<F: Field>(f: &ModMap<F>, ring: &Arc<GradedRing<F>>) -> Result<ModMap<F>> {
    let s = f.source().base_change(ring.clone())?;
    let t = f.target().base_change(ring.clone())?;
    let images = f.images().iter().map(|v| t.reduce(v)).collect();
    ModMap::new(s, t, images)
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::poly::PolyRing;

    #[test]
    fn residue_field_of_polynomial_ring_is_koszul() {
        let poly = Arc::new(PolyRing::standard(PrimeField::default(), &["x", "y", "z"]));
        let s = GradedRing::polynomial(poly);
        let k = Module::residue_field(s.clone(), 0);
        let res = resolve(&k, 10).unwrap();
        assert!(res.complete);
        assert_eq!(res.betti().totals(), vec![1, 3, 3, 1]);
        assert!(res.verify().unwrap());
        assert_eq!(koszul(s).betti(), res.betti());
    }

    #[test]
    fn residue_field_over_the_cone() {
        let a = GradedRing::veronese(PrimeField::default(), 2).unwrap();
        let k = Module::residue_field(a.clone(), 0);
        let res = resolve(&k, 4).unwrap();
        // Poincaré series (1+t)^2/(1-t)
        assert_eq!(res.betti().totals(), vec![1, 3, 4, 4, 4]);
        assert!(res.verify().unwrap());
        assert!(res.complex.is_minimal());
        assert_eq!(depth(&k).unwrap(), 0);
        assert_eq!(depth(&Module::free(a, vec![0])).unwrap(), 2);
    }

    #[test]
    fn minimalize_cancels_a_trivial_summand() {
        let poly = Arc::new(PolyRing::standard(PrimeField::default(), &["x"]));
        let s = GradedRing::polynomial(poly.clone());
        // S <- S(-1) + S(-1) via [x, 0], then S(-1) -> (0, 1)ᵀ... units cancel
        let d1 = Matrix::from_entries(&poly, vec![0], vec![1, 1], &[vec![poly.var(0), poly.zero()]]).unwrap();
        let d2 = Matrix::from_entries(&poly, vec![1, 1], vec![1], &[vec![poly.zero()], vec![poly.one()]]).unwrap();
        let c = Complex::new(s, vec![vec![0], vec![1, 1], vec![1]], vec![d1, d2]);
        assert!(c.is_exact().unwrap());
        let m = c.minimalize();
        assert_eq!(m.betti().totals(), vec![1, 1, 0]);
    }

    #[test]
    fn koszul_detects_regular_sequences() {
        let a = GradedRing::veronese(PrimeField::default(), 2).unwrap();
        let p = a.poly().clone();
        assert_eq!(first_koszul_obstruction(&a, &[p.var(0), p.var(2)]).unwrap(), None);
        assert_eq!(first_koszul_obstruction(&a, &[p.var(0), p.var(1)]).unwrap(), Some(1));
        let poly = Arc::new(PolyRing::standard(PrimeField::default(), &["x"]));
        let b = GradedRing::new(poly.clone(), vec![poly.pow(&poly.var(0), 2)]).unwrap();
        assert_eq!(first_koszul_obstruction(&b, &[poly.var(0)]).unwrap(), Some(1));
        let err = base_change_regular(&Module::free(b, vec![0]), &[poly.var(0)]).unwrap_err();
        assert!(err.to_string().contains("H_1"));
    }

    #[test]
    fn reduction_mod_a_regular_element() {
        let poly = Arc::new(PolyRing::standard(PrimeField::default(), &["x"]));
        let s = GradedRing::polynomial(poly.clone());
        let b = base_change_regular(&Module::free(s, vec![0]), &[poly.pow(&poly.var(0), 2)]).unwrap();
        assert_eq!(b.length(), Some(2));
    }

    #[test]
    fn zero_steps_is_rejected() {
        let a = GradedRing::veronese(PrimeField::default(), 2).unwrap();
        assert!(resolve(&Module::residue_field(a, 0), 0).is_err());
    }
}
