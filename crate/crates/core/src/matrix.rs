//! Homogeneous maps between graded free modules, stored by columns.

use crate::error::{validation, Result};
use crate::field::Field;
use crate::poly::{Poly, PolyRing};
use crate::ring::{GradedRing, MODULE_ORDER};
use crate::vector::{FreeCtx, Term, Vector};

/// A degree-0 map F → G: column j is the image of the j-th basis element of F,
/// written in the basis of G. `rows` are the generator degrees of G, `cols`
/// those of F, so entry (i, j) has degree cols[j] − rows[i].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    rows: Vec<i32>,
    cols: Vec<i32>,
    columns: Vec<Vector<F>>,
}

impl<F: Field> Matrix<F> {
    pub fn new(poly: &PolyRing<F>, rows: Vec<i32>, cols: Vec<i32>, columns: Vec<Vector<F>>) -> Result<Self> {
        if columns.len() != cols.len() {
            return Err(validation(format!(
                "{} columns for {} source degrees",
                columns.len(),
                cols.len()
            )));
        }
        let ctx = FreeCtx::new(poly, MODULE_ORDER, &rows);
        for (j, c) in columns.iter().enumerate() {
            if let Some(m) = c.max_comp() {
                if m as usize >= rows.len() {
                    return Err(validation(format!("column {j} has a row index out of range")));
                }
            }
            if let Some(t) = c.terms.iter().find(|t| ctx.term_degree(t) != cols[j]) {
                return Err(validation(format!(
                    "entry ({}, {j}) is not homogeneous of degree {}",
                    t.comp,
                    cols[j] - rows[t.comp as usize]
                )));
            }
        }
        Ok(Matrix { rows, cols, columns })
    }

    /// Builds from row-major entries; entry (i, j) must be homogeneous of degree
    /// cols[j] − rows[i] or zero.
    pub fn from_entries(poly: &PolyRing<F>, rows: Vec<i32>, cols: Vec<i32>, entries: &[Vec<Poly<F>>]) -> Result<Self> {
        if entries.len() != rows.len() || entries.iter().any(|r| r.len() != cols.len()) {
            return Err(validation("matrix entries do not match the given degrees"));
        }
        let ctx = FreeCtx::new(poly, MODULE_ORDER, &rows);
        let columns = (0..cols.len())
            .map(|j| {
                let col: Vec<&Poly<F>> = entries.iter().map(|r| &r[j]).collect();
                ctx.from_polys(&col)
            })
            .collect();
        Matrix::new(poly, rows, cols, columns)
    }

    /// Infers column degrees from the entries (zero columns get degree `zero_deg`).
    pub fn infer(poly: &PolyRing<F>, rows: Vec<i32>, entries: &[Vec<Poly<F>>], zero_deg: i32) -> Result<Self> {
        let ncols = entries.first().map_or(0, |r| r.len());
        let mut cols = vec![zero_deg; ncols];
        for j in 0..ncols {
            if let Some((i, p)) = entries
                .iter()
                .enumerate()
                .find(|(_, r)| !r[j].is_zero())
                .map(|(i, r)| (i, &r[j]))
            {
                let d = p
                    .homogeneous_degree()
                    .ok_or_else(|| validation(format!("entry ({i}, {j}) `{}` is not homogeneous", poly.render(p))))?;
                cols[j] = rows[i] + d;
            }
        }
        Matrix::from_entries(poly, rows, cols, entries)
    }

    pub fn zero(rows: Vec<i32>, cols: Vec<i32>) -> Self {
        let n = cols.len();
        Matrix {
            rows,
            cols,
            columns: vec![Vector::zero(); n],
        }
    }

    pub fn identity(poly: &PolyRing<F>, degs: Vec<i32>) -> Self {
        let one = poly.field().one();
        let columns = (0..degs.len() as u32)
            .map(|c| Vector {
                terms: vec![Term {
                    mono: poly.one_mono(),
                    comp: c,
                    coef: one.clone(),
                }],
            })
            .collect();
        Matrix {
            rows: degs.clone(),
            cols: degs,
            columns,
        }
    }

    /// The same map between twisted free modules: all degrees move by `delta`.
    pub fn shifted(&self, delta: i32) -> Matrix<F> {
        Matrix {
            rows: self.rows.iter().map(|d| d + delta).collect(),
            cols: self.cols.iter().map(|d| d + delta).collect(),
            columns: self.columns.clone(),
        }
    }

    pub fn rows(&self) -> &[i32] {
        &self.rows
    }
    pub fn cols(&self) -> &[i32] {
        &self.cols
    }
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }
    pub fn ncols(&self) -> usize {
        self.cols.len()
    }
    pub fn columns(&self) -> &[Vector<F>] {
        &self.columns
    }
    pub fn column(&self, j: usize) -> &Vector<F> {
        &self.columns[j]
    }
    pub fn into_columns(self) -> Vec<Vector<F>> {
        self.columns
    }

    pub fn entry(&self, poly: &PolyRing<F>, i: usize, j: usize) -> Poly<F> {
        poly.from_terms(
            self.columns[j]
                .terms
                .iter()
                .filter(|t| t.comp as usize == i)
                .map(|t| (t.mono.clone(), t.coef.clone()))
                .collect(),
        )
    }

    /// Row-major entries.
    pub fn entries(&self, poly: &PolyRing<F>) -> Vec<Vec<Poly<F>>> {
        let ctx = FreeCtx::new(poly, MODULE_ORDER, &self.rows);
        let cols: Vec<Vec<Poly<F>>> = self.columns.iter().map(|c| ctx.to_polys(c, self.rows.len())).collect();
        (0..self.rows.len())
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_zero())
    }

    /// True when some entry is a nonzero constant (the map is not minimal).
    pub fn has_unit_entry(&self) -> bool {
        self.columns.iter().any(|c| c.terms.iter().any(|t| t.mono.is_one()))
    }

    /// Image of a source element.
    pub fn apply(&self, ring: &GradedRing<F>, v: &Vector<F>) -> Vector<F> {
        let poly = ring.poly();
        let ctx = FreeCtx::new(poly, MODULE_ORDER, &self.rows);
        let mut acc = Vector::zero();
        for t in &v.terms {
            acc = ctx.axpy(&acc, &t.coef, Some(&t.mono), &self.columns[t.comp as usize].terms);
        }
        ring.reduce_vec(&acc)
    }

    /// self ∘ other.
    pub fn compose(&self, ring: &GradedRing<F>, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols.len(), other.rows.len(), "composition of incompatible maps");
        let columns = other.columns.iter().map(|c| self.apply(ring, c)).collect();
        Matrix {
            rows: self.rows.clone(),
            cols: other.cols.clone(),
            columns,
        }
    }

    pub fn add(&self, ring: &GradedRing<F>, other: &Matrix<F>) -> Matrix<F> {
        let ctx = FreeCtx::new(ring.poly(), MODULE_ORDER, &self.rows);
        Matrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| ring.reduce_vec(&ctx.add(a, b)))
                .collect(),
        }
    }

    pub fn sub(&self, ring: &GradedRing<F>, other: &Matrix<F>) -> Matrix<F> {
        let ctx = FreeCtx::new(ring.poly(), MODULE_ORDER, &self.rows);
        Matrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| ring.reduce_vec(&ctx.sub(a, b)))
                .collect(),
        }
    }

    pub fn scale(&self, poly: &PolyRing<F>, c: &F::Elem) -> Matrix<F> {
        let ctx = FreeCtx::new(poly, MODULE_ORDER, &self.rows);
        Matrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            columns: self.columns.iter().map(|v| ctx.scale(v, c)).collect(),
        }
    }

    /// Every entry reduced modulo the ideal of `ring`.
    pub fn reduce(&self, ring: &GradedRing<F>) -> Matrix<F> {
        Matrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            columns: self.columns.iter().map(|c| ring.reduce_vec(c)).collect(),
        }
    }

    /// The transpose Hom(G, D) → Hom(F, D) for D generated in degree `twist`:
    /// new row degrees twist − cols, new column degrees twist − rows.
    pub fn transpose(&self, poly: &PolyRing<F>, twist: i32) -> Matrix<F> {
        let rows: Vec<i32> = self.cols.iter().map(|d| twist - d).collect();
        let cols: Vec<i32> = self.rows.iter().map(|d| twist - d).collect();
        let mut buckets: Vec<Vec<Term<F>>> = vec![Vec::new(); self.rows.len()];
        for (j, c) in self.columns.iter().enumerate() {
            for t in &c.terms {
                buckets[t.comp as usize].push(Term {
                    mono: t.mono.clone(),
                    comp: j as u32,
                    coef: t.coef.clone(),
                });
            }
        }
        let ctx = FreeCtx::new(poly, MODULE_ORDER, &rows);
        let columns = buckets.into_iter().map(|b| ctx.from_terms(b)).collect();
        Matrix { rows, cols, columns }
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn submatrix(&self, poly: &PolyRing<F>, rows: &[usize], cols: &[usize]) -> Matrix<F> {
        let mut pos = vec![None; self.rows.len()];
        for (new, &old) in rows.iter().enumerate() {
            pos[old] = Some(new as u32);
        }
        let new_rows: Vec<i32> = rows.iter().map(|&i| self.rows[i]).collect();
        let ctx = FreeCtx::new(poly, MODULE_ORDER, &new_rows);
        Matrix {
            columns: cols
                .iter()
                .map(|&j| ctx.remap(&self.columns[j], |c| pos[c as usize]))
                .collect(),
            cols: cols.iter().map(|&j| self.cols[j]).collect(),
            rows: new_rows,
        }
    }

    /// [self | other] with equal targets.
    pub fn hconcat(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.rows, other.rows);
        let mut cols = self.cols.clone();
        cols.extend_from_slice(&other.cols);
        let mut columns = self.columns.clone();
        columns.extend(other.columns.iter().cloned());
        Matrix {
            rows: self.rows.clone(),
            cols,
            columns,
        }
    }

    /// [self; other] with equal sources.
    pub fn vconcat(&self, poly: &PolyRing<F>, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows.clone();
        rows.extend_from_slice(&other.rows);
        let ctx = FreeCtx::new(poly, MODULE_ORDER, &rows);
        let off = self.rows.len() as u32;
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| ctx.add(a, &ctx.offset(b, off)))
            .collect();
        Matrix {
            rows,
            cols: self.cols.clone(),
            columns,
        }
    }

    /// Block matrix [[a, b], [c, d]].
    pub fn block(poly: &PolyRing<F>, a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>, d: &Matrix<F>) -> Matrix<F> {
        a.hconcat(b).vconcat(poly, &c.hconcat(d))
    }

    pub fn direct_sum(poly: &PolyRing<F>, a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
        let ab = Matrix::zero(a.rows.clone(), b.cols.clone());
        let ba = Matrix::zero(b.rows.clone(), a.cols.clone());
        Matrix::block(poly, a, &ab, &ba, b)
    }

    /// Maps the entries into another ring through `f` (degrees are kept).
    pub fn map_entries(
        &self,
        target: &PolyRing<F>,
        rows: Vec<i32>,
        cols: Vec<i32>,
        f: impl Fn(&Poly<F>) -> Poly<F>,
        source: &PolyRing<F>,
    ) -> Result<Matrix<F>> {
        let entries: Vec<Vec<Poly<F>>> = self
            .entries(source)
            .iter()
            .map(|r| r.iter().map(&f).collect())
            .collect();
        Matrix::from_entries(target, rows, cols, &entries)
    }

    pub fn render(&self, poly: &PolyRing<F>) -> String {
        let entries = self.entries(poly);
        let rows: Vec<String> = entries
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(|p| poly.render(p)).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use std::sync::Arc;

    #[test]
    fn transpose_twice_is_identity() {
        let poly = Arc::new(PolyRing::standard(PrimeField::default(), &["x", "y"]));
        let x = poly.var(0);
        let y = poly.var(1);
        let m = Matrix::from_entries(
            &poly,
            vec![0, 0],
            vec![1, 2],
            &[vec![x.clone(), poly.mul(&x, &y)], vec![y.clone(), poly.zero()]],
        )
        .unwrap();
        let t = m.transpose(&poly, 3);
        assert_eq!(t.rows(), &[2, 1]);
        assert_eq!(t.cols(), &[3, 3]);
        assert_eq!(t.transpose(&poly, 3), m);
    }

    #[test]
    fn composition_kills_koszul_pair() {
        let poly = Arc::new(PolyRing::standard(PrimeField::default(), &["x", "y"]));
        let ring = crate::ring::GradedRing::polynomial(poly.clone());
        let x = poly.var(0);
        let y = poly.var(1);
        let d1 = Matrix::from_entries(&poly, vec![0], vec![1, 1], &[vec![x.clone(), y.clone()]]).unwrap();
        let d2 = Matrix::from_entries(&poly, vec![1, 1], vec![2], &[vec![poly.neg(&y)], vec![x]]).unwrap();
        assert!(d1.compose(&ring, &d2).is_zero());
    }
}
