//! Dense linear algebra over an exact field.

use crate::exec::Exec;
use crate::field::Field;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseMat<F: Field> {
    pub rows: Vec<Vec<F::Elem>>,
    pub ncols: usize,
}

/// Work below which row elimination stays sequential.
const PAR_THRESHOLD: usize = 1 << 14;

impl<F: Field> DenseMat<F> {
    pub fn zeros(field: &F, nrows: usize, ncols: usize) -> Self {
        DenseMat {
            rows: vec![vec![field.zero(); ncols]; nrows],
            ncols,
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.rows[i][i] = field.one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F::Elem>>, ncols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == ncols));
        DenseMat { rows, ncols }
    }

    /// Matrix whose columns are the given vectors (all of length `nrows`).
    pub fn from_cols(field: &F, cols: &[Vec<F::Elem>], nrows: usize) -> Self {
        let mut m = Self::zeros(field, nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.rows[i][j] = x.clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn transpose(&self, field: &F) -> Self {
        let mut t = Self::zeros(field, self.ncols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                t.rows[j][i] = x.clone();
            }
        }
        t
    }

    pub fn mul(&self, field: &F, o: &DenseMat<F>) -> DenseMat<F> {
        assert_eq!(self.ncols, o.nrows());
        let mut out = Self::zeros(field, self.nrows(), o.ncols);
        for (i, r) in self.rows.iter().enumerate() {
            for (k, a) in r.iter().enumerate() {
                if field.is_zero(a) {
                    continue;
                }
                for (j, b) in o.rows[k].iter().enumerate() {
                    if !field.is_zero(b) {
                        out.rows[i][j] = field.add(&out.rows[i][j], &field.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, field: &F, v: &[F::Elem]) -> Vec<F::Elem> {
        self.rows.iter().map(|r| dot(field, r, v)).collect()
    }

    pub fn is_zero(&self, field: &F) -> bool {
        self.rows.iter().all(|r| r.iter().all(|x| field.is_zero(x)))
    }

    /// In-place reduced row echelon form; returns pivot columns (one per nonzero row,
    /// rows reordered so that nonzero rows come first).
    pub fn rref(&mut self, field: &F, exec: Exec) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        let nrows = self.nrows();
        let parallel = exec.is_parallel() && nrows * self.ncols >= PAR_THRESHOLD;
        for c in 0..self.ncols {
            if r == nrows {
                break;
            }
            let Some(p) = (r..nrows).find(|&i| !field.is_zero(&self.rows[i][c])) else {
                continue;
            };
            self.rows.swap(r, p);
            let inv = field.inv(&self.rows[r][c]);
            for x in self.rows[r].iter_mut() {
                *x = field.mul(x, &inv);
            }
            let pivot_row = self.rows[r].clone();
            let eliminate = |row: &mut Vec<F::Elem>| {
                let f = row[c].clone();
                if field.is_zero(&f) {
                    return;
                }
                for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    if !field.is_zero(y) {
                        *x = field.sub(x, &field.mul(&f, y));
                    }
                }
            };
            let (head, tail) = self.rows.split_at_mut(r);
            let tail = &mut tail[1..];
            if parallel {
                Exec::Parallel.for_each_mut(head, eliminate);
                Exec::Parallel.for_each_mut(tail, eliminate);
            } else {
                head.iter_mut().for_each(eliminate);
                tail.iter_mut().for_each(eliminate);
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &F, exec: Exec) -> usize {
        self.clone().rref(field, exec).len()
    }

    /// Basis of the right kernel {x : A x = 0}, one vector per free column.
    pub fn kernel(&self, field: &F, exec: Exec) -> Vec<Vec<F::Elem>> {
        let mut m = self.clone();
        let pivots = m.rref(field, exec);
        let mut is_pivot = vec![false; self.ncols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.ncols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![field.zero(); self.ncols];
            v[free] = field.one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(&m.rows[row][free]);
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of A x = b, if one exists (free variables set to zero).
    pub fn solve(&self, field: &F, b: &[F::Elem], exec: Exec) -> Option<Vec<F::Elem>> {
        assert_eq!(b.len(), self.nrows());
        let mut aug = DenseMat::zeros(field, self.nrows(), self.ncols + 1);
        for (i, r) in self.rows.iter().enumerate() {
            aug.rows[i][..self.ncols].clone_from_slice(r);
            aug.rows[i][self.ncols] = b[i].clone();
        }
        let pivots = aug.rref(field, exec);
        if pivots.last() == Some(&self.ncols) {
            return None;
        }
        let mut x = vec![field.zero(); self.ncols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = aug.rows[row][self.ncols].clone();
        }
        Some(x)
    }
}

pub fn dot<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = field.zero();
    for (x, y) in a.iter().zip(b) {
        if !field.is_zero(x) && !field.is_zero(y) {
            acc = field.add(&acc, &field.mul(x, y));
        }
    }
    acc
}

pub fn axpy<F: Field>(field: &F, acc: &mut [F::Elem], c: &F::Elem, v: &[F::Elem]) {
    if field.is_zero(c) {
        return;
    }
    for (a, x) in acc.iter_mut().zip(v) {
        if !field.is_zero(x) {
            *a = field.add(a, &field.mul(c, x));
        }
    }
}

pub fn is_zero_vec<F: Field>(field: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| field.is_zero(x))
}

/// Echelon basis of a span that remembers how each echelon row was formed, so
/// that members can be written in terms of the original spanning vectors.
#[derive(Clone, Debug)]
pub struct Span<F: Field> {
    dim: usize,
    ngens: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
    combos: Vec<Vec<F::Elem>>,
}

impl<F: Field> Span<F> {
    pub fn new(dim: usize) -> Self {
        Span {
            dim,
            ngens: 0,
            rows: Vec::new(),
            pivots: Vec::new(),
            combos: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ngens(&self) -> usize {
        self.ngens
    }

    /// Reduces `v` against the echelon rows; returns the remainder and the
    /// combination (over generators) that was subtracted.
    fn reduce_tracked(&self, field: &F, v: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
        let mut rem = v.to_vec();
        let mut combo = vec![field.zero(); self.ngens];
        for (k, &p) in self.pivots.iter().enumerate() {
            let c = rem[p].clone();
            if field.is_zero(&c) {
                continue;
            }
            let nc = field.neg(&c);
            axpy(field, &mut rem, &nc, &self.rows[k]);
            axpy(field, &mut combo, &c, &self.combos[k]);
        }
        (rem, combo)
    }

    /// Adds a spanning vector; returns true when it enlarged the span.
    pub fn push(&mut self, field: &F, v: &[F::Elem]) -> bool {
        assert_eq!(v.len(), self.dim);
        let (rem, combo) = self.reduce_tracked(field, v);
        let g = self.ngens;
        self.ngens += 1;
        for c in self.combos.iter_mut() {
            c.push(field.zero());
        }
        let Some(p) = rem.iter().position(|x| !field.is_zero(x)) else {
            return false;
        };
        let inv = field.inv(&rem[p]);
        let row: Vec<F::Elem> = rem.iter().map(|x| field.mul(x, &inv)).collect();
        // row = inv * (v - combo·gens)
        let mut c: Vec<F::Elem> = combo.iter().map(|x| field.neg(&field.mul(x, &inv))).collect();
        c.push(inv);
        debug_assert_eq!(c.len(), g + 1);
        // keep earlier rows reduced at the new pivot
        for k in 0..self.rows.len() {
            let f = self.rows[k][p].clone();
            if !field.is_zero(&f) {
                let nf = field.neg(&f);
                let (rows, combos) = (&mut self.rows, &mut self.combos);
                axpy(field, &mut rows[k], &nf, &row);
                axpy(field, &mut combos[k], &nf, &c);
            }
        }
        self.rows.push(row);
        self.pivots.push(p);
        self.combos.push(c);
        true
    }

    pub fn contains(&self, field: &F, v: &[F::Elem]) -> bool {
        is_zero_vec(field, &self.reduce_tracked(field, v).0)
    }

    /// Coefficients expressing `v` over the pushed generators, if `v` is in the span.
    pub fn express(&self, field: &F, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let (rem, combo) = self.reduce_tracked(field, v);
        is_zero_vec(field, &rem).then_some(combo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn f() -> PrimeField {
        PrimeField::new(101).unwrap()
    }

    fn mat(rows: &[&[i64]]) -> DenseMat<PrimeField> {
        let fl = f();
        let n = rows[0].len();
        DenseMat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| fl.from_i64(x)).collect())
                .collect(),
            n,
        )
    }

    #[test]
    fn kernel_and_rank() {
        let fl = f();
        let a = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(a.rank(&fl, Exec::Sequential), 1);
        let k = a.kernel(&fl, Exec::Sequential);
        assert_eq!(k.len(), 2);
        for v in k {
            assert!(is_zero_vec(&fl, &a.mul_vec(&fl, &v)));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let fl = f();
        let a = mat(&[&[1, 1], &[1, -1]]);
        let x = a
            .solve(&fl, &[fl.from_i64(2), fl.from_i64(0)], Exec::Sequential)
            .unwrap();
        assert_eq!(x, vec![1, 1]);
        let b = mat(&[&[1, 1], &[2, 2]]);
        assert!(b
            .solve(&fl, &[fl.from_i64(1), fl.from_i64(1)], Exec::Sequential)
            .is_none());
    }

    #[test]
    fn span_expresses_members() {
        let fl = f();
        let mut s = Span::new(3);
        let g1 = vec![1u32, 0, 1];
        let g2 = vec![0u32, 1, 1];
        let g3 = vec![1u32, 1, 2];
        assert!(s.push(&fl, &g1));
        assert!(s.push(&fl, &g2));
        assert!(!s.push(&fl, &g3));
        let target = vec![2u32, 3, 5];
        let c = s.express(&fl, &target).unwrap();
        let mut acc = vec![0u32; 3];
        for (coef, g) in c.iter().zip([&g1, &g2, &g3]) {
            axpy(&fl, &mut acc, coef, g);
        }
        assert_eq!(acc, target);
        assert!(s.express(&fl, &[1, 0, 0]).is_none());
    }
}
