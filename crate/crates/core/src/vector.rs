//! Elements of graded free modules: sparse (monomial, component, coefficient) terms.

use std::cmp::Ordering;

use crate::field::Field;
use crate::mono::{ModuleOrder, Mono};
use crate::poly::{Poly, PolyRing};

#[derive(Clone, Debug)]
pub struct Term<F: Field> {
    pub mono: Mono,
    pub comp: u32,
    pub coef: F::Elem,
}

impl<F: Field> PartialEq for Term<F> {
    fn eq(&self, o: &Self) -> bool {
        self.comp == o.comp && self.mono == o.mono && self.coef == o.coef
    }
}
impl<F: Field> Eq for Term<F> {}
impl<F: Field> std::hash::Hash for Term<F> {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.mono.hash(h);
        self.comp.hash(h);
        self.coef.hash(h);
    }
}

/// Terms sorted strictly decreasing under a module order.
#[derive(Clone, Debug)]
pub struct Vector<F: Field> {
    pub(crate) terms: Vec<Term<F>>,
}

impl<F: Field> PartialEq for Vector<F> {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}
impl<F: Field> Eq for Vector<F> {}
impl<F: Field> std::hash::Hash for Vector<F> {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.terms.hash(h);
    }
}

impl<F: Field> Default for Vector<F> {
    fn default() -> Self {
        Vector { terms: Vec::new() }
    }
}

impl<F: Field> Vector<F> {
    pub fn zero() -> Self {
        Self::default()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }
    pub fn lead(&self) -> Option<&Term<F>> {
        self.terms.first()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    /// True when all terms share one component.
    pub fn single_component(&self) -> bool {
        match self.terms.first() {
            Some(t) => self.terms.iter().all(|s| s.comp == t.comp),
            None => true,
        }
    }
    pub fn max_comp(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.comp).max()
    }
}

/// Arithmetic context for vectors in one free module: ring, order, generator degrees.
pub struct FreeCtx<'a, F: Field> {
    pub ring: &'a PolyRing<F>,
    pub order: ModuleOrder,
    pub shifts: &'a [i32],
}

impl<F: Field> Clone for FreeCtx<'_, F> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<F: Field> Copy for FreeCtx<'_, F> {}

impl<'a, F: Field> FreeCtx<'a, F> {
    pub fn new(ring: &'a PolyRing<F>, order: ModuleOrder, shifts: &'a [i32]) -> Self {
        FreeCtx { ring, order, shifts }
    }

    pub fn cmp(&self, am: &Mono, ac: u32, bm: &Mono, bc: u32) -> Ordering {
        match self.order {
            ModuleOrder::PositionOverTerm => bc.cmp(&ac).then_with(|| self.ring.cmp_mono(am, bm)),
            ModuleOrder::TermOverPosition => self.ring.cmp_mono(am, bm).then_with(|| bc.cmp(&ac)),
        }
    }

    pub fn cmp_terms(&self, a: &Term<F>, b: &Term<F>) -> Ordering {
        self.cmp(&a.mono, a.comp, &b.mono, b.comp)
    }

    pub fn term_degree(&self, t: &Term<F>) -> i32 {
        t.mono.deg() + self.shifts[t.comp as usize]
    }

    /// Degree of a nonzero homogeneous vector; `None` if zero or inhomogeneous.
    pub fn degree(&self, v: &Vector<F>) -> Option<i32> {
        let d = self.term_degree(v.terms.first()?);
        v.terms.iter().all(|t| self.term_degree(t) == d).then_some(d)
    }

    pub fn is_homogeneous(&self, v: &Vector<F>) -> bool {
        v.is_zero() || self.degree(v).is_some()
    }

    pub fn from_terms(&self, mut terms: Vec<Term<F>>) -> Vector<F> {
        let f = self.ring.field();
        terms.sort_by(|a, b| self.cmp_terms(b, a));
        let mut out: Vec<Term<F>> = Vec::with_capacity(terms.len());
        for t in terms {
            if let Some(last) = out.last_mut() {
                if last.comp == t.comp && last.mono == t.mono {
                    last.coef = f.add(&last.coef, &t.coef);
                    continue;
                }
            }
            out.push(t);
        }
        out.retain(|t| !f.is_zero(&t.coef));
        Vector { terms: out }
    }

    /// The vector with polynomial `polys[i]` in component `i`.
    pub fn from_polys(&self, polys: &[&Poly<F>]) -> Vector<F> {
        let mut terms = Vec::new();
        for (i, p) in polys.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(Term {
                    mono: m.clone(),
                    comp: i as u32,
                    coef: c.clone(),
                });
            }
        }
        self.from_terms(terms)
    }

    /// `p * e_comp`.
    pub fn from_poly_at(&self, p: &Poly<F>, comp: u32) -> Vector<F> {
        let terms = p
            .terms()
            .iter()
            .map(|(m, c)| Term {
                mono: m.clone(),
                comp,
                coef: c.clone(),
            })
            .collect();
        self.from_terms(terms)
    }

    /// Splits into one polynomial per component (length `rank`).
    pub fn to_polys(&self, v: &Vector<F>, rank: usize) -> Vec<Poly<F>> {
        let mut buckets: Vec<Vec<(Mono, F::Elem)>> = vec![Vec::new(); rank];
        for t in &v.terms {
            buckets[t.comp as usize].push((t.mono.clone(), t.coef.clone()));
        }
        buckets.into_iter().map(|b| self.ring.from_terms(b)).collect()
    }

    pub fn add(&self, a: &Vector<F>, b: &Vector<F>) -> Vector<F> {
        let one = self.ring.field().one();
        self.axpy(a, &one, None, &b.terms)
    }

    pub fn sub(&self, a: &Vector<F>, b: &Vector<F>) -> Vector<F> {
        let m1 = self.ring.field().neg(&self.ring.field().one());
        self.axpy(a, &m1, None, &b.terms)
    }

    pub fn scale(&self, a: &Vector<F>, c: &F::Elem) -> Vector<F> {
        let f = self.ring.field();
        if f.is_zero(c) {
            return Vector::zero();
        }
        Vector {
            terms: a
                .terms
                .iter()
                .map(|t| Term {
                    mono: t.mono.clone(),
                    comp: t.comp,
                    coef: f.mul(&t.coef, c),
                })
                .collect(),
        }
    }

    /// `c * m * a`; multiplication by a monomial preserves the order.
    pub fn mul_term(&self, a: &Vector<F>, m: &Mono, c: &F::Elem) -> Vector<F> {
        let f = self.ring.field();
        if f.is_zero(c) {
            return Vector::zero();
        }
        Vector {
            terms: a
                .terms
                .iter()
                .map(|t| Term {
                    mono: t.mono.mul(m),
                    comp: t.comp,
                    coef: f.mul(&t.coef, c),
                })
                .collect(),
        }
    }

    pub fn mul_poly(&self, a: &Vector<F>, p: &Poly<F>) -> Vector<F> {
        let mut acc = Vector::zero();
        for (m, c) in p.terms() {
            acc = self.axpy(&acc, c, Some(m), &a.terms);
        }
        acc
    }

    /// `a + c * m * b` (m = 1 when `None`), by a single merge.
    pub fn axpy(&self, a: &Vector<F>, c: &F::Elem, m: Option<&Mono>, b: &[Term<F>]) -> Vector<F> {
        Vector {
            terms: self.merge(&a.terms, c, m, b),
        }
    }

    pub(crate) fn merge(&self, a: &[Term<F>], c: &F::Elem, m: Option<&Mono>, b: &[Term<F>]) -> Vec<Term<F>> {
        let f = self.ring.field();
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        let mut bj: Option<Mono> = None;
        while i < a.len() || j < b.len() {
            if j < b.len() && bj.is_none() {
                bj = Some(match m {
                    Some(m) => b[j].mono.mul(m),
                    None => b[j].mono.clone(),
                });
            }
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                self.cmp(&a[i].mono, a[i].comp, bj.as_ref().unwrap(), b[j].comp)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term {
                        mono: bj.take().unwrap(),
                        comp: b[j].comp,
                        coef: f.mul(c, &b[j].coef),
                    });
                    j += 1;
                }
                Ordering::Equal => {
                    let coef = f.add(&a[i].coef, &f.mul(c, &b[j].coef));
                    if !f.is_zero(&coef) {
                        out.push(Term {
                            mono: a[i].mono.clone(),
                            comp: a[i].comp,
                            coef,
                        });
                    }
                    bj = None;
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    /// Shifts every component index by `offset`.
    pub fn offset(&self, v: &Vector<F>, offset: u32) -> Vector<F> {
        Vector {
            terms: v
                .terms
                .iter()
                .map(|t| Term {
                    mono: t.mono.clone(),
                    comp: t.comp + offset,
                    coef: t.coef.clone(),
                })
                .collect(),
        }
    }

    /// Relabels components through `map` (None drops the term) and re-sorts.
    pub fn remap(&self, v: &Vector<F>, map: impl Fn(u32) -> Option<u32>) -> Vector<F> {
        let terms = v
            .terms
            .iter()
            .filter_map(|t| {
                map(t.comp).map(|c| Term {
                    mono: t.mono.clone(),
                    comp: c,
                    coef: t.coef.clone(),
                })
            })
            .collect();
        self.from_terms(terms)
    }

    pub fn make_monic(&self, v: &Vector<F>) -> Vector<F> {
        match v.lead() {
            Some(t) => {
                let inv = self.ring.field().inv(&t.coef);
                self.scale(v, &inv)
            }
            None => v.clone(),
        }
    }

    pub fn render(&self, v: &Vector<F>, rank: usize) -> String {
        let polys = self.to_polys(v, rank);
        let parts: Vec<String> = polys.iter().map(|p| self.ring.render(p)).collect();
        format!("[{}]", parts.join(", "))
    }
}
