//! Graded polynomial rings and sparse polynomials.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{validation, Result};
use crate::field::Field;
use crate::mono::{Mono, MonomialOrder};

/// A polynomial ring k[x_1..x_n] with positive variable weights and a monomial order.
#[derive(Debug)]
pub struct PolyRing<F: Field> {
    field: F,
    names: Vec<String>,
    weights: Vec<i32>,
    order: MonomialOrder,
    monomial_cache: Mutex<HashMap<i32, Arc<Vec<Mono>>>>,
}

impl<F: Field> Clone for PolyRing<F> {
    fn clone(&self) -> Self {
        PolyRing::new(
            self.field.clone(),
            self.names.clone(),
            self.weights.clone(),
            self.order.clone(),
        )
        .expect("cloning a valid ring")
    }
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F, names: Vec<String>, weights: Vec<i32>, order: MonomialOrder) -> Result<Self> {
        if names.len() != weights.len() {
            return Err(validation(format!(
                "{} variables but {} degrees",
                names.len(),
                weights.len()
            )));
        }
        if let Some(i) = weights.iter().position(|&w| w <= 0) {
            return Err(validation(format!(
                "variable `{}` has non-positive degree {}",
                names[i], weights[i]
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(validation(format!("duplicate variable `{n}`")));
            }
        }
        if let MonomialOrder::Weighted(w) = &order {
            if w.len() != names.len() {
                return Err(validation("weighted order needs one weight per variable"));
            }
        }
        Ok(PolyRing {
            field,
            names,
            weights,
            order,
            monomial_cache: Mutex::new(HashMap::new()),
        })
    }

    /// Standard-graded ring with grevlex order.
    pub fn standard(field: F, names: &[&str]) -> Self {
        PolyRing::new(
            field,
            names.iter().map(|s| s.to_string()).collect(),
            vec![1; names.len()],
            MonomialOrder::Grevlex,
        )
        .expect("valid standard ring")
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn weights(&self) -> &[i32] {
        &self.weights
    }
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }
    pub fn nvars(&self) -> usize {
        self.names.len()
    }
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn same_shape(&self, other: &PolyRing<F>) -> bool {
        self.names == other.names
            && self.weights == other.weights
            && self.order == other.order
            && self.field.spec() == other.field.spec()
    }

    pub fn cmp_mono(&self, a: &Mono, b: &Mono) -> Ordering {
        self.order.cmp(a, b)
    }

    pub fn one_mono(&self) -> Mono {
        Mono::one(self.nvars())
    }

    pub fn mono(&self, exps: &[u16]) -> Mono {
        Mono::from_exps(exps, &self.weights)
    }

    /// All monomials of weighted degree `d`, in decreasing order.
    pub fn monomials_of_degree(&self, d: i32) -> Arc<Vec<Mono>> {
        if let Some(v) = self.monomial_cache.lock().unwrap().get(&d) {
            return v.clone();
        }
        let mut out = Vec::new();
        if d >= 0 {
            let mut exps = vec![0u16; self.nvars()];
            self.enumerate(0, d, &mut exps, &mut out);
        }
        out.sort_by(|a, b| self.cmp_mono(b, a));
        let out = Arc::new(out);
        self.monomial_cache.lock().unwrap().insert(d, out.clone());
        out
    }

    fn enumerate(&self, i: usize, rest: i32, exps: &mut Vec<u16>, out: &mut Vec<Mono>) {
        if i == self.nvars() {
            if rest == 0 {
                out.push(self.mono(exps));
            }
            return;
        }
        let w = self.weights[i];
        let mut e = 0;
        while e * w <= rest {
            exps[i] = e as u16;
            self.enumerate(i + 1, rest - e * w, exps, out);
            e += 1;
        }
        exps[i] = 0;
    }

    // ---- polynomial constructors -------------------------------------------------

    pub fn zero(&self) -> Poly<F> {
        Poly { terms: Vec::new() }
    }

    pub fn constant(&self, c: F::Elem) -> Poly<F> {
        self.term(self.one_mono(), c)
    }

    pub fn one(&self) -> Poly<F> {
        self.constant(self.field.one())
    }

    pub fn from_int(&self, v: i64) -> Poly<F> {
        self.constant(self.field.from_i64(v))
    }

    pub fn term(&self, m: Mono, c: F::Elem) -> Poly<F> {
        if self.field.is_zero(&c) {
            self.zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(&self, i: usize) -> Poly<F> {
        self.term(Mono::var(i, &self.weights), self.field.one())
    }

    pub fn var_named(&self, name: &str) -> Poly<F> {
        self.var(self.var_index(name).expect("known variable"))
    }

    /// Builds a polynomial from unsorted, possibly repeated terms.
    pub fn from_terms(&self, mut terms: Vec<(Mono, F::Elem)>) -> Poly<F> {
        terms.sort_by(|a, b| self.cmp_mono(&b.0, &a.0));
        let mut out: Vec<(Mono, F::Elem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            if let Some(last) = out.last_mut() {
                if last.0 == m {
                    last.1 = self.field.add(&last.1, &c);
                    continue;
                }
            }
            out.push((m, c));
        }
        out.retain(|(_, c)| !self.field.is_zero(c));
        Poly { terms: out }
    }

    // ---- arithmetic --------------------------------------------------------------

    pub fn add(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        self.combine(a, b, false)
    }

    pub fn sub(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        self.combine(a, b, true)
    }

    fn combine(&self, a: &Poly<F>, b: &Poly<F>, negate_b: bool) -> Poly<F> {
        let f = &self.field;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < a.terms.len() || j < b.terms.len() {
            let ord = if i == a.terms.len() {
                Ordering::Less
            } else if j == b.terms.len() {
                Ordering::Greater
            } else {
                self.cmp_mono(&a.terms[i].0, &b.terms[j].0)
            };
            match ord {
                Ordering::Greater => {
                    out.push(a.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &b.terms[j];
                    out.push((m.clone(), if negate_b { f.neg(c) } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate_b {
                        f.sub(&a.terms[i].1, &b.terms[j].1)
                    } else {
                        f.add(&a.terms[i].1, &b.terms[j].1)
                    };
                    if !f.is_zero(&c) {
                        out.push((a.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Poly { terms: out }
    }

    pub fn neg(&self, a: &Poly<F>) -> Poly<F> {
        Poly {
            terms: a.terms.iter().map(|(m, c)| (m.clone(), self.field.neg(c))).collect(),
        }
    }

    pub fn scale(&self, a: &Poly<F>, c: &F::Elem) -> Poly<F> {
        if self.field.is_zero(c) {
            return self.zero();
        }
        Poly {
            terms: a.terms.iter().map(|(m, x)| (m.clone(), self.field.mul(x, c))).collect(),
        }
    }

    pub fn mul_term(&self, a: &Poly<F>, m: &Mono, c: &F::Elem) -> Poly<F> {
        if self.field.is_zero(c) {
            return self.zero();
        }
        Poly {
            terms: a.terms.iter().map(|(x, y)| (x.mul(m), self.field.mul(y, c))).collect(),
        }
    }

    pub fn mul(&self, a: &Poly<F>, b: &Poly<F>) -> Poly<F> {
        if a.is_zero() || b.is_zero() {
            return self.zero();
        }
        if a.terms.len() == 1 {
            return self.mul_term(b, &a.terms[0].0, &a.terms[0].1);
        }
        if b.terms.len() == 1 {
            return self.mul_term(a, &b.terms[0].0, &b.terms[0].1);
        }
        let mut terms = Vec::with_capacity(a.terms.len() * b.terms.len());
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                terms.push((ma.mul(mb), self.field.mul(ca, cb)));
            }
        }
        self.from_terms(terms)
    }

    pub fn pow(&self, a: &Poly<F>, e: u32) -> Poly<F> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Re-embeds a polynomial from `source` into this ring, sending variable i to `positions[i]`.
    pub fn embed_from(&self, p: &Poly<F>, positions: &[usize]) -> Poly<F> {
        self.from_terms(
            p.terms
                .iter()
                .map(|(m, c)| (m.embed(positions, &self.weights), c.clone()))
                .collect(),
        )
    }

    /// Rewrites with new weights/order (same variables); used after regrading.
    pub fn recast(&self, p: &Poly<F>) -> Poly<F> {
        self.from_terms(p.terms.iter().map(|(m, c)| (self.mono(m.exps()), c.clone())).collect())
    }

    /// Substitutes zero for every variable whose flag is set.
    pub fn kill_vars(&self, p: &Poly<F>, killed: &[bool]) -> Poly<F> {
        Poly {
            terms: p
                .terms
                .iter()
                .filter(|(m, _)| m.exps().iter().zip(killed).all(|(&e, &k)| !k || e == 0))
                .cloned()
                .collect(),
        }
    }

    // ---- rendering ---------------------------------------------------------------

    pub fn render_mono(&self, m: &Mono) -> String {
        let mut parts = Vec::new();
        for (i, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(self.names[i].clone()),
                _ => parts.push(format!("{}^{}", self.names[i], e)),
            }
        }
        parts.join("*")
    }

    pub fn render(&self, p: &Poly<F>) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, (m, c)) in p.terms.iter().enumerate() {
            let (neg, mag) = self.field.render_signed(c);
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let mono = self.render_mono(m);
            if mono.is_empty() {
                s.push_str(&mag);
            } else if mag == "1" {
                s.push_str(&mono);
            } else {
                s.push_str(&mag);
                s.push('*');
                s.push_str(&mono);
            }
        }
        s
    }
}

/// Sparse polynomial: terms sorted strictly decreasing under the ring order.
#[derive(Clone, Debug)]
pub struct Poly<F: Field> {
    pub(crate) terms: Vec<(Mono, F::Elem)>,
}

impl<F: Field> PartialEq for Poly<F> {
    fn eq(&self, o: &Self) -> bool {
        self.terms == o.terms
    }
}
impl<F: Field> Eq for Poly<F> {}
impl<F: Field> std::hash::Hash for Poly<F> {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.terms.hash(h);
    }
}

impl<F: Field> Poly<F> {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Mono, F::Elem)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Mono, F::Elem)> {
        self.terms.first()
    }

    /// Degree when nonzero and homogeneous.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        let d = self.terms.first()?.0.deg();
        self.terms.iter().all(|(m, _)| m.deg() == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// The constant coefficient when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<&F::Elem> {
        match self.terms.as_slice() {
            [(m, c)] if m.is_one() => Some(c),
            _ => None,
        }
    }

    /// Lowest unweighted total degree among the terms.
    pub fn order(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.total_degree()).min()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn arithmetic_and_rendering() {
        let r = PolyRing::standard(PrimeField::default(), &["x", "y"]);
        let x = r.var(0);
        let y = r.var(1);
        let s = r.add(&x, &y);
        let sq = r.mul(&s, &s);
        assert_eq!(r.render(&sq), "x^2 + 2*x*y + y^2");
        let d = r.sub(&sq, &r.mul(&x, &x));
        assert_eq!(r.render(&d), "2*x*y + y^2");
        assert_eq!(d.homogeneous_degree(), Some(2));
        assert_eq!(r.render(&r.neg(&x)), "-x");
    }

    #[test]
    fn monomials_of_weighted_degree() {
        let r = PolyRing::new(
            PrimeField::default(),
            vec!["x".into(), "y".into()],
            vec![2, 3],
            MonomialOrder::Grevlex,
        )
        .unwrap();
        assert_eq!(r.monomials_of_degree(6).len(), 2);
        assert_eq!(r.monomials_of_degree(1).len(), 0);
        assert_eq!(r.monomials_of_degree(0).len(), 1);
    }
}
