//! Hilbert series N(t) / ∏(1 − t^{w_i}) of graded modules, from initial modules.

use num_rational::Ratio;

use crate::mono::{Exps, Mono};

/// Laurent polynomial with integer coefficients: Σ coeffs[k] t^{low+k}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Laurent {
    low: i32,
    coeffs: Vec<i64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn monomial(exp: i32, c: i64) -> Self {
        Laurent {
            low: exp,
            coeffs: vec![c],
        }
        .trimmed()
    }

    pub fn from_coeffs(low: i32, coeffs: Vec<i64>) -> Self {
        Laurent { low, coeffs }.trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|&&c| c == 0).count();
        if lead_zeros == self.coeffs.len() {
            return Laurent::zero();
        }
        self.coeffs.drain(..lead_zeros);
        self.low += lead_zeros as i32;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn low(&self) -> i32 {
        self.low
    }

    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        let k = exp - self.low;
        if k < 0 {
            0
        } else {
            self.coeffs.get(k as usize).copied().unwrap_or(0)
        }
    }

    /// (exponent, coefficient) pairs with nonzero coefficient.
    pub fn terms(&self) -> Vec<(i32, i64)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| (self.low + k as i32, c))
            .collect()
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        self.combine(o, 1)
    }

    pub fn sub(&self, o: &Laurent) -> Laurent {
        self.combine(o, -1)
    }

    fn combine(&self, o: &Laurent, sign: i64) -> Laurent {
        if self.is_zero() {
            return o.scale(sign);
        }
        if o.is_zero() {
            return self.clone();
        }
        let low = self.low.min(o.low);
        let high = self.high().max(o.high());
        let coeffs = (low..=high).map(|e| self.coeff(e) + sign * o.coeff(e)).collect();
        Laurent::from_coeffs(low, coeffs)
    }

    pub fn scale(&self, c: i64) -> Laurent {
        Laurent::from_coeffs(self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn shift(&self, by: i32) -> Laurent {
        Laurent {
            low: self.low + by,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        if self.is_zero() || o.is_zero() {
            return Laurent::zero();
        }
        let mut coeffs = vec![0i64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Laurent::from_coeffs(self.low + o.low, coeffs)
    }

    pub fn eval_one(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    /// Exact division by (1 − t); `None` when not divisible.
    pub fn div_one_minus_t(&self) -> Option<Laurent> {
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        if self.eval_one() != 0 {
            return None;
        }
        // q(t)(1 - t) = p(t): q_k = Σ_{j ≤ k} p_j
        let mut q = Vec::with_capacity(self.coeffs.len() - 1);
        let mut acc = 0;
        for &c in &self.coeffs[..self.coeffs.len() - 1] {
            acc += c;
            q.push(acc);
        }
        Some(Laurent::from_coeffs(self.low, q))
    }

    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in self.terms() {
            let t = match e {
                0 => format!("{}", c.abs()),
                1 => format!(
                    "{}t",
                    if c.abs() == 1 {
                        String::new()
                    } else {
                        c.abs().to_string()
                    }
                ),
                _ => format!(
                    "{}t^{}",
                    if c.abs() == 1 {
                        String::new()
                    } else {
                        c.abs().to_string()
                    },
                    e
                ),
            };
            if parts.is_empty() {
                parts.push(if c < 0 { format!("-{t}") } else { t });
            } else {
                parts.push(format!("{} {t}", if c < 0 { "-" } else { "+" }));
            }
        }
        parts.join(" ")
    }
}

/// Hilbert series of a graded module over a ring with variable weights `weights`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HilbertSeries {
    numerator: Laurent,
    weights: Vec<i32>,
}

impl HilbertSeries {
    pub fn new(numerator: Laurent, weights: Vec<i32>) -> Self {
        HilbertSeries { numerator, weights }
    }

    /// Series of S^r / (monomial submodule) with component shifts and per-component
    /// leading monomials.
    pub fn of_monomial_module(weights: &[i32], shifts: &[i32], lts: &[Vec<Mono>]) -> Self {
        let mut num = Laurent::zero();
        for (c, &s) in shifts.iter().enumerate() {
            let gens: Vec<Exps> = lts[c].iter().map(|m| m.exps().into()).collect();
            num = num.add(&monomial_ideal_numerator(gens, weights).shift(s));
        }
        HilbertSeries::new(num, weights.to_vec())
    }

    pub fn numerator(&self) -> &Laurent {
        &self.numerator
    }

    pub fn weights(&self) -> &[i32] {
        &self.weights
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn add(&self, o: &HilbertSeries) -> HilbertSeries {
        debug_assert_eq!(self.weights, o.weights);
        HilbertSeries::new(self.numerator.add(&o.numerator), self.weights.clone())
    }

    pub fn sub(&self, o: &HilbertSeries) -> HilbertSeries {
        debug_assert_eq!(self.weights, o.weights);
        HilbertSeries::new(self.numerator.sub(&o.numerator), self.weights.clone())
    }

    pub fn shift(&self, by: i32) -> HilbertSeries {
        HilbertSeries::new(self.numerator.shift(by), self.weights.clone())
    }

    /// dim_k M_d for d in lo..=hi.
    pub fn dims(&self, lo: i32, hi: i32) -> Vec<i64> {
        if hi < lo {
            return Vec::new();
        }
        if self.numerator.is_zero() {
            return vec![0; (hi - lo + 1) as usize];
        }
        let start = self.numerator.low().min(lo);
        let len = (hi - start + 1).max(0) as usize;
        let mut series: Vec<i64> = (start..=hi).map(|e| self.numerator.coeff(e)).collect();
        for &w in &self.weights {
            let w = w as usize;
            for k in w..len {
                series[k] += series[k - w];
            }
        }
        (lo..=hi).map(|d| series[(d - start) as usize]).collect()
    }

    pub fn dim_at(&self, d: i32) -> i64 {
        self.dims(d, d)[0]
    }

    /// Splits N(t) = (1 − t)^k Q(t) with Q(1) ≠ 0.
    fn factor_at_one(&self) -> (usize, Laurent) {
        let mut q = self.numerator.clone();
        let mut k = 0;
        while let Some(next) = q.div_one_minus_t() {
            if q.is_zero() {
                break;
            }
            q = next;
            k += 1;
        }
        (k, q)
    }

    /// Krull dimension; −1 for the zero module.
    pub fn krull_dim(&self) -> i32 {
        if self.numerator.is_zero() {
            return -1;
        }
        let (k, _) = self.factor_at_one();
        self.weights.len() as i32 - k as i32
    }

    /// Leading coefficient Q(1)/∏w of the pole at t = 1 (the multiplicity for
    /// standard gradings).
    pub fn multiplicity(&self) -> Ratio<i64> {
        if self.numerator.is_zero() {
            return Ratio::from_integer(0);
        }
        let (_, q) = self.factor_at_one();
        let prod: i64 = self.weights.iter().map(|&w| w as i64).product();
        Ratio::new(q.eval_one(), prod)
    }

    pub fn is_finite_length(&self) -> bool {
        self.krull_dim() <= 0
    }

    /// The series as a Laurent polynomial when of finite length.
    pub fn as_polynomial(&self) -> Option<Laurent> {
        if !self.is_finite_length() {
            return None;
        }
        if self.numerator.is_zero() {
            return Some(Laurent::zero());
        }
        let lo = self.numerator.low();
        let hi = self.numerator.high();
        let coeffs = self.dims(lo, hi);
        Some(Laurent::from_coeffs(lo, coeffs))
    }

    /// Total k-dimension when of finite length.
    pub fn total_length(&self) -> Option<i64> {
        self.as_polynomial().map(|p| p.eval_one())
    }

    /// Degrees with nonzero graded piece, when of finite length.
    pub fn support(&self) -> Option<Vec<i32>> {
        self.as_polynomial()
            .map(|p| p.terms().into_iter().map(|(e, _)| e).collect())
    }

    pub fn render(&self) -> String {
        let den: Vec<String> = self
            .weights
            .iter()
            .map(|w| if *w == 1 { "(1-t)".into() } else { format!("(1-t^{w})") })
            .collect();
        format!("({}) / {}", self.numerator.render(), den.join(""))
    }
}

fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minimalize(mut gens: Vec<Exps>) -> Vec<Exps> {
    gens.sort_by_key(|g| g.iter().map(|&e| e as u32).sum::<u32>());
    gens.dedup();
    let mut out: Vec<Exps> = Vec::new();
    for g in gens {
        if !out.iter().any(|h| divides(h, &g)) {
            out.push(g);
        }
    }
    out
}

fn wdeg(e: &[u16], weights: &[i32]) -> i32 {
    e.iter().zip(weights).map(|(&a, &w)| a as i32 * w).sum()
}

/// Numerator of the Hilbert series of S/J for a monomial ideal J.
pub fn monomial_ideal_numerator(gens: Vec<Exps>, weights: &[i32]) -> Laurent {
    let gens = minimalize(gens);
    if gens.is_empty() {
        return Laurent::monomial(0, 1);
    }
    if gens.iter().any(|g| g.iter().all(|&e| e == 0)) {
        return Laurent::zero();
    }
    let n = weights.len();
    let mut counts = vec![0usize; n];
    for g in &gens {
        for (v, &e) in g.iter().enumerate() {
            if e > 0 {
                counts[v] += 1;
            }
        }
    }
    let (pivot_var, &best) = counts
        .iter()
        .enumerate()
        .max_by_key(|(v, &c)| (c, std::cmp::Reverse(*v)))
        .unwrap();
    if best <= 1 {
        // pairwise coprime generators
        let mut acc = Laurent::monomial(0, 1);
        for g in &gens {
            let d = wdeg(g, weights);
            acc = acc.mul(&Laurent::monomial(0, 1).sub(&Laurent::monomial(d, 1)));
        }
        return acc;
    }
    let e = gens
        .iter()
        .filter(|g| g[pivot_var] > 0)
        .map(|g| g[pivot_var])
        .min()
        .unwrap();
    let mut p: Exps = smallvec::SmallVec::from_elem(0, n);
    p[pivot_var] = e;
    let mut with_p = gens.clone();
    with_p.push(p.clone());
    let colon: Vec<Exps> = gens
        .iter()
        .map(|g| g.iter().zip(p.iter()).map(|(&a, &b)| a.saturating_sub(b)).collect())
        .collect();
    let a = monomial_ideal_numerator(with_p, weights);
    let b = monomial_ideal_numerator(colon, weights).shift(wdeg(&p, weights));
    a.add(&b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exps(v: &[u16]) -> Exps {
        v.iter().copied().collect()
    }

    #[test]
    fn quadric_cone_hilbert_function() {
        // in(z1^2 - z0 z2) = z1^2 in grevlex
        let n = monomial_ideal_numerator(vec![exps(&[0, 2, 0])], &[1, 1, 1]);
        let hs = HilbertSeries::new(n, vec![1, 1, 1]);
        assert_eq!(hs.dims(0, 3), vec![1, 3, 5, 7]);
        assert_eq!(hs.krull_dim(), 2);
        assert_eq!(hs.multiplicity(), Ratio::from_integer(2));
    }

    #[test]
    fn artinian_length() {
        let n = monomial_ideal_numerator(vec![exps(&[3])], &[1]);
        let hs = HilbertSeries::new(n, vec![1]);
        assert_eq!(hs.dims(0, 3), vec![1, 1, 1, 0]);
        assert_eq!(hs.krull_dim(), 0);
        assert_eq!(hs.total_length(), Some(3));
    }

    #[test]
    fn zero_module_has_dimension_minus_one() {
        let hs = HilbertSeries::new(Laurent::zero(), vec![1, 1]);
        assert_eq!(hs.krull_dim(), -1);
    }

    #[test]
    fn pivot_recursion_matches_counting() {
        // J = (x^2, xy, y^3) in k[x,y]: standard monomials 1, x, y, y^2 -> length 4
        let n = monomial_ideal_numerator(vec![exps(&[2, 0]), exps(&[1, 1]), exps(&[0, 3])], &[1, 1]);
        let hs = HilbertSeries::new(n, vec![1, 1]);
        assert_eq!(hs.total_length(), Some(4));
        assert_eq!(hs.dims(0, 3), vec![1, 2, 1, 0]);
    }
}
