//! Monomials, monomial orders and their module extensions.

use std::cmp::Ordering;

use smallvec::SmallVec;

use crate::error::{validation, Result};

pub type Exps = SmallVec<[u16; 8]>;

/// A monomial with its weighted degree cached.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    deg: i32,
    exps: Exps,
}

impl Mono {
    pub fn one(nvars: usize) -> Self {
        Mono {
            deg: 0,
            exps: SmallVec::from_elem(0, nvars),
        }
    }

    pub fn from_exps(exps: &[u16], weights: &[i32]) -> Self {
        let deg = exps.iter().zip(weights).map(|(&e, &w)| e as i32 * w).sum();
        Mono {
            deg,
            exps: SmallVec::from_slice(exps),
        }
    }

    pub fn var(index: usize, weights: &[i32]) -> Self {
        let mut exps: Exps = SmallVec::from_elem(0, weights.len());
        exps[index] = 1;
        Mono {
            deg: weights[index],
            exps,
        }
    }

    pub fn deg(&self) -> i32 {
        self.deg
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    /// Unweighted total degree.
    pub fn total_degree(&self) -> u32 {
        self.exps.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono {
            deg: self.deg + other.deg,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Mono) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Mono) -> Option<Mono> {
        if !other.divides(self) {
            return None;
        }
        Some(Mono {
            deg: self.deg - other.deg,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn lcm(&self, other: &Mono, weights: &[i32]) -> Mono {
        let exps: Exps = self.exps.iter().zip(&other.exps).map(|(&a, &b)| a.max(b)).collect();
        Mono::from_exps(&exps, weights)
    }

    pub fn coprime(&self, other: &Mono) -> bool {
        self.exps.iter().zip(&other.exps).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Colon `self : other` = self / gcd(self, other).
    pub fn colon(&self, other: &Mono, weights: &[i32]) -> Mono {
        let exps: Exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(&a, &b)| a.saturating_sub(b))
            .collect();
        Mono::from_exps(&exps, weights)
    }

    /// Re-embeds into a ring whose variable `i` is `positions[i]` of `nvars`.
    pub fn embed(&self, positions: &[usize], weights: &[i32]) -> Mono {
        let mut exps: Exps = SmallVec::from_elem(0, weights.len());
        for (i, &e) in self.exps.iter().enumerate() {
            exps[positions[i]] = e;
        }
        Mono::from_exps(&exps, weights)
    }
}

/// Order on monomials of a single polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    /// Degree (by the ring weights), then reverse lexicographic.
    Grevlex,
    /// Pure lexicographic with the first variable largest.
    Lex,
    /// Degree by the given weights, ties broken by grevlex.
    Weighted(Vec<i32>),
}

impl MonomialOrder {
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim().to_ascii_lowercase();
        match t.as_str() {
            "grevlex" => Ok(MonomialOrder::Grevlex),
            "lex" => Ok(MonomialOrder::Lex),
            _ => {
                let inner = t
                    .strip_prefix("weighted(")
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| validation(format!("unknown monomial order `{text}`")))?;
                let w: std::result::Result<Vec<i32>, _> = inner.split(',').map(|s| s.trim().parse::<i32>()).collect();
                let w = w.map_err(|_| validation(format!("bad weights in `{text}`")))?;
                if w.iter().any(|&x| x <= 0) {
                    return Err(validation(format!("weights must be positive in `{text}`")));
                }
                Ok(MonomialOrder::Weighted(w))
            }
        }
    }

    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        match self {
            MonomialOrder::Grevlex => a.deg.cmp(&b.deg).then_with(|| revlex(a, b)),
            MonomialOrder::Lex => {
                for (x, y) in a.exps.iter().zip(&b.exps) {
                    match x.cmp(y) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::Weighted(w) => {
                let wa: i64 = a.exps.iter().zip(w).map(|(&e, &x)| e as i64 * x as i64).sum();
                let wb: i64 = b.exps.iter().zip(w).map(|(&e, &x)| e as i64 * x as i64).sum();
                wa.cmp(&wb).then_with(|| a.deg.cmp(&b.deg)).then_with(|| revlex(a, b))
            }
        }
    }
}

impl std::fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MonomialOrder::Grevlex => write!(f, "grevlex"),
            MonomialOrder::Lex => write!(f, "lex"),
            MonomialOrder::Weighted(w) => {
                let parts: Vec<String> = w.iter().map(|x| x.to_string()).collect();
                write!(f, "weighted({})", parts.join(","))
            }
        }
    }
}

fn revlex(a: &Mono, b: &Mono) -> Ordering {
    for (x, y) in a.exps.iter().zip(&b.exps).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

/// How the monomial order extends to free modules.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ModuleOrder {
    /// Component first (lower index larger), then the monomial.
    #[default]
    PositionOverTerm,
    /// Monomial first, then component (lower index larger).
    TermOverPosition,
}

impl ModuleOrder {
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "pot" | "position-over-term" => Ok(ModuleOrder::PositionOverTerm),
            "top" | "term-over-position" => Ok(ModuleOrder::TermOverPosition),
            other => Err(validation(format!("unknown module order `{other}`"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u16]) -> Mono {
        Mono::from_exps(e, &vec![1; e.len()])
    }

    #[test]
    fn grevlex_prefers_small_last_exponent() {
        let o = MonomialOrder::Grevlex;
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[1, 0, 1])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[2, 0, 0]), &m(&[0, 2, 0])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 0, 2])), Ordering::Less);
    }

    #[test]
    fn lex_compares_first_variable() {
        let o = MonomialOrder::Lex;
        assert_eq!(o.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
    }

    #[test]
    fn division_and_lcm() {
        let a = m(&[2, 1, 0]);
        let b = m(&[1, 1, 0]);
        assert_eq!(a.div(&b), Some(m(&[1, 0, 0])));
        assert_eq!(b.div(&a), None);
        assert_eq!(a.lcm(&m(&[0, 3, 1]), &[1, 1, 1]), m(&[2, 3, 1]));
    }
}
