//! Exact coefficient fields: prime fields GF(p) and the rationals.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{validation, Result};

/// Description of a coefficient field, independent of its arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Prime(u64),
    Rationals,
}

impl FieldSpec {
    pub const DEFAULT_PRIME: u64 = 32003;

    /// Parses `gf(p)`, `GF(p)`, a bare prime, `qq` or `rationals`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim().to_ascii_lowercase();
        if t == "qq" || t == "q" || t == "rationals" {
            return Ok(FieldSpec::Rationals);
        }
        let inner = t.strip_prefix("gf(").and_then(|s| s.strip_suffix(')')).unwrap_or(&t);
        let p: u64 = inner
            .trim()
            .parse()
            .map_err(|_| validation(format!("bad field spec `{text}`: expected gf(p) or qq")))?;
        FieldSpec::prime(p)
    }

    pub fn prime(p: u64) -> Result<Self> {
        if !(2..(1 << 31)).contains(&p) || !is_prime(p) {
            return Err(validation(format!("bad field spec: {p} is not a prime below 2^31")));
        }
        Ok(FieldSpec::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Prime(p) => *p,
            FieldSpec::Rationals => 0,
        }
    }
}

impl std::fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Rationals => write!(f, "QQ"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Context object carrying field arithmetic. Elements are plain values.
pub trait Field: Clone + Debug + Send + Sync + 'static {
    type Elem: Clone + Debug + PartialEq + Eq + Hash + Send + Sync;

    fn spec(&self) -> FieldSpec;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn from_bigint(&self, v: &BigInt) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn render(&self, a: &Self::Elem) -> String;
    fn random<R: Rng>(&self, rng: &mut R) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn characteristic(&self) -> u64 {
        self.spec().characteristic()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    /// Renders with an explicit sign for use inside sums: returns (negative, |a|).
    fn render_signed(&self, a: &Self::Elem) -> (bool, String) {
        let s = self.render(a);
        match s.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, s),
        }
    }
}

/// GF(p) for a prime p < 2^31, elements stored reduced in `0..p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        FieldSpec::prime(p)?;
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField {
            p: FieldSpec::DEFAULT_PRIME,
        }
    }
}

impl Field for PrimeField {
    type Elem = u32;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Prime(self.p)
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn from_i64(&self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }
    fn from_bigint(&self, v: &BigInt) -> u32 {
        let m = BigInt::from(self.p);
        let r = ((v % &m) + &m) % &m;
        r.to_u32().expect("residue fits")
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        let s = *a as u64 + *b as u64;
        (if s >= self.p { s - self.p } else { s }) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        let (a, b) = (*a as u64, *b as u64);
        (if a >= b { a - b } else { a + self.p - b }) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        (*a as u64 * *b as u64 % self.p) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            (self.p - *a as u64) as u32
        }
    }
    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero in GF({})", self.p);
        self.pow(*a as u64, self.p - 2) as u32
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    /// Symmetric representative, so that -1 prints as `-1`.
    fn render(&self, a: &u32) -> String {
        let v = *a as u64;
        if v > self.p / 2 {
            format!("-{}", self.p - v)
        } else {
            v.to_string()
        }
    }
    fn random<R: Rng>(&self, rng: &mut R) -> u32 {
        rng.gen_range(0..self.p) as u32
    }
}

/// The rational numbers with arbitrary-precision arithmetic.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_bigint(&self, v: &BigInt) -> BigRational {
        BigRational::from_integer(v.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero in QQ");
        a.recip()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn render(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else if a.is_negative() {
            format!("-{}/{}", a.numer().abs(), a.denom())
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn random<R: Rng>(&self, rng: &mut R) -> BigRational {
        self.from_i64(rng.gen_range(-50..=50))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse_round_trips() {
        let f = PrimeField::default();
        for a in [1u32, 2, 17, 32002] {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
        assert_eq!(f.from_i64(-1), 32002);
        assert_eq!(f.render(&32002), "-1");
    }

    #[test]
    fn spec_parsing() {
        assert_eq!(FieldSpec::parse("gf(32003)").unwrap(), FieldSpec::Prime(32003));
        assert_eq!(FieldSpec::parse("QQ").unwrap(), FieldSpec::Rationals);
        assert!(FieldSpec::parse("gf(32004)").is_err());
    }

    #[test]
    fn rationals_render() {
        let q = Rationals;
        let half = q.div(&q.one(), &q.from_i64(-2));
        assert_eq!(q.render(&half), "-1/2");
    }
}
