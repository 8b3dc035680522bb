//! Exact scalar arithmetic over Q, GF(p) and GF(p^k).
//!
//! Every other module is generic over the [`Field`] trait. Rationals carry
//! arbitrary-precision numerators and denominators; finite fields store an
//! element as a `u32` whose base-`p` digits are the coefficients of its
//! polynomial-basis representation (little-endian).

use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest finite field we construct.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + fmt::Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    #[allow(clippy::wrong_self_convention)]
    fn from_i64(&self, n: i64) -> Self::Elem;

    /// 0 for Q.
    fn characteristic(&self) -> u64;
    /// Number of elements, `None` when infinite.
    fn size(&self) -> Option<u64>;
    /// All elements in index order (finite fields only).
    fn elements(&self) -> Option<Vec<Self::Elem>>;

    fn parse(&self, text: &str) -> Result<Self::Elem>;
    fn format(&self, a: &Self::Elem) -> String;
    fn spec(&self) -> FieldSpec;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// Serializable description of a field.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FieldSpec {
    Rationals,
    PrimeField {
        p: u32,
    },
    ExtensionField {
        p: u32,
        k: u32,
        /// k+1 coefficients, constant term first, leading coefficient 1.
        modulus: Vec<u32>,
    },
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField { p } => write!(f, "GF({p})"),
            FieldSpec::ExtensionField { p, k, .. } => write!(f, "GF({p}^{k})"),
        }
    }
}

/// A field chosen at runtime.
#[derive(Debug, Clone)]
pub enum AnyField {
    Rationals(Rationals),
    Finite(FiniteField),
}

impl AnyField {
    pub fn spec(&self) -> FieldSpec {
        match self {
            AnyField::Rationals(f) => f.spec(),
            AnyField::Finite(f) => f.spec(),
        }
    }
}

pub fn make_field(spec: &FieldSpec) -> Result<AnyField> {
    Ok(match spec {
        FieldSpec::Rationals => AnyField::Rationals(Rationals),
        FieldSpec::PrimeField { p } => AnyField::Finite(FiniteField::prime(*p)?),
        FieldSpec::ExtensionField { p, k, modulus } => {
            if modulus.len() != *k as usize + 1 {
                return Err(Error::ReducibleModulusPolynomial(modulus.clone(), *p));
            }
            AnyField::Finite(FiniteField::extension(*p, modulus)?)
        }
    })
}

// ---------------------------------------------------------------------------
// Rationals

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
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
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn size(&self) -> Option<u64> {
        None
    }
    fn elements(&self) -> Option<Vec<BigRational>> {
        None
    }

    fn parse(&self, text: &str) -> Result<BigRational> {
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let num = parse_signed_int(text, num)?;
        let den = match den {
            None => BigInt::one(),
            Some(d) => {
                if d.starts_with(['-', '+']) {
                    return Err(Error::syntax(text, "denominator must be unsigned"));
                }
                let d = parse_signed_int(text, d)?;
                if d.is_zero() {
                    return Err(Error::ValueOutOfField(text.to_string()));
                }
                d
            }
        };
        Ok(BigRational::new(num, den))
    }

    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }

    fn spec(&self) -> FieldSpec {
        FieldSpec::Rationals
    }
}

fn parse_signed_int(input: &str, s: &str) -> Result<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::syntax(input, "expected a decimal integer"));
    }
    s.parse::<BigInt>()
        .map_err(|e| Error::syntax(input, e.to_string()))
}

// ---------------------------------------------------------------------------
// Finite fields

/// GF(p^k) with p^k <= 2^16.
///
/// Multiplication for k > 1 goes through discrete log tables built from a
/// primitive element found by search; addition is digit-wise mod p.
#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    k: u32,
    q: u32,
    modulus: Arc<[u32]>,
    tables: Option<Arc<LogTables>>,
}

struct LogTables {
    /// exp[i] = g^i for i in 0..2(q-1)
    exp: Vec<u32>,
    /// log[a] for a != 0
    log: Vec<u32>,
}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec())
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FiniteField {
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrimeModulus(p as u64));
        }
        if p as u64 > MAX_FIELD_SIZE {
            return Err(Error::FieldTooLarge(p as u64));
        }
        Ok(FiniteField {
            p,
            k: 1,
            q: p,
            modulus: Arc::from(vec![0, 1]),
            tables: None,
        })
    }

    /// GF(p^k) where `modulus` lists the k+1 coefficients of a monic
    /// irreducible polynomial, constant term first.
    pub fn extension(p: u32, modulus: &[u32]) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrimeModulus(p as u64));
        }
        let k = modulus.len().saturating_sub(1) as u32;
        if k == 0 || modulus[k as usize] != 1 || modulus.iter().any(|&c| c >= p) {
            return Err(Error::ReducibleModulusPolynomial(modulus.to_vec(), p));
        }
        let size = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if size > MAX_FIELD_SIZE {
            return Err(Error::FieldTooLarge(size));
        }
        if !poly_is_irreducible(p, modulus) {
            return Err(Error::ReducibleModulusPolynomial(modulus.to_vec(), p));
        }
        if k == 1 {
            // a linear modulus gives back the prime field
            return Self::prime(p);
        }
        let q = size as u32;
        let mut field = FiniteField {
            p,
            k,
            q,
            modulus: Arc::from(modulus.to_vec()),
            tables: None,
        };
        field.tables = Some(Arc::new(field.build_tables()));
        Ok(field)
    }

    /// GF(p^k) using the lexicographically first monic irreducible modulus.
    pub fn with_order(p: u32, k: u32) -> Result<Self> {
        if k == 1 {
            return Self::prime(p);
        }
        if !is_prime(p as u64) {
            return Err(Error::NonPrimeModulus(p as u64));
        }
        let size = (p as u64).checked_pow(k).unwrap_or(u64::MAX);
        if size > MAX_FIELD_SIZE {
            return Err(Error::FieldTooLarge(size));
        }
        for low in 0..size {
            let mut m = digits(low as u32, p, k);
            m.push(1);
            if poly_is_irreducible(p, &m) {
                return Self::extension(p, &m);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The class of t (the polynomial variable); for prime fields this is 0.
    pub fn generator_t(&self) -> u32 {
        if self.k == 1 {
            0
        } else {
            self.p
        }
    }

    pub fn coefficients(&self, a: u32) -> Vec<u32> {
        digits(a, self.p, self.k)
    }

    pub fn from_coefficients(&self, coeffs: &[u32]) -> u32 {
        coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| acc * self.p + (c % self.p))
    }

    /// a^e by square and multiply.
    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn add_raw(&self, a: u32, b: u32) -> u32 {
        if self.k == 1 {
            let s = a + b;
            if s >= self.p {
                s - self.p
            } else {
                s
            }
        } else if self.p == 2 {
            a ^ b
        } else {
            let (mut a, mut b) = (a, b);
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.k {
                let d = (a % self.p + b % self.p) % self.p;
                out += d * place;
                place *= self.p;
                a /= self.p;
                b /= self.p;
            }
            out
        }
    }

    fn neg_raw(&self, a: u32) -> u32 {
        if self.k == 1 {
            if a == 0 {
                0
            } else {
                self.p - a
            }
        } else if self.p == 2 {
            a
        } else {
            let mut a = a;
            let mut out = 0;
            let mut place = 1;
            for _ in 0..self.k {
                let d = (self.p - a % self.p) % self.p;
                out += d * place;
                place *= self.p;
                a /= self.p;
            }
            out
        }
    }

    /// Schoolbook product reduced by the modulus; used to build the tables.
    fn mul_poly(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        let k = self.k as usize;
        let da = digits(a, self.p, self.k);
        let db = digits(b, self.p, self.k);
        let mut prod = vec![0u64; 2 * k];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for deg in (k..2 * k).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for (i, &m) in self.modulus[..k].iter().enumerate() {
                let idx = deg - k + i;
                prod[idx] = (prod[idx] + (p - c) * m as u64) % p;
            }
            prod[deg] = 0;
        }
        let low: Vec<u32> = prod[..k].iter().map(|&c| c as u32).collect();
        self.from_coefficients(&low)
    }

    fn build_tables(&self) -> LogTables {
        let q = self.q;
        let order = q - 1;
        let factors = prime_factors(order as u64);
        let g = (2..q)
            .chain(std::iter::once(1))
            .find(|&g| {
                factors.iter().all(|&f| {
                    let mut acc = 1;
                    for _ in 0..(order as u64 / f) {
                        acc = self.mul_poly(acc, g);
                    }
                    acc != 1
                })
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut acc = 1u32;
        for i in 0..order {
            exp[i as usize] = acc;
            log[acc as usize] = i;
            acc = self.mul_poly(acc, g);
        }
        for i in order..2 * order {
            exp[i as usize] = exp[(i - order) as usize];
        }
        LogTables { exp, log }
    }
}

fn digits(mut a: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(a % p);
        a /= p;
    }
    out
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Remainder of `a` modulo the monic polynomial `m` over GF(p).
fn poly_rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let p = p as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = r.pop().unwrap();
        if lead != 0 {
            let shift = r.len() - dm;
            for (i, &c) in m[..dm].iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - lead) * c as u64 % p) % p;
            }
        }
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Exhaustive trial division by every monic polynomial of degree <= k/2.
pub fn poly_is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let k = modulus.len() - 1;
    if k == 0 || modulus[k] != 1 {
        return false;
    }
    for deg in 1..=k / 2 {
        let count = (p as u64).pow(deg as u32);
        for low in 0..count {
            let mut divisor = digits(low as u32, p, deg as u32);
            divisor.push(1);
            if poly_rem(p, modulus, &divisor).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl Field for FiniteField {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.add_raw(*a, *b)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add_raw(*a, self.neg_raw(*b))
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        match &self.tables {
            None => ((*a as u64 * *b as u64) % self.p as u64) as u32,
            Some(t) => {
                if *a == 0 || *b == 0 {
                    0
                } else {
                    t.exp[(t.log[*a as usize] + t.log[*b as usize]) as usize]
                }
            }
        }
    }
    fn neg(&self, a: &u32) -> u32 {
        self.neg_raw(*a)
    }
    fn inv(&self, a: &u32) -> Result<u32> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(match &self.tables {
            None => self.pow(*a, self.p as u64 - 2),
            Some(t) => {
                let order = self.q - 1;
                t.exp[((order - t.log[*a as usize]) % order) as usize]
            }
        })
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn from_i64(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }
    fn characteristic(&self) -> u64 {
        self.p as u64
    }
    fn size(&self) -> Option<u64> {
        Some(self.q as u64)
    }
    fn elements(&self) -> Option<Vec<u32>> {
        Some((0..self.q).collect())
    }

    fn parse(&self, text: &str) -> Result<u32> {
        let t = text.trim();
        if self.k == 1 {
            if t.contains('/') || t.starts_with('[') {
                return Err(Error::ValueOutOfField(text.to_string()));
            }
            let n = parse_signed_int(text, t)?;
            let r = n.mod_floor_u32(self.p);
            return Ok(r);
        }
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::syntax(text, "expected [c0,c1,...]"))?;
        let coeffs = inner
            .split(',')
            .map(|c| parse_signed_int(text, c.trim()).map(|n| n.mod_floor_u32(self.p)))
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != self.k as usize {
            return Err(Error::ValueOutOfField(text.to_string()));
        }
        Ok(self.from_coefficients(&coeffs))
    }

    fn format(&self, a: &u32) -> String {
        if self.k == 1 {
            a.to_string()
        } else {
            let cs: Vec<String> = self.coefficients(*a).iter().map(u32::to_string).collect();
            format!("[{}]", cs.join(","))
        }
    }

    fn spec(&self) -> FieldSpec {
        if self.k == 1 {
            FieldSpec::PrimeField { p: self.p }
        } else {
            FieldSpec::ExtensionField {
                p: self.p,
                k: self.k,
                modulus: self.modulus.to_vec(),
            }
        }
    }
}

trait ModFloorU32 {
    fn mod_floor_u32(&self, p: u32) -> u32;
}

impl ModFloorU32 for BigInt {
    fn mod_floor_u32(&self, p: u32) -> u32 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        r.to_u32().expect("residue fits")
    }
}

/// Integer-valued rationals as i64, when they fit.
pub fn rational_to_i64(a: &BigRational) -> Option<i64> {
    if a.is_integer() {
        a.numer().to_i64()
    } else {
        None
    }
}

/// Bit size of numerator plus denominator; a crude height used to stop runaway iterations.
pub fn rational_height(a: &BigRational) -> u64 {
    a.numer().abs().bits() + a.denom().bits()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn make_field_kinds() {
        let f = make_field(&FieldSpec::Rationals).unwrap();
        assert!(matches!(f, AnyField::Rationals(_)));
        let AnyField::Finite(f5) = make_field(&FieldSpec::PrimeField { p: 5 }).unwrap() else {
            panic!()
        };
        assert_eq!(f5.size(), Some(5));
        let AnyField::Finite(f8) = make_field(&FieldSpec::ExtensionField {
            p: 2,
            k: 3,
            modulus: vec![1, 1, 0, 1],
        })
        .unwrap() else {
            panic!()
        };
        assert_eq!(f8.size(), Some(8));
        assert_eq!(f8.characteristic(), 2);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FiniteField::prime(6).unwrap_err(), Error::NonPrimeModulus(6));
        // t^2 + 1 = (t+1)^2 over GF(2)
        assert!(matches!(
            FiniteField::extension(2, &[1, 0, 1]),
            Err(Error::ReducibleModulusPolynomial(..))
        ));
        // t^2 + 1 is irreducible over GF(3)
        assert!(FiniteField::extension(3, &[1, 0, 1]).is_ok());
        assert!(matches!(
            FiniteField::with_order(2, 17),
            Err(Error::FieldTooLarge(_))
        ));
    }

    #[test]
    fn inverses() {
        assert_eq!(Rationals.inv(&q(2, 3)).unwrap(), q(3, 2));
        let f7 = FiniteField::prime(7).unwrap();
        assert_eq!(f7.inv(&3).unwrap(), 5);
        let f8 = FiniteField::extension(2, &[1, 1, 0, 1]).unwrap();
        let t = f8.generator_t();
        let t2_plus_1 = f8.from_coefficients(&[1, 0, 1]);
        assert_eq!(f8.inv(&t).unwrap(), t2_plus_1);
        assert_eq!(Rationals.inv(&q(0, 1)), Err(Error::DivisionByZero));
        assert_eq!(f7.inv(&0), Err(Error::DivisionByZero));
    }

    #[test]
    fn parsing() {
        assert_eq!(Rationals.parse("-7/2").unwrap(), q(-7, 2));
        assert_eq!(Rationals.parse("4/6").unwrap(), q(2, 3));
        assert!(matches!(Rationals.parse("1/-2"), Err(Error::SyntaxError { .. })));
        assert!(matches!(Rationals.parse("1/0"), Err(Error::ValueOutOfField(_))));
        assert!(matches!(Rationals.parse("x"), Err(Error::SyntaxError { .. })));
        let f5 = FiniteField::prime(5).unwrap();
        assert_eq!(f5.parse("9").unwrap(), 4);
        assert_eq!(f5.parse("-1").unwrap(), 4);
        assert!(matches!(f5.parse("1/2"), Err(Error::ValueOutOfField(_))));
        let f8 = FiniteField::extension(2, &[1, 1, 0, 1]).unwrap();
        assert_eq!(f8.parse("[1,1,0]").unwrap(), f8.add(&1, &f8.generator_t()));
        assert!(matches!(f8.parse("[1,1]"), Err(Error::ValueOutOfField(_))));
        assert!(matches!(f8.parse("3"), Err(Error::SyntaxError { .. })));
        assert_eq!(f8.format(&f8.parse("[0,1,1]").unwrap()), "[0,1,1]");
    }

    #[test]
    fn extension_characteristic_three() {
        let f9 = FiniteField::with_order(3, 2).unwrap();
        assert_eq!(f9.order(), 9);
        for a in 1..9 {
            assert_eq!(f9.mul(&a, &f9.inv(&a).unwrap()), 1);
            assert_eq!(f9.add(&a, &f9.neg(&a)), 0);
            // Frobenius fixes exactly the prime field
            let frob = f9.pow(a, 3);
            assert_eq!(frob == a, a < 3);
        }
    }
}
