//! Sparse multivariate polynomials over an exact field.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

pub const DEFAULT_MONOMIAL_CAP: usize = 5_000_000;

pub type Monomial = Vec<u16>;

/// A polynomial in `nvars` variables. Zero coefficients are never stored, so
/// the zero polynomial is exactly the empty map.
#[derive(Clone)]
pub struct MultiPoly<F: Field> {
    field: F,
    nvars: usize,
    terms: HashMap<Monomial, F::Elem>,
}

impl<F: Field> PartialEq for MultiPoly<F> {
    fn eq(&self, other: &Self) -> bool {
        self.nvars == other.nvars && self.terms == other.terms
    }
}

impl<F: Field> Eq for MultiPoly<F> {}

impl<F: Field> fmt::Debug for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Graded lexicographic order: total degree first, then exponents left to right.
fn grlex(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(field: &F, nvars: usize) -> Self {
        MultiPoly {
            field: field.clone(),
            nvars,
            terms: HashMap::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        let mut p = Self::zero(field, nvars);
        if !field.is_zero(&c) {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn variable(field: &F, nvars: usize, i: usize) -> Self {
        let mut p = Self::zero(field, nvars);
        let mut m = vec![0; nvars];
        m[i] = 1;
        p.terms.insert(m, field.one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_identically_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as u32).sum())
            .max()
    }

    pub fn coefficient(&self, monomial: &[u16]) -> F::Elem {
        self.terms
            .get(monomial)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Terms in graded lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &F::Elem)> {
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| grlex(a.0, b.0));
        terms
    }

    fn add_term(&mut self, m: Monomial, c: F::Elem) {
        if self.field.is_zero(&c) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                let s = self.field.add(e.get(), &c);
                if self.field.is_zero(&s) {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        Ok(big)
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.field.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        if self.field.is_zero(c) {
            return Self::zero(&self.field, self.nvars);
        }
        MultiPoly {
            field: self.field.clone(),
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), self.field.mul(a, c)))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let mut out = Self::zero(&self.field, self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, self.field.mul(ca, cb));
            }
        }
        Ok(out)
    }

    /// self += c * a * b, accumulating in place.
    pub fn add_scaled_product(&mut self, c: &F::Elem, a: &Self, b: &Self) {
        debug_assert!(a.nvars == self.nvars && b.nvars == self.nvars);
        if self.field.is_zero(c) {
            return;
        }
        for (ma, ca) in &a.terms {
            let cca = self.field.mul(c, ca);
            for (mb, cb) in &b.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                let v = self.field.mul(&cca, cb);
                self.add_term(m, v);
            }
        }
    }

    pub fn eval(&self, point: &[F::Elem]) -> Result<F::Elem> {
        if point.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m) {
                for _ in 0..e {
                    t = f.mul(&t, x);
                }
            }
            acc = f.add(&acc, &t);
        }
        Ok(acc)
    }

    /// Substitutes constants for some variables (`None` keeps the variable).
    pub fn partial_eval(&self, values: &[Option<F::Elem>]) -> Result<Self> {
        if values.len() != self.nvars {
            return Err(Error::ArityMismatch {
                expected: self.nvars,
                got: values.len(),
            });
        }
        let f = &self.field;
        let mut out = Self::zero(f, self.nvars);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            let mut mono = m.clone();
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    for _ in 0..m[i] {
                        t = f.mul(&t, v);
                    }
                    mono[i] = 0;
                }
            }
            out.add_term(mono, t);
        }
        Ok(out)
    }
}

pub fn poly_add<F: Field>(p: &MultiPoly<F>, q: &MultiPoly<F>) -> Result<MultiPoly<F>> {
    p.add(q)
}

pub fn poly_mul<F: Field>(p: &MultiPoly<F>, q: &MultiPoly<F>) -> Result<MultiPoly<F>> {
    p.mul(q)
}

pub fn poly_eval<F: Field>(p: &MultiPoly<F>, point: &[F::Elem]) -> Result<F::Elem> {
    p.eval(point)
}

pub fn is_identically_zero<F: Field>(p: &MultiPoly<F>) -> bool {
    p.is_identically_zero()
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        format!("x{}", v + 1)
                    } else {
                        format!("x{}^{}", v + 1, e)
                    }
                })
                .collect();
            let coeff = self.field.format(c);
            if mono.is_empty() {
                write!(f, "{coeff}")?;
            } else if self.field.is_one(c) {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({coeff})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FiniteField, Rationals};

    fn var(i: usize) -> MultiPoly<Rationals> {
        MultiPoly::variable(&Rationals, 2, i)
    }

    #[test]
    fn difference_of_squares() {
        let x1 = var(0);
        let x2 = var(1);
        let p = x1.add(&x2).unwrap().mul(&x1.sub(&x2).unwrap()).unwrap();
        let expected = x1.mul(&x1).unwrap().sub(&x2.mul(&x2).unwrap()).unwrap();
        assert_eq!(p, expected);
        let v = p
            .eval(&[Rationals.from_i64(3), Rationals.from_i64(2)])
            .unwrap();
        assert_eq!(v, Rationals.from_i64(5));
        assert_eq!(p.total_degree(), Some(2));
        assert_eq!(p.to_string(), "x1^2 + (-1)*x2^2");
    }

    #[test]
    fn cancellation_and_scalars() {
        let x1 = var(0);
        assert!(x1.add(&x1.neg()).unwrap().is_identically_zero());
        let x2 = var(1);
        let comm = x1.mul(&x2).unwrap().sub(&x2.mul(&x1).unwrap()).unwrap();
        assert!(is_identically_zero(&comm));
        let half = MultiPoly::constant(&Rationals, 2, Rationals.parse("1/2").unwrap());
        let two_x1 = x1.scale(&Rationals.from_i64(2));
        assert_eq!(half.mul(&two_x1).unwrap(), x1);
        let z = MultiPoly::zero(&Rationals, 2);
        assert_eq!(z.eval(&[Rationals.from_i64(7), Rationals.from_i64(-1)]).unwrap(), Rationals.zero());
    }

    #[test]
    fn arity_mismatch() {
        let a = MultiPoly::variable(&Rationals, 2, 0);
        let b = MultiPoly::variable(&Rationals, 3, 0);
        assert!(matches!(a.add(&b), Err(Error::ArityMismatch { .. })));
        assert!(matches!(a.mul(&b), Err(Error::ArityMismatch { .. })));
        assert!(matches!(a.eval(&[]), Err(Error::ArityMismatch { .. })));
    }

    #[test]
    fn finite_field_vanishing_function_is_not_zero_poly() {
        // x^5 - x vanishes on GF(5) but is a nonzero polynomial
        let f = FiniteField::prime(5).unwrap();
        let x = MultiPoly::variable(&f, 1, 0);
        let mut x5 = x.clone();
        for _ in 0..4 {
            x5 = x5.mul(&x).unwrap();
        }
        let p = x5.sub(&x).unwrap();
        assert!(!p.is_identically_zero());
        assert!((0..5).all(|a| p.eval(&[a]).unwrap() == 0));
    }

    #[test]
    fn partial_evaluation() {
        let x1 = var(0);
        let x2 = var(1);
        let p = x1.mul(&x2).unwrap().add(&x2).unwrap();
        let q = p.partial_eval(&[Some(Rationals.from_i64(2)), None]).unwrap();
        assert_eq!(q, x2.scale(&Rationals.from_i64(3)));
    }
}
