//! Finite-dimensional Lie algebras given by structure constants.
//!
//! Radicals are computed only in characteristic 0:
//! - the solvable radical is the Killing-orthogonal complement of [L,L];
//! - the nilradical is `{x in R : tr(ad x . a) = 0 for all a in A}` where `A`
//!   is the associative algebra generated by `ad R`. By Lie's theorem `ad R`
//!   is simultaneously triangularizable, so the trace condition says exactly
//!   that the eigenvalues of `ad x` vanish.
//!
//! Both results are self-checked after computation.
//!
//! Engel tests come in five kinds (`e`, `v`, `w`, strict, total). Over Q the
//! positive verdicts are certified symbolically (coordinates are polynomials in
//! the coordinates of x) and negative verdicts carry a concrete witness found
//! on an integer grid scanned in graded order. Over finite fields everything is
//! decided by exhaustive enumeration.

use std::collections::HashSet;

use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::field::{rational_height, Field, Rationals};
use crate::linalg::{self, Row, Subspace};
use crate::poly::{MultiPoly, DEFAULT_MONOMIAL_CAP};
use crate::report::{Report, Verdict};
use crate::words::{BracketOps, SequenceId, SequenceKind, SequenceSpec};

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// Coordinates relative to the basis of an algebra.
pub type LieVector<F> = Vec<<F as Field>::Elem>;

#[derive(Clone, Debug)]
pub struct LieAlgebra<F: Field> {
    field: F,
    dim: usize,
    names: Vec<String>,
    /// c[i][j][k]: coefficient of b_k in [b_i, b_j]
    table: Vec<Vec<Vec<F::Elem>>>,
    /// nonzero entries (i, j, k, c) for the bilinear extension
    sparse: Vec<(usize, usize, usize, F::Elem)>,
    /// ad(b_i) as d x d matrices; column j is [b_i, b_j]
    ad_basis: Vec<Vec<Row<F>>>,
}

impl<F: Field> PartialEq for LieAlgebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field.spec() == other.field.spec()
            && self.names == other.names
            && self.table == other.table
    }
}

pub fn make_algebra<F: Field>(field: &F, tensor: Vec<Vec<Vec<F::Elem>>>, names: Vec<String>) -> Result<LieAlgebra<F>> {
    LieAlgebra::new(field, tensor, names)
}

impl<F: Field> LieAlgebra<F> {
    pub fn new(field: &F, tensor: Vec<Vec<Vec<F::Elem>>>, names: Vec<String>) -> Result<Self> {
        let d = tensor.len();
        if names.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: names.len(),
            });
        }
        for row in &tensor {
            if row.len() != d || row.iter().any(|c| c.len() != d) {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: row.len(),
                });
            }
        }
        for i in 0..d {
            for j in i..d {
                for k in 0..d {
                    let s = field.add(&tensor[i][j][k], &tensor[j][i][k]);
                    if !field.is_zero(&s) {
                        return Err(Error::AntisymmetryViolation(i, j));
                    }
                }
            }
        }
        let mut sparse = Vec::new();
        for (i, row) in tensor.iter().enumerate() {
            for (j, coeffs) in row.iter().enumerate() {
                for (k, c) in coeffs.iter().enumerate() {
                    if !field.is_zero(c) {
                        sparse.push((i, j, k, c.clone()));
                    }
                }
            }
        }
        let ad_basis = (0..d)
            .map(|i| {
                (0..d)
                    .map(|k| (0..d).map(|j| tensor[i][j][k].clone()).collect())
                    .collect()
            })
            .collect();
        let alg = LieAlgebra {
            field: field.clone(),
            dim: d,
            names,
            table: tensor,
            sparse,
            ad_basis,
        };
        alg.check_jacobi()?;
        Ok(alg)
    }

    fn check_jacobi(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            for j in i + 1..d {
                for k in j + 1..d {
                    let (bi, bj, bk) = (self.basis_vector(i), self.basis_vector(j), self.basis_vector(k));
                    let a = self.bracket(&bi, &self.bracket(&bj, &bk));
                    let b = self.bracket(&bj, &self.bracket(&bk, &bi));
                    let c = self.bracket(&bk, &self.bracket(&bi, &bj));
                    let s = self.add(&self.add(&a, &b), &c);
                    if !self.is_zero_vector(&s) {
                        return Err(Error::JacobiViolation(i, j, k));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn table(&self) -> &[Vec<Vec<F::Elem>>] {
        &self.table
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &F::Elem {
        &self.table[i][j][k]
    }

    pub fn zero_vector(&self) -> LieVector<F> {
        vec![self.field.zero(); self.dim]
    }

    pub fn basis_vector(&self, i: usize) -> LieVector<F> {
        let mut v = self.zero_vector();
        v[i] = self.field.one();
        v
    }

    pub fn basis_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_zero_vector(&self, v: &[F::Elem]) -> bool {
        v.iter().all(|x| self.field.is_zero(x))
    }

    pub fn add(&self, a: &[F::Elem], b: &[F::Elem]) -> LieVector<F> {
        a.iter().zip(b).map(|(x, y)| self.field.add(x, y)).collect()
    }

    pub fn scale(&self, c: &F::Elem, a: &[F::Elem]) -> LieVector<F> {
        a.iter().map(|x| self.field.mul(c, x)).collect()
    }

    pub fn bracket(&self, u: &[F::Elem], v: &[F::Elem]) -> LieVector<F> {
        let f = &self.field;
        let mut out = self.zero_vector();
        for (i, j, k, c) in &self.sparse {
            let (a, b) = (&u[*i], &v[*j]);
            if f.is_zero(a) || f.is_zero(b) {
                continue;
            }
            out[*k] = f.add(&out[*k], &f.mul(c, &f.mul(a, b)));
        }
        out
    }

    /// Matrix of ad(v) (column j = [v, b_j]).
    pub fn ad(&self, v: &[F::Elem]) -> Vec<Row<F>> {
        let f = &self.field;
        let mut m = vec![self.zero_vector(); self.dim];
        for (i, c) in v.iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            for (mrow, arow) in m.iter_mut().zip(&self.ad_basis[i]) {
                for (x, a) in mrow.iter_mut().zip(arow) {
                    if !f.is_zero(a) {
                        *x = f.add(x, &f.mul(c, a));
                    }
                }
            }
        }
        m
    }

    /// Least n >= 1 with (ad v)^n = 0, or `None` if ad v is not nilpotent.
    pub fn ad_nilpotency_index(&self, v: &[F::Elem]) -> Option<usize> {
        let a = self.ad(v);
        let mut p = a.clone();
        for n in 1..=self.dim.max(1) {
            if linalg::is_zero_matrix(&self.field, &p) {
                return Some(n);
            }
            p = linalg::mat_mul(&self.field, &p, &a);
        }
        None
    }

    pub fn is_ad_nilpotent(&self, v: &[F::Elem]) -> bool {
        self.ad_nilpotency_index(v).is_some()
    }

    pub fn span(&self, vectors: impl IntoIterator<Item = LieVector<F>>) -> Subspace<F> {
        Subspace::span(&self.field, self.dim, vectors)
    }

    pub fn whole(&self) -> Subspace<F> {
        Subspace::full(&self.field, self.dim)
    }

    /// span{[a, b] : a in A, b in B}
    pub fn bracket_spaces(&self, a: &Subspace<F>, b: &Subspace<F>) -> Subspace<F> {
        let vecs: Vec<_> = a
            .basis()
            .iter()
            .flat_map(|u| b.basis().iter().map(move |v| (u, v)))
            .map(|(u, v)| self.bracket(u, v))
            .collect();
        self.span(vecs)
    }

    pub fn is_subalgebra(&self, s: &Subspace<F>) -> bool {
        s.contains_subspace(&self.field, &self.bracket_spaces(s, s))
    }

    pub fn is_ideal(&self, s: &Subspace<F>) -> bool {
        s.contains_subspace(&self.field, &self.bracket_spaces(&self.whole(), s))
    }

    pub fn series(&self, kind: SeriesKind, within: Option<&Subspace<F>>) -> Result<Vec<Subspace<F>>> {
        let start = match within {
            Some(s) => {
                if !self.is_subalgebra(s) {
                    return Err(Error::NotASubalgebra);
                }
                s.clone()
            }
            None => self.whole(),
        };
        let mut chain = vec![start.clone()];
        loop {
            let last = chain.last().expect("nonempty");
            if last.is_zero() {
                break;
            }
            let next = match kind {
                SeriesKind::Derived => self.bracket_spaces(last, last),
                SeriesKind::LowerCentral => self.bracket_spaces(&start, last),
            };
            let repeated = next == *last;
            chain.push(next);
            if repeated {
                break;
            }
        }
        Ok(chain)
    }

    pub fn is_solvable_subalgebra(&self, s: &Subspace<F>) -> Result<bool> {
        Ok(self
            .series(SeriesKind::Derived, Some(s))?
            .last()
            .is_some_and(Subspace::is_zero))
    }

    pub fn is_nilpotent_subalgebra(&self, s: &Subspace<F>) -> Result<bool> {
        Ok(self
            .series(SeriesKind::LowerCentral, Some(s))?
            .last()
            .is_some_and(Subspace::is_zero))
    }

    pub fn is_solvable(&self) -> bool {
        self.is_solvable_subalgebra(&self.whole()).expect("L is a subalgebra")
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_nilpotent_subalgebra(&self.whole()).expect("L is a subalgebra")
    }

    pub fn is_perfect(&self) -> bool {
        self.bracket_spaces(&self.whole(), &self.whole()).dim() == self.dim
    }

    /// Number of nonzero terms in the derived series of a solvable subalgebra.
    pub fn derived_length(&self, s: &Subspace<F>) -> Result<Option<usize>> {
        let chain = self.series(SeriesKind::Derived, Some(s))?;
        Ok(chain
            .last()
            .is_some_and(Subspace::is_zero)
            .then(|| chain.len() - 1))
    }

    pub fn killing_matrix(&self) -> Vec<Row<F>> {
        let d = self.dim;
        let mut k = vec![self.zero_vector(); d];
        for i in 0..d {
            for j in i..d {
                let prod = linalg::mat_mul(&self.field, &self.ad_basis[i], &self.ad_basis[j]);
                let t = linalg::trace(&self.field, &prod);
                k[i][j] = t.clone();
                k[j][i] = t;
            }
        }
        k
    }

    pub fn killing_form(&self, u: &[F::Elem], v: &[F::Elem]) -> F::Elem {
        let prod = linalg::mat_mul(&self.field, &self.ad(u), &self.ad(v));
        linalg::trace(&self.field, &prod)
    }

    /// Structure constants of L/I on the complement spanned by the non-pivot
    /// basis vectors.
    pub fn quotient(&self, ideal: &Subspace<F>) -> Result<LieAlgebra<F>> {
        if !self.is_ideal(ideal) {
            return Err(Error::NotASubalgebra);
        }
        let f = &self.field;
        let pivots: Vec<usize> = ideal
            .basis()
            .iter()
            .map(|row| row.iter().position(|x| !f.is_zero(x)).expect("nonzero row"))
            .collect();
        let keep: Vec<usize> = (0..self.dim).filter(|i| !pivots.contains(i)).collect();
        let q = keep.len();
        let mut tensor = vec![vec![vec![f.zero(); q]; q]; q];
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                let v = ideal.reduce(f, &self.table[i][j]);
                for (c, &k) in keep.iter().enumerate() {
                    tensor[a][b][c] = v[k].clone();
                }
            }
        }
        let names = keep.iter().map(|&i| self.names[i].clone()).collect();
        LieAlgebra::new(f, tensor, names)
    }

    pub fn direct_sum(&self, other: &LieAlgebra<F>) -> Result<LieAlgebra<F>> {
        let f = &self.field;
        let (d1, d2) = (self.dim, other.dim);
        let d = d1 + d2;
        let mut tensor = vec![vec![vec![f.zero(); d]; d]; d];
        for i in 0..d1 {
            for j in 0..d1 {
                for k in 0..d1 {
                    tensor[i][j][k] = self.table[i][j][k].clone();
                }
            }
        }
        for i in 0..d2 {
            for j in 0..d2 {
                for k in 0..d2 {
                    tensor[d1 + i][d1 + j][d1 + k] = other.table[i][j][k].clone();
                }
            }
        }
        let mut names = self.names.clone();
        for n in &other.names {
            names.push(if self.names.contains(n) {
                format!("{n}'")
            } else {
                n.clone()
            });
        }
        LieAlgebra::new(f, tensor, names)
    }

    /// Least subspace containing y and closed under ad of every basis element.
    pub fn ideal_generated(&self, y: &[F::Elem]) -> Subspace<F> {
        let mut space = self.span([y.to_vec()]);
        loop {
            let mut vecs: Vec<LieVector<F>> = space.basis().to_vec();
            for b in 0..self.dim {
                let bv = self.basis_vector(b);
                for v in space.basis() {
                    vecs.push(self.bracket(&bv, v));
                }
            }
            let next = self.span(vecs);
            if next.dim() == space.dim() {
                return space;
            }
            space = next;
        }
    }

    pub fn format_vector(&self, v: &[F::Elem]) -> String {
        let f = &self.field;
        let terms: Vec<String> = v
            .iter()
            .zip(&self.names)
            .filter(|(c, _)| !f.is_zero(c))
            .map(|(c, n)| {
                if f.is_one(c) {
                    n.clone()
                } else {
                    format!("({})*{}", f.format(c), n)
                }
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    pub fn vector_json(&self, v: &[F::Elem]) -> serde_json::Value {
        json!({
            "coords": v.iter().map(|c| self.field.format(c)).collect::<Vec<_>>(),
            "expr": self.format_vector(v),
        })
    }

    /// Parses either a coordinate list `[c0, c1, ...]` / `c0,c1,...` or a
    /// basis-name combination such as `e+e_2` or `2*h - e_+`.
    pub fn parse_vector(&self, text: &str) -> Result<LieVector<F>> {
        let t = text.trim();
        let looks_like_coords = t.starts_with('[') && !self.names.iter().any(|n| n.starts_with('['));
        if looks_like_coords {
            let inner = &t[1..t.len().saturating_sub(1)];
            let parts = split_top_level(inner);
            if parts.len() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    got: parts.len(),
                });
            }
            return parts.iter().map(|p| self.field.parse(p)).collect();
        }
        if t == "0" {
            return Ok(self.zero_vector());
        }
        let mut v = self.zero_vector();
        for (sign, term) in split_signed_terms(t) {
            let term = term.trim();
            let (coeff, name) = match term.rsplit_once('*') {
                Some((c, n)) => (self.field.parse(c.trim_matches(|ch| ch == '(' || ch == ')'))?, n.trim()),
                None => (self.field.one(), term),
            };
            let idx = self
                .basis_index(name)
                .ok_or_else(|| Error::syntax(text, format!("unknown basis element {name:?}")))?;
            let coeff = if sign < 0 { self.field.neg(&coeff) } else { coeff };
            v[idx] = self.field.add(&v[idx], &coeff);
        }
        Ok(v)
    }
}

fn split_top_level(s: &str) -> Vec<String> {
    let mut parts = Vec::new();
    let mut depth = 0;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '[' => {
                depth += 1;
                cur.push(ch);
            }
            ']' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => {
                parts.push(cur.trim().to_string());
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        parts.push(cur.trim().to_string());
    }
    parts
}

/// Splits `a + b - c` at top-level signs that follow a complete term; basis
/// names may themselves contain `+`/`-` (as in `e_+`), so a sign directly
/// after `_` is part of the name.
fn split_signed_terms(s: &str) -> Vec<(i32, String)> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut sign = 1;
    let mut cur = String::new();
    let mut depth = 0;
    for (i, &ch) in chars.iter().enumerate() {
        let prev = if i > 0 { Some(chars[i - 1]) } else { None };
        let is_sep = (ch == '+' || ch == '-')
            && depth == 0
            && prev != Some('_')
            && prev != Some('*')
            && prev != Some('(');
        if is_sep {
            if !cur.trim().is_empty() {
                out.push((sign, cur.trim().to_string()));
                cur.clear();
                sign = 1;
            }
            if ch == '-' {
                sign = -sign;
            }
            continue;
        }
        if ch == '(' {
            depth += 1;
        }
        if ch == ')' {
            depth -= 1;
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() {
        out.push((sign, cur.trim().to_string()));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    Derived,
    LowerCentral,
}

impl<F: Field> BracketOps for LieAlgebra<F> {
    type Elem = LieVector<F>;
    fn bracket(&self, a: &LieVector<F>, b: &LieVector<F>) -> LieVector<F> {
        LieAlgebra::bracket(self, a, b)
    }
}

// ---------------------------------------------------------------------------
// Radicals (characteristic 0)

fn require_char_zero<F: Field>(f: &F) -> Result<()> {
    match f.characteristic() {
        0 => Ok(()),
        p => Err(Error::UnsupportedCharacteristic(p)),
    }
}

pub fn solvable_radical<F: Field>(l: &LieAlgebra<F>) -> Result<Subspace<F>> {
    require_char_zero(l.field())?;
    let f = l.field();
    let derived = l.bracket_spaces(&l.whole(), &l.whole());
    let killing = l.killing_matrix();
    // rows: K * d for each basis vector d of [L,L]; R = kernel
    let constraints: Vec<Row<F>> = derived
        .basis()
        .iter()
        .map(|dv| linalg::mat_vec(f, &killing, dv))
        .collect();
    let radical = if constraints.is_empty() {
        l.whole()
    } else {
        l.span(linalg::kernel(f, &constraints, l.dim()))
    };
    debug_assert!(l.is_ideal(&radical));
    Ok(radical)
}

/// Post-hoc checks for a solvable radical: ideal, solvable, and L/R has a
/// nondegenerate Killing form.
pub fn verify_solvable_radical<F: Field>(l: &LieAlgebra<F>, r: &Subspace<F>) -> Result<bool> {
    if !l.is_ideal(r) || !l.is_solvable_subalgebra(r)? {
        return Ok(false);
    }
    let q = l.quotient(r)?;
    let mut k = q.killing_matrix();
    let rank = linalg::rref(q.field(), &mut k).len();
    Ok(rank == q.dim())
}

pub fn nilradical<F: Field>(l: &LieAlgebra<F>) -> Result<Subspace<F>> {
    let f = l.field();
    let r = solvable_radical(l)?;
    if r.is_zero() {
        return Ok(r);
    }
    let d = l.dim();
    let flat = |m: &Vec<Row<F>>| -> Row<F> { m.iter().flatten().cloned().collect() };
    let unflat = |v: &Row<F>| -> Vec<Row<F>> { v.chunks(d).map(|c| c.to_vec()).collect() };

    // associative closure of ad R inside End(L)
    let gens: Vec<Vec<Row<F>>> = r.basis().iter().map(|v| l.ad(v)).collect();
    let mut algebra = Subspace::span(f, d * d, gens.iter().map(&flat));
    loop {
        let mut vecs: Vec<Row<F>> = algebra.basis().to_vec();
        for a in algebra.basis() {
            let am = unflat(a);
            for g in &gens {
                vecs.push(flat(&linalg::mat_mul(f, &am, g)));
            }
        }
        let next = Subspace::span(f, d * d, vecs);
        if next.dim() == algebra.dim() {
            break;
        }
        algebra = next;
    }

    // x = sum c_i r_i ; constraint rows indexed by basis elements a of A:
    // sum_i c_i tr(ad r_i . a) = 0
    let alg_mats: Vec<Vec<Row<F>>> = algebra.basis().iter().map(unflat).collect();
    let constraints: Vec<Row<F>> = alg_mats
        .iter()
        .map(|a| {
            gens.iter()
                .map(|g| linalg::trace(f, &linalg::mat_mul(f, g, a)))
                .collect()
        })
        .collect();
    let ker = linalg::kernel(f, &constraints, r.dim());
    let n = l.span(ker.iter().map(|c| r.combine(f, c)));
    Ok(n)
}

pub fn verify_nilradical<F: Field>(l: &LieAlgebra<F>, n: &Subspace<F>) -> Result<bool> {
    Ok(l.is_ideal(n)
        && l.is_nilpotent_subalgebra(n)?
        && n.basis().iter().all(|v| l.is_ad_nilpotent(v)))
}

// ---------------------------------------------------------------------------
// Symbolic evaluation

/// Bracket on vectors of polynomial coordinates.
pub struct SymbolicLie<'a, F: Field> {
    alg: &'a LieAlgebra<F>,
    nvars: usize,
}

impl<'a, F: Field> SymbolicLie<'a, F> {
    pub fn new(alg: &'a LieAlgebra<F>, nvars: usize) -> Self {
        SymbolicLie { alg, nvars }
    }

    /// The generic vector whose coordinates are variables offset..offset+d.
    pub fn generic(&self, offset: usize) -> Vec<MultiPoly<F>> {
        (0..self.alg.dim)
            .map(|i| MultiPoly::variable(self.alg.field(), self.nvars, offset + i))
            .collect()
    }

    pub fn constant(&self, v: &[F::Elem]) -> Vec<MultiPoly<F>> {
        v.iter()
            .map(|c| MultiPoly::constant(self.alg.field(), self.nvars, c.clone()))
            .collect()
    }

    pub fn term_count(v: &[MultiPoly<F>]) -> usize {
        v.iter().map(MultiPoly::num_terms).sum()
    }

    pub fn is_zero(v: &[MultiPoly<F>]) -> bool {
        v.iter().all(MultiPoly::is_identically_zero)
    }

    /// The ad matrix of a polynomial vector.
    pub fn ad(&self, v: &[MultiPoly<F>]) -> Vec<Vec<MultiPoly<F>>> {
        let d = self.alg.dim;
        let f = self.alg.field();
        let mut m = vec![vec![MultiPoly::zero(f, self.nvars); d]; d];
        for (i, c) in v.iter().enumerate() {
            if c.is_identically_zero() {
                continue;
            }
            for (k, arow) in self.alg.ad_basis[i].iter().enumerate() {
                for (j, a) in arow.iter().enumerate() {
                    if !f.is_zero(a) {
                        m[k][j] = m[k][j].add(&c.scale(a)).expect("same arity");
                    }
                }
            }
        }
        m
    }

    pub fn eval(&self, v: &[MultiPoly<F>], point: &[F::Elem]) -> Result<LieVector<F>> {
        v.iter().map(|p| p.eval(point)).collect()
    }
}

impl<F: Field> BracketOps for SymbolicLie<'_, F> {
    type Elem = Vec<MultiPoly<F>>;
    fn bracket(&self, u: &Self::Elem, v: &Self::Elem) -> Self::Elem {
        let f = self.alg.field();
        let mut out = vec![MultiPoly::zero(f, self.nvars); self.alg.dim];
        for (i, j, k, c) in &self.alg.sparse {
            let (a, b) = (&u[*i], &v[*j]);
            if a.is_identically_zero() || b.is_identically_zero() {
                continue;
            }
            out[*k].add_scaled_product(c, a, b);
        }
        out
    }
}

fn symbolic_poly_mat_mul<F: Field>(
    f: &F,
    nvars: usize,
    a: &[Vec<MultiPoly<F>>],
    b: &[Vec<MultiPoly<F>>],
) -> Vec<Vec<MultiPoly<F>>> {
    let n = a.len();
    let one = f.one();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = MultiPoly::zero(f, nvars);
                    for l in 0..n {
                        if a[i][l].is_identically_zero() || b[l][j].is_identically_zero() {
                            continue;
                        }
                        acc.add_scaled_product(&one, &a[i][l], &b[l][j]);
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Witness grids

/// Integer vectors in [-radius, radius]^dim of a fixed weight sum |c_i|, in
/// the order: lighter first; within a weight, lexicographic by the ranking
/// 1 < -1 < 2 < -2 < ... < 0 of each coordinate.
pub fn graded_grid(dim: usize, radius: i64, max_weight: u64) -> impl Iterator<Item = Vec<i64>> {
    (1..=max_weight).flat_map(move |w| {
        let mut out = Vec::new();
        let mut cur = vec![0i64; dim];
        fill_weight(&mut cur, 0, w as i64, radius, &mut out);
        out
    })
}

fn fill_weight(cur: &mut Vec<i64>, pos: usize, remaining: i64, radius: i64, out: &mut Vec<Vec<i64>>) {
    if pos == cur.len() {
        if remaining == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let slots_left = (cur.len() - pos - 1) as i64;
    for mag in 1..=radius.min(remaining) {
        if remaining - mag > slots_left * radius {
            continue;
        }
        for v in [mag, -mag] {
            cur[pos] = v;
            fill_weight(cur, pos + 1, remaining - mag, radius, out);
        }
    }
    if remaining <= slots_left * radius {
        cur[pos] = 0;
        fill_weight(cur, pos + 1, remaining, radius, out);
    }
}

fn int_vector<F: Field>(f: &F, v: &[i64]) -> LieVector<F> {
    v.iter().map(|&c| f.from_i64(c)).collect()
}

// ---------------------------------------------------------------------------
// Engel tests

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngelKind {
    E,
    V,
    W,
    Strict,
    Total,
}

impl EngelKind {
    pub const ALL: [EngelKind; 5] = [
        EngelKind::E,
        EngelKind::V,
        EngelKind::W,
        EngelKind::Strict,
        EngelKind::Total,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EngelKind::E => "e",
            EngelKind::V => "v",
            EngelKind::W => "w",
            EngelKind::Strict => "strict",
            EngelKind::Total => "total",
        }
    }
}

impl std::str::FromStr for EngelKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "e" | "e-lie" => EngelKind::E,
            "v" | "v-lie" => EngelKind::V,
            "w" | "w-lie" => EngelKind::W,
            "strict" => EngelKind::Strict,
            "total" => EngelKind::Total,
            _ => return Err(Error::syntax(s, "expected e, v, w, strict or total")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngelOutcome<F: Field> {
    /// Least n that works for every x.
    Engel { n: usize },
    NotEngel { witness: LieVector<F>, certificate: String },
    Undetermined { max_iterations: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngelVerdict<F: Field> {
    pub kind: EngelKind,
    pub outcome: EngelOutcome<F>,
    pub iterations: u64,
}

impl<F: Field> EngelVerdict<F> {
    pub fn is_engel(&self) -> bool {
        matches!(self.outcome, EngelOutcome::Engel { .. })
    }

    pub fn is_not_engel(&self) -> bool {
        matches!(self.outcome, EngelOutcome::NotEngel { .. })
    }

    pub fn witness(&self) -> Option<&LieVector<F>> {
        match &self.outcome {
            EngelOutcome::NotEngel { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn verdict(&self) -> Verdict {
        match self.outcome {
            EngelOutcome::Engel { .. } => Verdict::Engel,
            EngelOutcome::NotEngel { .. } => Verdict::NotEngel,
            EngelOutcome::Undetermined { .. } => Verdict::Undetermined,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EngelOptions {
    /// Iteration bound for the w-sequence over infinite fields.
    pub max_n: usize,
    pub enumeration_cap: u64,
    pub monomial_cap: usize,
    /// Grid points tried numerically before any symbolic expansion.
    pub screen_points: usize,
    /// Bit height beyond which numeric w-iteration over Q is abandoned.
    pub height_cap: u64,
}

impl Default for EngelOptions {
    fn default() -> Self {
        EngelOptions {
            max_n: 50,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            monomial_cap: DEFAULT_MONOMIAL_CAP,
            screen_points: 64,
            height_cap: 1 << 14,
        }
    }
}

/// Elements of a finite field ordered so that index order is stable.
fn field_elements<F: Field>(f: &F) -> Vec<F::Elem> {
    f.elements().expect("finite field")
}

fn enumeration_size<F: Field>(f: &F, dim: usize) -> u128 {
    (f.size().expect("finite") as u128).saturating_pow(dim as u32)
}

fn vector_from_index<F: Field>(elements: &[F::Elem], dim: usize, mut idx: u64) -> LieVector<F> {
    let q = elements.len() as u64;
    let mut v = Vec::with_capacity(dim);
    for _ in 0..dim {
        v.push(elements[(idx % q) as usize].clone());
        idx /= q;
    }
    v
}

/// Outcome of one exhaustive per-x check; merged associatively so the result
/// is independent of scheduling: the least witness index wins, otherwise the
/// largest required n.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PointResult {
    Zero(usize),
    Witness(u64),
}

fn merge(a: PointResult, b: PointResult) -> PointResult {
    match (a, b) {
        (PointResult::Witness(i), PointResult::Witness(j)) => PointResult::Witness(i.min(j)),
        (PointResult::Witness(i), _) | (_, PointResult::Witness(i)) => PointResult::Witness(i),
        (PointResult::Zero(m), PointResult::Zero(n)) => PointResult::Zero(m.max(n)),
    }
}

fn exhaustive<F: Field>(
    l: &LieAlgebra<F>,
    opts: &EngelOptions,
    check: impl Fn(&LieVector<F>) -> Option<usize> + Sync,
) -> Result<(PointResult, u64)> {
    let size = enumeration_size(l.field(), l.dim());
    if size > opts.enumeration_cap as u128 {
        return Err(Error::EnumerationTooLarge {
            size,
            cap: opts.enumeration_cap as u128,
        });
    }
    let elements = field_elements(l.field());
    let total = size as u64;
    let res = (0..total)
        .into_par_iter()
        .map(|i| {
            let x = vector_from_index::<F>(&elements, l.dim(), i);
            match check(&x) {
                Some(n) => PointResult::Zero(n),
                None => PointResult::Witness(i),
            }
        })
        .reduce(|| PointResult::Zero(1), merge);
    Ok((res, total))
}

/// Least n <= bound with the Lie sequence zero at (x, y), iterating numerically.
fn first_zero<F: Field>(l: &LieAlgebra<F>, seq: &SequenceSpec, x: &[F::Elem], y: &[F::Elem], bound: usize) -> Option<usize> {
    let (x, y) = (x.to_vec(), y.to_vec());
    let t = l.bracket(&x, &y);
    let mut cur = seq.lie_seed(l, &x, &y, None);
    for n in 1..=bound {
        if n > 1 {
            cur = seq.lie_step(l, &cur, &x, &y, &t);
        }
        if l.is_zero_vector(&cur) {
            return Some(n);
        }
    }
    None
}

/// Orbit of the w-step from w_1 either reaches 0 or enters a cycle avoiding 0
/// (Brent's cycle detection; the state space is finite).
fn w_orbit_finite<F: Field>(l: &LieAlgebra<F>, x: &[F::Elem], y: &[F::Elem]) -> Option<usize> {
    let seq = SequenceId::WLie.spec();
    let (x, y) = (x.to_vec(), y.to_vec());
    let t = l.bracket(&x, &y);
    let step = |v: &LieVector<F>| seq.lie_step(l, v, &x, &y, &t);
    let mut n = 1usize;
    let mut tortoise = seq.lie_seed(l, &x, &y, None);
    if l.is_zero_vector(&tortoise) {
        return Some(1);
    }
    let mut hare = step(&tortoise);
    n += 1;
    let mut power = 1usize;
    let mut lam = 1usize;
    loop {
        if l.is_zero_vector(&hare) {
            return Some(n);
        }
        if hare == tortoise {
            return None;
        }
        if power == lam {
            tortoise = hare.clone();
            power *= 2;
            lam = 0;
        }
        hare = step(&hare);
        n += 1;
        lam += 1;
    }
}

pub fn engel_test<F: Field>(l: &LieAlgebra<F>, y: &[F::Elem], kind: EngelKind, opts: &EngelOptions) -> Result<EngelVerdict<F>> {
    if y.len() != l.dim() {
        return Err(Error::DimensionMismatch {
            expected: l.dim(),
            got: y.len(),
        });
    }
    match kind {
        EngelKind::E => Ok(engel_e(l, y)),
        EngelKind::V => {
            if l.field().characteristic() == 0 {
                engel_v_symbolic(l, y, opts)
            } else {
                let bound = l.dim() + 1;
                let seq = SequenceId::VLie.spec();
                let (res, total) = exhaustive(l, opts, |x| first_zero(l, &seq, x, y, bound))?;
                Ok(finish_exhaustive(l, kind, res, total, "v_{d+1}(x,y) != 0"))
            }
        }
        EngelKind::W => {
            if l.field().characteristic() == 0 {
                engel_w_char0(l, y, opts)
            } else {
                let (res, total) = exhaustive(l, opts, |x| w_orbit_finite(l, x, y))?;
                Ok(finish_exhaustive(l, kind, res, total, "w-orbit cycles without reaching 0"))
            }
        }
        EngelKind::Strict => engel_strict(l, y, opts),
        EngelKind::Total => Ok(engel_total(l, y, opts)),
    }
}

fn finish_exhaustive<F: Field>(l: &LieAlgebra<F>, kind: EngelKind, res: PointResult, total: u64, cert: &str) -> EngelVerdict<F> {
    let outcome = match res {
        PointResult::Zero(n) => EngelOutcome::Engel { n },
        PointResult::Witness(i) => EngelOutcome::NotEngel {
            witness: vector_from_index::<F>(&field_elements(l.field()), l.dim(), i),
            certificate: cert.to_string(),
        },
    };
    EngelVerdict {
        kind,
        outcome,
        iterations: total,
    }
}

fn engel_e<F: Field>(l: &LieAlgebra<F>, y: &[F::Elem]) -> EngelVerdict<F> {
    match l.ad_nilpotency_index(y) {
        Some(n) => EngelVerdict {
            kind: EngelKind::E,
            outcome: EngelOutcome::Engel { n },
            iterations: n as u64,
        },
        None => {
            // some basis vector survives d applications of ad y
            let a = l.ad(y);
            let mut p = a.clone();
            for _ in 1..l.dim() {
                p = linalg::mat_mul(l.field(), &p, &a);
            }
            let j = (0..l.dim())
                .find(|&j| p.iter().any(|row| !l.field().is_zero(&row[j])))
                .expect("nonzero power");
            EngelVerdict {
                kind: EngelKind::E,
                outcome: EngelOutcome::NotEngel {
                    witness: l.basis_vector(j),
                    certificate: "(ad y)^d x != 0".to_string(),
                },
                iterations: l.dim() as u64,
            }
        }
    }
}

/// Scans grid points (bounded by `limit` when given, otherwise growing the
/// radius until found) for the first x with `bad(x)`.
fn grid_search<F: Field>(l: &LieAlgebra<F>, limit: Option<usize>, bad: impl Fn(&LieVector<F>) -> bool) -> Option<LieVector<F>> {
    let f = l.field();
    let d = l.dim();
    match limit {
        Some(limit) => graded_grid(d, 2, 2 * d as u64)
            .take(limit)
            .map(|c| int_vector(f, &c))
            .find(|x| bad(x)),
        None => {
            let mut radius = 2;
            loop {
                if let Some(x) = graded_grid(d, radius, radius as u64 * d as u64)
                    .map(|c| int_vector(f, &c))
                    .find(|x| bad(x))
                {
                    return Some(x);
                }
                radius += 1;
                if radius > 64 {
                    return None;
                }
            }
        }
    }
}

fn engel_v_symbolic<F: Field>(l: &LieAlgebra<F>, y: &[F::Elem], opts: &EngelOptions) -> Result<EngelVerdict<F>> {
    let d = l.dim();
    let seq = SequenceId::VLie.spec();
    let bound = d + 1;
    let nonzero_at = |x: &LieVector<F>| first_zero(l, &seq, x, y, bound).is_none();
    if let Some(x) = grid_search(l, Some(opts.screen_points), nonzero_at) {
        return Ok(EngelVerdict {
            kind: EngelKind::V,
            outcome: EngelOutcome::NotEngel {
                witness: x,
                certificate: "v_{d+1}(x,y) != 0".to_string(),
            },
            iterations: bound as u64,
        });
    }
    let sym = SymbolicLie::new(l, d);
    let x = sym.generic(0);
    let yv = sym.constant(y);
    let t = sym.bracket(&x, &yv);
    let mut cur = x.clone();
    for n in 1..=bound {
        if n > 1 {
            cur = seq.lie_step(&sym, &cur, &x, &yv, &t);
        }
        if SymbolicLie::is_zero(&cur) {
            return Ok(EngelVerdict {
                kind: EngelKind::V,
                outcome: EngelOutcome::Engel { n },
                iterations: n as u64,
            });
        }
        let terms = SymbolicLie::term_count(&cur);
        if terms > opts.monomial_cap {
            return Err(Error::SymbolicBlowup(terms));
        }
    }
    // a nonzero polynomial has a nonvanishing integer point
    let witness = grid_search(l, None, nonzero_at).expect("nonzero polynomial has an integer non-root");
    Ok(EngelVerdict {
        kind: EngelKind::V,
        outcome: EngelOutcome::NotEngel {
            witness,
            certificate: "v_{d+1}(x,y) != 0".to_string(),
        },
        iterations: bound as u64,
    })
}

/// Scale so that the first nonzero coordinate is 1.
fn projective_normal<F: Field>(f: &F, v: &[F::Elem]) -> Option<LieVector<F>> {
    let lead = v.iter().find(|c| !f.is_zero(c))?;
    let inv = f.inv(lead).ok()?;
    Some(v.iter().map(|c| f.mul(c, &inv)).collect())
}

enum WRun {
    ReachedZero(usize),
    /// w_{m+k} is a nonzero multiple of w_m; the map is homogeneous quadratic,
    /// so the sequence never vanishes.
    ProjectiveCycle { start: usize, period: usize },
    GaveUp(usize),
}

fn w_run_char0<F: Field>(l: &LieAlgebra<F>, x: &[F::Elem], y: &[F::Elem], opts: &EngelOptions) -> WRun {
    let f = l.field();
    let seq = SequenceId::WLie.spec();
    let (x, y) = (x.to_vec(), y.to_vec());
    let t = l.bracket(&x, &y);
    let mut cur = seq.lie_seed(l, &x, &y, None);
    let mut seen: Vec<LieVector<F>> = Vec::new();
    for n in 1..=opts.max_n {
        if n > 1 {
            cur = seq.lie_step(l, &cur, &x, &y, &t);
        }
        let Some(normal) = projective_normal(f, &cur) else {
            return WRun::ReachedZero(n);
        };
        if let Some(m) = seen.iter().position(|s| *s == normal) {
            return WRun::ProjectiveCycle {
                start: m + 1,
                period: n - m - 1,
            };
        }
        if too_tall(f, &cur, opts.height_cap) {
            return WRun::GaveUp(n);
        }
        seen.push(normal);
    }
    WRun::GaveUp(opts.max_n)
}

/// Height guard for rational iterates; other fields never trigger it.
fn too_tall<F: Field>(f: &F, v: &[F::Elem], cap: u64) -> bool {
    if f.characteristic() != 0 {
        return false;
    }
    v.iter().any(|c| {
        let s = f.format(c);
        // decimal digits * log2(10) approximates the bit height
        (s.len() as u64).saturating_mul(10) / 3 > cap
    })
}

fn engel_w_char0<F: Field>(l: &LieAlgebra<F>, y: &[F::Elem], opts: &EngelOptions) -> Result<EngelVerdict<F>> {
    let d = l.dim();
    let r = solvable_radical(l)?;
    if r.contains(l.field(), y) {
        // w_n(x,y) lies in the (n-1)-th derived term of R
        let bound = l.derived_length(&r)?.expect("radical is solvable") + 1;
        let seq = SequenceId::WLie.spec();
        let sym = SymbolicLie::new(l, d);
        let x = sym.generic(0);
        let yv = sym.constant(y);
        let t = sym.bracket(&x, &yv);
        let mut cur = seq.lie_seed(&sym, &x, &yv, None);
        for n in 1..=bound {
            if n > 1 {
                cur = seq.lie_step(&sym, &cur, &x, &yv, &t);
            }
            if SymbolicLie::is_zero(&cur) {
                return Ok(EngelVerdict {
                    kind: EngelKind::W,
                    outcome: EngelOutcome::Engel { n },
                    iterations: n as u64,
                });
            }
            let terms = SymbolicLie::term_count(&cur);
            if terms > opts.monomial_cap {
                return Err(Error::SymbolicBlowup(terms));
            }
        }
        return Ok(EngelVerdict {
            kind: EngelKind::W,
            outcome: EngelOutcome::Undetermined { max_iterations: bound },
            iterations: bound as u64,
        });
    }
    // outside R: look for an x whose w-iterates are provably never zero
    let mut iterations = 0u64;
    let candidates = (0..d)
        .map(|i| l.basis_vector(i))
        .chain(graded_grid(d, 2, 2 * d as u64).take(opts.screen_points).map(|c| int_vector(l.field(), &c)));
    for x in candidates {
        match w_run_char0(l, &x, y, opts) {
            WRun::ReachedZero(n) | WRun::GaveUp(n) => iterations += n as u64,
            WRun::ProjectiveCycle { start, period } => {
                iterations += (start + period) as u64;
                return Ok(EngelVerdict {
                    kind: EngelKind::W,
                    outcome: EngelOutcome::NotEngel {
                        witness: x,
                        certificate: format!("w_{} is a nonzero multiple of w_{start}", start + period),
                    },
                    iterations,
                });
            }
        }
    }
    Ok(EngelVerdict {
        kind: EngelKind::W,
        outcome: EngelOutcome::Undetermined {
            max_iterations: opts.max_n,
        },
        iterations,
    })
}

fn engel_strict<F: Field>(l: &LieAlgebra<F>, y: &[F::Elem], opts: &EngelOptions) -> Result<EngelVerdict<F>> {
    let d = l.dim();
    let base = engel_e(l, y);
    let EngelOutcome::Engel { n: n_y } = base.outcome else {
        return Ok(EngelVerdict {
            kind: EngelKind::Strict,
            outcome: match base.outcome {
                EngelOutcome::NotEngel { witness, .. } => EngelOutcome::NotEngel {
                    witness,
                    certificate: "y is not Engel: (ad y)^d x != 0".to_string(),
                },
                other => other,
            },
            iterations: base.iterations,
        });
    };
    let bracket_not_engel = |x: &LieVector<F>| !l.is_ad_nilpotent(&l.bracket(x, y));
    let not_engel = |witness| EngelVerdict {
        kind: EngelKind::Strict,
        outcome: EngelOutcome::NotEngel {
            witness,
            certificate: "ad [x,y] is not nilpotent".to_string(),
        },
        iterations: d as u64,
    };

    if l.field().characteristic() != 0 {
        let (res, total) = exhaustive(l, opts, |x| l.ad_nilpotency_index(&l.bracket(x, y)))?;
        let mut v = finish_exhaustive(l, EngelKind::Strict, res, total, "ad [x,y] is not nilpotent");
        if let EngelOutcome::Engel { n } = &mut v.outcome {
            *n = (*n).max(n_y);
        }
        return Ok(v);
    }

    if let Some(x) = grid_search(l, Some(opts.screen_points), bracket_not_engel) {
        return Ok(not_engel(x));
    }
    // symbolic: M = ad [X, y] has linear entries; check M^k = 0
    let sym = SymbolicLie::new(l, d);
    let t = sym.bracket(&sym.generic(0), &sym.constant(y));
    let m = sym.ad(&t);
    let mut power = m.clone();
    for k in 1..=d {
        if power.iter().flatten().all(MultiPoly::is_identically_zero) {
            return Ok(EngelVerdict {
                kind: EngelKind::Strict,
                outcome: EngelOutcome::Engel { n: k.max(n_y) },
                iterations: k as u64,
            });
        }
        let terms: usize = power.iter().flatten().map(MultiPoly::num_terms).sum();
        if terms > opts.monomial_cap {
            return Err(Error::SymbolicBlowup(terms));
        }
        if k < d {
            power = symbolic_poly_mat_mul(l.field(), d, &power, &m);
        }
    }
    let witness = grid_search(l, None, bracket_not_engel).expect("nonzero polynomial matrix has an integer non-root");
    Ok(not_engel(witness))
}

fn engel_total<F: Field>(l: &LieAlgebra<F>, y: &[F::Elem], opts: &EngelOptions) -> EngelVerdict<F> {
    let ideal = l.ideal_generated(y);
    let chain = l
        .series(SeriesKind::LowerCentral, Some(&ideal))
        .expect("ideals are subalgebras");
    if chain.last().is_some_and(Subspace::is_zero) {
        return EngelVerdict {
            kind: EngelKind::Total,
            outcome: EngelOutcome::Engel {
                n: chain.len().saturating_sub(1).max(1),
            },
            iterations: chain.len() as u64,
        };
    }
    // Engel's theorem: a non-nilpotent ideal contains a non ad-nilpotent element
    let f = l.field();
    let r = ideal.dim();
    let in_ideal = |c: &[F::Elem]| ideal.combine(f, c);
    let witness = if f.characteristic() == 0 {
        let mut found = None;
        'outer: for radius in 1i64..=64 {
            for c in graded_grid(r, radius, radius as u64 * r as u64) {
                let z = in_ideal(&int_vector(f, &c));
                if !l.is_ad_nilpotent(&z) {
                    found = Some(z);
                    break 'outer;
                }
            }
        }
        found
    } else {
        let elements = field_elements(f);
        let size = enumeration_size(f, r).min(opts.enumeration_cap as u128) as u64;
        (0..size)
            .map(|i| in_ideal(&vector_from_index::<F>(&elements, r, i)))
            .find(|z| !l.is_ad_nilpotent(z))
    };
    let witness = witness.expect("non-nilpotent ideal has a non-Engel element");
    EngelVerdict {
        kind: EngelKind::Total,
        outcome: EngelOutcome::NotEngel {
            witness,
            certificate: "element of <y> with ad not nilpotent".to_string(),
        },
        iterations: chain.len() as u64,
    }
}

// ---------------------------------------------------------------------------
// Identity checks and Engel sets

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityOutcome<F: Field> {
    Holds,
    Fails { x: LieVector<F>, y: LieVector<F> },
}

/// Checks whether the n-th term of a two-variable Lie sequence vanishes
/// identically. Over Q both arguments are symbolic; over finite fields pairs
/// are scanned (basis pairs first, then the full space in graded order).
pub fn identity_check<F: Field>(l: &LieAlgebra<F>, seq: &SequenceSpec, n: usize, opts: &EngelOptions) -> Result<(IdentityOutcome<F>, Report)> {
    if seq.kind() != SequenceKind::Lie || seq.id.arity() != 2 {
        return Err(Error::WrongSequenceKind(seq.id.to_string()));
    }
    let d = l.dim();
    let f = l.field();
    let nonzero = |x: &LieVector<F>, y: &LieVector<F>| !l.is_zero_vector(&seq.lie_value(l, x, y, None, n));

    let basis_pairs = || {
        (0..d).flat_map(move |i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| (l.basis_vector(i), l.basis_vector(j)))
    };

    let (outcome, iterations) = if f.characteristic() == 0 {
        let sym = SymbolicLie::new(l, 2 * d);
        let x = sym.generic(0);
        let y = sym.generic(d);
        let t = sym.bracket(&x, &y);
        let mut cur = seq.lie_seed(&sym, &x, &y, None);
        for k in 2..=n {
            cur = seq.lie_step(&sym, &cur, &x, &y, &t);
            let terms = SymbolicLie::term_count(&cur);
            if terms > opts.monomial_cap {
                return Err(Error::SymbolicBlowup(terms));
            }
            if SymbolicLie::is_zero(&cur) && k < n {
                // later terms of these sequences stay zero
                break;
            }
        }
        if SymbolicLie::is_zero(&cur) {
            (IdentityOutcome::Holds, n as u64)
        } else {
            let found = basis_pairs().find(|(x, y)| nonzero(x, y)).or_else(|| {
                (1i64..=64).find_map(|radius| {
                    graded_grid(2 * d, radius, radius as u64 * 2 * d as u64)
                        .map(|c| (int_vector(f, &c[..d]), int_vector(f, &c[d..])))
                        .find(|(x, y)| nonzero(x, y))
                })
            });
            let (x, y) = found.expect("nonzero polynomial has an integer non-root");
            (IdentityOutcome::Fails { x, y }, n as u64)
        }
    } else {
        if let Some((x, y)) = basis_pairs().find(|(x, y)| nonzero(x, y)) {
            (IdentityOutcome::Fails { x, y }, 0)
        } else {
            let size = enumeration_size(f, 2 * d);
            let elements = field_elements(f);
            let scanned = size.min(opts.enumeration_cap as u128) as u64;
            let found = finite_pair_scan(l, &elements, scanned, &nonzero);
            match found {
                Some((x, y)) => (IdentityOutcome::Fails { x, y }, scanned),
                None if size > opts.enumeration_cap as u128 => {
                    return Err(Error::EnumerationTooLarge {
                        size,
                        cap: opts.enumeration_cap as u128,
                    })
                }
                None => (IdentityOutcome::Holds, scanned),
            }
        }
    };

    let verdict = match outcome {
        IdentityOutcome::Holds => Verdict::Holds,
        IdentityOutcome::Fails { .. } => Verdict::Fails,
    };
    let mut report = Report::new(
        match seq.id {
            SequenceId::VLie => "thm-ch",
            SequenceId::WLie => "thm-ch-w",
            _ => "lie-identity",
        },
        verdict,
    );
    report.inputs = json!({ "seq": seq.id, "n": n, "field": f.spec().to_string(), "dim": d });
    if let IdentityOutcome::Fails { x, y } = &outcome {
        report.witness = Some(json!({ "x": l.vector_json(x), "y": l.vector_json(y) }));
    }
    report.iterations = iterations;
    Ok((outcome, report))
}

/// Index-order scan over pairs (x, y) in F^d x F^d, parallel in blocks; the
/// least failing index is reported.
fn finite_pair_scan<F: Field>(
    l: &LieAlgebra<F>,
    elements: &[F::Elem],
    total: u64,
    nonzero: &(impl Fn(&LieVector<F>, &LieVector<F>) -> bool + Sync),
) -> Option<(LieVector<F>, LieVector<F>)> {
    let d = l.dim();
    let block = 1u64 << 16;
    let mut start = 0;
    while start < total {
        let end = (start + block).min(total);
        let hit = (start..end).into_par_iter().find_first(|&i| {
            let v = vector_from_index::<F>(elements, 2 * d, i);
            nonzero(&v[..d].to_vec(), &v[d..].to_vec())
        });
        if let Some(i) = hit {
            let v = vector_from_index::<F>(elements, 2 * d, i);
            return Some((v[..d].to_vec(), v[d..].to_vec()));
        }
        start = end;
    }
    None
}

/// All Engel elements of the given kind (finite fields only).
pub fn engel_set<F: Field>(l: &LieAlgebra<F>, kind: EngelKind, opts: &EngelOptions) -> Result<(Vec<LieVector<F>>, Report)> {
    let f = l.field();
    if f.characteristic() == 0 {
        return Err(Error::EnumerationTooLarge {
            size: u128::MAX,
            cap: opts.enumeration_cap as u128,
        });
    }
    let size = enumeration_size(f, l.dim());
    if size > opts.enumeration_cap as u128 {
        return Err(Error::EnumerationTooLarge {
            size,
            cap: opts.enumeration_cap as u128,
        });
    }
    let elements = field_elements(f);
    let total = size as u64;
    let d = l.dim();
    // inner tests run sequentially; parallelism is over y
    let set: Vec<LieVector<F>> = (0..total)
        .into_par_iter()
        .filter_map(|i| {
            let y = vector_from_index::<F>(&elements, d, i);
            let engel = match kind {
                EngelKind::E => l.is_ad_nilpotent(&y),
                EngelKind::V => sequential_all::<F>(&elements, d, |x| first_zero(l, &SequenceId::VLie.spec(), x, &y, d + 1).is_some()),
                EngelKind::W => sequential_all::<F>(&elements, d, |x| w_orbit_finite(l, x, &y).is_some()),
                EngelKind::Strict => {
                    l.is_ad_nilpotent(&y) && sequential_all::<F>(&elements, d, |x| l.is_ad_nilpotent(&l.bracket(x, &y)))
                }
                EngelKind::Total => l
                    .is_nilpotent_subalgebra(&l.ideal_generated(&y))
                    .expect("ideal is a subalgebra"),
            };
            engel.then_some(y)
        })
        .collect();
    let mut report = Report::new("engel-set", Verdict::Holds);
    report.inputs = json!({ "kind": kind.as_str(), "field": f.spec().to_string(), "dim": d });
    report.details = json!({
        "size": set.len(),
        "total": total,
        "solvable": l.is_solvable(),
        "perfect": l.is_perfect(),
        "only_zero": set.len() == 1,
        "everything": set.len() as u64 == total,
    });
    report.iterations = total;
    Ok((set, report))
}

fn sequential_all<F: Field>(elements: &[F::Elem], d: usize, pred: impl Fn(&LieVector<F>) -> bool) -> bool {
    let total = (elements.len() as u64).pow(d as u32);
    (0..total).all(|i| pred(&vector_from_index::<F>(elements, d, i)))
}

// ---------------------------------------------------------------------------
// Numeric helpers over Q

/// Iterates of a Lie sequence at concrete points.
pub fn sequence_values<F: Field>(l: &LieAlgebra<F>, seq: &SequenceSpec, x: &[F::Elem], y: &[F::Elem], z: Option<&[F::Elem]>, n_max: usize) -> Vec<LieVector<F>> {
    let (x, y) = (x.to_vec(), y.to_vec());
    let z = z.map(<[F::Elem]>::to_vec);
    let t = l.bracket(&x, &y);
    let mut out = Vec::with_capacity(n_max);
    let mut cur = seq.lie_seed(l, &x, &y, z.as_ref());
    for n in 1..=n_max {
        if n > 1 {
            cur = seq.lie_step(l, &cur, &x, &y, &t);
        }
        out.push(cur.clone());
    }
    out
}

/// Symbolic coordinates of the n-th term with x generic and y fixed.
pub fn symbolic_in_x<F: Field>(l: &LieAlgebra<F>, seq: &SequenceSpec, y: &[F::Elem], n: usize) -> Vec<MultiPoly<F>> {
    let sym = SymbolicLie::new(l, l.dim());
    let x = sym.generic(0);
    let yv = sym.constant(y);
    seq.lie_value(&sym, &x, &yv, None, n)
}

/// Symbolic coordinates of the n-th term with both x and y generic.
pub fn symbolic_in_xy<F: Field>(l: &LieAlgebra<F>, seq: &SequenceSpec, n: usize) -> Vec<MultiPoly<F>> {
    let d = l.dim();
    let sym = SymbolicLie::new(l, 2 * d);
    let x = sym.generic(0);
    let y = sym.generic(d);
    seq.lie_value(&sym, &x, &y, None, n)
}

/// Bit height of the tallest coordinate.
pub fn vector_height(v: &[BigRational]) -> u64 {
    v.iter().map(rational_height).max().unwrap_or(0)
}

/// Set of elements as a hashable collection.
pub fn as_set<F: Field>(v: &[LieVector<F>]) -> HashSet<LieVector<F>> {
    v.iter().cloned().collect()
}

impl LieAlgebra<Rationals> {
    pub fn qvec(&self, coords: &[i64]) -> LieVector<Rationals> {
        coords.iter().map(|&c| Rationals.from_i64(c)).collect()
    }
}
