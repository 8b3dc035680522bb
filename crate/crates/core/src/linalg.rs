//! Dense exact linear algebra over a [`Field`]: reduced row echelon form,
//! kernels, and subspaces.

use crate::field::Field;

pub type Row<F> = Vec<<F as Field>::Elem>;

/// Reduces `rows` in place to reduced row echelon form and drops zero rows.
/// Returns the pivot columns.
pub fn rref<F: Field>(field: &F, rows: &mut Vec<Row<F>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !field.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = field.inv(&rows[r][c]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(x, &inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || field.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x = field.sub(x, &field.mul(&factor, p));
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of {v : M v = 0} for an m x n matrix given by rows.
pub fn kernel<F: Field>(field: &F, matrix: &[Row<F>], ncols: usize) -> Vec<Row<F>> {
    let mut rows = matrix.to_vec();
    let pivots = rref(field, &mut rows);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); ncols];
            v[f] = field.one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = field.neg(&row[f]);
            }
            v
        })
        .collect()
}

pub fn mat_mul<F: Field>(field: &F, a: &[Row<F>], b: &[Row<F>]) -> Vec<Row<F>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter().zip(b).fold(field.zero(), |acc, (x, brow)| {
                        if field.is_zero(x) {
                            acc
                        } else {
                            field.add(&acc, &field.mul(x, &brow[j]))
                        }
                    })
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(field: &F, a: &[Row<F>], v: &[F::Elem]) -> Row<F> {
    a.iter()
        .map(|row| {
            row.iter().zip(v).fold(field.zero(), |acc, (x, y)| {
                if field.is_zero(x) || field.is_zero(y) {
                    acc
                } else {
                    field.add(&acc, &field.mul(x, y))
                }
            })
        })
        .collect()
}

pub fn trace<F: Field>(field: &F, a: &[Row<F>]) -> F::Elem {
    a.iter()
        .enumerate()
        .fold(field.zero(), |acc, (i, row)| field.add(&acc, &row[i]))
}

pub fn is_zero_matrix<F: Field>(field: &F, a: &[Row<F>]) -> bool {
    a.iter().all(|row| row.iter().all(|x| field.is_zero(x)))
}

pub fn identity<F: Field>(field: &F, n: usize) -> Vec<Row<F>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect()
}

/// A subspace of F^d stored as a canonical RREF basis, so equality is
/// structural.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    dim: usize,
    basis: Vec<Row<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> PartialEq for Subspace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.basis == other.basis
    }
}

impl<F: Field> Eq for Subspace<F> {}

impl<F: Field> Subspace<F> {
    pub fn span(field: &F, ambient: usize, vectors: impl IntoIterator<Item = Row<F>>) -> Self {
        let mut rows: Vec<Row<F>> = vectors.into_iter().collect();
        debug_assert!(rows.iter().all(|r| r.len() == ambient));
        let pivots = rref(field, &mut rows);
        Subspace {
            dim: ambient,
            basis: rows,
            pivots,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            dim: ambient,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        Subspace {
            dim: ambient,
            basis: identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn basis(&self) -> &[Row<F>] {
        &self.basis
    }

    /// Reduces v against the RREF basis; v is in the span iff the remainder is 0.
    pub fn reduce(&self, field: &F, v: &[F::Elem]) -> Row<F> {
        let mut out = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            if field.is_zero(&out[pc]) {
                continue;
            }
            let factor = out[pc].clone();
            for (x, b) in out.iter_mut().zip(row) {
                *x = field.sub(x, &field.mul(&factor, b));
            }
        }
        out
    }

    pub fn contains(&self, field: &F, v: &[F::Elem]) -> bool {
        self.reduce(field, v).iter().all(|x| field.is_zero(x))
    }

    pub fn contains_subspace(&self, field: &F, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains(field, v))
    }

    pub fn sum(&self, field: &F, other: &Self) -> Self {
        Self::span(
            field,
            self.dim,
            self.basis.iter().chain(&other.basis).cloned(),
        )
    }

    /// Intersection via the kernel of [A; -B]^T.
    pub fn intersect(&self, field: &F, other: &Self) -> Self {
        let a = self.basis.len();
        let b = other.basis.len();
        if a == 0 || b == 0 {
            return Self::zero(self.dim);
        }
        // columns are the basis vectors of both spaces; find combos summing to 0
        let matrix: Vec<Row<F>> = (0..self.dim)
            .map(|i| {
                self.basis
                    .iter()
                    .map(|v| v[i].clone())
                    .chain(other.basis.iter().map(|v| field.neg(&v[i])))
                    .collect()
            })
            .collect();
        let ker = kernel(field, &matrix, a + b);
        let vectors = ker.into_iter().map(|coeffs| {
            let mut v = vec![field.zero(); self.dim];
            for (c, row) in coeffs[..a].iter().zip(&self.basis) {
                if field.is_zero(c) {
                    continue;
                }
                for (x, r) in v.iter_mut().zip(row) {
                    *x = field.add(x, &field.mul(c, r));
                }
            }
            v
        });
        Self::span(field, self.dim, vectors)
    }

    /// Coordinates of v in this basis (v must lie in the subspace).
    pub fn coordinates(&self, v: &[F::Elem]) -> Row<F> {
        self.pivots.iter().map(|&pc| v[pc].clone()).collect()
    }

    /// The element with the given coordinates.
    pub fn combine(&self, field: &F, coeffs: &[F::Elem]) -> Row<F> {
        let mut v = vec![field.zero(); self.dim];
        for (c, row) in coeffs.iter().zip(&self.basis) {
            if field.is_zero(c) {
                continue;
            }
            for (x, r) in v.iter_mut().zip(row) {
                *x = field.add(x, &field.mul(c, r));
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FiniteField, Rationals};
    use num_rational::BigRational;

    fn qv(xs: &[i64]) -> Vec<BigRational> {
        xs.iter().map(|&x| Rationals.from_i64(x)).collect()
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = vec![qv(&[1, 2, 3]), qv(&[2, 4, 6])];
        let k = kernel(&Rationals, &m, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&Rationals, &m, v).iter().all(|x| Rationals.is_zero(x)));
        }
    }

    #[test]
    fn subspace_canonical_and_intersection() {
        let f = Rationals;
        let a = Subspace::span(&f, 3, vec![qv(&[1, 1, 0]), qv(&[0, 1, 1])]);
        let a2 = Subspace::span(&f, 3, vec![qv(&[1, 2, 1]), qv(&[1, 0, -1])]);
        assert_eq!(a, a2);
        let b = Subspace::span(&f, 3, vec![qv(&[1, 0, 0]), qv(&[0, 0, 1])]);
        let i = a.intersect(&f, &b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&f, &qv(&[1, 0, -1])));
        assert_eq!(a.sum(&f, &b).dim(), 3);
    }

    #[test]
    fn rref_over_gf5() {
        let f = FiniteField::prime(5).unwrap();
        let mut rows = vec![vec![2, 4, 1], vec![1, 2, 4]];
        let piv = rref(&f, &mut rows);
        assert_eq!(piv, vec![0, 2]);
        assert_eq!(rows[0], vec![1, 2, 0]);
    }
}
