//! Square operator matrices stored row-wise sparse.
//!
//! The generators of the algebra have at most one nonzero per row, and their
//! Kronecker products stay that way, so a sparse layout keeps the (p+1)^(2N)
//! dimensional multimode checks cheap. Rows hold `(column, value)` pairs in
//! increasing column order with no explicit zeros; derived equality is
//! therefore entrywise equality.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct OpMatrix<S> {
    dim: usize,
    rows: Vec<Vec<(usize, S)>>,
}

impl<S: Scalar> OpMatrix<S> {
    pub fn zeros(dim: usize) -> Self {
        OpMatrix {
            dim,
            rows: vec![Vec::new(); dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal((0..dim).map(|_| S::one()).collect())
    }

    pub fn diagonal(entries: Vec<S>) -> Self {
        let dim = entries.len();
        let rows = entries
            .into_iter()
            .enumerate()
            .map(|(i, v)| if v.is_zero() { Vec::new() } else { vec![(i, v)] })
            .collect();
        OpMatrix { dim, rows }
    }

    /// Collects `(row, col, value)` triples, summing duplicates.
    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, usize, S)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, S>> = vec![BTreeMap::new(); dim];
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "entry ({r}, {c}) outside a {dim}x{dim} matrix");
            let slot = acc[r].entry(c).or_insert_with(S::zero);
            *slot = slot.clone() + v;
        }
        OpMatrix {
            dim,
            rows: acc.into_iter().map(finish_row).collect(),
        }
    }

    pub fn from_dense(rows: Vec<Vec<S>>) -> Self {
        let dim = rows.len();
        let entries = rows.into_iter().enumerate().flat_map(move |(i, row)| {
            assert_eq!(row.len(), dim, "dense matrix must be square");
            row.into_iter().enumerate().map(move |(j, v)| (i, j, v))
        });
        Self::from_entries(dim, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> S {
        self.rows[r]
            .binary_search_by_key(&c, |(col, _)| *col)
            .map(|k| self.rows[r][k].1.clone())
            .unwrap_or_else(|_| S::zero())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(i, j, _)| i == j)
    }

    pub fn diagonal_entries(&self) -> Vec<S> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<S>> {
        let mut out = vec![vec![S::zero(); self.dim]; self.dim];
        for (i, j, v) in self.entries() {
            out[i][j] = v.clone();
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zeros(self.dim);
        }
        OpMatrix {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|(j, v)| (*j, c.clone() * v.clone()))
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                })
                .collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_entries(self.dim, self.entries().map(|(i, j, v)| (j, i, v.clone())))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> OpMatrix<T> {
        OpMatrix::from_entries(self.dim, self.entries().map(|(i, j, v)| (i, j, f(v))))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matrix product");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, S> = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.rows[*k] {
                        let prod = a.clone() * b.clone();
                        match acc.get_mut(j) {
                            Some(slot) => *slot = slot.clone() + prod,
                            None => {
                                acc.insert(*j, prod);
                            }
                        }
                    }
                }
                finish_row(acc)
            })
            .collect();
        OpMatrix {
            dim: self.dim,
            rows,
        }
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matrix sum");
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut acc: BTreeMap<usize, S> = a.iter().cloned().collect();
                for (j, v) in b {
                    let v = if sign { v.clone() } else { -v.clone() };
                    match acc.get_mut(j) {
                        Some(slot) => *slot = slot.clone() + v,
                        None => {
                            acc.insert(*j, v);
                        }
                    }
                }
                finish_row(acc)
            })
            .collect();
        OpMatrix {
            dim: self.dim,
            rows,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity(self.dim);
        for _ in 0..n {
            acc = acc.matmul(self);
        }
        acc
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let d = other.dim;
        let entries = self.entries().flat_map(|(i1, j1, a)| {
            other
                .entries()
                .map(move |(i2, j2, b)| (i1 * d + i2, j1 * d + j2, a.clone() * b.clone()))
        });
        Self::from_entries(self.dim * d, entries.collect::<Vec<_>>())
    }

    /// `self * other - other * self`
    pub fn commutator(&self, other: &Self) -> Self {
        &self.matmul(other) - &other.matmul(self)
    }
}

impl OpMatrix<Complex64> {
    pub fn conj_transpose(&self) -> Self {
        Self::from_entries(self.dim, self.entries().map(|(i, j, v)| (j, i, v.conj())))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).entries().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }
}

fn finish_row<S: Scalar>(acc: BTreeMap<usize, S>) -> Vec<(usize, S)> {
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

impl<S: Scalar> Mul for &OpMatrix<S> {
    type Output = OpMatrix<S>;

    fn mul(self, rhs: Self) -> OpMatrix<S> {
        self.matmul(rhs)
    }
}

impl<S: Scalar> Add for &OpMatrix<S> {
    type Output = OpMatrix<S>;

    fn add(self, rhs: Self) -> OpMatrix<S> {
        self.combine(rhs, true)
    }
}

impl<S: Scalar> Sub for &OpMatrix<S> {
    type Output = OpMatrix<S>;

    fn sub(self, rhs: Self) -> OpMatrix<S> {
        self.combine(rhs, false)
    }
}

impl<S: Scalar> Neg for &OpMatrix<S> {
    type Output = OpMatrix<S>;

    fn neg(self) -> OpMatrix<S> {
        self.scale(&-S::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn int_matrix(dim: usize, vals: &[i64]) -> OpMatrix<BigRational> {
        OpMatrix::from_dense(
            vals.chunks(dim)
                .map(|r| r.iter().map(|&v| <BigRational as Scalar>::from_i64(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn kron_of_small_matrices() {
        let a = int_matrix(2, &[1, 2, 3, 4]);
        let b = int_matrix(2, &[0, 5, 6, 7]);
        let k = a.kron(&b);
        let expected = int_matrix(
            4,
            &[0, 5, 0, 10, 6, 7, 12, 14, 0, 15, 0, 20, 18, 21, 24, 28],
        );
        assert_eq!(k, expected);
    }

    #[test]
    fn cancellation_drops_entries() {
        let a = int_matrix(2, &[1, -1, 0, 2]);
        assert!((&a - &a).is_zero());
        assert_eq!((&a - &a).nnz(), 0);
    }

    proptest! {
        #[test]
        fn product_matches_dense(vals_a in proptest::collection::vec(-3i64..4, 9),
                                 vals_b in proptest::collection::vec(-3i64..4, 9)) {
            let a = int_matrix(3, &vals_a);
            let b = int_matrix(3, &vals_b);
            let c = &a * &b;
            for i in 0..3 {
                for j in 0..3 {
                    let expected: i64 = (0..3).map(|k| vals_a[3 * i + k] * vals_b[3 * k + j]).sum();
                    prop_assert_eq!(c.get(i, j), <BigRational as Scalar>::from_i64(expected));
                }
            }
        }

        #[test]
        fn kron_mixed_product(vals in proptest::collection::vec(-2i64..3, 16)) {
            let (a, b, c, d) = (
                int_matrix(2, &vals[0..4]),
                int_matrix(2, &vals[4..8]),
                int_matrix(2, &vals[8..12]),
                int_matrix(2, &vals[12..16]),
            );
            prop_assert_eq!(&a.kron(&b) * &c.kron(&d), (&a * &c).kron(&(&b * &d)));
        }
    }
}
