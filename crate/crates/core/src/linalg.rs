//! Exact rank, nullspace and coordinate extraction over the rationals.
//!
//! Elimination is fraction-free: each row is scaled to integers first and
//! pivoting follows Bareiss' one-step scheme, so every intermediate entry
//! is an exact integer minor of the input. Pivots are chosen as the first
//! nonzero entry in column order, which keeps runs deterministic.

use crate::poly::{Polynomial, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("basis vectors are linearly dependent")]
    DependentBasis,
    #[error("target vector is not in the span of the basis")]
    NotInSpan,
}

/// Dense matrix of exact rationals, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RationalMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(cols: Vec<Vec<Rational>>) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        assert!(cols.iter().all(|col| col.len() == r), "ragged columns");
        let mut m = RationalMatrix::zeros(r, c);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> RationalMatrix {
        let mut t = RationalMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn matmul(&self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = RationalMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * rhs.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Row-scales to integers, clearing denominators (rank-preserving).
    fn to_integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|i| {
                let lcm = self
                    .row(i)
                    .iter()
                    .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
                self.row(i)
                    .iter()
                    .map(|v| v.numer() * (&lcm / v.denom()))
                    .collect()
            })
            .collect()
    }

    /// Exact rank via fraction-free elimination.
    pub fn rank(&self) -> usize {
        let (_, pivots) = bareiss_echelon(self.to_integer_rows());
        pivots.len()
    }

    /// Exact basis of the right kernel; returns `cols - rank` vectors.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (echelon, pivots) = bareiss_echelon(self.to_integer_rows());
        let pivot_cols: BTreeSet<usize> = pivots.iter().copied().collect();
        let free_cols: Vec<usize> = (0..self.cols).filter(|j| !pivot_cols.contains(j)).collect();
        let mut basis = Vec::with_capacity(free_cols.len());
        for &free in &free_cols {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            // Back-substitute through the echelon rows, last pivot first.
            for (r, &pcol) in pivots.iter().enumerate().rev() {
                let row = &echelon[r];
                let mut acc = Rational::zero();
                for j in pcol + 1..self.cols {
                    if !row[j].is_zero() {
                        acc += Rational::from_integer(row[j].clone()) * &v[j];
                    }
                }
                v[pcol] = -acc / Rational::from_integer(row[pcol].clone());
            }
            basis.push(v);
        }
        basis
    }
}

/// Fraction-free row echelon form. Returns the reduced integer rows and
/// the pivot column of each of the first `rank` rows.
fn bareiss_echelon(mut m: Vec<Vec<BigInt>>) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let num = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                m[i][j] = num / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        pivots.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    (m, pivots)
}

/// Exact coefficients `c` with `sum c_i * basis_i = target`.
///
/// The basis is required to be linearly independent; a dependent basis is
/// reported rather than silently picking one of many solutions.
pub fn solve_coordinates(
    basis: &[Vec<Rational>],
    target: &[Rational],
) -> Result<Vec<Rational>, SolveError> {
    let k = basis.len();
    let dim = target.len();
    assert!(basis.iter().all(|b| b.len() == dim), "ragged basis");
    let matrix = RationalMatrix::from_columns(basis.to_vec());
    if matrix.rank() < k {
        return Err(SolveError::DependentBasis);
    }
    // Augment with the target and eliminate over the rationals.
    let mut aug: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut row: Vec<Rational> = basis.iter().map(|b| b[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut next_row = 0usize;
    for col in 0..k {
        let Some(p) = (next_row..dim).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(next_row, p);
        for r in 0..dim {
            if r != next_row && !aug[r][col].is_zero() {
                let factor = &aug[r][col] / &aug[next_row][col];
                for j in col..=k {
                    let delta = &factor * &aug[next_row][j];
                    aug[r][j] -= delta;
                }
            }
        }
        pivot_rows.push((next_row, col));
        next_row += 1;
    }
    // Independence guarantees k pivots; any leftover nonzero row in the
    // augmented column means the target sticks out of the span.
    debug_assert_eq!(pivot_rows.len(), k);
    for r in next_row..dim {
        if !aug[r][k].is_zero() {
            return Err(SolveError::NotInSpan);
        }
    }
    let mut coeffs = vec![Rational::zero(); k];
    for &(row, col) in &pivot_rows {
        coeffs[col] = &aug[row][k] / &aug[row][col];
    }
    Ok(coeffs)
}

/// Coordinate matrix of a family of polynomials: one column per
/// polynomial, one row per monomial occurring anywhere in the family,
/// rows ordered by descending graded-lex monomial.
pub fn polynomial_coordinate_matrix(polys: &[&Polynomial]) -> RationalMatrix {
    let mut monomials = BTreeSet::new();
    for p in polys {
        for (m, _) in p.terms() {
            monomials.insert(m.clone());
        }
    }
    let monomials: Vec<_> = monomials.into_iter().rev().collect();
    let mut matrix = RationalMatrix::zeros(monomials.len(), polys.len());
    for (j, p) in polys.iter().enumerate() {
        for (i, m) in monomials.iter().enumerate() {
            let c = p.coefficient(m);
            if !c.is_zero() {
                matrix.set(i, j, c);
            }
        }
    }
    matrix
}

/// Coordinates of `p` in the fixed monomial basis `basis` (zero rows for
/// monomials absent from `p`). Panics if `p` has a monomial outside the
/// basis: that would mean the basis does not span the target space.
pub fn coordinates_in_monomial_basis(
    p: &Polynomial,
    basis: &[crate::poly::Monomial],
) -> Vec<Rational> {
    let mut coords = vec![Rational::zero(); basis.len()];
    'terms: for (m, c) in p.terms() {
        for (i, b) in basis.iter().enumerate() {
            if b == m {
                coords[i] = c.clone();
                continue 'terms;
            }
        }
        panic!("monomial {m} is outside the fixed basis");
    }
    coords
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn m(rows: &[&[i64]]) -> RationalMatrix {
        RationalMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rat(v)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_examples() {
        assert_eq!(RationalMatrix::identity(3).rank(), 3);
        assert_eq!(RationalMatrix::zeros(4, 2).rank(), 0);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).rank(), 2);
    }

    #[test]
    fn nullspace_examples() {
        assert!(RationalMatrix::identity(3).nullspace().is_empty());
        assert_eq!(RationalMatrix::zeros(2, 3).nullspace().len(), 3);
        let ns = m(&[&[1, 1]]).nullspace();
        assert_eq!(ns.len(), 1);
        // proportional to (1, -1)
        assert_eq!(ns[0][0], -ns[0][1].clone());
        assert!(!ns[0][0].is_zero());
    }

    #[test]
    fn solve_coordinates_examples() {
        let e1 = vec![rat(1), rat(0)];
        let e2 = vec![rat(0), rat(1)];
        let coeffs = solve_coordinates(&[e1.clone(), e2.clone()], &[rat(3), rat(-1)]).unwrap();
        assert_eq!(coeffs, vec![rat(3), rat(-1)]);

        let b = vec![rat(1), rat(1), rat(0)];
        assert_eq!(
            solve_coordinates(&[b], &[rat(1), rat(0), rat(0)]),
            Err(SolveError::NotInSpan)
        );

        let dep = vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]];
        assert_eq!(
            solve_coordinates(&dep, &[rat(1), rat(2)]),
            Err(SolveError::DependentBasis)
        );
    }

    /// Brute-force rank oracle: the size of the largest square submatrix
    /// with nonzero determinant, by cofactor expansion. Exponential, for
    /// cross-checking small matrices only.
    pub(crate) fn rank_by_minors(m: &RationalMatrix) -> usize {
        fn det(m: &RationalMatrix, rows: &[usize], cols: &[usize]) -> Rational {
            if rows.len() == 1 {
                return m.get(rows[0], cols[0]).clone();
            }
            let mut acc = Rational::zero();
            for (k, &c) in cols.iter().enumerate() {
                let sub: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let minor = det(m, &rows[1..], &sub);
                let signed = if k % 2 == 0 { minor } else { -minor };
                acc += m.get(rows[0], c) * signed;
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in subsets(n, k - 1) {
                    if rest.iter().all(|&x| x > first) {
                        let mut s = vec![first];
                        s.append(&mut rest);
                        out.push(s);
                    }
                }
            }
            out
        }
        for k in (1..=m.rows().min(m.cols())).rev() {
            for rows in subsets(m.rows(), k) {
                for cols in subsets(m.cols(), k) {
                    if !det(m, &rows, &cols).is_zero() {
                        return k;
                    }
                }
            }
        }
        0
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix() -> impl Strategy<Value = RationalMatrix> {
            (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
                prop::collection::vec(-5i64..6, r * c).prop_map(move |vals| {
                    RationalMatrix::from_rows(
                        vals.chunks(c).map(|ch| ch.iter().map(|&v| rat(v)).collect()).collect(),
                    )
                })
            })
        }

        proptest! {
            #[test]
            fn rank_equals_transpose_rank(m in arb_matrix()) {
                prop_assert_eq!(m.rank(), m.transpose().rank());
            }

            #[test]
            fn rank_nullity(m in arb_matrix()) {
                prop_assert_eq!(m.rank() + m.nullspace().len(), m.cols());
            }

            #[test]
            fn nullspace_vectors_are_in_kernel(m in arb_matrix()) {
                for v in m.nullspace() {
                    prop_assert!(m.mul_vec(&v).iter().all(Rational::is_zero));
                }
            }

            #[test]
            fn rank_matches_minor_oracle(m in arb_matrix()) {
                prop_assert_eq!(m.rank(), rank_by_minors(&m));
            }

            #[test]
            fn solve_round_trip(m in arb_matrix(), coeffs in prop::collection::vec(-4i64..5, 1..5)) {
                // Build a target from independent columns and recover it.
                let basis: Vec<Vec<Rational>> = (0..m.cols()).map(|j| m.column(j)).collect();
                let matrix = RationalMatrix::from_columns(basis.clone());
                prop_assume!(matrix.rank() == basis.len());
                let coeffs: Vec<Rational> = coeffs.iter().take(basis.len())
                    .chain(std::iter::repeat(&0).take(basis.len().saturating_sub(coeffs.len())))
                    .map(|&v| rat(v)).collect();
                let target = matrix.mul_vec(&coeffs);
                prop_assert_eq!(solve_coordinates(&basis, &target).unwrap(), coeffs);
            }
        }
    }
}
