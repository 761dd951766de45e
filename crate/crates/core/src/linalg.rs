//! Dense LU factorization with partial pivoting.

use std::ops::{Index, IndexMut};

use crate::error::LinalgError;
use crate::scalar::Real;

const SINGULAR_PIVOT: f64 = 1e-300;

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<T> {
    n: usize,
    entries: Vec<T>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![T::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(LinalgError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Ok(Self { n, entries })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let entries = (0..n * n).map(|idx| f(idx / n, idx % n)).collect();
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn mul_vec(&self, x: &[T]) -> Result<Vec<T>, LinalgError> {
        if x.len() != self.n {
            return Err(LinalgError::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok((0..self.n)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (&a, &b)| acc + a * b)
            })
            .collect())
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.entries[i * self.n + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.entries[i * self.n + j]
    }
}

/// `PA = LU`, unit lower factor and upper factor packed in one matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LuFactors<T> {
    lu: DenseMatrix<T>,
    /// `perm[i]` is the original row placed at position `i`.
    perm: Vec<usize>,
}

impl<T: Real> LuFactors<T> {
    pub fn dim(&self) -> usize {
        self.lu.n
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn lower(&self) -> DenseMatrix<T> {
        DenseMatrix::from_fn(self.dim(), |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.lu[(i, j)],
            std::cmp::Ordering::Equal => T::one(),
            std::cmp::Ordering::Less => T::zero(),
        })
    }

    pub fn upper(&self) -> DenseMatrix<T> {
        DenseMatrix::from_fn(
            self.dim(),
            |i, j| if j >= i { self.lu[(i, j)] } else { T::zero() },
        )
    }

    pub fn solve(&self, rhs: &[T]) -> Result<Vec<T>, LinalgError> {
        lu_solve(self, rhs)
    }
}

pub fn lu_factor<T: Real>(m: &DenseMatrix<T>) -> Result<LuFactors<T>, LinalgError> {
    let n = m.n;
    for i in 0..n {
        for j in 0..n {
            if !m[(i, j)].is_finite() {
                return Err(LinalgError::NonFinite { row: i, col: j });
            }
        }
    }
    let tiny = T::lit(SINGULAR_PIVOT).max(T::min_positive_value());
    let mut lu = m.clone();
    let mut perm: Vec<usize> = (0..n).collect();

    for col in 0..n {
        let (pivot_row, pivot_abs) =
            (col..n)
                .map(|r| (r, lu[(r, col)].abs()))
                .fold(
                    (col, T::zero()),
                    |best, cand| if cand.1 > best.1 { cand } else { best },
                );
        if pivot_abs < tiny {
            return Err(LinalgError::SingularMatrix {
                column: col,
                pivot: pivot_abs.to_f64_lossy(),
            });
        }
        if pivot_row != col {
            for j in 0..n {
                lu.entries.swap(col * n + j, pivot_row * n + j);
            }
            perm.swap(col, pivot_row);
        }
        let pivot = lu[(col, col)];
        for r in col + 1..n {
            let factor = lu[(r, col)] / pivot;
            lu[(r, col)] = factor;
            if factor != T::zero() {
                for j in col + 1..n {
                    let u = lu[(col, j)];
                    lu[(r, j)] = lu[(r, j)] - factor * u;
                }
            }
        }
    }
    Ok(LuFactors { lu, perm })
}

pub fn lu_solve<T: Real>(fact: &LuFactors<T>, rhs: &[T]) -> Result<Vec<T>, LinalgError> {
    let n = fact.dim();
    if rhs.len() != n {
        return Err(LinalgError::DimensionMismatch {
            expected: n,
            found: rhs.len(),
        });
    }
    let lu = &fact.lu;
    let mut x: Vec<T> = fact.perm.iter().map(|&p| rhs[p]).collect();
    for i in 0..n {
        let row = lu.row(i);
        let s = (0..i).fold(x[i], |acc, j| acc - row[j] * x[j]);
        x[i] = s;
    }
    for i in (0..n).rev() {
        let row = lu.row(i);
        let s = (i + 1..n).fold(x[i], |acc, j| acc - row[j] * x[j]);
        x[i] = s / row[i];
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    #[test]
    fn identity_factors_trivially() {
        let f = lu_factor(&DenseMatrix::<f64>::identity(4)).unwrap();
        assert_eq!(f.lower(), DenseMatrix::identity(4));
        assert_eq!(f.upper(), DenseMatrix::identity(4));
        assert_eq!(f.permutation(), &[0, 1, 2, 3]);
        assert_eq!(
            f.solve(&[1.0, -2.0, 3.5, 0.0]).unwrap(),
            vec![1.0, -2.0, 3.5, 0.0]
        );
    }

    #[test]
    fn permutation_matrix_pivots() {
        let m = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let f = lu_factor(&m).unwrap();
        assert_eq!(f.permutation(), &[1, 0]);
        assert_eq!(f.solve(&[2.0, 3.0]).unwrap(), vec![3.0, 2.0]);
    }

    #[test]
    fn rank_one_is_singular() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(
            lu_factor(&m),
            Err(LinalgError::SingularMatrix { .. })
        ));
    }

    #[test]
    fn non_finite_rejected() {
        let m = DenseMatrix::from_rows(&[vec![1.0, f64::NAN], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            lu_factor(&m),
            Err(LinalgError::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn two_by_two_hand_solution() {
        let m = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let x = lu_solve(&lu_factor(&m).unwrap(), &[3.0, 4.0]).unwrap();
        assert_abs_diff_eq!(x[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(x[1], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn dimension_mismatch() {
        let f = lu_factor(&DenseMatrix::<f64>::identity(3)).unwrap();
        assert_eq!(
            lu_solve(&f, &[1.0, 2.0]),
            Err(LinalgError::DimensionMismatch {
                expected: 3,
                found: 2
            })
        );
    }

    fn diag_dominant(n: usize, rng: &mut impl Rng) -> DenseMatrix<f64> {
        let mut m = DenseMatrix::<f64>::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        for i in 0..n {
            let off: f64 = (0..n).filter(|&j| j != i).map(|j| m[(i, j)].abs()).sum();
            m[(i, i)] = off + 1.0 + rng.random_range(0.0..1.0);
        }
        m
    }

    #[test]
    fn recovers_constructed_solution() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        let a = diag_dominant(50, &mut rng);
        let x_true: Vec<f64> = (0..50).map(|_| rng.random_range(-5.0..5.0)).collect();
        let b = a.mul_vec(&x_true).unwrap();
        let x = lu_factor(&a).unwrap().solve(&b).unwrap();
        for (xi, ti) in x.iter().zip(&x_true) {
            assert_abs_diff_eq!(xi, ti, epsilon = 1e-10);
        }
    }

    #[test]
    fn residual_bound_on_random_systems() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for trial in 0..100 {
            let n = 1 + (trial * 2) % 200;
            let a = diag_dominant(n, &mut rng);
            let b: Vec<f64> = (0..n).map(|_| rng.random_range(-10.0..10.0)).collect();
            let x = lu_factor(&a).unwrap().solve(&b).unwrap();
            let ax = a.mul_vec(&x).unwrap();
            let resid = ax
                .iter()
                .zip(&b)
                .fold(0.0_f64, |m, (p, q)| m.max((p - q).abs()));
            let bnorm = b.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            assert!(resid <= 1e-10 * (1.0 + bnorm), "n={n}: residual {resid}");
        }
    }

    #[test]
    fn solve_is_bit_deterministic() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let a = diag_dominant(30, &mut rng);
        let b: Vec<f64> = (0..30).map(|i| i as f64).collect();
        let x1 = lu_factor(&a).unwrap().solve(&b).unwrap();
        let x2 = lu_factor(&a).unwrap().solve(&b).unwrap();
        assert_eq!(
            x1.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
            x2.iter().map(|v| v.to_bits()).collect::<Vec<_>>()
        );
    }
}
