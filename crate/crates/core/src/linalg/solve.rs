//! Rank and linear systems over ℚ.

use num_bigint::BigInt;
use num_traits::Zero;

use super::matrix::{QMatrix, QVector};
use super::rational::{common_denominator, Rational};

/// Rank over ℚ by fraction-free (Bareiss) elimination on an integer copy.
pub fn rank(m: &QMatrix) -> usize {
    // Scaling a row by a nonzero integer does not change the rank.
    let mut a: Vec<Vec<BigInt>> = m
        .rows()
        .iter()
        .map(|row| {
            let d = common_denominator(row.iter());
            row.iter()
                .map(|x| x.numer() * (&d / x.denom()))
                .collect()
        })
        .collect();
    let nrows = a.len();
    let ncols = m.ncols();
    let mut r = 0;
    let mut prev_pivot = BigInt::from(1);
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in (r + 1)..nrows {
            for j in (col + 1)..ncols {
                let v = &a[r][col] * &a[i][j] - &a[i][col] * &a[r][j];
                a[i][j] = v / &prev_pivot;
            }
            a[i][col] = BigInt::zero();
        }
        prev_pivot = a[r][col].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form. Returns the reduced rows and pivot columns.
pub fn rref(m: &QMatrix) -> (Vec<QVector>, Vec<usize>) {
    let mut a: Vec<QVector> = m.rows().to_vec();
    let nrows = a.len();
    let ncols = m.ncols();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][col].recip();
        a[r] = a[r].scale(&inv);
        for i in 0..nrows {
            if i != r && !a[i][col].is_zero() {
                let f = -&a[i][col];
                a[i] = a[i].axpy(&f, &a[r]);
            }
        }
        pivots.push(col);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Basis of `{x : M x = 0}` as the rows of the returned matrix.
pub fn nullspace(m: &QMatrix) -> QMatrix {
    let n = m.ncols();
    let (rows, pivots) = rref(m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = QVector::zeros(n);
            v[fc] = Rational::one();
            for (row, &pc) in rows.iter().zip(&pivots) {
                v[pc] = -&row[fc];
            }
            v
        })
        .collect();
    QMatrix::from_rows(basis, n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    Unique(QVector),
    /// Every solution is `particular + Σ c_i · nullspace.row(i)`.
    Affine {
        particular: QVector,
        nullspace: QMatrix,
    },
    Inconsistent,
}

/// Solves `A x = b` exactly.
pub fn solve_linear(a: &QMatrix, b: &QVector) -> Solution {
    assert_eq!(a.nrows(), b.dim(), "row count must match right-hand side");
    let n = a.ncols();
    let augmented = QMatrix::from_rows(
        a.rows()
            .iter()
            .zip(b.iter())
            .map(|(row, bi)| row.iter().cloned().chain([bi.clone()]).collect())
            .collect(),
        n + 1,
    );
    let (rows, pivots) = rref(&augmented);
    if pivots.last() == Some(&n) {
        return Solution::Inconsistent;
    }
    let mut particular = QVector::zeros(n);
    for (row, &pc) in rows.iter().zip(&pivots) {
        particular[pc] = row[n].clone();
    }
    if pivots.len() == n {
        Solution::Unique(particular)
    } else {
        Solution::Affine {
            particular,
            nullspace: nullspace(a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&QMatrix::identity(3)), 3);
        assert_eq!(
            rank(&QMatrix::from_i64(&[&[1, 1, 1], &[-1, 1, 1], &[-1, -1, 1]])),
            3
        );
        assert_eq!(rank(&QMatrix::from_i64(&[&[1, 1, 2], &[2, 2, 4]])), 1);
        assert_eq!(rank(&QMatrix::zeros(2, 3)), 0);
        assert_eq!(rank(&QMatrix::zeros(0, 3)), 0);
        let fractional = QMatrix::new(vec![
            QVector::new(vec![q(1, 2), q(1, 3)]),
            QVector::new(vec![q(3, 2), q(1, 1)]),
        ]);
        assert_eq!(rank(&fractional), 1);
    }

    #[test]
    fn solve_unique() {
        let s = solve_linear(&QMatrix::identity(2), &QVector::from_i64(&[1, 2]));
        assert_eq!(s, Solution::Unique(QVector::from_i64(&[1, 2])));
    }

    #[test]
    fn solve_inconsistent_l1_fixture_system() {
        let a = QMatrix::from_i64(&[&[2, 0], &[2, 2], &[0, 2]]);
        let b = QVector::from_i64(&[1, -1, -1]);
        assert_eq!(solve_linear(&a, &b), Solution::Inconsistent);
    }

    #[test]
    fn solve_zero_system() {
        let s = solve_linear(&QMatrix::zeros(2, 2), &QVector::zeros(2));
        match s {
            Solution::Affine {
                particular,
                nullspace,
            } => {
                assert!(particular.is_zero());
                assert_eq!(nullspace, QMatrix::identity(2));
            }
            other => panic!("expected affine solution, got {other:?}"),
        }
    }

    #[test]
    fn nullspace_is_annihilated() {
        let a = QMatrix::from_i64(&[&[1, 2, 3, 4], &[2, 4, 7, 1]]);
        let ns = nullspace(&a);
        assert_eq!(ns.nrows(), 2);
        for v in ns.rows() {
            assert!(a.mul_vec(v).is_zero());
        }
        assert_eq!(rank(&ns), 2);
    }
}
