//! Exact linear algebra over rational matrices with log-combination
//! right-hand sides.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::Zero;

use crate::error::Result;
use crate::exactlog::ExactLogValue;

#[derive(Debug)]
pub enum SolveOutcome {
    Unique(Vec<ExactLogValue>),
    /// Solution set `particular + span(nullspace)`.
    Underdetermined {
        particular: Vec<ExactLogValue>,
        nullspace: Vec<Vec<BigRational>>,
    },
    Inconsistent,
}

/// Solve `A x = b` exactly, `A` rational `m x n`, `b` exact log values.
pub fn solve_system(a: &[Vec<BigRational>], b: &[ExactLogValue]) -> Result<SolveOutcome> {
    let m = a.len();
    assert_eq!(m, b.len());
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut mat: Vec<Vec<BigRational>> = a.to_vec();
    let mut rhs: Vec<ExactLogValue> = b.to_vec();

    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut row = 0usize;
    for col in 0..n {
        let Some(p) = (row..m).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        rhs.swap(row, p);
        let inv = {
            let piv = mat[row][col].clone();
            piv.recip()
        };
        for c in col..n {
            mat[row][c] = &mat[row][c] * &inv;
        }
        rhs[row] = rhs[row].scale(&inv);
        for r in 0..m {
            if r != row && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in col..n {
                    let delta = &mat[row][c] * &factor;
                    mat[r][c] = &mat[r][c] - delta;
                }
                let delta = rhs[row].scale(&factor);
                rhs[r] = rhs[r].sub(&delta);
            }
        }
        pivot_cols.push(col);
        row += 1;
        if row == m {
            break;
        }
    }

    // consistency of the zero rows
    for r in row..m {
        if rhs[r].try_sign()? != std::cmp::Ordering::Equal {
            return Ok(SolveOutcome::Inconsistent);
        }
    }

    let mut particular = vec![ExactLogValue::zero(); n];
    for (i, &col) in pivot_cols.iter().enumerate() {
        particular[col] = rhs[i].clone();
    }
    if pivot_cols.len() == n {
        return Ok(SolveOutcome::Unique(particular));
    }
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut nullspace = Vec::new();
    for &fc in &free_cols {
        let mut v = vec![BigRational::zero(); n];
        v[fc] = BigRational::from(BigInt::from(1));
        for (i, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -mat[i][fc].clone();
        }
        nullspace.push(v);
    }
    Ok(SolveOutcome::Underdetermined {
        particular,
        nullspace,
    })
}

/// Solve a square rational system `A x = b` with rational right-hand side.
/// Returns `None` when singular.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = a.len();
    let n = a[0].len();
    let mut mat: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut row = 0usize;
    let mut pivots = Vec::new();
    for col in 0..n {
        let Some(p) = (row..m).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(row, p);
        let inv = mat[row][col].clone().recip();
        for c in col..=n {
            mat[row][c] = &mat[row][c] * &inv;
        }
        for r in 0..m {
            if r != row && !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in col..=n {
                    let delta = &mat[row][c] * &factor;
                    mat[r][c] = &mat[r][c] - delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    for r in row..m {
        if !mat[r][n].is_zero() {
            return None;
        }
    }
    if pivots.len() != n {
        return None;
    }
    let mut x = vec![BigRational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = mat[i][n].clone();
    }
    Some(x)
}

/// Rank of an integer matrix, computed exactly.
pub fn int_rank(rows: &[Vec<i64>]) -> usize {
    let mut mat: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&v| BigRational::from(BigInt::from(v)))
                .collect()
        })
        .collect();
    let m = mat.len();
    if m == 0 {
        return 0;
    }
    let n = mat[0].len();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..m).find(|&r| !mat[r][col].is_zero()) else {
            continue;
        };
        mat.swap(rank, p);
        let inv = mat[rank][col].clone().recip();
        for c in col..n {
            mat[rank][c] = &mat[rank][c] * &inv;
        }
        for r in (rank + 1)..m {
            if !mat[r][col].is_zero() {
                let factor = mat[r][col].clone();
                for c in col..n {
                    let delta = &mat[rank][c] * &factor;
                    mat[r][c] = &mat[r][c] - delta;
                }
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    fn rat(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn unique_solution() {
        // x + y = log 2, x - y = 0  => x = y = log 2 / 2
        let a = vec![vec![rat(1), rat(1)], vec![rat(1), rat(-1)]];
        let b = vec![
            ExactLogValue::log_of_int(2),
            ExactLogValue::zero(),
        ];
        match solve_system(&a, &b).unwrap() {
            SolveOutcome::Unique(x) => {
                let half_log2 = ExactLogValue::from_log(
                    rat(2),
                    BigRational::new(BigInt::one(), BigInt::from(2)),
                );
                assert_eq!(x[0], half_log2);
                assert_eq!(x[1], half_log2);
            }
            other => panic!("expected unique, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_detected() {
        let a = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        let b = vec![ExactLogValue::zero(), ExactLogValue::log_of_int(3)];
        assert!(matches!(
            solve_system(&a, &b).unwrap(),
            SolveOutcome::Inconsistent
        ));
    }

    #[test]
    fn underdetermined_nullspace() {
        let a = vec![vec![rat(1), rat(2)]];
        let b = vec![ExactLogValue::zero()];
        match solve_system(&a, &b).unwrap() {
            SolveOutcome::Underdetermined { nullspace, .. } => {
                assert_eq!(nullspace.len(), 1);
                // A * v = 0
                let v = &nullspace[0];
                assert!((&v[0] + &v[1] * rat(2)).is_zero());
            }
            other => panic!("expected underdetermined, got {other:?}"),
        }
    }

    #[test]
    fn rank_examples() {
        assert_eq!(int_rank(&[vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(int_rank(&[vec![1, 0], vec![0, 1]]), 2);
        assert_eq!(int_rank(&[]), 0);
    }
}
