//! Exact integer nullspace via fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

/// Kernel basis of an integer matrix, as exact rational vectors.
/// Pivoting is deterministic: for each column in order, the first row
/// (smallest index) with a nonzero entry is chosen.
pub fn kernel_basis(mut m: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigRational>> {
    let orig = m.clone();
    let rows = m.len();
    let mut pivot: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..cols {
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let v = (&m[r][c] * &m[i][j] - &m[i][c] * &m[r][j]) / &prev;
                m[i][j] = v;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivot.push((r, c));
        r += 1;
        if r == rows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivot.iter().map(|&(_, c)| c).collect();
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![BigRational::zero(); cols];
        v[f] = BigRational::from_integer(BigInt::from(1));
        for &(pr, pc) in pivot.iter().rev() {
            let mut s = BigRational::zero();
            for j in (pc + 1)..cols {
                if !m[pr][j].is_zero() && !v[j].is_zero() {
                    s += BigRational::from_integer(m[pr][j].clone()) * &v[j];
                }
            }
            v[pc] = -s / BigRational::from_integer(m[pr][pc].clone());
        }
        basis.push(v);
    }
    for v in &basis {
        for row in &orig {
            let s: BigRational = row
                .iter()
                .zip(v)
                .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                .map(|(a, b)| BigRational::from_integer(a.clone()) * b)
                .sum();
            assert!(s.is_zero(), "nullspace back-substitution inconsistency");
        }
    }
    basis
}
