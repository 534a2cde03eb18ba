//! Dense exact linear algebra over Q.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QMatrix = Vec<Vec<BigRational>>;

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// In-place reduced row echelon form; returns pivot columns. Zero rows are
/// removed.
pub fn rref(m: &mut QMatrix, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row >= m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r != row && !other[col].is_zero() {
                let f = other[col].clone();
                for (x, y) in other.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    m.truncate(row);
    pivots
}

/// Kernel of an r×n matrix: (basis vectors, free columns). Basis vector i
/// has a 1 in free column i and 0 in the other free columns.
pub fn kernel(m: &QMatrix, ncols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut a = m.clone();
    let pivots = rref(&mut a, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect();
    (basis, free)
}

pub fn mat_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .filter(|(x, _)| !x.is_zero())
                        .fold(BigRational::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> QMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }).collect())
        .collect()
}

pub fn to_f64(m: &QMatrix) -> Vec<Vec<f64>> {
    use num_traits::ToPrimitive;
    m.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect()
}

pub fn is_integral(m: &QMatrix) -> bool {
    m.iter().flatten().all(|x| x.is_integer())
}

/// Largest absolute entry.
pub fn max_abs(m: &QMatrix) -> BigRational {
    m.iter().flatten().map(|x| x.abs()).max().unwrap_or_else(BigRational::zero)
}
