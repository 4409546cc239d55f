//! Small exact linear algebra over `Rational64`.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

pub type RatMatrix = Vec<Vec<Rational64>>;

pub fn rat(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

pub fn to_rational_matrix(m: &[Vec<i64>]) -> RatMatrix {
    m.iter().map(|row| row.iter().map(|&x| rat(x)).collect()).collect()
}

pub fn identity(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { rat(1) } else { rat(0) }).collect())
        .collect()
}

pub fn transpose(m: &RatMatrix) -> RatMatrix {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j]).collect())
        .collect()
}

pub fn mat_vec(m: &RatMatrix, v: &[Rational64]) -> Vec<Rational64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn dot(a: &[Rational64], b: &[Rational64]) -> Rational64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gauss-Jordan inverse; `None` when singular.
pub fn invert(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m.clone();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for j in 0..n {
                    let (ac, ic) = (a[col][j], inv[col][j]);
                    a[r][j] -= f * ac;
                    inv[r][j] -= f * ic;
                }
            }
        }
    }
    Some(inv)
}

/// Basis of `{x : row · x = 0 for every row}` in `Q^dim`.
pub fn null_space(rows: &[Vec<Rational64>], dim: usize) -> RatMatrix {
    let mut a: RatMatrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        if r >= a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let pv = a[r][c];
        for x in a[r].iter_mut().take(dim) {
            *x /= pv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c];
                for (x, &v) in row.iter_mut().zip(&pivot_row).take(dim) {
                    *x -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![rat(0); dim];
            x[f] = rat(1);
            for (row, &pc) in pivots.iter().enumerate() {
                x[pc] = -a[row][f];
            }
            x
        })
        .collect()
}

/// Scale a rational vector by a positive factor so that all entries are integers.
pub fn clear_denominators(v: &[Rational64]) -> Vec<i64> {
    let l = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| (x * rat(l)).to_integer()).collect()
}

pub fn is_unit_or_zero(x: &Rational64) -> bool {
    x.is_zero() || x.abs().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_a2_cartan() {
        let m = to_rational_matrix(&[vec![2, -1], vec![-1, 2]]);
        let inv = invert(&m).unwrap();
        assert_eq!(inv[0][0], Rational64::new(2, 3));
        assert_eq!(inv[0][1], Rational64::new(1, 3));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = to_rational_matrix(&[vec![1, 2], vec![2, 4]]);
        assert!(invert(&m).is_none());
    }

    #[test]
    fn null_space_of_single_row() {
        let ns = null_space(&[vec![rat(1), rat(1), rat(0)]], 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!((v[0] + v[1]).is_zero());
        }
    }

    #[test]
    fn clearing_keeps_signs() {
        let v = clear_denominators(&[Rational64::new(-1, 2), Rational64::new(1, 3)]);
        assert_eq!(v, vec![-3, 2]);
    }
}
