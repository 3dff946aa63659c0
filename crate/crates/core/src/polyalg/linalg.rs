//! Small dense complex linear algebra used by resultants and Wronskians.

use num_traits::{One, Zero};

use crate::scalar::{Cx, Scalar};

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant<T: Scalar>(mut a: Vec<Vec<Cx<T>>>) -> Cx<T> {
    let n = a.len();
    let mut det = Cx::one();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].norm().partial_cmp(&a[j][col].norm()).unwrap_or(std::cmp::Ordering::Equal))
            .unwrap_or(col);
        if a[pivot][col].is_zero() {
            return Cx::zero();
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det = det * p;
        for row in col + 1..n {
            let f = a[row][col] / p;
            if f.is_zero() {
                continue;
            }
            let (top, bottom) = a.split_at_mut(row);
            for (x, &v) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x = *x - f * v;
            }
        }
    }
    det
}

/// Product of row 2-norms, an upper bound on `|det|`.
pub fn hadamard_bound<T: Scalar>(a: &[Vec<Cx<T>>]) -> T {
    a.iter()
        .map(|row| row.iter().map(|c| c.norm_sqr()).sum::<T>().sqrt())
        .fold(T::one(), |acc, n| acc * n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::creal;

    #[test]
    fn small_determinants() {
        let m = vec![vec![creal(1.0), creal(2.0)], vec![creal(3.0), creal(4.0)]];
        assert!((determinant(m.clone()) - creal(-2.0)).norm() < 1e-14);
        assert!(hadamard_bound(&m) >= 2.0);
        let singular = vec![vec![creal(1.0), creal(2.0)], vec![creal(2.0), creal(4.0)]];
        assert!(determinant(singular).norm() < 1e-14);
    }
}
