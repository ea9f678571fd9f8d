//! Small dense exact linear algebra over rationals, plus Gaussian elimination
//! with affine-linear right-hand sides (used when solving for residual points
//! symbolically in the parameters).

use crate::linform::{LinForm, Rat};
use num::{One, Zero};

pub type RatVec = Vec<Rat>;
pub type RatMat = Vec<RatVec>;

pub fn zeros(n: usize) -> RatVec {
    vec![Rat::zero(); n]
}

pub fn identity(n: usize) -> RatMat {
    let mut m = vec![zeros(n); n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Rat::one();
    }
    m
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn mat_vec(m: &RatMat, v: &[Rat]) -> RatVec {
    m.iter().map(|row| dot(row, v)).collect()
}

pub fn mat_mul(a: &RatMat, b: &RatMat) -> RatMat {
    let n = a.len();
    let p = b[0].len();
    let mut out = vec![zeros(p); n];
    for i in 0..n {
        for k in 0..b.len() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..p {
                let t = &a[i][k] * &b[k][j];
                out[i][j] += t;
            }
        }
    }
    out
}

pub fn mat_sub(a: &RatMat, b: &RatMat) -> RatMat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

/// Determinant by fraction-preserving Gaussian elimination.
pub fn det(m: &RatMat) -> Rat {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Rat::one();
    for col in 0..n {
        let pivot = match (col..n).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if pivot != col {
            a.swap(pivot, col);
            d = -d;
        }
        let p = a[col][col].clone();
        d *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    d
}

/// Inverse of a square rational matrix, if nonsingular.
pub fn invert(m: &RatMat) -> Option<RatMat> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col].clone();
        for c in 0..n {
            a[col][c] /= &p;
            inv[col][c] /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
                let t = &f * &inv[col][c];
                inv[r][c] -= t;
            }
        }
    }
    Some(inv)
}

/// Solve the square system `A x = b` where the right-hand side entries are
/// affine-linear forms in the parameters. Returns `None` when `A` is singular.
pub fn solve_linform_system(a: &RatMat, b: &[LinForm]) -> Option<Vec<LinForm>> {
    let n = a.len();
    debug_assert_eq!(b.len(), n);
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(pivot, col);
        rhs.swap(pivot, col);
        let p = m[col][col].clone();
        for c in 0..n {
            m[col][c] /= &p;
        }
        rhs[col] = rhs[col].scale(&(Rat::one() / &p));
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in 0..n {
                let t = &f * &m[col][c];
                m[r][c] -= t;
            }
            let t = rhs[col].scale(&f);
            rhs[r] = &rhs[r] - &t;
        }
    }
    Some(rhs)
}

/// Solve a possibly overdetermined consistent system `A x = b` with rational
/// data, where `A` is `rows x cols` of full column rank. Returns `None` when
/// inconsistent or rank-deficient.
pub fn solve_rectangular(a: &RatMat, b: &[Rat]) -> Option<RatVec> {
    let rows = a.len();
    let cols = a[0].len();
    let mut m = a.to_vec();
    let mut rhs = b.to_vec();
    let mut pivot_row = 0usize;
    let mut pivots = Vec::new();
    for col in 0..cols {
        let pr = (pivot_row..rows).find(|&r| !m[r][col].is_zero())?;
        m.swap(pr, pivot_row);
        rhs.swap(pr, pivot_row);
        let p = m[pivot_row][col].clone();
        for c in col..cols {
            m[pivot_row][c] /= &p;
        }
        rhs[pivot_row] /= &p;
        for r in 0..rows {
            if r == pivot_row || m[r][col].is_zero() {
                continue;
            }
            let f = m[r][col].clone();
            for c in col..cols {
                let t = &f * &m[pivot_row][c];
                m[r][c] -= t;
            }
            let t = &f * &rhs[pivot_row];
            rhs[r] -= t;
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    // Remaining rows must be consistent.
    for r in pivot_row..rows {
        if !rhs[r].is_zero() {
            return None;
        }
    }
    Some(rhs[..cols].to_vec())
}

/// Rank of a rational matrix.
pub fn rank(m: &RatMat) -> usize {
    if m.is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a = m.to_vec();
    let mut r0 = 0usize;
    for col in 0..cols {
        if r0 == rows {
            break;
        }
        let pivot = match (r0..rows).find(|&r| !a[r][col].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        a.swap(pivot, r0);
        let p = a[r0][col].clone();
        for r in r0 + 1..rows {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..cols {
                let t = &f * &a[r0][c];
                a[r][c] -= t;
            }
        }
        r0 += 1;
    }
    r0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linform::rat;

    fn m2(a: i64, b: i64, c: i64, d: i64) -> RatMat {
        vec![vec![rat(a, 1), rat(b, 1)], vec![rat(c, 1), rat(d, 1)]]
    }

    #[test]
    fn det_and_inverse() {
        let m = m2(2, 1, 1, 1);
        assert_eq!(det(&m), rat(1, 1));
        let inv = invert(&m).unwrap();
        assert_eq!(mat_mul(&m, &inv), identity(2));
        assert!(invert(&m2(1, 2, 2, 4)).is_none());
        assert_eq!(det(&m2(1, 2, 2, 4)), rat(0, 1));
    }

    #[test]
    fn linform_solve_roundtrip() {
        // 2x + y = k1, x + y = k2  =>  x = k1 - k2, y = 2k2 - k1.
        let a = m2(2, 1, 1, 1);
        let b = vec![LinForm::sym("k1"), LinForm::sym("k2")];
        let x = solve_linform_system(&a, &b).unwrap();
        assert_eq!(x[0].to_string(), "k1 - k2");
        assert_eq!(x[1].to_string(), "-k1 + 2k2");
    }

    #[test]
    fn rectangular_solver() {
        // Overdetermined consistent: coordinates of a root in a simple basis.
        let a = vec![
            vec![rat(1, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 1)],
            vec![rat(1, 1), rat(1, 1)],
        ];
        let b = vec![rat(2, 1), rat(3, 1), rat(5, 1)];
        assert_eq!(solve_rectangular(&a, &b).unwrap(), vec![rat(2, 1), rat(3, 1)]);
        let bad = vec![rat(2, 1), rat(3, 1), rat(6, 1)];
        assert!(solve_rectangular(&a, &bad).is_none());
        assert_eq!(rank(&a), 2);
    }
}
