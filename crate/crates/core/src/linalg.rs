//! Small dense helpers for vectors and matrices of dimension at most three.

use crate::real::Real;

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub(crate) fn scaled<T: Real>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|&x| x * s).collect()
}

/// Modified Gram-Schmidt on the columns of `cols`, in place. Returns the
/// diagonal of the triangular factor (signed norms before normalization).
pub(crate) fn gram_schmidt<T: Real>(cols: &mut [Vec<T>]) -> Vec<T> {
    let mut diag = Vec::with_capacity(cols.len());
    for j in 0..cols.len() {
        for i in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let r = dot(&done[i], &rest[0]);
            for (c, &q) in rest[0].iter_mut().zip(&done[i]) {
                *c -= r * q;
            }
        }
        let r = norm(&cols[j]);
        diag.push(r);
        if r > T::zero() {
            for c in cols[j].iter_mut() {
                *c /= r;
            }
        }
    }
    diag
}

/// Largest absolute deviation of `basis^T basis` from the identity.
pub(crate) fn orthonormality_defect<T: Real>(basis: &[Vec<T>]) -> T {
    let mut worst = T::zero();
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let target = if i == j { T::one() } else { T::zero() };
            worst = worst.max((dot(&basis[i], &basis[j]) - target).abs());
        }
    }
    worst
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
pub(crate) fn symmetric_eigenvalues<T: Real>(mut a: Vec<Vec<T>>) -> Vec<T> {
    let n = a.len();
    let two = T::lit(2.0);
    for _sweep in 0..64 {
        let mut off = T::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        if off <= T::epsilon() * T::epsilon() {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q] == T::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (two * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

/// Singular values of `U^T W` where the columns of `U` and `W` are orthonormal
/// bases; these are the cosines of the principal angles between the spans.
pub(crate) fn principal_cosines<T: Real>(u: &[Vec<T>], w: &[Vec<T>]) -> Vec<T> {
    let m: Vec<Vec<T>> = u.iter().map(|ui| w.iter().map(|wj| dot(ui, wj)).collect()).collect();
    let cols = w.len();
    let mut gram = vec![vec![T::zero(); cols]; cols];
    for i in 0..cols {
        for j in 0..cols {
            gram[i][j] = m.iter().map(|row| row[i] * row[j]).sum();
        }
    }
    symmetric_eigenvalues(gram)
        .into_iter()
        .map(|e| e.max(T::zero()).sqrt().min(T::one()))
        .collect()
}

/// Largest principal angle between two subspaces of equal dimension.
pub(crate) fn max_principal_angle<T: Real>(u: &[Vec<T>], w: &[Vec<T>]) -> T {
    if u.is_empty() {
        return T::zero();
    }
    let cmin = principal_cosines(u, w).into_iter().fold(T::one(), T::min);
    angle_from_cosine(cmin)
}

/// Smallest principal angle between two subspaces.
pub(crate) fn min_principal_angle<T: Real>(u: &[Vec<T>], w: &[Vec<T>]) -> T {
    if u.is_empty() || w.is_empty() {
        return T::FRAC_PI_2();
    }
    let cmax = principal_cosines(u, w).into_iter().fold(T::zero(), T::max);
    angle_from_cosine(cmax)
}

// acos loses all precision near 1; use the chordal form there.
fn angle_from_cosine<T: Real>(c: T) -> T {
    let c = c.min(T::one()).max(T::zero());
    let s = ((T::one() - c) * (T::one() + c)).max(T::zero()).sqrt();
    s.atan2(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_recovers_diagonal_spectrum() {
        let ev = symmetric_eigenvalues(vec![vec![2.0, 1.0], vec![1.0, 2.0]]);
        let mut ev = ev;
        ev.sort_by(|a: &f64, b| a.partial_cmp(b).unwrap());
        assert!((ev[0] - 1.0).abs() < 1e-14);
        assert!((ev[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn principal_angle_between_lines() {
        let a = vec![vec![1.0f64, 0.0]];
        let t = 0.3f64;
        let b = vec![vec![t.cos(), t.sin()]];
        assert!((max_principal_angle(&a, &b) - 0.3).abs() < 1e-14);
        assert!((min_principal_angle(&a, &b) - 0.3).abs() < 1e-14);
    }

    #[test]
    fn gram_schmidt_orthonormalizes() {
        let mut cols = vec![vec![2.0f64, 1.0], vec![1.0, 1.0]];
        let d = gram_schmidt(&mut cols);
        assert!(orthonormality_defect(&cols) < 1e-14);
        assert!((d[0] * d[1]).abs() - 1.0 < 1e-14);
    }
}
