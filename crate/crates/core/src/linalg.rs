//! Dense exact linear algebra over a [`FieldSpec`].
//!
//! Matrices are row-major `Vec<Vec<FieldElement>>`.

use crate::fields::{FieldElement, FieldSpec};

pub type Matrix = Vec<Vec<FieldElement>>;

pub fn identity(field: FieldSpec, n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect())
        .collect()
}

pub fn matmul(a: &Matrix, b: &Matrix, field: FieldSpec) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = field.zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(&row[k] * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// Row-reduces in place to reduced echelon form; returns pivot columns.
pub fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("pivot is nonzero");
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(pivot_row.iter()) {
                    if !y.is_zero() {
                        *x = &*x - &(&f * y);
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &Matrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Basis of `{v : m v = 0}` for a matrix with `cols` columns.
pub fn kernel(m: &Matrix, cols: usize, field: FieldSpec) -> Vec<Vec<FieldElement>> {
    let mut a = m.clone();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![field.zero(); cols];
            v[f] = field.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -&a[r][f];
            }
            v
        })
        .collect()
}

/// Some solution of `m x = b`, if one exists.
pub fn solve(m: &Matrix, b: &[FieldElement], cols: usize, field: FieldSpec) -> Option<Vec<FieldElement>> {
    let mut aug: Matrix = m
        .iter()
        .zip(b.iter())
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![field.zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug[r][cols].clone();
    }
    Some(x)
}

pub fn determinant(m: &Matrix, field: FieldSpec) -> FieldElement {
    let n = m.len();
    let mut a = m.clone();
    let mut det = field.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return field.zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det = &det * &a[c][c];
        let inv = a[c][c].inv().expect("pivot is nonzero");
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] = &a[i][j] - &t;
            }
        }
    }
    det
}

pub fn inverse(m: &Matrix, field: FieldSpec) -> Option<Matrix> {
    let n = m.len();
    let id = identity(field, n);
    let mut aug: Matrix = m
        .iter()
        .zip(id)
        .map(|(row, idr)| row.iter().cloned().chain(idr).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(field: FieldSpec, rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| field.element(x)).collect())
            .collect()
    }

    #[test]
    fn determinant_and_inverse() {
        let q = FieldSpec::Rationals;
        let m = mat(q, &[&[1, 2], &[3, 4]]);
        assert_eq!(determinant(&m, q), q.element(-2));
        let inv = inverse(&m, q).unwrap();
        assert_eq!(matmul(&m, &inv, q), identity(q, 2));
        let singular = mat(q, &[&[1, 2], &[2, 4]]);
        assert!(inverse(&singular, q).is_none());
        assert!(determinant(&singular, q).is_zero());
    }

    #[test]
    fn kernel_and_solve() {
        let f = FieldSpec::prime(5).unwrap();
        let m = mat(f, &[&[1, 1, 0], &[0, 0, 1]]);
        let k = kernel(&m, 3, f);
        assert_eq!(k.len(), 1);
        assert_eq!(k[0], vec![f.element(4), f.one(), f.zero()]);
        let x = solve(&m, &[f.element(2), f.element(3)], 3, f).unwrap();
        assert_eq!(x, vec![f.element(2), f.zero(), f.element(3)]);
        let inconsistent = mat(f, &[&[1, 1], &[1, 1]]);
        assert!(solve(&inconsistent, &[f.zero(), f.one()], 2, f).is_none());
        assert_eq!(rank(&inconsistent), 1);
    }
}
