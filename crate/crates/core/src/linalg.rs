// SPDX-License-Identifier: Apache-2.0

//! Small dense helpers on top of nalgebra: orthonormalisation, projections,
//! symmetric spectra and eigenvalue clustering.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::algebra::AlgebraVector;
use crate::tolerances::CLUSTER_REL;

/// Modified Gram-Schmidt; vectors whose residual norm falls below `tol` are
/// dropped. `against` is an orthonormal set to project out first.
pub fn orthonormalize(vectors: &[AlgebraVector], against: &[AlgebraVector], tol: f64) -> Vec<AlgebraVector> {
    let mut out: Vec<AlgebraVector> = Vec::new();
    for v in vectors {
        let mut q = v.clone();
        // two passes for stability
        for _ in 0..2 {
            for b in against.iter().chain(out.iter()) {
                let c = q.dot(b);
                q -= &(b * c);
            }
        }
        let norm = q.norm();
        if norm > tol {
            out.push(q * (1.0 / norm));
        }
    }
    out
}

/// Orthogonal projection onto the span of an orthonormal set.
pub fn project(v: &AlgebraVector, basis: &[AlgebraVector]) -> AlgebraVector {
    let mut out = AlgebraVector::zeros(v.n());
    for b in basis {
        out += &(b * v.dot(b));
    }
    out
}

/// Component of `v` orthogonal to an orthonormal set.
pub fn reject(v: &AlgebraVector, basis: &[AlgebraVector]) -> AlgebraVector {
    v - &project(v, basis)
}

/// Largest `|<b_i, b_j> - delta_ij|`.
pub fn orthonormality_defect(basis: &[AlgebraVector]) -> f64 {
    let mut worst = 0.0f64;
    for (i, a) in basis.iter().enumerate() {
        for (j, b) in basis.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.dot(b) - target).abs());
        }
    }
    worst
}

/// Coordinates of `v` in an orthonormal basis.
pub fn coordinates(v: &AlgebraVector, basis: &[AlgebraVector]) -> DVector<f64> {
    DVector::from_iterator(basis.len(), basis.iter().map(|b| v.dot(b)))
}

/// Vector with the given coordinates in `basis`.
pub fn combine(coeffs: &DVector<f64>, basis: &[AlgebraVector]) -> AlgebraVector {
    let mut out = AlgebraVector::zeros(basis[0].n());
    for (c, b) in coeffs.iter().zip(basis) {
        out += &(b * *c);
    }
    out
}

/// Matrix with the vectors' flat coordinates as columns.
pub fn column_matrix(vectors: &[AlgebraVector]) -> DMatrix<f64> {
    let rows = vectors.first().map_or(0, |v| v.dim());
    DMatrix::from_fn(rows, vectors.len(), |i, j| vectors[j].as_slice()[i])
}

pub fn symmetry_defect(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).amax()
}

/// Eigenvalues (ascending) and matching eigenvector columns of the symmetric
/// part of `m`.
pub fn symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let sym = (m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn same_cluster(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

/// Groups sorted values into `(mean, multiplicity)` clusters; neighbours merge
/// when they are within `rel` relative distance.
pub fn cluster_with(sorted: &[f64], rel: f64) -> Vec<(f64, usize)> {
    let mut groups: Vec<Vec<f64>> = Vec::new();
    for &x in sorted {
        match groups.last_mut() {
            Some(g) if same_cluster(*g.last().unwrap(), x, rel) => g.push(x),
            _ => groups.push(vec![x]),
        }
    }
    groups.into_iter().map(|g| (g.iter().sum::<f64>() / g.len() as f64, g.len())).collect()
}

pub fn cluster(sorted: &[f64]) -> Vec<(f64, usize)> {
    cluster_with(sorted, CLUSTER_REL)
}

/// 2-norm condition number via singular values.
pub fn condition_number(m: &DMatrix<f64>) -> f64 {
    let sv = m.singular_values();
    let max = sv.max();
    let min = sv.min();
    if min == 0.0 {
        f64::INFINITY
    } else {
        max / min
    }
}

/// Coefficients `[c3, c2, c1, c0]` of `det(M - x I)` for a 3x3 matrix, so the
/// leading coefficient is `-1`.
pub fn char_poly_3x3(m: &DMatrix<f64>) -> [f64; 4] {
    assert_eq!(m.shape(), (3, 3));
    let tr = m.trace();
    let minors = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)]
        - m[(1, 2)] * m[(2, 1)];
    [-1.0, tr, -minors, m.determinant()]
}

/// Horner evaluation with coefficients from the highest degree down.
pub fn poly_eval(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, c| acc * x + c)
}

/// Symmetric Hausdorff distance between two finite sets of reals.
pub fn hausdorff(a: &[f64], b: &[f64]) -> f64 {
    let one_way = |p: &[f64], q: &[f64]| {
        p.iter().map(|x| q.iter().map(|y| (x - y).abs()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    if a.is_empty() || b.is_empty() {
        return if a.is_empty() && b.is_empty() { 0.0 } else { f64::INFINITY };
    }
    one_way(a, b).max(one_way(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_schmidt_drops_dependent_vectors() {
        let a = AlgebraVector::new(1.0, &[1.0, 0.0], 0.0);
        let b = AlgebraVector::new(2.0, &[2.0, 0.0], 0.0);
        let c = AlgebraVector::new(0.0, &[1.0, 1.0], 1.0);
        let q = orthonormalize(&[a, b, c], &[], 1e-10);
        assert_eq!(q.len(), 2);
        assert!(orthonormality_defect(&q) < 1e-15);
    }

    #[test]
    fn clustering_merges_close_values() {
        let c = cluster(&[0.5, 0.5 + 1e-12, 1.0, 2.0, 2.0]);
        assert_eq!(c.len(), 3);
        assert_eq!(c[0].1, 2);
        assert_eq!(c[2].1, 2);
    }

    #[test]
    fn char_poly_of_diagonal() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 2.0, 3.0]));
        let p = char_poly_3x3(&m);
        for x in [1.0, 2.0, 3.0] {
            assert!(poly_eval(&p, x).abs() < 1e-14);
        }
        assert_eq!(poly_eval(&p, 0.0), 6.0);
    }

    #[test]
    fn hausdorff_of_sets() {
        assert_eq!(hausdorff(&[1.0, 2.0], &[2.0, 1.0]), 0.0);
        assert!((hausdorff(&[1.0], &[1.0, 3.0]) - 2.0).abs() < 1e-15);
    }
}
