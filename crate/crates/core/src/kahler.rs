// SPDX-License-Identifier: Apache-2.0

//! Kähler angles of real subspaces of `g_alpha` and the `P`/`F` splitting of
//! `J` restricted to such a subspace.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraVector, ModelCHn};
use crate::error::{domain, Result};
use crate::linalg::{orthonormality_defect, orthonormalize, project};
use crate::tolerances::{ANGLE_CONSTANCY, BASIS, MEMBERSHIP};

/// A real subspace of `g_alpha` with an orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KahlerSubspace {
    basis: Vec<AlgebraVector>,
    phi: f64,
}

impl KahlerSubspace {
    /// Orthonormalises `vectors` (which must lie in `g_alpha`) and requires the
    /// Kähler angle to be constant on the span.
    pub fn from_vectors(vectors: &[AlgebraVector]) -> Result<Self> {
        if vectors.is_empty() {
            return domain("empty subspace");
        }
        if vectors.iter().any(|v| !v.is_in_galpha(MEMBERSHIP)) {
            return domain("subspace must lie in g_alpha");
        }
        let basis = orthonormalize(vectors, &[], MEMBERSHIP);
        if basis.len() != vectors.len() {
            return domain("spanning vectors are linearly dependent");
        }
        let angles = principal_kahler_angles(&basis);
        let (lo, hi) = angles.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &a| (l.min(a), h.max(a)));
        if hi - lo > ANGLE_CONSTANCY.sqrt() {
            return domain(format!("Kähler angle is not constant (range [{lo}, {hi}])"));
        }
        Ok(Self { basis, phi: angles.iter().sum::<f64>() / angles.len() as f64 })
    }

    pub fn basis(&self) -> &[AlgebraVector] {
        &self.basis
    }

    /// Real dimension.
    pub fn k(&self) -> usize {
        self.basis.len()
    }

    /// The constant Kähler angle.
    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn is_complex(&self) -> bool {
        self.phi.abs() <= ANGLE_CONSTANCY.sqrt()
    }

    pub fn is_totally_real(&self) -> bool {
        (self.phi - FRAC_PI_2).abs() <= ANGLE_CONSTANCY.sqrt()
    }

    pub fn project(&self, v: &AlgebraVector) -> AlgebraVector {
        project(v, &self.basis)
    }

    pub fn contains(&self, v: &AlgebraVector, tol: f64) -> bool {
        (v - &self.project(v)).norm() <= tol * v.norm().max(1.0)
    }

    /// Matrix of `J` compressed to the subspace: `M_ij = <J b_j, b_i>`.
    pub fn compressed_j(&self) -> DMatrix<f64> {
        let k = self.k();
        DMatrix::from_fn(k, k, |i, j| self.basis[j].apply_j().dot(&self.basis[i]))
    }
}

/// Kähler angles `arccos(sigma_i)` from the singular values of the compressed
/// `J`, sorted ascending.
pub fn principal_kahler_angles(basis: &[AlgebraVector]) -> Vec<f64> {
    let k = basis.len();
    let m = DMatrix::from_fn(k, k, |i, j| basis[j].apply_j().dot(&basis[i]));
    let mut angles: Vec<f64> = m.singular_values().iter().map(|s| s.clamp(0.0, 1.0).acos()).collect();
    angles.sort_by(f64::total_cmp);
    angles
}

/// Angle between `Jv` and the subspace for a nonzero `v` in it.
pub fn kahler_angle(subspace: &KahlerSubspace, v: &AlgebraVector) -> Result<f64> {
    let norm = v.norm();
    if norm == 0.0 {
        return domain("Kähler angle of the zero vector");
    }
    if !subspace.contains(v, MEMBERSHIP) {
        return domain("vector is not in the subspace");
    }
    let c = subspace.project(&v.apply_j()).norm() / norm;
    Ok(c.clamp(0.0, 1.0).acos())
}

/// Constant-angle subspace of real dimension `k`. For `phi < pi/2` pair `j`
/// spans `e_{4j+1}` and `cos(phi) e_{4j+2} + sin(phi) e_{4j+4}` (one-based);
/// for `phi = pi/2` the span of `e_1, e_3, e_5, ..`.
pub fn build_constant_angle_subspace(model: &ModelCHn, k: usize, phi: f64) -> Result<KahlerSubspace> {
    if !(0.0..=FRAC_PI_2 + 1e-15).contains(&phi) || !phi.is_finite() {
        return domain(format!("Kähler angle {phi} outside [0, pi/2]"));
    }
    if k == 0 {
        return domain("subspace dimension must be positive");
    }
    let real = (phi - FRAC_PI_2).abs() <= 1e-15;
    let dim = model.dim_galpha();
    let vectors: Vec<AlgebraVector> = if real {
        if 2 * k > dim {
            return domain(format!(
                "no room for a totally real subspace of dimension {k} in g_alpha of dimension {dim}"
            ));
        }
        (0..k).map(|i| model.galpha(2 * i)).collect()
    } else {
        if !k.is_multiple_of(2) {
            return domain(format!("dimension k = {k} must be even when phi < pi/2"));
        }
        if 2 * k > dim {
            return domain(format!("no room for {} angle pairs in g_alpha of dimension {dim}", k / 2));
        }
        let (s, c) = phi.sin_cos();
        (0..k / 2)
            .flat_map(|j| {
                let first = model.galpha(4 * j);
                let second = model.galpha(4 * j + 1) * c + model.galpha(4 * j + 3) * s;
                [first, second]
            })
            .collect()
    };
    let basis = orthonormalize(&vectors, &[], MEMBERSHIP);
    debug_assert!(orthonormality_defect(&basis) <= BASIS);
    Ok(KahlerSubspace { basis, phi: if real { FRAC_PI_2 } else { phi } })
}

/// `J xi = P xi + F xi` with `F xi` the projection onto the subspace.
pub fn pf_decompose(subspace: &KahlerSubspace, xi: &AlgebraVector) -> Result<(AlgebraVector, AlgebraVector)> {
    if !subspace.contains(xi, MEMBERSHIP) {
        return domain("vector is not in the subspace");
    }
    let jxi = xi.apply_j();
    let f = subspace.project(&jxi);
    Ok((&jxi - &f, f))
}
