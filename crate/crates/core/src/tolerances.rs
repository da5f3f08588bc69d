// SPDX-License-Identifier: Apache-2.0

//! Pinned numerical tolerances shared by the library, the tests and `verify`.

/// Relative tolerance for merging eigenvalues into one cluster:
/// `|a - b| <= CLUSTER_REL * max(1, |a|)`.
pub const CLUSTER_REL: f64 = 1e-8;

/// Orthonormality of constructed bases.
pub const BASIS: f64 = 1e-13;

/// Membership tests (vector in a subspace, unit length of inputs).
pub const MEMBERSHIP: f64 = 1e-9;

/// Kähler-angle constancy: spread of the singular values of the compressed `J`.
pub const ANGLE_CONSTANCY: f64 = 1e-10;

/// Largest condition number of `D(r)` before it is treated as focal.
pub const FOCAL_CONDITION: f64 = 1e12;

/// Default RK4 steps per unit parameter length.
pub const STEPS_PER_UNIT: usize = 10_000;

/// Distance residual accepted when locating a footpoint on a tube.
pub const TUBE_DISTANCE: f64 = 1e-8;

/// Newton iteration limits for footpoint refinement.
pub const NEWTON_MAX_ITER: usize = 50;
pub const NEWTON_TOL: f64 = 1e-12;

/// Default finite-difference step for covariant derivatives of frame fields.
pub const FD_STEP: f64 = 1e-4;
