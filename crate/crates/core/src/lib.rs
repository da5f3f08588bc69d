// SPDX-License-Identifier: Apache-2.0

//! Complex hyperbolic space `CH^n` as the solvable group `AN`: connection,
//! curvature, the ruled submanifolds `W^{2n-k}_phi`, tubes around them and the
//! principal curvatures of the homogeneous hypersurfaces.

// `!(x > 0.0)` is used on purpose so that NaN is rejected with the domain error.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod connection;
pub mod distributions;
pub mod error;
pub mod jacobi;
pub mod kahler;
pub mod linalg;
pub mod ode;
pub mod orbits;
pub mod spectra;
pub mod tolerances;
pub mod verify;

pub use algebra::{
    apply_j, bracket, group_exp, group_log, group_multiply, make_model, rho, AlgebraVector, GroupElement, ModelCHn,
};
pub use connection::{
    curvature_ambient, curvature_from_connection, geodesic_numeric, geodesic_unit_galpha, levi_civita,
    parallel_transport, sectional_curvature, CurveSample,
};
pub use distributions::{distribution_check, e_leaf_curvature, footpoint, frame_b_field, TubePoint};
pub use error::{Error, Result};
pub use jacobi::{
    hopf_projection_report, numeric_spectrum, solve_jacobi, tube_shape_operator, TubeBase, TubeData, TubeOperator,
};
pub use kahler::{build_constant_angle_subspace, kahler_angle, pf_decompose, KahlerSubspace};
pub use orbits::{singular_shape_operator, SymmetricOperator, WModel};
pub use spectra::{
    compare_spectra, cubic_eigenvalues, family_spectrum, Family, FamilySpec, Provenance, SpectrumReport,
};
pub use verify::{run_verify, Status, VerifyConfig, VerifyReport};
