// SPDX-License-Identifier: Apache-2.0

//! The ruled submanifolds `W^{2n-k}_phi` at the base point: tangent/normal
//! splitting, second fundamental form, shape operators, normal curvature,
//! distributions, the rigidity residual and the transport of normal spaces.
//!
//! Everything is evaluated at the identity in the left-invariant frame.
//! `W` is the orbit of the subgroup with Lie algebra
//! `s = a + c0 + d + g_2alpha`, so left-invariant fields tangent to `s` stay
//! tangent and the computation at `o` is representative.

use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

use crate::algebra::{bracket, AlgebraVector, ModelCHn};
use crate::connection::{curvature_ambient, levi_civita, transport_with, CurveSample};
use crate::error::{domain, Result};
use crate::kahler::{build_constant_angle_subspace, KahlerSubspace};
use crate::linalg::{cluster, orthonormalize, project, symmetric_eigen, symmetry_defect};
use crate::tolerances::MEMBERSHIP;

/// `W^{2n-k}_phi`: normal space `w_perp` in `g_alpha` of constant Kähler angle
/// `phi`, and the tangent splitting `a + c0 + d + g_2alpha` with `d = P w_perp`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WModel {
    model: ModelCHn,
    k: usize,
    phi: f64,
    wperp: KahlerSubspace,
    normal: Vec<AlgebraVector>,
    d: Vec<AlgebraVector>,
    c0: Vec<AlgebraVector>,
    tangent: Vec<AlgebraVector>,
    labels: Vec<String>,
}

impl WModel {
    pub fn new(model: ModelCHn, k: usize, phi: f64) -> Result<Self> {
        let wperp = build_constant_angle_subspace(&model, k, phi)?;
        Self::from_normal_space(model, wperp)
    }

    pub fn from_normal_space(model: ModelCHn, wperp: KahlerSubspace) -> Result<Self> {
        let k = wperp.k();
        if wperp.basis()[0].dim() != model.dim() {
            return domain("normal space belongs to a different model");
        }
        if k >= model.n() {
            return domain(format!("need k <= n - 1, got k = {k}, n = {}", model.n()));
        }
        let normal = wperp.basis().to_vec();
        let p_images: Vec<AlgebraVector> = normal
            .iter()
            .map(|xi| {
                let jxi = xi.apply_j();
                &jxi - &wperp.project(&jxi)
            })
            .collect();
        let d = orthonormalize(&p_images, &normal, 1e-10);
        let against: Vec<AlgebraVector> = normal.iter().chain(d.iter()).cloned().collect();
        let galpha: Vec<AlgebraVector> = (0..model.dim_galpha()).map(|i| model.galpha(i)).collect();
        let c0 = orthonormalize(&galpha, &against, 1e-8);
        let mut tangent = vec![model.b()];
        tangent.extend(c0.iter().cloned());
        tangent.extend(d.iter().cloned());
        tangent.push(model.z());
        let mut labels = vec!["B".to_string()];
        labels.extend((1..=c0.len()).map(|i| format!("c{i}")));
        labels.extend((1..=d.len()).map(|i| format!("d{i}")));
        labels.push("Z".to_string());
        debug_assert_eq!(tangent.len() + k, model.dim());
        Ok(Self { model, k, phi: wperp.phi(), wperp, normal, d, c0, tangent, labels })
    }

    /// Rotates `Z` towards the first normal by `eps`. The result is no longer
    /// an orbit; it exists to show that the rigidity residual detects
    /// deviations.
    pub fn perturbed(&self, eps: f64) -> Self {
        let mut out = self.clone();
        let (s, c) = eps.sin_cos();
        let z = self.model.z();
        let last = self.tangent.len() - 1;
        out.tangent[last] = &z * c + &self.normal[0] * s;
        out.normal[0] = &z * -s + &self.normal[0] * c;
        out
    }

    pub fn model(&self) -> &ModelCHn {
        &self.model
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn wperp(&self) -> &KahlerSubspace {
        &self.wperp
    }

    /// Orthonormal basis of the normal space.
    pub fn normal_basis(&self) -> &[AlgebraVector] {
        &self.normal
    }

    pub fn d_basis(&self) -> &[AlgebraVector] {
        &self.d
    }

    pub fn c0_basis(&self) -> &[AlgebraVector] {
        &self.c0
    }

    /// Tangent basis `B, c0.., d.., Z`.
    pub fn tangent_basis(&self) -> &[AlgebraVector] {
        &self.tangent
    }

    pub fn tangent_labels(&self) -> &[String] {
        &self.labels
    }

    /// Basis of the maximal complex subspace `c = a + c0 + g_2alpha`.
    pub fn c_basis(&self) -> Vec<AlgebraVector> {
        let mut out = vec![self.model.b()];
        out.extend(self.c0.iter().cloned());
        out.push(self.model.z());
        out
    }

    pub fn tangent_part(&self, v: &AlgebraVector) -> AlgebraVector {
        project(v, &self.tangent)
    }

    pub fn normal_part(&self, v: &AlgebraVector) -> AlgebraVector {
        project(v, &self.normal)
    }

    pub fn is_tangent(&self, v: &AlgebraVector) -> bool {
        self.normal_part(v).norm() <= MEMBERSHIP * v.norm().max(1.0)
    }

    pub fn is_normal(&self, v: &AlgebraVector) -> bool {
        self.tangent_part(v).norm() <= MEMBERSHIP * v.norm().max(1.0)
    }

    /// `P xi`: tangential part of `J xi`.
    pub fn p_of(&self, xi: &AlgebraVector) -> AlgebraVector {
        self.tangent_part(&xi.apply_j())
    }

    /// `F xi`: normal part of `J xi`.
    pub fn f_of(&self, xi: &AlgebraVector) -> AlgebraVector {
        self.normal_part(&xi.apply_j())
    }

    /// Largest normal component of a bracket of tangent basis vectors.
    pub fn subalgebra_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for x in &self.tangent {
            for y in &self.tangent {
                worst = worst.max(self.normal_part(&bracket(x, y)).norm());
            }
        }
        worst
    }

    /// Largest component of `J c` outside `c`.
    pub fn complex_part_defect(&self) -> f64 {
        let c = self.c_basis();
        c.iter()
            .map(|v| {
                let jv = v.apply_j();
                (&jv - &project(&jv, &c)).norm()
            })
            .fold(0.0, f64::max)
    }
}

/// A symmetric operator in a labelled orthonormal basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricOperator {
    pub matrix: DMatrix<f64>,
    pub basis: Vec<AlgebraVector>,
    pub labels: Vec<String>,
}

impl SymmetricOperator {
    /// Operator with `matrix[i][j] = form(basis_i, basis_j)`.
    pub fn from_form<F>(basis: &[AlgebraVector], labels: Vec<String>, form: F) -> Self
    where
        F: Fn(&AlgebraVector, &AlgebraVector) -> f64,
    {
        let m = basis.len();
        let matrix = DMatrix::from_fn(m, m, |i, j| form(&basis[i], &basis[j]));
        Self { matrix, basis: basis.to_vec(), labels }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn symmetry_defect(&self) -> f64 {
        symmetry_defect(&self.matrix)
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Vec<f64> {
        symmetric_eigen(&self.matrix).0
    }

    /// Eigenvalues with eigenvectors expressed as algebra vectors.
    pub fn eigen(&self) -> Vec<(f64, AlgebraVector)> {
        let (values, vectors) = symmetric_eigen(&self.matrix);
        values
            .into_iter()
            .enumerate()
            .map(|(c, lambda)| {
                let coeffs = vectors.column(c).into_owned();
                (lambda, crate::linalg::combine(&coeffs, &self.basis))
            })
            .collect()
    }

    /// `(eigenvalue, multiplicity)` clusters.
    pub fn clusters(&self) -> Vec<(f64, usize)> {
        cluster(&self.eigenvalues())
    }

    /// Applies the operator to a vector in the span of the basis.
    pub fn apply(&self, v: &AlgebraVector) -> AlgebraVector {
        let coeffs = crate::linalg::coordinates(v, &self.basis);
        crate::linalg::combine(&(&self.matrix * coeffs), &self.basis)
    }
}

/// `II(X, Y)`: normal part of `nabla_X Y` for tangent `X`, `Y`.
pub fn second_fundamental_form(w: &WModel, x: &AlgebraVector, y: &AlgebraVector) -> Result<AlgebraVector> {
    if !w.is_tangent(x) || !w.is_tangent(y) {
        return domain("second fundamental form needs tangent vectors");
    }
    Ok(w.normal_part(&levi_civita(x, y)))
}

/// The trivial symmetric bilinear extension of `2 II(Z, P xi) = sin^2(phi) xi`:
/// `(<Y,Z> sum_i <X, P xi_i> xi_i + <X,Z> sum_i <Y, P xi_i> xi_i) / 2`.
pub fn second_fundamental_form_closed(w: &WModel, x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
    let z = w.model().z();
    let mut out = AlgebraVector::zeros(w.model().n());
    for xi in w.normal_basis() {
        let p = w.p_of(xi);
        let c = y.dot(&z) * x.dot(&p) + x.dot(&z) * y.dot(&p);
        out += &(xi * (0.5 * c));
    }
    out
}

fn check_unit_normal(w: &WModel, xi: &AlgebraVector) -> Result<()> {
    if (xi.norm() - 1.0).abs() > MEMBERSHIP {
        return domain(format!("normal vector must be a unit vector, |xi| = {}", xi.norm()));
    }
    if !w.is_normal(xi) {
        return domain("vector is not normal to the submanifold");
    }
    Ok(())
}

/// `S_xi` on the tangent space, `<S_xi X, Y> = <II(X,Y), xi>`.
pub fn singular_shape_operator(w: &WModel, xi: &AlgebraVector) -> Result<SymmetricOperator> {
    check_unit_normal(w, xi)?;
    Ok(SymmetricOperator::from_form(w.tangent_basis(), w.tangent_labels().to_vec(), |x, y| levi_civita(x, y).dot(xi)))
}

/// Shape operator of the orbit through `o` of the subgroup with Lie algebra
/// spanned by `h`, with respect to the unit normal `eta`.
pub fn orbit_shape_operator(h: &[AlgebraVector], eta: &AlgebraVector) -> Result<SymmetricOperator> {
    if h.is_empty() {
        return domain("empty subalgebra");
    }
    let basis = orthonormalize(h, &[], 1e-10);
    if basis.len() != h.len() {
        return domain("subalgebra spanning set is linearly dependent");
    }
    if (eta.norm() - 1.0).abs() > MEMBERSHIP || project(eta, &basis).norm() > MEMBERSHIP {
        return domain("eta must be a unit vector orthogonal to the subalgebra");
    }
    for x in &basis {
        for y in &basis {
            let br = bracket(x, y);
            if (&br - &project(&br, &basis)).norm() > 1e-9 {
                return domain("spanning set is not closed under the bracket");
            }
        }
    }
    let labels = (1..=basis.len()).map(|i| format!("h{i}")).collect();
    Ok(SymmetricOperator::from_form(&basis, labels, |x, y| levi_civita(x, y).dot(eta)))
}

/// Normal connection on left-invariant fields: normal part of `nabla_X xi`.
pub fn normal_connection(w: &WModel, x: &AlgebraVector, xi: &AlgebraVector) -> AlgebraVector {
    w.normal_part(&levi_civita(x, xi))
}

/// `R_perp(X,Y) xi` from the normal connection of left-invariant fields.
pub fn normal_curvature(w: &WModel, x: &AlgebraVector, y: &AlgebraVector, xi: &AlgebraVector) -> Result<AlgebraVector> {
    if !w.is_tangent(x) || !w.is_tangent(y) {
        return domain("normal curvature needs tangent X, Y");
    }
    if !w.is_normal(xi) {
        return domain("normal curvature needs a normal xi");
    }
    let nx = normal_connection(w, x, &normal_connection(w, y, xi));
    let ny = normal_connection(w, y, &normal_connection(w, x, xi));
    let nb = normal_connection(w, &bracket(x, y), xi);
    Ok(nx - ny - nb)
}

/// Largest `|R_perp(X,Y) xi|` over basis triples.
pub fn max_normal_curvature(w: &WModel) -> f64 {
    let mut worst = 0.0f64;
    for x in w.tangent_basis() {
        for y in w.tangent_basis() {
            for xi in w.normal_basis() {
                if let Ok(r) = normal_curvature(w, x, y, xi) {
                    worst = worst.max(r.norm());
                }
            }
        }
    }
    worst
}

/// Residuals for the distributions on `W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    /// `d`-component of `nabla_X Y` for `X, Y` in `c`.
    pub c_autoparallel: f64,
    /// `max |<JU, V>|` over `U, V` in `d`; zero exactly when `d` is integrable.
    pub d_integrability_defect: f64,
    /// Component of `nabla` on `a + R P xi` leaving that plane, within the tangent space.
    pub a_pxi_autoparallel: f64,
    /// `|4 nabla_U nabla_U U + U|` for `U = P xi / sin(phi)`.
    pub horocycle: f64,
}

pub fn distribution_residuals(w: &WModel) -> DistributionReport {
    let c = w.c_basis();
    let mut c_auto = 0.0f64;
    for x in &c {
        for y in &c {
            c_auto = c_auto.max(project(&levi_civita(x, y), w.d_basis()).norm());
        }
    }
    let mut d_def = 0.0f64;
    for u in w.d_basis() {
        for v in w.d_basis() {
            d_def = d_def.max(u.apply_j().dot(v).abs());
        }
    }
    let (mut plane, mut horo) = (0.0f64, 0.0f64);
    let xi = &w.normal_basis()[0];
    let p = w.p_of(xi);
    if p.norm() > 1e-12 {
        let u = p.normalized();
        let span = [w.model().b(), u.clone()];
        for x in &span {
            for y in &span {
                let tangential = w.tangent_part(&levi_civita(x, y));
                plane = plane.max((&tangential - &project(&tangential, &span)).norm());
            }
        }
        let acc = levi_civita(&u, &levi_civita(&u, &u));
        horo = (&(acc * 4.0) + &u).norm();
    }
    DistributionReport {
        c_autoparallel: c_auto,
        d_integrability_defect: d_def,
        a_pxi_autoparallel: plane,
        horocycle: horo,
    }
}

/// Largest deviation of `II` from its closed form over the tangent frame.
pub fn rigidity_residual(w: &WModel) -> f64 {
    let mut worst = 0.0f64;
    for x in w.tangent_basis() {
        for y in w.tangent_basis() {
            let ii = w.normal_part(&levi_civita(x, y));
            worst = worst.max((&ii - &second_fundamental_form_closed(w, x, y)).norm());
        }
    }
    worst
}

/// Solves `2 nabla_{c'} X + <c', Z> J X = 0` along a curve in the leaf of `c`
/// through `o`. The solution is the left translate of the initial normal space.
pub fn normal_transport_ode(w: &WModel, curve: &[CurveSample], x0: &AlgebraVector) -> Result<Vec<AlgebraVector>> {
    if !w.is_normal(x0) {
        return domain("initial vector must be normal");
    }
    let c = w.c_basis();
    if curve.iter().any(|s| (&s.velocity - &project(&s.velocity, &c)).norm() > 1e-8 * s.velocity.norm().max(1.0)) {
        return domain("curve must run inside the leaf of c through o");
    }
    let z = w.model().z();
    Ok(transport_with(curve, x0, |v, x| x.apply_j() * (-0.5 * v.dot(&z))))
}

/// Geometry of the leaf of `span{Z, J xi}` inside the solvable leaf `M(r)` of
/// `CH^2`, at `gamma(r)` with `gamma` the geodesic with `gamma'(0) = xi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafGeometry {
    /// Shape operator in the basis `{Z, J xi}` with respect to
    /// `sech(r/2) B + tanh(r/2) xi`.
    pub shape_matrix: Matrix2<f64>,
    /// Intrinsic curvature from the Gauss equation.
    pub gauss_curvature: f64,
    /// Tangential part (in `M(r)`) of the acceleration of the integral curves of
    /// `sech(r/2) B + tanh(r/2) xi`.
    pub geodesic_residual: f64,
    /// Deviation of that acceleration from `-tanh(r/2) gamma'(r) / 2`.
    pub acceleration_residual: f64,
}

pub fn leaf_geometry_ch2(r: f64) -> Result<LeafGeometry> {
    if !r.is_finite() {
        return domain("radius must be finite");
    }
    let m = ModelCHn::new(2)?;
    let (b, z) = (m.b(), m.z());
    let xi = m.galpha(0);
    let jxi = xi.apply_j();
    let (th, sech) = ((r / 2.0).tanh(), 1.0 / (r / 2.0).cosh());
    let nvec = &b * sech + &xi * th;
    let gdot = &b * -th + &xi * sech;
    let leaf = [z.clone(), jxi.clone()];
    let shape = Matrix2::from_fn(|i, j| levi_civita(&leaf[i], &leaf[j]).dot(&nvec));

    // Gauss equation with the ambient normal space span{B, xi} of the leaf
    let ambient_normals = [b.clone(), xi.clone()];
    let ii = |x: &AlgebraVector, y: &AlgebraVector| project(&levi_civita(x, y), &ambient_normals);
    let k_ambient = curvature_ambient(&z, &jxi, &jxi).dot(&z);
    let gauss = k_ambient + ii(&z, &z).dot(&ii(&jxi, &jxi)) - ii(&z, &jxi).norm_squared();

    let acc = levi_civita(&nvec, &nvec);
    let m_r = [z, jxi, nvec];
    let geodesic_residual = project(&acc, &m_r).norm();
    let acceleration_residual = (&acc - &(&gdot * (-0.5 * th))).norm();
    Ok(LeafGeometry { shape_matrix: shape, gauss_curvature: gauss, geodesic_residual, acceleration_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_model;
    use crate::connection::one_parameter_curve;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    fn w(n: usize, k: usize, phi: f64) -> WModel {
        WModel::new(make_model(n).unwrap(), k, phi).unwrap()
    }

    #[test]
    fn dimensions_and_subalgebra() {
        let wm = w(4, 2, FRAC_PI_3);
        assert_eq!(wm.tangent_basis().len(), 6);
        assert_eq!(wm.normal_basis().len(), 2);
        assert_eq!(wm.c0_basis().len(), 2);
        assert!(wm.subalgebra_defect() < 1e-13);
        assert!(wm.complex_part_defect() < 1e-13);
    }

    #[test]
    fn ii_on_z_and_p_xi() {
        let phi = FRAC_PI_3;
        let wm = w(3, 2, phi);
        let xi = wm.normal_basis()[0].clone();
        let p = wm.p_of(&xi);
        let ii = second_fundamental_form(&wm, &wm.model().z(), &p).unwrap();
        assert!((&ii - &(&xi * (phi.sin().powi(2) / 2.0))).norm() < 1e-15);
        assert!(second_fundamental_form(&wm, &xi, &p).is_err());
    }

    #[test]
    fn ii_vanishes_on_b_and_c0() {
        let wm = w(4, 2, 0.9);
        let b = wm.model().b();
        for y in wm.tangent_basis() {
            assert!(second_fundamental_form(&wm, &b, y).unwrap().norm() < 1e-15);
        }
        for u in wm.c0_basis() {
            for v in wm.c0_basis() {
                assert!(second_fundamental_form(&wm, u, v).unwrap().norm() < 1e-15);
            }
        }
    }

    #[test]
    fn hypersurface_shape_operator() {
        let wm = w(3, 1, FRAC_PI_2);
        let s = singular_shape_operator(&wm, &wm.normal_basis()[0]).unwrap();
        let c = s.clusters();
        assert_eq!(c.len(), 3);
        assert!((c[0].0 + 0.5).abs() < 1e-14 && c[0].1 == 1);
        assert!(c[1].0.abs() < 1e-14 && c[1].1 == 3);
        assert!((c[2].0 - 0.5).abs() < 1e-14 && c[2].1 == 1);
    }

    #[test]
    fn shape_operator_rejects_bad_normals() {
        let wm = w(3, 2, 0.5);
        assert!(singular_shape_operator(&wm, &wm.model().b()).is_err());
        assert!(singular_shape_operator(&wm, &(&wm.normal_basis()[0] * 2.0)).is_err());
    }

    #[test]
    fn normal_curvature_closed_form() {
        let phi = FRAC_PI_3;
        let wm = w(3, 2, phi);
        let m = wm.model();
        let xi = wm.normal_basis()[0].clone();
        for x in wm.tangent_basis() {
            for y in wm.tangent_basis() {
                let r = normal_curvature(&wm, x, y, &xi).unwrap();
                let closed = wm.f_of(&xi) * (0.5 * bracket(x, y).dot(&m.z()));
                assert!((&r - &closed).norm() < 1e-15);
            }
        }
        let r = normal_curvature(&wm, &m.b(), &m.z(), &xi).unwrap();
        assert!((r.norm() - 0.5 * phi.cos()).abs() < 1e-15);
    }

    #[test]
    fn complex_normal_space_is_totally_geodesic() {
        let wm = w(4, 2, 0.0);
        assert!(wm.d_basis().is_empty());
        for x in wm.tangent_basis() {
            for y in wm.tangent_basis() {
                assert!(second_fundamental_form(&wm, x, y).unwrap().norm() < 1e-15);
            }
        }
    }

    #[test]
    fn perturbation_is_detected() {
        assert!(rigidity_residual(&w(3, 2, FRAC_PI_3)) < 1e-15);
        for phi in [0.3, FRAC_PI_3, FRAC_PI_2] {
            let r = rigidity_residual(&w(3, 2, phi).perturbed(1e-3));
            assert!((r - 0.5 * 1e-3f64.sin()).abs() < 1e-9, "{r}");
        }
    }

    #[test]
    fn horosphere_operator() {
        let m = make_model(3).unwrap();
        let mut h: Vec<AlgebraVector> = (0..4).map(|i| m.galpha(i)).collect();
        h.push(m.z());
        let s = orbit_shape_operator(&h, &m.b()).unwrap();
        assert_eq!(s.clusters(), vec![(0.5, 4), (1.0, 1)]);
        assert!(orbit_shape_operator(&[m.galpha(0), m.galpha(1)], &m.b()).is_err());
    }

    #[test]
    fn transport_along_z_keeps_normal() {
        let wm = w(3, 2, 0.8);
        let m = wm.model();
        let curve = one_parameter_curve(&m.identity(), &m.z(), 2.0, 200);
        let xi = wm.normal_basis()[1].clone();
        let out = normal_transport_ode(&wm, &curve, &xi).unwrap();
        assert!((&out[200] - &xi).norm() < 1e-12);
        let bad = one_parameter_curve(&m.identity(), &wm.d_basis()[0], 1.0, 10);
        assert!(normal_transport_ode(&wm, &bad, &xi).is_err());
    }

    #[test]
    fn leaf_matrix_at_zero() {
        let g = leaf_geometry_ch2(0.0).unwrap();
        assert_eq!(g.shape_matrix, Matrix2::new(1.0, 0.0, 0.0, 0.5));
        assert!(g.gauss_curvature.abs() < 1e-15);
    }
}
