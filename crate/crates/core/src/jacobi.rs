// SPDX-License-Identifier: Apache-2.0

//! Jacobi fields along normal geodesics and the shape operators
//! `S(r) = D'(r) D(r)^{-1}` of tubes.
//!
//! Vectors along `gamma_xi` are expressed in a parallel frame and identified
//! with their initial values at `o`. In that frame the curvature operator is
//! constant and the Jacobi equation reads
//! `4 zeta'' = zeta - <zeta, xi> xi + 3 <J xi, zeta> J xi`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraVector, ModelCHn};
use crate::connection::curvature_ambient;
use crate::error::{domain, Error, Result};
use crate::linalg::{cluster, combine, condition_number, coordinates, orthonormalize, project, symmetric_eigen};
use crate::ode::rk4_integrate;
use crate::orbits::{orbit_shape_operator, singular_shape_operator, SymmetricOperator, WModel};
use crate::spectra::{FamilySpec, Provenance, SpectrumEntry, SpectrumReport};
use crate::tolerances::{FOCAL_CONDITION, MEMBERSHIP};

/// Closed-form Jacobi field along `gamma_xi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JacobiField {
    xi: AlgebraVector,
    jxi: AlgebraVector,
    /// Components orthogonal to `xi` and `J xi`: value and derivative at 0.
    perp: (AlgebraVector, AlgebraVector),
    /// `J xi` coefficient as `(cosh t, sinh t)` weights.
    along_jxi: (f64, f64),
    /// `xi` coefficient `c0 + c1 t`.
    along_xi: (f64, f64),
}

impl JacobiField {
    pub fn value(&self, t: f64) -> AlgebraVector {
        let (c, s) = ((t / 2.0).cosh(), (t / 2.0).sinh());
        let mut out = &self.perp.0 * c + &self.perp.1 * (2.0 * s);
        out += &(&self.jxi * (self.along_jxi.0 * t.cosh() + self.along_jxi.1 * t.sinh()));
        out += &(&self.xi * (self.along_xi.0 + self.along_xi.1 * t));
        out
    }

    pub fn derivative(&self, t: f64) -> AlgebraVector {
        let (c, s) = ((t / 2.0).cosh(), (t / 2.0).sinh());
        let mut out = &self.perp.0 * (0.5 * s) + &self.perp.1 * c;
        out += &(&self.jxi * (self.along_jxi.0 * t.sinh() + self.along_jxi.1 * t.cosh()));
        out += &(&self.xi * self.along_xi.1);
        out
    }
}

fn check_unit(xi: &AlgebraVector) -> Result<()> {
    if (xi.norm() - 1.0).abs() > MEMBERSHIP {
        return domain(format!("geodesic direction must be a unit vector, |xi| = {}", xi.norm()));
    }
    Ok(())
}

/// Solves the Jacobi equation with `zeta(0) = zeta0`, `zeta'(0) = zeta0p`.
pub fn solve_jacobi(zeta0: &AlgebraVector, zeta0p: &AlgebraVector, xi: &AlgebraVector) -> Result<JacobiField> {
    check_unit(xi)?;
    let jxi = xi.apply_j();
    let split = |v: &AlgebraVector| {
        let (a, x) = (v.dot(&jxi), v.dot(xi));
        (v - &(&jxi * a) - (xi * x), a, x)
    };
    let (p0, a0, x0) = split(zeta0);
    let (p1, a1, x1) = split(zeta0p);
    Ok(JacobiField { xi: xi.clone(), jxi, perp: (p0, p1), along_jxi: (a0, a1), along_xi: (x0, x1) })
}

/// RK4 integration of `zeta'' = -R(zeta, xi) xi` on `[0, t_end]`; returns
/// `(t, zeta, zeta')` samples.
pub fn solve_jacobi_rk4(
    zeta0: &AlgebraVector,
    zeta0p: &AlgebraVector,
    xi: &AlgebraVector,
    t_end: f64,
    steps: usize,
) -> Result<Vec<(f64, AlgebraVector, AlgebraVector)>> {
    check_unit(xi)?;
    let d = zeta0.dim();
    let mut y0 = DVector::zeros(2 * d);
    y0.rows_mut(0, d).copy_from(zeta0.as_flat());
    y0.rows_mut(d, d).copy_from(zeta0p.as_flat());
    let rhs = |_: f64, y: &DVector<f64>| {
        let z = AlgebraVector::from_flat(y.rows(0, d).into_owned());
        let acc = -curvature_ambient(&z, xi, xi);
        let mut out = DVector::zeros(2 * d);
        out.rows_mut(0, d).copy_from(&y.rows(d, d));
        out.rows_mut(d, d).copy_from(acc.as_flat());
        out
    };
    Ok(rk4_integrate(rhs, 0.0, t_end, y0, steps)
        .into_iter()
        .map(|(t, y)| {
            (
                t,
                AlgebraVector::from_flat(y.rows(0, d).into_owned()),
                AlgebraVector::from_flat(y.rows(d, d).into_owned()),
            )
        })
        .collect())
}

/// The focal submanifold (or hypersurface) whose tubes are studied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TubeBase {
    /// `W^{2n-k}_phi` (with `k = 1, phi = pi/2` the minimal hypersurface `W^{2n-1}`).
    Ruled(WModel),
    /// Totally geodesic `CH^k`, `0 <= k <= n - 1` (`k = 0` is a point).
    ComplexSubspace { model: ModelCHn, k: usize },
    /// Totally geodesic `RH^n`.
    RealSubspace { model: ModelCHn },
    /// Horosphere through `o` centred at the point at infinity determined by `B`.
    Horosphere { model: ModelCHn },
}

/// Tangent/normal splitting at `o` with a chosen unit normal.
struct BaseFrame {
    tangent: Vec<AlgebraVector>,
    tangent_labels: Vec<String>,
    normal: Vec<AlgebraVector>,
    shape: DMatrix<f64>,
    xi: AlgebraVector,
}

impl TubeBase {
    pub fn model(&self) -> ModelCHn {
        match self {
            TubeBase::Ruled(w) => *w.model(),
            TubeBase::ComplexSubspace { model, .. }
            | TubeBase::RealSubspace { model }
            | TubeBase::Horosphere { model } => *model,
        }
    }

    /// Default unit normal at `o`.
    pub fn default_normal(&self) -> AlgebraVector {
        let m = self.model();
        match self {
            TubeBase::Ruled(w) => w.normal_basis()[0].clone(),
            TubeBase::ComplexSubspace { k, .. } => m.galpha(2 * k.saturating_sub(1)),
            TubeBase::RealSubspace { .. } => m.galpha(1),
            TubeBase::Horosphere { .. } => m.b(),
        }
    }

    fn frame(&self, xi: &AlgebraVector) -> Result<BaseFrame> {
        let m = self.model();
        let (tangent, labels, normal, shape) = match self {
            TubeBase::Ruled(w) => {
                let s = singular_shape_operator(w, xi)?;
                (w.tangent_basis().to_vec(), w.tangent_labels().to_vec(), w.normal_basis().to_vec(), s.matrix)
            }
            TubeBase::ComplexSubspace { k, .. } => {
                let k = *k;
                if k >= m.n() {
                    return domain(format!("totally geodesic CH^{k} needs k <= n - 1"));
                }
                let mut tangent = Vec::new();
                let mut labels = Vec::new();
                if k > 0 {
                    tangent.push(m.b());
                    labels.push("B".to_string());
                    for i in 0..2 * (k - 1) {
                        tangent.push(m.galpha(i));
                        labels.push(format!("e{}", i + 1));
                    }
                    tangent.push(m.z());
                    labels.push("Z".to_string());
                }
                let normal = orthonormalize(&m.basis(), &tangent, 1e-8);
                let t = tangent.len();
                (tangent, labels, normal, DMatrix::zeros(t, t))
            }
            TubeBase::RealSubspace { .. } => {
                let mut tangent = vec![m.b()];
                let mut labels = vec!["B".to_string()];
                for i in 0..m.n() - 1 {
                    tangent.push(m.galpha(2 * i));
                    labels.push(format!("e{}", 2 * i + 1));
                }
                let normal = orthonormalize(&m.basis(), &tangent, 1e-8);
                let t = tangent.len();
                (tangent, labels, normal, DMatrix::zeros(t, t))
            }
            TubeBase::Horosphere { .. } => return domain("a horosphere is not a tube"),
        };
        check_unit(xi)?;
        if project(xi, &tangent).norm() > MEMBERSHIP {
            return domain("xi must be normal to the base");
        }
        Ok(BaseFrame { tangent, tangent_labels: labels, normal, shape, xi: xi.clone() })
    }
}

/// A tube (or parallel hypersurface) of radius `radius` around `base`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeData {
    pub base: TubeBase,
    pub radius: f64,
    /// Unit normal at `o`; `None` uses [`TubeBase::default_normal`].
    pub xi: Option<AlgebraVector>,
}

impl TubeData {
    pub fn new(base: TubeBase, radius: f64) -> Self {
        Self { base, radius, xi: None }
    }

    pub fn with_normal(mut self, xi: AlgebraVector) -> Self {
        self.xi = Some(xi);
        self
    }

    pub fn normal(&self) -> AlgebraVector {
        self.xi.clone().unwrap_or_else(|| self.base.default_normal())
    }

    /// The tube data realising a family of homogeneous hypersurfaces.
    pub fn for_family(spec: &FamilySpec) -> Result<Self> {
        spec.validate()?;
        let model = ModelCHn::new(spec.n())?;
        let r = spec.r().unwrap_or(0.0);
        let base = match *spec {
            FamilySpec::A { k, .. } => TubeBase::ComplexSubspace { model, k },
            FamilySpec::B { .. } => TubeBase::RealSubspace { model },
            FamilySpec::H { .. } => TubeBase::Horosphere { model },
            FamilySpec::S { .. } => TubeBase::Ruled(WModel::new(model, 1, std::f64::consts::FRAC_PI_2)?),
            FamilySpec::WPi2 { k, .. } => TubeBase::Ruled(WModel::new(model, k, std::f64::consts::FRAC_PI_2)?),
            FamilySpec::WPhi { k, phi, .. } => TubeBase::Ruled(WModel::new(model, k, phi)?),
        };
        Ok(Self::new(base, r))
    }
}

/// Shape operator of a tube in a labelled basis of the parallel frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeOperator {
    pub operator: SymmetricOperator,
    pub radius: f64,
    pub xi: AlgebraVector,
    /// Condition number of `D(r)` (1 for the horosphere).
    pub condition: f64,
}

impl TubeOperator {
    /// Leading `m x m` block.
    pub fn block(&self, m: usize) -> DMatrix<f64> {
        self.operator.matrix.view((0, 0), (m, m)).into_owned()
    }

    pub fn clusters(&self) -> Vec<(f64, usize)> {
        self.operator.clusters()
    }
}

/// Orthonormal basis of `T_o CH^n minus R xi`, adapted so that the block
/// coupling `Z`, `P xi` and `F xi` comes first, then the remaining tangent and
/// normal directions. Each vector is purely tangent or purely normal.
fn adapted_basis(frame: &BaseFrame) -> (Vec<AlgebraVector>, Vec<String>, usize) {
    let jxi = frame.xi.apply_j();
    let tangent_jxi = project(&jxi, &frame.tangent);
    let normal_jxi = &jxi - &tangent_jxi;
    let mut lead: Vec<(AlgebraVector, String, bool)> = Vec::new();
    let z = ModelCHn::new(frame.xi.n()).expect("model").z();
    if project(&z, &frame.tangent).norm() > 1.0 - 1e-9 {
        lead.push((z, "Z".into(), true));
    }
    if tangent_jxi.norm() > 1e-9 {
        lead.push((tangent_jxi.normalized(), "Pxi".into(), true));
    }
    if normal_jxi.norm() > 1e-9 {
        lead.push((normal_jxi.normalized(), "Fxi".into(), false));
    }
    let lead_vectors: Vec<AlgebraVector> = lead.iter().map(|(v, _, _)| v.clone()).collect();
    let lead_tangent: Vec<AlgebraVector> = lead.iter().filter(|l| l.2).map(|l| l.0.clone()).collect();
    let lead_normal: Vec<AlgebraVector> = lead.iter().filter(|l| !l.2).map(|l| l.0.clone()).collect();

    let mut basis = lead_vectors.clone();
    let mut labels: Vec<String> = lead.iter().map(|l| l.1.clone()).collect();
    // keep coordinate-aligned tangent vectors when possible so labels stay readable
    for (t, label) in frame.tangent.iter().zip(&frame.tangent_labels) {
        if project(t, &lead_tangent).norm() < 1e-12 {
            basis.push(t.clone());
            labels.push(label.clone());
        }
    }
    let kept: Vec<AlgebraVector> = basis.clone();
    let rest_tangent = orthonormalize(&frame.tangent, &kept, 1e-8);
    for (i, v) in rest_tangent.into_iter().enumerate() {
        basis.push(v);
        labels.push(format!("t{}", i + 1));
    }
    let mut against = lead_normal;
    against.push(frame.xi.clone());
    let rest_normal = orthonormalize(&frame.normal, &against, 1e-8);
    for (i, v) in rest_normal.into_iter().enumerate() {
        basis.push(v);
        labels.push(format!("n{}", i + 1));
    }
    (basis, labels, lead.len())
}

/// `S(r) = D'(r) D(r)^{-1}` with respect to `-gamma'(r)`.
pub fn tube_shape_operator(tube: &TubeData) -> Result<TubeOperator> {
    let r = tube.radius;
    if let TubeBase::Horosphere { model } = &tube.base {
        let h: Vec<AlgebraVector> =
            (0..model.dim_galpha()).map(|i| model.galpha(i)).chain(std::iter::once(model.z())).collect();
        let op = orbit_shape_operator(&h, &model.b())?;
        return Ok(TubeOperator { operator: op, radius: r, xi: model.b(), condition: 1.0 });
    }
    if !r.is_finite() {
        return domain("radius must be finite");
    }
    let xi = tube.normal();
    let frame = tube.base.frame(&xi)?;
    let codim = frame.normal.len();
    if codim > 1 && r <= 0.0 {
        return domain(format!("tube radius must be positive, got {r}"));
    }
    let (basis, labels, _) = adapted_basis(&frame);
    let m = basis.len();
    let mut d = DMatrix::zeros(m, m);
    let mut dp = DMatrix::zeros(m, m);
    for (j, x) in basis.iter().enumerate() {
        let is_tangent = project(x, &frame.tangent).norm() > 0.5;
        let field = if is_tangent {
            let coeffs = coordinates(x, &frame.tangent);
            let sx = combine(&(&frame.shape * coeffs), &frame.tangent);
            solve_jacobi(x, &-sx, &xi)?
        } else {
            solve_jacobi(&AlgebraVector::zeros(x.n()), x, &xi)?
        };
        d.set_column(j, &coordinates(&field.value(r), &basis));
        dp.set_column(j, &coordinates(&field.derivative(r), &basis));
    }
    let condition = condition_number(&d);
    if !(condition < FOCAL_CONDITION) {
        return Err(Error::FocalPoint { radius: r, condition });
    }
    let inv = d.clone().lu().try_inverse().ok_or(Error::FocalPoint { radius: r, condition })?;
    let s = dp * inv;
    Ok(TubeOperator { operator: SymmetricOperator { matrix: s, basis, labels }, radius: r, xi, condition })
}

/// Principal curvatures of the tube, clustered.
pub fn tube_spectrum(tube: &TubeData, spec: FamilySpec) -> Result<SpectrumReport> {
    let op = tube_shape_operator(tube)?;
    let provenance = match tube.base {
        TubeBase::Horosphere { .. } => Provenance::OrbitDirect,
        _ => Provenance::JacobiNumeric,
    };
    let entries = op
        .clusters()
        .into_iter()
        .map(|(value, multiplicity)| SpectrumEntry { value, multiplicity, label: String::new() })
        .collect();
    Ok(SpectrumReport::new(spec, provenance, entries))
}

/// Numeric spectrum of a family through its tube description.
pub fn numeric_spectrum(spec: &FamilySpec) -> Result<SpectrumReport> {
    let tube = TubeData::for_family(spec)?;
    tube_spectrum(&tube, *spec)
}

/// Component of the structure vector `J nu` in one principal curvature space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopfComponent {
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub component: f64,
}

/// Projections of `J nu`, `nu = -gamma'(r)` (or the horosphere normal), onto the
/// principal curvature spaces.
pub fn hopf_projection_report(tube: &TubeData) -> Result<Vec<HopfComponent>> {
    let op = tube_shape_operator(tube)?;
    let jnu = match tube.base {
        TubeBase::Horosphere { .. } => op.xi.apply_j(),
        _ => -op.xi.apply_j(),
    };
    let coeffs = coordinates(&jnu, &op.operator.basis);
    let (values, vectors) = symmetric_eigen(&op.operator.matrix);
    let mut out = Vec::new();
    let mut start = 0;
    for (value, mult) in cluster(&values) {
        let block = vectors.columns(start, mult);
        let comp = (block.transpose() * &coeffs).norm();
        out.push(HopfComponent { eigenvalue: value, multiplicity: mult, component: comp });
        start += mult;
    }
    Ok(out)
}

/// `max |dS/dr - (K - S^2)|` with `dS/dr` from central differences of step `h`
/// and `K X = -R(X, gamma') gamma'` in the parallel frame.
pub fn riccati_residual(tube: &TubeData, h: f64) -> Result<f64> {
    let at = |r: f64| {
        let mut t = tube.clone();
        t.radius = r;
        tube_shape_operator(&t)
    };
    let s = at(tube.radius)?;
    let sp = at(tube.radius + h)?;
    let sm = at(tube.radius - h)?;
    let ds = (&sp.operator.matrix - &sm.operator.matrix) / (2.0 * h);
    let basis = &s.operator.basis;
    let xi = &s.xi;
    let m = basis.len();
    let k = DMatrix::from_fn(m, m, |i, j| -curvature_ambient(&basis[j], xi, xi).dot(&basis[i]));
    let s2 = &s.operator.matrix * &s.operator.matrix;
    Ok((ds - (k - s2)).amax())
}
