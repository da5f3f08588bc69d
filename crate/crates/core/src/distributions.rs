// SPDX-License-Identifier: Apache-2.0

//! Distributions on tubes `M(r)` around `W^4_phi` in `CH^3`.
//!
//! A point of the tube is `p = s gamma_eta(r)` with `s` in the group of
//! `W` and `eta` a unit vector of `w_perp`. Frame fields on the tube are
//! evaluated by locating `(s, eta)` for each point, so covariant derivatives
//! can be taken by finite differences along flows `p Exp(tX)`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::algebra::{group_exp, group_multiply, AlgebraVector, GroupElement};
use crate::connection::{curvature_ambient, default_steps, geodesic_from, levi_civita, parallel_transport};
use crate::error::{domain, Error, Result};
use crate::linalg::{orthonormalize, project};
use crate::orbits::WModel;
use crate::tolerances::{NEWTON_MAX_ITER, NEWTON_TOL, TUBE_DISTANCE};

/// A point on a tube together with its footpoint and unit normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubePoint {
    pub point: GroupElement,
    /// Footpoint `s` on `W`, as a group element of `S`.
    pub footpoint: GroupElement,
    /// Unit normal `eta` at the footpoint, in left-invariant components.
    pub xi: AlgebraVector,
    pub radius: f64,
}

impl TubePoint {
    /// The point `s gamma_eta(r)`.
    pub fn from_footpoint(footpoint: GroupElement, xi: AlgebraVector, radius: f64) -> Self {
        let point = group_multiply(&footpoint, &geodesic_point(&xi, radius));
        Self { point, footpoint, xi, radius }
    }

    /// Parallel displacement of `x` (a vector at the footpoint) to the point,
    /// closed form: the plane `(B, eta)` and its `J`-image rotate, everything
    /// else is constant.
    pub fn transported(&self, x: &AlgebraVector) -> AlgebraVector {
        let n = x.n();
        let m = crate::algebra::ModelCHn::new(n).expect("n >= 2");
        let (th, sech) = ((self.radius / 2.0).tanh(), 1.0 / (self.radius / 2.0).cosh());
        let eta = &self.xi;
        let jeta = eta.apply_j();
        let (b, z) = (m.b(), m.z());
        let (cb, ce, cz, cj) = (x.dot(&b), x.dot(eta), x.dot(&z), x.dot(&jeta));
        let rest = x - &(&b * cb) - (eta * ce) - (&z * cz) - (&jeta * cj);
        let mut out = rest;
        out += &((&b * sech + eta * th) * cb);
        out += &((&b * -th + eta * sech) * ce);
        out += &((&z * sech + &jeta * th) * cz);
        out += &((&z * -th + &jeta * sech) * cj);
        out
    }

    /// Velocity `gamma'(r) = -tanh(r/2) B + sech(r/2) eta`: the outer unit normal.
    pub fn normal(&self) -> AlgebraVector {
        let m = crate::algebra::ModelCHn::new(self.xi.n()).expect("n >= 2");
        let (th, sech) = ((self.radius / 2.0).tanh(), 1.0 / (self.radius / 2.0).cosh());
        m.b() * -th + &self.xi * sech
    }
}

/// Endpoint of the unit-speed geodesic from `o` in direction `eta` (in `g_alpha`).
fn geodesic_point(eta: &AlgebraVector, t: f64) -> GroupElement {
    let sech2 = 1.0 / (t / 2.0).cosh().powi(2);
    let th = (t / 2.0).tanh();
    let u: Vec<f64> = eta.u().iter().map(|x| 2.0 * th * x).collect();
    GroupElement::new(sech2.ln(), &u, 0.0)
}

/// `(s, eta, distance)` for a point off `W`, from the closed form.
fn locate_closed(p: &GroupElement, w: &WModel) -> Result<(GroupElement, AlgebraVector, f64)> {
    let pu = AlgebraVector::new(0.0, p.u(), 0.0);
    let pw = project(&pu, w.normal_basis());
    let norm = pw.norm();
    if norm <= 1e-300 {
        return domain("point lies on the focal submanifold");
    }
    let dist = 2.0 * (norm * (-p.a() / 2.0).exp() / 2.0).asinh();
    let eta = pw * (1.0 / norm);
    let a = p.a() - (1.0 / (dist / 2.0).cosh().powi(2)).ln();
    let v = &pu - &project(&pu, w.normal_basis());
    let x = p.x() - (dist / 2.0).tanh() * (a / 2.0).exp() * v.apply_j().dot(&eta);
    Ok((GroupElement::new(a, v.u(), x), eta, dist))
}

/// Parameters `[a, v (in w), x, y (in w_perp)]` to the point `s(a,v,x) gamma_y(|y|)`.
fn param_point(theta: &DVector<f64>, w: &WModel, tangent_g: &[AlgebraVector]) -> GroupElement {
    let n = w.model().n();
    let m = tangent_g.len();
    let mut v = AlgebraVector::zeros(n);
    for (i, t) in tangent_g.iter().enumerate() {
        v += &(t * theta[1 + i]);
    }
    let s = GroupElement::new(theta[0], v.u(), theta[1 + m]);
    let mut y = AlgebraVector::zeros(n);
    for (i, e) in w.normal_basis().iter().enumerate() {
        y += &(e * theta[2 + m + i]);
    }
    let len = y.norm();
    let g = if len == 0.0 { GroupElement::identity(n) } else { geodesic_point(&(y * (1.0 / len)), len) };
    group_multiply(&s, &g)
}

/// Locates `(s, eta, distance)` by Newton iteration on the square system
/// `s gamma_y = p`, seeded by the closed-form solution.
pub fn locate(p: &GroupElement, w: &WModel) -> Result<(GroupElement, AlgebraVector, f64)> {
    let (s0, eta0, d0) = locate_closed(p, w)?;
    let tangent_g: Vec<AlgebraVector> = w.c0_basis().iter().chain(w.d_basis()).cloned().collect();
    let m = tangent_g.len();
    let dim = p.dim();
    let mut theta = DVector::zeros(dim);
    theta[0] = s0.a();
    let v0 = AlgebraVector::new(0.0, s0.u(), 0.0);
    for (i, t) in tangent_g.iter().enumerate() {
        theta[1 + i] = v0.dot(t);
    }
    theta[1 + m] = s0.x();
    for (i, e) in w.normal_basis().iter().enumerate() {
        theta[2 + m + i] = d0 * eta0.dot(e);
    }
    let residual = |th: &DVector<f64>| param_point(th, w, &tangent_g).as_flat() - p.as_flat();
    let mut f = residual(&theta);
    let mut converged = f.amax() <= NEWTON_TOL;
    let mut iterations = 0;
    while !converged && iterations < NEWTON_MAX_ITER {
        iterations += 1;
        let h = 1e-7;
        let mut jac = DMatrix::zeros(dim, dim);
        for j in 0..dim {
            let mut tp = theta.clone();
            let mut tm = theta.clone();
            tp[j] += h;
            tm[j] -= h;
            jac.set_column(j, &((residual(&tp) - residual(&tm)) / (2.0 * h)));
        }
        let step = jac.lu().solve(&f).ok_or(Error::NoConvergence { iterations, residual: f.amax() })?;
        theta -= &step;
        f = residual(&theta);
        converged = step.amax() <= NEWTON_TOL * theta.amax().max(1.0) || f.amax() <= NEWTON_TOL;
    }
    if f.amax() > 1e-10 {
        return Err(Error::NoConvergence { iterations, residual: f.amax() });
    }
    let n = w.model().n();
    let mut v = AlgebraVector::zeros(n);
    for (i, t) in tangent_g.iter().enumerate() {
        v += &(t * theta[1 + i]);
    }
    let s = GroupElement::new(theta[0], v.u(), theta[1 + m]);
    let mut y = AlgebraVector::zeros(n);
    for (i, e) in w.normal_basis().iter().enumerate() {
        y += &(e * theta[2 + m + i]);
    }
    let dist = y.norm();
    Ok((s, y * (1.0 / dist), dist))
}

/// The footpoint of a point at distance `r` from `W`.
pub fn footpoint(p: &GroupElement, r: f64, w: &WModel) -> Result<TubePoint> {
    let (s, eta, dist) = locate(p, w)?;
    if (dist - r).abs() > TUBE_DISTANCE {
        return Err(Error::OffTube { distance: dist, expected: r });
    }
    Ok(TubePoint { point: p.clone(), footpoint: s, xi: eta, radius: dist })
}

/// `B_B(r)` at a tube point, by the closed form `sech(r/2) B + tanh(r/2) eta`
/// and by numerical parallel transport of `B` along the normal geodesic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameField {
    pub closed: AlgebraVector,
    pub transported: AlgebraVector,
}

impl FrameField {
    pub fn discrepancy(&self) -> f64 {
        (&self.closed - &self.transported).norm()
    }
}

pub fn frame_b_field(tp: &TubePoint) -> FrameField {
    let n = tp.xi.n();
    let b = crate::algebra::ModelCHn::new(n).expect("n >= 2").b();
    let (th, sech) = ((tp.radius / 2.0).tanh(), 1.0 / (tp.radius / 2.0).cosh());
    let closed = &b * sech + &tp.xi * th;
    let curve = geodesic_from(&tp.footpoint, &tp.xi, tp.radius, default_steps(tp.radius));
    let transported = parallel_transport(&curve, &b).pop().expect("nonempty curve");
    FrameField { closed, transported }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    BB,
    Z,
    P,
    PF,
    F,
    PFUnit,
}

/// Frame fields on the complement of `W`, in left-invariant components.
struct Frame<'a> {
    w: &'a WModel,
}

impl Frame<'_> {
    fn eval(&self, p: &GroupElement, field: Field) -> Result<AlgebraVector> {
        let (_, eta, dist) = locate_closed(p, self.w)?;
        let m = self.w.model();
        Ok(match field {
            Field::BB => {
                let (th, sech) = ((dist / 2.0).tanh(), 1.0 / (dist / 2.0).cosh());
                m.b() * sech + &eta * th
            }
            Field::Z => m.z(),
            Field::P => self.w.p_of(&eta),
            Field::F => self.w.f_of(&eta),
            Field::PF => self.w.p_of(&self.w.f_of(&eta)),
            Field::PFUnit => self.w.p_of(&self.w.f_of(&eta)).normalized(),
        })
    }

    /// `nabla_X Y` at `p` for the field `Y`, with a central difference of step `h`.
    fn covariant(&self, p: &GroupElement, x: &AlgebraVector, field: Field, h: f64) -> Result<AlgebraVector> {
        let fwd = self.eval(&group_multiply(p, &group_exp(&(x * h))), field)?;
        let bwd = self.eval(&group_multiply(p, &group_exp(&(x * -h))), field)?;
        Ok((fwd - bwd) * (0.5 / h) + levi_civita(x, &self.eval(p, field)?))
    }
}

/// Worst-case residuals of the distribution checks over sampled tube points.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DistributionCheck {
    pub samples: usize,
    pub h: f64,
    /// `|<[X,Y], B_B>|` over the frame `{Z, P eta, PF eta, F eta}` of `D_perp`.
    pub d_perp_integrability: f64,
    /// `D_perp` component of `nabla_{B_B} B_B`.
    pub d_autoparallel: f64,
    /// Component of `nabla_X Y` in `TM(r) minus E` for `X, Y` in `E`.
    pub e_autoparallel: f64,
    /// Closed form vs transported `B_B`.
    pub frame_discrepancy: f64,
    /// Largest footpoint round-trip error.
    pub footpoint_error: f64,
    /// Deviation of a `D` integral curve from the plane `s RH^2(B, eta)`.
    pub d_leaf_deviation: f64,
}

impl DistributionCheck {
    /// The three finite-difference residuals.
    pub fn fd_residuals(&self) -> [f64; 3] {
        [self.d_perp_integrability, self.d_autoparallel, self.e_autoparallel]
    }

    /// Entrywise maximum of two reports.
    pub fn worst(&self, other: &Self) -> Self {
        Self {
            samples: self.samples + other.samples,
            h: self.h.max(other.h),
            d_perp_integrability: self.d_perp_integrability.max(other.d_perp_integrability),
            d_autoparallel: self.d_autoparallel.max(other.d_autoparallel),
            e_autoparallel: self.e_autoparallel.max(other.e_autoparallel),
            frame_discrepancy: self.frame_discrepancy.max(other.frame_discrepancy),
            footpoint_error: self.footpoint_error.max(other.footpoint_error),
            d_leaf_deviation: self.d_leaf_deviation.max(other.d_leaf_deviation),
        }
    }
}

/// Random tube point `s gamma_eta(r)`.
pub fn random_tube_point(w: &WModel, r: f64, rng: &mut ChaCha8Rng) -> TubePoint {
    let n = w.model().n();
    let mut gen = AlgebraVector::zeros(n);
    let m = w.model();
    gen += &(m.b() * StandardNormal.sample(rng));
    gen += &(m.z() * StandardNormal.sample(rng));
    for t in w.c0_basis().iter().chain(w.d_basis()) {
        let c: f64 = StandardNormal.sample(rng);
        gen += &(t * c);
    }
    let mut eta = AlgebraVector::zeros(n);
    for e in w.normal_basis() {
        let c: f64 = StandardNormal.sample(rng);
        eta += &(e * c);
    }
    TubePoint::from_footpoint(group_exp(&gen), eta.normalized(), r)
}

fn check_scope(w: &WModel) -> Result<()> {
    if w.model().n() != 3 || w.k() != 2 || !(w.phi() > 0.0 && w.phi() < std::f64::consts::FRAC_PI_2) {
        return domain("distribution checks are defined for W^4_phi in CH^3 with 0 < phi < pi/2");
    }
    Ok(())
}

/// Runs the `D`, `D_perp` and `E` checks at `samples` random points of `M(r)`.
pub fn distribution_check(r: f64, w: &WModel, samples: usize, h: f64, seed: u64) -> Result<DistributionCheck> {
    check_scope(w)?;
    if !(r > 0.0) || !(h > 0.0) {
        return domain("need r > 0 and h > 0");
    }
    let frame = Frame { w };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = DistributionCheck {
        samples,
        h,
        d_perp_integrability: 0.0,
        d_autoparallel: 0.0,
        e_autoparallel: 0.0,
        frame_discrepancy: 0.0,
        footpoint_error: 0.0,
        d_leaf_deviation: 0.0,
    };
    let d_perp = [Field::Z, Field::P, Field::PF, Field::F];
    for _ in 0..samples {
        let truth = random_tube_point(w, r, &mut rng);
        let tp = footpoint(&truth.point, r, w)?;
        out.footpoint_error =
            out.footpoint_error.max(tp.footpoint.coord_distance(&truth.footpoint)).max((&tp.xi - &truth.xi).max_abs());
        let p = &tp.point;
        out.frame_discrepancy = out.frame_discrepancy.max(frame_b_field(&tp).discrepancy());

        let bb = frame.eval(p, Field::BB)?;
        for &fx in &d_perp {
            for &fy in &d_perp {
                let x = frame.eval(p, fx)?;
                let y = frame.eval(p, fy)?;
                let br = frame.covariant(p, &x, fy, h)? - frame.covariant(p, &y, fx, h)?;
                out.d_perp_integrability = out.d_perp_integrability.max(br.dot(&bb).abs());
            }
        }
        let d_perp_vectors: Vec<AlgebraVector> = d_perp.iter().map(|&f| frame.eval(p, f)).collect::<Result<_>>()?;
        let d_perp_basis = orthonormalize(&d_perp_vectors, &[], 1e-10);
        let acc = frame.covariant(p, &bb, Field::BB, h)?;
        out.d_autoparallel = out.d_autoparallel.max(project(&acc, &d_perp_basis).norm());

        let e_fields = [Field::BB, Field::PFUnit];
        let e_basis: Vec<AlgebraVector> =
            orthonormalize(&e_fields.iter().map(|&f| frame.eval(p, f)).collect::<Result<Vec<_>>>()?, &[], 1e-10);
        let rest = orthonormalize(&d_perp_vectors, &e_basis, 1e-8);
        for &fx in &e_fields {
            for &fy in &e_fields {
                let x = frame.eval(p, fx)?;
                let v = frame.covariant(p, &x, fy, h)?;
                out.e_autoparallel = out.e_autoparallel.max(project(&v, &rest).norm());
            }
        }
        out.d_leaf_deviation = out.d_leaf_deviation.max(d_leaf_deviation(&tp, w, 1.0, 200)?);
    }
    Ok(out)
}

/// Follows the integral curve of `B_B` from the tube point for parameter
/// length `t_end` and returns the largest deviation of `s^{-1} c(t)` from the
/// plane `{(a, t eta, 0)}`.
pub fn d_leaf_deviation(tp: &TubePoint, w: &WModel, t_end: f64, steps: usize) -> Result<f64> {
    let frame = Frame { w };
    let rhs = |_: f64, y: &DVector<f64>| {
        let g = GroupElement::from_flat(y.clone());
        let v = frame.eval(&g, Field::BB).expect("off focal set");
        g.left_translate(&v)
    };
    let path = crate::ode::rk4_integrate(rhs, 0.0, t_end, tp.point.as_flat().clone(), steps);
    let s_inv = tp.footpoint.inverse();
    let mut worst = 0.0f64;
    for (_, y) in path {
        let q = group_multiply(&s_inv, &GroupElement::from_flat(y));
        let u = AlgebraVector::new(0.0, q.u(), 0.0);
        let off_plane = (&u - &(&tp.xi * u.dot(&tp.xi))).norm();
        worst = worst.max(off_plane).max(q.x().abs());
    }
    Ok(worst)
}

/// Curvature of the `E` leaves from the Gauss equation for a parallel surface
/// at distance `r` from a totally geodesic `RH^2` in `RH^3` of curvature
/// `-1/4`: `-1/4 + tanh^2(r/2)/4 = -sech^2(r/2)/4`.
pub fn e_leaf_curvature(r: f64) -> f64 {
    -0.25 / (r / 2.0).cosh().powi(2)
}

/// The reference value `-sech(r/2)/4` for the curvature of the `E` leaves.
pub fn e_leaf_curvature_printed(r: f64) -> f64 {
    -0.25 / (r / 2.0).cosh()
}

/// Curvature of the `E` leaf through a random tube point, from the frame
/// fields: `K = K_ambient(e1, e2) + <II(e1,e1), II(e2,e2)> - |II(e1,e2)|^2`.
pub fn e_leaf_curvature_numeric(r: f64, w: &WModel, h: f64, seed: u64) -> Result<f64> {
    check_scope(w)?;
    let frame = Frame { w };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tp = random_tube_point(w, r, &mut rng);
    let p = &tp.point;
    let e1 = frame.eval(p, Field::BB)?;
    let e2 = frame.eval(p, Field::PFUnit)?;
    let e_basis = [e1.clone(), e2.clone()];
    let ii = |x: &AlgebraVector, f: Field| -> Result<AlgebraVector> {
        let v = frame.covariant(p, x, f, h)?;
        Ok(&v - &project(&v, &e_basis))
    };
    let i11 = ii(&e1, Field::BB)?;
    let i22 = ii(&e2, Field::PFUnit)?;
    let i12 = ii(&e1, Field::PFUnit)?;
    Ok(curvature_ambient(&e1, &e2, &e2).dot(&e1) + i11.dot(&i22) - i12.norm_squared())
}
