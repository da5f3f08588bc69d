// SPDX-License-Identifier: Apache-2.0

//! Levi-Civita connection, curvature, geodesics and parallel transport on `AN`
//! in the left-invariant frame.
//!
//! A vector field along a curve is stored by its left-invariant components, so
//! `nabla_{c'} Y = Y' + levi_civita(c', Y)` with `c'` also in left-invariant
//! components.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::algebra::{bracket, omega, AlgebraVector, GroupElement, ModelCHn};
use crate::error::{domain, Result};
use crate::ode::rk4_step;
use crate::tolerances::{MEMBERSHIP, STEPS_PER_UNIT};

/// Closed form of `nabla_{aB+U+xZ}(bB+V+yZ)` for left-invariant fields.
pub fn levi_civita(x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
    debug_assert_eq!(x.dim(), y.dim());
    let d = x.dim();
    let x_z = x.z();
    let (b_y, y_z) = (y.a(), y.z());
    let (u, v) = (x.u(), y.u());
    let mut out = DVector::zeros(d);
    let uv: f64 = u.iter().zip(v).map(|(p, q)| p * q).sum();
    out[0] = 0.5 * uv + x_z * y_z;
    for i in (0..d - 2).step_by(2) {
        // J acts on the pair (u_i, u_{i+1}) as (-u_{i+1}, u_i)
        let ju = (-u[i + 1], u[i]);
        let jv = (-v[i + 1], v[i]);
        out[1 + i] = -0.5 * (b_y * u[i] + y_z * ju.0 + x_z * jv.0);
        out[2 + i] = -0.5 * (b_y * u[i + 1] + y_z * ju.1 + x_z * jv.1);
    }
    out[d - 1] = 0.5 * omega(u, v) - b_y * x_z;
    AlgebraVector::from_flat(out)
}

/// The connection recovered from the Koszul formula for left-invariant fields,
/// `2<nabla_X Y, W> = <[X,Y],W> - <[Y,W],X> + <[W,X],Y>`, one basis vector
/// `W` at a time.
pub fn levi_civita_koszul(x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
    let d = x.dim();
    let xy = bracket(x, y);
    let mut out = DVector::zeros(d);
    for i in 0..d {
        let mut w = DVector::zeros(d);
        w[i] = 1.0;
        let w = AlgebraVector::from_flat(w);
        out[i] = 0.5 * (xy.dot(&w) - bracket(y, &w).dot(x) + bracket(&w, x).dot(y));
    }
    AlgebraVector::from_flat(out)
}

/// Curvature tensor of constant holomorphic sectional curvature `-1`:
/// `R(X,Y)W = (<X,W>Y - <Y,W>X + <JX,W>JY - <JY,W>JX + 2<JX,Y>JW)/4`.
pub fn curvature_ambient(x: &AlgebraVector, y: &AlgebraVector, w: &AlgebraVector) -> AlgebraVector {
    let (jx, jy, jw) = (x.apply_j(), y.apply_j(), w.apply_j());
    let mut out = y * x.dot(w);
    out -= &(x * y.dot(w));
    out += &(&jy * jx.dot(w));
    out -= &(&jx * jy.dot(w));
    out += &(&jw * (2.0 * jx.dot(y)));
    out * 0.25
}

/// `nabla_X nabla_Y W - nabla_Y nabla_X W - nabla_{[X,Y]} W` on left-invariant fields.
pub fn curvature_from_connection(x: &AlgebraVector, y: &AlgebraVector, w: &AlgebraVector) -> AlgebraVector {
    levi_civita(x, &levi_civita(y, w)) - levi_civita(y, &levi_civita(x, w)) - levi_civita(&bracket(x, y), w)
}

/// `K(X,Y) = <R(X,Y)Y, X> / |X ^ Y|^2`.
pub fn sectional_curvature(x: &AlgebraVector, y: &AlgebraVector) -> Result<f64> {
    let area = x.norm_squared() * y.norm_squared() - x.dot(y).powi(2);
    if area <= 1e-24 * x.norm_squared().max(1.0) * y.norm_squared().max(1.0) {
        return domain("sectional curvature of a degenerate plane");
    }
    Ok(curvature_ambient(x, y, y).dot(x) / area)
}

/// A sampled point of a curve together with its velocity in left-invariant
/// components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSample {
    pub t: f64,
    pub point: GroupElement,
    pub velocity: AlgebraVector,
}

/// Unit-speed geodesic through the identity with initial velocity `v` in
/// `g_alpha`.
pub fn geodesic_unit_galpha(v: &AlgebraVector, t: f64) -> Result<CurveSample> {
    if !v.is_in_galpha(MEMBERSHIP) {
        return domain("initial velocity must lie in g_alpha");
    }
    if (v.norm() - 1.0).abs() > MEMBERSHIP {
        return domain(format!("initial velocity must be a unit vector, |v| = {}", v.norm()));
    }
    let th = (t / 2.0).tanh();
    let sech = 1.0 / (t / 2.0).cosh();
    let u: Vec<f64> = v.u().iter().map(|x| 2.0 * th * x).collect();
    let point = GroupElement::new((sech * sech).ln(), &u, 0.0);
    let mut velocity = v.galpha_part() * sech;
    velocity += &(ModelCHn::new(v.n())?.b() * -th);
    Ok(CurveSample { t, point, velocity })
}

/// Geodesic with initial point `start` and velocity `x0`, integrated as a
/// first-order system in the point coordinates and the left-invariant velocity.
pub fn geodesic_from(start: &GroupElement, x0: &AlgebraVector, t_end: f64, steps: usize) -> Vec<CurveSample> {
    let d = x0.dim();
    let rhs = |_: f64, y: &DVector<f64>| {
        let g = GroupElement::from_flat(y.rows(0, d).into_owned());
        let v = AlgebraVector::from_flat(y.rows(d, d).into_owned());
        let mut out = DVector::zeros(2 * d);
        out.rows_mut(0, d).copy_from(&g.left_translate(&v));
        out.rows_mut(d, d).copy_from(&(-levi_civita(&v, &v)).into_flat());
        out
    };
    let steps = steps.max(1);
    let h = t_end / steps as f64;
    let mut y = DVector::zeros(2 * d);
    y.rows_mut(0, d).copy_from(start.as_flat());
    y.rows_mut(d, d).copy_from(x0.as_flat());
    let mut out = Vec::with_capacity(steps + 1);
    let sample = |t: f64, y: &DVector<f64>| CurveSample {
        t,
        point: GroupElement::from_flat(y.rows(0, d).into_owned()),
        velocity: AlgebraVector::from_flat(y.rows(d, d).into_owned()),
    };
    out.push(sample(0.0, &y));
    for i in 0..steps {
        y = rk4_step(&rhs, i as f64 * h, &y, h);
        out.push(sample((i + 1) as f64 * h, &y));
    }
    out
}

/// Geodesic from the identity, `steps` RK4 steps on `[0, t_end]`.
pub fn geodesic_numeric(x0: &AlgebraVector, t_end: f64, steps: usize) -> Vec<CurveSample> {
    geodesic_from(&GroupElement::identity(x0.n()), x0, t_end, steps)
}

/// Default step count for a parameter interval of the given length.
pub fn default_steps(length: f64) -> usize {
    ((length.abs() * STEPS_PER_UNIT as f64).ceil() as usize).max(1)
}

/// The one-parameter subgroup `t -> g Exp(tX)`; its left-invariant velocity is
/// the constant `X`.
pub fn one_parameter_curve(start: &GroupElement, x: &AlgebraVector, t_end: f64, steps: usize) -> Vec<CurveSample> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|i| {
            let t = t_end * i as f64 / steps as f64;
            CurveSample {
                t,
                point: crate::algebra::group_multiply(start, &crate::algebra::group_exp(&(x * t))),
                velocity: x.clone(),
            }
        })
        .collect()
}

/// Cubic Lagrange interpolation of the velocity at parameter `t` inside
/// interval `[i, i+1]`, using the four nearest samples.
fn velocity_at(curve: &[CurveSample], i: usize, t: f64) -> AlgebraVector {
    if curve.len() < 4 {
        let (c0, c1) = (&curve[i], &curve[i + 1]);
        let s = (t - c0.t) / (c1.t - c0.t);
        return &c0.velocity * (1.0 - s) + &c1.velocity * s;
    }
    let start = i.saturating_sub(1).min(curve.len() - 4);
    let nodes = &curve[start..start + 4];
    let mut out = AlgebraVector::zeros(curve[0].velocity.n());
    for (j, nj) in nodes.iter().enumerate() {
        let mut w = 1.0;
        for (m, nm) in nodes.iter().enumerate() {
            if m != j {
                w *= (t - nm.t) / (nj.t - nm.t);
            }
        }
        out += &(&nj.velocity * w);
    }
    out
}

/// Transport along a sampled curve solving `Y' = -nabla_{c'} Y + extra(c', Y)`.
/// With `extra = 0` this is parallel transport.
pub fn transport_with<E>(curve: &[CurveSample], y0: &AlgebraVector, extra: E) -> Vec<AlgebraVector>
where
    E: Fn(&AlgebraVector, &AlgebraVector) -> AlgebraVector,
{
    let mut out = Vec::with_capacity(curve.len());
    let mut y = y0.clone();
    out.push(y.clone());
    for i in 0..curve.len().saturating_sub(1) {
        let (t0, t1) = (curve[i].t, curve[i + 1].t);
        let h = t1 - t0;
        let vm = velocity_at(curve, i, t0 + 0.5 * h);
        let f = |v: &AlgebraVector, y: &AlgebraVector| extra(v, y) - levi_civita(v, y);
        let k1 = f(&curve[i].velocity, &y);
        let k2 = f(&vm, &(&y + &(&k1 * (0.5 * h))));
        let k3 = f(&vm, &(&y + &(&k2 * (0.5 * h))));
        let k4 = f(&curve[i + 1].velocity, &(&y + &(&k3 * h)));
        y = &y + &((k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0));
        out.push(y.clone());
    }
    out
}

/// Parallel transport of `x0` along a sampled curve (`nabla_{c'} Y = 0`).
pub fn parallel_transport(curve: &[CurveSample], x0: &AlgebraVector) -> Vec<AlgebraVector> {
    transport_with(curve, x0, |_, _| AlgebraVector::zeros(x0.n()))
}
