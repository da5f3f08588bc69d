// SPDX-License-Identifier: Apache-2.0

//! The metric Lie algebra `a + g_alpha + g_2alpha` and the solvable group `AN`.
//!
//! Vectors are stored flat as `[a, u_1, .., u_{2n-2}, z]`: the coefficient of
//! `B`, the `g_alpha` part in the orthonormal basis `e_1, .., e_{2n-2}`, and the
//! coefficient of `Z = JB`. The complex structure acts on `g_alpha` by 2x2
//! rotation blocks, `J e_{2i-1} = e_{2i}`, `J e_{2i} = -e_{2i-1}`.
//!
//! Left-invariant vector fields on `AN` are identified with these vectors, so an
//! `AlgebraVector` also serves as a tangent vector at any point via left
//! translation.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex hyperbolic space `CH^n` modelled as the group `AN`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelCHn {
    n: usize,
}

/// Builds the model of `CH^n`; `n` is the complex dimension.
pub fn make_model(n: usize) -> Result<ModelCHn> {
    ModelCHn::new(n)
}

impl ModelCHn {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        Ok(Self { n })
    }

    /// Complex dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Real dimension `2n` of `a + n`.
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    /// Real dimension `2n - 2` of `g_alpha`.
    pub fn dim_galpha(&self) -> usize {
        2 * self.n - 2
    }

    pub fn zero(&self) -> AlgebraVector {
        AlgebraVector::zeros(self.n)
    }

    pub fn b(&self) -> AlgebraVector {
        let mut v = self.zero();
        v.data[0] = 1.0;
        v
    }

    pub fn z(&self) -> AlgebraVector {
        let mut v = self.zero();
        v.data[self.dim() - 1] = 1.0;
        v
    }

    /// Basis vector `e_i` of `g_alpha`, zero-based (`galpha(0)` is `e_1`).
    pub fn galpha(&self, i: usize) -> AlgebraVector {
        assert!(i < self.dim_galpha(), "g_alpha index {i} out of range");
        let mut v = self.zero();
        v.data[1 + i] = 1.0;
        v
    }

    /// Ordered orthonormal basis `B, e_1, .., e_{2n-2}, Z`.
    pub fn basis(&self) -> Vec<AlgebraVector> {
        (0..self.dim()).map(|i| self.unit(i)).collect()
    }

    /// Labels matching [`ModelCHn::basis`].
    pub fn basis_labels(&self) -> Vec<String> {
        let mut labels = vec!["B".to_string()];
        labels.extend((1..=self.dim_galpha()).map(|i| format!("e{i}")));
        labels.push("Z".to_string());
        labels
    }

    fn unit(&self, i: usize) -> AlgebraVector {
        let mut v = self.zero();
        v.data[i] = 1.0;
        v
    }

    /// Matrix of the complex structure in the flat basis.
    pub fn j_matrix(&self) -> DMatrix<f64> {
        let d = self.dim();
        DMatrix::from_fn(d, d, |i, j| self.unit(i).dot(&self.unit(j).apply_j()))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.n)
    }
}

/// An element `aB + U + zZ` of `a + n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraVector {
    data: DVector<f64>,
}

impl AlgebraVector {
    pub fn zeros(n: usize) -> Self {
        Self { data: DVector::zeros(2 * n) }
    }

    pub fn new(a: f64, u: &[f64], z: f64) -> Self {
        assert!(u.len() >= 2 && u.len().is_multiple_of(2), "g_alpha part must have even length >= 2");
        let mut data = DVector::zeros(u.len() + 2);
        data[0] = a;
        data.rows_mut(1, u.len()).copy_from_slice(u);
        data[u.len() + 1] = z;
        Self { data }
    }

    /// Wraps a flat coordinate vector `[a, u.., z]`.
    pub fn from_flat(data: DVector<f64>) -> Self {
        assert!(data.len() >= 4 && data.len().is_multiple_of(2), "flat vector must have even length >= 4");
        Self { data }
    }

    pub fn from_slice(flat: &[f64]) -> Self {
        Self::from_flat(DVector::from_column_slice(flat))
    }

    pub fn as_flat(&self) -> &DVector<f64> {
        &self.data
    }

    pub fn into_flat(self) -> DVector<f64> {
        self.data
    }

    pub fn as_slice(&self) -> &[f64] {
        self.data.as_slice()
    }

    /// Real dimension `2n`.
    pub fn dim(&self) -> usize {
        self.data.len()
    }

    /// Complex dimension `n` of the ambient space.
    pub fn n(&self) -> usize {
        self.data.len() / 2
    }

    pub fn a(&self) -> f64 {
        self.data[0]
    }

    pub fn u(&self) -> &[f64] {
        &self.data.as_slice()[1..self.dim() - 1]
    }

    pub fn z(&self) -> f64 {
        self.data[self.dim() - 1]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.data.dot(&other.data)
    }

    pub fn norm_squared(&self) -> f64 {
        self.data.norm_squared()
    }

    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn normalized(&self) -> Self {
        Self { data: self.data.normalize() }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Drops the `B` and `Z` components.
    pub fn galpha_part(&self) -> Self {
        let mut v = self.clone();
        let d = v.dim();
        v.data[0] = 0.0;
        v.data[d - 1] = 0.0;
        v
    }

    pub fn is_in_galpha(&self, tol: f64) -> bool {
        self.a().abs() <= tol && self.z().abs() <= tol
    }

    /// The complex structure: `JB = Z`, `JZ = -B`, rotation blocks on `g_alpha`.
    pub fn apply_j(&self) -> Self {
        let d = self.dim();
        let mut out = DVector::zeros(d);
        out[0] = -self.data[d - 1];
        out[d - 1] = self.data[0];
        for i in (1..d - 1).step_by(2) {
            out[i] = -self.data[i + 1];
            out[i + 1] = self.data[i];
        }
        Self { data: out }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.amax()
    }
}

impl fmt::Display for AlgebraVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}B + (", self.a())?;
        for (i, x) in self.u().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ") + {}Z", self.z())
    }
}

impl Add for AlgebraVector {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { data: self.data + rhs.data }
    }
}

impl Add<&AlgebraVector> for &AlgebraVector {
    type Output = AlgebraVector;
    fn add(self, rhs: &AlgebraVector) -> AlgebraVector {
        AlgebraVector { data: &self.data + &rhs.data }
    }
}

impl Sub for AlgebraVector {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { data: self.data - rhs.data }
    }
}

impl Sub<&AlgebraVector> for &AlgebraVector {
    type Output = AlgebraVector;
    fn sub(self, rhs: &AlgebraVector) -> AlgebraVector {
        AlgebraVector { data: &self.data - &rhs.data }
    }
}

impl AddAssign<&AlgebraVector> for AlgebraVector {
    fn add_assign(&mut self, rhs: &AlgebraVector) {
        self.data += &rhs.data;
    }
}

impl SubAssign<&AlgebraVector> for AlgebraVector {
    fn sub_assign(&mut self, rhs: &AlgebraVector) {
        self.data -= &rhs.data;
    }
}

impl Mul<f64> for AlgebraVector {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self { data: self.data * s }
    }
}

impl Mul<f64> for &AlgebraVector {
    type Output = AlgebraVector;
    fn mul(self, s: f64) -> AlgebraVector {
        AlgebraVector { data: &self.data * s }
    }
}

impl Mul<&AlgebraVector> for f64 {
    type Output = AlgebraVector;
    fn mul(self, v: &AlgebraVector) -> AlgebraVector {
        v * self
    }
}

impl Mul<AlgebraVector> for f64 {
    type Output = AlgebraVector;
    fn mul(self, v: AlgebraVector) -> AlgebraVector {
        v * self
    }
}

impl Neg for AlgebraVector {
    type Output = Self;
    fn neg(self) -> Self {
        Self { data: -self.data }
    }
}

impl Neg for &AlgebraVector {
    type Output = AlgebraVector;
    fn neg(self) -> AlgebraVector {
        AlgebraVector { data: -&self.data }
    }
}

/// `<JU, V>` for the `g_alpha` parts of two vectors.
pub(crate) fn omega(u: &[f64], v: &[f64]) -> f64 {
    u.chunks_exact(2).zip(v.chunks_exact(2)).map(|(p, q)| p[0] * q[1] - p[1] * q[0]).sum()
}

/// Lie bracket: the skew-symmetric bilinear extension of
/// `[B, Z] = Z`, `2[B, U] = U`, `[U, V] = <JU, V> Z`.
pub fn bracket(x: &AlgebraVector, y: &AlgebraVector) -> AlgebraVector {
    debug_assert_eq!(x.dim(), y.dim());
    let d = x.dim();
    let (a, b) = (x.a(), y.a());
    let mut out = DVector::zeros(d);
    for i in 1..d - 1 {
        out[i] = 0.5 * (a * y.data[i] - b * x.data[i]);
    }
    out[d - 1] = a * y.z() - b * x.z() + omega(x.u(), y.u());
    AlgebraVector { data: out }
}

pub fn apply_j(x: &AlgebraVector) -> AlgebraVector {
    x.apply_j()
}

/// `rho(s) = (e^s - 1)/s`, with `rho(0) = 1`.
pub fn rho(s: f64) -> f64 {
    if s.abs() < 1e-4 {
        // Taylor series through s^6.
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 2..=7 {
            term *= s / k as f64;
            sum += term;
        }
        sum
    } else {
        s.exp_m1() / s
    }
}

/// A point `(a, Exp_n(U + xZ))` of `AN`, stored flat as `[a, u.., x]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    coords: DVector<f64>,
}

impl GroupElement {
    pub fn identity(n: usize) -> Self {
        Self { coords: DVector::zeros(2 * n) }
    }

    pub fn new(a: f64, u: &[f64], x: f64) -> Self {
        let v = AlgebraVector::new(a, u, x);
        Self { coords: v.data }
    }

    pub fn from_flat(coords: DVector<f64>) -> Self {
        assert!(coords.len() >= 4 && coords.len().is_multiple_of(2));
        Self { coords }
    }

    pub fn as_flat(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn a(&self) -> f64 {
        self.coords[0]
    }

    pub fn u(&self) -> &[f64] {
        &self.coords.as_slice()[1..self.dim() - 1]
    }

    pub fn x(&self) -> f64 {
        self.coords[self.dim() - 1]
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    /// Max-norm distance between coordinate vectors.
    pub fn coord_distance(&self, other: &Self) -> f64 {
        (&self.coords - &other.coords).amax()
    }

    pub fn inverse(&self) -> Self {
        let a = self.a();
        let mut out = DVector::zeros(self.dim());
        out[0] = -a;
        let s = (-a / 2.0).exp();
        for (o, u) in out.as_mut_slice()[1..self.dim() - 1].iter_mut().zip(self.u()) {
            *o = -s * u;
        }
        let d = self.dim();
        out[d - 1] = -(-a).exp() * self.x();
        Self { coords: out }
    }

    /// Coordinate velocity of `t -> g Exp(tX)` at `t = 0`: the differential of
    /// left translation applied to a left-invariant vector.
    pub fn left_translate(&self, x: &AlgebraVector) -> DVector<f64> {
        let d = self.dim();
        let a = self.a();
        let half = (a / 2.0).exp();
        let mut out = DVector::zeros(d);
        out[0] = x.a();
        for i in 1..d - 1 {
            out[i] = half * x.data[i];
        }
        out[d - 1] = a.exp() * x.z() + 0.5 * half * omega(self.u(), x.u());
        out
    }
}

/// Group law `(a,U,x)(b,V,y) = (a+b, U + e^{a/2}V, x + e^a y + e^{a/2}<JU,V>/2)`.
pub fn group_multiply(g: &GroupElement, h: &GroupElement) -> GroupElement {
    debug_assert_eq!(g.dim(), h.dim());
    let d = g.dim();
    let a = g.a();
    let half = (a / 2.0).exp();
    let mut out = DVector::zeros(d);
    out[0] = a + h.a();
    for i in 1..d - 1 {
        out[i] = g.coords[i] + half * h.coords[i];
    }
    out[d - 1] = g.x() + a.exp() * h.x() + 0.5 * half * omega(g.u(), h.u());
    GroupElement { coords: out }
}

/// Lie exponential `aB + U + xZ -> (a, rho(a/2) U, rho(a) x)`.
pub fn group_exp(x: &AlgebraVector) -> GroupElement {
    let d = x.dim();
    let a = x.a();
    let ru = rho(a / 2.0);
    let mut out = DVector::zeros(d);
    out[0] = a;
    for i in 1..d - 1 {
        out[i] = ru * x.data[i];
    }
    out[d - 1] = rho(a) * x.z();
    GroupElement { coords: out }
}

/// Inverse of [`group_exp`]; the exponential is a global diffeomorphism.
pub fn group_log(g: &GroupElement) -> AlgebraVector {
    let d = g.dim();
    let a = g.a();
    let ru = rho(a / 2.0);
    let mut out = DVector::zeros(d);
    out[0] = a;
    for i in 1..d - 1 {
        out[i] = g.coords[i] / ru;
    }
    out[d - 1] = g.x() / rho(a);
    AlgebraVector { data: out }
}
