// SPDX-License-Identifier: Apache-2.0

//! Fixed-step classical Runge-Kutta.

use nalgebra::DVector;

/// One RK4 step of `y' = f(t, y)`.
pub fn rk4_step<F>(f: &F, t: f64, y: &DVector<f64>, h: f64) -> DVector<f64>
where
    F: Fn(f64, &DVector<f64>) -> DVector<f64>,
{
    let k1 = f(t, y);
    let k2 = f(t + 0.5 * h, &(y + &k1 * (0.5 * h)));
    let k3 = f(t + 0.5 * h, &(y + &k2 * (0.5 * h)));
    let k4 = f(t + h, &(y + &k3 * h));
    y + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// Integrates from `t0` to `t1` in `steps` equal steps and returns all
/// `steps + 1` samples `(t, y)`.
pub fn rk4_integrate<F>(f: F, t0: f64, t1: f64, y0: DVector<f64>, steps: usize) -> Vec<(f64, DVector<f64>)>
where
    F: Fn(f64, &DVector<f64>) -> DVector<f64>,
{
    let steps = steps.max(1);
    let h = (t1 - t0) / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    let mut y = y0;
    out.push((t0, y.clone()));
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        y = rk4_step(&f, t, &y, h);
        out.push((t0 + (i + 1) as f64 * h, y.clone()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let out = rk4_integrate(|_, y| y.clone(), 0.0, 1.0, DVector::from_element(1, 1.0), 100);
        assert_eq!(out.len(), 101);
        assert!((out[100].1[0] - 1f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn harmonic_oscillator_is_fourth_order() {
        let f = |_: f64, y: &DVector<f64>| DVector::from_vec(vec![y[1], -y[0]]);
        let err = |steps| {
            let out = rk4_integrate(f, 0.0, 2.0, DVector::from_vec(vec![1.0, 0.0]), steps);
            (out.last().unwrap().1[0] - 2f64.cos()).abs()
        };
        let ratio = err(50) / err(100);
        assert!(ratio > 14.0 && ratio < 18.0, "ratio {ratio}");
    }
}
