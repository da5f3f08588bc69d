// SPDX-License-Identifier: Apache-2.0

//! Closed-form principal curvatures of the homogeneous hypersurfaces of
//! `CH^n` and the cubic that governs the tubes around `W^{2n-k}_phi`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::linalg::{poly_eval, same_cluster};
use crate::tolerances::CLUSTER_REL;

/// The six families of homogeneous hypersurfaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Tubes around a totally geodesic `CH^k`.
    A,
    /// Tubes around a totally geodesic `RH^n`.
    B,
    /// Horospheres.
    H,
    /// Equidistant hypersurfaces to the minimal ruled `W^{2n-1}`.
    S,
    /// Tubes around `W^{2n-k}` with totally real normal spaces.
    WPi2,
    /// Tubes around `W^{2n-k}_phi`, `0 < phi < pi/2`.
    WPhi,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::A, Family::B, Family::H, Family::S, Family::WPi2, Family::WPhi];

    pub fn tag(&self) -> &'static str {
        match self {
            Family::A => "A",
            Family::B => "B",
            Family::H => "H",
            Family::S => "S",
            Family::WPi2 => "W_pi/2",
            Family::WPhi => "W_phi",
        }
    }

    pub fn description(&self) -> &'static str {
        match self {
            Family::A => "tube around totally geodesic CH^k",
            Family::B => "tube around totally geodesic RH^n",
            Family::H => "horosphere",
            Family::S => "equidistant hypersurface to W^{2n-1}",
            Family::WPi2 => "tube around W^{2n-k}, totally real normal space",
            Family::WPhi => "tube around W^{2n-k}_phi",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A family with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum FamilySpec {
    A { n: usize, k: usize, r: f64 },
    B { n: usize, r: f64 },
    H { n: usize },
    S { n: usize, r: f64 },
    WPi2 { n: usize, k: usize, r: f64 },
    WPhi { n: usize, k: usize, phi: f64, r: f64 },
}

impl FamilySpec {
    pub fn family(&self) -> Family {
        match self {
            FamilySpec::A { .. } => Family::A,
            FamilySpec::B { .. } => Family::B,
            FamilySpec::H { .. } => Family::H,
            FamilySpec::S { .. } => Family::S,
            FamilySpec::WPi2 { .. } => Family::WPi2,
            FamilySpec::WPhi { .. } => Family::WPhi,
        }
    }

    pub fn n(&self) -> usize {
        match *self {
            FamilySpec::A { n, .. }
            | FamilySpec::B { n, .. }
            | FamilySpec::H { n }
            | FamilySpec::S { n, .. }
            | FamilySpec::WPi2 { n, .. }
            | FamilySpec::WPhi { n, .. } => n,
        }
    }

    pub fn k(&self) -> Option<usize> {
        match *self {
            FamilySpec::A { k, .. } | FamilySpec::WPi2 { k, .. } | FamilySpec::WPhi { k, .. } => Some(k),
            _ => None,
        }
    }

    pub fn r(&self) -> Option<f64> {
        match *self {
            FamilySpec::A { r, .. }
            | FamilySpec::B { r, .. }
            | FamilySpec::S { r, .. }
            | FamilySpec::WPi2 { r, .. }
            | FamilySpec::WPhi { r, .. } => Some(r),
            FamilySpec::H { .. } => None,
        }
    }

    pub fn phi(&self) -> Option<f64> {
        match *self {
            FamilySpec::WPhi { phi, .. } => Some(phi),
            FamilySpec::WPi2 { .. } => Some(FRAC_PI_2),
            _ => None,
        }
    }

    /// Same family and parameters with a different radius (no-op for `H`).
    pub fn with_radius(&self, radius: f64) -> Self {
        let mut out = *self;
        match &mut out {
            FamilySpec::A { r, .. }
            | FamilySpec::B { r, .. }
            | FamilySpec::S { r, .. }
            | FamilySpec::WPi2 { r, .. }
            | FamilySpec::WPhi { r, .. } => *r = radius,
            FamilySpec::H { .. } => {}
        }
        out
    }

    /// Checks the parameter ranges of the classification.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n < 2 {
            return Err(Error::InvalidDimension(n));
        }
        if let Some(r) = self.r() {
            if !r.is_finite() {
                return domain("radius must be finite");
            }
            let ok = match self {
                FamilySpec::S { .. } => r >= 0.0,
                _ => r > 0.0,
            };
            if !ok {
                return domain(format!("radius r = {r} out of range for family {}", self.family()));
            }
        }
        match *self {
            FamilySpec::A { k, .. } if k > n - 1 => domain(format!("family A needs 0 <= k <= n - 1, got k = {k}")),
            FamilySpec::WPi2 { k, .. } if !(2..n).contains(&k) => {
                domain(format!("family W_pi/2 needs 2 <= k <= n - 1, got k = {k}"))
            }
            FamilySpec::WPhi { k, phi, .. } => {
                if !(2..n).contains(&k) || k % 2 != 0 {
                    domain(format!("family W_phi needs even k with 2 <= k <= n - 1, got k = {k}"))
                } else if !(phi > 0.0 && phi < FRAC_PI_2) {
                    domain(format!("family W_phi needs 0 < phi < pi/2, got phi = {phi}; phi = pi/2 is family W_pi/2"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Total multiplicity `2n - 1`.
    pub fn dimension(&self) -> usize {
        2 * self.n() - 1
    }
}

/// Where a spectrum comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    ClosedForm,
    PaperTable,
    JacobiNumeric,
    OrbitDirect,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed-form",
            Provenance::PaperTable => "paper-table",
            Provenance::JacobiNumeric => "jacobi-numeric",
            Provenance::OrbitDirect => "orbit-direct",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub value: f64,
    pub multiplicity: usize,
    /// Symbolic name, e.g. `(1/2)tanh(r/2)`; merged values join names with `=`.
    pub label: String,
}

/// Distinct principal curvatures with multiplicities, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub spec: FamilySpec,
    pub provenance: Provenance,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumReport {
    /// Sorts, drops zero multiplicities and merges values closer than the
    /// cluster tolerance.
    pub fn new(spec: FamilySpec, provenance: Provenance, mut raw: Vec<SpectrumEntry>) -> Self {
        raw.retain(|e| e.multiplicity > 0);
        raw.sort_by(|a, b| a.value.total_cmp(&b.value));
        let mut entries: Vec<SpectrumEntry> = Vec::new();
        for e in raw {
            match entries.last_mut() {
                Some(last) if same_cluster(last.value, e.value, CLUSTER_REL) => {
                    let total = last.multiplicity + e.multiplicity;
                    last.value =
                        (last.value * last.multiplicity as f64 + e.value * e.multiplicity as f64) / total as f64;
                    last.multiplicity = total;
                    if !e.label.is_empty() && !last.label.split('=').any(|l| l == e.label) {
                        last.label =
                            if last.label.is_empty() { e.label } else { format!("{}={}", last.label, e.label) };
                    }
                }
                _ => entries.push(e),
            }
        }
        Self { spec, provenance, entries }
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.multiplicity).collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }

    /// All eigenvalues repeated by multiplicity.
    pub fn expanded(&self) -> Vec<f64> {
        self.entries.iter().flat_map(|e| std::iter::repeat_n(e.value, e.multiplicity)).collect()
    }
}

fn entry(value: f64, multiplicity: usize, label: &str) -> SpectrumEntry {
    SpectrumEntry { value, multiplicity, label: label.to_string() }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return domain(format!("radius must be positive and finite, got {r}"));
    }
    Ok(())
}

/// `beta = 27 sin^2(phi) tanh^2(r/2) sech^4(r/2) - 2`.
pub fn beta(r: f64, phi: f64) -> Result<f64> {
    check_radius(r)?;
    let th = (r / 2.0).tanh();
    let sech2 = 1.0 / (r / 2.0).cosh().powi(2);
    Ok(27.0 * phi.sin().powi(2) * th * th * sech2 * sech2 - 2.0)
}

/// `Delta = 27 (beta^2 - 4)`.
pub fn discriminant(r: f64, phi: f64) -> Result<f64> {
    let b = beta(r, phi)?;
    Ok(27.0 * (b * b - 4.0))
}

/// Coefficients `[c3, c2, c1, c0]` of the characteristic polynomial
/// `p(x) = -x^3 + (csch sech + 4 tanh) x^2 / 2 - (2 sech^2 + 5 tanh^2) x / 4
///  - csch sech^3 (sin^2 phi - sinh^2 - 2 sinh^4) / 8`, all at `r/2`.
pub fn char_poly(r: f64, phi: f64) -> Result<[f64; 4]> {
    check_radius(r)?;
    let h = r / 2.0;
    let (sh, ch, th) = (h.sinh(), h.cosh(), h.tanh());
    let (csch, sech) = (1.0 / sh, 1.0 / ch);
    Ok([
        -1.0,
        0.5 * (csch * sech + 4.0 * th),
        -0.25 * (2.0 * sech * sech + 5.0 * th * th),
        -0.125 * csch * sech.powi(3) * (phi.sin().powi(2) - sh * sh - 2.0 * sh.powi(4)),
    ])
}

fn check_cubic_domain(r: f64, phi: f64) -> Result<()> {
    check_radius(r)?;
    if !(phi > 0.0 && phi < FRAC_PI_2) {
        return domain(format!("cubic eigenvalues need 0 < phi < pi/2, got {phi}"));
    }
    Ok(())
}

/// The three roots of `p`, ascending, via
/// `z_j = 2 cos((arccos(-beta/2) + 2 pi j)/3)` and
/// `6 lambda = coth(r/2) z + csch(r/2) sech(r/2) + 4 tanh(r/2)`.
pub fn cubic_eigenvalues(r: f64, phi: f64) -> Result<[f64; 3]> {
    check_cubic_domain(r, phi)?;
    let b = beta(r, phi)?;
    let h = r / 2.0;
    let (coth, shift) = (1.0 / h.tanh(), 1.0 / (h.sinh() * h.cosh()) + 4.0 * h.tanh());
    let theta = (-b / 2.0).clamp(-1.0, 1.0).acos();
    let mut out = [0.0; 3];
    for (j, o) in out.iter_mut().enumerate() {
        let z = 2.0 * ((theta + 2.0 * PI * j as f64) / 3.0).cos();
        *o = (coth * z + shift) / 6.0;
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// The same roots through the cube roots `u` of `(beta + i sqrt(4 - beta^2))/2`:
/// `lambda = -(coth(r/2)(u + 1/u) - csch(r/2) sech(r/2) - 4 tanh(r/2))/6`.
pub fn cubic_eigenvalues_u_form(r: f64, phi: f64) -> Result<[f64; 3]> {
    check_cubic_domain(r, phi)?;
    let b = beta(r, phi)?;
    let h = r / 2.0;
    let (coth, shift) = (1.0 / h.tanh(), 1.0 / (h.sinh() * h.cosh()) + 4.0 * h.tanh());
    let w = Complex64::new(b / 2.0, (4.0 - b * b).max(0.0).sqrt() / 2.0);
    let u0 = w.powf(1.0 / 3.0);
    let omega = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
    let mut out = [0.0; 3];
    let mut u = u0;
    for o in out.iter_mut() {
        let s = u + u.inv();
        *o = -(coth * s.re - shift) / 6.0;
        u *= omega;
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// The pair `(3/4)t -+ (1/2) sqrt(1 - (3/4) t^2)`, `t = tanh(r/2)`.
pub fn hopf_pair(r: f64) -> (f64, f64) {
    let t = (r / 2.0).tanh();
    let root = (1.0 - 0.75 * t * t).sqrt();
    (0.75 * t - 0.5 * root, 0.75 * t + 0.5 * root)
}

/// Closed-form spectrum. Family `A` is returned with the table's multiplicity
/// assignment under provenance `PaperTable`; see [`family_a_jacobi_multiplicities`].
pub fn family_spectrum(spec: &FamilySpec) -> Result<SpectrumReport> {
    let (provenance, raw) = family_entries(spec)?;
    Ok(SpectrumReport::new(*spec, provenance, raw))
}

/// The entries behind [`family_spectrum`], one per formula, before sorting and
/// merging of coinciding values. Zero multiplicities are kept.
pub fn family_entries(spec: &FamilySpec) -> Result<(Provenance, Vec<SpectrumEntry>)> {
    spec.validate()?;
    let n = spec.n();
    let (half_tanh, half_coth) = match spec.r() {
        Some(r) if r > 0.0 => (0.5 * (r / 2.0).tanh(), 0.5 / (r / 2.0).tanh()),
        _ => (0.0, f64::INFINITY),
    };
    let (provenance, raw) = match *spec {
        FamilySpec::A { k, r, .. } => (
            Provenance::PaperTable,
            vec![
                entry(half_tanh, 2 * (n - k - 1), "(1/2)tanh(r/2)"),
                entry(half_coth, 2 * k, "(1/2)coth(r/2)"),
                entry(1.0 / r.tanh(), 1, "coth(r)"),
            ],
        ),
        FamilySpec::B { r, .. } => (
            Provenance::ClosedForm,
            vec![
                entry(half_tanh, n - 1, "(1/2)tanh(r/2)"),
                entry(half_coth, n - 1, "(1/2)coth(r/2)"),
                entry(r.tanh(), 1, "tanh(r)"),
            ],
        ),
        FamilySpec::H { .. } => (Provenance::ClosedForm, vec![entry(0.5, 2 * n - 2, "1/2"), entry(1.0, 1, "1")]),
        FamilySpec::S { r, .. } => {
            let (l1, l2) = hopf_pair(r);
            (
                Provenance::ClosedForm,
                vec![entry(l1, 1, "l1"), entry(l2, 1, "l2"), entry(half_tanh, 2 * n - 3, "(1/2)tanh(r/2)")],
            )
        }
        FamilySpec::WPi2 { k, r, .. } => {
            let (l1, l2) = hopf_pair(r);
            (
                Provenance::ClosedForm,
                vec![
                    entry(l1, 1, "l1"),
                    entry(l2, 1, "l2"),
                    entry(half_tanh, 2 * n - 2 - k, "(1/2)tanh(r/2)"),
                    entry(half_coth, k - 1, "(1/2)coth(r/2)"),
                ],
            )
        }
        FamilySpec::WPhi { k, phi, r, .. } => {
            let roots = cubic_eigenvalues(r, phi)?;
            (
                Provenance::ClosedForm,
                vec![
                    entry(roots[0], 1, "c1"),
                    entry(roots[1], 1, "c2"),
                    entry(roots[2], 1, "c3"),
                    entry(half_tanh, 2 * n - k - 2, "(1/2)tanh(r/2)"),
                    entry(half_coth, k - 2, "(1/2)coth(r/2)"),
                ],
            )
        }
    };
    Ok((provenance, raw))
}

/// Multiplicities of `(1/2)tanh(r/2)`, `(1/2)coth(r/2)`, `coth(r)` for tubes
/// around `CH^k` as produced by the Jacobi-field computation.
pub fn family_a_jacobi_multiplicities(n: usize, k: usize) -> [usize; 3] {
    [2 * k, 2 * (n - k - 1), 1]
}

/// A value present in one report but not matched in the other.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumMismatch {
    pub value: f64,
    pub multiplicity_left: usize,
    pub multiplicity_right: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDiff {
    /// `(left value, right value, multiplicity)` for agreeing entries.
    pub matched: Vec<(f64, f64, usize)>,
    pub mismatches: Vec<SpectrumMismatch>,
    /// Largest value difference among value-matched entries.
    pub max_value_diff: f64,
    /// Two values are present on both sides with exchanged multiplicities.
    pub multiplicity_swap: bool,
}

impl SpectrumDiff {
    pub fn is_empty(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Matches entries by value (`|a - b| <= tol * max(1, |a|)`) and compares
/// multiplicities.
pub fn compare_spectra(a: &SpectrumReport, b: &SpectrumReport, tol: f64) -> SpectrumDiff {
    let mut used = vec![false; b.entries.len()];
    let mut matched = Vec::new();
    let mut mismatches = Vec::new();
    let mut value_pairs: Vec<(usize, usize)> = Vec::new();
    let mut max_diff = 0.0f64;
    for ea in &a.entries {
        let found = b
            .entries
            .iter()
            .enumerate()
            .find(|(j, eb)| !used[*j] && (ea.value - eb.value).abs() <= tol * ea.value.abs().max(1.0));
        match found {
            Some((j, eb)) => {
                used[j] = true;
                max_diff = max_diff.max((ea.value - eb.value).abs());
                if ea.multiplicity == eb.multiplicity {
                    matched.push((ea.value, eb.value, ea.multiplicity));
                } else {
                    value_pairs.push((ea.multiplicity, eb.multiplicity));
                    mismatches.push(SpectrumMismatch {
                        value: ea.value,
                        multiplicity_left: ea.multiplicity,
                        multiplicity_right: eb.multiplicity,
                    });
                }
            }
            None => mismatches.push(SpectrumMismatch {
                value: ea.value,
                multiplicity_left: ea.multiplicity,
                multiplicity_right: 0,
            }),
        }
    }
    for (j, eb) in b.entries.iter().enumerate() {
        if !used[j] {
            mismatches.push(SpectrumMismatch {
                value: eb.value,
                multiplicity_left: 0,
                multiplicity_right: eb.multiplicity,
            });
        }
    }
    let multiplicity_swap = value_pairs
        .iter()
        .enumerate()
        .any(|(i, &(l1, r1))| value_pairs[i + 1..].iter().any(|&(l2, r2)| l1 == r2 && l2 == r1));
    SpectrumDiff { matched, mismatches, max_value_diff: max_diff, multiplicity_swap }
}

/// `|p(lambda)|` for each cubic root.
pub fn cubic_residuals(r: f64, phi: f64) -> Result<[f64; 3]> {
    let p = char_poly(r, phi)?;
    let roots = cubic_eigenvalues(r, phi)?;
    Ok(roots.map(|x| poly_eval(&p, x).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn special_radius() -> f64 {
        (2.0 + 3f64.sqrt()).ln()
    }

    #[test]
    fn beta_examples() {
        assert!((beta(special_radius(), FRAC_PI_2).unwrap() - 2.0).abs() < 1e-13);
        assert!((beta(1.0, 0.0).unwrap() + 2.0).abs() < 1e-15);
        assert!((beta(60.0, 1.0).unwrap() + 2.0).abs() < 1e-15);
        assert!(beta(0.0, 1.0).is_err());
        assert!(discriminant(1.0, FRAC_PI_4).unwrap() < 0.0);
    }

    #[test]
    fn roots_satisfy_polynomial() {
        for &(r, phi) in &[(1.0, FRAC_PI_4), (0.1, 0.2), (4.0, 1.4), (0.7, 1.0)] {
            let p = char_poly(r, phi).unwrap();
            let roots = cubic_eigenvalues(r, phi).unwrap();
            for x in roots {
                assert!(poly_eval(&p, x).abs() < 1e-10, "r={r} phi={phi} x={x}");
            }
            let h: f64 = r / 2.0;
            let sum = 0.5 * (1.0 / (h.sinh() * h.cosh()) + 4.0 * h.tanh());
            assert!((roots.iter().sum::<f64>() - sum).abs() < 1e-12);
        }
    }

    #[test]
    fn prototype_values() {
        let roots = cubic_eigenvalues(1.0, FRAC_PI_4).unwrap();
        let expected = [-0.01949, 0.56560, 1.22905];
        for (a, b) in roots.iter().zip(expected) {
            assert!((a - b).abs() < 1e-5);
        }
    }

    #[test]
    fn u_form_agrees() {
        for &(r, phi) in &[(1.0, FRAC_PI_4), (0.3, 0.1), (3.0, 1.5)] {
            let a = cubic_eigenvalues(r, phi).unwrap();
            let b = cubic_eigenvalues_u_form(r, phi).unwrap();
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn constant_term_vanishes() {
        let r: f64 = 0.8;
        let sh = (r / 2.0).sinh();
        let s2 = sh * sh + 2.0 * sh.powi(4);
        let phi = s2.sqrt().asin();
        assert!(char_poly(r, phi).unwrap()[3].abs() < 1e-15);
    }

    #[test]
    fn table_examples() {
        let b = family_spectrum(&FamilySpec::B { n: 3, r: special_radius() }).unwrap();
        assert_eq!(b.multiplicities(), vec![2, 3]);
        assert!((b.values()[1] - 3f64.sqrt() / 2.0).abs() < 1e-12);
        let h = family_spectrum(&FamilySpec::H { n: 4 }).unwrap();
        assert_eq!(h.values(), vec![0.5, 1.0]);
        assert_eq!(h.multiplicities(), vec![6, 1]);
        let w = family_spectrum(&FamilySpec::WPhi { n: 3, k: 2, phi: FRAC_PI_4, r: 1.0 }).unwrap();
        assert_eq!(w.distinct(), 4);
        assert_eq!(w.total_multiplicity(), 5);
    }

    #[test]
    fn admissibility() {
        assert!(FamilySpec::WPhi { n: 3, k: 2, phi: FRAC_PI_2, r: 1.0 }.validate().is_err());
        assert!(FamilySpec::WPhi { n: 5, k: 3, phi: 1.0, r: 1.0 }.validate().is_err());
        assert!(FamilySpec::WPi2 { n: 2, k: 2, r: 1.0 }.validate().is_err());
        assert!(FamilySpec::A { n: 3, k: 3, r: 1.0 }.validate().is_err());
        assert!(FamilySpec::B { n: 3, r: 0.0 }.validate().is_err());
        assert!(FamilySpec::S { n: 3, r: 0.0 }.validate().is_ok());
        assert!(FamilySpec::H { n: 1 }.validate().is_err());
    }

    #[test]
    fn swap_is_detected() {
        let spec = FamilySpec::A { n: 4, k: 1, r: 1.0 };
        let table = family_spectrum(&spec).unwrap();
        let [mt, mc, mh] = family_a_jacobi_multiplicities(4, 1);
        let jac = SpectrumReport::new(
            spec,
            Provenance::JacobiNumeric,
            table.entries.iter().zip([mt, mc, mh]).map(|(e, m)| entry(e.value, m, &e.label)).collect(),
        );
        let diff = compare_spectra(&table, &jac, 1e-9);
        assert!(diff.multiplicity_swap);
        assert!(compare_spectra(&table, &table, 1e-12).is_empty());
    }
}
