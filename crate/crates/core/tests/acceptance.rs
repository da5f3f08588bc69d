// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria, one printed line each. Closed forms are written out
//! here rather than taken from the library wherever that is practical.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};
use std::time::{Duration, Instant};

use iwasawa::connection::{default_steps, geodesic_from};
use iwasawa::distributions::{distribution_check, e_leaf_curvature_printed};
use iwasawa::jacobi::{riccati_residual, solve_jacobi_rk4};
use iwasawa::linalg::{cluster, symmetric_eigen};
use iwasawa::orbits::{leaf_geometry_ch2, max_normal_curvature, normal_curvature, rigidity_residual};
use iwasawa::spectra::{char_poly, discriminant};
use iwasawa::verify::{cubic_grid_pairs, cubic_grid_radii, CUBIC_GRID_ANGLES};
use iwasawa::*;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> AlgebraVector {
    let v: Vec<f64> = (0..2 * n).map(|_| rng.random_range(-2.0..2.0)).collect();
    AlgebraVector::from_slice(&v)
}

fn admissible(n: usize, phi: f64) -> Vec<usize> {
    (1..n).filter(|&k| phi == FRAC_PI_2 || (k >= 2 && k % 2 == 0)).collect()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn repeated(entries: &[(f64, usize)]) -> Vec<f64> {
    sorted(entries.iter().flat_map(|&(v, m)| std::iter::repeat_n(v, m)).collect())
}

fn criterion_01() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut koszul, mut nabla_j) = (0.0f64, 0.0f64);
    for n in [2, 3, 4] {
        for _ in 0..1000 {
            let (x, y, w) = (random_vector(&mut rng, n), random_vector(&mut rng, n), random_vector(&mut rng, n));
            // 2<nabla_X Y, W> = <[X,Y],W> - <[Y,W],X> + <[W,X],Y>
            let rhs = bracket(&x, &y).dot(&w) - bracket(&y, &w).dot(&x) + bracket(&w, &x).dot(&y);
            koszul = koszul.max((2.0 * levi_civita(&x, &y).dot(&w) - rhs).abs());
            nabla_j = nabla_j.max((levi_civita(&x, &y.apply_j()) - levi_civita(&x, &y).apply_j()).max_abs());
        }
    }
    let elapsed = start.elapsed();
    outcome(
        koszul <= 1e-12 && nabla_j <= 1e-13 && elapsed < Duration::from_secs(1),
        format!("koszul {koszul:.2e}, nabla J {nabla_j:.2e}, {:.0} ms", elapsed.as_secs_f64() * 1e3),
    )
}

fn criterion_02() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut tensor, mut holo, mut real) = (0.0f64, 0.0f64, 0.0f64);
    for n in [2, 3, 4, 5] {
        for _ in 0..200 {
            let (x, y, w) = (random_vector(&mut rng, n), random_vector(&mut rng, n), random_vector(&mut rng, n));
            // R(X,Y)W = nabla_X nabla_Y W - nabla_Y nabla_X W - nabla_[X,Y] W for left-invariant fields
            let from_nabla = levi_civita(&x, &levi_civita(&y, &w))
                - levi_civita(&y, &levi_civita(&x, &w))
                - levi_civita(&bracket(&x, &y), &w);
            tensor = tensor.max((&from_nabla - &curvature_ambient(&x, &y, &w)).max_abs());
            tensor = tensor.max((&curvature_from_connection(&x, &y, &w) - &from_nabla).max_abs());
            let k_hol = sectional_curvature(&x, &x.apply_j()).unwrap();
            holo = holo.max((k_hol + 1.0).abs());
            // y made orthogonal to x and Jx spans a totally real plane with x
            let (e1, e2) = (x.normalized(), x.apply_j().normalized());
            let yr = &y - &(&e1 * y.dot(&e1)) - (&e2 * y.dot(&e2));
            real = real.max((sectional_curvature(&x, &yr).unwrap() + 0.25).abs());
        }
    }
    outcome(
        tensor <= 1e-10 && holo <= 1e-12 && real <= 1e-12,
        format!("tensor {tensor:.2e}, holomorphic {holo:.2e}, totally real {real:.2e}"),
    )
}

fn criterion_03() -> Outcome {
    let (mut spectrum, mut trace, mut rigidity) = (0.0f64, 0.0f64, 0.0f64);
    let mut cases = 0;
    for n in 2..=6 {
        for phi in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, FRAC_PI_2] {
            for k in admissible(n, phi) {
                let w = WModel::new(make_model(n).unwrap(), k, phi).unwrap();
                let half = phi.sin() / 2.0;
                let expected = repeated(&[(-half, 1), (half, 1), (0.0, 2 * n - k - 2)]);
                for xi in w.normal_basis() {
                    let op = singular_shape_operator(&w, xi).unwrap();
                    spectrum = spectrum.max(max_abs_diff(&sorted(op.eigenvalues()), &expected));
                    trace = trace.max(op.trace().abs());
                    cases += 1;
                }
                rigidity = rigidity.max(rigidity_residual(&w));
            }
        }
    }
    outcome(
        spectrum <= 1e-12 && trace <= 1e-12 && rigidity <= 1e-13,
        format!("{cases} normals: spectrum {spectrum:.2e}, trace {trace:.2e}, rigidity {rigidity:.2e}"),
    )
}

fn displayed_w_pi2(n: usize, k: usize, r: f64) -> DMatrix<f64> {
    let (t, s) = ((r / 2.0).tanh(), 1.0 / (r / 2.0).cosh());
    let dim = 2 * n - 1;
    let mut m = DMatrix::zeros(dim, dim);
    m[(0, 0)] = t.powi(3);
    m[(0, 1)] = -s.powi(3);
    m[(1, 0)] = -s.powi(3);
    m[(1, 1)] = 2.0 * (1.0 + 0.5 * s * s) * t;
    for i in 2..2 + (2 * n - 2 - k) {
        m[(i, i)] = t;
    }
    for i in 2 + (2 * n - 2 - k)..dim {
        m[(i, i)] = 1.0 / t;
    }
    m * 0.5
}

fn criterion_04() -> Outcome {
    let (mut matrix, mut eigen, mut pair) = (0.0f64, 0.0f64, 0.0f64);
    for n in 3..=6 {
        for k in 2..n {
            for r in [0.3, 1.0, 2.0, 4.0] {
                let spec = FamilySpec::WPi2 { n, k, r };
                let op = tube_shape_operator(&TubeData::for_family(&spec).unwrap()).unwrap();
                matrix = matrix.max((&op.operator.matrix - displayed_w_pi2(n, k, r)).amax());
                let t = (r / 2.0f64).tanh();
                let root = (1.0 - 0.75 * t * t).sqrt();
                let (l1, l2, l3, l4) = (0.75 * t - 0.5 * root, 0.75 * t + 0.5 * root, 0.5 * t, 0.5 / t);
                let expected = repeated(&[(l1, 1), (l2, 1), (l3, 2 * n - 2 - k), (l4, k - 1)]);
                eigen = eigen.max(max_abs_diff(&sorted(op.operator.eigenvalues()), &expected));
                let block = op.block(2);
                let (vals, _) = symmetric_eigen(&block);
                pair = pair.max((vals[0] + vals[1] - 1.5 * t).abs());
            }
        }
    }
    outcome(
        matrix <= 1e-10 && eigen <= 1e-10 && pair <= 1e-12,
        format!("matrix {matrix:.2e}, eigenvalues {eigen:.2e}, l1 + l2 {pair:.2e}"),
    )
}

fn criterion_05() -> Outcome {
    let r = (2.0 + 3f64.sqrt()).ln();
    let mut special = 0.0f64;
    for n in 3..=6 {
        for k in 2..n {
            let spec = FamilySpec::WPi2 { n, k, r };
            let expected = repeated(&[(0.0, 1), (3f64.sqrt() / 6.0, 2 * n - k - 2), (3f64.sqrt() / 2.0, k)]);
            let ev = sorted(numeric_spectrum(&spec).unwrap().expanded());
            special = special.max(max_abs_diff(&ev, &expected));
        }
    }
    let mut merge = 0.0f64;
    for n in 2..=6 {
        let ev = sorted(numeric_spectrum(&FamilySpec::B { n, r }).unwrap().expanded());
        let expected = repeated(&[(0.5 * (r / 2.0).tanh(), n - 1), (3f64.sqrt() / 2.0, n)]);
        merge = merge.max(max_abs_diff(&ev, &expected));
    }
    outcome(special <= 1e-12 && merge <= 1e-12, format!("W_pi/2 {special:.2e}, B merge {merge:.2e}"))
}

/// Coefficients of `-x^3 + c2 x^2 + c1 x + c0` for a symmetric 3x3 matrix.
fn char_poly_of(m: &DMatrix<f64>) -> [f64; 4] {
    let tr = m.trace();
    let minors = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)] + m[(0, 0)] * m[(2, 2)] - m[(0, 2)] * m[(2, 0)]
        + m[(1, 1)] * m[(2, 2)]
        - m[(1, 2)] * m[(2, 1)];
    [-1.0, tr, -minors, m.determinant()]
}

fn criterion_06() -> Outcome {
    let start = Instant::now();
    let (mut coeffs, mut roots) = (0.0f64, 0.0f64);
    let mut disc_ok = true;
    let mut separated = true;
    let mut count_failures = 0;
    let mut points = 0;
    for (n, k) in cubic_grid_pairs() {
        for phi in CUBIC_GRID_ANGLES {
            for r in cubic_grid_radii() {
                points += 1;
                let h = r / 2.0;
                let (sh, ch, th) = (h.sinh(), h.cosh(), h.tanh());
                let (csch, sech) = (1.0 / sh, 1.0 / ch);
                let p = [
                    -1.0,
                    0.5 * (csch * sech + 4.0 * th),
                    -0.25 * (2.0 * sech * sech + 5.0 * th * th),
                    -0.125 * csch * sech.powi(3) * (phi.sin().powi(2) - sh * sh - 2.0 * sh.powi(4)),
                ];
                let eval = |x: f64| ((p[0] * x + p[1]) * x + p[2]) * x + p[3];
                let spec = FamilySpec::WPhi { n, k, phi, r };
                let op = tube_shape_operator(&TubeData::for_family(&spec).unwrap()).unwrap();
                let numeric = char_poly_of(&op.block(3));
                coeffs = coeffs.max(max_abs_diff(&numeric, &p));
                for x in cubic_eigenvalues(r, phi).unwrap() {
                    roots = roots.max(eval(x).abs());
                }
                // classical discriminant of a x^3 + b x^2 + c x + d is positive iff the
                // three roots are real and distinct
                let (a, b, c, d) = (p[0], p[1], p[2], p[3]);
                let classical = 18.0 * a * b * c * d - 4.0 * b.powi(3) * d + b * b * c * c
                    - 4.0 * a * c.powi(3)
                    - 27.0 * a * a * d * d;
                disc_ok &= discriminant(r, phi).unwrap() < 0.0 && classical > 0.0;
                separated &= eval(0.5 * th).abs() > 1e-12 && eval(0.5 / th).abs() > 1e-12;
                let distinct = cluster(&sorted(op.operator.eigenvalues())).len();
                if distinct != if k > 2 { 5 } else { 4 } {
                    count_failures += 1;
                }
                assert_eq!(char_poly(r, phi).unwrap(), p);
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        coeffs <= 1e-9
            && roots <= 1e-10
            && disc_ok
            && separated
            && count_failures == 0
            && elapsed < Duration::from_secs(10),
        format!(
            "{points} points: coefficients {coeffs:.2e}, |p(root)| {roots:.2e}, discriminant sign {disc_ok}, \
             hopf values not roots {separated}, distinct-count failures {count_failures}, {:.2} s",
            elapsed.as_secs_f64()
        ),
    )
}

fn criterion_07() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut sup = 0.0f64;
    for n in [2, 3, 4] {
        let xi = random_vector(&mut rng, n).galpha_part().normalized();
        let (z0, z1) = (random_vector(&mut rng, n), random_vector(&mut rng, n));
        // closed form in components along xi, J xi and the rest
        let jxi = xi.apply_j();
        let (x0, x1) = (z0.dot(&xi), z1.dot(&xi));
        let (a0, a1) = (z0.dot(&jxi), z1.dot(&jxi));
        let p0 = &z0 - &(&xi * x0) - (&jxi * a0);
        let p1 = &z1 - &(&xi * x1) - (&jxi * a1);
        for (t, value, derivative) in solve_jacobi_rk4(&z0, &z1, &xi, 3.0, 30_000).unwrap() {
            let exact = &p0 * (t / 2.0).cosh()
                + &p1 * (2.0 * (t / 2.0).sinh())
                + &jxi * (a0 * t.cosh() + a1 * t.sinh())
                + &xi * (x0 + x1 * t);
            let exact_d = &p0 * (0.5 * (t / 2.0).sinh())
                + &p1 * (t / 2.0).cosh()
                + &jxi * (a0 * t.sinh() + a1 * t.cosh())
                + &xi * x1;
            sup = sup.max((&exact - &value).max_abs()).max((&exact_d - &derivative).max_abs());
        }
    }
    let mut riccati = 0.0f64;
    for spec in [
        FamilySpec::WPi2 { n: 4, k: 2, r: 1.0 },
        FamilySpec::WPhi { n: 3, k: 2, phi: FRAC_PI_4, r: 0.5 },
        FamilySpec::WPhi { n: 5, k: 4, phi: FRAC_PI_3, r: 2.0 },
        FamilySpec::A { n: 3, k: 1, r: 1.0 },
        FamilySpec::B { n: 4, r: 1.5 },
        FamilySpec::S { n: 3, r: 1.0 },
    ] {
        riccati = riccati.max(riccati_residual(&TubeData::for_family(&spec).unwrap(), 1e-4).unwrap());
    }
    outcome(sup <= 1e-6 && riccati <= 1e-6, format!("rk4 sup {sup:.2e}, riccati {riccati:.2e}"))
}

fn criterion_08() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut diff, mut speed) = (0.0f64, 0.0f64);
    let t_end = 5.0;
    for n in [2, 3, 4] {
        let m = make_model(n).unwrap();
        let v = random_vector(&mut rng, n).galpha_part().normalized();
        let curve = geodesic_from(&m.identity(), &v, t_end, default_steps(t_end));
        for s in &curve {
            let t = s.t;
            let (th, sech) = ((t / 2.0).tanh(), 1.0 / (t / 2.0).cosh());
            let u: Vec<f64> = v.u().iter().map(|x| 2.0 * th * x).collect();
            let exact = GroupElement::new((sech * sech).ln(), &u, 0.0);
            diff = diff.max(exact.coord_distance(&s.point));
            speed = speed.max((s.velocity.norm() - 1.0).abs());
        }
        // the B-geodesic is the one-parameter subgroup t -> (t, 0, 0)
        let along_b = geodesic_from(&m.identity(), &m.b(), t_end, default_steps(t_end));
        for s in &along_b {
            diff = diff.max(s.point.coord_distance(&GroupElement::new(s.t, &vec![0.0; 2 * n - 2], 0.0)));
            speed = speed.max((s.velocity.norm() - 1.0).abs());
        }
    }
    outcome(diff <= 1e-8 && speed <= 1e-9, format!("position {diff:.2e}, speed {speed:.2e}"))
}

fn criterion_09() -> Outcome {
    let mut flat = 0.0f64;
    for n in 2..=6 {
        for k in 1..n {
            flat = flat.max(max_normal_curvature(&WModel::new(make_model(n).unwrap(), k, FRAC_PI_2).unwrap()));
        }
    }
    let w = WModel::new(make_model(3).unwrap(), 2, FRAC_PI_3).unwrap();
    let m = w.model();
    let xi = w.normal_basis()[0].clone();
    let witness = normal_curvature(&w, &m.b(), &m.z(), &xi).unwrap().norm();
    let mut curved = f64::INFINITY;
    for n in 3..=6 {
        for phi in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3] {
            for k in admissible(n, phi) {
                curved = curved.min(max_normal_curvature(&WModel::new(make_model(n).unwrap(), k, phi).unwrap()));
            }
        }
    }
    outcome(
        flat <= 1e-13 && witness >= 0.01 && curved > 1e-13,
        format!("phi = pi/2 max {flat:.2e}, witness (B, Z, xi) at pi/3 {witness:.4}, min over phi < pi/2 {curved:.4}"),
    )
}

fn criterion_10() -> Outcome {
    let mut horocycle = 0.0f64;
    for n in 2..=6 {
        for phi in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, FRAC_PI_2] {
            for k in admissible(n, phi) {
                let w = WModel::new(make_model(n).unwrap(), k, phi).unwrap();
                for xi in w.normal_basis() {
                    let u = w.p_of(xi) * (1.0 / phi.sin());
                    let res = levi_civita(&u, &levi_civita(&u, &u)) * 4.0 + u;
                    horocycle = horocycle.max(res.max_abs());
                }
            }
        }
    }
    let mut horosphere = 0.0f64;
    for n in 2..=6 {
        let ev = sorted(numeric_spectrum(&FamilySpec::H { n }).unwrap().expanded());
        horosphere = horosphere.max(max_abs_diff(&ev, &repeated(&[(0.5, 2 * n - 2), (1.0, 1)])));
    }
    outcome(horocycle <= 1e-13 && horosphere == 0.0, format!("horocycle {horocycle:.2e}, horosphere {horosphere:.2e}"))
}

fn criterion_11() -> Outcome {
    let (mut matrix, mut gauss) = (0.0f64, 0.0f64);
    for r in [0.0, 0.3, 1.0, 2.0, 4.0] {
        let g = leaf_geometry_ch2(r).unwrap();
        let (t, s) = ((r / 2.0f64).tanh(), 1.0 / (r / 2.0f64).cosh());
        let displayed = nalgebra::Matrix2::new(2.0 * s, t, t, s) * 0.5;
        matrix = matrix.max((g.shape_matrix - displayed).amax());
        gauss = gauss.max(g.gauss_curvature.abs());
    }
    outcome(matrix <= 1e-12 && gauss <= 1e-12, format!("matrix {matrix:.2e}, gauss {gauss:.2e}"))
}

fn criterion_12() -> Outcome {
    let h = 1e-4;
    let (mut frame, mut fd, mut halving, mut leaf) = (0.0f64, 0.0f64, f64::NEG_INFINITY, 0.0f64);
    for phi in [FRAC_PI_6, FRAC_PI_3] {
        let w = WModel::new(make_model(3).unwrap(), 2, phi).unwrap();
        for r in [0.5, 1.5] {
            let full = distribution_check(r, &w, 4, h, 12).unwrap();
            let half = distribution_check(r, &w, 4, h / 2.0, 12).unwrap();
            frame = frame.max(full.frame_discrepancy);
            leaf = leaf.max(full.d_leaf_deviation);
            for (a, b) in full.fd_residuals().iter().zip(half.fd_residuals()) {
                fd = fd.max(*a);
                halving = halving.max(b - 0.5 * a);
            }
        }
    }
    outcome(
        frame <= 1e-9 && fd <= 5e-4 && halving <= 1e-10 && leaf <= 1e-6,
        format!(
            "frame {frame:.2e}, residuals {fd:.2e}, r(h/2) - r(h)/2 {halving:.2e} (round-off floor 1e-10), \
             D leaf {leaf:.2e}"
        ),
    )
}

fn criterion_13() -> Outcome {
    let report = run_verify(&VerifyConfig::default());
    let flagged: Vec<_> = report.flagged().collect();
    let ids: Vec<&str> = flagged.iter().map(|c| c.check_id.as_str()).collect();
    let values_present = flagged
        .iter()
        .all(|c| c.values.as_ref().is_some_and(|v| !v.printed.is_empty() && v.printed.len() == v.computed.len()));
    let json = serde_json::to_string(&report).unwrap();
    let curvature = flagged.iter().find(|c| c.check_id == "distributions.e-leaf-curvature");
    let curvature_ok = curvature.is_some_and(|c| {
        let v = c.values.as_ref().unwrap();
        (v.printed[0] - e_leaf_curvature_printed(1.0)).abs() < 1e-15
            && (v.computed[0] - e_leaf_curvature(1.0)).abs() < 1e-15
    });
    let pass = ids == ["spectra.table-row-a", "distributions.e-leaf-curvature"]
        && values_present
        && curvature_ok
        && report.all_pass()
        && json.matches("\"status\":\"flagged\"").count() == 2;
    outcome(pass, format!("flagged {ids:?}, failures {}", report.summary.fail))
}

fn criterion_14() -> Outcome {
    let start = Instant::now();
    let report = run_verify(&VerifyConfig { seed: 42, tolerance: None });
    let elapsed = start.elapsed();
    let again = run_verify(&VerifyConfig { seed: 42, tolerance: None });
    let deterministic = serde_json::to_string(&report).unwrap() == serde_json::to_string(&again).unwrap();
    outcome(
        report.all_pass() && deterministic && elapsed < Duration::from_secs(60),
        format!(
            "{} checks ({} pass, {} flagged, {} fail) in {:.2} s, deterministic {deterministic}",
            report.checks.len(),
            report.summary.pass,
            report.summary.flagged,
            report.summary.fail,
            elapsed.as_secs_f64()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 14] = [
        ("connection: closed form vs Koszul, J parallel", criterion_01),
        ("curvature tensor and sectional curvatures", criterion_02),
        ("singular orbit spectrum, minimality, rigidity", criterion_03),
        ("tube around W^{2n-k}_{pi/2}: matrix and eigenvalues", criterion_04),
        ("special radius ln(2 + sqrt 3)", criterion_05),
        ("cubic family on the 4x3x4x20 grid", criterion_06),
        ("Jacobi fields: RK4 vs closed form, Riccati", criterion_07),
        ("geodesics: closed form vs numeric", criterion_08),
        ("normal-bundle flatness dichotomy", criterion_09),
        ("horocycle identity and horosphere spectrum", criterion_10),
        ("solvable foliation leaf geometry", criterion_11),
        ("distributions on tubes around W^4_phi", criterion_12),
        ("errata reported as flagged", criterion_13),
        ("full verify suite", criterion_14),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("criterion {:2} {} {name}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
