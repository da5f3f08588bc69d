// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use anyhow::{bail, Result};
use iwasawa::jacobi::HopfComponent;
use iwasawa::linalg::hausdorff;
use iwasawa::spectra::family_entries;
use iwasawa::verify::{run_verify, VerifyConfig, VerifyReport};
use iwasawa::{
    family_spectrum, hopf_projection_report, numeric_spectrum, tube_shape_operator, FamilySpec, Provenance,
    SpectrumReport, TubeData,
};
use serde::Serialize;

use crate::args::{Format, SpectrumArgs, SweepArgs, TableArgs, VerifyArgs};

/// Invalid parameters; reported with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

fn usage<T>(e: impl std::fmt::Display) -> Result<T> {
    Err(UsageError(e.to_string()).into())
}

fn validate(spec: &FamilySpec) -> Result<()> {
    spec.validate().or_else(usage)
}

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn short(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        let s = format!("{x:.10}");
        match s.strip_prefix('-') {
            Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
            _ => s,
        }
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(sci).unwrap_or_default()
}

fn opt_usize(x: Option<usize>) -> String {
    x.map(|k| k.to_string()).unwrap_or_default()
}

/// Formula behind a spectrum label.
pub fn symbolic(label: &str) -> String {
    label
        .split('=')
        .map(|part| match part {
            "l1" => "(3/4)tanh(r/2) - (1/2)sqrt(1 - (3/4)tanh^2(r/2))".to_string(),
            "l2" => "(3/4)tanh(r/2) + (1/2)sqrt(1 - (3/4)tanh^2(r/2))".to_string(),
            "c1" | "c2" | "c3" => format!("root {} of p_(r,phi)", &part[1..]),
            other => other.to_string(),
        })
        .collect::<Vec<_>>()
        .join(" = ")
}

#[derive(Debug, Serialize)]
struct TableRow {
    family: String,
    description: String,
    n: usize,
    k: Option<usize>,
    phi: Option<f64>,
    r: Option<f64>,
    formula: String,
    value: f64,
    multiplicity: usize,
    provenance: Provenance,
    numeric_value: Option<f64>,
    numeric_multiplicity: usize,
    meta: String,
}

#[derive(Debug, Serialize)]
struct TableDoc {
    n: usize,
    r: f64,
    rows: Vec<TableRow>,
}

fn table_specs(args: &TableArgs) -> Result<Vec<FamilySpec>> {
    let (n, r) = (args.n, args.r);
    if n < 2 {
        return usage(format!("n must be at least 2, got {n}"));
    }
    let k_w = args.k_w;
    let phi = args.phi();
    let mut specs =
        vec![FamilySpec::A { n, k: args.k, r }, FamilySpec::B { n, r }, FamilySpec::H { n }, FamilySpec::S { n, r }];
    // the W rows exist only when n - 1 >= k_w
    if k_w < n {
        specs.push(FamilySpec::WPi2 { n, k: k_w, r });
        specs.push(FamilySpec::WPhi { n, k: k_w, phi, r });
    }
    for s in &specs {
        validate(s)?;
    }
    Ok(specs)
}

fn numeric_meta(spec: &FamilySpec) -> Result<String> {
    let tube = TubeData::for_family(spec)?;
    let op = tube_shape_operator(&tube)?;
    Ok(format!("jacobi-numeric: dim {}, r {}, cond(D) {:.3e}", op.operator.dim(), short(op.radius), op.condition))
}

fn table_rows(specs: &[FamilySpec]) -> Result<Vec<TableRow>> {
    let mut rows = Vec::new();
    for spec in specs {
        let closed = family_spectrum(spec)?;
        let numeric = numeric_spectrum(spec)?;
        let meta = numeric_meta(spec)?;
        let family = spec.family();
        for e in &closed.entries {
            let hit = numeric.entries.iter().find(|x| (x.value - e.value).abs() <= 1e-9 * e.value.abs().max(1.0));
            let row_meta = match closed.provenance {
                Provenance::PaperTable => format!("table row {}; {meta}", family.tag()),
                _ => meta.clone(),
            };
            rows.push(TableRow {
                family: family.tag().to_string(),
                description: family.description().to_string(),
                n: spec.n(),
                k: spec.k(),
                phi: spec.phi(),
                r: spec.r(),
                formula: symbolic(&e.label),
                value: e.value,
                multiplicity: e.multiplicity,
                provenance: closed.provenance,
                numeric_value: hit.map(|x| x.value),
                numeric_multiplicity: hit.map_or(0, |x| x.multiplicity),
                meta: row_meta,
            });
        }
    }
    Ok(rows)
}

pub fn cmd_table(args: &TableArgs) -> Result<String> {
    let specs = table_specs(args)?;
    let rows = table_rows(&specs)?;
    Ok(match args.out.format {
        Format::Json => {
            let doc = TableDoc { n: args.n, r: args.r, rows };
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Csv => {
            let mut out = String::from(
                "family,n,k,phi,r,formula,value,multiplicity,provenance,numeric_value,numeric_multiplicity,meta\n",
            );
            for row in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},\"{}\",{},{},{},{},{},\"{}\"",
                    row.family,
                    row.n,
                    opt_usize(row.k),
                    opt(row.phi),
                    opt(row.r),
                    row.formula,
                    sci(row.value),
                    row.multiplicity,
                    row.provenance.tag(),
                    opt(row.numeric_value),
                    row.numeric_multiplicity,
                    row.meta
                )?;
            }
            out
        }
        Format::Md => {
            let mut out = format!("# Homogeneous hypersurfaces in CH^{} at r = {}\n\n", args.n, args.r);
            out.push_str(
                "| family | k | phi | principal curvature | value | mult | provenance | numeric | numeric mult |\n",
            );
            out.push_str("|---|---|---|---|---|---|---|---|---|\n");
            for row in &rows {
                writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                    row.family,
                    opt_usize(row.k),
                    row.phi.map(short).unwrap_or_default(),
                    row.formula,
                    short(row.value),
                    row.multiplicity,
                    row.provenance.tag(),
                    row.numeric_value.map(short).unwrap_or_default(),
                    row.numeric_multiplicity
                )?;
            }
            out
        }
    })
}

/// `steps` equally spaced radii with both endpoints, or none for an empty range.
pub fn sweep_radii(r_min: f64, r_max: f64, steps: usize) -> Vec<f64> {
    if steps == 0 || r_min == r_max {
        return Vec::new();
    }
    if steps == 1 {
        return vec![r_min];
    }
    (0..steps).map(|i| r_min + (r_max - r_min) * i as f64 / (steps - 1) as f64).collect()
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<String> {
    let (r_min, r_max) = (args.r_min, args.r_max);
    if !(r_min.is_finite() && r_max.is_finite()) || r_min > r_max {
        return usage(format!("invalid radius range [{r_min}, {r_max}]"));
    }
    validate(&args.spec.spec(r_min))?;
    validate(&args.spec.spec(r_max))?;
    let (_, template) = family_entries(&args.spec.spec(r_max))?;
    let columns: Vec<usize> = (0..template.len()).filter(|&i| template[i].multiplicity > 0).collect();
    let m = columns.len();
    let mut out = String::from("r");
    for i in 1..=m {
        write!(out, ",lambda_closed_{i}")?;
    }
    for i in 1..=m {
        write!(out, ",lambda_numeric_{i}")?;
    }
    out.push_str(",max_diff\n");
    for r in sweep_radii(r_min, r_max, args.steps) {
        let spec = args.spec.spec(r);
        let (_, entries) = family_entries(&spec)?;
        let closed: Vec<f64> = columns.iter().map(|&i| entries[i].value).collect();
        let numeric_values = numeric_spectrum(&spec)?.values();
        let nearest: Vec<f64> = closed
            .iter()
            .map(|c| {
                *numeric_values
                    .iter()
                    .min_by(|a, b| (*a - c).abs().total_cmp(&(*b - c).abs()))
                    .expect("nonempty spectrum")
            })
            .collect();
        let finite_closed: Vec<f64> = closed.iter().copied().filter(|x| x.is_finite()).collect();
        let diff = hausdorff(&finite_closed, &numeric_values);
        out.push_str(&sci(r));
        for v in closed.iter().chain(&nearest) {
            out.push(',');
            out.push_str(&sci(*v));
        }
        out.push(',');
        out.push_str(&sci(diff));
        out.push('\n');
    }
    Ok(out)
}

pub fn verify_report(args: &VerifyArgs) -> Result<VerifyReport> {
    if let Some(t) = args.tol.filter(|t| t.is_nan() || *t < 0.0) {
        return usage(format!("tolerance must be non-negative, got {t}"));
    }
    Ok(run_verify(&VerifyConfig { seed: args.seed, tolerance: args.tol }))
}

pub fn render_verify(report: &VerifyReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)? + "\n")
}

pub fn failure_listing(report: &VerifyReport) -> String {
    let mut out = String::new();
    for c in report.failures() {
        let _ = writeln!(out, "FAIL {}: residual {:e} > tolerance {:e}", c.check_id, c.residual, c.tolerance);
    }
    out
}

#[derive(Debug, Serialize)]
struct SpectrumDoc<'a> {
    spec: FamilySpec,
    closed: &'a SpectrumReport,
    numeric: &'a SpectrumReport,
    hopf: &'a [HopfComponent],
    max_value_diff: f64,
}

pub fn cmd_spectrum(args: &SpectrumArgs) -> Result<String> {
    let spec = args.spec.spec(args.r);
    validate(&spec)?;
    let closed = family_spectrum(&spec)?;
    let numeric = numeric_spectrum(&spec)?;
    let hopf = hopf_projection_report(&TubeData::for_family(&spec)?)?;
    let diff = hausdorff(&closed.expanded(), &numeric.expanded());
    Ok(match args.out.format {
        Format::Json => {
            let doc = SpectrumDoc { spec, closed: &closed, numeric: &numeric, hopf: &hopf, max_value_diff: diff };
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Csv => {
            let mut out = String::from("source,value,multiplicity,label,provenance\n");
            for (source, rep) in [("closed", &closed), ("numeric", &numeric)] {
                for e in &rep.entries {
                    writeln!(
                        out,
                        "{source},{},{},\"{}\",{}",
                        sci(e.value),
                        e.multiplicity,
                        symbolic(&e.label),
                        rep.provenance.tag()
                    )?;
                }
            }
            for h in &hopf {
                writeln!(
                    out,
                    "hopf,{},{},\"J nu component {}\",jacobi-numeric",
                    sci(h.eigenvalue),
                    h.multiplicity,
                    sci(h.component)
                )?;
            }
            out
        }
        Format::Md => {
            let family = spec.family();
            let mut out = format!("# {} ({})\n\n", family.tag(), family.description());
            writeln!(
                out,
                "n = {}, k = {}, phi = {}, r = {}\n",
                spec.n(),
                opt_usize(spec.k()),
                spec.phi().map(short).unwrap_or_else(|| "-".into()),
                spec.r().map(short).unwrap_or_else(|| "-".into())
            )?;
            for (title, rep) in [("closed form", &closed), ("jacobi numeric", &numeric)] {
                writeln!(out, "## {title} ({})\n", rep.provenance.tag())?;
                out.push_str("| value | mult | formula |\n|---|---|---|\n");
                for e in &rep.entries {
                    writeln!(out, "| {} | {} | {} |", short(e.value), e.multiplicity, symbolic(&e.label))?;
                }
                out.push('\n');
            }
            out.push_str("## Hopf components of J nu\n\n| eigenvalue | mult | component |\n|---|---|---|\n");
            for h in &hopf {
                writeln!(out, "| {} | {} | {} |", short(h.eigenvalue), h.multiplicity, short(h.component))?;
            }
            writeln!(out, "\nmax |closed - numeric| = {diff:.3e}")?;
            out
        }
    })
}

pub fn check_finite(x: f64, name: &str) -> Result<()> {
    if !x.is_finite() {
        bail!(UsageError(format!("{name} must be finite")));
    }
    Ok(())
}
