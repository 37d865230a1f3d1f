//! Plot-ready CSV tables under `grids/`.

use std::path::Path;

use liezal::C64;

use crate::error::CliError;
use crate::format::fmt_g17;
use crate::run::Payload;

fn complex_headers(prefix: &str, n: usize) -> Vec<String> {
    (0..n)
        .flat_map(|k| [format!("{prefix}_re_{k}"), format!("{prefix}_im_{k}")])
        .collect()
}

fn complex_cells(v: &[C64]) -> impl Iterator<Item = String> + '_ {
    v.iter().flat_map(|z| [fmt_g17(z.re), fmt_g17(z.im)])
}

fn table(path: &Path, header: Vec<String>, rows: Vec<Vec<String>>) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.flush()?;
    Ok(())
}

fn maxima_table(dir: &Path, scan: &liezal::family::NormalityReport) -> Result<(), CliError> {
    let n = scan.per_index.first().map_or(0, |m| m.argmax_point.len());
    let mut header: Vec<String> = ["j", "max", "failed_nodes"].map(String::from).to_vec();
    header.extend(complex_headers("argmax", n));
    let rows = scan
        .per_index
        .iter()
        .map(|m| {
            let mut r = vec![m.j.to_string(), fmt_g17(m.max), m.failed_nodes.to_string()];
            r.extend(complex_cells(&m.argmax_point));
            r
        })
        .collect();
    table(&dir.join("maxima.csv"), header, rows)
}

/// Writes the tables that belong to `payload` into `dir`.
pub fn write_tables(payload: &Payload, dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    match payload {
        Payload::MartyScan(p) => maxima_table(dir, &p.scan),
        Payload::Zalcman(p) => {
            maxima_table(dir, &p.scan)?;
            let n = p.steps.first().map_or(0, |s| s.point.len());
            let mut header: Vec<String> = ["j", "m", "rho", "rho_m", "domain_radius", "witness"]
                .map(String::from)
                .to_vec();
            header.extend(complex_headers("point", n));
            let rows = p
                .steps
                .iter()
                .map(|s| {
                    let mut r = vec![s.j.to_string()];
                    r.extend([s.m, s.rho, s.rho_m, s.domain_radius, s.witness].map(fmt_g17));
                    r.extend(complex_cells(&s.point));
                    r
                })
                .collect();
            table(&dir.join("steps.csv"), header, rows)?;
            if !p.reference_distances.is_empty() {
                let rows = p
                    .reference_distances
                    .iter()
                    .map(|d| vec![d.j.to_string(), fmt_g17(d.sup)])
                    .collect();
                table(
                    &dir.join("reference_distances.csv"),
                    vec!["j".into(), "sup".into()],
                    rows,
                )?;
            }
            if let Some(c) = &p.convergence {
                let rows = c
                    .distances
                    .iter()
                    .map(|d| vec![d.j.to_string(), d.k.to_string(), fmt_g17(d.sup)])
                    .collect();
                table(
                    &dir.join("sup_distances.csv"),
                    ["j", "k", "sup"].map(String::from).to_vec(),
                    rows,
                )?;
                let (nz, nv) = c
                    .limit_samples
                    .first()
                    .map_or((0, 0), |s| (s.z.len(), s.value.len()));
                let mut header = complex_headers("z", nz);
                header.extend(complex_headers("value", nv));
                let rows = c
                    .limit_samples
                    .iter()
                    .map(|s| complex_cells(&s.z).chain(complex_cells(&s.value)).collect())
                    .collect();
                table(&dir.join("limit_samples.csv"), header, rows)?;
            }
            Ok(())
        }
        Payload::ExpVerify(p) => {
            let rows = p
                .checks
                .iter()
                .map(|c| {
                    vec![
                        c.name.clone(),
                        c.samples.to_string(),
                        fmt_g17(c.max_residual),
                        fmt_g17(c.tolerance),
                        c.passed.to_string(),
                    ]
                })
                .collect();
            let header = ["name", "samples", "max_residual", "tolerance", "passed"]
                .map(String::from)
                .to_vec();
            table(&dir.join("checks.csv"), header, rows)
        }
    }
}
