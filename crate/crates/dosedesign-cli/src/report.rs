//! Terminal reports (7 significant digits) and CSV writers (full
//! precision, byte-deterministic).

use std::io::Write;

use dosedesign::{CompositeDesign, EquivalenceReport};

use crate::CliError;

/// Formats with 7 significant digits, switching to scientific notation
/// outside `[1e-4, 1e7)` the way `%.7g` would.
pub fn sig7(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-4..7).contains(&exp) {
        format!("{x:.6e}")
    } else {
        let decimals = (6 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    }
}

fn join_sig7(values: &[f64]) -> String {
    values.iter().map(|&v| sig7(v)).collect::<Vec<_>>().join("  ")
}

pub fn render_design(out: &mut impl Write, xi: &CompositeDesign) -> std::io::Result<()> {
    for (i, group) in xi.groups().iter().enumerate() {
        writeln!(out, "group {}  doses    {}", i + 1, join_sig7(group.points()))?;
        writeln!(out, "         weights  {}", join_sig7(group.weights()))?;
    }
    writeln!(out, "allocation        {}", join_sig7(xi.allocation().lambdas()))
}

/// `group,dose,tau` rows for every sampled point of every group's curve.
pub fn write_tau_csv(to: &mut impl Write, report: &EquivalenceReport) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(to);
    w.write_record(["group", "dose", "tau"])
        .map_err(|e| CliError::Input(format!("cannot write csv: {e}")))?;
    for (g, curve) in report.curves.iter().enumerate() {
        for &(dose, tau) in curve {
            w.write_record(&[(g + 1).to_string(), dose.to_string(), tau.to_string()])
                .map_err(|e| CliError::Input(format!("cannot write csv: {e}")))?;
        }
    }
    w.flush()
        .map_err(|e| CliError::Input(format!("cannot write csv: {e}")))
}

/// Writes either CSV shape produced by the `efficiency` command.
pub enum EfficiencyTable {
    /// Two-group shared-location-scale grid: rows θ2⁽²⁾, columns θ2⁽¹⁾.
    Wide {
        col_values: Vec<f64>,
        rows: Vec<(f64, Vec<f64>)>,
    },
    /// One row per prior atom: parameter coordinates then the efficiency.
    Long {
        header: Vec<String>,
        rows: Vec<(Vec<f64>, f64)>,
    },
}

pub fn write_efficiency_csv(
    to: &mut impl Write,
    table: &EfficiencyTable,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(to);
    let err = |e: csv::Error| CliError::Input(format!("cannot write csv: {e}"));
    match table {
        EfficiencyTable::Wide { col_values, rows } => {
            let mut header = vec!["theta2_2/theta2_1".to_string()];
            header.extend(col_values.iter().map(|v| v.to_string()));
            w.write_record(&header).map_err(err)?;
            for (row_value, effs) in rows {
                let mut record = vec![row_value.to_string()];
                record.extend(effs.iter().map(|e| e.to_string()));
                w.write_record(&record).map_err(err)?;
            }
        }
        EfficiencyTable::Long { header, rows } => {
            let mut full = header.clone();
            full.push("efficiency".to_string());
            w.write_record(&full).map_err(err)?;
            for (coords, eff) in rows {
                let mut record: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
                record.push(eff.to_string());
                w.write_record(&record).map_err(err)?;
            }
        }
    }
    w.flush()
        .map_err(|e| CliError::Input(format!("cannot write csv: {e}")))
}
