//! Parameter sweeps written as CSV.

use std::fmt::Write as _;

use ampgen::model::load_role;
use ampgen::{
    bjt_eval, mos_eval, pin_loads, solve_bjt, solve_mos, Device, ExtResistance, LoadSet, Variant,
};

use crate::config::SweepSpec;

/// Seventeen significant digits, or `nan`.
pub fn format_value(x: Option<f64>) -> String {
    match x {
        Some(v) if !v.is_nan() => format!("{v:.16e}"),
        _ => "nan".to_string(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub general: Option<f64>,
    pub oracle: Option<f64>,
    pub variants: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutput {
    pub header: Vec<String>,
    pub rows: Vec<SweepRow>,
    /// Cells written as `nan` (pole, unbounded or ill-posed).
    pub nan_cells: usize,
}

impl SweepOutput {
    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for r in &self.rows {
            let mut cells = vec![format_value(Some(r.x)), format_value(r.general), format_value(r.oracle)];
            cells.extend(r.variants.iter().map(|v| format_value(*v)));
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}

fn closed(spec: &SweepSpec, v: Variant, loads: &LoadSet) -> Option<f64> {
    match &spec.device {
        Device::Bjt(p) => {
            let (p, l) = pin_loads(spec.quantity, v, p, loads);
            bjt_eval(spec.quantity, v, &p, &l).ok()
        }
        Device::Mos(p) => mos_eval(spec.quantity, p, loads).ok(),
    }
}

fn oracle(spec: &SweepSpec, loads: &LoadSet) -> Option<f64> {
    match &spec.device {
        Device::Bjt(p) => solve_bjt(spec.quantity, p, loads).ok(),
        Device::Mos(p) => solve_mos(spec.quantity, p, loads).ok(),
    }
}

pub fn run_sweep(spec: &SweepSpec) -> SweepOutput {
    let role = load_role(spec.swept).expect("validated load symbol");
    let mut header = vec![
        spec.swept.name().to_string(),
        "general".to_string(),
        "oracle".to_string(),
    ];
    header.extend(spec.variants.iter().map(|v| v.name().to_string()));
    let mut nan_cells = 0;
    let rows = spec
        .grid()
        .into_iter()
        .map(|x| {
            let loads = spec.loads.with(role, ExtResistance::ohms(x));
            let row = SweepRow {
                x,
                general: closed(spec, Variant::General, &loads),
                oracle: oracle(spec, &loads),
                variants: spec.variants.iter().map(|v| closed(spec, *v, &loads)).collect(),
            };
            nan_cells += [row.general, row.oracle]
                .iter()
                .chain(&row.variants)
                .filter(|c| c.is_none())
                .count();
            row
        })
        .collect();
    SweepOutput {
        header,
        rows,
        nan_cells,
    }
}
