use serde::{Deserialize, Serialize};

use crate::harness::report::mean_std;
use crate::sim::{Calibration, QubitCalibration};

/// Per-column statistics of a calibration table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnSummary {
    pub column: String,
    pub count: usize,
    pub mean: f64,
    pub std: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

pub const CALIBRATION_COLUMNS: [&str; 8] = [
    "t1_us",
    "t2_us",
    "frequency_ghz",
    "anharmonicity_ghz",
    "prob_meas0_prep1",
    "prob_meas1_prep0",
    "readout_error",
    "readout_length_ns",
];

fn column(q: &QubitCalibration, name: &str) -> f64 {
    match name {
        "t1_us" => q.t1_us,
        "t2_us" => q.t2_us,
        "frequency_ghz" => q.frequency_ghz,
        "anharmonicity_ghz" => q.anharmonicity_ghz,
        "prob_meas0_prep1" => q.prob_meas0_prep1,
        "prob_meas1_prep0" => q.prob_meas1_prep0,
        "readout_error" => q.readout_error,
        "readout_length_ns" => q.readout_length_ns,
        _ => unreachable!("unknown calibration column {name}"),
    }
}

/// Quantile with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

pub fn summarize(values: &[f64], name: &str) -> ColumnSummary {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (mean, std) = mean_std(values);
    ColumnSummary {
        column: name.to_string(),
        count: values.len(),
        mean,
        std,
        min: sorted[0],
        q1: quantile(&sorted, 0.25),
        median: quantile(&sorted, 0.5),
        q3: quantile(&sorted, 0.75),
        max: sorted[sorted.len() - 1],
    }
}

pub fn calibration_summary(cal: &Calibration) -> Vec<ColumnSummary> {
    CALIBRATION_COLUMNS
        .iter()
        .map(|name| {
            let values: Vec<f64> = cal.qubits.iter().map(|q| column(q, name)).collect();
            summarize(&values, name)
        })
        .collect()
}

pub fn summary_to_csv(rows: &[ColumnSummary]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quartiles_interpolate() {
        let s = summarize(&[4.0, 1.0, 3.0, 2.0, 5.0], "x");
        assert_eq!((s.min, s.q1, s.median, s.q3, s.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        let s = summarize(&[1.0, 2.0, 3.0, 4.0], "x");
        assert_eq!((s.q1, s.median, s.q3), (1.75, 2.5, 3.25));
        let s = summarize(&[7.0], "x");
        assert_eq!((s.min, s.median, s.max, s.std), (7.0, 7.0, 7.0, 0.0));
    }
}
