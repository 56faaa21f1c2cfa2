use std::io::Write;

use crate::baselines::BaselineKind;
use crate::error::{Error, Result};

pub const HEADER: [&str; 12] = [
    "ensemble",
    "n",
    "law",
    "statistic",
    "region",
    "trials",
    "seed",
    "mean",
    "stderr",
    "baseline",
    "baseline_kind",
    "z_score",
];

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub ensemble: String,
    pub n: Option<usize>,
    pub law: String,
    pub statistic: String,
    pub region: String,
    pub trials: u64,
    pub seed: u64,
    pub mean: Option<f64>,
    pub stderr: Option<f64>,
    pub baseline: Option<f64>,
    pub baseline_kind: Option<BaselineKind>,
    pub z_score: Option<f64>,
}

impl ReportRow {
    /// Sets the baseline and the z-score `(mean - baseline) / stderr`.
    pub fn with_baseline(mut self, baseline: Option<(f64, BaselineKind)>) -> Self {
        self.baseline = baseline.map(|b| b.0);
        self.baseline_kind = baseline.map(|b| b.1);
        self.z_score = match (self.mean, self.stderr, self.baseline) {
            (Some(m), Some(s), Some(b)) if s > 0.0 => Some((m - b) / s),
            (Some(m), Some(_), Some(b)) if m == b => Some(0.0),
            _ => None,
        };
        self
    }

    fn fields(&self) -> [String; 12] {
        let num = |x: Option<f64>| x.map(fmt_num).unwrap_or_default();
        [
            self.ensemble.clone(),
            self.n.map(|n| n.to_string()).unwrap_or_default(),
            self.law.clone(),
            self.statistic.clone(),
            self.region.clone(),
            self.trials.to_string(),
            self.seed.to_string(),
            num(self.mean),
            num(self.stderr),
            num(self.baseline),
            self.baseline_kind.map(|k| k.to_string()).unwrap_or_default(),
            num(self.z_score),
        ]
    }
}

/// 17 significant digits in scientific notation, e.g. `2.0000000000000000e1`.
pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

pub fn write_rows<W: Write>(w: W, rows: &[ReportRow]) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidArgument(format!("csv: {e}"));
    let mut out = csv::Writer::from_writer(w);
    out.write_record(HEADER).map_err(io)?;
    for r in rows {
        out.write_record(r.fields()).map_err(io)?;
    }
    out.flush().map_err(|e| Error::InvalidArgument(format!("csv: {e}")))
}
