use std::fmt::Write as _;

use fgauss::observables::{default_window, fit_decay, SweepSeries};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Ordered `key: value` metadata carried alongside a series.
#[derive(Clone, Debug, Default)]
pub struct Meta(Vec<(String, String)>);

impl Meta {
    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.0.push((key.to_string(), value.to_string()));
    }
}

/// Fit over the default window, or the reason it is unavailable.
pub fn fit_summary(series: &SweepSeries) -> String {
    let r_max = series.last_r().unwrap_or(0);
    match fit_decay(series, default_window(r_max)) {
        Ok(f) => format!(
            "{} rate_or_exponent={:.6e} r_squared={:.6} window=[{},{}]",
            f.kind, f.rate_or_exponent, f.r_squared, f.window.0, f.window.1
        ),
        Err(e) => format!("unavailable ({e})"),
    }
}

pub fn render(series: &SweepSeries, meta: &Meta, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = String::from("r,value\n");
            for (r, v) in series.points() {
                let _ = writeln!(out, "{r},{v:.16e}");
            }
            for (k, v) in &meta.0 {
                let _ = writeln!(out, "# {k}: {v}");
            }
            out
        }
        Format::Json => {
            let meta: Map<String, Value> = meta.0.iter().map(|(k, v)| (k.clone(), Value::from(v.as_str()))).collect();
            let points: Vec<Value> = series.points().iter().map(|(r, v)| json!([r, v])).collect();
            let mut s = serde_json::to_string_pretty(&json!({ "meta": meta, "points": points })).unwrap_or_default();
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series() -> SweepSeries {
        SweepSeries::new("t", (1..=20).map(|r| (r, (-0.5 * r as f64).exp())).collect()).unwrap()
    }

    #[test]
    fn csv_layout() {
        let mut meta = Meta::default();
        meta.push("model", "ising");
        let text = render(&series(), &meta, Format::Csv);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "r,value");
        assert_eq!(lines[1], "1,6.0653065971263342e-1");
        assert_eq!(lines.last(), Some(&"# model: ising"));
        let v: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(v, (-0.5f64).exp());
    }

    #[test]
    fn json_layout() {
        let mut meta = Meta::default();
        meta.push("n", 8);
        let v: Value = serde_json::from_str(&render(&series(), &meta, Format::Json)).unwrap();
        assert_eq!(v["meta"]["n"], "8");
        assert_eq!(v["points"][0][0], 1);
        assert_eq!(v["points"].as_array().unwrap().len(), 20);
    }

    #[test]
    fn fit_summary_reports_rate() {
        let s = fit_summary(&series());
        assert!(s.starts_with("exponential rate_or_exponent=5.000000e-1"), "{s}");
    }
}
