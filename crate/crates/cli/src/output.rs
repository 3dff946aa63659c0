use std::io::Write;
use std::path::Path;

use algebroid::nevanlinna::CharacteristicSample;
use algebroid::verify::MarginReport;
use anyhow::{Context, Result};
use serde::Serialize;

pub fn characteristic_csv<W: Write>(out: W, samples: &[CharacteristicSample<f64>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["r", "m", "N", "T", "Nx"])?;
    for s in samples {
        w.serialize((s.r, s.m, s.N, s.T, s.Nx))?;
    }
    w.flush()?;
    Ok(())
}

pub fn report_csv<W: Write>(out: W, report: &MarginReport) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["label", "r", "point_re", "point_im", "lhs", "rhs", "slack", "allowance", "ok"])?;
    for row in &report.rows {
        let (re, im) = match row.point {
            Some([re, im]) => (re.to_string(), im.to_string()),
            None => (String::new(), String::new()),
        };
        w.write_record([
            row.label.clone(),
            row.r.to_string(),
            re,
            im,
            row.lhs.to_string(),
            row.rhs.to_string(),
            row.slack.to_string(),
            row.allowance.to_string(),
            row.ok.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct ReportFile<'a> {
    suite: &'a str,
    seed: u64,
    #[serde(flatten)]
    report: &'a MarginReport,
}

pub fn write_report(prefix: &Path, suite: &str, seed: u64, report: &MarginReport) -> Result<()> {
    let with = |ext: &str| {
        let mut p = prefix.as_os_str().to_owned();
        p.push(ext);
        std::path::PathBuf::from(p)
    };
    let (json, csv_path) = (with(".json"), with(".csv"));
    let text = serde_json::to_string_pretty(&ReportFile { suite, seed, report })?;
    std::fs::write(&json, text + "\n").with_context(|| format!("cannot write {}", json.display()))?;
    let file = std::fs::File::create(&csv_path).with_context(|| format!("cannot write {}", csv_path.display()))?;
    report_csv(file, report)
}

/// Six significant digits for human-readable output.
pub fn short(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = 5 - x.abs().log10().floor() as i32;
    if (0..=12).contains(&digits) {
        format!("{:.*}", digits as usize, x)
    } else {
        format!("{x:.5e}")
    }
}
