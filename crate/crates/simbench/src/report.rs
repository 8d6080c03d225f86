//! Benchmark rows and their CSV form.
//!
//! Columns: `sweep, param, step, work, iterations, min_us, p25_us,
//! median_us, p75_us, max_us, mean_us`. `param` is the swept quantity
//! (points, rays, voxels, or frames), `work` a step-specific count such
//! as voxels freed.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use voxgrid_core::{Error, Result};

use crate::timing::Summary;

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub sweep: String,
    pub param: f64,
    pub step: String,
    pub work: u64,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CsvRow {
    sweep: String,
    param: f64,
    step: String,
    work: u64,
    iterations: usize,
    min_us: f64,
    p25_us: f64,
    median_us: f64,
    p75_us: f64,
    max_us: f64,
    mean_us: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchmarkReport {
    pub rows: Vec<ReportRow>,
}

impl BenchmarkReport {
    pub fn push(&mut self, sweep: &str, param: f64, step: &str, work: u64, summary: Summary) {
        self.rows.push(ReportRow {
            sweep: sweep.to_string(),
            param,
            step: step.to_string(),
            work,
            summary,
        });
    }

    pub fn extend(&mut self, other: BenchmarkReport) {
        self.rows.extend(other.rows);
    }

    /// `(param, median)` for one step, in row order.
    pub fn medians(&self, step: &str) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.step == step)
            .map(|r| (r.param, r.summary.median))
            .collect()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for r in &self.rows {
            let s = &r.summary;
            out.serialize(CsvRow {
                sweep: r.sweep.clone(),
                param: r.param,
                step: r.step.clone(),
                work: r.work,
                iterations: s.count,
                min_us: s.min,
                p25_us: s.p25,
                median_us: s.median,
                p75_us: s.p75,
                max_us: s.max,
                mean_us: s.mean,
            })
            .map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rows = Vec::new();
        for rec in csv::Reader::from_reader(r).deserialize::<CsvRow>() {
            let c = rec.map_err(csv_err)?;
            rows.push(ReportRow {
                sweep: c.sweep,
                param: c.param,
                step: c.step,
                work: c.work,
                summary: Summary {
                    min: c.min_us,
                    p25: c.p25_us,
                    median: c.median_us,
                    p75: c.p75_us,
                    max: c.max_us,
                    mean: c.mean_us,
                    count: c.iterations,
                },
            });
        }
        Ok(Self { rows })
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Format {
        what: "benchmark csv",
        detail: e.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut rep = BenchmarkReport::default();
        let s = Summary::from_samples(&[1.0, 2.0, 3.5]).unwrap();
        rep.push("points", 1000.0, "populate", 1000, s);
        rep.push("points", 0.0, "populate", 0, s);
        let mut buf = Vec::new();
        rep.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("sweep,param,step,work,iterations,min_us,p25_us,median_us,p75_us,max_us,mean_us\n"));
        assert_eq!(BenchmarkReport::read_csv(buf.as_slice()).unwrap(), rep);
        assert_eq!(rep.medians("populate"), vec![(1000.0, 2.0), (0.0, 2.0)]);
    }
}
