//! File formats and IO helpers: JSON encodings of matrices and forms,
//! CSV for paths, curves and histograms, atomic writes, and float
//! formatting that round-trips doubles.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use frameform_core::forms::{DiscreteCurve, DiscreteOneForm};
use frameform_core::frame::FrameMatrix;
use frameform_core::matrix::RealMatrix;

/// All floating output uses 17 significant digits so values round-trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// JSON encoding of a dense matrix: row-major data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<RealMatrix, String> {
        RealMatrix::new(self.rows, self.cols, self.data.clone()).map_err(|e| e.to_string())
    }
}

/// Input of the `geodesic` command.
#[derive(Debug, Deserialize)]
pub struct GeodesicInput {
    pub a0: MatrixJson,
    pub u0: MatrixJson,
}

/// One node of a one-form: parameter, quadrature weight, frame value.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FormNodeJson {
    pub theta: f64,
    pub weight: f64,
    pub matrix: MatrixJson,
}

/// Input of the `distance` command: two forms on matching grids.
#[derive(Debug, Deserialize)]
pub struct DistanceInput {
    pub alpha: Vec<FormNodeJson>,
    pub beta: Vec<FormNodeJson>,
}

pub fn form_from_nodes(nodes: &[FormNodeJson]) -> Result<DiscreteOneForm, String> {
    let thetas: Vec<f64> = nodes.iter().map(|n| n.theta).collect();
    let weights: Vec<f64> = nodes.iter().map(|n| n.weight).collect();
    let mut values = Vec::with_capacity(nodes.len());
    for n in nodes {
        values.push(FrameMatrix::new(n.matrix.to_matrix()?).map_err(|e| e.to_string())?);
    }
    DiscreteOneForm::new(thetas, values, weights).map_err(|e| e.to_string())
}

/// Summary of a curvature scan, printed as a single JSON line.
#[derive(Debug, Serialize)]
pub struct ScanSummary {
    pub m: usize,
    pub n: usize,
    pub samples: u64,
    pub positive_fraction: f64,
    pub seed: u64,
}

/// Distance-bounds report.
#[derive(Debug, Serialize)]
pub struct DistanceReport {
    pub lower: f64,
    pub upper: f64,
    pub partial: bool,
    pub node_lengths: Vec<Option<f64>>,
}

/// One check of the submersion verification report.
#[derive(Debug, Serialize)]
pub struct CheckJson {
    pub name: String,
    pub max_err: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Serialize)]
pub struct SubmersionReportJson {
    pub seed: u64,
    pub trials: usize,
    pub all_pass: bool,
    pub checks: Vec<CheckJson>,
}

/// Writes a file atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let mut tmp: PathBuf = dir.to_path_buf();
    tmp.push(format!(
        ".{}.tmp-{}",
        path.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "out".into()),
        std::process::id()
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// CSV of a matrix path: `t` then the row-major entries of `a(t)`.
pub fn path_csv(rows: &[(f64, &RealMatrix)]) -> String {
    let mut out = String::new();
    if let Some((_, first)) = rows.first() {
        out.push('t');
        for i in 0..first.rows() {
            for j in 0..first.cols() {
                out.push_str(&format!(",a_{i}_{j}"));
            }
        }
        out.push('\n');
    }
    for (t, m) in rows {
        out.push_str(&fmt_f64(*t));
        for x in m.data() {
            out.push(',');
            out.push_str(&fmt_f64(*x));
        }
        out.push('\n');
    }
    out
}

/// CSV of a histogram: `bin_left,bin_right,count`.
pub fn histogram_csv(hist: &frameform_core::curvature::Histogram) -> String {
    let mut out = String::from("bin_left,bin_right,count\n");
    for (i, c) in hist.counts().iter().enumerate() {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(hist.bin_edges()[i]),
            fmt_f64(hist.bin_edges()[i + 1]),
            c
        ));
    }
    out
}

/// CSV of a curve: `theta,x1..xn`.
pub fn curve_csv(c: &DiscreteCurve) -> String {
    let dim = c.dim();
    let mut out = String::from("theta");
    for d in 1..=dim {
        out.push_str(&format!(",x{d}"));
    }
    out.push('\n');
    for (t, p) in c.nodes().iter().zip(c.points()) {
        out.push_str(&fmt_f64(*t));
        for x in p {
            out.push(',');
            out.push_str(&fmt_f64(*x));
        }
        out.push('\n');
    }
    out
}

/// Parses a curve-format CSV (`theta,x1..xn`, header optional).
pub fn parse_curve_csv(contents: &str) -> Result<(Vec<f64>, Vec<Vec<f64>>), String> {
    let mut nodes = Vec::new();
    let mut points = Vec::new();
    for (lineno, line) in contents.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if lineno == 0 && fields[0].trim().parse::<f64>().is_err() {
            continue; // header
        }
        let mut vals = Vec::with_capacity(fields.len());
        for f in &fields {
            vals.push(
                f.trim()
                    .parse::<f64>()
                    .map_err(|e| format!("line {}: {e}", lineno + 1))?,
            );
        }
        if vals.len() < 2 {
            return Err(format!("line {}: need theta plus coordinates", lineno + 1));
        }
        nodes.push(vals[0]);
        points.push(vals[1..].to_vec());
    }
    if nodes.is_empty() {
        return Err("empty curve file".into());
    }
    Ok((nodes, points))
}


