//! Run reports: JSON with the full numeric payload, CSV flattening one
//! sample per row. Bivectors are always serialized in the fixed Plücker
//! order `(12, 13, 14, 23, 24, 34)`.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::checks::TheoremCheck;
use crate::classify::{ClassificationResult, Residuals, Tolerances, Verdict};
use crate::families::SurfaceFamily;
use crate::geometry::{Grid, GridSpec};
use crate::Result;

/// Columns of the sample CSV, in emission order.
pub const SAMPLE_COLUMNS: [&str; 29] = [
    "s", "t", "masked", "eps", "eps_star", "q", "A", "h3_11", "h3_12", "h3_22", "h4_11", "h4_12",
    "h4_22", "om12_e1", "om12_e2", "om34_e1", "om34_e2", "H_1", "H_2", "H_3", "H_4", "normH2",
    "norm_h2", "RD", "nu_12", "nu_13", "nu_14", "nu_23", "nu_24", // continued below
];
/// Trailing Laplacian columns of the sample CSV.
pub const SAMPLE_COLUMNS_TAIL: [&str; 7] =
    ["nu_34", "lap_12", "lap_13", "lap_14", "lap_23", "lap_24", "lap_34"];

/// Flattened per-point projection of a `GeometrySample`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub s: f64,
    pub t: f64,
    pub masked: bool,
    pub eps: f64,
    pub eps_star: f64,
    pub q: f64,
    pub a: f64,
    pub h3: [f64; 3],
    pub h4: [f64; 3],
    pub om12: [f64; 2],
    pub om34: [f64; 2],
    pub mean: [f64; 4],
    pub norm_h2_mean: f64,
    pub norm_h2_second: f64,
    pub rd: f64,
    pub nu: [f64; 6],
    pub lap_nu: [f64; 6],
}

/// Classification payload of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationView {
    pub verdict: Verdict,
    /// Ambient Plücker coordinates of the recovered `C`.
    #[serde(rename = "C")]
    pub c: [f64; 6],
    #[serde(rename = "C_frame_stats")]
    pub c_frame_stats: crate::classify::CFrameStats,
    /// Recovered `f` per unmasked sample; `null` marks inconsistent points.
    pub f: Vec<Option<f64>>,
    pub residuals: Residuals,
    pub n_samples: usize,
}

impl From<&ClassificationResult> for ClassificationView {
    fn from(r: &ClassificationResult) -> Self {
        ClassificationView {
            verdict: r.verdict,
            c: r.c.plucker,
            c_frame_stats: r.c_frame,
            f: r.f_values.iter().map(|f| if f.is_finite() { Some(*f) } else { None }).collect(),
            residuals: r.residuals,
            n_samples: r.n_samples,
        }
    }
}

/// Top-level run report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub family: String,
    pub params: BTreeMap<String, String>,
    pub grid: GridSpec,
    pub tolerances: Tolerances,
    pub samples: Vec<SampleRow>,
    pub classification: Option<ClassificationView>,
    pub checks: Vec<TheoremCheck>,
}

impl Report {
    pub fn new(family: &str, params: BTreeMap<String, String>, grid: GridSpec) -> Report {
        Report {
            family: family.into(),
            params,
            grid,
            tolerances: Tolerances::default(),
            samples: Vec::new(),
            classification: None,
            checks: Vec::new(),
        }
    }

    pub fn with_grid_samples(mut self, grid: &Grid) -> Report {
        self.samples = flatten_grid(grid);
        self
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Report> {
        Ok(serde_json::from_str(text)?)
    }

    /// Writes the report in the requested format.
    pub fn emit<W: Write + ?Sized>(&self, format: ReportFormat, w: &mut W) -> Result<()> {
        match format {
            ReportFormat::Json => {
                writeln!(w, "{}", self.to_json()?)?;
            }
            ReportFormat::Csv => {
                write_samples_csv(&self.samples, w)?;
            }
        }
        Ok(())
    }
}

/// Output format of `emit`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

/// Flattens a sampled grid, keeping masked points as placeholder rows.
pub fn flatten_grid(grid: &Grid) -> Vec<SampleRow> {
    let spec = &grid.spec;
    let mut rows = Vec::with_capacity(spec.ns * spec.nt);
    for i in 0..spec.ns {
        for j in 0..spec.nt {
            match grid.at(i, j) {
                Some(g) => rows.push(SampleRow {
                    s: g.s,
                    t: g.t,
                    masked: false,
                    eps: g.eps,
                    eps_star: g.eps_star,
                    q: g.q,
                    a: g.big_a,
                    h3: g.h3,
                    h4: g.h4,
                    om12: g.om12,
                    om34: g.om34,
                    mean: g.mean_curvature.coords,
                    norm_h2_mean: g.mean_sq,
                    norm_h2_second: g.h_sq,
                    rd: g.rd,
                    nu: g.nu.plucker,
                    lap_nu: g.lap_nu.plucker,
                }),
                None => rows.push(SampleRow {
                    s: spec.s_at(i),
                    t: spec.t_at(j),
                    masked: true,
                    eps: 0.0,
                    eps_star: 0.0,
                    q: 0.0,
                    a: 0.0,
                    h3: [0.0; 3],
                    h4: [0.0; 3],
                    om12: [0.0; 2],
                    om34: [0.0; 2],
                    mean: [0.0; 4],
                    norm_h2_mean: 0.0,
                    norm_h2_second: 0.0,
                    rd: 0.0,
                    nu: [0.0; 6],
                    lap_nu: [0.0; 6],
                }),
            }
        }
    }
    rows
}

/// One sample per row; column order is `SAMPLE_COLUMNS ++ SAMPLE_COLUMNS_TAIL`.
pub fn write_samples_csv<W: Write + ?Sized>(rows: &[SampleRow], w: &mut W) -> Result<()> {
    let header: Vec<&str> =
        SAMPLE_COLUMNS.iter().chain(SAMPLE_COLUMNS_TAIL.iter()).copied().collect();
    writeln!(w, "{}", header.join(","))?;
    for r in rows {
        let mut cells: Vec<String> = Vec::with_capacity(36);
        cells.push(fmt(r.s));
        cells.push(fmt(r.t));
        cells.push((r.masked as u8).to_string());
        cells.push(fmt(r.eps));
        cells.push(fmt(r.eps_star));
        cells.push(fmt(r.q));
        cells.push(fmt(r.a));
        for v in r.h3.iter().chain(r.h4.iter()) {
            cells.push(fmt(*v));
        }
        for v in r.om12.iter().chain(r.om34.iter()) {
            cells.push(fmt(*v));
        }
        for v in r.mean.iter() {
            cells.push(fmt(*v));
        }
        cells.push(fmt(r.norm_h2_mean));
        cells.push(fmt(r.norm_h2_second));
        cells.push(fmt(r.rd));
        for v in r.nu.iter().chain(r.lap_nu.iter()) {
            cells.push(fmt(*v));
        }
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// Mesh rows `s,t,x1,x2,x3,x4` of sampled surface coordinates.
pub fn write_mesh_csv<W: Write + ?Sized>(
    family: &SurfaceFamily,
    spec: &GridSpec,
    w: &mut W,
) -> Result<()> {
    writeln!(w, "s,t,x1,x2,x3,x4")?;
    for i in 0..spec.ns {
        for j in 0..spec.nt {
            let (s, t) = (spec.s_at(i), spec.t_at(j));
            match family.jet(s, t) {
                Ok(jet) => {
                    let c = jet.value.coords;
                    writeln!(
                        w,
                        "{},{},{},{},{},{}",
                        fmt(s),
                        fmt(t),
                        fmt(c[0]),
                        fmt(c[1]),
                        fmt(c[2]),
                        fmt(c[3])
                    )?;
                }
                Err(crate::Error::Domain(_)) | Err(crate::Error::Degenerate(_)) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(())
}

/// Mesh rows as JSON records.
pub fn mesh_json(family: &SurfaceFamily, spec: &GridSpec) -> Result<String> {
    #[derive(Serialize)]
    struct MeshRow {
        s: f64,
        t: f64,
        x: [f64; 4],
    }
    let mut rows = Vec::new();
    for i in 0..spec.ns {
        for j in 0..spec.nt {
            let (s, t) = (spec.s_at(i), spec.t_at(j));
            if let Ok(jet) = family.jet(s, t) {
                rows.push(MeshRow { s, t, x: jet.value.coords });
            }
        }
    }
    Ok(serde_json::to_string_pretty(&rows)?)
}

fn fmt(v: f64) -> String {
    // Shortest representation that round-trips exactly.
    format!("{v}")
}
