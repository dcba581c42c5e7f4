//! CSV and JSON formats. Every file has a header, `.` decimals and `\n` line
//! endings; floats are written in Rust's shortest round-trip form, so equal
//! values always produce equal bytes.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use hawkinar_core::approx::ConvergenceReport;
use hawkinar_core::estimate::KernelEstimate;
use hawkinar_core::{ClusterRealization, CountSeries, FamilyRealization, Origin, PointPattern};
use serde::Serialize;

use crate::error::AppError;

type Result<T> = std::result::Result<T, AppError>;

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn finish<W: Write>(w: csv::Writer<W>) -> Result<()> {
    w.into_inner()
        .map_err(|e| AppError::Input(e.to_string()))?
        .flush()
        .map_err(|e| AppError::io("<csv>", e))
}

/// Writes `path` through a temporary file in the same directory and renames
/// it into place, so readers never see a partial file.
pub fn write_atomic<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| AppError::io(dir, e))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        body(&mut w)?;
        w.flush().map_err(|e| AppError::io(path, e))?;
    }
    tmp.persist(path).map_err(|e| AppError::io(path, e.error))?;
    Ok(())
}

/// `index,count`.
pub fn write_count_series<W: Write>(s: &CountSeries, w: W) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["index", "count"])?;
    for (i, c) in s.indexed() {
        out.write_record([i.to_string(), c.to_string()])?;
    }
    finish(out)
}

/// Reads `index,count` rows with consecutive indices.
pub fn read_count_series<R: Read>(r: R, delta: f64) -> Result<CountSeries> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(r);
    check_header(rdr.headers()?, &["index", "count"])?;
    let mut start = None;
    let mut counts = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let index: i64 = parse(&rec, 0, row)?;
        let count: u64 = parse(&rec, 1, row)?;
        let first = *start.get_or_insert(index);
        if index != first + counts.len() as i64 {
            return Err(AppError::Input(format!(
                "row {}: index {index} is not consecutive",
                row + 1
            )));
        }
        counts.push(count);
    }
    Ok(CountSeries::new(delta, start.unwrap_or(1), counts)?)
}

/// `n,generation,count`, nonzero cells only, by generation then step.
pub fn write_family<W: Write>(f: &FamilyRealization, w: W) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["n", "generation", "count"])?;
    for (g, gen) in f.per_generation().iter().enumerate() {
        for (n, &c) in gen.iter().enumerate().filter(|(_, &c)| c > 0) {
            out.write_record([n.to_string(), g.to_string(), c.to_string()])?;
        }
    }
    finish(out)
}

/// `time`.
pub fn write_point_pattern<W: Write>(p: &PointPattern, w: W) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["time"])?;
    for t in p.times() {
        out.write_record([t.to_string()])?;
    }
    finish(out)
}

/// Reads a `time` column into a pattern on `window`.
pub fn read_point_pattern<R: Read>(r: R, window: (f64, f64)) -> Result<PointPattern> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(r);
    check_header(rdr.headers()?, &["time"])?;
    let mut times = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        times.push(parse::<f64>(&rec?, 0, row)?);
    }
    Ok(PointPattern::from_unsorted(window, times)?)
}

/// `time,parent_index,generation`; `parent_index` is −1 for immigrants and −2
/// when the parent fell before the window.
pub fn write_cluster<W: Write>(c: &ClusterRealization, w: W) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["time", "parent_index", "generation"])?;
    let rows = c.pattern().times().iter().zip(c.origins()).zip(c.generations());
    for ((t, o), g) in rows {
        let parent = match o {
            Origin::Immigrant => -1,
            Origin::OffspringOfUnobserved => -2,
            Origin::Offspring(i) => *i as i64,
        };
        out.write_record([t.to_string(), parent.to_string(), g.to_string()])?;
    }
    finish(out)
}

/// `delta,k_delta,mean_gap,w1_window1,w1_window2,var_gap,reps`.
pub fn write_report_csv<W: Write>(r: &ConvergenceReport, w: W) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record([
        "delta",
        "k_delta",
        "mean_gap",
        "w1_window1",
        "w1_window2",
        "var_gap",
        "reps",
    ])?;
    for row in &r.rows {
        out.write_record([
            row.delta.to_string(),
            row.k_delta.to_string(),
            row.mean_gap.to_string(),
            row.w1_window1.to_string(),
            row.w1_window2.to_string(),
            row.var_gap.to_string(),
            row.reps.to_string(),
        ])?;
    }
    finish(out)
}

/// The report as a JSON array of rows, including the W1 standard errors.
pub fn write_report_json<W: Write>(r: &ConvergenceReport, w: W) -> Result<()> {
    write_json(r, w)
}

/// `k,t,h_hat`.
pub fn write_kernel_estimate_csv<W: Write>(e: &KernelEstimate, w: W) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(["k", "t", "h_hat"])?;
    for (k, t, h) in e.points() {
        out.write_record([k.to_string(), t.to_string(), h.to_string()])?;
    }
    finish(out)
}

#[derive(Serialize)]
struct EstimateHeader {
    delta: f64,
    eta_hat: f64,
    residual_variance: f64,
}

/// `{"delta", "eta_hat", "residual_variance"}`.
pub fn write_kernel_estimate_header<W: Write>(e: &KernelEstimate, w: W) -> Result<()> {
    write_json(
        &EstimateHeader {
            delta: e.delta,
            eta_hat: e.eta_hat,
            residual_variance: e.residual_variance,
        },
        w,
    )
}

fn write_json<T: Serialize, W: Write>(value: &T, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| AppError::Input(e.to_string()))?;
    w.write_all(b"\n").map_err(|e| AppError::io("<json>", e))
}

fn check_header(h: &csv::StringRecord, want: &[&str]) -> Result<()> {
    if h.iter().ne(want.iter().copied()) {
        return Err(AppError::Input(format!(
            "expected header {:?}, found {:?}",
            want.join(","),
            h
        )));
    }
    Ok(())
}

fn parse<T: std::str::FromStr>(rec: &csv::StringRecord, col: usize, row: usize) -> Result<T> {
    rec.get(col)
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(|| AppError::Input(format!("row {}: bad value in column {}", row + 1, col + 1)))
}

/// Reads a whole file, tagging errors with the path.
pub fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| AppError::io(path, e))
}
