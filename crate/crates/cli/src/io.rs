//! Points CSV, step logs and run manifests.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use dynseq::greedy::StepRecord;
use dynseq::{PointSet, Provenance};
use serde::Serialize;

use crate::error::{CliError, CliResult};

fn input_error(path: &Path, message: impl ToString) -> CliError {
    CliError::Input { path: path.to_path_buf(), message: message.to_string() }
}

fn output_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Output { path: path.to_path_buf(), source }
}

/// Reads `index,x1[,x2,...]` rows in sequence order.
pub fn read_points(path: &Path) -> CliResult<PointSet> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| input_error(path, e))?;
    let headers = reader.headers().map_err(|e| input_error(path, e))?.clone();
    let dim = headers.len().saturating_sub(1);
    let expected: Vec<String> =
        std::iter::once("index".to_string()).chain((1..=dim).map(|j| format!("x{j}"))).collect();
    if dim == 0 || headers.iter().ne(expected.iter().map(String::as_str)) {
        return Err(input_error(path, format!("header must be {}", expected.join(","))));
    }
    let mut coords = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| input_error(path, e))?;
        let index: usize = record[0].trim().parse().map_err(|_| input_error(path, format!("row {}: bad index", row + 1)))?;
        if index != row + 1 {
            return Err(input_error(path, format!("row {}: index {index} out of sequence", row + 1)));
        }
        for field in record.iter().skip(1) {
            let v: f64 = field
                .trim()
                .parse()
                .map_err(|_| input_error(path, format!("row {}: bad coordinate {field:?}", row + 1)))?;
            coords.push(v);
        }
    }
    PointSet::from_flat(dim, coords, Provenance::File).map_err(|e| input_error(path, e))
}

/// Coordinates use the shortest representation that round-trips exactly.
pub fn write_points<W: Write>(points: &PointSet, sink: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    let header: Vec<String> =
        std::iter::once("index".to_string()).chain((1..=points.dim()).map(|j| format!("x{j}"))).collect();
    w.write_record(&header)?;
    for (i, p) in points.iter().enumerate() {
        let row: Vec<String> = std::iter::once((i + 1).to_string()).chain(p.iter().map(|x| x.to_string())).collect();
        w.write_record(&row)?;
    }
    w.flush()
}

pub fn write_points_file(points: &PointSet, path: &Path) -> CliResult<()> {
    let file = File::create(path).map_err(output_error(path))?;
    write_points(points, BufWriter::new(file)).map_err(output_error(path))
}

pub fn write_steps(records: &[StepRecord], path: &Path) -> CliResult<()> {
    let file = File::create(path).map_err(output_error(path))?;
    let mut w = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut w, r).map_err(|e| output_error(path)(e.into()))?;
        w.write_all(b"\n").map_err(output_error(path))?;
    }
    w.flush().map_err(output_error(path))
}

pub fn read_steps(path: &Path) -> CliResult<Vec<StepRecord>> {
    let file = File::open(path).map_err(|e| input_error(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| input_error(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| input_error(path, format!("line {}: {e}", i + 1)))?);
    }
    Ok(out)
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> CliResult<()> {
    let file = File::create(path).map_err(output_error(path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| output_error(path)(e.into()))?;
    w.write_all(b"\n").map_err(output_error(path))?;
    w.flush().map_err(output_error(path))
}

/// Writes rows with a header through the csv crate.
pub fn write_rows<W: Write>(header: &[&str], rows: &[Vec<String>], sink: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()
}

pub fn write_rows_to(header: &[&str], rows: &[Vec<String>], path: Option<&Path>) -> CliResult<()> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(output_error(p))?;
            write_rows(header, rows, BufWriter::new(file)).map_err(output_error(p))
        }
        None => write_rows(header, rows, std::io::stdout().lock()).map_err(output_error(Path::new("<stdout>"))),
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub tool_version: &'static str,
    pub timestamp: String,
    pub threads: Option<usize>,
    pub config: serde_json::Value,
    pub inputs: Vec<PathBuf>,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(command: &'static str, threads: Option<usize>, config: serde_json::Value) -> Self {
        Self {
            command,
            tool_version: env!("CARGO_PKG_VERSION"),
            timestamp: chrono::Utc::now().to_rfc3339(),
            threads,
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Written next to the primary output as `<out>.manifest.json`.
    pub fn write_beside(&self, primary: &Path) -> CliResult<()> {
        let mut name = primary.as_os_str().to_os_string();
        name.push(".manifest.json");
        write_json(self, Path::new(&name))
    }
}
