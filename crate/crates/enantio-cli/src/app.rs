//! Spec loading, single runs, parallel sweeps and the run manifest.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{CliError, ValidationReport};
use crate::kinds::Kind;
use crate::output::{write_json, Cell, RunOutput, Table};
use crate::schema::{grid, validate, Axis, Params};

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "ENANTIO_EP_WORKERS";

/// One invocation.
#[derive(Clone, Debug)]
pub struct Job {
    pub kind: Kind,
    pub spec: PathBuf,
    pub out: PathBuf,
    pub workers: Option<usize>,
}

/// Parses and validates `path` against the schema of `kind`.
pub fn load_spec(kind: Kind, path: &Path) -> Result<(String, Params, Vec<Axis>), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Validation(ValidationReport::invalid("spec", format!("cannot read {}: {e}", path.display()))))?;
    let tree: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::Validation(ValidationReport::invalid("spec", e.message().to_string())))?;
    let (params, axes) = validate(&kind.schema(), kind.name(), &tree)?;
    Ok((text, params, axes))
}

/// Worker count from the flag, then the environment, then the machine.
pub fn resolve_workers(flag: Option<usize>) -> Result<usize, CliError> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(WORKERS_ENV) {
            Ok(s) => s
                .trim()
                .parse()
                .map_err(|_| CliError::Validation(ValidationReport::invalid(WORKERS_ENV, format!("not a worker count: {s:?}"))))?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if n == 0 {
        return Err(CliError::Validation(ValidationReport::invalid("workers", "must be at least 1")));
    }
    Ok(n)
}

fn write_output(dir: &Path, out: &RunOutput, files: &mut Vec<String>, prefix: &str) -> Result<(), CliError> {
    write_json(&dir.join("summary.json"), &out.summary)?;
    out.records.write_csv(&dir.join("records.csv"))?;
    files.push(format!("{prefix}summary.json"));
    files.push(format!("{prefix}records.csv"));
    for (name, table) in &out.traces {
        table.write_csv(&dir.join(name))?;
        files.push(format!("{prefix}{name}"));
    }
    Ok(())
}

fn unix_seconds() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

/// Runs `job`, writing every output under `job.out`.
pub fn execute(job: &Job) -> Result<(), CliError> {
    let (text, params, axes) = load_spec(job.kind, &job.spec)?;
    let workers = resolve_workers(job.workers)?;
    std::fs::create_dir_all(&job.out)?;
    let started = unix_seconds();
    let clock = Instant::now();
    let mut files = Vec::new();
    let mut failures = Vec::new();
    if axes.is_empty() {
        let out = job.kind.run(&params)?;
        write_output(&job.out, &out, &mut files, "")?;
    } else {
        failures = sweep(job.kind, &params, &axes, workers, &job.out, &mut files)?;
    }
    let manifest = json!({
        "tool": "enantio-ep",
        "tool_version": env!("CARGO_PKG_VERSION"),
        "library_version": enantio::VERSION,
        "kind": job.kind.name(),
        "spec_path": job.spec.display().to_string(),
        "spec_text": text,
        "parameters": params.to_json(),
        "sweep_axes": axes.iter().map(|a| json!({"key": a.key, "values": a.values})).collect::<Vec<_>>(),
        "workers": workers,
        "started_unix_s": started,
        "wall_time_s": clock.elapsed().as_secs_f64(),
        "files": files,
        "failures": failures,
    });
    write_json(&job.out.join("manifest.json"), &manifest)
}

/// Evaluates the Cartesian grid of `axes` on a pool of `workers` threads.
///
/// Results are collected in grid order, so the merged table does not depend
/// on the worker count. Failed points are recorded and skipped.
fn sweep(kind: Kind, base: &Params, axes: &[Axis], workers: usize, out: &Path, files: &mut Vec<String>) -> Result<Vec<Value>, CliError> {
    let points = grid(axes);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().map_err(CliError::runtime)?;
    let results: Vec<Result<RunOutput, CliError>> =
        pool.install(|| points.par_iter().map(|overrides| kind.run(&base.with_overrides(overrides))).collect());

    let points_dir = out.join("points");
    std::fs::create_dir_all(&points_dir)?;
    let mut merged: Option<Table> = None;
    let mut failures = Vec::new();
    let mut point_summaries = Vec::new();
    for (i, (overrides, result)) in points.iter().zip(&results).enumerate() {
        let coords: serde_json::Map<String, Value> = overrides.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        match result {
            Ok(run) => {
                let name = format!("p{i:05}");
                let dir = points_dir.join(&name);
                std::fs::create_dir_all(&dir)?;
                write_output(&dir, run, files, &format!("points/{name}/"))?;
                let table = merged.get_or_insert_with(|| {
                    let mut header: Vec<&str> = axes.iter().map(|a| a.key.as_str()).collect();
                    header.push("point");
                    header.extend(run.records.header.iter().map(String::as_str));
                    Table::new(&header)
                });
                for rec in &run.records.rows {
                    let mut row: Vec<Cell> = overrides.iter().map(|(_, v)| Cell::F(*v)).collect();
                    row.push(i.into());
                    row.extend(rec.iter().cloned());
                    table.push(row);
                }
                point_summaries.push(json!({"point": i, "coordinates": coords, "summary": run.summary}));
            }
            Err(e) => failures.push(json!({"point": i, "coordinates": coords, "error": e.to_json()})),
        }
    }
    let Some(table) = merged else {
        return Err(CliError::runtime(format!("all {} sweep points failed", points.len())));
    };
    table.write_csv(&out.join("sweep.csv"))?;
    files.push("sweep.csv".to_string());
    let summary = json!({
        "kind": kind.name(),
        "points": points.len(),
        "successes": points.len() - failures.len(),
        "failures": failures.len(),
        "results": point_summaries,
    });
    write_json(&out.join("summary.json"), &summary)?;
    files.push("summary.json".to_string());
    Ok(failures)
}
