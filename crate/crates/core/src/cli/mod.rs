//! Command-line front end. The binary only forwards to [`run_cli`], so
//! everything here is testable in-process.
//!
//! CSV columns:
//! - `eval`, `grid`: `group, <coords…>, t, value, tail_estimate` (`eval` adds
//!   `imag_residual` last). Coordinate names come from
//!   [`GroupTag::coord_names`], or `c1 … cn` for the long matrix forms.
//! - `verify`: `name, value, tolerance, passed, group, t, note`.
//! - `popp`: `quantity, index, value`.
//! - `info`: `group, dual, index, eigenvalue`.
//!
//! Floats are written with 17 significant digits in CSV and in shortest
//! round-trip form in JSON; both read back to the same `f64`.

mod config;
mod frame_file;
mod info;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;
use rayon::prelude::*;
use serde_json::{json, Value};

pub use config::{parse_config_file, Cli, CommandKind, Flags, GridRange, OutputFormat, RunConfig};
pub use frame_file::{parse_frame_file, ExprFrame, FrameDocument, ParsedFrameFile};
pub use info::{eigenvalue_table, EigenRow};

use crate::error::{Error, Result};
use crate::gft_kernels::{KernelEvaluator, KernelResult};
use crate::groups::{GroupElement, GroupTag};
use crate::lie_core::{laplacian_coeffs_fd, FrameField, DEFAULT_FD_STEP};
use crate::verify::{run_suite, ResidualReport};

/// JSON Schema that every `--format json` document (and the stderr error
/// object) validates against.
pub const OUTPUT_SCHEMA: &str = include_str!("../../schema/output.schema.json");

/// Environment variable capping the worker threads used by `grid`.
pub const THREADS_ENV: &str = "HYPOHEAT_THREADS";

/// Exit status: success.
pub const EXIT_OK: i32 = 0;
/// Exit status: numeric or accuracy failure, or a failed check.
pub const EXIT_NUMERIC: i32 = 1;
/// Exit status: bad flags, config or input.
pub const EXIT_USAGE: i32 = 2;

/// What a run produced: the text to emit and whether it counts as success.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub success: bool,
}

/// Parses `args` (program name first), runs, writes output and errors, and
/// returns the exit status.
pub fn run_cli<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if !e.use_stderr() {
                let _ = write!(stdout, "{}", e.render());
                return EXIT_OK;
            }
            // same JSON object as every other error, then clap's own usage text
            let first = e.render().to_string();
            let first = first.lines().next().unwrap_or("").trim_start_matches("error: ");
            let _ = writeln!(stderr, "{}", Error::Input(first.to_string()).to_json());
            let _ = write!(stderr, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    let result = RunConfig::resolve(&cli).and_then(|cfg| {
        let outcome = run(&cfg)?;
        emit(&cfg, &outcome.text, stdout)?;
        Ok(outcome.success)
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_NUMERIC,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.to_json());
            if e.is_input() {
                let _ = writeln!(
                    stderr,
                    "usage: hypoheat <eval|grid|verify|popp|info> [flags]; see --help"
                );
                EXIT_USAGE
            } else {
                EXIT_NUMERIC
            }
        }
    }
}

fn emit(cfg: &RunConfig, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::Numeric(format!("cannot write output: {e}"))),
    }
}

/// Runs a resolved configuration and renders its output.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    match cfg.command {
        CommandKind::Eval => eval(cfg),
        CommandKind::Grid => grid(cfg),
        CommandKind::Verify => verify(cfg),
        CommandKind::Popp => popp(cfg),
        CommandKind::Info => info_cmd(cfg),
    }
}

/// `{:.16e}`: 17 significant digits, round-trip safe.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn need_group(cfg: &RunConfig) -> Result<GroupTag> {
    cfg.group
        .ok_or_else(|| Error::Input("--group is required".into()))
}

fn single_time(cfg: &RunConfig) -> Result<f64> {
    match cfg.times.as_slice() {
        [t] => Ok(*t),
        [] => Err(Error::Input("--time is required".into())),
        _ => Err(Error::Input("eval takes a single --time".into())),
    }
}

fn coord_labels(tag: GroupTag, len: usize) -> Vec<String> {
    if len == 3 {
        tag.coord_names().iter().map(|s| s.to_string()).collect()
    } else {
        (1..=len).map(|i| format!("c{i}")).collect()
    }
}

fn se2_extent(tag: GroupTag, pts: &[GroupElement]) -> f64 {
    if tag != GroupTag::SE2 {
        return 0.0;
    }
    pts.iter()
        .map(|g| match g {
            GroupElement::SE2(h) => h.x1().hypot(h.x2()),
            _ => 0.0,
        })
        .fold(0.0, f64::max)
}

fn eval(cfg: &RunConfig) -> Result<Outcome> {
    let tag = need_group(cfg)?;
    let t = single_time(cfg)?;
    let coords = cfg
        .point
        .clone()
        .ok_or_else(|| Error::Input("--point is required".into()))?;
    let g = GroupElement::from_coords(tag, &coords)?;
    let k = KernelEvaluator::new(tag, t, &cfg.policy, se2_extent(tag, &[g]))?.eval(&g)?;
    let labels = coord_labels(tag, coords.len());
    let text = match cfg.format {
        OutputFormat::Csv => {
            let mut s = format!("group,{},t,value,tail_estimate,imag_residual\n", labels.join(","));
            let cs: Vec<String> = coords.iter().map(|c| fmt17(*c)).collect();
            s += &format!(
                "{tag},{},{},{},{},{}\n",
                cs.join(","),
                fmt17(t),
                fmt17(k.value),
                fmt17(k.tail_estimate),
                fmt17(k.imag_residual)
            );
            s
        }
        OutputFormat::Json => {
            let doc = json!({
                "command": "eval",
                "group": tag.as_str(),
                "coords": labels.iter().cloned().zip(coords.iter().copied()).map(|(l, c)| json!({"name": l, "value": c})).collect::<Vec<_>>(),
                "t": t,
                "result": kernel_json(&k),
            });
            pretty(&doc)
        }
    };
    Ok(Outcome { text, success: true })
}

fn kernel_json(k: &KernelResult) -> Value {
    json!({
        "value": k.value,
        "imag_residual": k.imag_residual,
        "tail_estimate": k.tail_estimate,
        "policy_used": k.policy_used,
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialise");
    s.push('\n');
    s
}

/// Worker pool honouring [`THREADS_ENV`].
fn pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize =
            v.trim().parse().ok().filter(|n| *n > 0).ok_or_else(|| {
                Error::Input(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))
            })?;
        b = b.num_threads(n);
    }
    b.build()
        .map_err(|e| Error::Numeric(format!("cannot start worker threads: {e}")))
}

/// Lattice points in row order: first range slowest.
fn lattice(base: &[f64], ranges: &[GridRange]) -> Result<Vec<Vec<f64>>> {
    let mut pts = vec![base.to_vec()];
    for r in ranges {
        if r.coord >= base.len() {
            return Err(Error::Input(format!(
                "range axis {} beyond the {} coordinates",
                r.coord + 1,
                base.len()
            )));
        }
        let vals = r.values();
        pts = pts
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |v| {
                    let mut q = p.clone();
                    q[r.coord] = *v;
                    q
                })
            })
            .collect();
    }
    Ok(pts)
}

fn grid(cfg: &RunConfig) -> Result<Outcome> {
    let tag = need_group(cfg)?;
    if cfg.times.is_empty() {
        return Err(Error::Input("--time is required".into()));
    }
    if cfg.ranges.is_empty() {
        return Err(Error::Input("grid needs at least one --range".into()));
    }
    let base = cfg.point.clone().unwrap_or_else(|| vec![0.0; 3]);
    let coords = lattice(&base, &cfg.ranges)?;
    let elems = coords
        .iter()
        .map(|c| GroupElement::from_coords(tag, c))
        .collect::<Result<Vec<_>>>()?;
    let extent = se2_extent(tag, &elems);
    let pool = pool()?;
    let mut rows = Vec::with_capacity(coords.len() * cfg.times.len());
    for &t in &cfg.times {
        let k = KernelEvaluator::new(tag, t, &cfg.policy, extent)?;
        // indexed collect keeps grid order whatever the completion order
        let vals: Vec<Result<KernelResult>> = pool.install(|| elems.par_iter().map(|g| k.eval(g)).collect());
        for (c, v) in coords.iter().zip(vals) {
            rows.push((c, t, v?));
        }
    }
    let labels = coord_labels(tag, base.len());
    let text = match cfg.format {
        OutputFormat::Csv => {
            let mut s = format!("group,{},t,value,tail_estimate\n", labels.join(","));
            for (c, t, k) in &rows {
                let cs: Vec<String> = c.iter().map(|x| fmt17(*x)).collect();
                s += &format!(
                    "{tag},{},{},{},{}\n",
                    cs.join(","),
                    fmt17(*t),
                    fmt17(k.value),
                    fmt17(k.tail_estimate)
                );
            }
            s
        }
        OutputFormat::Json => {
            let mut columns: Vec<String> = labels.clone();
            columns.extend(["t", "value", "tail_estimate"].map(String::from));
            let data: Vec<Value> = rows
                .iter()
                .map(|(c, t, k)| {
                    let mut r: Vec<f64> = c.to_vec();
                    r.extend([*t, k.value, k.tail_estimate]);
                    json!(r)
                })
                .collect();
            pretty(&json!({"command": "grid", "group": tag.as_str(), "columns": columns, "rows": data}))
        }
    };
    Ok(Outcome { text, success: true })
}

fn verify(cfg: &RunConfig) -> Result<Outcome> {
    let mut reports: Vec<ResidualReport> = run_suite(&cfg.policy)?;
    if let Some(t) = cfg.tol {
        reports = reports.into_iter().map(|r| r.with_tolerance(t)).collect();
    }
    let success = reports.iter().all(|r| r.passed);
    let text = match cfg.format {
        OutputFormat::Json => pretty(&json!({"command": "verify", "passed": success, "reports": reports})),
        OutputFormat::Csv => {
            let mut s = String::from("name,value,tolerance,passed,group,t,note\n");
            for r in &reports {
                s += &format!(
                    "{},{},{},{},{},{},\"{}\"\n",
                    r.name,
                    fmt17(r.value),
                    fmt17(r.tolerance),
                    r.passed,
                    r.context.group.as_deref().unwrap_or(""),
                    r.context.t.map(fmt17).unwrap_or_default(),
                    r.context.note.replace('"', "'")
                );
            }
            s
        }
    };
    Ok(Outcome { text, success })
}

fn popp(cfg: &RunConfig) -> Result<Outcome> {
    let path = cfg
        .frame_file
        .as_ref()
        .ok_or_else(|| Error::Input("popp needs --frame-file".into()))?;
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    let parsed = parse_frame_file(&text)?;
    let (growth, density, coeffs, point, unimodular) = match &parsed.document {
        FrameDocument::Frame(f) => {
            let q =
                cfg.point.clone().or(parsed.point.clone()).ok_or_else(|| {
                    Error::Input("popp on a frame needs a point (--point or `point =`)".into())
                })?;
            let data = f.point_data(&q)?;
            let growth = data.growth_vector()?;
            let density = data.popp_density()?;
            let coeffs = laplacian_coeffs_fd(f, &q, DEFAULT_FD_STEP)?;
            (growth, Some(density), coeffs, Some(q), None)
        }
        FrameDocument::Algebra(spec) => (
            spec.growth_vector()?,
            None,
            spec.laplacian_first_order(),
            None,
            Some(spec.is_unimodular()),
        ),
    };
    let out = match cfg.format {
        OutputFormat::Csv => {
            let mut s = String::from("quantity,index,value\n");
            for (i, g) in growth.iter().enumerate() {
                s += &format!("growth,{},{g}\n", i + 1);
            }
            if let Some(d) = density {
                s += &format!("density,,{}\n", fmt17(d));
            }
            if let Some(u) = unimodular {
                s += &format!("unimodular,,{u}\n");
            }
            for (i, c) in coeffs.iter().enumerate() {
                s += &format!("coefficient,{},{}\n", i + 1, fmt17(*c));
            }
            s
        }
        OutputFormat::Json => pretty(&json!({
            "command": "popp",
            "point": point,
            "growth_vector": growth,
            "density": density,
            "unimodular": unimodular,
            "first_order_coefficients": coeffs,
        })),
    };
    Ok(Outcome {
        text: out,
        success: true,
    })
}

fn info_cmd(cfg: &RunConfig) -> Result<Outcome> {
    let tags: Vec<GroupTag> = match cfg.group {
        Some(t) => vec![t],
        None => GroupTag::ALL.to_vec(),
    };
    let mut rows = Vec::new();
    for t in tags {
        rows.extend(eigenvalue_table(t)?);
    }
    let text = match cfg.format {
        OutputFormat::Csv => {
            let mut s = String::from("group,dual,index,eigenvalue\n");
            for r in &rows {
                s += &format!("{},{},{},{}\n", r.group, r.dual, r.index, fmt17(r.eigenvalue));
            }
            s
        }
        OutputFormat::Json => pretty(&json!({"command": "info", "rows": rows})),
    };
    Ok(Outcome { text, success: true })
}
