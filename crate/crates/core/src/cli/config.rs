//! Flags, the flat config file, and their merge into a [`RunConfig`].

use std::collections::BTreeMap;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::groups::GroupTag;
use crate::policy::TruncationPolicy;

#[derive(Debug, Parser)]
#[command(
    name = "hypoheat",
    version,
    about = "Hypoelliptic heat kernels on H2, SU(2), SO(3), SL(2) and SE(2)",
    after_help = "A config file (--config) holds `key = value` lines named like the flags, \
plus `command = <subcommand>`; flags given on the command line win."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<CommandKind>,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CommandKind {
    /// Kernel value at one point
    Eval,
    /// Kernel values on a lattice of points, one row per point
    Grid,
    /// Run the verification suite; exit status 0 iff every check passes
    Verify,
    /// Growth vector, Popp density and Laplacian coefficients from a frame file
    Popp,
    /// Eigenvalue tables of the Fourier-side Laplacians
    Info,
}

impl std::str::FromStr for CommandKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "eval" => Ok(CommandKind::Eval),
            "grid" => Ok(CommandKind::Grid),
            "verify" => Ok(CommandKind::Verify),
            "popp" => Ok(CommandKind::Popp),
            "info" => Ok(CommandKind::Info),
            other => Err(Error::Input(format!("unknown command `{other}`"))),
        }
    }
}

#[derive(Debug, Default, Clone, Args)]
pub struct Flags {
    /// Flat `key = value` file with defaults for any flag
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// h2 | su2 | so3 | sl2 | se2
    #[arg(long, global = true)]
    pub group: Option<String>,
    /// Comma-separated coordinates (see README for each group)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub point: Option<String>,
    /// Time, or comma-separated times for `grid`
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub time: Option<String>,
    /// Lattice axis `DIM:LO:HI:N`; DIM is a coordinate name or 1-based index
    #[arg(long, global = true, allow_hyphen_values = true, value_name = "DIM:LO:HI:N")]
    pub range: Vec<String>,
    /// Absolute tolerance; for `verify` it replaces every check's tolerance
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Upper end of the continuous dual integral (λ or v)
    #[arg(long = "lambda-max", global = true, allow_hyphen_values = true)]
    pub lambda_max: Option<f64>,
    /// Cap on discrete series truncation
    #[arg(long = "series-cut", global = true)]
    pub series_cut: Option<usize>,
    /// csv | json
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Write output here instead of stdout
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    /// Frame or algebra document for `popp`
    #[arg(long = "frame-file", global = true, value_name = "FILE")]
    pub frame_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// One lattice axis: `n` equispaced values from `lo` to `hi` on
/// coordinate `coord`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRange {
    pub coord: usize,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridRange {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        let step = (self.hi - self.lo) / (self.n - 1) as f64;
        (0..self.n).map(|i| self.lo + i as f64 * step).collect()
    }

    fn parse(s: &str, group: Option<GroupTag>) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 4 {
            return Err(Error::Input(format!("range `{s}` is not DIM:LO:HI:N")));
        }
        let coord = match parts[0].parse::<usize>() {
            Ok(i) if i >= 1 => i - 1,
            Ok(_) => return Err(Error::Input("range indices start at 1".into())),
            Err(_) => {
                let tag = group.ok_or_else(|| Error::Input("named range axes need --group".into()))?;
                tag.coord_names()
                    .iter()
                    .position(|n| *n == parts[0])
                    .ok_or_else(|| Error::Input(format!("{tag} has no coordinate `{}`", parts[0])))?
            }
        };
        let lo = parse_f64(parts[1], "range")?;
        let hi = parse_f64(parts[2], "range")?;
        let n: usize = parts[3]
            .parse()
            .map_err(|_| Error::Input(format!("range count `{}` is not a positive integer", parts[3])))?;
        if n == 0 {
            return Err(Error::Input("range count must be positive".into()));
        }
        Ok(Self { coord, lo, hi, n })
    }
}

/// Fully resolved run request.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub group: Option<GroupTag>,
    pub point: Option<Vec<f64>>,
    pub times: Vec<f64>,
    pub ranges: Vec<GridRange>,
    pub tol: Option<f64>,
    pub policy: TruncationPolicy,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub frame_file: Option<PathBuf>,
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Input(format!("{what}: `{s}` is not a number")))
}

fn parse_f64_list(s: &str, what: &str) -> Result<Vec<f64>> {
    s.split(',').map(|p| parse_f64(p, what)).collect()
}

/// Reads a flat config file: `key = value` per line, `#` comments,
/// repeated keys allowed only for `range`.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, Vec<String>>> {
    const KEYS: &[&str] = &[
        "command",
        "group",
        "point",
        "time",
        "range",
        "tol",
        "lambda-max",
        "series-cut",
        "format",
        "out",
        "frame-file",
    ];
    let mut map: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| Error::Input(format!("config line {}: expected `key = value`", k + 1)))?;
        let key = key.trim().replace('_', "-");
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::Input(format!(
                "config line {}: unknown key `{key}`",
                k + 1
            )));
        }
        let entry = map.entry(key.clone()).or_default();
        if !entry.is_empty() && key != "range" {
            return Err(Error::Input(format!(
                "config line {}: `{key}` given twice",
                k + 1
            )));
        }
        entry.push(value.trim().to_string());
    }
    Ok(map)
}

impl RunConfig {
    /// Merges flags over the config file named by `--config`, if any.
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let file = match &cli.flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Input(format!("cannot read config {}: {e}", path.display())))?;
                parse_config_file(&text)?
            }
            None => BTreeMap::new(),
        };
        Self::merge(cli.command, &cli.flags, &file)
    }

    pub fn merge(
        command: Option<CommandKind>,
        flags: &Flags,
        file: &BTreeMap<String, Vec<String>>,
    ) -> Result<Self> {
        let from_file = |k: &str| file.get(k).and_then(|v| v.first()).cloned();
        let pick = |flag: &Option<String>, k: &str| flag.clone().or_else(|| from_file(k));

        let command = match command {
            Some(c) => c,
            None => from_file("command")
                .ok_or_else(|| Error::Input("no subcommand given".into()))?
                .parse()?,
        };
        let group = pick(&flags.group, "group")
            .map(|g| g.parse::<GroupTag>())
            .transpose()?;
        let point = pick(&flags.point, "point")
            .map(|p| parse_f64_list(&p, "point"))
            .transpose()?;
        let times = match pick(&flags.time, "time") {
            Some(t) => parse_f64_list(&t, "time")?,
            None => Vec::new(),
        };
        if let Some(t) = times.iter().find(|t| !(**t > 0.0 && t.is_finite())) {
            return Err(Error::Input(format!("time must be positive and finite, got {t}")));
        }
        let range_src: Vec<String> = if flags.range.is_empty() {
            file.get("range").cloned().unwrap_or_default()
        } else {
            flags.range.clone()
        };
        let ranges = range_src
            .iter()
            .map(|r| GridRange::parse(r, group))
            .collect::<Result<Vec<_>>>()?;
        let tol = match flags.tol {
            Some(t) => Some(t),
            None => from_file("tol").map(|s| parse_f64(&s, "tol")).transpose()?,
        };
        let lambda_max = match flags.lambda_max {
            Some(l) => Some(l),
            None => from_file("lambda-max")
                .map(|s| parse_f64(&s, "lambda-max"))
                .transpose()?,
        };
        let series_cut = match flags.series_cut {
            Some(n) => Some(n),
            None => from_file("series-cut")
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| Error::Input(format!("series-cut: `{s}`")))
                })
                .transpose()?,
        };
        let format = match pick(&flags.format, "format").as_deref() {
            Some("csv") => OutputFormat::Csv,
            Some("json") => OutputFormat::Json,
            Some(other) => return Err(Error::Input(format!("format must be csv or json, got `{other}`"))),
            None if command == CommandKind::Verify => OutputFormat::Json,
            None => OutputFormat::Csv,
        };
        let out = flags.out.clone().or_else(|| from_file("out").map(PathBuf::from));
        let frame_file = flags
            .frame_file
            .clone()
            .or_else(|| from_file("frame-file").map(PathBuf::from));

        let mut policy = TruncationPolicy::default();
        if command != CommandKind::Verify {
            if let Some(t) = tol {
                policy = policy.with_abs_tol(t);
            }
        }
        if let Some(l) = lambda_max {
            policy = policy.with_spectral_box(l);
        }
        if let Some(n) = series_cut {
            policy = policy.with_series_cut(n);
        }
        policy.validate()?;
        if let Some(t) = tol {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::Input(format!("tol must be finite and ≥ 0, got {t}")));
            }
        }

        Ok(Self {
            command,
            group,
            point,
            times,
            ranges,
            tol,
            policy,
            format,
            out,
            frame_file,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> Flags {
        Flags::default()
    }

    #[test]
    fn flags_win_over_file() {
        let file = parse_config_file("command = eval\ngroup = su2\ntime = 0.5\npoint = 0.1, 0, 0\n").unwrap();
        let mut f = flags();
        f.time = Some("2".into());
        let cfg = RunConfig::merge(None, &f, &file).unwrap();
        assert_eq!(cfg.command, CommandKind::Eval);
        assert_eq!(cfg.group, Some(GroupTag::SU2));
        assert_eq!(cfg.times, vec![2.0]);
        assert_eq!(cfg.point, Some(vec![0.1, 0.0, 0.0]));
    }

    #[test]
    fn ranges_by_name_and_index() {
        let file = parse_config_file("range = x:-1:1:3\nrange = 3:0:1:2\n").unwrap();
        let mut f = flags();
        f.group = Some("h2".into());
        let cfg = RunConfig::merge(Some(CommandKind::Grid), &f, &file).unwrap();
        assert_eq!(
            cfg.ranges[0],
            GridRange {
                coord: 0,
                lo: -1.0,
                hi: 1.0,
                n: 3
            }
        );
        assert_eq!(cfg.ranges[0].values(), vec![-1.0, 0.0, 1.0]);
        assert_eq!(cfg.ranges[1].coord, 2);
    }

    #[test]
    fn rejects_bad_values() {
        let mut f = flags();
        f.time = Some("-1".into());
        assert!(RunConfig::merge(Some(CommandKind::Eval), &f, &BTreeMap::new()).is_err());
        let mut f = flags();
        f.range = vec!["x:0:1:0".into()];
        f.group = Some("h2".into());
        assert!(RunConfig::merge(Some(CommandKind::Grid), &f, &BTreeMap::new()).is_err());
        assert!(parse_config_file("nonsense = 1").is_err());
        assert!(parse_config_file("group = h2\ngroup = su2").is_err());
        assert!(RunConfig::merge(None, &flags(), &BTreeMap::new()).is_err());
    }
}
