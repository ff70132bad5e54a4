//! The `cyclewalk` command-line front end.
//!
//! Exit codes: 0 success, 1 domain error (invalid walk parameters, unmet numeric
//! preconditions), 2 failed internal consistency check, 64 usage error.

mod render;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::RationalMatrix;
use crate::error::Error;
use crate::period::{decide_period, PeriodResult};
use crate::spectral::{full_charpoly, sector_charpoly, CharPolyBundle, CycloPolynomial};
use crate::verify::{check_names, run_selected, CheckOutcome, Suite};
use crate::walk::{evolution_matrix, Family, WalkSpec};
use crate::zeta::{
    absolute_zeta_descriptor, eval_zf_mellin, eval_zf_series, recognize_kurokawa, walk_zeta,
    AbsZetaDescriptor, KurokawaForm, RationalFunction,
};

pub use render::render_table;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable holding the worker count when `--threads` is absent.
pub const THREADS_ENV: &str = "CYCLEWALK_THREADS";

#[derive(Parser, Debug)]
#[command(name = "cyclewalk", version, about = "Exact periods and zeta functions of Grover walks on cycles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Worker threads; falls back to CYCLEWALK_THREADS, then to the number of CPUs.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the exact evolution operator U.
    DumpU(WalkArgs),
    /// Characteristic polynomial of U, sector by sector.
    Charpoly {
        #[command(flatten)]
        walk: WalkArgs,
        /// Only this momentum sector.
        #[arg(long)]
        sector: Option<u32>,
    },
    /// Decide the period of U.
    Period(WalkArgs),
    /// Decide periods over a grid of walks.
    Sweep {
        #[arg(long, default_value = "both")]
        family: FamilySelection,
        /// Comma-separated odd state counts.
        #[arg(long, value_delimiter = ',', required = true)]
        states: Vec<u32>,
        /// Inclusive range `a..b`, or a single value.
        #[arg(long)]
        vertices: VertexRange,
    },
    /// The walk zeta function 1/det(I - uU).
    Zeta(WalkArgs),
    /// Absolute-zeta descriptor of the walk with N = L.
    Abszeta {
        #[arg(long, default_value = "M")]
        family: Family,
        #[arg(long)]
        states: u32,
        /// Compare the Mellin integral with the subset series numerically.
        #[arg(long)]
        verify_mellin: bool,
        #[arg(long, default_value_t = 6.0)]
        w: f64,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// Run the property suite and print a pass/fail report.
    Verify {
        /// Only orthogonality, cyclotomic identities, field axioms and the float shadow.
        #[arg(long)]
        structural: bool,
        /// Run only the named check; may be repeated.
        #[arg(long = "check")]
        checks: Vec<String>,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct WalkArgs {
    #[arg(long)]
    family: Family,
    #[arg(long)]
    states: u32,
    #[arg(long)]
    vertices: u32,
}

impl WalkArgs {
    fn spec(&self) -> Result<WalkSpec, Error> {
        WalkSpec::new(self.family, self.states, self.vertices)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilySelection {
    M,
    F,
    #[serde(rename = "both")]
    Both,
}

impl FamilySelection {
    fn families(self) -> Vec<Family> {
        match self {
            FamilySelection::M => vec![Family::M],
            FamilySelection::F => vec![Family::F],
            FamilySelection::Both => vec![Family::M, Family::F],
        }
    }
}

impl FromStr for FamilySelection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "M" | "m" => Ok(FamilySelection::M),
            "F" | "f" => Ok(FamilySelection::F),
            "both" => Ok(FamilySelection::Both),
            _ => Err(format!("expected M, F or both, got {s:?}")),
        }
    }
}

/// Inclusive range of cycle lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRange {
    pub start: u32,
    pub end: u32,
}

impl FromStr for VertexRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| format!("malformed vertex range {s:?}"))
        };
        let (start, end) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if start > end {
            return Err(format!("empty vertex range {s:?}"));
        }
        Ok(VertexRange { start, end })
    }
}

impl fmt::Display for VertexRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

/// Echo of the parsed invocation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub states: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vertices: Option<VertexRange>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sector: Option<u32>,
    pub format: Format,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub parallelism: usize,
}

/// One result record. Exact quantities are strings; only numeric checks carry floats.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)]
pub enum ItemResult {
    Operator {
        spec: WalkSpec,
        dimension: usize,
        matrix: RationalMatrix,
    },
    Charpoly(CharPolyBundle),
    Sector {
        spec: WalkSpec,
        sector: u32,
        charpoly: CycloPolynomial,
    },
    Period(PeriodResult),
    Zeta {
        spec: WalkSpec,
        zeta: RationalFunction,
        direct_checked: bool,
        kurokawa: Option<KurokawaForm>,
    },
    AbsZeta {
        spec: WalkSpec,
        form: KurokawaForm,
        admissible: bool,
        descriptor: Option<AbsZetaDescriptor>,
        rendered: Option<String>,
    },
    Mellin {
        form: KurokawaForm,
        w: f64,
        s: f64,
        tol: f64,
        mellin: f64,
        series: f64,
        difference: f64,
        passed: bool,
    },
    Check(CheckOutcome),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timing {
    pub item: usize,
    pub micros: u64,
}

/// The JSON document printed by every command.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub version: String,
    pub config: RunConfig,
    pub results: Vec<ItemResult>,
    pub timings: Vec<Timing>,
}

/// What a finished invocation prints and returns.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(msg: impl fmt::Display) -> Self {
        Outcome {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("{msg}"),
        }
    }

    fn from_error(e: &Error) -> Self {
        Outcome {
            code: if e.is_internal() { EXIT_INTERNAL } else { EXIT_DOMAIN },
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        }
    }
}

/// Parses `args` (including the program name), runs the command and renders its output.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        code: EXIT_OK,
                        stdout: text,
                        stderr: String::new(),
                    }
                }
                _ => Outcome::usage(text),
            };
        }
    };
    let threads = match resolve_threads(cli.threads) {
        Ok(t) => t,
        Err(msg) => return Outcome::usage(msg),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => return Outcome::usage(format!("cannot start {threads} workers: {e}\n")),
    };
    let config = echo(&cli, threads);
    if cli.format == Format::Csv && !matches!(cli.command, Command::Period(_) | Command::Sweep { .. }) {
        return Outcome::usage(format!(
            "csv output is only available for period and sweep, not {}\n",
            config.command
        ));
    }
    let executed = pool.install(|| execute(&cli.command));
    let (items, timings, passed) = match executed {
        Ok(x) => x,
        Err(e) => return Outcome::from_error(&e),
    };
    let envelope = ResultEnvelope {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config,
        results: items,
        timings,
    };
    let text = match render::render(&envelope, cli.format) {
        Ok(t) => t,
        Err(e) => return Outcome::from_error(&e),
    };
    let code = if passed { EXIT_OK } else { EXIT_INTERNAL };
    match &cli.output {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome {
                code,
                stdout: String::new(),
                stderr: String::new(),
            },
            Err(e) => Outcome {
                code: EXIT_DOMAIN,
                stdout: String::new(),
                stderr: format!("error: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome {
            code,
            stdout: text,
            stderr: String::new(),
        },
    }
}

fn resolve_threads(flag: Option<usize>) -> Result<usize, String> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(THREADS_ENV) {
            Ok(v) => v
                .trim()
                .parse()
                .map_err(|_| format!("{THREADS_ENV} must be a positive integer, got {v:?}\n"))?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if n == 0 {
        return Err("the worker count must be at least 1\n".into());
    }
    Ok(n)
}

fn echo(cli: &Cli, parallelism: usize) -> RunConfig {
    let mut c = RunConfig {
        command: String::new(),
        family: None,
        states: Vec::new(),
        vertices: None,
        sector: None,
        format: cli.format,
        output: cli.output.clone(),
        tolerance: None,
        parallelism,
    };
    let walk = |c: &mut RunConfig, w: &WalkArgs| {
        c.family = Some(w.family.to_string());
        c.states = vec![w.states];
        c.vertices = Some(VertexRange {
            start: w.vertices,
            end: w.vertices,
        });
    };
    match &cli.command {
        Command::DumpU(w) => {
            c.command = "dump-u".into();
            walk(&mut c, w);
        }
        Command::Charpoly { walk: w, sector } => {
            c.command = "charpoly".into();
            walk(&mut c, w);
            c.sector = *sector;
        }
        Command::Period(w) => {
            c.command = "period".into();
            walk(&mut c, w);
        }
        Command::Zeta(w) => {
            c.command = "zeta".into();
            walk(&mut c, w);
        }
        Command::Sweep {
            family,
            states,
            vertices,
        } => {
            c.command = "sweep".into();
            c.family = Some(
                match family {
                    FamilySelection::M => "M",
                    FamilySelection::F => "F",
                    FamilySelection::Both => "both",
                }
                .into(),
            );
            c.states = states.clone();
            c.vertices = Some(*vertices);
        }
        Command::Abszeta {
            family,
            states,
            verify_mellin,
            tol,
            ..
        } => {
            c.command = "abszeta".into();
            c.family = Some(family.to_string());
            c.states = vec![*states];
            c.tolerance = verify_mellin.then_some(*tol);
        }
        Command::Verify { .. } => c.command = "verify".into(),
    }
    c
}

type Executed = (Vec<ItemResult>, Vec<Timing>, bool);

fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_micros() as u64)
}

fn single(item: ItemResult, micros: u64) -> Executed {
    (vec![item], vec![Timing { item: 0, micros }], true)
}

fn execute(command: &Command) -> Result<Executed, Error> {
    match command {
        Command::DumpU(w) => {
            let spec = w.spec()?;
            let (u, t) = timed(|| evolution_matrix(&spec));
            Ok(single(
                ItemResult::Operator {
                    spec,
                    dimension: u.dimension(),
                    matrix: u.matrix().clone(),
                },
                t,
            ))
        }
        Command::Charpoly { walk: w, sector } => {
            let spec = w.spec()?;
            match sector {
                Some(k) => {
                    if *k >= spec.vertices() {
                        return Err(Error::OutOfRange {
                            what: "sector",
                            value: *k as i64,
                        });
                    }
                    let (p, t) = timed(|| sector_charpoly(&spec, *k));
                    Ok(single(
                        ItemResult::Sector {
                            spec,
                            sector: *k,
                            charpoly: p?,
                        },
                        t,
                    ))
                }
                None => {
                    let (b, t) = timed(|| full_charpoly(&spec));
                    Ok(single(ItemResult::Charpoly(b?), t))
                }
            }
        }
        Command::Period(w) => {
            let spec = w.spec()?;
            let (r, t) = timed(|| decide_period(&spec));
            Ok(single(ItemResult::Period(r?), t))
        }
        Command::Sweep {
            family,
            states,
            vertices,
        } => sweep(*family, states, *vertices),
        Command::Zeta(w) => {
            let spec = w.spec()?;
            let (z, t) = timed(|| walk_zeta(&spec));
            let z = z?;
            let zeta = z.as_rational_function();
            Ok(single(
                ItemResult::Zeta {
                    spec,
                    kurokawa: recognize_kurokawa(&zeta),
                    zeta,
                    direct_checked: z.direct_checked,
                },
                t,
            ))
        }
        Command::Abszeta {
            family,
            states,
            verify_mellin,
            w,
            s,
            tol,
        } => abszeta(*family, *states, verify_mellin.then_some((*w, *s, *tol))),
        Command::Verify { structural, checks } => {
            let suite = if *structural {
                Suite::Structural
            } else {
                Suite::Full
            };
            let known = check_names(suite);
            if let Some(bad) = checks.iter().find(|c| !known.contains(&c.as_str())) {
                return Err(Error::Precondition(format!(
                    "unknown check {bad:?}; available: {}",
                    known.join(", ")
                )));
            }
            let outcomes = run_selected(suite, checks);
            let passed = outcomes.iter().all(|(o, _)| o.passed);
            let timings = outcomes
                .iter()
                .enumerate()
                .map(|(item, (_, d))| Timing {
                    item,
                    micros: d.as_micros() as u64,
                })
                .collect();
            let items = outcomes
                .into_iter()
                .map(|(o, _)| ItemResult::Check(o))
                .collect();
            Ok((items, timings, passed))
        }
    }
}

fn sweep(family: FamilySelection, states: &[u32], vertices: VertexRange) -> Result<Executed, Error> {
    let mut specs = Vec::new();
    for f in family.families() {
        for &l in states {
            for n in vertices.start..=vertices.end {
                specs.push(WalkSpec::new(f, l, n)?);
            }
        }
    }
    specs.sort();
    specs.dedup();
    let cells = specs
        .par_iter()
        .map(|s| {
            let (r, t) = timed(|| decide_period(s));
            r.map(|r| (r, t))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let timings = cells
        .iter()
        .enumerate()
        .map(|(item, (_, micros))| Timing {
            item,
            micros: *micros,
        })
        .collect();
    let items = cells.into_iter().map(|(r, _)| ItemResult::Period(r)).collect();
    Ok((items, timings, true))
}

fn abszeta(family: Family, states: u32, mellin: Option<(f64, f64, f64)>) -> Result<Executed, Error> {
    let spec = WalkSpec::new(family, states, states)?;
    let start = Instant::now();
    let zeta = walk_zeta(&spec)?.as_rational_function();
    let form = recognize_kurokawa(&zeta).ok_or_else(|| {
        Error::Internal(format!("the zeta function of {spec} is not a Kurokawa form"))
    })?;
    let admissible = form.is_admissible();
    let descriptor = if admissible {
        Some(absolute_zeta_descriptor(&form)?)
    } else {
        None
    };
    let mut items = vec![ItemResult::AbsZeta {
        spec,
        rendered: descriptor.as_ref().map(AbsZetaDescriptor::render),
        admissible,
        descriptor,
        form: form.clone(),
    }];
    let mut timings = vec![Timing {
        item: 0,
        micros: start.elapsed().as_micros() as u64,
    }];
    let mut passed = true;
    if let Some((w, s, tol)) = mellin {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::Precondition(format!("tol must be positive, got {tol}")));
        }
        let start = Instant::now();
        let integral = eval_zf_mellin(&form, w, s, tol)?;
        let series = eval_zf_series(&form, w, s, tol)?;
        let difference = (integral - series).abs();
        passed = difference < 2.0 * tol;
        items.push(ItemResult::Mellin {
            form,
            w,
            s,
            tol,
            mellin: integral,
            series,
            difference,
            passed,
        });
        timings.push(Timing {
            item: 1,
            micros: start.elapsed().as_micros() as u64,
        });
    }
    Ok((items, timings, passed))
}
