//! Command-line front-end for `chebdyn`.
//!
//! [`run`] parses arguments, resolves a [`RunConfig`], runs one subcommand
//! inside a sized worker pool and writes its artifacts, a findings file and a
//! manifest into the output directory. [`accept`] runs the whole acceptance
//! suite.

pub mod accept;
pub mod checks;
pub mod config;
mod error;
pub mod report;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use chebdyn::ergodic::{EtaMethod, ItineraryWord};
use chebdyn::render::{GridSpec, Palette, Viewport};
use clap::{Args, Parser, Subcommand};

pub use accept::{accept, AcceptOptions, AcceptReport, CriterionResult};
pub use config::RunConfig;
pub use error::CliError;
pub use report::{Artifact, Finding, Outcome, Status};

#[derive(Debug, Parser)]
#[command(name = "chebdyn", version, about = "Dynamics of the perturbed Chebyshev family f_t")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
enum Command {
    /// Exact algebraic degrees d(f^n)
    Degrees,
    /// Follow exceptional curves and look for indeterminacy hits
    Stability,
    /// Count preimages of random targets
    Topdeg,
    /// Plane degrees of the orbit of the exceptional curve A3 under f_t
    CurveGrowth,
    /// Two-form weights, Q fixed, rho equation and the Markov property
    VerifyFamily,
    /// Forward itinerary of a real point of U
    Itinerary,
    /// A point of U with a prescribed itinerary
    Realize,
    /// Orbits of the repelling measure
    SampleMu,
    /// Orbits of the saddle measure
    SampleNu,
    /// Lyapunov exponents along sampled orbits
    Lyapunov,
    /// Mass of the invariant two-form on U
    EtaMass,
    /// Entropy lower bound from realized cylinders
    EntropyBound,
    /// Basins of the attracting fixed points of f_t
    RenderBasins,
    /// Markov regions of U and their preimages
    RenderPartition,
    /// Basins and Julia set of the boundary map r
    RenderJulia,
    /// Run the full acceptance suite
    Accept,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Degrees => "degrees",
            Command::Stability => "stability",
            Command::Topdeg => "topdeg",
            Command::CurveGrowth => "curve-growth",
            Command::VerifyFamily => "verify-family",
            Command::Itinerary => "itinerary",
            Command::Realize => "realize",
            Command::SampleMu => "sample-mu",
            Command::SampleNu => "sample-nu",
            Command::Lyapunov => "lyapunov",
            Command::EtaMass => "eta-mass",
            Command::EntropyBound => "entropy-bound",
            Command::RenderBasins => "render-basins",
            Command::RenderPartition => "render-partition",
            Command::RenderJulia => "render-julia",
            Command::Accept => "accept",
        }
    }

    fn defaults(self) -> &'static [(&'static str, &'static str)] {
        match self {
            Command::Degrees => &[("map", "f"), ("depth", "2"), ("max-degree", "4096")],
            Command::Stability => &[("map", "f"), ("depth", "12")],
            Command::Topdeg => &[("map", "f"), ("samples", "100")],
            Command::CurveGrowth => &[("t", "1/2"), ("depth", "4")],
            Command::VerifyFamily => &[("t", "1/2"), ("samples", "10000"), ("markov-samples", "1000")],
            Command::Itinerary => &[("t", "1/2"), ("length", "10")],
            Command::Realize => &[("t", "1/2")],
            Command::SampleMu => &[("t", "1/20"), ("samples", "1000"), ("burn-in", "30"), ("length", "1")],
            Command::SampleNu => &[("t", "1/20"), ("samples", "1000"), ("history-depth", "20"), ("length", "1")],
            Command::Lyapunov => &[
                ("t", "1/20"),
                ("measure", "mu"),
                ("samples", "1"),
                ("length", "10000"),
                ("burn-in", "50"),
                ("history-depth", "20"),
            ],
            Command::EtaMass => &[("method", "adaptive"), ("depth", "16"), ("tol", "0.01"), ("samples", "1000000")],
            Command::EntropyBound => &[("t", "1/2"), ("depth", "6")],
            Command::RenderBasins => &[("t", "1"), ("size", "512x512"), ("iterations", "200"), ("viewport", "-1.25,1.25,-1.25,1.25")],
            Command::RenderPartition => &[("t", "1"), ("size", "512x512"), ("depth", "0"), ("viewport", "-1.25,1.25,-1.25,1.25")],
            Command::RenderJulia => &[("size", "800x300"), ("iterations", "1000"), ("viewport", "-3.5,4.5,-1.5,1.5")],
            Command::Accept => &[("t", "1/20")],
        }
    }
}

#[derive(Clone, Debug, Default, Args)]
struct Options {
    /// Built-in map (g, h, f, ft) or a map file
    #[arg(long, global = true)]
    map: Option<String>,
    /// Family parameter, e.g. 1/20 or 0.05
    #[arg(long, global = true)]
    t: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Iteration depth, partition level or maximal quadrature level
    #[arg(long, global = true)]
    depth: Option<String>,
    #[arg(long, global = true)]
    samples: Option<String>,
    #[arg(long, global = true)]
    iterations: Option<String>,
    /// Orbit or itinerary length
    #[arg(long, global = true)]
    length: Option<String>,
    #[arg(long = "burn-in", global = true)]
    burn_in: Option<String>,
    #[arg(long = "history-depth", global = true)]
    history_depth: Option<String>,
    #[arg(long = "markov-samples", global = true)]
    markov_samples: Option<String>,
    /// Cap on unreduced degrees in exact compositions
    #[arg(long = "max-degree", global = true)]
    max_degree: Option<String>,
    /// `mu` or `nu`
    #[arg(long, global = true)]
    measure: Option<String>,
    /// `adaptive` or `monte-carlo`
    #[arg(long, global = true)]
    method: Option<String>,
    #[arg(long, global = true)]
    tol: Option<String>,
    /// Itinerary over 0..3, e.g. 0123
    #[arg(long, global = true)]
    word: Option<String>,
    /// Real adapted coordinates `a,b`
    #[arg(long, global = true, allow_hyphen_values = true)]
    point: Option<String>,
    /// `xmin,xmax,ymin,ymax`
    #[arg(long, global = true, allow_hyphen_values = true)]
    viewport: Option<String>,
    /// `WxH`
    #[arg(long, global = true)]
    size: Option<String>,
    /// Palette file of `code r g b` lines
    #[arg(long, global = true)]
    palette: Option<String>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<String>,
    /// Worker threads (default: available parallelism)
    #[arg(long, global = true)]
    threads: Option<String>,
    /// File of `key = value` lines overriding the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

impl Options {
    fn flags(&self) -> Vec<(&'static str, String)> {
        let all = [
            ("map", &self.map),
            ("t", &self.t),
            ("seed", &self.seed),
            ("depth", &self.depth),
            ("samples", &self.samples),
            ("iterations", &self.iterations),
            ("length", &self.length),
            ("burn-in", &self.burn_in),
            ("history-depth", &self.history_depth),
            ("markov-samples", &self.markov_samples),
            ("max-degree", &self.max_degree),
            ("measure", &self.measure),
            ("method", &self.method),
            ("tol", &self.tol),
            ("word", &self.word),
            ("point", &self.point),
            ("viewport", &self.viewport),
            ("size", &self.size),
            ("palette", &self.palette),
            ("out", &self.out),
            ("threads", &self.threads),
        ];
        all.into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
            .collect()
    }
}

fn grid(cfg: &RunConfig) -> Result<GridSpec, CliError> {
    let usage = |e: chebdyn::render::RenderError| CliError::usage(e.to_string());
    let vp: Viewport = cfg.require("viewport")?.parse().map_err(usage)?;
    let (w, h) = GridSpec::parse_size(cfg.require("size")?).map_err(usage)?;
    GridSpec::new(w, h, vp).map_err(usage)
}

fn palette(cfg: &RunConfig, fallback: Palette) -> Result<Palette, CliError> {
    let text = match cfg.get("palette") {
        Some(p) => Some(fs::read_to_string(p).map_err(|e| CliError::io(p, e))?),
        None => None,
    };
    checks::palette_or(text, fallback)
}

fn execute(cmd: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let seed = cfg.seed()?;
    match cmd {
        Command::Degrees => {
            let depth = cfg.usize("depth")? as u32;
            checks::degrees(&cfg.map()?, depth, cfg.usize("max-degree")? as u64, None)
        }
        Command::Stability => checks::stability(&cfg.map()?, cfg.usize("depth")?, true, 0),
        Command::Topdeg => checks::topdeg(&cfg.map()?, cfg.usize("samples")?, seed),
        Command::CurveGrowth => checks::curve_growth(&cfg.t()?, cfg.usize("depth")?),
        Command::VerifyFamily => {
            let t = cfg.t()?;
            let n = cfg.usize("samples")?;
            let mut out = Outcome::default();
            for map in [chebdyn::chebfam::f_map(), chebdyn::chebfam::g_map(), chebdyn::chebfam::h_map()] {
                merge(&mut out, checks::two_form(&map, n, seed)?);
            }
            merge(&mut out, checks::q_fixed(n, seed));
            merge(&mut out, checks::rho(n, seed));
            merge(&mut out, checks::markov(&t, cfg.usize("markov-samples")?, seed));
            let csv = report::findings_csv(&out.findings);
            out.file("verify_family.csv", csv);
            Ok(out)
        }
        Command::Itinerary => {
            let p = checks::parse_point(cfg.require("point")?)?;
            checks::itinerary_of(&cfg.t()?, p, cfg.usize("length")?)
        }
        Command::Realize => {
            let raw = cfg.require("word")?;
            let word: ItineraryWord = raw
                .parse()
                .map_err(|_| CliError::usage(format!("--word {raw}: expected symbols 0..3")))?;
            if word.is_empty() {
                return Err(CliError::usage("--word must not be empty"));
            }
            checks::realize(&cfg.t()?, &word)
        }
        Command::SampleMu => Ok(checks::mu_samples(
            &cfg.t()?,
            cfg.usize("samples")?,
            cfg.usize("burn-in")?,
            cfg.usize("length")?,
            seed,
        )?
        .0),
        Command::SampleNu => Ok(checks::nu_samples(
            &cfg.t()?,
            cfg.usize("samples")?,
            cfg.usize("history-depth")?,
            cfg.usize("length")?,
            seed,
        )?
        .0),
        Command::Lyapunov => {
            let t = cfg.t()?;
            let measure: checks::Measure = cfg.require("measure")?.parse()?;
            let (n, len) = (cfg.usize("samples")?, cfg.usize("length")?);
            let (mut out, recs) = match measure {
                checks::Measure::Mu => checks::mu_samples(&t, n, cfg.usize("burn-in")?, len, seed)?,
                checks::Measure::Nu => checks::nu_samples(&t, n, cfg.usize("history-depth")?, len, seed)?,
            };
            out.artifacts.clear();
            merge(&mut out, checks::lyapunov_signs(&recs, measure, seed)?);
            Ok(out)
        }
        Command::EtaMass => {
            let method = match cfg.require("method")? {
                "adaptive" => EtaMethod::Adaptive {
                    max_depth: cfg.usize("depth")? as u32,
                    tol: cfg.f64("tol")?,
                },
                "monte-carlo" => EtaMethod::MonteCarlo {
                    samples: cfg.usize("samples")?,
                    seed,
                },
                m => {
                    return Err(CliError::usage(format!(
                        "--method {m}: expected `adaptive` or `monte-carlo`"
                    )))
                }
            };
            checks::eta(method)
        }
        Command::EntropyBound => checks::entropy(&cfg.t()?, cfg.usize("depth")?),
        Command::RenderBasins => checks::basins_image(
            &cfg.t()?,
            &grid(cfg)?,
            cfg.usize("iterations")?,
            &palette(cfg, Palette::basins())?,
        ),
        Command::RenderPartition => checks::partition_image(
            &cfg.t()?,
            &grid(cfg)?,
            cfg.usize("depth")?,
            &palette(cfg, Palette::partition())?,
        ),
        Command::RenderJulia => checks::julia_image(
            &grid(cfg)?,
            cfg.usize("iterations")?,
            &palette(cfg, Palette::basins())?,
        ),
        Command::Accept => {
            let opts = AcceptOptions {
                t: cfg.t()?,
                seed,
                threads: cfg.threads()?,
            };
            Ok(accept(&opts).into_outcome())
        }
    }
}

fn merge(into: &mut Outcome, from: Outcome) {
    into.findings.extend(from.findings);
    into.artifacts.extend(from.artifacts);
    into.summary.extend(from.summary);
}

fn pool(threads: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::usage(format!("--threads {threads}: {e}")))
}

/// Runs one invocation and returns its exit code: 0 on success, 2 when a
/// mathematical check fails (see `findings.csv`), 1 on a usage error.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let cfg = match RunConfig::resolve(
        cli.command.name(),
        cli.command.defaults(),
        &cli.opts.flags(),
        cli.opts.config.as_deref(),
    ) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("chebdyn: {e}");
            return e.exit_code();
        }
    };
    let result = cfg
        .threads()
        .and_then(pool)
        .and_then(|p| p.install(|| execute(cli.command, &cfg)));
    let out_dir = cfg.out_dir();
    let (code, outcome) = match result {
        Ok(out) => (if out.passed() { 0 } else { 2 }, out),
        Err(e) if e.exit_code() == 1 => {
            eprintln!("chebdyn: {e}");
            return 1;
        }
        Err(e) => {
            eprintln!("chebdyn: {e}");
            let mut out = Outcome::default();
            out.check(Finding::new(cfg.command.clone(), "completed", e.to_string(), "", false));
            (2, out)
        }
    };
    for line in &outcome.summary {
        println!("{line}");
    }
    let written = write_outputs(&cfg, &args, &outcome, code, start);
    if let Err(e) = written {
        eprintln!("chebdyn: {e}");
        return 1;
    }
    if code == 2 {
        eprintln!(
            "chebdyn: a check failed; see {}",
            out_dir.join("findings.csv").display()
        );
    }
    code
}

fn write_outputs(
    cfg: &RunConfig,
    args: &[OsString],
    out: &Outcome,
    code: i32,
    start: Instant,
) -> Result<(), CliError> {
    let dir = cfg.out_dir();
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    for a in &out.artifacts {
        report::write_file(&dir, &a.name, &a.bytes)?;
    }
    let findings = dir.join("findings.csv");
    if out.findings.is_empty() {
        if findings.exists() {
            fs::remove_file(&findings).map_err(|e| CliError::io(&findings, e))?;
        }
    } else {
        report::write_file(&dir, "findings.csv", report::findings_csv(&out.findings).as_bytes())?;
    }
    let command_line = args
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let mut entries = vec![
        ("command".to_string(), cfg.command.clone()),
        ("command_line".to_string(), command_line),
        ("chebdyn_version".to_string(), chebdyn::VERSION.to_string()),
        ("cli_version".to_string(), env!("CARGO_PKG_VERSION").to_string()),
    ];
    entries.extend(cfg.entries().map(|(k, v)| (format!("config.{k}"), v.to_string())));
    entries.push(("exit_code".into(), code.to_string()));
    entries.push(("elapsed_seconds".into(), format!("{:.3}", start.elapsed().as_secs_f64())));
    report::write_file(&dir, "manifest.txt", report::manifest_text(&entries).as_bytes())
}
