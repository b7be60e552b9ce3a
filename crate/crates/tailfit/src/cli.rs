//! The `tailfit` command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::File;
use std::hash::{BuildHasher, Hasher};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use tailfit_core::analysis::{self, ActivityFilter, DEFAULT_PEAK_PROMINENCE, DEFAULT_PEAK_WINDOW};
use tailfit_core::dataset::{proportion_histogram, truncate_min};
use tailfit_core::distributions::Density;
use tailfit_core::{fit, AuthorCounts, CountSample, EventLog, Family, FitResult, ModelSpec, SeededRng};

use crate::formats::{self, FormatError, Layout};
use crate::parallel::{self, ParallelError, Workers};
use crate::report::*;

/// Environment variable consulted when `--seed` is absent.
pub const SEED_ENV: &str = "TAILFIT_SEED";

#[derive(Debug, Parser)]
#[command(name = "tailfit", version, about = "Heavy-tailed count models for per-author publication data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit every family (or the selected ones) by maximum likelihood.
    Fit(FitArgs),
    /// Fit and run the parametric-bootstrap goodness-of-fit test.
    Gof(GofArgs),
    /// Maximal-count bound, key players, peaks and the two-corpus histogram.
    Analyze(AnalyzeArgs),
    /// Publication rate against prior count from time-stamped events.
    Prefattach(PrefAttachArgs),
    /// Draw a synthetic sample from a model.
    Synth(SynthArgs),
}

/// An inclusive year range written `A:B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct YearRange {
    pub first: i32,
    pub last: i32,
}

impl FromStr for YearRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (a, b) = s.split_once(':').ok_or_else(|| format!("expected A:B, got '{s}'"))?;
        let parse = |x: &str| x.trim().parse::<i32>().map_err(|_| format!("'{x}' is not a year"));
        Ok(YearRange { first: parse(a)?, last: parse(b)? })
    }
}

impl std::fmt::Display for YearRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.first, self.last)
    }
}

#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    /// Input file, or `-` for standard input.
    #[arg(long)]
    pub input: PathBuf,
    /// Record layout of the input.
    #[arg(long)]
    pub layout: Option<Layout>,
    /// Support lower bound; smaller counts are discarded. Defaults to the
    /// smallest count present.
    #[arg(long)]
    pub nmin: Option<u64>,
    /// With the events layout, count only events in this range.
    #[arg(long)]
    pub years: Option<YearRange>,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Family to fit; repeat for several. Defaults to all four.
    #[arg(long)]
    pub family: Vec<Family>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write `n, a_J(n)` and the fitted pmfs as plot-ready rows.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct GofArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Family to test; repeat for several. Defaults to pl, plwc and ys.
    #[arg(long)]
    pub family: Vec<Family>,
    /// Bootstrap replicates per family.
    #[arg(long, default_value_t = tailfit_core::gof::DEFAULT_REPLICATES)]
    pub replicates: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses every available core.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    /// Report replicate progress on standard error.
    #[arg(long)]
    pub progress: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
    /// Write the replicate KS distances, one per line.
    #[arg(long)]
    pub ks_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyzeArgs {
    /// One corpus, or two for the joint histogram.
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,
    #[arg(long)]
    pub layout: Option<Layout>,
    #[arg(long)]
    pub nmin: Option<u64>,
    #[arg(long)]
    pub years: Option<YearRange>,
    /// Half-width of the peak-detection window, in bins.
    #[arg(long, default_value_t = DEFAULT_PEAK_WINDOW)]
    pub window: usize,
    /// Factor by which a peak must exceed its window's median.
    #[arg(long, default_value_t = DEFAULT_PEAK_PROMINENCE)]
    pub prominence: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Plot table per corpus; repeat once per `--input`.
    #[arg(long)]
    pub plot_data: Vec<PathBuf>,
    /// Write the joint histogram as `count_A,count_B,n_authors` rows.
    #[arg(long)]
    pub joint_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PrefAttachArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Must be `events` when given.
    #[arg(long)]
    pub layout: Option<Layout>,
    /// Years `t` for which rates are computed.
    #[arg(long)]
    pub years: YearRange,
    /// Count every author with prior publications in `N_k(t)`, not only
    /// those publishing in year `t`.
    #[arg(long)]
    pub all_authors: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write `k,year,n_k,m_k,rate` rows.
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub family: Family,
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Number of draws.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub nmin: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file in the value-mult layout; standard output by default.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("dataset: cannot load {path}: {source}")]
    Input { path: String, source: FormatError },
    #[error("cli: cannot write {path}: {source}")]
    Output { path: String, source: io::Error },
    #[error("{module}: {source}")]
    Module { module: &'static str, source: tailfit_core::Error },
    #[error("gof: {0}")]
    Threads(rayon::ThreadPoolBuildError),
    #[error("{} failed (results for the others were written): {}", .0.len(), .0.join("; "))]
    Partial(Vec<String>),
}

impl CliError {
    /// 2 for argument errors, 1 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn in_module(module: &'static str) -> impl Fn(tailfit_core::Error) -> CliError {
    move |source| CliError::Module { module, source }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Runs one parsed command.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Fit(a) => run_fit(a),
        Command::Gof(a) => run_gof(a),
        Command::Analyze(a) => run_analyze(a),
        Command::Prefattach(a) => run_prefattach(a),
        Command::Synth(a) => run_synth(a),
    }
}

/// The seed and where it came from: the flag, then `TAILFIT_SEED`, then a
/// fresh random value.
pub fn resolve_seed(flag: Option<u64>) -> Result<(u64, &'static str), CliError> {
    if let Some(seed) = flag {
        return Ok((seed, "flag"));
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(|s| (s, "env"))
            .map_err(|_| usage(format!("{SEED_ENV}='{v}' is not an unsigned 64-bit integer"))),
        Err(_) => {
            let mut h = std::collections::hash_map::RandomState::new().build_hasher();
            h.write_u128(std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).unwrap_or_default().as_nanos());
            Ok((h.finish(), "generated"))
        }
    }
}

fn base_config(command: &str, seed: Option<u64>) -> Result<RunConfig, CliError> {
    let (seed, source) = resolve_seed(seed)?;
    Ok(RunConfig {
        command: command.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed,
        seed_source: source.into(),
        ..RunConfig::default()
    })
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn open_input(path: &Path) -> Result<Box<dyn BufRead>, CliError> {
    if path == Path::new("-") {
        return Ok(Box::new(BufReader::new(io::stdin())));
    }
    let file = File::open(path).map_err(|e| CliError::Input { path: path_str(path), source: e.into() })?;
    Ok(Box::new(BufReader::new(file)))
}

fn input_error(path: &Path) -> impl Fn(FormatError) -> CliError + '_ {
    move |source| CliError::Input { path: path_str(path), source }
}

fn load_event_log(path: &Path) -> Result<EventLog, CliError> {
    formats::load_events(open_input(path)?, &path_str(path)).map_err(input_error(path))
}

fn events_in(log: &EventLog, years: Option<YearRange>) -> AuthorCounts {
    let mut authors = AuthorCounts::new();
    for e in log.events() {
        if years.is_none_or(|r| (r.first..=r.last).contains(&e.year)) {
            *authors.entry(e.author.clone()).or_insert(0) += 1;
        }
    }
    authors
}

fn require_layout(layout: Option<Layout>) -> Result<Layout, CliError> {
    layout.ok_or_else(|| usage("--layout is required (per-author, value-mult or events); it is never guessed"))
}

fn check_years(layout: Layout, years: Option<YearRange>) -> Result<(), CliError> {
    if years.is_some() && layout != Layout::Events {
        return Err(usage("--years applies only to the events layout"));
    }
    Ok(())
}

/// Per-author counts, for layouts that carry author ids.
fn load_authors(path: &Path, layout: Layout, years: Option<YearRange>) -> Result<AuthorCounts, CliError> {
    match layout {
        Layout::PerAuthor => formats::load_author_counts(open_input(path)?).map_err(input_error(path)),
        Layout::Events => {
            let authors = events_in(&load_event_log(path)?, years);
            if authors.is_empty() {
                return Err(CliError::Module {
                    module: "dataset",
                    source: tailfit_core::Error::Domain(format!("no events of {} fall in the year range", path_str(path))),
                });
            }
            Ok(authors)
        }
        Layout::ValueMult => Err(usage("author ids are needed here; use the per-author or events layout")),
    }
}

fn load_sample(path: &Path, layout: Layout, years: Option<YearRange>) -> Result<CountSample, CliError> {
    let label = path_str(path);
    match layout {
        Layout::ValueMult => formats::load_counts(open_input(path)?, layout, &label).map_err(input_error(path)),
        _ => CountSample::from_author_counts(&load_authors(path, layout, years)?, label).map_err(in_module("dataset")),
    }
}

/// Applies `--nmin`, defaulting to the smallest count present.
fn apply_nmin(data: CountSample, nmin: Option<u64>) -> Result<(CountSample, u64), CliError> {
    let n_min = nmin.unwrap_or(data.min_value());
    if n_min == 0 {
        return Err(usage("--nmin must be at least 1"));
    }
    Ok((truncate_min(&data, n_min).map_err(in_module("dataset"))?, n_min))
}

fn load_corpus(args: &CorpusArgs, config: &mut RunConfig) -> Result<(CountSample, u64), CliError> {
    let layout = require_layout(args.layout)?;
    check_years(layout, args.years)?;
    let data = load_sample(&args.input, layout, args.years)?;
    let (data, n_min) = apply_nmin(data, args.nmin)?;
    config.inputs = vec![path_str(&args.input)];
    config.layout = Some(layout.name().into());
    config.years = args.years.map(|y| y.to_string());
    config.n_min = Some(n_min);
    Ok((data, n_min))
}

fn select_families(requested: &[Family], default: &[Family]) -> Vec<Family> {
    let mut out: Vec<Family> = Vec::new();
    for &f in if requested.is_empty() { default } else { requested } {
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

fn write_output(path: Option<&Path>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, contents).map_err(|source| CliError::Output { path: path_str(p), source }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(contents.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Output { path: "standard output".into(), source })
        }
    }
}

fn partial<T>(outcomes: &[Outcome<T>]) -> Result<(), CliError> {
    let failed: Vec<String> = outcomes
        .iter()
        .filter_map(|o| match o {
            Outcome::Failed { family, error } => Some(format!("{family}: {error}")),
            Outcome::Ok(_) => None,
        })
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Partial(failed))
    }
}

/// Plot table: `n, a_J(n)` and the pmf of each fitted family for `n` from
/// the support start to the largest count, preceded by `#` metadata lines
/// carrying the configuration and the power-law `n_max`.
pub fn plot_table(config: &RunConfig, data: &CountSample, n_min: u64, fits: &BTreeMap<Family, FitResult>) -> Result<String, CliError> {
    let mut s = String::new();
    writeln!(s, "# {}", config.header_line()).ok();
    match fits.get(&Family::PowerLaw) {
        Some(pl) => {
            let bound = analysis::n_max(data.total(), &pl.spec).map_err(in_module("analysis"))?;
            writeln!(s, "# n_max: {bound}").ok();
        }
        None => {
            writeln!(s, "# n_max: undefined (no power-law fit)").ok();
        }
    }
    let columns = Family::ALL.map(|f| format!("pmf_{}", f.short_name())).join(",");
    writeln!(s, "# n,a_J,{columns}").ok();
    let densities: Vec<Option<Density>> = Family::ALL
        .iter()
        .map(|f| fits.get(f).map(|r| Density::new(&r.spec)).transpose())
        .collect::<Result<_, _>>()
        .map_err(in_module("distributions"))?;
    let hist = proportion_histogram(data);
    for n in n_min..=data.max_value() {
        write!(s, "{n},{}", hist.get(n)).ok();
        for d in &densities {
            match d {
                Some(d) => write!(s, ",{}", d.pmf(n)).ok(),
                None => write!(s, ",NaN").ok(),
            };
        }
        s.push('\n');
    }
    Ok(s)
}

/// Fits for the plot table, reusing those already computed. Families that
/// cannot be fitted are left out and show as `NaN`.
fn plot_fits(data: &CountSample, n_min: u64, have: &BTreeMap<Family, FitResult>) -> BTreeMap<Family, FitResult> {
    Family::ALL
        .iter()
        .filter_map(|&f| match have.get(&f) {
            Some(r) => Some((f, r.clone())),
            None => fit(f, data, n_min).ok().map(|r| (f, r)),
        })
        .collect()
}

fn run_fit(args: FitArgs) -> Result<(), CliError> {
    let mut config = base_config("fit", args.seed)?;
    let (data, n_min) = load_corpus(&args.corpus, &mut config)?;
    let families = select_families(&args.family, &Family::ALL);
    config.families = families.iter().map(|f| f.short_name().into()).collect();
    config.out = args.out.as_deref().map(path_str);
    config.plot_data = args.plot_data.iter().map(|p| path_str(p)).collect();

    let mut fitted = BTreeMap::new();
    let mut rows = Vec::new();
    for &family in &families {
        match fit(family, &data, n_min) {
            Ok(r) => {
                rows.push(Outcome::Ok(FitRow::new(&r)));
                fitted.insert(family, r);
            }
            Err(e) => rows.push(Outcome::failed(family, format!("fitting: {e}"))),
        }
    }
    if let Some(path) = &args.plot_data {
        let table = plot_table(&config, &data, n_min, &plot_fits(&data, n_min, &fitted))?;
        write_output(Some(path), &table)?;
    }
    let report = FitReport { config, corpus: CorpusInfo::new(&data), fits: rows };
    write_output(args.out.as_deref(), &to_json(&report))?;
    partial(&report.fits)
}

fn run_gof(args: GofArgs) -> Result<(), CliError> {
    let mut config = base_config("gof", args.seed)?;
    let (data, n_min) = load_corpus(&args.corpus, &mut config)?;
    let families = select_families(&args.family, &Family::GOF);
    config.families = families.iter().map(|f| f.short_name().into()).collect();
    config.replicates = Some(args.replicates);
    config.out = args.out.as_deref().map(path_str);
    config.plot_data = args.plot_data.iter().map(|p| path_str(p)).collect();
    config.ks_out = args.ks_out.as_deref().map(path_str);
    let workers = Workers { threads: args.threads, progress: args.progress };

    let mut fitted = BTreeMap::new();
    let mut rows = Vec::new();
    let mut ks_text = format!("# {}\n", config.header_line());
    for &family in &families {
        match parallel::gof_test(family, &data, n_min, args.replicates, config.seed, workers) {
            Ok(r) => {
                writeln!(ks_text, "# family: {}", family.short_name()).ok();
                for d in &r.replicate_ks {
                    writeln!(ks_text, "{d}").ok();
                }
                rows.push(Outcome::Ok(GofRow::new(&r)));
                fitted.insert(family, r.fitted);
            }
            Err(ParallelError::Pool(e)) => return Err(CliError::Threads(e)),
            Err(ParallelError::Model(e)) => rows.push(Outcome::failed(family, format!("gof: {e}"))),
        }
    }
    if let Some(path) = &args.ks_out {
        write_output(Some(path), &ks_text)?;
    }
    if let Some(path) = &args.plot_data {
        let table = plot_table(&config, &data, n_min, &plot_fits(&data, n_min, &fitted))?;
        write_output(Some(path), &table)?;
    }
    let report = GofReport { config, corpus: CorpusInfo::new(&data), tests: rows };
    write_output(args.out.as_deref(), &to_json(&report))?;
    partial(&report.tests)
}

fn run_analyze(args: AnalyzeArgs) -> Result<(), CliError> {
    if args.input.len() > 2 {
        return Err(usage("analyze takes one or two --input corpora"));
    }
    if !args.plot_data.is_empty() && args.plot_data.len() != args.input.len() {
        return Err(usage("give --plot-data once per --input, or not at all"));
    }
    if args.joint_out.is_some() && args.input.len() != 2 {
        return Err(usage("--joint-out needs two --input corpora"));
    }
    if !(args.prominence.is_finite() && args.prominence >= 0.0) {
        return Err(usage("--prominence must be a nonnegative number"));
    }
    let layout = require_layout(args.layout)?;
    check_years(layout, args.years)?;
    let mut config = base_config("analyze", args.seed)?;
    config.inputs = args.input.iter().map(|p| path_str(p)).collect();
    config.layout = Some(layout.name().into());
    config.years = args.years.map(|y| y.to_string());
    config.n_min = args.nmin;
    config.families = vec![Family::PowerLaw.short_name().into()];
    config.window = Some(args.window);
    config.prominence = Some(args.prominence);
    config.out = args.out.as_deref().map(path_str);
    config.plot_data = args.plot_data.iter().map(|p| path_str(p)).collect();
    config.joint_out = args.joint_out.as_deref().map(path_str);

    let mut authors = Vec::new();
    let mut samples = Vec::new();
    for path in &args.input {
        let data = if args.input.len() == 2 {
            let a = load_authors(path, layout, args.years)?;
            let data = CountSample::from_author_counts(&a, path_str(path)).map_err(in_module("dataset"))?;
            authors.push(a);
            data
        } else {
            load_sample(path, layout, args.years)?
        };
        samples.push(apply_nmin(data, args.nmin)?);
    }

    let mut corpora = Vec::new();
    let mut failures = Vec::new();
    for (i, (data, n_min)) in samples.iter().enumerate() {
        let peaks = analysis::detect_peaks(&proportion_histogram(data), args.window, args.prominence);
        let (power_law, key_players, pl_fit) = match fit(Family::PowerLaw, data, *n_min) {
            Ok(r) => {
                let kp = analysis::key_players(data, &r).map_err(in_module("analysis"))?;
                (Outcome::Ok(FitRow::new(&r)), Some(KeyPlayerJson::from(&kp)), Some(r))
            }
            Err(e) => {
                failures.push(format!("{}: fitting: {e}", data.label()));
                (Outcome::failed(Family::PowerLaw, format!("fitting: {e}")), None, None)
            }
        };
        if let Some(path) = args.plot_data.get(i) {
            let have = pl_fit.into_iter().map(|r| (Family::PowerLaw, r)).collect();
            let table = plot_table(&config, data, *n_min, &plot_fits(data, *n_min, &have))?;
            write_output(Some(path), &table)?;
        }
        corpora.push(CorpusAnalysis {
            corpus: CorpusInfo::new(data),
            power_law,
            key_players,
            peaks: peaks.iter().map(PeakJson::from).collect(),
        });
    }

    let joint = if let [a, b] = authors.as_slice() {
        let h = analysis::joint_histogram(a, b);
        if let Some(path) = &args.joint_out {
            let mut s = format!("# {}\n# count_A,count_B,n_authors\n", config.header_line());
            for (&(ca, cb), &n) in &h.bins {
                writeln!(s, "{ca},{cb},{n}").ok();
            }
            write_output(Some(path), &s)?;
        }
        let top_cells = h
            .top_cells(10)
            .into_iter()
            .map(|((count_a, count_b), n_authors)| Cell { count_a, count_b, n_authors })
            .collect();
        Some(JointSummary { shared_authors: h.total(), occupied_cells: h.bins.len(), top_cells })
    } else {
        None
    };

    let report = AnalyzeReport { config, corpora, joint };
    write_output(args.out.as_deref(), &to_json(&report))?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Partial(failures))
    }
}

fn run_prefattach(args: PrefAttachArgs) -> Result<(), CliError> {
    if args.layout.is_some_and(|l| l != Layout::Events) {
        return Err(usage("prefattach reads the events layout"));
    }
    let mut config = base_config("prefattach", args.seed)?;
    let filter = if args.all_authors { ActivityFilter::All } else { ActivityFilter::ActiveOnly };
    config.inputs = vec![path_str(&args.input)];
    config.layout = Some(Layout::Events.name().into());
    config.years = Some(args.years.to_string());
    config.activity = Some(if args.all_authors { "all" } else { "active-only" }.into());
    config.out = args.out.as_deref().map(path_str);
    config.plot_data = args.plot_data.iter().map(|p| path_str(p)).collect();

    let log = load_event_log(&args.input)?;
    let rates = analysis::pref_attach_rates(&log, args.years.first..=args.years.last, filter).map_err(in_module("analysis"))?;
    if let Some(path) = &args.plot_data {
        let mut s = format!("# {}\n# k,year,n_k,m_k,rate\n", config.header_line());
        for p in &rates.points {
            writeln!(s, "{},{},{},{},{}", p.k, p.year, p.n_k, p.m_k, p.rate).ok();
        }
        write_output(Some(path), &s)?;
    }
    let report = PrefAttachReport::new(config, log.label(), &rates);
    write_output(args.out.as_deref(), &to_json(&report))
}

fn synth_spec(args: &SynthArgs) -> Result<ModelSpec, CliError> {
    let given = [
        ("alpha", args.alpha),
        ("beta", args.beta),
        ("gamma", args.gamma),
        ("rho", args.rho),
        ("lambda", args.lambda),
    ];
    let names = args.family.param_names();
    if let Some((extra, _)) = given.iter().find(|(n, v)| v.is_some() && !names.contains(n)) {
        return Err(usage(format!("--{extra} is not a parameter of the {} family", args.family)));
    }
    let values = names
        .iter()
        .map(|name| {
            given
                .iter()
                .find(|(n, _)| n == name)
                .and_then(|(_, v)| *v)
                .ok_or_else(|| usage(format!("the {} family needs --{name}", args.family)))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    ModelSpec::from_slice(args.family, &values, args.nmin).map_err(in_module("distributions"))
}

fn run_synth(args: SynthArgs) -> Result<(), CliError> {
    let spec = synth_spec(&args)?;
    if args.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let mut config = base_config("synth", args.seed)?;
    config.model = Some(ModelInfo::new(&spec));
    config.sample_size = Some(args.n);
    config.out = args.out.as_deref().map(path_str);
    let data = tailfit_core::sample(&spec, &mut SeededRng::new(config.seed, 0), args.n).map_err(in_module("sampling"))?;
    let header = vec![format!("tailfit synth: {spec}"), config.header_line(), "value,multiplicity".into()];
    let mut buf = Vec::new();
    formats::write_value_mult(&mut buf, &header, &data).expect("writing to memory");
    write_output(args.out.as_deref(), std::str::from_utf8(&buf).expect("ASCII output"))
}
