mod cache;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use log::info;
use mahowald_core::charts::{add_product_lines, render_svg, to_table, Chart, ChartWindow, SvgOptions};
use mahowald_core::gradedmod::{sphere_module, stunted_module, Field, GradedModule};
use mahowald_core::mahowald::{
    algebraic_mahowald_with, default_n_max, parse_monomial, ClassRegistry, MahowaldQuery, MahowaldResult, Outcome,
    DEFAULT_BIDEGREE_BUDGET,
};
use mahowald_core::resolution::FreeResolution;
use mahowald_core::selftest::run_selftest;
use mahowald_core::Error;

use cache::ResolutionCache;
use config::{Config, Format, CACHE_ENV};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Resource(String),
    Indefinite(String),
    Failure(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Indefinite(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Argument(_) | Error::Parse(_) | Error::Window { .. } => CliError::Usage(e.to_string()),
            Error::Resource(_) => CliError::Resource(e.to_string()),
            Error::Internal(_) | Error::Io(_) => CliError::Failure(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(name = "mahowald", version, about = "Adams E2 charts and algebraic Mahowald invariants over F2")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for cached resolutions (overrides the environment and config).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Worker threads; defaults to the config value or all cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Resolve a module and print its Ext chart table.
    Resolve(ResolveArgs),
    /// Render a chart with h0, h1 and h2 product lines.
    Chart(ChartArgs),
    /// Compute an algebraic Mahowald invariant.
    Mahowald(MahowaldArgs),
    /// Run the built-in verification suite.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug)]
struct Bounds {
    /// Module: `sphere:n` or `stunted:K:bot:top` with K in R, C, H.
    module: String,
    #[arg(long)]
    smax: u32,
    #[arg(long, allow_negative_numbers = true)]
    tmax: i32,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ResolveArgs {
    #[command(flatten)]
    bounds: Bounds,
}

#[derive(Args, Debug)]
struct ChartArgs {
    #[command(flatten)]
    bounds: Bounds,
    #[arg(long, allow_negative_numbers = true)]
    stem_min: Option<i32>,
    #[arg(long, allow_negative_numbers = true)]
    stem_max: Option<i32>,
}

#[derive(Args, Debug)]
struct MahowaldArgs {
    /// R, C or H.
    field: String,
    /// A product of h0..h3, for example `h1`, `h0^2h2` or `h2^3`.
    alpha: String,
    #[arg(long)]
    nmax: Option<u32>,
    #[arg(long)]
    smax: Option<u32>,
    /// Index of the top cell of every stage.
    #[arg(long, allow_negative_numbers = true)]
    top: Option<i32>,
    /// Print the result as JSON.
    #[arg(long)]
    json: bool,
    /// Also write the result JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    /// Print the full machine-readable report.
    #[arg(long)]
    json: bool,
    /// Also write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Descriptor {
    Sphere(i32),
    Stunted(Field, i32, i32),
}

impl FromStr for Descriptor {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        let bad = || CliError::Usage(format!("bad module {s:?}; expected sphere:n or stunted:K:bot:top"));
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["sphere", n] => Ok(Descriptor::Sphere(n.parse().map_err(|_| bad())?)),
            ["stunted", k, bot, top] => {
                let field = k.parse::<Field>().map_err(|_| bad())?;
                let (bot, top) = (bot.parse().map_err(|_| bad())?, top.parse().map_err(|_| bad())?);
                if bot > top {
                    return Err(bad());
                }
                Ok(Descriptor::Stunted(field, bot, top))
            }
            _ => Err(bad()),
        }
    }
}

impl Descriptor {
    fn module(self) -> CliResult<GradedModule> {
        Ok(match self {
            Descriptor::Sphere(n) => sphere_module(n),
            Descriptor::Stunted(k, bot, top) => stunted_module(k, bot, top, k.dim() * top)?,
        })
    }
}

struct Context {
    config: Config,
    cache: ResolutionCache,
}

impl Context {
    fn resolver(&self) -> impl Fn(&GradedModule, u32, i32) -> mahowald_core::Result<FreeResolution> + Sync + '_ {
        |m, s, t| self.cache.resolve(m, s, t)
    }
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Failure(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(chart: &Chart, format: Format) -> String {
    match format {
        Format::Tsv => chart.to_tsv(),
        Format::Json => chart.to_json() + "\n",
        Format::Svg => render_svg(chart, &SvgOptions::default()),
    }
}

fn resolve_bounds(ctx: &Context, b: &Bounds) -> CliResult<(GradedModule, FreeResolution)> {
    let m = b.module.parse::<Descriptor>()?.module()?;
    let t_min = m.min_degree().unwrap_or(b.tmax);
    let count = (b.smax as usize + 1) * (b.tmax - t_min + 1).max(0) as usize;
    if count > DEFAULT_BIDEGREE_BUDGET {
        return Err(CliError::Resource(format!(
            "{count} bidegrees requested, budget is {DEFAULT_BIDEGREE_BUDGET}"
        )));
    }
    let r = ctx.cache.resolve(&m, b.smax, b.tmax)?;
    let degrees: Vec<String> = m.cells().iter().map(|c| c.degree.to_string()).collect();
    eprintln!("{}: cells in degrees {}", b.module, degrees.join(", "));
    info!("{}: {} generators", b.module, (0..=b.smax).map(|s| r.generators(s).len()).sum::<usize>());
    Ok((m, r))
}

fn default_window(m: &GradedModule, b: &Bounds) -> ChartWindow {
    let t_min = m.min_degree().unwrap_or(0);
    ChartWindow {
        stem_min: t_min - b.smax as i32,
        stem_max: b.tmax,
        s_max: b.smax,
    }
}

fn cmd_resolve(ctx: &Context, a: &ResolveArgs) -> CliResult<()> {
    let (m, r) = resolve_bounds(ctx, &a.bounds)?;
    let chart = to_table(&r, default_window(&m, &a.bounds));
    write_output(a.bounds.out.as_deref(), &render(&chart, a.bounds.format.unwrap_or(ctx.config.format)))
}

fn cmd_chart(ctx: &Context, a: &ChartArgs) -> CliResult<()> {
    let (m, r) = resolve_bounds(ctx, &a.bounds)?;
    let mut window = default_window(&m, &a.bounds);
    if let Some(lo) = a.stem_min {
        window.stem_min = lo;
    }
    if let Some(hi) = a.stem_max {
        window.stem_max = hi;
    }
    let mut chart = to_table(&r, window);
    let sphere = ctx.cache.resolve(&sphere_module(0), 1, 4)?;
    add_product_lines(&mut chart, &r, &sphere)?;
    write_output(a.bounds.out.as_deref(), &render(&chart, a.bounds.format.unwrap_or(Format::Svg)))
}

fn registry_listing(ctx: &Context) -> String {
    let listing = ctx
        .cache
        .resolve(&sphere_module(0), 4, 24)
        .and_then(|sphere| ClassRegistry::new(&sphere).names_in_window(4, 24));
    match listing {
        Ok(names) => format!("known classes (s <= 4, t <= 24): {}", names.join(", ")),
        Err(_) => "known classes are nonzero products of h0, h1, h2, h3".into(),
    }
}

fn summary(r: &MahowaldResult) -> String {
    let mut out = format!("K = {}, alpha = {}\n", r.field, r.alpha);
    match r.n {
        Some(n) => out += &format!("N = {n} ({:?}), stem {}\n", r.outcome, r.stem.unwrap_or_default()),
        None => out += &format!("no stage found ({:?})\n", r.outcome),
    }
    if !r.coset.is_empty() {
        let reps: Vec<String> = r
            .coset
            .iter()
            .map(|c| if c.names.is_empty() { format!("[{}]", c.coords) } else { c.names.join(" = ") })
            .collect();
        out += &format!("coset: {}\n", reps.join(", "));
        out += &format!("indeterminacy dimension: {}\n", r.indeterminacy_dim);
    }
    if r.n.is_none() {
        return out;
    }
    if r.interference.is_empty() {
        out += "interference: none in window\n";
    } else {
        out += &format!("interference: {} positions need attention\n", r.interference.len());
    }
    out
}

fn cmd_mahowald(ctx: &Context, a: &MahowaldArgs) -> CliResult<()> {
    let field: Field = a
        .field
        .parse()
        .map_err(|_| CliError::Usage(format!("unknown field {:?}; expected R, C or H", a.field)))?;
    if parse_monomial(&a.alpha).is_err() {
        return Err(CliError::Usage(format!("unknown class {:?}; {}", a.alpha, registry_listing(ctx))));
    }
    let defaults = ctx.config.fields.get(&field.to_string()).cloned().unwrap_or_default();
    let mut q = MahowaldQuery::new(field, &a.alpha);
    q.n_max = a.nmax.or(defaults.n_max).unwrap_or(default_n_max(field));
    q.s_margin = defaults.s_margin.unwrap_or(q.s_margin);
    q.s_max = a.smax;
    q.top = a.top;
    let resolve = ctx.resolver();
    let result = match algebraic_mahowald_with(&q, &resolve) {
        Err(Error::Parse(msg)) => {
            return Err(CliError::Usage(format!("{msg}; {}", registry_listing(ctx))));
        }
        r => r?,
    };
    let json = result.to_json();
    if let Some(p) = &a.out {
        write_output(Some(p), &(json.clone() + "\n"))?;
    }
    if a.json {
        println!("{json}");
    } else {
        print!("{}", summary(&result));
    }
    match result.outcome {
        Outcome::Definitive => Ok(()),
        Outcome::Degenerate => Err(CliError::Indefinite(format!(
            "{} is the unit; the invariant of 1 is a degenerate case and is not computed",
            result.alpha
        ))),
        Outcome::NoE2Completion => Err(CliError::Indefinite(format!(
            "no E2 completion of {} within the window",
            result.alpha
        ))),
        Outcome::FiltrationExceedsNMax => Err(CliError::Indefinite(format!(
            "the pr-class of {} stays zero through N_max = {}; try a larger --nmax",
            result.alpha, q.n_max
        ))),
    }
}

fn cmd_selftest(ctx: &Context, a: &SelftestArgs) -> CliResult<()> {
    let resolve = ctx.resolver();
    let report = run_selftest(&resolve)?;
    let json = report.to_json();
    if let Some(p) = &a.out {
        write_output(Some(p), &(json.clone() + "\n"))?;
    }
    if a.json {
        println!("{json}");
    } else {
        print!("{}", report.summary());
    }
    if report.pass {
        Ok(())
    } else {
        Err(CliError::Failure("selftest failed".into()))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let config = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let env = std::env::var(CACHE_ENV).ok();
    let cache_dir = config.cache_dir(cli.cache_dir.as_deref(), env.as_deref());
    let threads = config.thread_count(cli.threads.map(|n| n as usize));
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Failure(format!("cannot start thread pool: {e}")))?;
    let ctx = Context {
        config,
        cache: ResolutionCache::new(cache_dir),
    };
    match &cli.command {
        Command::Resolve(a) => cmd_resolve(&ctx, a),
        Command::Chart(a) => cmd_chart(&ctx, a),
        Command::Mahowald(a) => cmd_mahowald(&ctx, a),
        Command::Selftest(a) => cmd_selftest(&ctx, a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = match &e {
                CliError::Usage(m) | CliError::Resource(m) | CliError::Indefinite(m) | CliError::Failure(m) => m,
            };
            eprintln!("mahowald: {msg}");
            ExitCode::from(e.code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors() {
        assert_eq!("sphere:-4".parse::<Descriptor>().unwrap(), Descriptor::Sphere(-4));
        assert_eq!(
            "stunted:H:-4:-1".parse::<Descriptor>().unwrap(),
            Descriptor::Stunted(Field::H, -4, -1)
        );
        for bad in ["sphere", "sphere:x", "stunted:O:1:2", "stunted:C:3:2", "disk:3", ""] {
            assert!(bad.parse::<Descriptor>().is_err(), "{bad}");
        }
    }

    #[test]
    fn error_codes() {
        assert_eq!(CliError::from(Error::Resource("x".into())).code(), 3);
        assert_eq!(
            CliError::from(Error::Window {
                message: "x".into(),
                safe_bound: 1
            })
            .code(),
            2
        );
        assert_eq!(CliError::from(Error::Internal("x".into())).code(), 1);
    }
}
