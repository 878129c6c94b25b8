use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use galphac::bipartitions::Bipartition;
use galphac::experiments::{
    bound_check, figure_fam4, figure_ghz_w, figure_type_ab, run_sweep, BoundCheckConfig,
    FigureData, SweepSpec, DEFAULT_STEP,
};
use galphac::io::{parse_density, parse_state};
use galphac::measures::{evaluate, AlphaParam, MeasureSpec};
use galphac::quantum::{DensityMatrix, PureState};
use galphac::roof::{estimate_convex_roof, RoofConfig, RoofTarget};
use galphac::states::{builtin, Family, Seed};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "galphac",
    version,
    about = "Genuine multipartite entanglement measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-cut and aggregate values of one pure state.
    Measure(MeasureArgs),
    /// Sweep a one-parameter family over θ.
    Sweep(SweepArgs),
    /// Regenerate the data behind a figure and check its claims.
    Reproduce(ReproduceArgs),
    /// Randomized check of the continuity bounds.
    BoundCheck(BoundCheckArgs),
    /// Upper bound on the convex roof of a mixed state.
    Roof(RoofArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct MeasureOpts {
    /// Measure id: galphac, gqc, gmc, ggm, fill; may carry its parameter, e.g. galphac(alpha=0.25).
    #[arg(long = "measure", value_name = "ID")]
    measures: Vec<String>,
    /// Default α for galphac.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Default q for gqc.
    #[arg(long, default_value_t = 3.0)]
    q: f64,
}

impl MeasureOpts {
    fn resolve(&self, fallback: &[&str]) -> anyhow::Result<Vec<MeasureSpec>> {
        let ids: Vec<&str> = if self.measures.is_empty() {
            fallback.to_vec()
        } else {
            self.measures.iter().map(String::as_str).collect()
        };
        ids.iter()
            .map(|id| Ok(MeasureSpec::parse_with_defaults(id, self.alpha, self.q)?))
            .collect()
    }
}

#[derive(Args)]
struct OutputOpts {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct MeasureArgs {
    /// Builtin id (ghz:3, w:4, typeA:0.5, typeB:0.5, fam4:1.2, random:2,2,2:7) or a state JSON file.
    input: String,
    #[command(flatten)]
    measure: MeasureOpts,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct SweepArgs {
    /// typeA, typeB or fam4.
    family: String,
    #[command(flatten)]
    measure: MeasureOpts,
    #[arg(long, default_value_t = 0.0)]
    start: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    end: f64,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
    #[command(flatten)]
    output: OutputOpts,
    /// Also write a gnuplot script plotting the CSV (needs --out).
    #[arg(long)]
    gnuplot: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Figure number, 1 to 4.
    #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
    figure: u8,
    #[arg(long, default_value_t = DEFAULT_STEP)]
    step: f64,
    /// Largest n for which figure 1 also evaluates W_n numerically.
    #[arg(long, default_value_t = 14)]
    numeric_max_n: usize,
    #[command(flatten)]
    output: OutputOpts,
    #[arg(long)]
    gnuplot: Option<PathBuf>,
}

#[derive(Args)]
struct BoundCheckArgs {
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Local dimensions, e.g. 2,2,2.
    #[arg(long, value_delimiter = ',', default_value = "2,2,2")]
    dims: Vec<usize>,
    /// α values to test (repeatable).
    #[arg(long = "alpha", default_values_t = [0.25, 0.5])]
    alphas: Vec<f64>,
    #[command(flatten)]
    output: OutputOpts,
}

#[derive(Args)]
struct RoofArgs {
    /// Density JSON file, state JSON file or builtin pure-state id.
    input: String,
    /// galphac only; the roof of other measures is not searched.
    #[arg(long, default_value = "galphac")]
    measure: String,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Minimise the α-concurrence of a single cut, e.g. "0|12", instead of GαC.
    #[arg(long)]
    cut: Option<String>,
    #[arg(long)]
    ensemble_size: Option<usize>,
    #[arg(long, default_value_t = 20)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_iterations: usize,
    #[arg(long, default_value_t = 1e-8)]
    tolerance: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Checks ran and at least one failed.
struct ChecksFailed(usize);

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Measure(a) => measure(a),
        Command::Sweep(a) => sweep(a),
        Command::Reproduce(a) => reproduce(a),
        Command::BoundCheck(a) => bound(a),
        Command::Roof(a) => roof(a),
    };
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(ChecksFailed(n))) => {
            eprintln!("galphac: {n} check(s) failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("galphac: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn metadata(seed: Option<u64>) -> Vec<String> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    vec![
        format!("command: galphac {}", args.join(" ")),
        format!("version: {VERSION}"),
        format!(
            "seed: {}",
            seed.map_or("none".to_string(), |s| s.to_string())
        ),
    ]
}

fn with_output(
    out: &Option<PathBuf>,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            let file =
                File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            body(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn load_state(input: &str) -> anyhow::Result<PureState> {
    if Path::new(input).is_file() {
        let text =
            std::fs::read_to_string(input).with_context(|| format!("cannot read {input}"))?;
        return parse_state(&text).with_context(|| format!("invalid state file {input}"));
    }
    builtin(input).with_context(|| format!("{input:?} is neither a file nor a builtin state id"))
}

fn load_density(input: &str) -> anyhow::Result<DensityMatrix> {
    if Path::new(input).is_file() {
        let text =
            std::fs::read_to_string(input).with_context(|| format!("cannot read {input}"))?;
        if text.contains("\"entries\"") {
            return parse_density(&text).with_context(|| format!("invalid density file {input}"));
        }
        return Ok(parse_state(&text)
            .with_context(|| format!("invalid state file {input}"))?
            .projector());
    }
    Ok(builtin(input)
        .with_context(|| format!("{input:?} is neither a file nor a builtin state id"))?
        .projector())
}

fn measure(a: MeasureArgs) -> anyhow::Result<Option<ChecksFailed>> {
    let state = load_state(&a.input)?;
    let measures = a.measure.resolve(&["galphac"])?;
    let reports = measures
        .iter()
        .map(|m| evaluate(&state, m))
        .collect::<galphac::Result<Vec<_>>>()?;
    with_output(&a.output.out, |w| match a.output.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &reports)?;
            writeln!(w)
        }
        Format::Csv => {
            for line in metadata(None) {
                writeln!(w, "# {line}")?;
            }
            writeln!(w, "measure,cut,value")?;
            for r in &reports {
                for c in r.per_cut() {
                    writeln!(w, "{},{},{}", r.measure(), c.cut, c.value)?;
                }
                writeln!(w, "{},aggregate,{}", r.measure(), r.aggregate())?;
                writeln!(
                    w,
                    "# {} upper limit {} ({})",
                    r.measure(),
                    r.upper_limit(),
                    r.measure().formula()
                )?;
            }
            Ok(())
        }
    })?;
    Ok(None)
}

fn write_gnuplot(
    script: &Path,
    csv: &Path,
    header: &[String],
    x_label: &str,
) -> anyhow::Result<()> {
    let csv = csv.display();
    let mut text = format!(
        "set datafile separator ','\nset datafile commentschars '#'\nset key autotitle columnhead\nset xlabel '{x_label}'\nplot "
    );
    let series: Vec<String> = (2..=header.len())
        .map(|k| format!("'{csv}' using 1:{k} with lines"))
        .collect();
    text += &series.join(", \\\n     ");
    text.push('\n');
    std::fs::write(script, text).with_context(|| format!("cannot write {}", script.display()))
}

fn emit_figure(
    fig: &FigureData,
    output: &OutputOpts,
    gnuplot: &Option<PathBuf>,
    x_label: &str,
) -> anyhow::Result<()> {
    if gnuplot.is_some() && (output.out.is_none() || output.format != Format::Csv) {
        bail!("--gnuplot needs --out with CSV output");
    }
    with_output(&output.out, |w| match output.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, fig)?;
            writeln!(w)
        }
        Format::Csv => fig.write_csv(w, &metadata(None)),
    })?;
    if let (Some(script), Some(csv)) = (gnuplot, &output.out) {
        write_gnuplot(script, csv, &fig.header, x_label)?;
    }
    Ok(())
}

fn sweep(a: SweepArgs) -> anyhow::Result<Option<ChecksFailed>> {
    let family: Family = a.family.parse()?;
    let spec = SweepSpec {
        family,
        theta_start: a.start,
        theta_end: a.end,
        theta_step: a.step,
        measures: a.measure.resolve(&["galphac"])?,
    };
    let result = run_sweep(&spec)?;
    if a.output.format == Format::Json {
        if a.gnuplot.is_some() {
            bail!("--gnuplot needs --out with CSV output");
        }
        with_output(&a.output.out, |w| {
            serde_json::to_writer_pretty(&mut *w, &result)?;
            writeln!(w)
        })?;
        return Ok(None);
    }
    emit_figure(
        &FigureData::from_sweep(&result, Vec::new()),
        &a.output,
        &a.gnuplot,
        "theta",
    )?;
    Ok(None)
}

fn reproduce(a: ReproduceArgs) -> anyhow::Result<Option<ChecksFailed>> {
    let (fig, x_label) = match a.figure {
        1 => (figure_ghz_w(a.numeric_max_n)?, "n"),
        2 => (figure_type_ab(MeasureSpec::Fill, a.step)?, "theta"),
        3 => (figure_type_ab(MeasureSpec::Gmc, a.step)?, "theta"),
        _ => {
            let (sweep, checks) = figure_fam4(a.step)?;
            (FigureData::from_sweep(&sweep, checks), "theta")
        }
    };
    emit_figure(&fig, &a.output, &a.gnuplot, x_label)?;
    for c in &fig.checks {
        eprintln!(
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let failed = fig.checks.iter().filter(|c| !c.passed).count();
    Ok((failed > 0).then_some(ChecksFailed(failed)))
}

fn bound(a: BoundCheckArgs) -> anyhow::Result<Option<ChecksFailed>> {
    let alphas = a
        .alphas
        .iter()
        .map(|&x| AlphaParam::new(x))
        .collect::<galphac::Result<Vec<_>>>()?;
    let cfg = BoundCheckConfig::new(a.trials, Seed(a.seed), a.dims.clone(), alphas);
    let summaries = bound_check(&cfg)?;
    with_output(&a.output.out, |w| match a.output.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &summaries)?;
            writeln!(w)
        }
        Format::Csv => {
            for line in metadata(Some(a.seed)) {
                writeln!(w, "# {line}")?;
            }
            writeln!(
                w,
                "alpha,trials,cut_checks,cut_violations,max_cut_ratio,aggregate_checks,aggregate_violations,max_aggregate_ratio,max_epsilon,zero_epsilon_trials,zero_epsilon_max_diff"
            )?;
            for s in &summaries {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    s.alpha,
                    s.trials,
                    s.cut_checks,
                    s.cut_violations,
                    s.max_cut_ratio,
                    s.aggregate_checks,
                    s.aggregate_violations,
                    s.max_aggregate_ratio,
                    s.max_epsilon,
                    s.zero_epsilon_trials,
                    s.zero_epsilon_max_diff
                )?;
            }
            if summaries.iter().any(|s| s.aggregate_even_extension) {
                writeln!(
                    w,
                    "# aggregate bound for an even party count uses the half-weighted middle class"
                )?;
            }
            Ok(())
        }
    })?;
    let failed = summaries
        .iter()
        .filter(|s| s.violations() > 0 || s.zero_epsilon_max_diff != 0.0)
        .count();
    Ok((failed > 0).then_some(ChecksFailed(failed)))
}

fn roof(a: RoofArgs) -> anyhow::Result<Option<ChecksFailed>> {
    let rho = load_density(&a.input)?;
    let alpha = AlphaParam::new(a.alpha)?;
    let target = match &a.cut {
        Some(label) => RoofTarget::CutAlphaConcurrence {
            alpha,
            cut: Bipartition::parse(label, rho.n_parties())?,
        },
        None => {
            RoofTarget::from_measure(&MeasureSpec::parse_with_defaults(&a.measure, a.alpha, 3.0)?)?
        }
    };
    let cfg = RoofConfig {
        ensemble_size: a.ensemble_size,
        restarts: a.restarts,
        max_iterations: a.max_iterations,
        tolerance: a.tolerance,
        seed: Seed(a.seed),
    };
    let result = estimate_convex_roof(&rho, &target, &cfg)?;
    with_output(&a.out, |w| {
        serde_json::to_writer_pretty(&mut *w, &result)?;
        writeln!(w)
    })?;
    Ok(None)
}
