use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use cnfbox_core::campaign::{format_ms, parse_config, parse_seconds, write_csv, Settings};
use cnfbox_core::oracle::{check_theorem_with, formula_probability, monte_carlo_frequency, to_f64, Mode};
use cnfbox_core::{
    generate_formula, infer_gen_params, k_satisfiable, parse_formula, run_campaign, CampaignError, Formula, GenError,
    GenParams, Method, OracleError, Severity, Widening,
};

#[derive(Parser)]
#[command(name = "cnfbox", version, about = "Random CNF-box-m formulas for the modal logic K(m)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one random formula
    Generate {
        #[command(flatten)]
        gen: GenArgs,
        /// write the formula here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Infer the length and propositional-count specs of a formula
    Infer {
        /// formula file, `-` for stdin
        file: PathBuf,
        /// divide each weight list by its gcd
        #[arg(long)]
        normalize: bool,
    },
    /// Exact probability that the generator emits a formula
    Probability {
        file: PathBuf,
        /// explicit parameters; the specs are inferred from the formula when omitted
        #[command(flatten)]
        gen: GenArgs,
        /// probability of this exact clause order instead of any order
        #[arg(long)]
        ordered: bool,
        /// raise a zero weight to 1: `C:depth:length` or `p:depth:length:props`
        #[arg(long = "widen", value_name = "COORD")]
        widen: Vec<String>,
        /// also estimate the probability from this many generator runs
        #[arg(long)]
        mc_samples: Option<u64>,
    },
    /// Decide satisfiability in K(m)
    Decide {
        file: PathBuf,
        /// seconds
        #[arg(long, default_value = "10")]
        timeout: String,
    },
    /// Sweep L, decide every sample and write CSV statistics
    Campaign {
        /// key=value configuration file; flags override its entries
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        gen: GenArgs,
        #[arg(long)]
        l_from: Option<String>,
        #[arg(long)]
        l_to: Option<String>,
        #[arg(long)]
        l_step: Option<String>,
        /// comma-separated explicit L values
        #[arg(long)]
        l_values: Option<String>,
        /// `abs` or `per-var` (multiples of N)
        #[arg(long)]
        l_unit: Option<String>,
        #[arg(long)]
        samples: Option<String>,
        /// comma-separated, e.g. 50,90
        #[arg(long)]
        percentiles: Option<String>,
        /// seconds per formula
        #[arg(long)]
        timeout: Option<String>,
        /// CSV output path (stdout when omitted)
        #[arg(long)]
        csv: Option<String>,
        /// directory for gnuplot scripts and data
        #[arg(long)]
        plot: Option<String>,
    },
}

#[derive(Args, Default)]
struct GenArgs {
    #[arg(long)]
    depth: Option<String>,
    #[arg(long)]
    boxes: Option<String>,
    #[arg(long)]
    clauses: Option<String>,
    #[arg(long)]
    vars: Option<String>,
    #[arg(long, conflicts_with = "length_spec")]
    clause_size: Option<String>,
    #[arg(long)]
    length_spec: Option<String>,
    #[arg(long, conflicts_with = "prop_spec")]
    prop_prob: Option<String>,
    #[arg(long)]
    prop_spec: Option<String>,
    /// `new` (floor/ceil) or `old` (binomial)
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    seed: Option<String>,
}

impl GenArgs {
    fn pairs(&self) -> Vec<(&'static str, &String)> {
        [
            ("depth", &self.depth),
            ("boxes", &self.boxes),
            ("clauses", &self.clauses),
            ("vars", &self.vars),
            ("clause-size", &self.clause_size),
            ("length-spec", &self.length_spec),
            ("prop-prob", &self.prop_prob),
            ("prop-spec", &self.prop_spec),
            ("method", &self.method),
            ("seed", &self.seed),
        ]
        .into_iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k, v)))
        .collect()
    }

    fn is_empty(&self) -> bool {
        self.pairs().is_empty()
    }
}

/// Error with the process exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 1, error: error.into() }
}

fn internal(error: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 3, error: error.into() }
}

fn from_gen(e: GenError) -> Failure {
    match e {
        GenError::Params(_) => usage(e),
        _ => Failure { code: 2, error: e.into() },
    }
}

fn from_oracle(e: OracleError) -> Failure {
    match e {
        OracleError::Gen(g) => from_gen(g),
        other => usage(other),
    }
}

fn apply(settings: &mut Settings, pairs: &[(&str, &String)]) -> Result<(), Failure> {
    for (k, v) in pairs {
        settings.set(k, v).map_err(|e| usage(anyhow!("--{k}: {e}")))?;
    }
    Ok(())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(usage)?;
    } else {
        text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(usage)?;
    }
    Ok(text)
}

fn read_formula(path: &Path) -> Result<Formula, Failure> {
    parse_formula(&read_input(path)?).with_context(|| format!("parsing {}", path.display())).map_err(usage)
}

fn report_warnings(gp: &GenParams) -> Result<(), Failure> {
    for d in gp.validate().map_err(usage)? {
        if d.severity == Severity::Warning {
            eprintln!("warning: {d}");
        }
    }
    Ok(())
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())).map_err(usage),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(internal),
    }
}

fn generate(gen: &GenArgs, out: Option<&Path>) -> Result<(), Failure> {
    let mut settings = Settings::default();
    apply(&mut settings, &gen.pairs())?;
    let gp = settings.gen_params(None).map_err(usage)?;
    report_warnings(&gp)?;
    let phi = generate_formula(&gp).map_err(from_gen)?;
    write_output(out, &format!("{phi}\n"))
}

fn infer(file: &Path, normalize: bool) -> Result<(), Failure> {
    let phi = read_formula(file)?;
    let gp = infer_gen_params(&phi, Method::New, 0);
    let (c, p) = if normalize { (gp.lengths.normalize(), gp.props.normalize()) } else { (gp.lengths, gp.props) };
    let text = format!(
        "depth={}\nboxes={}\nvars={}\nclauses={}\nlength-spec={c}\nprop-spec={p}\n",
        gp.depth, gp.boxes, gp.vars, gp.clauses
    );
    write_output(None, &text)
}

fn probability(file: &Path, gen: &GenArgs, ordered: bool, widen: &[String], mc: Option<u64>) -> Result<(), Failure> {
    let phi = read_formula(file)?;
    let mut gp = infer_gen_params(&phi, Method::New, 0);
    if !gen.is_empty() {
        let mut settings = Settings {
            depth: Some(gp.depth),
            boxes: Some(gp.boxes),
            clauses: Some(gp.clauses),
            vars: Some(gp.vars),
            ..Settings::default()
        };
        apply(&mut settings, &gen.pairs())?;
        gp = settings.gen_params(None).map_err(usage)?;
    }
    let mode = if ordered { Mode::Ordered } else { Mode::AsSet };
    let r = formula_probability(&phi, &gp, mode).map_err(from_oracle)?;
    let mut text = format!("probability={}\napprox={:e}\n", r.value, to_f64(&r.value));
    if !r.zero_support.is_empty() {
        let idx: Vec<String> = r.zero_support.iter().map(usize::to_string).collect();
        text.push_str(&format!("zero-support-clauses={}\n", idx.join(",")));
    }
    if r.clause_count_mismatch {
        text.push_str(&format!("note=formula has {} clauses but L={}\n", phi.len(), gp.clauses));
    }
    if !widen.is_empty() {
        let w: Vec<Widening> =
            widen.iter().map(|s| s.parse::<Widening>()).collect::<Result<_, _>>().map_err(usage)?;
        let t = check_theorem_with(&phi, &gp, &w).map_err(from_oracle)?;
        text.push_str(&format!(
            "widened-probability={}\npositive={}\nmonotone={}\n",
            t.widened_probability, t.positive, t.monotone
        ));
    }
    if let Some(n) = mc {
        let seed = gp.seed;
        let e = monte_carlo_frequency(&phi, &gp, n, seed).map_err(from_oracle)?;
        text.push_str(&format!(
            "monte-carlo={}/{} frequency={} ci99=[{}, {}]\n",
            e.hits, e.samples, e.frequency, e.ci_low, e.ci_high
        ));
    }
    write_output(None, &text)
}

fn decide(file: &Path, timeout: &str) -> Result<(), Failure> {
    let phi = read_formula(file)?;
    let timeout: Duration = parse_seconds(timeout).map_err(|e| usage(anyhow!("--timeout: {e}")))?;
    let o = k_satisfiable(&phi, Some(timeout));
    if o.trivially_sat && o.trivially_unsat {
        return Err(internal(anyhow!("both triviality flags set")));
    }
    write_output(
        None,
        &format!(
            "{} trivially_sat={} trivially_unsat={} elapsed_ms={}\n",
            o.status,
            o.trivially_sat,
            o.trivially_unsat,
            format_ms(o.elapsed)
        ),
    )
}

fn campaign(config: Option<&Path>, pairs: &[(&str, &String)]) -> Result<(), Failure> {
    let mut settings = match config {
        Some(p) => parse_config(&read_input(p)?).map_err(usage)?,
        None => Settings::default(),
    };
    apply(&mut settings, pairs)?;
    let cfg = settings.campaign_config().map_err(usage)?;
    report_warnings(&cfg.base)?;
    let report = run_campaign(&cfg).map_err(|e| match e {
        CampaignError::Invariant(_) => internal(e),
        CampaignError::Io(_) | CampaignError::Csv(_) => internal(e),
        other => usage(other),
    })?;
    if cfg.csv.is_none() {
        let mut out = std::io::stdout().lock();
        write_csv(&mut out, &report.points, &cfg.percentiles).map_err(internal)?;
    }
    if report.total_failures() > 0 {
        let first = report.first_failure.as_ref().map(|e| e.to_string()).unwrap_or_default();
        return Err(Failure {
            code: 2,
            error: anyhow!(
                "{} samples failed to generate and were excluded ({first})",
                report.total_failures()
            ),
        });
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { gen, out } => generate(&gen, out.as_deref()),
        Command::Infer { file, normalize } => infer(&file, normalize),
        Command::Probability { file, gen, ordered, widen, mc_samples } => {
            probability(&file, &gen, ordered, &widen, mc_samples)
        }
        Command::Decide { file, timeout } => decide(&file, &timeout),
        Command::Campaign {
            config,
            gen,
            l_from,
            l_to,
            l_step,
            l_values,
            l_unit,
            samples,
            percentiles,
            timeout,
            csv,
            plot,
        } => {
            let mut pairs = gen.pairs();
            let extra = [
                ("l-from", &l_from),
                ("l-to", &l_to),
                ("l-step", &l_step),
                ("l-values", &l_values),
                ("l-unit", &l_unit),
                ("samples", &samples),
                ("percentiles", &percentiles),
                ("timeout", &timeout),
                ("csv", &csv),
                ("plot", &plot),
            ];
            pairs.extend(extra.iter().filter_map(|(k, v)| v.as_ref().map(|v| (*k, v))));
            campaign(config.as_deref(), &pairs)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
