//! Sweeps over the number of clauses `L`: generate, decide, aggregate.

mod config;
mod csv;
mod percentile;
mod plot;

use std::path::PathBuf;
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

pub use config::{l_range, parse_config, parse_seconds, LUnit, Settings};
pub use csv::{format_ms, parse_csv, parse_ms, write_csv};
pub use percentile::{percentile, Percentile, Timing};
pub use plot::{emit_plot_script, plot_data, write_plot_bundle, PlotKind};

use crate::decider::{k_satisfiable, DecisionOutcome, Status};
use crate::error::{CampaignError, GenError};
use crate::generator::Generator;
use crate::params::GenParams;
use crate::rng::derive_seed;

pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);
pub const DEFAULT_PERCENTILES: [u32; 2] = [50, 90];

#[derive(Debug, Clone)]
pub struct CampaignConfig {
    /// generation parameters; `clauses` is replaced by each swept value
    pub base: GenParams,
    pub l_values: Vec<usize>,
    pub samples: usize,
    pub timeout: Duration,
    pub percentiles: Vec<Percentile>,
    pub master_seed: u64,
    pub csv: Option<PathBuf>,
    pub plot_dir: Option<PathBuf>,
}

impl CampaignConfig {
    pub fn new(base: GenParams, l_values: Vec<usize>) -> Self {
        CampaignConfig {
            master_seed: base.seed,
            base,
            l_values,
            samples: DEFAULT_SAMPLES,
            timeout: DEFAULT_TIMEOUT,
            percentiles: DEFAULT_PERCENTILES
                .iter()
                .map(|&q| Percentile::new(BigRational::from_integer(q.into())).expect("in range"))
                .collect(),
            csv: None,
            plot_dir: None,
        }
    }

    pub fn validate(&self) -> Result<(), CampaignError> {
        if self.l_values.is_empty() {
            return Err(CampaignError::Invalid("no L values".into()));
        }
        if self.l_values[0] == 0 {
            return Err(CampaignError::Invalid("L values must be at least 1".into()));
        }
        if self.l_values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CampaignError::Invalid("L values must be strictly increasing".into()));
        }
        if self.samples == 0 {
            return Err(CampaignError::Invalid("samples must be at least 1".into()));
        }
        if self.timeout.is_zero() {
            return Err(CampaignError::Invalid("timeout must be positive".into()));
        }
        GenParams { clauses: self.l_values[0], ..self.base.clone() }.validate()?;
        Ok(())
    }
}

/// Aggregate over the decided samples at one `L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointStats {
    pub l: usize,
    pub vars: u32,
    pub n: usize,
    pub sat: usize,
    pub unsat: usize,
    pub timeout: usize,
    pub trivially_sat: usize,
    pub trivially_unsat: usize,
    pub times: Vec<(Percentile, Duration)>,
}

impl PointStats {
    pub fn l_over_n(&self) -> BigRational {
        BigRational::new(BigInt::from(self.l), BigInt::from(self.vars))
    }

    fn frac(&self, count: usize) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            count as f64 / self.n as f64
        }
    }

    pub fn frac_sat(&self) -> f64 {
        self.frac(self.sat)
    }

    pub fn frac_unsat(&self) -> f64 {
        self.frac(self.unsat)
    }

    pub fn frac_timeout(&self) -> f64 {
        self.frac(self.timeout)
    }

    pub fn frac_trivially_sat(&self) -> f64 {
        self.frac(self.trivially_sat)
    }

    pub fn frac_trivially_unsat(&self) -> f64 {
        self.frac(self.trivially_unsat)
    }

    pub fn from_outcomes(
        l: usize,
        vars: u32,
        outcomes: &[DecisionOutcome],
        percentiles: &[Percentile],
        timeout: Duration,
    ) -> Self {
        let count = |f: &dyn Fn(&DecisionOutcome) -> bool| outcomes.iter().filter(|o| f(o)).count();
        let timings: Vec<Timing> = outcomes
            .iter()
            .map(|o| if o.status == Status::Timeout { Timing::TimedOut } else { Timing::Done(o.elapsed) })
            .collect();
        let times = if timings.is_empty() {
            Vec::new()
        } else {
            percentiles
                .iter()
                .map(|q| (q.clone(), percentile(&timings, q, timeout).expect("non-empty")))
                .collect()
        };
        PointStats {
            l,
            vars,
            n: outcomes.len(),
            sat: count(&|o| o.status == Status::Sat),
            unsat: count(&|o| o.status == Status::Unsat),
            timeout: count(&|o| o.status == Status::Timeout),
            trivially_sat: count(&|o| o.trivially_sat),
            trivially_unsat: count(&|o| o.trivially_unsat),
            times,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CampaignReport {
    pub points: Vec<PointStats>,
    /// samples per point whose generation hit a rejection cap
    pub generation_failures: Vec<usize>,
    pub first_failure: Option<GenError>,
}

impl CampaignReport {
    pub fn total_failures(&self) -> usize {
        self.generation_failures.iter().sum()
    }
}

fn check_outcome(o: &DecisionOutcome) -> Result<(), String> {
    if o.trivially_sat && o.trivially_unsat {
        return Err("formula flagged both trivially satisfiable and trivially unsatisfiable".into());
    }
    if o.trivially_sat && o.status == Status::Unsat {
        return Err("trivially satisfiable formula decided unsatisfiable".into());
    }
    if o.trivially_unsat && o.status == Status::Sat {
        return Err("trivially unsatisfiable formula decided satisfiable".into());
    }
    Ok(())
}

/// Runs the sweep and writes the configured CSV and plot files.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignReport, CampaignError> {
    config.validate()?;
    let jobs: Vec<(usize, usize)> =
        (0..config.l_values.len()).flat_map(|p| (0..config.samples).map(move |s| (p, s))).collect();
    let results: Vec<Result<DecisionOutcome, GenError>> = jobs
        .par_iter()
        .map(|&(p, s)| {
            let gp = GenParams { clauses: config.l_values[p], ..config.base.clone() };
            let phi = Generator::with_seed(&gp, derive_seed(config.master_seed, p as u64, s as u64)).generate_formula()?;
            Ok(k_satisfiable(&phi, Some(config.timeout)))
        })
        .collect();

    let mut points = Vec::with_capacity(config.l_values.len());
    let mut failures = Vec::with_capacity(config.l_values.len());
    let mut first_failure = None;
    for (p, chunk) in results.chunks(config.samples).enumerate() {
        let mut decided = Vec::with_capacity(chunk.len());
        let mut failed = 0;
        for r in chunk {
            match r {
                Ok(o) => {
                    check_outcome(o).map_err(CampaignError::Invariant)?;
                    decided.push(o.clone());
                }
                Err(e) => {
                    failed += 1;
                    first_failure.get_or_insert_with(|| e.clone());
                }
            }
        }
        points.push(PointStats::from_outcomes(
            config.l_values[p],
            config.base.vars,
            &decided,
            &config.percentiles,
            config.timeout,
        ));
        failures.push(failed);
    }
    let report = CampaignReport { points, generation_failures: failures, first_failure };
    if let Some(path) = &config.csv {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        write_csv(&mut file, &report.points, &config.percentiles)?;
    }
    if let Some(dir) = &config.plot_dir {
        write_plot_bundle(dir, &report.points, &config.percentiles)?;
    }
    Ok(report)
}
