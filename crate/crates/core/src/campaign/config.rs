//! `key=value` settings shared by the configuration file and the CLI flags.

use std::path::PathBuf;
use std::time::Duration;

use num_rational::BigRational;

use super::{CampaignConfig, Percentile};
use crate::error::CampaignError;
use crate::params::GenParams;
use crate::spec::{basic_to_advanced, parse_length_spec, parse_prop_spec, parse_rational, LengthSpec, Method, PropRateSpec};

/// Unit of the swept `L` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LUnit {
    #[default]
    Clauses,
    /// multiples of the number of variables `N`
    PerVar,
}

impl std::str::FromStr for LUnit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "abs" | "clauses" => Ok(LUnit::Clauses),
            "n" | "per-var" => Ok(LUnit::PerVar),
            _ => Err(format!("unknown L unit {s:?} (expected abs or per-var)")),
        }
    }
}

/// `from, from + step, ...` up to `to`, scaled by `N` for [`LUnit::PerVar`].
pub fn l_range(from: usize, to: usize, step: usize, unit: LUnit, vars: u32) -> Result<Vec<usize>, CampaignError> {
    if step == 0 || from == 0 || from > to {
        return Err(CampaignError::Invalid(format!("bad L range {from}..={to} step {step}")));
    }
    let scale = match unit {
        LUnit::Clauses => 1,
        LUnit::PerVar => vars as usize,
    };
    Ok((from..=to).step_by(step).map(|l| l * scale).collect())
}

#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub depth: Option<usize>,
    pub boxes: Option<u32>,
    pub clauses: Option<usize>,
    pub vars: Option<u32>,
    pub clause_size: Option<BigRational>,
    pub length_spec: Option<LengthSpec>,
    pub prop_prob: Option<BigRational>,
    pub prop_spec: Option<PropRateSpec>,
    pub method: Option<Method>,
    pub seed: Option<u64>,
    pub l_from: Option<usize>,
    pub l_to: Option<usize>,
    pub l_step: Option<usize>,
    pub l_values: Option<Vec<usize>>,
    pub l_unit: Option<LUnit>,
    pub samples: Option<usize>,
    pub percentiles: Option<Vec<Percentile>>,
    pub timeout: Option<Duration>,
    pub csv: Option<PathBuf>,
    pub plot: Option<PathBuf>,
}

fn num<T: std::str::FromStr>(v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("invalid number {v:?}"))
}

fn list<T: std::str::FromStr>(v: &str) -> Result<Vec<T>, String> {
    v.split(',').map(|x| num(x.trim())).collect()
}

pub fn parse_seconds(v: &str) -> Result<Duration, String> {
    let s: f64 = num(v)?;
    if !(s.is_finite() && s > 0.0) {
        return Err(format!("timeout must be a positive number of seconds, got {v:?}"));
    }
    Ok(Duration::from_secs_f64(s))
}

impl Settings {
    /// Sets one key; keys are the long CLI flag names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value.trim();
        match key.trim() {
            "depth" => self.depth = Some(num(v)?),
            "boxes" => self.boxes = Some(num(v)?),
            "clauses" => self.clauses = Some(num(v)?),
            "vars" => self.vars = Some(num(v)?),
            "clause-size" => self.clause_size = Some(parse_rational(v).map_err(|e| e.to_string())?),
            "length-spec" => self.length_spec = Some(parse_length_spec(v).map_err(|e| e.to_string())?),
            "prop-prob" => self.prop_prob = Some(parse_rational(v).map_err(|e| e.to_string())?),
            "prop-spec" => self.prop_spec = Some(parse_prop_spec(v).map_err(|e| e.to_string())?),
            "method" => self.method = Some(v.parse().map_err(|e: crate::error::SpecError| e.to_string())?),
            "seed" => self.seed = Some(num(v)?),
            "l-from" => self.l_from = Some(num(v)?),
            "l-to" => self.l_to = Some(num(v)?),
            "l-step" => self.l_step = Some(num(v)?),
            "l-values" => self.l_values = Some(list(v)?),
            "l-unit" => self.l_unit = Some(v.parse()?),
            "samples" => self.samples = Some(num(v)?),
            "percentiles" => {
                self.percentiles = Some(
                    v.split(',').map(|q| q.trim().parse::<Percentile>().map_err(|e| e.to_string())).collect::<Result<_, _>>()?,
                )
            }
            "timeout" => self.timeout = Some(parse_seconds(v)?),
            "csv" => self.csv = Some(PathBuf::from(v)),
            "plot" => self.plot = Some(PathBuf::from(v)),
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    /// Applies `key=value` lines; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CampaignError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| CampaignError::Config { line: i + 1, message };
            let (k, v) = line.split_once('=').ok_or_else(|| err("expected key=value".into()))?;
            self.set(k, v).map_err(err)?;
        }
        Ok(())
    }

    fn required<T: Clone>(v: &Option<T>, key: &str) -> Result<T, CampaignError> {
        v.clone().ok_or_else(|| CampaignError::Invalid(format!("missing {key}")))
    }

    /// Generation parameters; `clauses` overrides the `clauses` setting.
    pub fn gen_params(&self, clauses: Option<usize>) -> Result<GenParams, CampaignError> {
        let depth = Self::required(&self.depth, "depth")?;
        let vars = Self::required(&self.vars, "vars")?;
        let method = self.method.unwrap_or_default();
        let (lengths, props) = match (&self.clause_size, &self.length_spec, &self.prop_prob, &self.prop_spec) {
            (Some(c), None, p, None) => {
                let p = match (p, depth) {
                    (Some(p), _) => p.clone(),
                    (None, 0) => BigRational::default(),
                    (None, _) => return Err(CampaignError::Invalid("clause-size needs prop-prob".into())),
                };
                basic_to_advanced(c, &p, depth, method)?
            }
            (None, Some(c), None, p) => {
                let p = match (p, depth) {
                    (Some(p), _) => p.clone(),
                    (None, 0) => PropRateSpec::default(),
                    (None, _) => return Err(CampaignError::Invalid("length-spec needs prop-spec".into())),
                };
                (c.clone(), p)
            }
            (None, None, _, _) => return Err(CampaignError::Invalid("missing clause-size or length-spec".into())),
            _ => {
                return Err(CampaignError::Invalid(
                    "use either clause-size with prop-prob or length-spec with prop-spec".into(),
                ))
            }
        };
        let clauses = match clauses {
            Some(l) => l,
            None => Self::required(&self.clauses, "clauses")?,
        };
        Ok(GenParams { depth, boxes: self.boxes.unwrap_or(1), clauses, vars, lengths, props, method, seed: self.seed.unwrap_or(0) })
    }

    pub fn l_values(&self, vars: u32) -> Result<Vec<usize>, CampaignError> {
        let unit = self.l_unit.unwrap_or_default();
        match (&self.l_values, self.l_from, self.l_to) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                Err(CampaignError::Invalid("give either l-values or l-from/l-to".into()))
            }
            (Some(v), None, None) => Ok(match unit {
                LUnit::Clauses => v.clone(),
                LUnit::PerVar => v.iter().map(|l| l * vars as usize).collect(),
            }),
            (None, Some(from), Some(to)) => l_range(from, to, self.l_step.unwrap_or(1), unit, vars),
            _ => Err(CampaignError::Invalid("missing L values (l-values or l-from and l-to)".into())),
        }
    }

    pub fn campaign_config(&self) -> Result<CampaignConfig, CampaignError> {
        let vars = Self::required(&self.vars, "vars")?;
        let l_values = self.l_values(vars)?;
        let base = self.gen_params(Some(*l_values.first().unwrap_or(&1)))?;
        let mut cfg = CampaignConfig::new(base, l_values);
        if let Some(s) = self.samples {
            cfg.samples = s;
        }
        if let Some(t) = self.timeout {
            cfg.timeout = t;
        }
        if let Some(p) = &self.percentiles {
            cfg.percentiles = p.clone();
        }
        cfg.csv = self.csv.clone();
        cfg.plot_dir = self.plot.clone();
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Parses a configuration file.
pub fn parse_config(text: &str) -> Result<Settings, CampaignError> {
    let mut s = Settings::default();
    s.apply_text(text)?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG: &str = "\
# transition sweep
depth=1
vars = 3
clause-size=3
prop-prob=0.5
method=new
seed=7
l-from=1
l-to=10
l-step=3
l-unit=per-var
samples=5
percentiles=50,90,99.5
timeout=0.5
";

    #[test]
    fn full_config() {
        let cfg = parse_config(CONFIG).unwrap().campaign_config().unwrap();
        assert_eq!(cfg.l_values, vec![3, 12, 21, 30]);
        assert_eq!(cfg.samples, 5);
        assert_eq!(cfg.timeout, Duration::from_millis(500));
        assert_eq!(cfg.percentiles.len(), 3);
        assert_eq!(cfg.master_seed, 7);
        assert_eq!(cfg.base.lengths.to_string(), "[[0, 0, 1]]");
        assert_eq!(cfg.base.props.to_string(), "[[[], [], [0, 1, 1, 0]]]");
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_config("depth=1\nvars=x\n") {
            Err(CampaignError::Config { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_config("bogus=1"), Err(CampaignError::Config { line: 1, .. })));
        assert!(matches!(parse_config("depth"), Err(CampaignError::Config { line: 1, .. })));
    }

    #[test]
    fn spec_route_and_conflicts() {
        let s = parse_config("depth=0\nvars=2\nclauses=3\nlength-spec=[[0, 1]]\n").unwrap();
        let gp = s.gen_params(None).unwrap();
        assert_eq!((gp.clauses, gp.vars), (3, 2));
        let s = parse_config("depth=1\nvars=2\nclauses=3\nlength-spec=[[0, 1]]\n").unwrap();
        assert!(s.gen_params(None).is_err());
        let s = parse_config("depth=0\nvars=2\nclauses=3\nlength-spec=[[0, 1]]\nclause-size=2\n").unwrap();
        assert!(s.gen_params(None).is_err());
    }

    #[test]
    fn explicit_values() {
        let s = parse_config("l-values=2,4,8\nl-unit=per-var").unwrap();
        assert_eq!(s.l_values(3).unwrap(), vec![6, 12, 24]);
        assert!(l_range(5, 1, 1, LUnit::Clauses, 1).is_err());
        assert!(l_range(1, 5, 0, LUnit::Clauses, 1).is_err());
    }
}
