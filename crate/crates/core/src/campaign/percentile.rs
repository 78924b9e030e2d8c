use std::fmt;
use std::time::Duration;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::CampaignError;
use crate::spec::parse_rational;

/// A percentile level `Q` in `(0, 100]`, kept exact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Percentile {
    q: BigRational,
    label: String,
}

impl Percentile {
    pub fn new(q: BigRational) -> Result<Self, CampaignError> {
        if q <= BigRational::zero() || q > BigRational::from_integer(100.into()) {
            return Err(CampaignError::Invalid(format!("percentile {q} outside (0, 100]")));
        }
        let label = if q.is_integer() {
            q.to_integer().to_string()
        } else {
            q.to_f64().unwrap_or(f64::NAN).to_string()
        };
        Ok(Percentile { q, label })
    }

    pub fn value(&self) -> &BigRational {
        &self.q
    }

    /// CSV column name, `pQQ_ms`.
    pub fn column(&self) -> String {
        format!("p{}_ms", self.label)
    }

    /// Nearest rank `ceil(Q * n / 100)`, 1-based.
    pub fn rank(&self, n: usize) -> usize {
        let r = (&self.q * BigRational::from_integer(BigInt::from(n)) / BigRational::from_integer(100.into())).ceil();
        r.to_integer().to_usize().expect("rank fits").max(1)
    }
}

impl std::str::FromStr for Percentile {
    type Err = CampaignError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let q = parse_rational(s.trim()).map_err(|e| CampaignError::Invalid(format!("percentile {s:?}: {e}")))?;
        Percentile::new(q)
    }
}

impl fmt::Display for Percentile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Decision time of one sample; a timeout counts as the timeout value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Timing {
    Done(Duration),
    TimedOut,
}

/// Nearest-rank percentile with every timeout recorded as exactly `timeout`.
pub fn percentile(times: &[Timing], q: &Percentile, timeout: Duration) -> Result<Duration, CampaignError> {
    if times.is_empty() {
        return Err(CampaignError::Invalid("percentile of no samples".into()));
    }
    let mut values: Vec<Duration> = times
        .iter()
        .map(|t| match t {
            Timing::Done(d) => *d,
            Timing::TimedOut => timeout,
        })
        .collect();
    values.sort_unstable();
    Ok(values[q.rank(values.len()) - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(v: u64) -> Timing {
        Timing::Done(Duration::from_millis(v))
    }

    #[test]
    fn nearest_rank() {
        let t = [ms(3), ms(1), ms(4), ms(2)];
        let p50: Percentile = "50".parse().unwrap();
        assert_eq!(percentile(&t, &p50, Duration::from_secs(10)).unwrap(), Duration::from_millis(2));
        let p100: Percentile = "100".parse().unwrap();
        assert_eq!(percentile(&t, &p100, Duration::from_secs(10)).unwrap(), Duration::from_millis(4));
    }

    #[test]
    fn timeouts_dominate_high_percentiles() {
        let mut t: Vec<Timing> = (1..=6).map(ms).collect();
        t.extend([Timing::TimedOut; 5]);
        let p90: Percentile = "90".parse().unwrap();
        assert_eq!(percentile(&t, &p90, Duration::from_secs(10)).unwrap(), Duration::from_secs(10));
        let p50: Percentile = "50".parse().unwrap();
        assert_eq!(percentile(&t, &p50, Duration::from_secs(10)).unwrap(), Duration::from_millis(6));
    }

    #[test]
    fn constant_times() {
        let t = [ms(7); 9];
        for q in ["1", "12.5", "50", "90", "100"] {
            let q: Percentile = q.parse().unwrap();
            assert_eq!(percentile(&t, &q, Duration::from_secs(1)).unwrap(), Duration::from_millis(7));
        }
    }

    #[test]
    fn labels_and_errors() {
        assert_eq!("90".parse::<Percentile>().unwrap().column(), "p90_ms");
        assert_eq!("99.5".parse::<Percentile>().unwrap().column(), "p99.5_ms");
        assert!("0".parse::<Percentile>().is_err());
        assert!("101".parse::<Percentile>().is_err());
        assert!(percentile(&[], &"50".parse().unwrap(), Duration::ZERO).is_err());
    }
}
