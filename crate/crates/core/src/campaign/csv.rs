use std::io::{Read, Write};
use std::time::Duration;

use super::{Percentile, PointStats};
use crate::error::CampaignError;

const FIXED: [&str; 8] =
    ["L", "L_over_N", "n", "frac_sat", "frac_unsat", "frac_timeout", "frac_trivial_sat", "frac_trivial_unsat"];

fn csv_err(e: impl std::fmt::Display) -> CampaignError {
    CampaignError::Csv(e.to_string())
}

/// Milliseconds with six decimals, i.e. exact to the nanosecond.
pub fn format_ms(d: Duration) -> String {
    let ns = d.as_nanos();
    format!("{}.{:06}", ns / 1_000_000, ns % 1_000_000)
}

pub fn parse_ms(s: &str) -> Result<Duration, CampaignError> {
    let bad = || csv_err(format!("bad time {s:?}"));
    let (whole, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 6 || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let whole: u64 = whole.parse().map_err(|_| bad())?;
    let frac: u64 = if frac.is_empty() { 0 } else { format!("{frac:0<6}").parse().map_err(|_| bad())? };
    Ok(Duration::from_nanos(whole * 1_000_000 + frac))
}

pub fn write_csv<W: Write>(out: W, points: &[PointStats], percentiles: &[Percentile]) -> Result<(), CampaignError> {
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<String> =
        FIXED.iter().map(|s| s.to_string()).chain(percentiles.iter().map(Percentile::column)).collect();
    w.write_record(&header).map_err(csv_err)?;
    for p in points {
        let ratio = p.l as f64 / p.vars as f64;
        let mut row = vec![
            p.l.to_string(),
            ratio.to_string(),
            p.n.to_string(),
            p.frac_sat().to_string(),
            p.frac_unsat().to_string(),
            p.frac_timeout().to_string(),
            p.frac_trivially_sat().to_string(),
            p.frac_trivially_unsat().to_string(),
        ];
        for q in percentiles {
            let t = p.times.iter().find(|(pq, _)| pq == q).map(|(_, t)| format_ms(*t)).unwrap_or_default();
            row.push(t);
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn count_from_fraction(field: &str, n: usize) -> Result<usize, CampaignError> {
    let f: f64 = field.parse().map_err(|_| csv_err(format!("bad fraction {field:?}")))?;
    if !(0.0..=1.0).contains(&f) {
        return Err(csv_err(format!("fraction {field} outside [0, 1]")));
    }
    Ok((f * n as f64).round() as usize)
}

/// Reads a campaign CSV back into point statistics.
pub fn parse_csv<R: Read>(input: R) -> Result<(Vec<PointStats>, Vec<Percentile>), CampaignError> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(csv_err)?.clone();
    if header.len() < FIXED.len() || header.iter().zip(FIXED).any(|(a, b)| a != b) {
        return Err(csv_err(format!("unexpected header {:?}", header.iter().collect::<Vec<_>>())));
    }
    let percentiles: Vec<Percentile> = header
        .iter()
        .skip(FIXED.len())
        .map(|col| {
            col.strip_prefix('p')
                .and_then(|c| c.strip_suffix("_ms"))
                .ok_or_else(|| csv_err(format!("bad percentile column {col:?}")))
                .and_then(|q| q.parse())
        })
        .collect::<Result<_, _>>()?;
    let mut points = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err)?;
        let int = |i: usize| rec[i].parse::<usize>().map_err(|_| csv_err(format!("bad integer {:?}", &rec[i])));
        let l = int(0)?;
        let ratio: f64 = rec[1].parse().map_err(|_| csv_err(format!("bad ratio {:?}", &rec[1])))?;
        let n = int(2)?;
        let times = if n == 0 {
            Vec::new()
        } else {
            percentiles
                .iter()
                .enumerate()
                .map(|(i, q)| Ok((q.clone(), parse_ms(&rec[FIXED.len() + i])?)))
                .collect::<Result<_, CampaignError>>()?
        };
        points.push(PointStats {
            l,
            vars: (l as f64 / ratio).round() as u32,
            n,
            sat: count_from_fraction(&rec[3], n)?,
            unsat: count_from_fraction(&rec[4], n)?,
            timeout: count_from_fraction(&rec[5], n)?,
            trivially_sat: count_from_fraction(&rec[6], n)?,
            trivially_unsat: count_from_fraction(&rec[7], n)?,
            times,
        });
    }
    Ok((points, percentiles))
}
