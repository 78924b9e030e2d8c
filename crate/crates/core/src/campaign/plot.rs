//! gnuplot scripts over a whitespace-separated data file, x axis `L/N`.

use std::fmt::Write as _;
use std::path::Path;

use super::{format_ms, Percentile, PointStats};
use crate::error::CampaignError;

pub const DATA_FILE: &str = "campaign.dat";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// percentile decision times, log scale
    Times,
    /// satisfiable and unsatisfiable fractions
    Fractions,
    /// trivially satisfiable and trivially unsatisfiable fractions
    Trivial,
}

impl PlotKind {
    pub const ALL: [PlotKind; 3] = [PlotKind::Times, PlotKind::Fractions, PlotKind::Trivial];

    pub fn name(self) -> &'static str {
        match self {
            PlotKind::Times => "times",
            PlotKind::Fractions => "fractions",
            PlotKind::Trivial => "trivial",
        }
    }
}

/// Data columns: L/N, sat, unsat, trivially sat, trivially unsat, then one
/// column of milliseconds per percentile.
pub fn plot_data(stats: &[PointStats], percentiles: &[Percentile]) -> String {
    let mut s = String::from("# L/N frac_sat frac_unsat frac_trivial_sat frac_trivial_unsat");
    for q in percentiles {
        s.push(' ');
        s.push_str(&q.column());
    }
    s.push('\n');
    for p in stats {
        let _ = write!(
            s,
            "{} {} {} {} {}",
            p.l as f64 / p.vars as f64,
            p.frac_sat(),
            p.frac_unsat(),
            p.frac_trivially_sat(),
            p.frac_trivially_unsat()
        );
        for q in percentiles {
            let t = p.times.iter().find(|(pq, _)| pq == q).map(|(_, t)| format_ms(*t));
            let _ = write!(s, " {}", t.as_deref().unwrap_or("NaN"));
        }
        s.push('\n');
    }
    s
}

fn series(out: &mut Vec<String>, column: usize, style: usize, title: &str) {
    out.push(format!("'{DATA_FILE}' using 1:{column} with lines linestyle {style} title '{title}'"));
    out.push(format!("'{DATA_FILE}' using 1:{column} every 5 with points linestyle {style} notitle"));
}

pub fn emit_plot_script(stats: &[PointStats], kind: PlotKind, percentiles: &[Percentile]) -> String {
    let mut s = String::new();
    let name = kind.name();
    s.push_str("set terminal svg size 800,600\n");
    let _ = writeln!(s, "set output '{name}.svg'");
    s.push_str("set xlabel 'L/N'\nset key top right\n");
    if let (Some(first), Some(last)) = (stats.first(), stats.last()) {
        let _ = writeln!(
            s,
            "set xrange [{}:{}]",
            first.l as f64 / first.vars as f64,
            last.l as f64 / last.vars as f64
        );
    }
    let mut plots = Vec::new();
    match kind {
        PlotKind::Times => {
            s.push_str("set logscale y\nset ylabel 'decision time (ms)'\n");
            for (i, q) in percentiles.iter().enumerate() {
                series(&mut plots, 6 + i, i + 1, &format!("{q}th percentile"));
            }
        }
        PlotKind::Fractions => {
            s.push_str("set yrange [0:1]\nset ylabel 'fraction'\n");
            series(&mut plots, 2, 1, "satisfiable");
            series(&mut plots, 3, 2, "unsatisfiable");
        }
        PlotKind::Trivial => {
            s.push_str("set yrange [0:1]\nset ylabel 'fraction'\n");
            series(&mut plots, 4, 1, "trivially satisfiable");
            series(&mut plots, 5, 2, "trivially unsatisfiable");
        }
    }
    for i in 1..=plots.len().div_ceil(2) {
        let _ = writeln!(s, "set style line {i} linetype {i} pointtype {}", i + 3);
    }
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

/// Writes the data file and one script per plot kind into `dir`.
pub fn write_plot_bundle(dir: &Path, stats: &[PointStats], percentiles: &[Percentile]) -> Result<(), CampaignError> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(DATA_FILE), plot_data(stats, percentiles))?;
    for kind in PlotKind::ALL {
        std::fs::write(dir.join(format!("{}.gp", kind.name())), emit_plot_script(stats, kind, percentiles))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    fn point(l: usize, sat: usize) -> PointStats {
        PointStats {
            l,
            vars: 2,
            n: 4,
            sat,
            unsat: 4 - sat,
            timeout: 0,
            trivially_sat: 0,
            trivially_unsat: 0,
            times: vec![("50".parse().unwrap(), Duration::from_micros(1500))],
        }
    }

    #[test]
    fn data_rows() {
        let q = vec!["50".parse().unwrap()];
        let d = plot_data(&[point(1, 4), point(3, 1)], &q);
        let lines: Vec<&str> = d.lines().collect();
        assert_eq!(lines[1], "0.5 1 0 0 0 1.500000");
        assert_eq!(lines[2], "1.5 0.25 0.75 0 0 1.500000");
    }

    #[test]
    fn script_structure() {
        let q: Vec<Percentile> = vec!["50".parse().unwrap(), "90".parse().unwrap()];
        let t = emit_plot_script(&[point(1, 4)], PlotKind::Times, &q);
        assert!(t.contains("set logscale y"));
        assert_eq!(t.matches("with lines").count(), 2);
        assert_eq!(t.matches("every 5 with points").count(), 2);
        let f = emit_plot_script(&[point(1, 4)], PlotKind::Fractions, &q);
        assert!(!f.contains("logscale") && f.contains("using 1:2") && f.contains("using 1:3"));
    }
}
