//! Monte Carlo tail reports: empirical tail frequencies next to the
//! closed-form bounds, with CSV and JSON renderings.

use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::bounds::{height_tail_bound, pathmax_bound, prefixmin_bound, width_tail_bound};
use crate::codec::{decode_unchecked, OrderKind};
use crate::error::Result;
use crate::lattice::{partial_sums_of, rotate_to_tree_sequence};
use crate::par::fold_range;
use crate::rng::RandomStream;
use crate::seq::ChildSequence;
use crate::stats::profile;

/// Rows continue until every defined bound is below this value, or up to
/// `m = n`, whichever comes first.
pub const ROW_BOUND_FLOOR: f64 = 1e-6;

pub const CSV_HEADER: &str = "m,emp_width_tail,width_bound,emp_height_tail,height_bound,\
emp_pathmax_tail,pathmax_bound,emp_prefixmin_tail,prefixmin_bound";

#[derive(Debug, Clone, Copy)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub kind: OrderKind,
    /// 0 = all available threads.
    pub workers: usize,
}

/// Statistics of one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    pub width: usize,
    pub height: usize,
    /// `max_i S_i` of the rotated sequence.
    pub pathmax: usize,
    /// `-min_{i <= n/2} S_i` of the shuffled, unrotated sequence.
    pub prefix_drop: usize,
}

/// One trial: shuffle, record the early prefix minimum, rotate, decode.
pub fn run_trial(c: &ChildSequence, kind: OrderKind, rng: &mut RandomStream) -> TrialOutcome {
    let mut buf = c.entries().to_vec();
    rng.shuffle(&mut buf);
    let n = buf.len();
    let prefix_drop = -partial_sums_of(&buf).prefix_min(n / 2);
    rotate_to_tree_sequence(&mut buf);
    let pathmax = partial_sums_of(&buf).max();
    let p = profile(&decode_unchecked(kind, &buf));
    TrialOutcome {
        width: p.width(),
        height: p.height(),
        pathmax: pathmax as usize,
        prefix_drop: prefix_drop as usize,
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Histograms {
    width: Vec<u64>,
    height: Vec<u64>,
    pathmax: Vec<u64>,
    prefix_drop: Vec<u64>,
}

fn bump(h: &mut Vec<u64>, at: usize, by: u64) {
    if at >= h.len() {
        h.resize(at + 1, 0);
    }
    h[at] += by;
}

fn tail(h: &[u64], from: usize) -> u64 {
    h.iter().skip(from).sum()
}

impl Histograms {
    fn add(mut self, o: TrialOutcome) -> Self {
        bump(&mut self.width, o.width, 1);
        bump(&mut self.height, o.height, 1);
        bump(&mut self.pathmax, o.pathmax, 1);
        bump(&mut self.prefix_drop, o.prefix_drop, 1);
        self
    }

    fn merge(mut self, other: Self) -> Self {
        for (mine, theirs) in [
            (&mut self.width, other.width),
            (&mut self.height, other.height),
            (&mut self.pathmax, other.pathmax),
            (&mut self.prefix_drop, other.prefix_drop),
        ] {
            for (i, k) in theirs.into_iter().enumerate() {
                if k > 0 {
                    bump(mine, i, k);
                }
            }
        }
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailRow {
    pub m: u64,
    /// Frequency of `w >= m + 2`.
    pub emp_width_tail: f64,
    pub width_bound: Option<f64>,
    /// Frequency of `h >= m`.
    pub emp_height_tail: f64,
    pub height_bound: Option<f64>,
    /// Frequency of `max S_i(rotated) >= m + 2`.
    pub emp_pathmax_tail: f64,
    pub pathmax_bound: Option<f64>,
    /// Frequency of `min_{i <= n/2} S_i <= -(m + 1)`.
    pub emp_prefixmin_tail: f64,
    pub prefixmin_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailReport {
    pub n: usize,
    pub norm_sq: u128,
    /// Exact `1_c` as `p/q`, absent for degenerate sequences.
    pub one_factor: Option<String>,
    pub trials: u64,
    pub seed: u64,
    pub kind: OrderKind,
    #[serde(skip)]
    pub wall_time_secs: f64,
    pub rows: Vec<TailRow>,
}

/// A failed domination check.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportViolation {
    pub column: &'static str,
    pub m: u64,
    pub empirical: f64,
    pub sigma: f64,
    pub bound: f64,
}

pub fn monte_carlo_report(c: &ChildSequence, cfg: &McConfig) -> Result<TailReport> {
    let start = Instant::now();
    let master = RandomStream::new(cfg.seed);
    let hist = fold_range(
        0..cfg.trials,
        cfg.workers,
        Histograms::default,
        |h, i| h.add(run_trial(c, cfg.kind, &mut master.substream(i))),
        Histograms::merge,
    );
    let inv = c.invariants();

    let last_observed = [
        hist.width.len().checked_sub(3),
        hist.height.len().checked_sub(1),
        hist.pathmax.len().checked_sub(3),
        hist.prefix_drop.len().checked_sub(2),
    ]
    .into_iter()
    .flatten()
    .max()
    .unwrap_or(0) as u64;
    let bounds_at = |m: u64| {
        [
            width_tail_bound(m, &inv).ok(),
            height_tail_bound(m, &inv).ok(),
            pathmax_bound(m, &inv).ok(),
            Some(prefixmin_bound(m as f64, &inv)),
        ]
    };
    // no statistic can reach its threshold once m >= n
    let row_cap = c.len() as u64;
    let mut floor_m = 0u64;
    while floor_m < row_cap && bounds_at(floor_m).into_iter().flatten().any(|b| b >= ROW_BOUND_FLOOR) {
        floor_m += 1;
    }

    let trials = cfg.trials as f64;
    let freq = |h: &[u64], from: u64| tail(h, from as usize) as f64 / trials;
    let rows = (0..=last_observed.max(floor_m))
        .map(|m| {
            let [width_bound, height_bound, pathmax_bound, prefixmin] = bounds_at(m);
            TailRow {
                m,
                emp_width_tail: freq(&hist.width, m + 2),
                width_bound,
                emp_height_tail: freq(&hist.height, m),
                height_bound,
                emp_pathmax_tail: freq(&hist.pathmax, m + 2),
                pathmax_bound,
                emp_prefixmin_tail: freq(&hist.prefix_drop, m + 1),
                prefixmin_bound: prefixmin.expect("always defined"),
            }
        })
        .collect();

    Ok(TailReport {
        n: c.len(),
        norm_sq: inv.norm_sq,
        one_factor: inv.one_factor.map(|r| format!("{}/{}", r.numer(), r.denom())),
        trials: cfg.trials,
        seed: cfg.seed,
        kind: cfg.kind,
        wall_time_secs: start.elapsed().as_secs_f64(),
        rows,
    })
}

fn binomial_sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

impl TailReport {
    /// Rows where a bound is below one must satisfy `emp + 4 sigma <= bound`
    /// (width, height, rotated path); the prefix-minimum column must satisfy
    /// `emp <= bound + 4 sigma` on every row. `sigma` is the binomial
    /// standard error of the empirical frequency.
    pub fn violations(&self) -> Vec<ReportViolation> {
        let mut out = Vec::new();
        for row in &self.rows {
            for (column, emp, bound) in [
                ("width", row.emp_width_tail, row.width_bound),
                ("height", row.emp_height_tail, row.height_bound),
                ("pathmax", row.emp_pathmax_tail, row.pathmax_bound),
            ] {
                let Some(bound) = bound.filter(|&b| b < 1.0) else { continue };
                let sigma = binomial_sigma(emp, self.trials);
                if emp + 4.0 * sigma > bound {
                    out.push(ReportViolation { column, m: row.m, empirical: emp, sigma, bound });
                }
            }
            let emp = row.emp_prefixmin_tail;
            let sigma = binomial_sigma(emp, self.trials);
            if emp > row.prefixmin_bound + 4.0 * sigma {
                out.push(ReportViolation {
                    column: "prefixmin",
                    m: row.m,
                    empirical: emp,
                    sigma,
                    bound: row.prefixmin_bound,
                });
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# n={}", self.n);
        let _ = writeln!(out, "# norm_sq={}", self.norm_sq);
        let _ = writeln!(out, "# one_factor={}", self.one_factor.as_deref().unwrap_or("undefined"));
        let _ = writeln!(out, "# trials={}", self.trials);
        let _ = writeln!(out, "# seed={}", self.seed);
        let _ = writeln!(out, "# kind={}", self.kind);
        out.push_str(CSV_HEADER);
        out.push('\n');
        let opt = |x: Option<f64>| x.map_or_else(|| "nan".to_string(), format_sig);
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.m,
                format_sig(r.emp_width_tail),
                opt(r.width_bound),
                format_sig(r.emp_height_tail),
                opt(r.height_bound),
                format_sig(r.emp_pathmax_tail),
                opt(r.pathmax_bound),
                format_sig(r.emp_prefixmin_tail),
                format_sig(r.prefixmin_bound),
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Format with 9 significant digits in the style of C's `%.9g`.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 9;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}").to_lowercase();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(trials: u64, seed: u64, workers: usize) -> McConfig {
        McConfig { trials, seed, kind: OrderKind::Bfs, workers }
    }

    #[test]
    fn sig_format() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(3.0), "3");
        assert_eq!(format_sig(0.5), "0.5");
        assert_eq!(format_sig(2.995926680870604), "2.99592668");
        assert_eq!(format_sig(0.000123456789123), "0.000123456789");
        assert_eq!(format_sig(1.5e-7), "1.5e-07");
        assert_eq!(format_sig(123456789.0), "123456789");
        assert_eq!(format_sig(1234567890.0), "1.23456789e+09");
    }

    #[test]
    fn two_twos_report() {
        let c = ChildSequence::new(vec![2, 2, 0, 0, 0]).unwrap();
        let r = monte_carlo_report(&c, &cfg(500, 1, 1)).unwrap();
        assert_eq!(r.rows[2].emp_height_tail, 1.0);
        assert_eq!(r.rows[1].emp_width_tail, 0.0);
        assert!(r.rows.windows(2).all(|w| w[0].m + 1 == w[1].m));
        for row in &r.rows {
            for f in [row.emp_width_tail, row.emp_height_tail, row.emp_pathmax_tail] {
                assert!((0.0..=1.0).contains(&f));
            }
        }
    }

    #[test]
    fn single_node_report() {
        let c = ChildSequence::new(vec![0]).unwrap();
        let r = monte_carlo_report(&c, &cfg(50, 3, 1)).unwrap();
        assert_eq!(r.rows[0].emp_height_tail, 1.0);
        for row in &r.rows[1..] {
            assert_eq!(
                (row.emp_width_tail, row.emp_height_tail, row.emp_pathmax_tail, row.emp_prefixmin_tail),
                (0.0, 0.0, 0.0, 0.0)
            );
            assert_eq!((row.width_bound, row.height_bound), (None, None));
        }
        assert_eq!(r.rows.len(), 2);
    }

    #[test]
    fn report_is_worker_independent() {
        let c: ChildSequence = "3^5,1^4,0^11".parse().unwrap();
        let a = monte_carlo_report(&c, &cfg(2000, 9, 1)).unwrap();
        let b = monte_carlo_report(&c, &cfg(2000, 9, 4)).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.to_json(), b.to_json());
        let other = monte_carlo_report(&c, &cfg(2000, 10, 4)).unwrap();
        assert_ne!(a.to_csv(), other.to_csv());
    }

    #[test]
    fn csv_layout() {
        let c = ChildSequence::new(vec![2, 1, 0, 0]).unwrap();
        let csv = monte_carlo_report(&c, &cfg(10, 0, 1)).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# n=4");
        assert_eq!(lines[1], "# norm_sq=5");
        assert_eq!(lines[2], "# one_factor=1/1");
        assert_eq!(lines[3], "# trials=10");
        assert_eq!(lines[4], "# seed=0");
        let header = lines.iter().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(*header, CSV_HEADER);
        assert!(lines.iter().filter(|l| !l.starts_with('#')).skip(1).all(|l| l.split(',').count() == 9));
    }
}
