//! One function per subcommand. Each returns the bytes it would emit so the
//! output can be compared across runs.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use hlmoments::arith::cache::{sync_cache, CacheStats};
use hlmoments::arith::Neumaier;
use hlmoments::correlations::{
    avg_sq_error, error_term, exponent_fit, lambda0_correlation, lambda_correlation,
    lemma1_residual, ErrorStat,
};
use hlmoments::moments::{
    enumerate_expansion, expansion_moment, moment_reports, window_moments, MomentReport,
};
use hlmoments::{LambdaTable, SingularSeries, SingularValue, Tuple};

pub const MOMENTS_HEADER: &str = "N,H,K,M_K,main_term,ratio,range_ok";
pub const CONJECTURE2_HEADER: &str = "k,H,x,V,normalized";

/// Runs `f` on a pool of `threads` workers (rayon's default when `None`).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Parameter(format!("cannot start {n} threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn parse_tuple(cfg: &RunConfig) -> CliResult<Tuple> {
    let raw = cfg
        .tuple
        .as_deref()
        .ok_or_else(|| CliError::Parameter("--tuple is required".into()))?;
    Ok(raw.parse()?)
}

fn build_table(cfg: &RunConfig, limit: u64) -> CliResult<LambdaTable> {
    Ok(LambdaTable::build(limit, &cfg.sieve_config())?)
}

pub fn cmd_sieve(cfg: &RunConfig) -> CliResult<CacheStats> {
    let limit = cfg.require_n()?;
    if cfg.cache_dir.is_none() {
        return Err(CliError::Parameter("--cache-dir is required".into()));
    }
    with_threads(cfg.threads, || sync_cache(limit, &cfg.sieve_config()))?.map_err(Into::into)
}

pub fn moments_csv(reports: &[MomentReport]) -> String {
    let mut out = String::from(MOMENTS_HEADER);
    out.push('\n');
    for r in reports {
        let ratio = r.ratio.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.n, r.h, r.k, r.m_k_empirical, r.main_term, ratio, r.range_ok
        );
    }
    out
}

pub fn run_moments(cfg: &RunConfig) -> CliResult<Vec<MomentReport>> {
    let n = cfg.require_n()?;
    let hs = cfg.h_list()?;
    let ks = cfg.k_list(2);
    let table = build_table(cfg, n + hs.iter().max().unwrap())?;
    with_threads(cfg.threads, || -> CliResult<Vec<MomentReport>> {
        let mut all = Vec::new();
        for &h in &hs {
            all.extend(moment_reports(&table, n, h, &ks)?);
        }
        Ok(all)
    })?
}

/// moments.csv: one row per `(H, K)`, H outermost.
pub fn cmd_moments(cfg: &RunConfig) -> CliResult<String> {
    Ok(moments_csv(&run_moments(cfg)?))
}

#[derive(Serialize)]
struct SingularJson<'a> {
    tuple: &'a [u64],
    pmax: u64,
    value: f64,
    tail_bound: f64,
}

fn singular_json(tuple: &Tuple, v: &SingularValue) -> String {
    serde_json::to_string(&SingularJson {
        tuple: tuple.offsets(),
        pmax: v.pmax,
        value: v.value,
        tail_bound: v.tail_bound,
    })
    .expect("plain struct serialises")
}

/// `{"tuple":[...],"pmax":...,"value":...,"tail_bound":...}`
pub fn cmd_singular(cfg: &RunConfig) -> CliResult<String> {
    let tuple = parse_tuple(cfg)?;
    let v = SingularSeries::new(cfg.pmax())?.eval(&tuple)?;
    Ok(singular_json(&tuple, &v))
}

/// Same shape as [`cmd_singular`], for 𝔖₀.
pub fn cmd_s0(cfg: &RunConfig) -> CliResult<String> {
    let tuple = parse_tuple(cfg)?;
    let v = SingularSeries::new(cfg.pmax())?.centered(&tuple)?;
    Ok(singular_json(&tuple, &v))
}

#[derive(Serialize)]
struct CorrelationJson<'a> {
    tuple: &'a [u64],
    x: u64,
    pmax: u64,
    lambda_correlation: f64,
    lambda0_correlation: f64,
    singular_series: f64,
    s0: f64,
    error_term: f64,
    lemma1_residual: f64,
}

/// Correlation sums, error term and the inclusion–exclusion residual at `x = --n`.
pub fn cmd_correlations(cfg: &RunConfig) -> CliResult<String> {
    let tuple = parse_tuple(cfg)?;
    let x = cfg.require_n()?;
    let series = SingularSeries::new(cfg.pmax())?;
    let table = build_table(cfg, x + tuple.max_offset())?;
    let json = with_threads(cfg.threads, || -> CliResult<String> {
        let out = CorrelationJson {
            tuple: tuple.offsets(),
            x,
            pmax: series.pmax(),
            lambda_correlation: lambda_correlation(&table, x, &tuple)?,
            lambda0_correlation: lambda0_correlation(&table, x, &tuple)?,
            singular_series: series.eval(&tuple)?.value,
            s0: series.centered(&tuple)?.value,
            error_term: error_term(&table, x, &tuple, &series)?,
            lemma1_residual: lemma1_residual(&table, x, &tuple, &series)?,
        };
        Ok(serde_json::to_string(&out)?)
    })??;
    Ok(json)
}

#[derive(Debug)]
pub struct Conjecture2Run {
    pub stats: Vec<ErrorStat>,
    pub slope: Option<f64>,
}

pub fn run_conjecture2(cfg: &RunConfig) -> CliResult<Conjecture2Run> {
    let k = cfg.k_list(1)[0] as usize;
    let h = cfg.h_list()?[0];
    if h < k as u64 {
        return Err(CliError::Parameter(format!(
            "H = {h} < k = {k}: there are no tuples of distinct offsets"
        )));
    }
    let grid = cfg.x_grid()?;
    let pmax = cfg.pmax.unwrap_or((10 * h).max(1_000_000));
    let series = SingularSeries::new(pmax)?;
    let table = build_table(cfg, grid.last().unwrap() + h)?;
    let stats = with_threads(cfg.threads, || {
        grid.iter()
            .map(|&x| avg_sq_error(&table, x, h, k, &series))
            .collect::<hlmoments::Result<Vec<_>>>()
    })??;
    let points: Vec<(f64, f64)> = stats.iter().map(|s| (s.x as f64, s.v)).collect();
    Ok(Conjecture2Run {
        slope: exponent_fit(&points).ok(),
        stats,
    })
}

pub fn conjecture2_csv(run: &Conjecture2Run) -> String {
    let mut out = String::from(CONJECTURE2_HEADER);
    out.push('\n');
    for s in &run.stats {
        let _ = writeln!(out, "{},{},{},{},{}", s.k, s.h, s.x, s.v, s.normalized);
    }
    match run.slope {
        Some(v) => {
            let _ = writeln!(out, "# slope={v}");
        }
        None => out.push_str("# slope=NaN\n"),
    }
    out
}

/// conjecture2.csv plus a trailing `# slope=<value>` line.
pub fn cmd_conjecture2(cfg: &RunConfig) -> CliResult<String> {
    Ok(conjecture2_csv(&run_conjecture2(cfg)?))
}

#[derive(Debug)]
pub struct IdentityReport {
    pub lines: Vec<String>,
    pub passed: bool,
}

const IDENTITY_TUPLES: [&[u64]; 6] = [
    &[0],
    &[0, 2],
    &[0, 2, 6],
    &[1, 4, 10],
    &[0, 6, 12],
    &[3, 11, 20],
];

/// Expansion-vs-window moments for K = 1..=kmax, plus the Λ₀ inclusion–exclusion
/// and 𝔖₀ Möbius inversion on a fixed set of tuples.
pub fn cmd_identity_suite(cfg: &RunConfig) -> CliResult<IdentityReport> {
    let n = cfg.require_n()?;
    let h = cfg.h_list()?[0];
    let kmax = cfg.kmax.unwrap_or(4);
    enumerate_expansion(kmax)?;
    let table = build_table(cfg, n + h.max(20))?;
    let series = SingularSeries::new(cfg.pmax.unwrap_or(100_000))?;
    with_threads(cfg.threads, || -> CliResult<IdentityReport> {
        let mut lines = Vec::new();
        let mut passed = true;
        let mut record = |ok: bool, line: String| {
            passed &= ok;
            lines.push(format!("{} {line}", if ok { "PASS" } else { "FAIL" }));
        };
        let window = window_moments(&table, n, h, kmax as usize)?;
        for k in 1..=kmax {
            let w = window[k as usize - 1];
            let e = expansion_moment(&table, n, h, k)?;
            let diff = (e - w).abs();
            record(
                diff <= 1e-9 * (1.0 + w.abs()),
                format!("expansion K={k} N={n} H={h}: window={w} expansion={e} |diff|={diff:e}"),
            );
        }
        for offs in IDENTITY_TUPLES {
            let tuple = Tuple::new(offs.to_vec())?;
            let k = tuple.len() as u32;
            let direct = lambda0_correlation(&table, n, &tuple)?;
            let mut signed = Neumaier::new();
            for mask in 0..(1u32 << k) {
                let sign = if (k - mask.count_ones()).is_multiple_of(2) {
                    1.0
                } else {
                    -1.0
                };
                signed.add(sign * lambda_correlation(&table, n, &tuple.subset(mask))?);
            }
            let diff = (direct - signed.value()).abs();
            record(
                diff <= 1e-8 * direct.abs().max(1.0),
                format!("inclusion-exclusion {tuple} x={n}: |diff|={diff:e}"),
            );
            let target = series.eval(&tuple)?;
            let mut sum = Neumaier::new();
            let mut tails = target.tail_bound;
            for mask in 0..(1u32 << k) {
                let c = series.centered(&tuple.subset(mask))?;
                sum.add(c.value);
                tails += c.tail_bound;
            }
            let diff = (sum.value() - target.value).abs();
            record(
                diff <= tails + 1e-12,
                format!(
                    "mobius-inversion {tuple} pmax={}: |diff|={diff:e} tails={tails:e}",
                    series.pmax()
                ),
            );
        }
        Ok(IdentityReport { lines, passed })
    })?
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(CliError::Io)
}

/// Writes moments.csv, conjecture2.csv, two-column plot data and a gnuplot script into `dir`.
pub fn cmd_report(cfg: &RunConfig, dir: &Path) -> CliResult<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let reports = run_moments(cfg)?;
    write_file(&dir.join("moments.csv"), &moments_csv(&reports))?;
    let mut written = vec!["moments.csv".to_string()];

    let mut ks: Vec<u32> = reports.iter().map(|r| r.k).collect();
    ks.sort_unstable();
    ks.dedup();
    let mut script = String::from("set logscale x\nset xlabel 'H'\nset ylabel 'M_K / main term'\n");
    let mut plots = Vec::new();
    for k in ks {
        let mut data = String::from("# H ratio\n");
        for r in reports.iter().filter(|r| r.k == k) {
            if let Some(ratio) = r.ratio {
                let _ = writeln!(data, "{} {}", r.h, ratio);
            }
        }
        let name = format!("ratio_K{k}.dat");
        write_file(&dir.join(&name), &data)?;
        plots.push(format!("'{name}' using 1:2 with linespoints title 'K={k}'"));
        written.push(name);
    }
    let _ = writeln!(
        script,
        "set terminal pngcairo\nset output 'moments.png'\nplot {}",
        plots.join(", ")
    );

    if cfg.x_min.is_some() {
        let run = run_conjecture2(cfg)?;
        write_file(&dir.join("conjecture2.csv"), &conjecture2_csv(&run))?;
        let mut data = String::from("# x V\n");
        for s in &run.stats {
            let _ = writeln!(data, "{} {}", s.x, s.v);
        }
        write_file(&dir.join("conjecture2.dat"), &data)?;
        let _ = writeln!(
            script,
            "set output 'conjecture2.png'\nset logscale xy\nset xlabel 'x'\nset ylabel 'V'\nplot 'conjecture2.dat' using 1:2 with linespoints title 'sum of E^2'"
        );
        written.push("conjecture2.csv".into());
        written.push("conjecture2.dat".into());
    }
    write_file(&dir.join("plots.gp"), &script)?;
    written.push("plots.gp".into());
    Ok(written)
}
