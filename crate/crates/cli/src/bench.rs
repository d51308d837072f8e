//! Attack scaling benchmark: honest instances per dimension, timed in
//! stages (system build, elimination, full recovery), with a log-log
//! least-squares slope over the per-dimension medians.

use std::time::Instant;

use matbreak_core::{kex, kex_attack, FileMeta, Modulus, SeededRng};

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub trials: u32,
    pub modulus: u64,
    pub retry_budget: u32,
    pub exponent_max: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            dims: vec![2, 4, 8, 12, 16],
            trials: 5,
            // fixed 31-bit prime
            modulus: 2_147_483_647,
            retry_budget: kex_attack::DEFAULT_RETRY_BUDGET,
            exponent_max: kex::DEFAULT_EXPONENT_MAX,
        }
    }
}

/// One timed trial.
#[derive(Debug, Clone)]
pub struct BenchRecord {
    pub dim: usize,
    pub modulus_bits: u32,
    pub trial: u32,
    pub build_ms: f64,
    pub solve_ms: f64,
    pub total_ms: f64,
    pub attempts: u32,
}

#[derive(Debug, Clone)]
pub struct BenchOutcome {
    pub records: Vec<BenchRecord>,
    /// (dim, median total_ms) per benched dimension.
    pub medians: Vec<(usize, f64)>,
    /// Least-squares slope of log(median total) against log(dim); None
    /// with fewer than two dimensions.
    pub slope: Option<f64>,
}

/// Runs the benchmark. Attempt counts are deterministic per seed; wall
/// times of course are not.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchOutcome, String> {
    let modulus = Modulus::new(cfg.modulus).map_err(|e| e.to_string())?;
    if !modulus.is_prime() {
        return Err(format!("bench modulus {} must be prime", cfg.modulus));
    }
    if cfg.dims.is_empty() {
        return Err("dims list is empty".into());
    }
    let mut records = Vec::new();
    for &dim in &cfg.dims {
        for trial in 0..cfg.trials {
            let stream_index = ((dim as u64) << 32) | trial as u64;
            let mut rng = SeededRng::stream(cfg.seed, stream_index);
            let params = kex::keygen(modulus, dim, &mut rng).map_err(|e| e.to_string())?;
            let alice = kex::sample_secret(&mut rng, cfg.exponent_max);
            let bob = kex::sample_secret(&mut rng, cfg.exponent_max);
            let (transcript, key) = kex::run_exchange(&params, &alice, &bob, FileMeta::new());

            let t0 = Instant::now();
            let system = kex_attack::build_relin_system(&transcript.params, &transcript.c1);
            let build = t0.elapsed();

            let t1 = Instant::now();
            system.solution().map_err(|e| e.to_string())?;
            let solve = t1.elapsed();

            let t2 = Instant::now();
            let report = kex_attack::recover_from_system(
                &system,
                &transcript.c2,
                &mut rng,
                cfg.retry_budget,
                Some(&key),
            )
            .map_err(|e| e.to_string())?;
            let extract = t2.elapsed();

            if report.verified != Some(true) {
                return Err(format!("bench instance dim={dim} trial={trial} not verified"));
            }
            records.push(BenchRecord {
                dim,
                modulus_bits: modulus.bits(),
                trial,
                build_ms: build.as_secs_f64() * 1e3,
                solve_ms: solve.as_secs_f64() * 1e3,
                total_ms: (build + solve + extract).as_secs_f64() * 1e3,
                attempts: report.attempts,
            });
        }
    }
    let medians: Vec<(usize, f64)> = cfg
        .dims
        .iter()
        .map(|&dim| {
            let mut totals: Vec<f64> = records
                .iter()
                .filter(|r| r.dim == dim)
                .map(|r| r.total_ms)
                .collect();
            totals.sort_by(|a, b| a.partial_cmp(b).unwrap());
            (dim, median_of_sorted(&totals))
        })
        .collect();
    let slope = fit_log_log_slope(&medians);
    Ok(BenchOutcome {
        records,
        medians,
        slope,
    })
}

fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

/// Least squares on (ln dim, ln median_ms). Sub-nanosecond medians are
/// clamped so the logarithm stays finite.
pub fn fit_log_log_slope(medians: &[(usize, f64)]) -> Option<f64> {
    if medians.len() < 2 {
        return None;
    }
    let points: Vec<(f64, f64)> = medians
        .iter()
        .map(|&(n, ms)| ((n as f64).ln(), ms.max(1e-6).ln()))
        .collect();
    let count = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / count;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / count;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 - mean_x) * (p.1 - mean_y))
        .sum();
    Some(sxy / sxx)
}

/// Fixed CSV layout: n, modulus_bits, trial, build_ms, solve_ms,
/// total_ms, attempts. The seed and tool version ride along in a leading
/// `#` comment so the run stays reproducible from the file alone.
pub fn to_csv(cfg: &BenchConfig, records: &[BenchRecord]) -> String {
    let mut out = format!(
        "# version={} generator={} seed={}\n",
        env!("CARGO_PKG_VERSION"),
        matbreak_core::GENERATOR_NAME,
        cfg.seed
    );
    out.push_str("n,modulus_bits,trial,build_ms,solve_ms,total_ms,attempts\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{:.3},{:.3},{:.3},{}\n",
            r.dim, r.modulus_bits, r.trial, r.build_ms, r.solve_ms, r.total_ms, r.attempts
        ));
    }
    out
}
