//! Benchmark support: seeded random suites, timed measurement runs over
//! growing suite sizes, and a least-squares fit of time against size.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::minilang::ast::{Program, Ty};
use crate::pipeline::{measure, MeasureConfig, MeasureError, MeasureItem};
use crate::trace::{execute_suite, TestDatum};
use crate::value::Value;

/// Random inputs for the entry function; integers are drawn from
/// [-100, 100] so small programs still hit both branch polarities.
pub fn random_suite(p: &Program, size: usize, seed: u64) -> Vec<TestDatum> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entry = p.entry_function();
    (0..size)
        .map(|i| {
            let inputs = entry
                .param_decls()
                .iter()
                .map(|d| {
                    let v = match d.ty {
                        Ty::Int => Value::Int(rng.gen_range(-100..=100)),
                        Ty::Bool => Value::Bool(rng.gen()),
                        Ty::Array(n) => Value::Array(
                            (0..n).map(|_| rng.gen_range(-100..=100)).collect::<Vec<_>>().into(),
                        ),
                        Ty::Loc => unreachable!("parameters are never loc-typed"),
                    };
                    (d.name.as_str(), v)
                })
                .collect();
            TestDatum::new(&format!("r{i}"), inputs)
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct BenchPoint {
    pub size: usize,
    /// Seconds to only execute the suite, no measurement.
    pub baseline_secs: f64,
    /// Seconds for the full measurement pipeline on the same suite.
    pub measure_secs: f64,
}

impl BenchPoint {
    pub fn overhead(&self) -> f64 {
        self.measure_secs / self.baseline_secs
    }
}

#[derive(Debug, Clone)]
pub struct BenchSeries {
    pub tag: String,
    pub points: Vec<BenchPoint>,
}

impl BenchSeries {
    /// Fit of measurement time against suite size.
    pub fn fit(&self) -> LinearFit {
        let xs: Vec<f64> = self.points.iter().map(|pt| pt.size as f64).collect();
        let ys: Vec<f64> = self.points.iter().map(|pt| pt.measure_secs).collect();
        linear_fit(&xs, &ys)
    }

    pub fn max_overhead(&self) -> f64 {
        self.points.iter().map(BenchPoint::overhead).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares. `r2` is 1.0 when the ys do not vary at all.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LinearFit {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    LinearFit {
        slope,
        intercept,
        r2,
    }
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

/// Times the given objectives over random suites of each size. Each
/// timing is the median of `reps` runs; the baseline executes the suite
/// without any measurement. Reps are interleaved across sizes so that
/// slow periods of background load hit every size about equally instead
/// of distorting a single point.
pub fn run_bench(
    p: &Program,
    tag: &str,
    items: &[MeasureItem],
    sizes: &[usize],
    reps: usize,
    seed: u64,
    cfg: &MeasureConfig,
) -> Result<BenchSeries, MeasureError> {
    let suites: Vec<Vec<TestDatum>> = sizes
        .iter()
        .map(|&size| random_suite(p, size, seed ^ size as u64))
        .collect();
    let mut base: Vec<Vec<f64>> = vec![Vec::with_capacity(reps); sizes.len()];
    let mut meas: Vec<Vec<f64>> = vec![Vec::with_capacity(reps); sizes.len()];
    for _ in 0..reps {
        for (i, suite) in suites.iter().enumerate() {
            let t = Instant::now();
            execute_suite(p, suite, cfg.step_limit)?;
            base[i].push(t.elapsed().as_secs_f64());
            let t = Instant::now();
            measure(p, items, suite, cfg)?;
            meas[i].push(t.elapsed().as_secs_f64());
        }
    }
    let points = sizes
        .iter()
        .zip(base)
        .zip(meas)
        .map(|((&size, b), m)| BenchPoint {
            size,
            baseline_secs: median(b),
            measure_secs: median(m),
        })
        .collect();
    Ok(BenchSeries {
        tag: tag.to_string(),
        points,
    })
}
