use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::sync::mpsc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::generate::{edge_target, generate_instance, GenerateError};
use super::{run_algorithm, Algorithm};
use crate::exact::{ExactError, DEFAULT_BUDGET};
use crate::fixtures;
use crate::graph::{validate_solution, EddInstance};

pub const CSV_HEADER: &str = "algo,n,r,d_limit,gamma,rho,delta,seed,cost,runtime_ms,status";

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep config: {0}")]
    Config(String),
    #[error("cannot parse sweep config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

fn default_gamma() -> f64 {
    20.0
}

fn default_repetitions() -> usize {
    1
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

fn default_true() -> bool {
    true
}

/// Grid of experiment parameters. Destination counts come either from `r`
/// (absolute) or `rho` (fraction of `n`, rounded, at least 1). Built-in
/// instances named in `fixtures` are run at every `d_limit` as extra cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub fixtures: Vec<String>,
    #[serde(default)]
    pub n: Vec<usize>,
    #[serde(default)]
    pub r: Vec<usize>,
    #[serde(default)]
    pub rho: Vec<f64>,
    pub d_limit: Vec<u32>,
    #[serde(default)]
    pub delta: Vec<f64>,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub exact_budget: u64,
    /// When false, `runtime_ms` is written as 0 so repeated sweeps are byte-identical.
    #[serde(default = "default_true")]
    pub record_runtime: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    BudgetExceeded,
    Invalid,
}

/// One CSV row: realised instance parameters, algorithm, cost and runtime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub algo: Algorithm,
    pub n: usize,
    pub r: usize,
    pub d_limit: u32,
    pub gamma: f64,
    pub rho: f64,
    pub delta: f64,
    pub seed: u64,
    pub cost: Option<f64>,
    pub runtime_ms: f64,
    pub status: Status,
}

#[derive(Debug, Clone, Copy)]
enum Source {
    Generated { n: usize, r: usize, delta: f64 },
    Fixture(usize),
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    source: Source,
    d_limit: u32,
    seed: u64,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self, SweepError> {
        let config: SweepConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        let fail = |m: String| Err(SweepError::Config(m));
        if self.algorithms.is_empty() {
            return fail("`algorithms` is empty".into());
        }
        if self.d_limit.is_empty() {
            return fail("`d_limit` needs at least one value".into());
        }
        let known = fixtures::all();
        if let Some(name) = self.fixtures.iter().find(|f| !known.iter().any(|(k, _)| k == f)) {
            return fail(format!("unknown fixture `{name}`"));
        }
        if self.n.is_empty() {
            if self.fixtures.is_empty() {
                return fail("give `n` (random instances) or `fixtures`".into());
            }
        } else {
            if self.delta.is_empty() {
                return fail("`delta` needs at least one value".into());
            }
            if self.r.is_empty() == self.rho.is_empty() {
                return fail("give exactly one of `r` or `rho`".into());
            }
        }
        if let Some(rho) = self.rho.iter().find(|&&p| !(p > 0.0 && p <= 1.0)) {
            return fail(format!("rho {rho} is outside (0, 1]"));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return fail(format!("gamma {} must be positive", self.gamma));
        }
        if self.repetitions == 0 {
            return fail("`repetitions` must be at least 1".into());
        }
        for &n in &self.n {
            if n == 0 {
                return fail("node counts must be positive".into());
            }
            for &r in &self.r {
                if r == 0 || r > n {
                    return fail(format!("r = {r} is outside 1..={n}"));
                }
            }
            for &delta in &self.delta {
                let m = edge_target(n, delta);
                if m < n - 1 || m > n * (n - 1) / 2 {
                    return fail(format!("delta {delta} is infeasible for n = {n}"));
                }
            }
        }
        Ok(())
    }

    fn destination_counts(&self, n: usize) -> Vec<usize> {
        if self.r.is_empty() {
            self.rho
                .iter()
                .map(|&p| ((p * n as f64).round() as usize).clamp(1, n))
                .collect()
        } else {
            self.r.clone()
        }
    }

    // The instance seed ignores d_limit so a hop-limit sweep reuses the same graphs.
    fn cells(&self) -> Vec<Cell> {
        let known = fixtures::all();
        let mut cells = Vec::new();
        for name in &self.fixtures {
            let index = known.iter().position(|(k, _)| k == name).expect("validated");
            for &d_limit in &self.d_limit {
                cells.push(Cell {
                    source: Source::Fixture(index),
                    d_limit,
                    seed: self.seed,
                });
            }
        }
        for (ni, &n) in self.n.iter().enumerate() {
            for (ri, r) in self.destination_counts(n).into_iter().enumerate() {
                for (di, &delta) in self.delta.iter().enumerate() {
                    for rep in 0..self.repetitions {
                        let key = [ni as u64, ri as u64, di as u64, rep as u64];
                        let seed = key.iter().fold(splitmix64(self.seed), |acc, &k| splitmix64(acc ^ k));
                        for &d_limit in &self.d_limit {
                            cells.push(Cell {
                                source: Source::Generated { n, r, delta },
                                d_limit,
                                seed,
                            });
                        }
                    }
                }
            }
        }
        cells
    }
}

fn build(config: &SweepConfig, cell: &Cell) -> Result<EddInstance, GenerateError> {
    match cell.source {
        Source::Generated { n, r, delta } => generate_instance(n, r, delta, config.gamma, cell.d_limit, cell.seed),
        Source::Fixture(index) => {
            let mut file = fixtures::all().swap_remove(index).1.to_file();
            file.gamma = config.gamma;
            file.d_limit = cell.d_limit;
            Ok(file.into_instance()?)
        }
    }
}

fn run_cell(config: &SweepConfig, cell: &Cell) -> Result<Vec<SweepRow>, GenerateError> {
    let instance = build(config, cell)?;
    let mut rows = Vec::with_capacity(config.algorithms.len());
    for &algo in &config.algorithms {
        let start = Instant::now();
        let outcome = run_algorithm(&instance, algo, cell.seed, config.exact_budget);
        let elapsed = start.elapsed().as_secs_f64() * 1e3;
        let (cost, status) = match outcome {
            Ok(solution) => {
                let status = match validate_solution(&instance, &solution) {
                    Ok(()) => Status::Ok,
                    Err(violations) => {
                        log::error!(
                            "{algo} produced an infeasible plan (seed {}): {violations:?}",
                            cell.seed
                        );
                        Status::Invalid
                    }
                };
                (Some(solution.total_cost()), status)
            }
            Err(ExactError::BudgetExceeded { .. }) => (None, Status::BudgetExceeded),
            Err(other) => {
                log::error!("{algo} failed (seed {}): {other}", cell.seed);
                (None, Status::Invalid)
            }
        };
        rows.push(SweepRow {
            algo,
            n: instance.graph().node_count(),
            r: instance.destinations().len(),
            d_limit: instance.d_limit(),
            gamma: instance.gamma(),
            rho: instance.rho(),
            delta: instance.delta(),
            seed: cell.seed,
            cost,
            runtime_ms: if config.record_runtime { elapsed } else { 0.0 },
            status,
        });
    }
    Ok(rows)
}

/// Runs every grid cell (in parallel) and streams rows to `sink` in cell order.
///
/// Each cell's rows are written and flushed as soon as all earlier cells are
/// done, so a crash leaves a valid CSV prefix.
pub fn run_sweep<W: Write>(config: &SweepConfig, sink: Option<W>) -> Result<Vec<SweepRow>, SweepError> {
    config.validate()?;
    let cells = config.cells();
    let mut writer = sink.map(|w| csv::WriterBuilder::new().has_headers(false).from_writer(w));
    if let Some(w) = writer.as_mut() {
        w.write_record(CSV_HEADER.split(','))?;
        w.flush()?;
    }

    let (tx, rx) = mpsc::channel::<(usize, Vec<SweepRow>)>();
    let mut rows = Vec::new();
    std::thread::scope(|scope| -> Result<(), SweepError> {
        let cells = &cells;
        scope.spawn(move || {
            cells.par_iter().enumerate().for_each_with(tx, |tx, (i, cell)| {
                let rows = run_cell(config, cell).expect("validated config generates valid instances");
                // the receiver only disappears if writing failed
                let _ = tx.send((i, rows));
            });
        });
        let mut pending: BTreeMap<usize, Vec<SweepRow>> = BTreeMap::new();
        let mut next = 0;
        for (i, cell_rows) in rx {
            pending.insert(i, cell_rows);
            while let Some(ready) = pending.remove(&next) {
                if let Some(w) = writer.as_mut() {
                    for row in &ready {
                        w.serialize(row)?;
                    }
                    w.flush()?;
                }
                rows.extend(ready);
                next += 1;
            }
        }
        Ok(())
    })?;
    Ok(rows)
}

pub fn write_rows<W: Write>(rows: &[SweepRow], sink: W) -> Result<(), SweepError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(sink);
    w.write_record(CSV_HEADER.split(','))?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows<R: Read>(source: R) -> Result<Vec<SweepRow>, SweepError> {
    let mut reader = csv::Reader::from_reader(source);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header.join(",") != CSV_HEADER {
        return Err(SweepError::Config(format!(
            "unexpected CSV header `{}`",
            header.join(",")
        )));
    }
    Ok(reader.deserialize().collect::<Result<Vec<SweepRow>, _>>()?)
}

/// Mean cost per (grid point, algorithm) over successful rows.
pub fn summarize(rows: &[SweepRow]) -> String {
    type Key = (usize, usize, u32, u64, Algorithm);
    let mut acc: BTreeMap<Key, (f64, usize, usize)> = BTreeMap::new();
    for row in rows {
        let entry = acc
            .entry((row.n, row.r, row.d_limit, row.delta.to_bits(), row.algo))
            .or_insert((0.0, 0, 0));
        match (row.status, row.cost) {
            (Status::Ok, Some(c)) => {
                entry.0 += c;
                entry.1 += 1;
            }
            _ => entry.2 += 1,
        }
    }
    let mut out = String::from("n\tr\td_limit\tD_limit\tdelta\talgo\tmean_cost\tok\tskipped\n");
    for ((n, r, d, delta, algo), (sum, ok, skipped)) in acc {
        let mean = if ok > 0 {
            format!("{:.2}", sum / ok as f64)
        } else {
            "-".into()
        };
        out.push_str(&format!(
            "{n}\t{r}\t{d}\t{}\t{:.3}\t{algo}\t{mean}\t{ok}\t{skipped}\n",
            d + 1,
            f64::from_bits(delta)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> SweepConfig {
        SweepConfig::from_toml(
            r#"
            algorithms = ["exact", "nste", "greedy", "random"]
            n = [8]
            r = [4]
            d_limit = [2]
            delta = [1.5]
            repetitions = 2
            seed = 5
            record_runtime = false
            "#,
        )
        .unwrap()
    }

    #[test]
    fn one_row_per_algorithm_and_repetition() {
        let rows = run_sweep::<Vec<u8>>(&tiny(), None).unwrap();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r.status == Status::Ok));
        assert!(rows.iter().all(|r| r.cost.unwrap() >= r.gamma));
    }

    #[test]
    fn csv_round_trip() {
        let mut buf = Vec::new();
        let rows = run_sweep(&tiny(), Some(&mut buf)).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with(CSV_HEADER));
        assert_eq!(read_rows(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn budget_exceedance_is_a_status() {
        let mut config = tiny();
        config.exact_budget = 1;
        let rows = run_sweep::<Vec<u8>>(&config, None).unwrap();
        let exact: Vec<_> = rows.iter().filter(|r| r.algo == Algorithm::Exact).collect();
        assert!(exact
            .iter()
            .all(|r| r.status == Status::BudgetExceeded && r.cost.is_none()));
        let mut buf = Vec::new();
        write_rows(&rows, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().contains(",,0.0,budget-exceeded"));
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = tiny();
        c.rho = vec![0.5];
        assert!(c.validate().is_err());
        let mut c = tiny();
        c.delta = vec![0.1];
        assert!(c.validate().is_err());
        let mut c = tiny();
        c.r = vec![9];
        assert!(c.validate().is_err());
        assert!(SweepConfig::from_toml("algorithms = [\"bogus\"]").is_err());
    }

    #[test]
    fn realised_densities_are_recorded() {
        let rows = run_sweep::<Vec<u8>>(&tiny(), None).unwrap();
        for row in rows {
            assert_eq!(row.rho, 0.5);
            assert_eq!(row.delta, 1.5);
        }
    }

    #[test]
    fn fixture_cells_reproduce_the_worked_example() {
        let config = SweepConfig::from_toml(
            r#"
            algorithms = ["exact", "nste", "greedy"]
            fixtures = ["ten_node"]
            d_limit = [1]
            "#,
        )
        .unwrap();
        let rows = run_sweep::<Vec<u8>>(&config, None).unwrap();
        let costs: Vec<(Algorithm, Option<f64>)> = rows.iter().map(|r| (r.algo, r.cost)).collect();
        assert_eq!(
            costs,
            [
                (Algorithm::Exact, Some(45.0)),
                (Algorithm::Nste, Some(45.0)),
                (Algorithm::Greedy, Some(45.0))
            ]
        );
        assert!(SweepConfig::from_toml("algorithms = [\"nste\"]\nfixtures = [\"nope\"]\nd_limit = [1]").is_err());
    }
}
