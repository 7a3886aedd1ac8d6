//! Integrated squared error of spectral cdf estimates and the Monte Carlo
//! MISE sweep over a grid of `k`.

use std::fmt;
use std::io::BufRead;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::empirical::{empirical_spectral_measure, select_extremes};
use crate::error::{Error, Result};
use crate::measure::DiscreteSpectralMeasure;
use crate::mele::mele_spectral_measure;
use crate::models::SpectralModel;
use crate::norm::NormOrder;
use crate::quadrature::GaussLegendre;
use crate::sample::pseudo_observations;
use crate::table::{fmt_f64, read_table};

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

/// Cells wider than this are split before applying the Gauss rule.
const MAX_CELL: f64 = FRAC_PI_2 / 64.0;
const GAUSS_ORDER: usize = 6;

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(GAUSS_ORDER))
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if !(a >= 0.0 && a < b && b <= FRAC_PI_2) {
        return Err(Error::Parameter(format!(
            "integration interval must satisfy 0 <= a < b <= pi/2, got ({a}, {b})"
        )));
    }
    Ok(())
}

/// Quadrature nodes on `[a, b]` with the truth cdf evaluated at each node,
/// grouped by cells on which a step-function estimate is constant.
struct IseGrid {
    /// `(left end, first node index)` per cell.
    cells: Vec<(f64, usize)>,
    weights: Vec<f64>,
    truth: Vec<f64>,
}

impl IseGrid {
    fn new(truth: &SpectralModel, atoms: impl Iterator<Item = f64>, a: f64, b: f64) -> Self {
        let mut breaks: Vec<f64> = vec![a, b];
        breaks.extend(atoms.filter(|&t| t > a && t < b));
        if truth.norm().is_infinite() && FRAC_PI_4 > a && FRAC_PI_4 < b {
            breaks.push(FRAC_PI_4);
        }
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();

        let mut cells = Vec::new();
        let mut weights = Vec::new();
        let mut values = Vec::new();
        for w in breaks.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            cells.push((lo, weights.len()));
            let pieces = ((hi - lo) / MAX_CELL).ceil().max(1.0) as usize;
            let h = (hi - lo) / pieces as f64;
            for j in 0..pieces {
                let l = lo + j as f64 * h;
                let r = if j + 1 == pieces { hi } else { l + h };
                rule().for_each_node(l, r, |x, wt| {
                    weights.push(wt);
                    values.push(truth.cdf(x));
                });
            }
        }
        Self {
            cells,
            weights,
            truth: values,
        }
    }

    fn ise(&self, estimate: &DiscreteSpectralMeasure) -> f64 {
        let mut total = 0.0;
        for (c, &(left, start)) in self.cells.iter().enumerate() {
            let end = self.cells.get(c + 1).map_or(self.weights.len(), |x| x.1);
            let level = estimate.cdf(left);
            for i in start..end {
                let d = level - self.truth[i];
                total += self.weights[i] * d * d;
            }
        }
        total
    }
}

/// `int_a^b (F_est - F_truth)^2 dtheta`.
pub fn integrated_squared_error(
    estimate: &DiscreteSpectralMeasure,
    truth: &SpectralModel,
    a: f64,
    b: f64,
) -> Result<f64> {
    check_interval(a, b)?;
    if estimate.norm() != truth.norm() {
        return Err(Error::Parameter(format!(
            "estimate uses p = {} but the truth uses p = {}",
            estimate.norm(),
            truth.norm()
        )));
    }
    let grid = IseGrid::new(truth, estimate.atoms().iter().map(|x| x.angle), a, b);
    Ok(grid.ise(estimate))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Estimator {
    Empirical,
    Mele,
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Estimator::Empirical => "empirical",
            Estimator::Mele => "mele",
        })
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "empirical" => Ok(Estimator::Empirical),
            "mele" => Ok(Estimator::Mele),
            other => Err(Error::Parameter(format!("unknown estimator {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiseConfig {
    pub n: usize,
    pub reps: usize,
    pub k_grid: Vec<usize>,
    /// `(a, b)` in radians.
    pub interval: (f64, f64),
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiseRow {
    pub k: usize,
    pub estimator: Estimator,
    pub mise: f64,
    pub stderr: f64,
    /// Replications excluded because the estimator was undefined.
    pub infeasible_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MiseTable {
    pub model: String,
    pub p: NormOrder,
    pub n: usize,
    pub reps: usize,
    pub interval: (f64, f64),
    pub seed: u64,
    pub rows: Vec<MiseRow>,
}

pub const MISE_HEADER: &str = "k,estimator,mise,stderr,infeasible_count";

impl MiseTable {
    pub fn k_grid(&self) -> Vec<usize> {
        let mut ks: Vec<usize> = self.rows.iter().map(|r| r.k).collect();
        ks.dedup();
        ks
    }

    pub fn row(&self, k: usize, estimator: Estimator) -> Option<&MiseRow> {
        self.rows
            .iter()
            .find(|r| r.k == k && r.estimator == estimator)
    }

    /// Smallest MISE over the grid for one estimator, ignoring empty cells.
    pub fn min_mise(&self, estimator: Estimator) -> Option<(usize, f64)> {
        self.rows
            .iter()
            .filter(|r| r.estimator == estimator && r.mise.is_finite())
            .map(|r| (r.k, r.mise))
            .min_by(|x, y| x.1.total_cmp(&y.1))
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("#model={}\n", self.model));
        out.push_str(&format!("#p={}\n", self.p));
        out.push_str(&format!("#n={}\n", self.n));
        out.push_str(&format!("#reps={}\n", self.reps));
        out.push_str(&format!(
            "#interval={},{}\n",
            fmt_f64(self.interval.0),
            fmt_f64(self.interval.1)
        ));
        out.push_str(&format!("#seed={}\n", self.seed));
        out.push_str(MISE_HEADER);
        out.push('\n');
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.k,
                r.estimator,
                fmt_f64(r.mise),
                fmt_f64(r.stderr),
                r.infeasible_count
            ));
        }
        out
    }

    pub fn parse<R: BufRead>(reader: R) -> Result<Self> {
        let t = read_table(reader)?;
        if t.header.join(",") != MISE_HEADER {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected header {MISE_HEADER}"),
            });
        }
        let meta = |key: &str| {
            t.meta(key).map(str::to_string).ok_or_else(|| Error::Parse {
                line: 1,
                message: format!("missing #{key}= metadata"),
            })
        };
        let bad = |what: &str| Error::Parse {
            line: 1,
            message: format!("malformed {what}"),
        };
        let interval = meta("interval")?;
        let (a, b) = interval.split_once(',').ok_or_else(|| bad("interval"))?;
        let mise = t.floats("mise")?;
        let stderr = t.floats("stderr")?;
        let mut rows = Vec::with_capacity(t.rows.len());
        for (i, cells) in t.rows.iter().enumerate() {
            rows.push(MiseRow {
                k: cells[0].parse().map_err(|_| bad("k"))?,
                estimator: cells[1].parse()?,
                mise: mise[i],
                stderr: stderr[i],
                infeasible_count: cells[4].parse().map_err(|_| bad("infeasible_count"))?,
            });
        }
        Ok(Self {
            model: meta("model")?,
            p: meta("p")?.parse()?,
            n: meta("n")?.parse().map_err(|_| bad("n"))?,
            reps: meta("reps")?.parse().map_err(|_| bad("reps"))?,
            interval: (
                a.parse().map_err(|_| bad("interval"))?,
                b.parse().map_err(|_| bad("interval"))?,
            ),
            seed: meta("seed")?.parse().map_err(|_| bad("seed"))?,
            rows,
        })
    }
}

/// Random stream for replication `rep`; a pure function of `(seed, rep)`.
pub fn replication_rng(seed: u64, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep as u64);
    rng
}

/// ISEs of one replication: per k, `(empirical, mele or None if infeasible)`.
fn replication(
    model: &SpectralModel,
    cfg: &MiseConfig,
    rep: usize,
) -> Result<Vec<(f64, Option<f64>)>> {
    let mut rng = replication_rng(cfg.seed, rep);
    let sample = model.sample(cfg.n, &mut rng)?;
    let pobs = pseudo_observations(&sample);
    let (a, b) = cfg.interval;
    cfg.k_grid
        .iter()
        .map(|&k| {
            let ang = select_extremes(&pobs, k, model.norm())?;
            let grid = IseGrid::new(model, ang.members().iter().map(|m| m.angle), a, b);
            let emp = grid.ise(&empirical_spectral_measure(&ang));
            let mele = match mele_spectral_measure(&ang) {
                Ok(phi) => Some(grid.ise(&phi)),
                Err(Error::ConstraintInfeasible { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok((emp, mele))
        })
        .collect()
}

fn summarize(values: &[f64]) -> (f64, f64) {
    let r = values.len();
    if r == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / r as f64;
    if r == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (r - 1) as f64;
    (mean, (var / r as f64).sqrt())
}

/// Monte Carlo MISE of both estimators over `cfg.k_grid`.
///
/// Replications run in parallel but each draws from its own indexed stream
/// and results are reduced in replication order, so the table is identical
/// for any thread count.
pub fn mise_sweep(model: &SpectralModel, cfg: &MiseConfig) -> Result<MiseTable> {
    if !model.has_sampler() {
        return Err(Error::Unsupported(format!(
            "no sampler for {}",
            model.name()
        )));
    }
    if cfg.reps == 0 || cfg.n == 0 {
        return Err(Error::Parameter(
            "need at least one replication of positive size".into(),
        ));
    }
    if cfg.k_grid.is_empty() || cfg.k_grid.iter().any(|&k| k == 0 || k > cfg.n) {
        return Err(Error::Parameter(format!(
            "k-grid must be nonempty with 1 <= k <= n = {}",
            cfg.n
        )));
    }
    check_interval(cfg.interval.0, cfg.interval.1)?;

    let per_rep: Vec<Vec<(f64, Option<f64>)>> = (0..cfg.reps)
        .into_par_iter()
        .map(|rep| replication(model, cfg, rep))
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(2 * cfg.k_grid.len());
    for (j, &k) in cfg.k_grid.iter().enumerate() {
        let emp: Vec<f64> = per_rep.iter().map(|r| r[j].0).collect();
        let mele: Vec<f64> = per_rep.iter().filter_map(|r| r[j].1).collect();
        let (m, se) = summarize(&emp);
        rows.push(MiseRow {
            k,
            estimator: Estimator::Empirical,
            mise: m,
            stderr: se,
            infeasible_count: 0,
        });
        let (m, se) = summarize(&mele);
        rows.push(MiseRow {
            k,
            estimator: Estimator::Mele,
            mise: m,
            stderr: se,
            infeasible_count: cfg.reps - mele.len(),
        });
    }
    Ok(MiseTable {
        model: model.name(),
        p: model.norm(),
        n: cfg.n,
        reps: cfg.reps,
        interval: cfg.interval,
        seed: cfg.seed,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::empirical::AngularSample;

    #[test]
    fn identical_atomic_cdfs_give_zero() {
        let truth = SpectralModel::mixture(0.0, NormOrder::TWO).unwrap();
        let est =
            DiscreteSpectralMeasure::new(NormOrder::TWO, [(0.0, 1.0), (FRAC_PI_2, 1.0)]).unwrap();
        assert_eq!(
            integrated_squared_error(&est, &truth, 0.0, FRAC_PI_2).unwrap(),
            0.0
        );
    }

    #[test]
    fn constant_gap() {
        let truth = SpectralModel::mixture(0.0, NormOrder::ONE).unwrap();
        let est =
            DiscreteSpectralMeasure::new(NormOrder::ONE, [(0.0, 1.3), (FRAC_PI_2, 0.7)]).unwrap();
        let (a, b) = (0.2, 1.1);
        let v = integrated_squared_error(&est, &truth, a, b).unwrap();
        assert!((v - 0.09 * (b - a)).abs() < 1e-12);
    }

    #[test]
    fn zero_measure_against_cauchy_matches_riemann_sum() {
        let truth = SpectralModel::cauchy_quadrant(NormOrder::ONE);
        let zero = DiscreteSpectralMeasure::new(NormOrder::ONE, std::iter::empty()).unwrap();
        let v = integrated_squared_error(&zero, &truth, 0.0, FRAC_PI_2).unwrap();
        let m = 1_000_000;
        let h = FRAC_PI_2 / m as f64;
        let riemann: f64 = (0..m)
            .map(|i| {
                let t = (i as f64 + 0.5) * h;
                let f = 1.0 - t.cos() + t.sin();
                f * f * h
            })
            .sum();
        assert!((v - riemann).abs() < 1e-8, "{v} vs {riemann}");
    }

    #[test]
    fn ise_against_dense_midpoint_oracle() {
        let truth = SpectralModel::logistic(2.0, NormOrder::Infinity).unwrap();
        let ang =
            AngularSample::from_angles(100, 10, NormOrder::Infinity, &[0.2, 0.5, 0.7, 0.9, 1.3])
                .unwrap();
        let est = empirical_spectral_measure(&ang);
        let (a, b) = (0.05, 1.5);
        let v = integrated_squared_error(&est, &truth, a, b).unwrap();
        let m = 200_000;
        let h = (b - a) / m as f64;
        let oracle: f64 = (0..m)
            .map(|i| {
                let t = a + (i as f64 + 0.5) * h;
                let d = est.cdf(t) - truth.cdf(t);
                d * d * h
            })
            .sum();
        assert!((v - oracle).abs() < 1e-7, "{v} vs {oracle}");
    }

    #[test]
    fn invalid_interval_and_norm() {
        let truth = SpectralModel::cauchy_quadrant(NormOrder::ONE);
        let est = DiscreteSpectralMeasure::new(NormOrder::ONE, [(0.3, 1.0)]).unwrap();
        assert!(integrated_squared_error(&est, &truth, 1.0, 0.5).is_err());
        assert!(integrated_squared_error(&est, &truth, -0.1, 0.5).is_err());
        assert!(integrated_squared_error(&est, &truth, 0.0, 2.0).is_err());
        let other = DiscreteSpectralMeasure::new(NormOrder::TWO, [(0.3, 1.0)]).unwrap();
        assert!(integrated_squared_error(&other, &truth, 0.0, 1.0).is_err());
    }

    fn small_config() -> MiseConfig {
        MiseConfig {
            n: 300,
            reps: 6,
            k_grid: vec![10, 30],
            interval: (0.0, FRAC_PI_2),
            seed: 17,
        }
    }

    #[test]
    fn single_replication_has_zero_stderr() {
        let model = SpectralModel::cauchy_quadrant(NormOrder::ONE);
        let cfg = MiseConfig {
            reps: 1,
            k_grid: vec![20],
            ..small_config()
        };
        let table = mise_sweep(&model, &cfg).unwrap();
        let direct = {
            let mut rng = replication_rng(cfg.seed, 0);
            let s = model.sample(cfg.n, &mut rng).unwrap();
            let ang = select_extremes(&pseudo_observations(&s), 20, NormOrder::ONE).unwrap();
            integrated_squared_error(&empirical_spectral_measure(&ang), &model, 0.0, FRAC_PI_2)
                .unwrap()
        };
        let row = table.row(20, Estimator::Empirical).unwrap();
        assert_eq!(row.mise, direct);
        assert_eq!(row.stderr, 0.0);
    }

    #[test]
    fn sweep_is_deterministic_across_thread_counts() {
        let model = SpectralModel::logistic(2.0, NormOrder::Infinity).unwrap();
        let cfg = small_config();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| mise_sweep(&model, &cfg).unwrap())
        };
        let one = run(1);
        assert_eq!(one, run(3));
        assert_eq!(one.rows.len(), 4);
        for r in &one.rows {
            assert!(r.mise >= 0.0 && r.stderr >= 0.0);
            // cdfs are bounded by the total masses, so ISE <= (b - a) * max^2
            assert!(r.mise <= FRAC_PI_2 * 9.0);
        }
    }

    #[test]
    fn table_round_trips() {
        let model = SpectralModel::mixture(0.5, NormOrder::TWO).unwrap();
        let cfg = MiseConfig {
            interval: model.default_interval(),
            ..small_config()
        };
        let table = mise_sweep(&model, &cfg).unwrap();
        let back = MiseTable::parse(table.to_csv().as_bytes()).unwrap();
        assert_eq!(back, table);
        assert_eq!(
            table
                .to_csv()
                .lines()
                .filter(|l| !l.starts_with('#'))
                .count(),
            1 + 4
        );
    }

    #[test]
    fn sweep_rejects_bad_configs() {
        let model = SpectralModel::cauchy_quadrant(NormOrder::ONE);
        assert!(mise_sweep(
            &model,
            &MiseConfig {
                k_grid: vec![0],
                ..small_config()
            }
        )
        .is_err());
        assert!(mise_sweep(
            &model,
            &MiseConfig {
                k_grid: vec![301],
                ..small_config()
            }
        )
        .is_err());
        assert!(mise_sweep(
            &model,
            &MiseConfig {
                reps: 0,
                ..small_config()
            }
        )
        .is_err());
        let asym = SpectralModel::asymmetric_logistic(2.0, 0.5, 1.0, NormOrder::ONE).unwrap();
        assert!(matches!(
            mise_sweep(&asym, &small_config()),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn mixture_default_interval() {
        let m = SpectralModel::mixture(0.5, NormOrder::ONE).unwrap();
        let (a, b) = m.default_interval();
        assert!((a - 0.05 * FRAC_PI_2).abs() < 1e-16 && (b - 0.95 * FRAC_PI_2).abs() < 1e-16);
    }
}
