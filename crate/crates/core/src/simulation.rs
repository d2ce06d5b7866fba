//! Generative scenarios with known truth, missingness injection, and
//! empirical-coverage experiments.
//!
//! Latent values are independent normals per entity; each ranker column is
//! converted to within-column ranks, optionally with cells deleted. True
//! scores come from the closed-form pairwise probabilities
//! `Φ((μ_i - μ_k) / sqrt(σ_i² + σ_k²))`, so coverage can be checked against
//! exact true ranks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::criteria::{ascending_display_ranks, Criterion};
use crate::error::RankError;
use crate::inference::{Analysis, CiMode, ZStyle};
use crate::numerics::{norm_cdf, norm_quantile, Probability};
use crate::rank::{Orientation, RankMatrix};

/// Missingness pattern: `row_fraction` of entities get between 1 and
/// `max_cell_fraction * m` of their cells deleted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Missingness {
    pub row_fraction: f64,
    pub max_cell_fraction: f64,
}

/// Generative specification: independent `N(μ_i, σ_i²)` latent values,
/// `m` ranker columns, optional missingness, and an RNG seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub means: Vec<f64>,
    pub variances: Vec<f64>,
    pub m: usize,
    pub missingness: Option<Missingness>,
    pub seed: u64,
}

impl Scenario {
    pub fn new(
        label: impl Into<String>,
        means: Vec<f64>,
        variances: Vec<f64>,
        m: usize,
        missingness: Option<Missingness>,
        seed: u64,
    ) -> Result<Self, RankError> {
        let scenario = Scenario {
            label: label.into(),
            means,
            variances,
            m,
            missingness,
            seed,
        };
        scenario.check()?;
        Ok(scenario)
    }

    /// The four standard cases: ten entities with means 1..10; cases 1-2 have
    /// unit variances, cases 3-4 inflate the variances of the first and last
    /// entity (9 and 16); cases 2 and 4 add missingness (40% of rows, up to
    /// 40% / 30% of cells per affected row).
    pub fn case(case: u8, m: usize, seed: u64) -> Result<Self, RankError> {
        let n = 10usize;
        let means: Vec<f64> = (1..=n).map(|i| i as f64).collect();
        let mut variances = vec![1.0; n];
        if case == 3 || case == 4 {
            variances[0] = 9.0;
            variances[n - 1] = 16.0;
        }
        let missingness = match case {
            1 | 3 => None,
            2 => Some(Missingness {
                row_fraction: 0.4,
                max_cell_fraction: 0.4,
            }),
            4 => Some(Missingness {
                row_fraction: 0.4,
                max_cell_fraction: 0.3,
            }),
            other => {
                return Err(RankError::InvalidScenario {
                    reason: format!("case must be 1..=4, got {other}"),
                })
            }
        };
        Scenario::new(
            format!("case{case}"),
            means,
            variances,
            m,
            missingness,
            seed,
        )
    }

    pub fn n_entities(&self) -> usize {
        self.means.len()
    }

    fn check(&self) -> Result<(), RankError> {
        if self.means.len() < 2 {
            return Err(RankError::InvalidScenario {
                reason: format!("need at least 2 entities, got {}", self.means.len()),
            });
        }
        if self.variances.len() != self.means.len() {
            return Err(RankError::InvalidScenario {
                reason: format!(
                    "{} means but {} variances",
                    self.means.len(),
                    self.variances.len()
                ),
            });
        }
        if self.m == 0 {
            return Err(RankError::InvalidScenario {
                reason: "need at least one ranker column".into(),
            });
        }
        if let Some(v) = self.variances.iter().find(|v| !v.is_finite() || **v <= 0.0) {
            return Err(RankError::InvalidScenario {
                reason: format!("variances must be positive and finite, got {v}"),
            });
        }
        if self.means.iter().any(|x| !x.is_finite()) {
            return Err(RankError::InvalidScenario {
                reason: "means must be finite".into(),
            });
        }
        if let Some(miss) = &self.missingness {
            for (name, v) in [
                ("row_fraction", miss.row_fraction),
                ("max_cell_fraction", miss.max_cell_fraction),
            ] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(RankError::InvalidScenario {
                        reason: format!("{name} must lie in [0, 1], got {v}"),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Exact pairwise probabilities, scores and ranks implied by a scenario.
#[derive(Debug, Clone)]
pub struct TruthTable {
    /// `probs[k * n + i] = P(X_k <= X_i)`.
    pub probs: Vec<f64>,
    pub cpdp: Vec<f64>,
    pub ctpdp: Vec<u32>,
    /// Counting-orientation ranks (1 = worst), by ascending score.
    pub cpdp_ranks: Vec<u32>,
    pub ctpdp_ranks: Vec<u32>,
    pub mean_ranks: Vec<u32>,
}

impl TruthTable {
    pub fn prob(&self, k: usize, i: usize, n: usize) -> f64 {
        self.probs[k * n + i]
    }

    /// Display-orientation true ranks (1 = best) for a criterion.
    pub fn display_ranks(&self, criterion: Criterion) -> Result<Vec<u32>, RankError> {
        let scores: Vec<f64> = match criterion {
            Criterion::Cpdp => self.cpdp.clone(),
            Criterion::Ctpdp => self.ctpdp.iter().map(|&t| f64::from(t)).collect(),
            other => return Err(RankError::UnsupportedCriterion { criterion: other }),
        };
        let neg: Vec<f64> = scores.iter().map(|s| -s).collect();
        Ok(ascending_display_ranks(&neg).display_ranks)
    }

    /// Errors if two entities share a true score under the criterion.
    pub fn require_distinct(&self, criterion: Criterion) -> Result<(), RankError> {
        let scores: Vec<f64> = match criterion {
            Criterion::Cpdp => self.cpdp.clone(),
            Criterion::Ctpdp => self.ctpdp.iter().map(|&t| f64::from(t)).collect(),
            other => return Err(RankError::UnsupportedCriterion { criterion: other }),
        };
        for a in 0..scores.len() {
            for b in (a + 1)..scores.len() {
                if scores[a] == scores[b] {
                    return Err(RankError::TiedTruth { a, b });
                }
            }
        }
        Ok(())
    }
}

/// `P(X_k <= X_i)` for independent normals: `Φ((μ_i - μ_k) / sqrt(σ_i² + σ_k²))`.
pub fn true_pairwise_prob_normal(
    mu_k: f64,
    var_k: f64,
    mu_i: f64,
    var_i: f64,
) -> Result<Probability, RankError> {
    if var_k <= 0.0 || var_i <= 0.0 {
        return Err(RankError::InvalidScenario {
            reason: format!("variances must be positive, got {var_k} and {var_i}"),
        });
    }
    norm_cdf((mu_i - mu_k) / (var_i + var_k).sqrt())
}

/// Closed-form truth table for a scenario.
pub fn true_scores(scenario: &Scenario) -> Result<TruthTable, RankError> {
    let n = scenario.n_entities();
    let mut probs = vec![0.0; n * n];
    for k in 0..n {
        for i in 0..n {
            probs[k * n + i] = if k == i {
                1.0
            } else {
                true_pairwise_prob_normal(
                    scenario.means[k],
                    scenario.variances[k],
                    scenario.means[i],
                    scenario.variances[i],
                )?
                .value()
            };
        }
    }
    let cpdp: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|k| probs[k * n + i]).sum())
        .collect();
    let ctpdp: Vec<u32> = (0..n)
        .map(|i| (0..n).filter(|&k| probs[k * n + i] > 0.5).count() as u32)
        .collect();
    let counting = |scores: &[f64]| -> Vec<u32> {
        scores
            .iter()
            .map(|&s| scores.iter().filter(|&&x| x <= s).count() as u32)
            .collect()
    };
    let ctpdp_f: Vec<f64> = ctpdp.iter().map(|&t| f64::from(t)).collect();
    Ok(TruthTable {
        cpdp_ranks: counting(&cpdp),
        ctpdp_ranks: counting(&ctpdp_f),
        mean_ranks: counting(&scenario.means),
        probs,
        cpdp,
        ctpdp,
    })
}

/// One simulated rank matrix from the scenario's base stream.
pub fn generate(scenario: &Scenario) -> Result<RankMatrix, RankError> {
    generate_replication(scenario, 0)
}

/// Simulated rank matrix for a given replication index. Each index owns an
/// independent RNG stream derived from `(seed, replication)`, so replications
/// are reproducible in any order and in parallel.
pub fn generate_replication(
    scenario: &Scenario,
    replication: u64,
) -> Result<RankMatrix, RankError> {
    scenario.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    rng.set_stream(replication);
    let n = scenario.n_entities();
    let m = scenario.m;

    // latent draws via inverse-CDF transform of uniforms
    let mut latent = vec![0.0f64; n * m];
    for i in 0..n {
        let sd = scenario.variances[i].sqrt();
        for l in 0..m {
            let u: f64 = rng.random::<f64>().max(f64::MIN_POSITIVE);
            let z = norm_quantile(Probability::clamped(u))?;
            latent[i * m + l] = scenario.means[i] + sd * z;
        }
    }

    let observed = match &scenario.missingness {
        None => vec![true; n * m],
        Some(miss) => draw_missingness(miss, n, m, &mut rng)?,
    };

    // within-column ranks over observed cells; exact ties broken by entity index
    let mut rows = vec![vec![None; m]; n];
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for l in 0..m {
        order.clear();
        order.extend((0..n).filter(|&i| observed[i * m + l]));
        order.sort_by(|&a, &b| {
            latent[a * m + l]
                .partial_cmp(&latent[b * m + l])
                .unwrap()
                .then(a.cmp(&b))
        });
        for (pos, &i) in order.iter().enumerate() {
            rows[i][l] = Some(pos as u32 + 1);
        }
    }
    RankMatrix::new(
        (0..n).map(|i| format!("X{}", i + 1)).collect(),
        rows,
        Orientation::HigherIsBetter,
    )
}

// Selects ceil(row_fraction * n) rows, deletes 1..=floor(max_cell_fraction * m)
// cells in each; redraws any pattern that would empty a column or zero a
// pairwise overlap.
fn draw_missingness(
    miss: &Missingness,
    n: usize,
    m: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<bool>, RankError> {
    let n_rows = (miss.row_fraction * n as f64).ceil() as usize;
    let max_cells = (miss.max_cell_fraction * m as f64).floor() as usize;
    if n_rows == 0 || max_cells == 0 {
        return Ok(vec![true; n * m]);
    }
    const MAX_ATTEMPTS: u32 = 1000;
    for _ in 0..MAX_ATTEMPTS {
        let mut observed = vec![true; n * m];
        let mut rows: Vec<usize> = (0..n).collect();
        for sel in 0..n_rows {
            let pick = rng.random_range(sel..n);
            rows.swap(sel, pick);
        }
        for &row in &rows[..n_rows] {
            let count = rng.random_range(1..=max_cells);
            let mut cols: Vec<usize> = (0..m).collect();
            for sel in 0..count {
                let pick = rng.random_range(sel..m);
                cols.swap(sel, pick);
            }
            for &col in &cols[..count] {
                observed[row * m + col] = false;
            }
        }
        if pattern_usable(&observed, n, m) {
            return Ok(observed);
        }
    }
    Err(RankError::MissingnessRejected {
        attempts: MAX_ATTEMPTS,
    })
}

fn pattern_usable(observed: &[bool], n: usize, m: usize) -> bool {
    for l in 0..m {
        if !(0..n).any(|i| observed[i * m + l]) {
            return false;
        }
    }
    for k in 0..n {
        for i in (k + 1)..n {
            if !(0..m).any(|l| observed[k * m + l] && observed[i * m + l]) {
                return false;
            }
        }
    }
    true
}

/// Empirical coverage of the rank confidence intervals against true ranks.
#[derive(Debug, Clone)]
pub struct CoverageReport {
    pub case: String,
    pub criterion: Criterion,
    pub mode: CiMode,
    pub m: usize,
    pub reps: u64,
    pub level: f64,
    /// Simultaneous: fraction of replications covering every true rank.
    /// Individual: per-entity coverage averaged over entities.
    pub coverage: f64,
    /// `sqrt(c (1 - c) / reps)`.
    pub mc_stderr: f64,
    /// Per-entity coverage (individual mode only).
    pub per_entity: Option<Vec<f64>>,
}

impl CoverageReport {
    pub const CSV_HEADER: &'static str = "case,criterion,mode,m,reps,coverage,mc_stderr";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{:.6}",
            self.case, self.criterion, self.mode, self.m, self.reps, self.coverage, self.mc_stderr
        )
    }
}

/// Runs `reps` independent replications of the scenario, builds rank
/// confidence intervals on each, and reports how often the true ranks were
/// covered. Replications run in parallel on deterministic streams.
pub fn coverage_experiment(
    scenario: &Scenario,
    reps: u64,
    level: f64,
    mode: CiMode,
    criterion: Criterion,
) -> Result<CoverageReport, RankError> {
    if reps == 0 {
        return Err(RankError::InvalidScenario {
            reason: "reps must be at least 1".into(),
        });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(RankError::InvalidLevel { level });
    }
    let truth = true_scores(scenario)?;
    truth.require_distinct(criterion)?;
    let true_display = truth.display_ranks(criterion)?;
    let n = scenario.n_entities();

    let per_rep: Result<Vec<Vec<bool>>, RankError> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let matrix = generate_replication(scenario, rep)?;
            let analysis = Analysis::new(&matrix)?;
            let cis = match mode {
                CiMode::Simultaneous => analysis.simultaneous(criterion, level)?,
                CiMode::Individual => analysis.individual(criterion, level, ZStyle::OneSided)?,
            };
            Ok((0..n)
                .map(|i| {
                    let d = true_display[i];
                    cis[i].display_lower <= d && d <= cis[i].display_upper
                })
                .collect())
        })
        .collect();
    let per_rep = per_rep?;

    let report = match mode {
        CiMode::Simultaneous => {
            let hits = per_rep
                .iter()
                .filter(|covered| covered.iter().all(|&c| c))
                .count();
            let coverage = hits as f64 / reps as f64;
            CoverageReport {
                case: scenario.label.clone(),
                criterion,
                mode,
                m: scenario.m,
                reps,
                level,
                coverage,
                mc_stderr: (coverage * (1.0 - coverage) / reps as f64).sqrt(),
                per_entity: None,
            }
        }
        CiMode::Individual => {
            let mut per_entity = vec![0.0f64; n];
            for covered in &per_rep {
                for (i, &c) in covered.iter().enumerate() {
                    if c {
                        per_entity[i] += 1.0;
                    }
                }
            }
            for v in &mut per_entity {
                *v /= reps as f64;
            }
            let coverage = per_entity.iter().sum::<f64>() / n as f64;
            CoverageReport {
                case: scenario.label.clone(),
                criterion,
                mode,
                m: scenario.m,
                reps,
                level,
                coverage,
                mc_stderr: (coverage * (1.0 - coverage) / reps as f64).sqrt(),
                per_entity: Some(per_entity),
            }
        }
    };
    Ok(report)
}
