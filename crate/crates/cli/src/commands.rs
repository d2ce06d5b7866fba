//! Command implementations shared by the binary and the test suites.

use std::path::Path;

use rankci::criteria::{borda_ranks, copeland_ranks};
use rankci::inference::{Analysis, CiMode, ZStyle};
use rankci::simulation::{coverage_experiment, true_scores, CoverageReport, Scenario};
use rankci::{Criterion, RankMatrix, ZeroOverlapPolicy};
use serde::Deserialize;

use crate::document::{ReportMode, ResultRecord, ResultsDocument};
use crate::error::CliError;
use crate::sse::{sse_against_ballots, SseReport};

/// Point rankings: CPDP and CTPDP always, Borda and Copeland when the data
/// is complete.
pub fn cmd_rank(
    matrix: &RankMatrix,
    policy: ZeroOverlapPolicy,
) -> Result<ResultsDocument, CliError> {
    let analysis = Analysis::with_policy(matrix, policy)?;
    let mut records = Vec::new();
    for criterion in [Criterion::Cpdp, Criterion::Ctpdp] {
        let scores = analysis.point_scores(criterion)?;
        let ranks = analysis.point_ranks(criterion)?;
        for (i, entity) in analysis.entities().iter().enumerate() {
            records.push(ResultRecord {
                entity: entity.clone(),
                criterion,
                mode: ReportMode::Point,
                level: None,
                score: Some(scores[i]),
                variance: None,
                point_rank: ranks.display_ranks[i],
                ci_lower: None,
                ci_upper: None,
            });
        }
    }
    if matrix.is_complete() {
        let canonical = analysis.canonical();
        for (criterion, ranks) in [
            (Criterion::Borda, borda_ranks(canonical)?),
            (Criterion::Copeland, copeland_ranks(canonical)?),
        ] {
            for (i, entity) in analysis.entities().iter().enumerate() {
                records.push(ResultRecord {
                    entity: entity.clone(),
                    criterion,
                    mode: ReportMode::Point,
                    level: None,
                    score: None,
                    variance: None,
                    point_rank: ranks.display_ranks[i],
                    ci_lower: None,
                    ci_upper: None,
                });
            }
        }
    }
    Ok(ResultsDocument { records })
}

/// Rank confidence intervals for one criterion and mode.
pub fn cmd_ci(
    matrix: &RankMatrix,
    criterion: Criterion,
    mode: CiMode,
    level: f64,
    style: ZStyle,
    policy: ZeroOverlapPolicy,
) -> Result<ResultsDocument, CliError> {
    let analysis = Analysis::with_policy(matrix, policy)?;
    let scores = analysis.point_scores(criterion)?;
    let variances = analysis.variances(criterion)?;
    let ranks = analysis.point_ranks(criterion)?;
    let cis = match mode {
        CiMode::Simultaneous => analysis.simultaneous(criterion, level)?,
        CiMode::Individual => analysis.individual(criterion, level, style)?,
    };
    let report_mode = match mode {
        CiMode::Simultaneous => ReportMode::Simultaneous,
        CiMode::Individual => ReportMode::Individual,
    };
    let records = analysis
        .entities()
        .iter()
        .enumerate()
        .map(|(i, entity)| ResultRecord {
            entity: entity.clone(),
            criterion,
            mode: report_mode,
            level: Some(level),
            score: Some(scores[i]),
            variance: Some(variances[i]),
            point_rank: ranks.display_ranks[i],
            ci_lower: Some(cis[i].display_lower),
            ci_upper: Some(cis[i].display_upper),
        })
        .collect();
    Ok(ResultsDocument { records })
}

/// SSE of a built-in method's ranks against every ballot.
pub fn cmd_sse_builtin(
    matrix: &RankMatrix,
    criterion: Criterion,
    policy: ZeroOverlapPolicy,
) -> Result<SseReport, CliError> {
    let analysis = Analysis::with_policy(matrix, policy)?;
    let ranks = analysis.point_ranks(criterion)?;
    sse_against_ballots(matrix, &criterion.to_string(), &ranks.display_ranks)
}

/// SSE of externally supplied display ranks (CSV `entity,rank`).
pub fn cmd_sse_external(
    matrix: &RankMatrix,
    method: &str,
    ranks_csv: &str,
) -> Result<SseReport, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(ranks_csv.as_bytes());
    let mut by_label: Vec<(String, u32)> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| CliError::Csv {
            path: "<ranks>".into(),
            message: e.to_string(),
        })?;
        let label = record.get(0).unwrap_or_default().to_string();
        let rank: u32 = record
            .get(1)
            .unwrap_or_default()
            .parse()
            .map_err(|_| CliError::Csv {
                path: "<ranks>".into(),
                message: format!("bad rank for {label:?}"),
            })?;
        by_label.push((label, rank));
    }
    let mut ranks = Vec::with_capacity(matrix.n_entities());
    for entity in matrix.entities() {
        let found = by_label
            .iter()
            .find(|(label, _)| label == entity)
            .map(|&(_, r)| r)
            .ok_or_else(|| CliError::MissingEntityRank {
                label: entity.clone(),
            })?;
        ranks.push(found);
    }
    for (label, _) in &by_label {
        if !matrix.entities().contains(label) {
            return Err(CliError::UnknownEntity {
                label: label.clone(),
            });
        }
    }
    sse_against_ballots(matrix, method, &ranks)
}

/// Scenario description accepted from a JSON file.
#[derive(Debug, Deserialize)]
pub struct ScenarioFile {
    #[serde(default)]
    pub label: Option<String>,
    pub means: Vec<f64>,
    pub variances: Vec<f64>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub missingness: Option<MissingnessFile>,
}

#[derive(Debug, Deserialize)]
pub struct MissingnessFile {
    pub row_fraction: f64,
    pub max_cell_fraction: f64,
}

pub fn load_scenario_file(path: &Path, m: usize, seed: u64) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let file: ScenarioFile = serde_json::from_str(&text).map_err(|e| CliError::ScenarioFile {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let missingness = file.missingness.map(|miss| rankci::Missingness {
        row_fraction: miss.row_fraction,
        max_cell_fraction: miss.max_cell_fraction,
    });
    Ok(Scenario::new(
        file.label.unwrap_or_else(|| "custom".into()),
        file.means,
        file.variances,
        file.m.unwrap_or(m),
        missingness,
        file.seed.unwrap_or(seed),
    )?)
}

/// Truth table CSV (Table-2 style): CPDP values to 4 decimals, ranks in the
/// counting orientation (1 = worst).
pub fn truth_table_csv(scenario: &Scenario) -> Result<String, CliError> {
    let truth = true_scores(scenario)?;
    let mut out = String::from("entity,mean,variance,cpdp,cpdp_rank,ctpdp,ctpdp_rank\n");
    for i in 0..scenario.n_entities() {
        out.push_str(&format!(
            "X{},{},{},{:.4},{},{},{}\n",
            i + 1,
            scenario.means[i],
            scenario.variances[i],
            truth.cpdp[i],
            truth.cpdp_ranks[i],
            truth.ctpdp[i],
            truth.ctpdp_ranks[i],
        ));
    }
    Ok(out)
}

/// Coverage experiments over a sweep of ranker counts; one report per m.
#[allow(clippy::too_many_arguments)]
pub fn cmd_simulate(
    base: &Scenario,
    m_values: &[usize],
    reps: u64,
    level: f64,
    mode: CiMode,
    criterion: Criterion,
) -> Result<Vec<CoverageReport>, CliError> {
    let mut reports = Vec::with_capacity(m_values.len());
    for &m in m_values {
        let scenario = Scenario::new(
            base.label.clone(),
            base.means.clone(),
            base.variances.clone(),
            m,
            base.missingness,
            base.seed,
        )?;
        reports.push(coverage_experiment(
            &scenario, reps, level, mode, criterion,
        )?);
    }
    Ok(reports)
}

pub fn coverage_csv(reports: &[CoverageReport]) -> String {
    let mut out = String::from(CoverageReport::CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

/// Per-entity breakdown rows for individual-mode coverage.
pub fn per_entity_csv(reports: &[CoverageReport]) -> String {
    let mut out = String::from("case,criterion,mode,m,entity,coverage,mc_stderr\n");
    for r in reports {
        if let Some(per) = &r.per_entity {
            for (i, &c) in per.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{},{},{},{:.6},{:.6}\n",
                    r.case,
                    r.criterion,
                    r.mode,
                    r.m,
                    i + 1,
                    c,
                    (c * (1.0 - c) / r.reps as f64).sqrt(),
                ));
            }
        }
    }
    out
}

/// Parses an m sweep: either a single integer or `start:end:step`.
pub fn parse_m_values(spec: &str) -> Result<Vec<usize>, CliError> {
    if let Ok(single) = spec.parse::<usize>() {
        return Ok(vec![single]);
    }
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Args(format!(
            "expected an integer or start:end:step, got {spec:?}"
        )));
    }
    let nums: Vec<usize> = parts
        .iter()
        .map(|p| {
            p.parse::<usize>()
                .map_err(|_| CliError::Args(format!("bad sweep component {p:?}")))
        })
        .collect::<Result<_, _>>()?;
    let (start, end, step) = (nums[0], nums[1], nums[2]);
    if step == 0 || start == 0 || end < start {
        return Err(CliError::Args(format!("bad sweep {spec:?}")));
    }
    Ok((start..=end).step_by(step).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rankci::Orientation;

    fn single_ballot() -> RankMatrix {
        RankMatrix::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![Some(2)], vec![Some(1)], vec![Some(3)]],
            Orientation::LowerIsBetter,
        )
        .unwrap()
    }

    #[test]
    fn rank_on_single_ballot_returns_the_ballot() {
        let doc = cmd_rank(&single_ballot(), ZeroOverlapPolicy::Error).unwrap();
        for criterion in ["cpdp", "ctpdp", "borda", "copeland"] {
            let ranks: Vec<u32> = doc
                .records
                .iter()
                .filter(|r| r.criterion.to_string() == criterion)
                .map(|r| r.point_rank)
                .collect();
            assert_eq!(ranks, vec![2, 1, 3], "criterion {criterion}");
        }
    }

    #[test]
    fn rank_skips_baselines_on_incomplete_data() {
        let m = RankMatrix::new(
            vec!["a".into(), "b".into()],
            vec![vec![Some(1), None], vec![Some(2), Some(1)]],
            Orientation::LowerIsBetter,
        )
        .unwrap();
        let doc = cmd_rank(&m, ZeroOverlapPolicy::Error).unwrap();
        assert!(doc
            .records
            .iter()
            .all(|r| matches!(r.criterion, Criterion::Cpdp | Criterion::Ctpdp)));
        assert_eq!(doc.records.len(), 4);
    }

    #[test]
    fn ci_document_has_full_fields() {
        let m = RankMatrix::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![Some(1), Some(2), Some(1)],
                vec![Some(2), Some(1), Some(2)],
                vec![Some(3), Some(3), Some(3)],
            ],
            Orientation::LowerIsBetter,
        )
        .unwrap();
        let doc = cmd_ci(
            &m,
            Criterion::Cpdp,
            CiMode::Simultaneous,
            0.95,
            ZStyle::OneSided,
            ZeroOverlapPolicy::Error,
        )
        .unwrap();
        assert_eq!(doc.records.len(), 3);
        for r in &doc.records {
            assert_eq!(r.level, Some(0.95));
            assert!(r.variance.is_some());
            let lo = r.ci_lower.unwrap();
            let hi = r.ci_upper.unwrap();
            assert!(lo <= r.point_rank && r.point_rank <= hi);
        }
    }

    #[test]
    fn sse_external_requires_every_entity() {
        let err =
            cmd_sse_external(&single_ballot(), "borda", "entity,rank\na,1\nb,2\n").unwrap_err();
        assert_eq!(err.code(), "E_MISSING_ENTITY");
        let err = cmd_sse_external(
            &single_ballot(),
            "borda",
            "entity,rank\na,1\nb,2\nc,3\nz,4\n",
        )
        .unwrap_err();
        assert_eq!(err.code(), "E_UNKNOWN_ENTITY");
    }

    #[test]
    fn m_sweep_parsing() {
        assert_eq!(parse_m_values("30").unwrap(), vec![30]);
        assert_eq!(
            parse_m_values("5:55:10").unwrap(),
            vec![5, 15, 25, 35, 45, 55]
        );
        assert!(parse_m_values("5:55").is_err());
        assert!(parse_m_values("0:5:1").is_err());
    }

    #[test]
    fn simulate_reps_one_gives_zero_or_one() {
        let base = Scenario::case(1, 10, 9).unwrap();
        let reports =
            cmd_simulate(&base, &[10], 1, 0.95, CiMode::Simultaneous, Criterion::Cpdp).unwrap();
        assert!(reports[0].coverage == 0.0 || reports[0].coverage == 1.0);
    }
}
