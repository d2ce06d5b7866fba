//! The results document: one record per (entity, criterion, mode), emitted
//! as CSV with a stable header or as an aligned structured-text table.

use rankci::Criterion;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportMode {
    Point,
    Simultaneous,
    Individual,
}

impl std::fmt::Display for ReportMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl ReportMode {
    fn as_str(self) -> &'static str {
        match self {
            ReportMode::Point => "point",
            ReportMode::Simultaneous => "simultaneous",
            ReportMode::Individual => "individual",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "point" => Some(ReportMode::Point),
            "simultaneous" => Some(ReportMode::Simultaneous),
            "individual" => Some(ReportMode::Individual),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRecord {
    pub entity: String,
    pub criterion: Criterion,
    pub mode: ReportMode,
    pub level: Option<f64>,
    /// The score the rank was computed from (smaller is better for the
    /// dominance criteria; larger is better for the baselines).
    pub score: Option<f64>,
    pub variance: Option<f64>,
    pub point_rank: u32,
    pub ci_lower: Option<u32>,
    pub ci_upper: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultsDocument {
    pub records: Vec<ResultRecord>,
}

pub const RESULTS_HEADER: &str =
    "entity,criterion,mode,level,score,variance,point_rank,ci_lower,ci_upper";

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

fn fmt_opt_u32(v: Option<u32>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn parse_criterion(s: &str) -> Option<Criterion> {
    match s {
        "cpdp" => Some(Criterion::Cpdp),
        "ctpdp" => Some(Criterion::Ctpdp),
        "borda" => Some(Criterion::Borda),
        "copeland" => Some(Criterion::Copeland),
        _ => None,
    }
}

impl ResultsDocument {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(RESULTS_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                csv_escape(&r.entity),
                r.criterion,
                r.mode,
                fmt_opt_f64(r.level),
                fmt_opt_f64(r.score),
                fmt_opt_f64(r.variance),
                r.point_rank,
                fmt_opt_u32(r.ci_lower),
                fmt_opt_u32(r.ci_upper),
            ));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, CliError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(text.as_bytes());
        let bad = |message: String| CliError::Csv {
            path: "<results>".into(),
            message,
        };
        let mut records = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| bad(e.to_string()))?;
            let field = |idx: usize| record.get(idx).unwrap_or_default().to_string();
            let opt_f64 = |idx: usize| -> Result<Option<f64>, CliError> {
                let s = field(idx);
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse()
                        .map(Some)
                        .map_err(|_| bad(format!("bad number {s:?}")))
                }
            };
            let opt_u32 = |idx: usize| -> Result<Option<u32>, CliError> {
                let s = field(idx);
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse()
                        .map(Some)
                        .map_err(|_| bad(format!("bad integer {s:?}")))
                }
            };
            records.push(ResultRecord {
                entity: field(0),
                criterion: parse_criterion(&field(1))
                    .ok_or_else(|| bad(format!("unknown criterion {:?}", field(1))))?,
                mode: ReportMode::parse(&field(2))
                    .ok_or_else(|| bad(format!("unknown mode {:?}", field(2))))?,
                level: opt_f64(3)?,
                score: opt_f64(4)?,
                variance: opt_f64(5)?,
                point_rank: field(6)
                    .parse()
                    .map_err(|_| bad(format!("bad point rank {:?}", field(6))))?,
                ci_lower: opt_u32(7)?,
                ci_upper: opt_u32(8)?,
            });
        }
        Ok(ResultsDocument { records })
    }

    /// Fixed-width text rendering with the same field schema as the CSV.
    pub fn to_structured_text(&self) -> String {
        let width = self
            .records
            .iter()
            .map(|r| r.entity.len())
            .max()
            .unwrap_or(6)
            .max(6);
        let mut out = format!(
            "{:<width$}  {:>8}  {:>12}  {:>8}  {:>10}  {:>10}  {:>4}  {:>8}  {:>8}\n",
            "entity",
            "criterion",
            "mode",
            "level",
            "score",
            "variance",
            "rank",
            "ci_lower",
            "ci_upper",
        );
        for r in &self.records {
            out.push_str(&format!(
                "{:<width$}  {:>8}  {:>12}  {:>8}  {:>10}  {:>10}  {:>4}  {:>8}  {:>8}\n",
                r.entity,
                r.criterion.to_string(),
                r.mode.to_string(),
                fmt_opt_f64(r.level),
                fmt_opt_f64(r.score),
                fmt_opt_f64(r.variance),
                r.point_rank,
                fmt_opt_u32(r.ci_lower),
                fmt_opt_u32(r.ci_upper),
            ));
        }
        out
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ResultsDocument {
        ResultsDocument {
            records: vec![
                ResultRecord {
                    entity: "Alpha".into(),
                    criterion: Criterion::Cpdp,
                    mode: ReportMode::Point,
                    level: None,
                    score: Some(1.25),
                    variance: None,
                    point_rank: 1,
                    ci_lower: None,
                    ci_upper: None,
                },
                ResultRecord {
                    entity: "Beta, the second".into(),
                    criterion: Criterion::Ctpdp,
                    mode: ReportMode::Simultaneous,
                    level: Some(0.95),
                    score: Some(2.0),
                    variance: Some(0.123456789),
                    point_rank: 2,
                    ci_lower: Some(1),
                    ci_upper: Some(2),
                },
            ],
        }
    }

    #[test]
    fn csv_round_trips_exactly() {
        let doc = sample();
        let text = doc.to_csv();
        let parsed = ResultsDocument::from_csv(&text).unwrap();
        assert_eq!(parsed.to_csv(), text);
    }

    #[test]
    fn csv_header_is_stable() {
        assert!(sample().to_csv().starts_with(
            "entity,criterion,mode,level,score,variance,point_rank,ci_lower,ci_upper\n"
        ));
    }

    #[test]
    fn numbers_use_six_decimals() {
        let text = sample().to_csv();
        assert!(text.contains("0.123457")); // rounded to 6 decimals
        assert!(text.contains("1.250000"));
    }

    #[test]
    fn structured_text_contains_all_fields() {
        let text = sample().to_structured_text();
        assert!(text.contains("Alpha"));
        assert!(text.contains("simultaneous"));
        assert!(text.contains("0.950000"));
    }
}
