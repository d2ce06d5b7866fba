//! Sum of squared errors between a method's estimated ranks and each
//! ranker's ballot, with the missing-rank adjustment: the method's display
//! ranks are restricted to the entities a ballot actually ranked and
//! re-ranked on the 1..#observed scale (competition/min on ties) before
//! squaring differences against the ballot's own dense ranks.

use rankci::RankMatrix;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SseReport {
    pub method: String,
    pub per_ranker: Vec<u64>,
    pub total: u64,
}

impl SseReport {
    pub const CSV_HEADER: &'static str = "method,ranker,sse";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for (idx, sse) in self.per_ranker.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", self.method, idx + 1, sse));
        }
        out.push_str(&format!("{},total,{}\n", self.method, self.total));
        out
    }
}

/// Competition (min) ranks of the given values, smaller value = rank 1.
fn min_ranks(values: &[u32]) -> Vec<u32> {
    values
        .iter()
        .map(|&v| 1 + values.iter().filter(|&&w| w < v).count() as u32)
        .collect()
}

/// `method_display_ranks[i]` is entity `i`'s display rank (1 = best) under
/// the method being scored; the matrix supplies the ballots.
pub fn sse_against_ballots(
    matrix: &RankMatrix,
    method: &str,
    method_display_ranks: &[u32],
) -> Result<SseReport, CliError> {
    if method_display_ranks.len() != matrix.n_entities() {
        return Err(CliError::Args(format!(
            "method ranks cover {} entities but the input has {}",
            method_display_ranks.len(),
            matrix.n_entities()
        )));
    }
    let canonical = matrix.canonicalize();
    let n = canonical.n_entities();
    let mut per_ranker = Vec::with_capacity(canonical.n_rankers());
    for l in 0..canonical.n_rankers() {
        let canon_ranks = canonical.within_column_ranks(l)?;
        let observed: Vec<usize> = (0..n).filter(|&i| canon_ranks[i].is_some()).collect();
        let n_obs = observed.len() as u32;
        // ballot's dense display ranks, 1 = most preferred
        let ballot: Vec<u32> = observed
            .iter()
            .map(|&i| n_obs + 1 - canon_ranks[i].unwrap())
            .collect();
        // method ranks restricted to this ballot, re-ranked onto 1..#observed
        let restricted: Vec<u32> = observed.iter().map(|&i| method_display_ranks[i]).collect();
        let adjusted = min_ranks(&restricted);
        let sse: u64 = adjusted
            .iter()
            .zip(&ballot)
            .map(|(&a, &b)| {
                let d = i64::from(a) - i64::from(b);
                (d * d) as u64
            })
            .sum();
        per_ranker.push(sse);
    }
    Ok(SseReport {
        method: method.to_string(),
        total: per_ranker.iter().sum(),
        per_ranker,
    })
}
