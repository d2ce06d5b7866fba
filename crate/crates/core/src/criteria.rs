//! Point rankings: the two dominance-probability criteria plus the Borda and
//! Copeland baselines they generalize.

use crate::dominance::DominanceEstimate;
use crate::error::RankError;
use crate::rank::{Orientation, RankMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Criterion {
    Cpdp,
    Ctpdp,
    Borda,
    Copeland,
}

impl std::fmt::Display for Criterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Criterion::Cpdp => "cpdp",
            Criterion::Ctpdp => "ctpdp",
            Criterion::Borda => "borda",
            Criterion::Copeland => "copeland",
        };
        f.write_str(s)
    }
}

/// Per-entity criterion scores, larger = better.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub criterion: Criterion,
    pub scores: Vec<f64>,
}

/// Display ranks (1 = best, competition/min ties) together with the raw
/// counting ranks (1 = worst) and the tie structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankVector {
    /// 1 = best; tied entities share the smallest applicable position.
    pub display_ranks: Vec<u32>,
    /// Counting ranks `#{k : s_k <= s_i}` (1 = worst, ties share the max).
    pub counting_ranks: Vec<u32>,
    /// Partition of entity indices into equal-score groups.
    pub tie_groups: Vec<Vec<usize>>,
}

/// Sum of dominance probabilities `ŝ_i = Σ_k p̂_ki`.
///
/// Pairs excluded for zero overlap are skipped, shrinking that entity's
/// effective opponent set.
pub fn cpdp_scores(dom: &DominanceEstimate) -> ScoreVector {
    let n = dom.n_entities();
    ScoreVector {
        criterion: Criterion::Cpdp,
        scores: (0..n).map(|i| dom.score_sum(i)).collect(),
    }
}

/// Majority-win count `t̂_i = #{k : p̂_ki > 1/2}` (strict; the self term
/// always counts).
pub fn ctpdp_scores(dom: &DominanceEstimate) -> ScoreVector {
    let n = dom.n_entities();
    let scores = (0..n)
        .map(|i| (0..n).filter(|&k| dom.majority(k, i)).count() as f64)
        .collect();
    ScoreVector {
        criterion: Criterion::Ctpdp,
        scores,
    }
}

/// Ranks a score vector: higher score, better (smaller) display rank.
pub fn scores_to_ranks(scores: &ScoreVector) -> RankVector {
    rank_descending(&scores.scores)
}

/// Display ranks for scores where *smaller* is better.
pub fn ascending_display_ranks(scores: &[f64]) -> RankVector {
    let negated: Vec<f64> = scores.iter().map(|s| -s).collect();
    rank_descending(&negated)
}

fn rank_descending(scores: &[f64]) -> RankVector {
    let n = scores.len();
    let mut display = vec![0u32; n];
    let mut counting = vec![0u32; n];
    for (i, &x) in scores.iter().enumerate() {
        let better = scores.iter().filter(|&&s| s > x).count();
        let at_most = scores.iter().filter(|&&s| s <= x).count();
        display[i] = better as u32 + 1;
        counting[i] = at_most as u32;
    }
    let mut tie_groups: Vec<Vec<usize>> = Vec::new();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap().then(a.cmp(&b)));
    for idx in order {
        match tie_groups.last_mut() {
            Some(group) if scores[group[0]] == scores[idx] => group.push(idx),
            _ => tie_groups.push(vec![idx]),
        }
    }
    RankVector {
        display_ranks: display,
        counting_ranks: counting,
        tie_groups,
    }
}

fn require_complete_canonical(matrix: &RankMatrix) -> Result<(), RankError> {
    if matrix.orientation() != Orientation::HigherIsBetter {
        return Err(RankError::NotCanonical);
    }
    let missing = matrix.missing_cells();
    if missing > 0 {
        return Err(RankError::IncompleteData { missing });
    }
    Ok(())
}

/// Borda count on complete data: rank by per-entity sum of within-column
/// ranks. Computed directly from the matrix, independently of the dominance
/// grid, so the equivalence with the CPDP ranking is a real cross-check.
pub fn borda_ranks(matrix: &RankMatrix) -> Result<RankVector, RankError> {
    require_complete_canonical(matrix)?;
    let n = matrix.n_entities();
    let mut sums = vec![0.0f64; n];
    for l in 0..matrix.n_rankers() {
        let ranks = matrix.within_column_ranks(l)?;
        for i in 0..n {
            sums[i] += f64::from(ranks[i].expect("complete data"));
        }
    }
    Ok(rank_descending(&sums))
}

/// Copeland pairwise method on complete data: one point per opponent beaten
/// in a majority of columns, half a point per exactly-split opponent.
pub fn copeland_ranks(matrix: &RankMatrix) -> Result<RankVector, RankError> {
    require_complete_canonical(matrix)?;
    let n = matrix.n_entities();
    let m = matrix.n_rankers();
    let mut scores = vec![0.0f64; n];
    for (i, score) in scores.iter_mut().enumerate() {
        for k in 0..n {
            if k == i {
                continue;
            }
            let wins = (0..m)
                .filter(|&l| matrix.value(i, l).unwrap() > matrix.value(k, l).unwrap())
                .count();
            if 2 * wins > m {
                *score += 1.0;
            } else if 2 * wins == m {
                *score += 0.5;
            }
        }
    }
    Ok(rank_descending(&scores))
}
