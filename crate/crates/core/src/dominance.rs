//! Pairwise and pairwise-joint dominance probability estimation with
//! per-pair overlap bookkeeping for incomplete data.

use crate::error::RankError;
use crate::numerics::Probability;
use crate::rank::{MissingIndex, Orientation, RankMatrix};

/// What to do with entity pairs that share no ranker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZeroOverlapPolicy {
    /// Fail, listing every affected pair.
    #[default]
    Error,
    /// Leave the pair undefined; downstream sums skip it. This changes the
    /// score scale for the affected entities, so it is opt-in.
    ExcludePairs,
}

/// N x N grid of estimated dominance probabilities.
///
/// `prob(k, i)` estimates `P(X_k <= X_i)` on canonical (higher-is-better)
/// values: the fraction of shared rankers under which entity `i` did at
/// least as well as entity `k`. The diagonal is fixed at 1.
#[derive(Debug, Clone)]
pub struct DominanceEstimate {
    n: usize,
    hits: Vec<u32>,     // [k * n + i]: columns with v_k <= v_i
    overlaps: Vec<u32>, // m_ki, symmetric
    excluded: Vec<(usize, usize)>,
}

impl DominanceEstimate {
    pub fn n_entities(&self) -> usize {
        self.n
    }

    /// Estimated `P(X_k <= X_i)`.
    pub fn prob(&self, k: usize, i: usize) -> f64 {
        let idx = k * self.n + i;
        if k == i || self.overlaps[idx] == 0 {
            return if k == i { 1.0 } else { 0.0 };
        }
        f64::from(self.hits[idx]) / f64::from(self.overlaps[idx])
    }

    /// Columns counted in favour of `i` against `k` (numerator of `prob`).
    pub fn hits(&self, k: usize, i: usize) -> u32 {
        if k == i {
            return self.overlaps[k * self.n + i];
        }
        self.hits[k * self.n + i]
    }

    /// Shared-ranker count `m_ki`.
    pub fn overlap(&self, k: usize, i: usize) -> u32 {
        self.overlaps[k * self.n + i]
    }

    /// Strict majority test `prob(k, i) > 1/2`, done in integers.
    pub fn majority(&self, k: usize, i: usize) -> bool {
        self.is_defined(k, i) && 2 * u64::from(self.hits(k, i)) > u64::from(self.overlap(k, i))
    }

    /// False only for excluded zero-overlap pairs.
    pub fn is_defined(&self, k: usize, i: usize) -> bool {
        k == i || self.overlaps[k * self.n + i] > 0
    }

    /// Pairs left undefined under [`ZeroOverlapPolicy::ExcludePairs`].
    pub fn excluded_pairs(&self) -> &[(usize, usize)] {
        &self.excluded
    }

    /// Score sum over one column of the grid, `Σ_k prob(k, i)`, accumulated
    /// per distinct denominator so that complete-data ties stay exact.
    pub fn score_sum(&self, i: usize) -> f64 {
        let mut groups: Vec<(u32, u64)> = Vec::new();
        for k in 0..self.n {
            if !self.is_defined(k, i) {
                continue;
            }
            let denom = self.overlap(k, i);
            if denom == 0 {
                continue;
            }
            let num = u64::from(self.hits(k, i));
            match groups.iter_mut().find(|(d, _)| *d == denom) {
                Some((_, acc)) => *acc += num,
                None => groups.push((denom, num)),
            }
        }
        groups
            .iter()
            .map(|&(d, num)| num as f64 / f64::from(d))
            .sum()
    }

    /// The same estimates with the dominance direction reversed:
    /// `transposed().prob(k, i)` estimates `P(X_i <= X_k)`.
    pub fn transposed(&self) -> DominanceEstimate {
        let n = self.n;
        let mut hits = vec![0u32; n * n];
        let mut overlaps = vec![0u32; n * n];
        for k in 0..n {
            for i in 0..n {
                hits[k * n + i] = self.hits[i * n + k];
                overlaps[k * n + i] = self.overlaps[i * n + k];
            }
        }
        DominanceEstimate {
            n,
            hits,
            overlaps,
            excluded: self.excluded.iter().map(|&(k, i)| (i, k)).collect(),
        }
    }
}

fn require_canonical(matrix: &RankMatrix) -> Result<(), RankError> {
    if matrix.orientation() != Orientation::HigherIsBetter {
        return Err(RankError::NotCanonical);
    }
    Ok(())
}

fn check_entity(index: usize, n: usize) -> Result<(), RankError> {
    if index >= n {
        return Err(RankError::EntityIndex { index, n });
    }
    Ok(())
}

/// Estimated `P(X_k <= X_i)` together with the overlap count `m_ki`.
///
/// For `k == i` this is 1 by convention, paired with the number of rankers
/// observing entity `i`.
pub fn pairwise_prob(
    matrix: &RankMatrix,
    k: usize,
    i: usize,
) -> Result<(Probability, u32), RankError> {
    require_canonical(matrix)?;
    let n = matrix.n_entities();
    check_entity(k, n)?;
    check_entity(i, n)?;
    let mut shared = 0u32;
    let mut hits = 0u32;
    for l in 0..matrix.n_rankers() {
        if let (Some(vk), Some(vi)) = (matrix.value(k, l), matrix.value(i, l)) {
            shared += 1;
            if vk <= vi {
                hits += 1;
            }
        }
    }
    if k == i {
        return Ok((Probability::clamped(1.0), shared));
    }
    if shared == 0 {
        return Err(RankError::NoCommonRanker {
            pairs: vec![(k, i)],
        });
    }
    Ok((
        Probability::clamped(f64::from(hits) / f64::from(shared)),
        shared,
    ))
}

/// Full dominance matrix under the default zero-overlap policy (error).
pub fn dominance_matrix(matrix: &RankMatrix) -> Result<DominanceEstimate, RankError> {
    dominance_matrix_with(matrix, ZeroOverlapPolicy::Error)
}

/// Full dominance matrix with an explicit zero-overlap policy.
pub fn dominance_matrix_with(
    matrix: &RankMatrix,
    policy: ZeroOverlapPolicy,
) -> Result<DominanceEstimate, RankError> {
    require_canonical(matrix)?;
    let n = matrix.n_entities();
    let m = matrix.n_rankers();
    let index = matrix.missing_index();
    let mut hit_grid = vec![0u32; n * n];
    let mut overlaps = vec![0u32; n * n];
    let mut empty_pairs = Vec::new();

    for k in 0..n {
        for i in 0..n {
            let shared = index.overlap(k, i);
            overlaps[k * n + i] = shared;
            if k == i {
                hit_grid[k * n + i] = shared;
                continue;
            }
            if shared == 0 {
                if k < i {
                    empty_pairs.push((k, i));
                }
                continue;
            }
            let mut hits = 0u32;
            for l in 0..m {
                if let (Some(vk), Some(vi)) = (matrix.value(k, l), matrix.value(i, l)) {
                    if vk <= vi {
                        hits += 1;
                    }
                }
            }
            hit_grid[k * n + i] = hits;
        }
    }

    if !empty_pairs.is_empty() && policy == ZeroOverlapPolicy::Error {
        return Err(RankError::NoCommonRanker { pairs: empty_pairs });
    }
    let mut excluded = empty_pairs.clone();
    excluded.extend(empty_pairs.iter().map(|&(k, i)| (i, k)));
    Ok(DominanceEstimate {
        n,
        hits: hit_grid,
        overlaps,
        excluded,
    })
}

/// Which joint event a [`JointTable`] tallies relative to its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JointDirection {
    /// Both `s` and `t` at or below the target: `(X_s <= X_i) ∩ (X_t <= X_i)`.
    BelowTarget,
    /// Target at or below both: `(X_i <= X_s) ∩ (X_i <= X_t)`.
    AboveTarget,
}

/// Joint dominance fractions for one target entity.
///
/// For every ordered pair `(s, t)`, holds the number of rankers observing
/// `s`, `t` and the target simultaneously, and the fraction of those columns
/// in which the configured joint event occurred.
#[derive(Debug, Clone)]
pub struct JointTable {
    pub target: usize,
    pub direction: JointDirection,
    n: usize,
    counts: Vec<u32>, // |M_si^C ∩ M_ti^C| restricted to target-observed columns
    fractions: Vec<f64>,
}

impl JointTable {
    /// Columns in which `s`, `t` and the target are all observed.
    pub fn triple_overlap(&self, s: usize, t: usize) -> u32 {
        self.counts[s * self.n + t]
    }

    /// Estimated joint probability `p_st(target)` over those columns.
    pub fn fraction(&self, s: usize, t: usize) -> f64 {
        self.fractions[s * self.n + t]
    }
}

/// Joint dominance estimates for a single target, all pairs at once.
pub fn joints_for_target(
    matrix: &RankMatrix,
    target: usize,
    direction: JointDirection,
) -> Result<JointTable, RankError> {
    require_canonical(matrix)?;
    let n = matrix.n_entities();
    check_entity(target, n)?;
    let mut counts = vec![0u32; n * n];
    let mut both = vec![0u32; n * n];
    let mut observed = Vec::with_capacity(n);
    let mut event = Vec::with_capacity(n);
    for l in 0..matrix.n_rankers() {
        let Some(vt) = matrix.value(target, l) else {
            continue;
        };
        observed.clear();
        event.clear();
        for s in 0..n {
            if let Some(vs) = matrix.value(s, l) {
                observed.push(s);
                let hit = match direction {
                    JointDirection::BelowTarget => vs <= vt,
                    JointDirection::AboveTarget => vt <= vs,
                };
                if hit {
                    event.push(s);
                }
            }
        }
        for &s in &observed {
            for &t in &observed {
                counts[s * n + t] += 1;
            }
        }
        for &s in &event {
            for &t in &event {
                both[s * n + t] += 1;
            }
        }
    }
    let fractions = counts
        .iter()
        .zip(&both)
        .map(|(&c, &b)| {
            if c > 0 {
                f64::from(b) / f64::from(c)
            } else {
                0.0
            }
        })
        .collect();
    Ok(JointTable {
        target,
        direction,
        n,
        counts,
        fractions,
    })
}

/// Estimated `P((X_s <= X_i) ∩ (X_t <= X_i))` with its triple-overlap count.
pub fn joint_prob(
    matrix: &RankMatrix,
    s: usize,
    t: usize,
    i: usize,
) -> Result<(Probability, u32), RankError> {
    require_canonical(matrix)?;
    let n = matrix.n_entities();
    check_entity(s, n)?;
    check_entity(t, n)?;
    check_entity(i, n)?;
    let index: MissingIndex = matrix.missing_index();
    let shared = index.triple_overlap(s, t, i);
    if shared == 0 {
        return Err(RankError::NoTripleOverlap { s, t, target: i });
    }
    let mut hits = 0u32;
    for l in 0..matrix.n_rankers() {
        if let (Some(vs), Some(vt), Some(vi)) =
            (matrix.value(s, l), matrix.value(t, l), matrix.value(i, l))
        {
            if vs <= vi && vt <= vi {
                hits += 1;
            }
        }
    }
    Ok((
        Probability::clamped(f64::from(hits) / f64::from(shared)),
        shared,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[i64]]) -> RankMatrix {
        let cells = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| if v < 0 { None } else { Some(v as u32) })
                    .collect()
            })
            .collect();
        RankMatrix::new(
            (0..rows.len()).map(|i| format!("e{i}")).collect(),
            cells,
            Orientation::HigherIsBetter,
        )
        .unwrap()
    }

    // canonical columns (1,2,3) and (2,1,3): entity 2 best, 0 and 1 split
    fn toy() -> RankMatrix {
        matrix(&[&[1, 2], &[2, 1], &[3, 3]])
    }

    #[test]
    fn pairwise_split_pair_is_half() {
        let (p, m) = pairwise_prob(&toy(), 0, 1).unwrap();
        assert_eq!(p.value(), 0.5);
        assert_eq!(m, 2);
    }

    #[test]
    fn pairwise_diagonal_is_one() {
        let m = matrix(&[&[1, -1], &[2, 1]]);
        let (p, overlap) = pairwise_prob(&m, 0, 0).unwrap();
        assert_eq!(p.value(), 1.0);
        assert_eq!(overlap, 1);
    }

    #[test]
    fn pairwise_requires_canonical() {
        let m = RankMatrix::new(
            vec!["a".into(), "b".into()],
            vec![vec![Some(1)], vec![Some(2)]],
            Orientation::LowerIsBetter,
        )
        .unwrap();
        assert_eq!(
            pairwise_prob(&m, 0, 1).unwrap_err(),
            RankError::NotCanonical
        );
    }

    #[test]
    fn toy_dominance_grid() {
        let dom = dominance_matrix(&toy()).unwrap();
        assert_eq!(dom.prob(0, 1), 0.5);
        assert_eq!(dom.prob(1, 0), 0.5);
        assert_eq!(dom.prob(0, 2), 1.0);
        assert_eq!(dom.prob(1, 2), 1.0);
        assert_eq!(dom.prob(2, 0), 0.0);
        assert_eq!(dom.prob(2, 1), 0.0);
        for i in 0..3 {
            assert_eq!(dom.prob(i, i), 1.0);
        }
    }

    #[test]
    fn single_column_grid_is_zero_one() {
        let dom = dominance_matrix(&matrix(&[&[2], &[1], &[3]])).unwrap();
        for k in 0..3 {
            for i in 0..3 {
                if k != i {
                    assert!(dom.prob(k, i) == 0.0 || dom.prob(k, i) == 1.0);
                }
            }
        }
    }

    #[test]
    fn antisymmetry_with_missing_cells() {
        let m = matrix(&[&[1, 4, -1], &[2, -1, 1], &[3, 5, 2], &[4, 6, 3]]);
        let dom = dominance_matrix(&m).unwrap();
        for k in 0..4 {
            for i in 0..4 {
                if k != i {
                    assert!((dom.prob(k, i) + dom.prob(i, k) - 1.0).abs() < 1e-15);
                    assert_eq!(dom.overlap(k, i), dom.overlap(i, k));
                }
            }
        }
    }

    #[test]
    fn zero_overlap_pair_errors_with_pair_list() {
        // entities 0 and 1 never share a ranker
        let m = matrix(&[&[1, -1], &[-1, 1], &[2, 2]]);
        match dominance_matrix(&m).unwrap_err() {
            RankError::NoCommonRanker { pairs } => assert_eq!(pairs, vec![(0, 1)]),
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn zero_overlap_pair_can_be_excluded() {
        let m = matrix(&[&[1, -1], &[-1, 1], &[2, 2]]);
        let dom = dominance_matrix_with(&m, ZeroOverlapPolicy::ExcludePairs).unwrap();
        assert!(!dom.is_defined(0, 1));
        assert!(dom.is_defined(0, 2));
        assert_eq!(dom.excluded_pairs().len(), 2);
    }

    #[test]
    fn transpose_swaps_direction() {
        let dom = dominance_matrix(&toy()).unwrap();
        let t = dom.transposed();
        for k in 0..3 {
            for i in 0..3 {
                assert_eq!(t.prob(k, i), dom.prob(i, k));
                assert_eq!(t.overlap(k, i), dom.overlap(k, i));
            }
        }
    }

    #[test]
    fn joint_prob_toy_values() {
        let m = toy();
        let (p, c) = joint_prob(&m, 0, 1, 2).unwrap();
        assert_eq!(p.value(), 1.0);
        assert_eq!(c, 2);
        let (p, _) = joint_prob(&m, 1, 2, 0).unwrap();
        assert_eq!(p.value(), 0.0);
    }

    #[test]
    fn joint_bounded_by_marginals_on_shared_columns() {
        let m = matrix(&[&[1, 4, 2], &[2, 1, 3], &[3, 5, 1], &[4, 2, 4]]);
        let dom = dominance_matrix(&m).unwrap();
        for i in 0..4 {
            for s in 0..4 {
                for t in 0..4 {
                    if s == t || s == i || t == i {
                        continue;
                    }
                    let (p, _) = joint_prob(&m, s, t, i).unwrap();
                    // complete data: overlaps coincide, Fréchet bounds exact
                    assert!(p.value() <= dom.prob(s, i).min(dom.prob(t, i)) + 1e-15);
                    assert!(p.value() >= (dom.prob(s, i) + dom.prob(t, i) - 1.0).max(0.0) - 1e-15);
                }
            }
        }
    }

    #[test]
    fn joints_table_matches_pointwise_joint() {
        let m = matrix(&[&[1, 4, -1], &[2, -1, 1], &[3, 5, 2], &[4, 6, 3]]);
        for i in 0..4 {
            let table = joints_for_target(&m, i, JointDirection::BelowTarget).unwrap();
            for s in 0..4 {
                for t in 0..4 {
                    if s == t {
                        continue;
                    }
                    match joint_prob(&m, s, t, i) {
                        Ok((p, c)) => {
                            assert_eq!(table.triple_overlap(s, t), c);
                            assert!((table.fraction(s, t) - p.value()).abs() < 1e-15);
                        }
                        Err(_) => assert_eq!(table.triple_overlap(s, t), 0),
                    }
                }
            }
        }
    }

    #[test]
    fn above_target_joints_complement() {
        // complete data, strict orders: above-joint = 1 - ps - pt + below-joint
        let m = matrix(&[&[1, 4, 2], &[2, 1, 3], &[3, 5, 1], &[4, 2, 4]]);
        for i in 0..4 {
            let below = joints_for_target(&m, i, JointDirection::BelowTarget).unwrap();
            let above = joints_for_target(&m, i, JointDirection::AboveTarget).unwrap();
            let dom = dominance_matrix(&m).unwrap();
            for s in 0..4 {
                for t in 0..4 {
                    if s == t || s == i || t == i {
                        continue;
                    }
                    let lhs = above.fraction(s, t);
                    let rhs = 1.0 - dom.prob(s, i) - dom.prob(t, i) + below.fraction(s, t);
                    assert!((lhs - rhs).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn deleting_uninvolved_column_preserves_pairwise() {
        // column 2 is missing for entity 0, so the (0, 1) estimate ignores it
        let m = matrix(&[&[1, 4, -1], &[2, 1, 1], &[3, 5, 2]]);
        let (p_full, m_full) = pairwise_prob(&m, 0, 1).unwrap();
        let reduced = m.without_column(2).unwrap();
        let (p_red, m_red) = pairwise_prob(&reduced, 0, 1).unwrap();
        assert_eq!(p_full.value(), p_red.value());
        assert_eq!(m_full, m_red);
    }
}
