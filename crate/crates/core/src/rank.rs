//! Observed rank matrices: validation, orientation handling, missingness
//! bookkeeping, and within-column re-ranking.

use crate::error::{RankError, ValidationIssue, ValidationReport};

/// Whether a smaller or a larger stored value means "better" for the entity.
///
/// Ballot-style data (1 = favourite) is `LowerIsBetter`; the canonical form
/// used by all dominance computations is `HigherIsBetter`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    LowerIsBetter,
    HigherIsBetter,
}

/// An N x m grid of per-ranker ranks with per-cell missingness.
///
/// Each column is one ranker's strict ordering of the entities it ranked:
/// observed values within a column are distinct positive integers. Only the
/// order of values within a column carries information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankMatrix {
    entities: Vec<String>,
    values: Vec<Option<u32>>, // row-major, n * m
    n: usize,
    m: usize,
    orientation: Orientation,
}

impl RankMatrix {
    /// Builds and validates a matrix. `rows[i][l]` is entity `i`'s value from
    /// ranker `l`, `None` when the ranker did not rank the entity.
    pub fn new(
        entities: Vec<String>,
        rows: Vec<Vec<Option<u32>>>,
        orientation: Orientation,
    ) -> Result<Self, RankError> {
        let n = entities.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut report = ValidationReport::default();
        if n < 2 {
            report.issues.push(ValidationIssue::TooFewEntities { n });
        }
        if rows.len() != n {
            report.issues.push(ValidationIssue::ShapeMismatch {
                expected: n,
                got: rows.len(),
            });
            return Err(RankError::Validation(report));
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != m) {
            report.issues.push(ValidationIssue::ShapeMismatch {
                expected: m,
                got: rows[bad].len(),
            });
            return Err(RankError::Validation(report));
        }
        if m == 0 {
            report.issues.push(ValidationIssue::NoRankers);
        }

        let mut values = Vec::with_capacity(n * m);
        for row in &rows {
            values.extend_from_slice(row);
        }
        let matrix = RankMatrix {
            entities,
            values,
            n,
            m,
            orientation,
        };
        matrix.collect_issues(&mut report);
        if report.is_empty() {
            Ok(matrix)
        } else {
            Err(RankError::Validation(report))
        }
    }

    fn collect_issues(&self, report: &mut ValidationReport) {
        for l in 0..self.m {
            let mut seen: Vec<u32> = Vec::new();
            let mut any = false;
            for i in 0..self.n {
                if let Some(v) = self.value(i, l) {
                    any = true;
                    if v == 0 {
                        report.issues.push(ValidationIssue::NonPositiveValue {
                            entity: i,
                            column: l,
                        });
                    } else if seen.contains(&v) {
                        report.issues.push(ValidationIssue::DuplicateRank {
                            column: l,
                            value: v,
                        });
                    } else {
                        seen.push(v);
                    }
                }
            }
            if !any && self.m > 0 {
                report
                    .issues
                    .push(ValidationIssue::EmptyColumn { column: l });
            }
        }
    }

    /// Re-checks all invariants; returns the violations found (empty = valid).
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.n < 2 {
            report
                .issues
                .push(ValidationIssue::TooFewEntities { n: self.n });
        }
        if self.m == 0 {
            report.issues.push(ValidationIssue::NoRankers);
        }
        self.collect_issues(&mut report);
        report
    }

    pub fn n_entities(&self) -> usize {
        self.n
    }

    pub fn n_rankers(&self) -> usize {
        self.m
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn value(&self, entity: usize, column: usize) -> Option<u32> {
        self.values[entity * self.m + column]
    }

    pub fn is_observed(&self, entity: usize, column: usize) -> bool {
        self.value(entity, column).is_some()
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    pub fn missing_cells(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// Dense ranks (1..#observed) of the observed entries of one column,
    /// ordered by the stored values; missing entities map to `None`.
    pub fn within_column_ranks(&self, column: usize) -> Result<Vec<Option<u32>>, RankError> {
        if column >= self.m {
            return Err(RankError::ColumnIndex {
                index: column,
                m: self.m,
            });
        }
        Ok((0..self.n)
            .map(|i| {
                self.value(i, column).map(|v| {
                    let mut rank = 0u32;
                    for k in 0..self.n {
                        if let Some(w) = self.value(k, column) {
                            if w <= v {
                                rank += 1;
                            }
                        }
                    }
                    rank
                })
            })
            .collect())
    }

    /// Converts to the canonical higher-is-better orientation.
    ///
    /// Lower-is-better columns have their comparison order reversed by
    /// replacing each observed value with `#observed + 1 - within_column_rank`,
    /// which keeps values positive integers. Already-canonical matrices pass
    /// through unchanged, so the operation is idempotent.
    pub fn canonicalize(&self) -> RankMatrix {
        if self.orientation == Orientation::HigherIsBetter {
            return self.clone();
        }
        let mut values = vec![None; self.n * self.m];
        for l in 0..self.m {
            let ranks = self.within_column_ranks(l).expect("column index in range");
            let observed = ranks.iter().flatten().count() as u32;
            for i in 0..self.n {
                if let Some(r) = ranks[i] {
                    values[i * self.m + l] = Some(observed + 1 - r);
                }
            }
        }
        RankMatrix {
            entities: self.entities.clone(),
            values,
            n: self.n,
            m: self.m,
            orientation: Orientation::HigherIsBetter,
        }
    }

    /// Missingness index over the matrix.
    pub fn missing_index(&self) -> MissingIndex {
        MissingIndex::new(self)
    }

    /// Drops the given column (test/diagnostic helper for sensitivity checks).
    pub fn without_column(&self, column: usize) -> Result<RankMatrix, RankError> {
        if column >= self.m {
            return Err(RankError::ColumnIndex {
                index: column,
                m: self.m,
            });
        }
        let rows: Vec<Vec<Option<u32>>> = (0..self.n)
            .map(|i| {
                (0..self.m)
                    .filter(|&l| l != column)
                    .map(|l| self.value(i, l))
                    .collect()
            })
            .collect();
        RankMatrix::new(self.entities.clone(), rows, self.orientation)
    }
}

/// Per-row observation bitmasks plus pairwise overlap counts.
///
/// `overlap(k, i)` is the number of rankers who ranked both entities
/// (`m_ki`); `overlap(i, i)` the number who ranked entity `i` at all.
#[derive(Debug, Clone)]
pub struct MissingIndex {
    n: usize,
    m: usize,
    words: usize,
    row_masks: Vec<u64>, // n * words
    overlaps: Vec<u32>,  // n * n
}

impl MissingIndex {
    fn new(matrix: &RankMatrix) -> Self {
        let n = matrix.n_entities();
        let m = matrix.n_rankers();
        let words = m.div_ceil(64);
        let mut row_masks = vec![0u64; n * words];
        for i in 0..n {
            for l in 0..m {
                if matrix.is_observed(i, l) {
                    row_masks[i * words + l / 64] |= 1u64 << (l % 64);
                }
            }
        }
        let mut overlaps = vec![0u32; n * n];
        for k in 0..n {
            for i in k..n {
                let mut count = 0u32;
                for w in 0..words {
                    count += (row_masks[k * words + w] & row_masks[i * words + w]).count_ones();
                }
                overlaps[k * n + i] = count;
                overlaps[i * n + k] = count;
            }
        }
        MissingIndex {
            n,
            m,
            words,
            row_masks,
            overlaps,
        }
    }

    pub fn n_entities(&self) -> usize {
        self.n
    }

    pub fn n_rankers(&self) -> usize {
        self.m
    }

    /// `m_ki`: rankers observing both `k` and `i`.
    pub fn overlap(&self, k: usize, i: usize) -> u32 {
        self.overlaps[k * self.n + i]
    }

    /// Rankers observing all of `a`, `b` and `c`.
    pub fn triple_overlap(&self, a: usize, b: usize, c: usize) -> u32 {
        let mut count = 0u32;
        for w in 0..self.words {
            count += (self.row_masks[a * self.words + w]
                & self.row_masks[b * self.words + w]
                & self.row_masks[c * self.words + w])
                .count_ones();
        }
        count
    }

    /// Columns missing entity `k` or entity `i` (the set `M_ki`).
    pub fn missing_pair_columns(&self, k: usize, i: usize) -> Vec<usize> {
        (0..self.m)
            .filter(|&l| !self.observed(k, l) || !self.observed(i, l))
            .collect()
    }

    /// Rows missing from column `l` (the set `M_l`).
    pub fn missing_in_column(&self, l: usize) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.observed(i, l)).collect()
    }

    pub fn observed(&self, entity: usize, column: usize) -> bool {
        self.row_masks[entity * self.words + column / 64] & (1u64 << (column % 64)) != 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::ValidationIssue;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("e{i}")).collect()
    }

    fn cells(rows: &[&[i64]]) -> Vec<Vec<Option<u32>>> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|&v| if v < 0 { None } else { Some(v as u32) })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn accepts_two_full_permutations() {
        let m = RankMatrix::new(
            labels(3),
            cells(&[&[1, 2], &[2, 1], &[3, 3]]),
            Orientation::HigherIsBetter,
        )
        .unwrap();
        assert_eq!(m.n_entities(), 3);
        assert_eq!(m.n_rankers(), 2);
        assert!(m.is_complete());
        assert!(m.validate().is_empty());
    }

    #[test]
    fn reports_duplicate_rank_with_column_and_value() {
        let err = RankMatrix::new(
            labels(3),
            cells(&[&[1, 2], &[2, 2], &[3, 2]]),
            Orientation::HigherIsBetter,
        )
        .unwrap_err();
        match err {
            RankError::Validation(report) => {
                assert!(report.issues.contains(&ValidationIssue::DuplicateRank {
                    column: 1,
                    value: 2
                }));
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn reports_every_violation_at_once() {
        let err = RankMatrix::new(
            labels(2),
            cells(&[&[0, -1], &[0, -1]]),
            Orientation::LowerIsBetter,
        )
        .unwrap_err();
        match err {
            RankError::Validation(report) => {
                assert!(report
                    .issues
                    .iter()
                    .any(|i| matches!(i, ValidationIssue::EmptyColumn { column: 1 })));
                assert!(report
                    .issues
                    .iter()
                    .any(|i| matches!(i, ValidationIssue::NonPositiveValue { .. })));
                // duplicate detection skips zero values but still flags both zeros
                assert_eq!(
                    report
                        .issues
                        .iter()
                        .filter(|i| matches!(i, ValidationIssue::NonPositiveValue { .. }))
                        .count(),
                    2
                );
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn within_column_ranks_are_order_statistics() {
        let m = RankMatrix::new(
            labels(3),
            cells(&[&[5], &[9], &[2]]),
            Orientation::HigherIsBetter,
        )
        .unwrap();
        assert_eq!(
            m.within_column_ranks(0).unwrap(),
            vec![Some(2), Some(3), Some(1)]
        );
    }

    #[test]
    fn within_column_ranks_skip_missing() {
        let m = RankMatrix::new(
            labels(3),
            cells(&[&[5], &[-1], &[2]]),
            Orientation::HigherIsBetter,
        )
        .unwrap();
        assert_eq!(
            m.within_column_ranks(0).unwrap(),
            vec![Some(2), None, Some(1)]
        );
    }

    #[test]
    fn canonicalize_reverses_comparisons() {
        let m = RankMatrix::new(
            labels(3),
            cells(&[&[1], &[2], &[3]]),
            Orientation::LowerIsBetter,
        )
        .unwrap();
        let c = m.canonicalize();
        assert_eq!(c.orientation(), Orientation::HigherIsBetter);
        // 1 = best becomes the largest canonical value
        assert_eq!(c.value(0, 0), Some(3));
        assert_eq!(c.value(1, 0), Some(2));
        assert_eq!(c.value(2, 0), Some(1));
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let m = RankMatrix::new(
            labels(4),
            cells(&[&[4, 1], &[1, -1], &[3, 2], &[2, 7]]),
            Orientation::LowerIsBetter,
        )
        .unwrap();
        let once = m.canonicalize();
        assert_eq!(once, once.canonicalize());
    }

    #[test]
    fn canonicalize_handles_truncated_columns() {
        // ranker ranked only 2 of 3 entities; reversal stays within 1..2
        let m = RankMatrix::new(
            labels(3),
            cells(&[&[1], &[-1], &[2]]),
            Orientation::LowerIsBetter,
        )
        .unwrap();
        let c = m.canonicalize();
        assert_eq!(c.value(0, 0), Some(2));
        assert_eq!(c.value(1, 0), None);
        assert_eq!(c.value(2, 0), Some(1));
    }

    #[test]
    fn missing_index_overlaps() {
        let m = RankMatrix::new(
            labels(3),
            cells(&[&[1, 1, 1], &[2, -1, 2], &[3, 2, -1]]),
            Orientation::HigherIsBetter,
        )
        .unwrap();
        let idx = m.missing_index();
        assert_eq!(idx.overlap(0, 0), 3);
        assert_eq!(idx.overlap(0, 1), 2);
        assert_eq!(idx.overlap(1, 2), 1);
        assert_eq!(idx.overlap(2, 1), 1);
        assert_eq!(idx.triple_overlap(0, 1, 2), 1);
        assert_eq!(idx.missing_pair_columns(1, 2), vec![1, 2]);
        assert_eq!(idx.missing_in_column(1), vec![1]);
        // m_ki = m - |M_ki|
        assert_eq!(
            idx.overlap(1, 2) as usize,
            m.n_rankers() - idx.missing_pair_columns(1, 2).len()
        );
    }
}
