//! Variance estimation, score confidence intervals, and the Worst-Best
//! construction of simultaneous and individual rank confidence intervals.
//!
//! Interval construction runs on the preference direction of the dominance
//! estimates (how often competitors are ranked at or above an entity), which
//! is the direction the published reference analyses use; point scores and
//! intervals therefore read "smaller is better" and display ranks come out
//! ascending. See [`Analysis`] for the end-to-end pipeline.

use crate::criteria::{ascending_display_ranks, Criterion, RankVector};
use crate::dominance::{
    dominance_matrix_with, joints_for_target, DominanceEstimate, JointDirection, JointTable,
    ZeroOverlapPolicy,
};
use crate::error::RankError;
use crate::numerics::{binom_tail_gt, norm_quantile, BinomialTailQuery, Probability};
use crate::rank::RankMatrix;

/// Simultaneous (joint over all entities) versus individual (single-entity)
/// rank confidence intervals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CiMode {
    Simultaneous,
    Individual,
}

impl std::fmt::Display for CiMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CiMode::Simultaneous => f.write_str("simultaneous"),
            CiMode::Individual => f.write_str("individual"),
        }
    }
}

/// How a per-entity confidence level maps to a normal quantile inside the
/// individual-interval search.
///
/// `OneSided` uses `z = Φ⁻¹(level)`, matching the reference analysis;
/// `TwoSided` uses the strict two-sided `z = Φ⁻¹((1 + level) / 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ZStyle {
    #[default]
    OneSided,
    TwoSided,
}

fn z_for_level(level: f64, style: ZStyle) -> Result<f64, RankError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(RankError::InvalidLevel { level });
    }
    let p = match style {
        ZStyle::OneSided => level,
        ZStyle::TwoSided => (1.0 + level) / 2.0,
    };
    norm_quantile(Probability::new(p)?)
}

/// Plug-in variance estimates for the CPDP score sums.
#[derive(Debug, Clone, PartialEq)]
pub struct CpdpVariance {
    pub variances: Vec<f64>,
}

/// Estimated upper bounds on the CTPDP count variances, with the per-pair
/// binomial tail probabilities they are built from.
#[derive(Debug, Clone, PartialEq)]
pub struct CtpdpVarianceBound {
    pub bounds: Vec<f64>,
    /// `tails[k * n + i]` = estimated `P(N*_{k,i} > m_ki / 2)`.
    pub tails: Vec<f64>,
}

/// General (missing-data) variance of the score sums over a dominance grid.
///
/// `joints[i]` must hold the joint estimates for target `i` in the same
/// dominance direction as `dom`. With complete data this reduces exactly to
/// the simpler pooled form of [`var_cpdp_complete`].
#[allow(clippy::needless_range_loop)]
pub fn var_cpdp(dom: &DominanceEstimate, joints: &[JointTable]) -> Result<CpdpVariance, RankError> {
    let n = dom.n_entities();
    if joints.len() != n {
        return Err(RankError::IntervalCount {
            expected: n,
            got: joints.len(),
        });
    }
    let mut variances = Vec::with_capacity(n);
    for i in 0..n {
        debug_assert_eq!(joints[i].target, i);
        let mut v = 0.0;
        for k in 0..n {
            let m_ki = dom.overlap(k, i);
            if m_ki == 0 {
                continue;
            }
            let p = dom.prob(k, i);
            v += p * (1.0 - p) / f64::from(m_ki);
        }
        let mut cross = 0.0;
        for s in 0..n {
            let m_si = dom.overlap(s, i);
            if m_si == 0 {
                continue;
            }
            for t in 0..n {
                if s == t {
                    continue;
                }
                let m_ti = dom.overlap(t, i);
                if m_ti == 0 {
                    continue;
                }
                let shared = joints[i].triple_overlap(s, t);
                if shared == 0 {
                    continue;
                }
                cross += f64::from(shared)
                    * (joints[i].fraction(s, t) - dom.prob(s, i) * dom.prob(t, i))
                    / (f64::from(m_si) * f64::from(m_ti));
            }
        }
        variances.push((v + cross).max(0.0));
    }
    Ok(CpdpVariance { variances })
}

/// Complete-data variance of the score sums (the pooled `1/m` form).
///
/// Kept as an independent code path from [`var_cpdp`]; on complete data the
/// two must agree to floating-point accuracy.
#[allow(clippy::needless_range_loop)]
pub fn var_cpdp_complete(
    dom: &DominanceEstimate,
    joints: &[JointTable],
) -> Result<CpdpVariance, RankError> {
    let n = dom.n_entities();
    if joints.len() != n {
        return Err(RankError::IntervalCount {
            expected: n,
            got: joints.len(),
        });
    }
    let m = dom.overlap(0, 0);
    for k in 0..n {
        for i in 0..n {
            if dom.overlap(k, i) != m {
                return Err(RankError::IncompleteData {
                    missing: (f64::from(m) - f64::from(dom.overlap(k, i))).abs() as usize,
                });
            }
        }
    }
    let mut variances = Vec::with_capacity(n);
    for i in 0..n {
        let diag: f64 = (0..n)
            .map(|k| dom.prob(k, i) * (1.0 - dom.prob(k, i)))
            .sum();
        let mut cross = 0.0;
        for s in 0..n {
            for t in 0..n {
                if s != t {
                    cross += joints[i].fraction(s, t) - dom.prob(s, i) * dom.prob(t, i);
                }
            }
        }
        variances.push(((diag + cross) / f64::from(m)).max(0.0));
    }
    Ok(CpdpVariance { variances })
}

/// Estimated upper bound on the variance of the CTPDP counts.
///
/// Each pair contributes a binomial tail at its own overlap; the covariance
/// terms use the Fréchet bound `min(τ_s, τ_t) - τ_s τ_t`.
pub fn var_ctpdp_bound(dom: &DominanceEstimate) -> CtpdpVarianceBound {
    let n = dom.n_entities();
    let mut tails = vec![0.0; n * n];
    for k in 0..n {
        for i in 0..n {
            let m_ki = dom.overlap(k, i);
            if k == i {
                tails[k * n + i] = if m_ki > 0 { 1.0 } else { 0.0 };
                continue;
            }
            if m_ki == 0 {
                continue;
            }
            let query = BinomialTailQuery::new(u64::from(m_ki), 0.5, dom.prob(k, i))
                .expect("valid tail query");
            tails[k * n + i] = binom_tail_gt(query).value();
        }
    }
    let mut bounds = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = 0.0;
        for k in 0..n {
            let tau = tails[k * n + i];
            v += tau * (1.0 - tau);
        }
        let mut cross = 0.0;
        for s in 0..n {
            let ts = tails[s * n + i];
            for t in 0..n {
                if s == t {
                    continue;
                }
                let tt = tails[t * n + i];
                cross += ts.min(tt) - ts * tt;
            }
        }
        bounds.push((v + cross).max(0.0));
    }
    CtpdpVarianceBound { bounds, tails }
}

/// Two-sided confidence interval for one entity's score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreInterval {
    pub entity: usize,
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
}

/// `score ± z(level) * sqrt(variance)` per entity, with per-entity levels.
pub fn score_intervals(
    scores: &[f64],
    variances: &[f64],
    levels: &[f64],
    style: ZStyle,
) -> Result<Vec<ScoreInterval>, RankError> {
    debug_assert_eq!(scores.len(), variances.len());
    if levels.len() != scores.len() {
        return Err(RankError::IntervalCount {
            expected: scores.len(),
            got: levels.len(),
        });
    }
    scores
        .iter()
        .zip(variances)
        .zip(levels)
        .enumerate()
        .map(|(entity, ((&score, &variance), &level))| {
            debug_assert!(variance >= 0.0);
            let margin = z_for_level(level, style)? * variance.max(0.0).sqrt();
            Ok(ScoreInterval {
                entity,
                lower: score - margin,
                upper: score + margin,
                level,
            })
        })
        .collect()
}

/// Integer rank bounds for one entity, in both orientations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankInterval {
    pub entity: usize,
    /// Counting orientation (1 = worst): lowest rank consistent with the
    /// score intervals.
    pub worst: u32,
    /// Counting orientation: highest rank consistent with the intervals.
    pub best: u32,
    /// Display orientation (1 = best): best achievable position.
    pub display_lower: u32,
    /// Display orientation: worst position.
    pub display_upper: u32,
    pub level: f64,
    pub mode: CiMode,
    pub criterion: Criterion,
}

impl RankInterval {
    pub fn display_pair(&self) -> (u32, u32) {
        (self.display_lower, self.display_upper)
    }
}

// The Worst-Best counting rule: for entity i,
//   low  = 1 + #{j != i : U_j <= L_i}   (competitors certainly below)
//   high = 1 + #{j != i : L_j <= U_i}   (competitors possibly below)
fn count_bounds(intervals: &[ScoreInterval]) -> Vec<(u32, u32)> {
    let n = intervals.len();
    (0..n)
        .map(|i| {
            let mut low = 1u32;
            let mut high = 1u32;
            for j in 0..n {
                if j == i {
                    continue;
                }
                if intervals[j].upper <= intervals[i].lower {
                    low += 1;
                }
                if intervals[j].lower <= intervals[i].upper {
                    high += 1;
                }
            }
            (low, high)
        })
        .collect()
}

/// Worst-Best rank intervals from a family of score intervals on
/// larger-is-better scores (one interval per entity, in entity order).
///
/// Returned bounds are in the counting orientation (1 = worst) with the
/// display mirror attached; `mode`/`criterion` tag the provenance.
pub fn worst_best(
    intervals: &[ScoreInterval],
    level: f64,
    mode: CiMode,
    criterion: Criterion,
) -> Vec<RankInterval> {
    let n = intervals.len() as u32;
    count_bounds(intervals)
        .into_iter()
        .enumerate()
        .map(|(entity, (low, high))| RankInterval {
            entity,
            worst: low,
            best: high,
            display_lower: n + 1 - high,
            display_upper: n + 1 - low,
            level,
            mode,
            criterion,
        })
        .collect()
}

// Same counting applied to smaller-is-better score intervals: the counts are
// then directly the display bounds (1 = best).
fn rank_intervals_from_loss_family(
    intervals: &[ScoreInterval],
    level: f64,
    mode: CiMode,
    criterion: Criterion,
) -> Vec<RankInterval> {
    let n = intervals.len() as u32;
    count_bounds(intervals)
        .into_iter()
        .enumerate()
        .map(|(entity, (low, high))| RankInterval {
            entity,
            worst: n + 1 - high,
            best: n + 1 - low,
            display_lower: low,
            display_upper: high,
            level,
            mode,
            criterion,
        })
        .collect()
}

/// Scores and variances on the preference (smaller-is-better) direction for
/// one criterion, ready for interval construction.
#[derive(Debug, Clone)]
pub struct LossModel {
    pub criterion: Criterion,
    /// CPDP: mean preference position (expected rank from the top);
    /// CTPDP: majority-loss count. Smaller is better for both.
    pub scores: Vec<f64>,
    pub variances: Vec<f64>,
}

/// End-to-end analysis of one rank matrix: canonicalization, dominance
/// estimation, point ranks, and rank confidence intervals.
///
/// Construction canonicalizes the input, so matrices may arrive in either
/// orientation.
#[derive(Debug, Clone)]
pub struct Analysis {
    canonical: RankMatrix,
    dom: DominanceEstimate,
    dom_pref: DominanceEstimate,
}

impl Analysis {
    pub fn new(matrix: &RankMatrix) -> Result<Self, RankError> {
        Self::with_policy(matrix, ZeroOverlapPolicy::Error)
    }

    pub fn with_policy(matrix: &RankMatrix, policy: ZeroOverlapPolicy) -> Result<Self, RankError> {
        let canonical = matrix.canonicalize();
        let dom = dominance_matrix_with(&canonical, policy)?;
        let dom_pref = dom.transposed();
        Ok(Analysis {
            canonical,
            dom,
            dom_pref,
        })
    }

    pub fn entities(&self) -> &[String] {
        self.canonical.entities()
    }

    pub fn n_entities(&self) -> usize {
        self.canonical.n_entities()
    }

    /// The canonical higher-is-better matrix being analyzed.
    pub fn canonical(&self) -> &RankMatrix {
        &self.canonical
    }

    /// Dominance estimates, `prob(k, i) = P̂(X_k <= X_i)`.
    pub fn dominance(&self) -> &DominanceEstimate {
        &self.dom
    }

    /// Preference-direction scores (smaller = better).
    pub fn point_scores(&self, criterion: Criterion) -> Result<Vec<f64>, RankError> {
        let n = self.dom_pref.n_entities();
        match criterion {
            Criterion::Cpdp => Ok((0..n).map(|i| self.dom_pref.score_sum(i)).collect()),
            Criterion::Ctpdp => Ok((0..n)
                .map(|i| (0..n).filter(|&k| self.dom_pref.majority(k, i)).count() as f64)
                .collect()),
            other => Err(RankError::UnsupportedCriterion { criterion: other }),
        }
    }

    /// Display point ranks (1 = best, min ties) for a criterion.
    pub fn point_ranks(&self, criterion: Criterion) -> Result<RankVector, RankError> {
        Ok(ascending_display_ranks(&self.point_scores(criterion)?))
    }

    /// Variance estimates attached to the preference-direction scores:
    /// the plug-in variance for CPDP, the upper bound for CTPDP.
    pub fn variances(&self, criterion: Criterion) -> Result<Vec<f64>, RankError> {
        match criterion {
            Criterion::Cpdp => {
                let n = self.canonical.n_entities();
                let joints: Result<Vec<JointTable>, RankError> = (0..n)
                    .map(|i| joints_for_target(&self.canonical, i, JointDirection::AboveTarget))
                    .collect();
                Ok(var_cpdp(&self.dom_pref, &joints?)?.variances)
            }
            Criterion::Ctpdp => Ok(var_ctpdp_bound(&self.dom_pref).bounds),
            other => Err(RankError::UnsupportedCriterion { criterion: other }),
        }
    }

    pub fn loss_model(&self, criterion: Criterion) -> Result<LossModel, RankError> {
        Ok(LossModel {
            criterion,
            scores: self.point_scores(criterion)?,
            variances: self.variances(criterion)?,
        })
    }

    /// Simultaneous level-`level` rank confidence intervals: per-entity score
    /// intervals at level `1 - α/N` (two-sided z), then Worst-Best counting.
    pub fn simultaneous(
        &self,
        criterion: Criterion,
        level: f64,
    ) -> Result<Vec<RankInterval>, RankError> {
        let model = self.loss_model(criterion)?;
        simultaneous_from_model(&model, level)
    }

    /// Individual level-`level` rank confidence intervals for every entity.
    pub fn individual(
        &self,
        criterion: Criterion,
        level: f64,
        style: ZStyle,
    ) -> Result<Vec<RankInterval>, RankError> {
        let model = self.loss_model(criterion)?;
        (0..self.n_entities())
            .map(|target| individual_from_model(&model, target, level, style))
            .collect()
    }

    /// Individual interval for a single target entity.
    pub fn individual_for(
        &self,
        criterion: Criterion,
        target: usize,
        level: f64,
        style: ZStyle,
    ) -> Result<RankInterval, RankError> {
        let n = self.n_entities();
        if target >= n {
            return Err(RankError::EntityIndex { index: target, n });
        }
        individual_from_model(&self.loss_model(criterion)?, target, level, style)
    }
}

pub(crate) fn simultaneous_from_model(
    model: &LossModel,
    level: f64,
) -> Result<Vec<RankInterval>, RankError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(RankError::InvalidLevel { level });
    }
    let n = model.scores.len();
    let alpha = 1.0 - level;
    let per_entity = vec![1.0 - alpha / n as f64; n];
    let intervals = score_intervals(
        &model.scores,
        &model.variances,
        &per_entity,
        ZStyle::TwoSided,
    )?;
    Ok(rank_intervals_from_loss_family(
        &intervals,
        level,
        CiMode::Simultaneous,
        model.criterion,
    ))
}

pub(crate) fn individual_from_model(
    model: &LossModel,
    target: usize,
    level: f64,
    style: ZStyle,
) -> Result<RankInterval, RankError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(RankError::InvalidLevel { level });
    }
    let n = model.scores.len();
    let alpha = 1.0 - level;
    let mut best: Option<RankInterval> = None;
    for k in 1..n {
        let mut levels = vec![1.0 - (n - k) as f64 * alpha / (n as f64 * (n - 1) as f64); n];
        levels[target] = 1.0 - k as f64 * alpha / n as f64;
        let intervals = score_intervals(&model.scores, &model.variances, &levels, style)?;
        let family =
            rank_intervals_from_loss_family(&intervals, level, CiMode::Individual, model.criterion);
        let candidate = family[target];
        let width = candidate.display_upper - candidate.display_lower;
        let improves = match &best {
            None => true,
            Some(current) => width < current.display_upper - current.display_lower,
        };
        if improves {
            best = Some(candidate);
        }
    }
    best.ok_or(RankError::EntityIndex { index: target, n })
}

/// Simultaneous rank confidence intervals straight from a rank matrix.
pub fn simultaneous_rank_cis(
    matrix: &RankMatrix,
    criterion: Criterion,
    level: f64,
) -> Result<Vec<RankInterval>, RankError> {
    Analysis::new(matrix)?.simultaneous(criterion, level)
}

/// Individual rank confidence interval for one entity from a rank matrix.
pub fn individual_rank_ci(
    matrix: &RankMatrix,
    criterion: Criterion,
    target: usize,
    level: f64,
    style: ZStyle,
) -> Result<RankInterval, RankError> {
    Analysis::new(matrix)?.individual_for(criterion, target, level, style)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dominance::dominance_matrix;
    use crate::rank::Orientation;

    fn matrix(rows: &[&[u32]]) -> RankMatrix {
        RankMatrix::new(
            (0..rows.len()).map(|i| format!("e{i}")).collect(),
            rows.iter()
                .map(|r| r.iter().map(|&v| Some(v)).collect())
                .collect(),
            Orientation::HigherIsBetter,
        )
        .unwrap()
    }

    fn win_joints(m: &RankMatrix) -> Vec<JointTable> {
        (0..m.n_entities())
            .map(|i| joints_for_target(m, i, JointDirection::BelowTarget).unwrap())
            .collect()
    }

    #[test]
    fn variance_zero_when_dominance_deterministic() {
        let m = matrix(&[&[1, 1, 1], &[2, 2, 2], &[3, 3, 3]]);
        let dom = dominance_matrix(&m).unwrap();
        let v = var_cpdp(&dom, &win_joints(&m)).unwrap();
        for &x in &v.variances {
            assert!(x.abs() < 1e-15);
        }
        let b = var_ctpdp_bound(&dom);
        for &x in &b.bounds {
            assert!(x.abs() < 1e-15);
        }
    }

    #[test]
    fn variance_two_entities_matches_closed_form() {
        // entity 1 beats entity 0 in 1 of 4 columns: p̂_01 = ... = 1/4
        let m = matrix(&[&[2, 1, 2, 2], &[1, 2, 1, 1]]);
        let dom = dominance_matrix(&m).unwrap();
        let p = dom.prob(1, 0); // P(X_1 <= X_0) = 3/4
        assert_eq!(p, 0.75);
        let v = var_cpdp(&dom, &win_joints(&m)).unwrap();
        // V(ŝ_0) = p(1-p)/m, single cross pair vanishes
        assert!((v.variances[0] - p * (1.0 - p) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn complete_data_routes_agree() {
        let m = matrix(&[&[3, 1, 4, 2], &[1, 3, 2, 4], &[4, 2, 3, 1], &[2, 4, 1, 3]]);
        let dom = dominance_matrix(&m).unwrap();
        let joints = win_joints(&m);
        let general = var_cpdp(&dom, &joints).unwrap();
        let pooled = var_cpdp_complete(&dom, &joints).unwrap();
        for (a, b) in general.variances.iter().zip(&pooled.variances) {
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn ctpdp_bound_two_entity_example() {
        // two entities splitting 4 columns evenly: tau = P(B(4, 1/2) > 2) = 0.3125
        let m = matrix(&[&[1, 2, 1, 2], &[2, 1, 2, 1]]);
        let dom = dominance_matrix(&m).unwrap();
        let b = var_ctpdp_bound(&dom);
        let tau = 0.3125;
        for &x in &b.bounds {
            assert!((x - tau * (1.0 - tau)).abs() < 1e-12);
        }
        assert!((b.tails[1] - tau).abs() < 1e-12); // tails[0 * 2 + 1]
    }

    #[test]
    fn score_interval_degenerate_when_variance_zero() {
        let iv = score_intervals(&[2.5], &[0.0], &[0.95], ZStyle::TwoSided).unwrap();
        assert_eq!(iv[0].lower, 2.5);
        assert_eq!(iv[0].upper, 2.5);
    }

    #[test]
    fn score_interval_z_values() {
        // two-sided at level 0.975 (Bonferroni alpha/N with alpha=0.05, N=2)
        let iv = score_intervals(&[0.0], &[1.0], &[0.975], ZStyle::TwoSided).unwrap();
        assert!((iv[0].upper - 2.241403).abs() < 1e-5);
        // plain two-sided 0.95
        let iv = score_intervals(&[0.0], &[1.0], &[0.95], ZStyle::TwoSided).unwrap();
        assert!((iv[0].upper - 1.959964).abs() < 1e-5);
        // one-sided style
        let iv = score_intervals(&[0.0], &[1.0], &[0.95], ZStyle::OneSided).unwrap();
        assert!((iv[0].upper - 1.644854).abs() < 1e-5);
    }

    #[test]
    fn score_interval_width_monotone_in_level() {
        let mut last = 0.0;
        for level in [0.5, 0.8, 0.9, 0.95, 0.99] {
            let iv = score_intervals(&[0.0], &[2.0], &[level], ZStyle::TwoSided).unwrap();
            let width = iv[0].upper - iv[0].lower;
            assert!(width > last);
            last = width;
        }
    }

    #[test]
    fn score_interval_rejects_bad_level() {
        assert!(score_intervals(&[0.0], &[1.0], &[0.0], ZStyle::TwoSided).is_err());
        assert!(score_intervals(&[0.0], &[1.0], &[1.0], ZStyle::TwoSided).is_err());
    }

    fn iv(entity: usize, lower: f64, upper: f64) -> ScoreInterval {
        ScoreInterval {
            entity,
            lower,
            upper,
            level: 0.95,
        }
    }

    #[test]
    fn worst_best_hand_example() {
        let bounds = worst_best(
            &[iv(0, 10.0, 12.0), iv(1, 5.0, 6.0), iv(2, 5.5, 7.0)],
            0.95,
            CiMode::Simultaneous,
            Criterion::Cpdp,
        );
        assert_eq!((bounds[0].worst, bounds[0].best), (3, 3));
        assert_eq!((bounds[1].worst, bounds[1].best), (1, 2));
        assert_eq!((bounds[2].worst, bounds[2].best), (1, 2));
        // display mirror for N = 3
        assert_eq!(bounds[0].display_pair(), (1, 1));
        assert_eq!(bounds[1].display_pair(), (2, 3));
        assert_eq!(bounds[2].display_pair(), (2, 3));
    }

    #[test]
    fn worst_best_identical_intervals_span_everything() {
        let family: Vec<ScoreInterval> = (0..4).map(|e| iv(e, 1.0, 2.0)).collect();
        for b in worst_best(&family, 0.95, CiMode::Simultaneous, Criterion::Cpdp) {
            assert_eq!((b.worst, b.best), (1, 4));
            assert_eq!(b.display_pair(), (1, 4));
        }
    }

    #[test]
    fn worst_best_disjoint_intervals_pin_ranks() {
        let family = [iv(0, 0.0, 1.0), iv(1, 2.0, 3.0), iv(2, 4.0, 5.0)];
        let bounds = worst_best(&family, 0.95, CiMode::Simultaneous, Criterion::Cpdp);
        for (i, b) in bounds.iter().enumerate() {
            assert_eq!((b.worst, b.best), ((i + 1) as u32, (i + 1) as u32));
        }
    }

    #[test]
    fn widening_intervals_never_shrinks_rank_intervals() {
        let narrow = [iv(0, 1.0, 2.0), iv(1, 2.5, 3.0), iv(2, 2.8, 4.0)];
        let wide: Vec<ScoreInterval> = narrow
            .iter()
            .map(|s| iv(s.entity, s.lower - 0.5, s.upper + 0.5))
            .collect();
        let nb = worst_best(&narrow, 0.95, CiMode::Simultaneous, Criterion::Cpdp);
        let wb = worst_best(&wide, 0.95, CiMode::Simultaneous, Criterion::Cpdp);
        for (a, b) in nb.iter().zip(&wb) {
            assert!(b.worst <= a.worst);
            assert!(b.best >= a.best);
        }
    }

    #[test]
    fn deterministic_input_gives_degenerate_cis() {
        // two entities, perfectly consistent rankers
        let m = matrix(&[&[1, 1, 1], &[2, 2, 2]]);
        let analysis = Analysis::new(&m).unwrap();
        for criterion in [Criterion::Cpdp, Criterion::Ctpdp] {
            let cis = analysis.simultaneous(criterion, 0.95).unwrap();
            assert_eq!(cis[0].display_pair(), (2, 2));
            assert_eq!(cis[1].display_pair(), (1, 1));
        }
    }

    #[test]
    fn identical_two_entity_columns_cover_everything() {
        // entities swap in half the columns: total uncertainty
        let m = matrix(&[&[1, 2, 1, 2], &[2, 1, 2, 1]]);
        let cis = Analysis::new(&m)
            .unwrap()
            .simultaneous(Criterion::Cpdp, 0.95)
            .unwrap();
        for ci in cis {
            assert_eq!(ci.display_pair(), (1, 2));
        }
    }

    #[test]
    fn point_rank_lies_inside_interval() {
        let m = matrix(&[
            &[1, 3, 2, 4, 1],
            &[2, 1, 4, 3, 3],
            &[3, 4, 1, 2, 2],
            &[4, 2, 3, 1, 4],
        ]);
        let analysis = Analysis::new(&m).unwrap();
        for criterion in [Criterion::Cpdp, Criterion::Ctpdp] {
            let points = analysis.point_ranks(criterion).unwrap();
            for mode_cis in [
                analysis.simultaneous(criterion, 0.95).unwrap(),
                analysis
                    .individual(criterion, 0.95, ZStyle::OneSided)
                    .unwrap(),
            ] {
                for ci in mode_cis {
                    let r = points.display_ranks[ci.entity];
                    assert!(ci.display_lower <= r && r <= ci.display_upper);
                    assert!(ci.worst <= ci.best);
                }
            }
        }
    }

    #[test]
    fn individual_k1_two_sided_equals_simultaneous_family() {
        // with k = 1 and two-sided z the individual family is exactly the
        // Bonferroni simultaneous family
        let m = matrix(&[&[1, 3, 2], &[2, 1, 3], &[3, 2, 1], &[4, 4, 4]]);
        let analysis = Analysis::new(&m).unwrap();
        let model = analysis.loss_model(Criterion::Cpdp).unwrap();
        let n = model.scores.len();
        let alpha = 0.05;
        let k = 1usize;
        let mut levels = vec![1.0 - (n - k) as f64 * alpha / (n as f64 * (n - 1) as f64); n];
        levels[0] = 1.0 - k as f64 * alpha / n as f64;
        // all entries equal 1 - alpha/N when k = 1
        for &l in &levels {
            assert!((l - (1.0 - alpha / n as f64)).abs() < 1e-15);
        }
        let individual_family =
            score_intervals(&model.scores, &model.variances, &levels, ZStyle::TwoSided).unwrap();
        let sim_levels = vec![1.0 - alpha / n as f64; n];
        let sim_family = score_intervals(
            &model.scores,
            &model.variances,
            &sim_levels,
            ZStyle::TwoSided,
        )
        .unwrap();
        for (a, b) in individual_family.iter().zip(&sim_family) {
            assert!((a.lower - b.lower).abs() < 1e-12);
            assert!((a.upper - b.upper).abs() < 1e-12);
        }
    }

    #[test]
    fn individual_no_wider_than_simultaneous() {
        let m = matrix(&[
            &[1, 3, 2, 4, 1],
            &[2, 1, 4, 3, 3],
            &[3, 4, 1, 2, 2],
            &[4, 2, 3, 1, 4],
        ]);
        let analysis = Analysis::new(&m).unwrap();
        for criterion in [Criterion::Cpdp, Criterion::Ctpdp] {
            for style in [ZStyle::OneSided, ZStyle::TwoSided] {
                let sim = analysis.simultaneous(criterion, 0.95).unwrap();
                let ind = analysis.individual(criterion, 0.95, style).unwrap();
                for (s, i) in sim.iter().zip(&ind) {
                    let ws = s.display_upper - s.display_lower;
                    let wi = i.display_upper - i.display_lower;
                    assert!(wi <= ws);
                }
            }
        }
    }

    #[test]
    fn ci_functions_reject_baseline_criteria() {
        let m = matrix(&[&[1, 2], &[2, 1], &[3, 3]]);
        assert!(matches!(
            simultaneous_rank_cis(&m, Criterion::Borda, 0.95).unwrap_err(),
            RankError::UnsupportedCriterion { .. }
        ));
    }

    #[test]
    fn ci_functions_reject_bad_level() {
        let m = matrix(&[&[1, 2], &[2, 1], &[3, 3]]);
        assert!(simultaneous_rank_cis(&m, Criterion::Cpdp, 1.0).is_err());
        assert!(individual_rank_ci(&m, Criterion::Cpdp, 0, 0.0, ZStyle::OneSided).is_err());
    }
}
