//! Set-convergence diagnostics on finite sequence prefixes.
//!
//! Limit statements about sequences of sets become decidable at desk scale
//! by replacing limits with residual sequences over a prefix and reading a
//! decay verdict off each sequence:
//!
//! - the inner residual `a_n = H*(C, C_n)` decays exactly when every point
//!   of the finite target `C` is eventually approximated by the `C_n`
//!   (liminf membership);
//! - the truncated outer residual `b_n(R) = H*(C_n ∩ ball(R), C)` decays
//!   for every fixed truncation radius exactly when no mass accumulates
//!   outside `C`, while still allowing mass to escape to infinity.
//!
//! Endograph-level residuals of the same shape diagnose set convergence of
//! the endographs themselves; per-level residuals over a grid of non-jump
//! levels diagnose its level decomposition. Anything farther from the
//! origin than the largest truncation radius is invisible to the outer
//! diagnostic, so radii should exceed the spatial diameter of interest.
//!
//! A residual sequence is declared convergent when the maximum over its
//! last quartile falls below the policy threshold, or when it decays
//! monotonically by at least a factor of two over the prefix. Outer
//! columns at radius `R` are judged on the sub-prefix with labels beyond
//! `R` (where the truncation has settled); columns with fewer than two such
//! entries are inconclusive and do not contribute.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fuzzy::{FuzzyError, LevelFuzzySet};
use crate::geometry::{
    bounding_radius, directed_hausdorff, hausdorff, is_connected, ExtendedDistance, GeometryConfig,
    GeometryError, PointCloud,
};
use crate::metrics::{dp_metric, endograph_metric, sendograph_metric, EndographView, MetricError};

#[derive(Debug, Error, PartialEq)]
pub enum ConvergenceError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("sequence: must be nonempty")]
    EmptySequence,
    #[error("labels: expected {items} labels, found {labels}")]
    LabelCount { items: usize, labels: usize },
    #[error("alpha_grid: empty after excluding platform points")]
    EmptyGrid,
    #[error("radius: must be strictly positive")]
    NonPositiveRadius,
    #[error("candidate: must not be the empty fuzzy set")]
    EmptyCandidate,
    #[error("item {index}: cut at level {level} is not connected")]
    DisconnectedCut { index: usize, level: f64 },
    #[error("implication violated: {details}")]
    ImplicationViolation { details: String },
    #[error("gamma and endograph-metric verdicts disagree ({gamma:?} vs {hend:?}) on a connected family")]
    EquivalenceMismatch { gamma: Verdict, hend: Verdict },
}

/// A finite ordered prefix of a sequence of fuzzy sets, all of one
/// dimension. Labels default to 1, 2, ... and carry the generator index
/// when the prefix comes from a family.
#[derive(Clone, Debug)]
pub struct SequencePrefix {
    items: Vec<LevelFuzzySet>,
    labels: Vec<f64>,
}

impl SequencePrefix {
    pub fn new(items: Vec<LevelFuzzySet>) -> Result<SequencePrefix, ConvergenceError> {
        let labels = (1..=items.len()).map(|i| i as f64).collect();
        SequencePrefix::with_labels(items, labels)
    }

    pub fn with_labels(
        items: Vec<LevelFuzzySet>,
        labels: Vec<f64>,
    ) -> Result<SequencePrefix, ConvergenceError> {
        if items.is_empty() {
            return Err(ConvergenceError::EmptySequence);
        }
        if labels.len() != items.len() {
            return Err(ConvergenceError::LabelCount {
                items: items.len(),
                labels: labels.len(),
            });
        }
        let dim = items[0].dim();
        for item in &items[1..] {
            if item.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    left: dim,
                    right: item.dim(),
                }
                .into());
            }
        }
        Ok(SequencePrefix { items, labels })
    }

    pub fn items(&self) -> &[LevelFuzzySet] {
        &self.items
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.items[0].dim()
    }
}

/// Inner residual `H*(target, item)`: decays along a prefix exactly when
/// the finite target is contained in the lower set limit.
pub fn inner_residual(
    target: &PointCloud,
    item: &PointCloud,
) -> Result<ExtendedDistance, ConvergenceError> {
    Ok(directed_hausdorff(target, item)?)
}

/// Truncated outer residual `H*(item ∩ ball(radius), target)`, zero when the
/// truncated cloud is empty. Decay for every fixed radius diagnoses
/// `limsup ⊆ target` while letting mass escape to infinity.
pub fn truncated_outer_residual(
    item: &PointCloud,
    target: &PointCloud,
    radius: f64,
) -> Result<ExtendedDistance, ConvergenceError> {
    if !crate::geometry::is_positive_length(radius) {
        return Err(ConvergenceError::NonPositiveRadius);
    }
    let truncated = item.restrict_to_ball(radius);
    if truncated.is_empty() {
        return Ok(ExtendedDistance::ZERO);
    }
    Ok(directed_hausdorff(&truncated, target)?)
}

/// Midpoints between consecutive candidate levels (with 0 and 1 as outer
/// boundaries): the default evaluation grid, which avoids every platform
/// point of the candidate by construction.
pub fn midpoint_grid(u: &LevelFuzzySet) -> Vec<f64> {
    let mut bounds = vec![0.0];
    bounds.extend_from_slice(u.levels());
    if *bounds.last().expect("nonempty") < 1.0 {
        bounds.push(1.0);
    }
    bounds
        .windows(2)
        .map(|w| w[0] + (w[1] - w[0]) / 2.0)
        .collect()
}

/// `count` evenly spaced levels in (0,1) with exact platform points of the
/// candidate dropped (collisions are nudged once, then dropped).
pub fn uniform_non_platform_grid(u: &LevelFuzzySet, count: usize) -> Vec<f64> {
    let platform = u.platform_points();
    let mut out = Vec::with_capacity(count);
    for j in 0..count {
        let mut alpha = (2 * j + 1) as f64 / (2 * count) as f64;
        if platform.contains(&alpha) {
            alpha += 1.0 / (4 * count) as f64;
            if platform.contains(&alpha) || alpha >= 1.0 {
                continue;
            }
        }
        out.push(alpha);
    }
    out
}

/// One `(item, level)` cell of a residual table plus the per-item scalar
/// columns, repeated across the item's rows so the CSV stays flat.
#[derive(Clone, Debug)]
pub struct ResidualRow {
    pub label: f64,
    pub alpha: f64,
    /// Inner residual against the strong cut of the candidate.
    pub inner: ExtendedDistance,
    /// Truncated outer residuals against the closed cut, one per radius.
    pub outer: Vec<ExtendedDistance>,
    /// Symmetric Hausdorff distance between the cuts.
    pub cut_hausdorff: ExtendedDistance,
    pub hend: f64,
    pub dp: ExtendedDistance,
    pub sendograph: ExtendedDistance,
}

/// Per-item, per-level convergence residuals of a prefix against a
/// candidate limit. Rows are item-major, level-minor; levels exclude the
/// candidate's platform points.
#[derive(Clone, Debug)]
pub struct ResidualTable {
    pub alphas: Vec<f64>,
    pub radii: Vec<f64>,
    pub p: f64,
    pub rows: Vec<ResidualRow>,
}

impl ResidualTable {
    fn column<T>(&self, alpha_index: usize, f: impl Fn(&ResidualRow) -> T) -> Vec<T> {
        self.rows
            .iter()
            .skip(alpha_index)
            .step_by(self.alphas.len())
            .map(f)
            .collect()
    }

    pub fn inner_column(&self, alpha_index: usize) -> Vec<ExtendedDistance> {
        self.column(alpha_index, |r| r.inner)
    }

    pub fn outer_column(&self, alpha_index: usize, radius_index: usize) -> Vec<ExtendedDistance> {
        self.column(alpha_index, |r| r.outer[radius_index])
    }

    pub fn cut_hausdorff_column(&self, alpha_index: usize) -> Vec<ExtendedDistance> {
        self.column(alpha_index, |r| r.cut_hausdorff)
    }

    /// Per-item labels, in row order.
    pub fn item_labels(&self) -> Vec<f64> {
        self.column(0, |r| r.label)
    }

    pub fn hend_column(&self) -> Vec<f64> {
        self.column(0, |r| r.hend)
    }

    pub fn dp_column(&self) -> Vec<ExtendedDistance> {
        self.column(0, |r| r.dp)
    }

    pub fn sendograph_column(&self) -> Vec<ExtendedDistance> {
        self.column(0, |r| r.sendograph)
    }

    /// CSV with columns `n, alpha, a_n, b_n@R..., H_cut, H_end, d_p,
    /// sendograph`; infinite entries print as `inf`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,alpha,a_n");
        for r in &self.radii {
            out.push_str(&format!(",b_n@{r}"));
        }
        out.push_str(",H_cut,H_end,d_p,sendograph\n");
        for row in &self.rows {
            out.push_str(&format!("{},{},{}", row.label, row.alpha, row.inner));
            for b in &row.outer {
                out.push_str(&format!(",{b}"));
            }
            out.push_str(&format!(
                ",{},{},{},{}\n",
                row.cut_hausdorff, row.hend, row.dp, row.sendograph
            ));
        }
        out
    }
}

fn filtered_grid(u: &LevelFuzzySet, alpha_grid: &[f64]) -> Result<Vec<f64>, ConvergenceError> {
    let platform = u.platform_points();
    let alphas: Vec<f64> = alpha_grid
        .iter()
        .copied()
        .filter(|a| !platform.contains(a))
        .collect();
    if alphas.is_empty() {
        return Err(ConvergenceError::EmptyGrid);
    }
    Ok(alphas)
}

/// Builds the residual table of a prefix against a candidate limit.
///
/// Platform points of the candidate are excluded from the grid
/// automatically. Off those points the closed and strong cuts of the
/// candidate coincide, so the inner residual targets the strong cut and the
/// outer residual the closed cut without ambiguity. `p` is the exponent of
/// the `d_p` scalar column.
pub fn gamma_residual_table(
    seq: &SequencePrefix,
    u: &LevelFuzzySet,
    alpha_grid: &[f64],
    radii: &[f64],
    p: f64,
) -> Result<ResidualTable, ConvergenceError> {
    let alphas = filtered_grid(u, alpha_grid)?;
    for &r in radii {
        if !crate::geometry::is_positive_length(r) {
            return Err(ConvergenceError::NonPositiveRadius);
        }
    }
    let rows: Result<Vec<Vec<ResidualRow>>, ConvergenceError> = seq
        .items
        .par_iter()
        .zip(&seq.labels)
        .map(|(item, &label)| {
            let hend = endograph_metric(item, u)?;
            let dp = dp_metric(item, u, p)?;
            let sendograph = sendograph_metric(item, u)?;
            let mut item_rows = Vec::with_capacity(alphas.len());
            for &alpha in &alphas {
                let strong = u.strong_cut(alpha)?;
                let closed = u.cut(alpha)?;
                let item_cut = item.cut(alpha)?;
                let inner = inner_residual(&strong, &item_cut)?;
                let outer = radii
                    .iter()
                    .map(|&r| truncated_outer_residual(&item_cut, &closed, r))
                    .collect::<Result<Vec<_>, _>>()?;
                let cut_hausdorff = hausdorff(&item_cut, &closed)?;
                item_rows.push(ResidualRow {
                    label,
                    alpha,
                    inner,
                    outer,
                    cut_hausdorff,
                    hend,
                    dp,
                    sendograph,
                });
            }
            Ok(item_rows)
        })
        .collect();
    Ok(ResidualTable {
        alphas,
        radii: radii.to_vec(),
        p,
        rows: rows?.into_iter().flatten().collect(),
    })
}

/// Endograph-metric residuals `H_end(u_n, u)` plus the per-level Hausdorff
/// columns on the given grid (platform points of the candidate excluded).
#[derive(Clone, Debug)]
pub struct HendResiduals {
    pub hend: Vec<f64>,
    pub alphas: Vec<f64>,
    /// `per_level[i][j]` is `H([u_i]_{a_j}, [u]_{a_j})`.
    pub per_level: Vec<Vec<ExtendedDistance>>,
}

pub fn hend_residuals(
    seq: &SequencePrefix,
    u: &LevelFuzzySet,
    alpha_grid: &[f64],
) -> Result<HendResiduals, ConvergenceError> {
    let alphas = filtered_grid(u, alpha_grid)?;
    let mut hend = Vec::with_capacity(seq.len());
    let mut per_level = Vec::with_capacity(seq.len());
    for item in &seq.items {
        hend.push(endograph_metric(item, u)?);
        let mut row = Vec::with_capacity(alphas.len());
        for &alpha in &alphas {
            row.push(hausdorff(&item.cut(alpha)?, &u.cut(alpha)?)?);
        }
        per_level.push(row);
    }
    Ok(HendResiduals {
        hend,
        alphas,
        per_level,
    })
}

/// Bounding radius of the union of the prefix's cuts, per grid level.
pub fn boundedness_profile(
    seq: &SequencePrefix,
    alpha_grid: &[f64],
) -> Result<Vec<ExtendedDistance>, ConvergenceError> {
    let mut out = Vec::with_capacity(alpha_grid.len());
    for &alpha in alpha_grid {
        let mut worst = ExtendedDistance::ZERO;
        for item in &seq.items {
            worst = worst.max(bounding_radius(&item.cut(alpha)?));
        }
        out.push(worst);
    }
    Ok(out)
}

/// Inner residuals at the endograph level: `H*(end u, end u_n)`.
pub fn endograph_inner_residuals(
    seq: &SequencePrefix,
    u: &LevelFuzzySet,
) -> Result<Vec<f64>, ConvergenceError> {
    let tops = u.support_memberships();
    let support = u.support();
    let mut out = Vec::with_capacity(seq.len());
    for item in &seq.items {
        let view = EndographView::new(item);
        let mut worst = 0.0f64;
        for (x, &t) in support.iter().zip(&tops) {
            let d = view.point_distance(x, t)?;
            if d > worst {
                worst = d;
            }
        }
        out.push(worst);
    }
    Ok(out)
}

/// Truncated outer residuals at the endograph level: the distance to
/// `end u` of the farthest endograph point of `u_n` whose spatial part lies
/// in the origin ball of the given radius. The zero slab is shared and
/// contributes nothing.
pub fn endograph_truncated_outer_residuals(
    seq: &SequencePrefix,
    u: &LevelFuzzySet,
    radius: f64,
) -> Result<Vec<f64>, ConvergenceError> {
    if !crate::geometry::is_positive_length(radius) {
        return Err(ConvergenceError::NonPositiveRadius);
    }
    let view = EndographView::new(u);
    let r_sq = radius * radius;
    let mut out = Vec::with_capacity(seq.len());
    for item in &seq.items {
        let mut worst = 0.0f64;
        for (x, t) in item.support().iter().zip(item.support_memberships()) {
            if crate::geometry::norm_sq(x) > r_sq {
                continue;
            }
            let d = view.point_distance(x, t)?;
            if d > worst {
                worst = d;
            }
        }
        out.push(worst);
    }
    Ok(out)
}

/// Decision about one residual sequence over a finite prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "yes")]
    Converges,
    #[serde(rename = "no")]
    Diverges,
}

/// Thresholds for decay verdicts; `threshold` should be about ten times the
/// sample spacing of the representation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayPolicy {
    pub threshold: f64,
}

impl DecayPolicy {
    pub fn for_spacing(spacing: f64) -> DecayPolicy {
        DecayPolicy {
            threshold: 10.0 * spacing,
        }
    }
}

impl Default for DecayPolicy {
    fn default() -> DecayPolicy {
        DecayPolicy::for_spacing(1.0 / 16.0)
    }
}

/// Declares a residual sequence convergent when the maximum over its last
/// quartile is below the threshold, or when it decays monotonically by a
/// factor of at least two across the prefix.
pub fn decay_verdict(values: &[ExtendedDistance], policy: &DecayPolicy) -> Verdict {
    if values.is_empty() {
        return Verdict::Converges;
    }
    let tail_len = values.len().div_ceil(4);
    let tail = &values[values.len() - tail_len..];
    if tail
        .iter()
        .all(|v| v.is_finite() && v.value() <= policy.threshold)
    {
        return Verdict::Converges;
    }
    if values.iter().all(|v| v.is_finite()) {
        let monotone = values
            .windows(2)
            .all(|w| w[1].value() <= w[0].value() + 1e-12);
        let first = values[0].value();
        let last = values[values.len() - 1].value();
        if monotone && last > 0.0 && first >= 2.0 * last {
            return Verdict::Converges;
        }
    }
    Verdict::Diverges
}

fn scalar_verdict(values: &[f64], policy: &DecayPolicy) -> Verdict {
    let wrapped: Vec<ExtendedDistance> = values.iter().map(|&v| ExtendedDistance::new(v)).collect();
    decay_verdict(&wrapped, policy)
}

/// Stability verdict for a nondecreasing sequence (cumulative radii):
/// bounded when the last quartile grows by at most the threshold.
fn stable_tail(values: &[f64], policy: &DecayPolicy) -> Verdict {
    if values.len() <= 1 {
        return Verdict::Converges;
    }
    let tail_len = values.len().div_ceil(4);
    let start = values.len() - tail_len;
    let base = if start == 0 {
        values[0]
    } else {
        values[start - 1]
    };
    if values[values.len() - 1] - base <= policy.threshold {
        Verdict::Converges
    } else {
        Verdict::Diverges
    }
}

fn cumulative_radii(seq: &SequencePrefix, alpha: f64) -> Result<Vec<f64>, ConvergenceError> {
    let mut out = Vec::with_capacity(seq.len());
    let mut worst = 0.0f64;
    for item in &seq.items {
        let r = bounding_radius(&item.cut(alpha)?).value();
        if r > worst {
            worst = r;
        }
        out.push(worst);
    }
    Ok(out)
}

fn cumulative_support_radii(seq: &SequencePrefix) -> Vec<f64> {
    let mut out = Vec::with_capacity(seq.len());
    let mut worst = 0.0f64;
    for item in &seq.items {
        let r = bounding_radius(&item.support()).value();
        if r > worst {
            worst = r;
        }
        out.push(worst);
    }
    out
}

/// Decay verdicts for a prefix against a candidate limit, one per
/// convergence notion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceVerdicts {
    /// `d_p(u_n, u) -> 0`.
    pub dp: Verdict,
    /// `H_end(u_n, u) -> 0`.
    pub hend: Verdict,
    /// Set convergence of the endographs (inner and truncated outer
    /// residuals at the endograph level).
    pub gamma: Verdict,
    /// Per-level set convergence of the cuts over the grid.
    pub per_level_kuratowski: Verdict,
    /// Per-level Hausdorff convergence of the cuts over the grid.
    pub per_level_hausdorff: Verdict,
    /// Per-level boundedness of the union of the prefix's cuts.
    pub bounded: Verdict,
    /// Boundedness of the union of the prefix's supports.
    pub support_bounded: Verdict,
}

/// Judges one outer column: restrict to labels strictly beyond the radius
/// (where truncation has settled); fewer than two such entries are
/// inconclusive.
fn outer_column_verdict(
    labels: &[f64],
    column: &[ExtendedDistance],
    radius: f64,
    policy: &DecayPolicy,
) -> Option<Verdict> {
    let settled: Vec<ExtendedDistance> = labels
        .iter()
        .zip(column)
        .filter(|(&l, _)| l > radius)
        .map(|(_, &v)| v)
        .collect();
    if settled.len() < 2 {
        return None;
    }
    Some(decay_verdict(&settled, policy))
}

fn all_converge(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    if verdicts.into_iter().all(|v| v == Verdict::Converges) {
        Verdict::Converges
    } else {
        Verdict::Diverges
    }
}

/// Computes all verdicts without asserting any implication between them.
pub fn convergence_verdicts(
    seq: &SequencePrefix,
    u: &LevelFuzzySet,
    alpha_grid: &[f64],
    radii: &[f64],
    p: f64,
    policy: &DecayPolicy,
) -> Result<(ConvergenceVerdicts, ResidualTable), ConvergenceError> {
    let table = gamma_residual_table(seq, u, alpha_grid, radii, p)?;
    let labels = table.item_labels();

    let dp = decay_verdict(&table.dp_column(), policy);
    let hend = scalar_verdict(&table.hend_column(), policy);

    let inner = endograph_inner_residuals(seq, u)?;
    let mut gamma_parts = vec![scalar_verdict(&inner, policy)];
    for &r in radii {
        let outer = endograph_truncated_outer_residuals(seq, u, r)?;
        let wrapped: Vec<ExtendedDistance> =
            outer.iter().map(|&v| ExtendedDistance::new(v)).collect();
        if let Some(v) = outer_column_verdict(&labels, &wrapped, r, policy) {
            gamma_parts.push(v);
        }
    }
    let gamma = all_converge(gamma_parts);

    let mut level_parts = Vec::new();
    let mut level_h_parts = Vec::new();
    for ai in 0..table.alphas.len() {
        level_parts.push(decay_verdict(&table.inner_column(ai), policy));
        for (ri, &radius) in radii.iter().enumerate() {
            if let Some(v) =
                outer_column_verdict(&labels, &table.outer_column(ai, ri), radius, policy)
            {
                level_parts.push(v);
            }
        }
        level_h_parts.push(decay_verdict(&table.cut_hausdorff_column(ai), policy));
    }
    let per_level_kuratowski = all_converge(level_parts);
    let per_level_hausdorff = all_converge(level_h_parts);

    let bounded = all_converge(
        table
            .alphas
            .iter()
            .map(|&a| cumulative_radii(seq, a).map(|r| stable_tail(&r, policy)))
            .collect::<Result<Vec<_>, _>>()?,
    );
    let support_bounded = stable_tail(&cumulative_support_radii(seq), policy);

    Ok((
        ConvergenceVerdicts {
            dp,
            hend,
            gamma,
            per_level_kuratowski,
            per_level_hausdorff,
            bounded,
            support_bounded,
        },
        table,
    ))
}

fn check_implications(v: &ConvergenceVerdicts) -> Result<(), ConvergenceError> {
    use Verdict::Converges;
    let mut violations = Vec::new();
    if v.dp == Converges && v.hend != Converges {
        violations.push("d_p convergence must imply endograph-metric convergence");
    }
    if v.hend == Converges && v.gamma != Converges {
        violations.push("endograph-metric convergence must imply endograph set convergence");
    }
    let both = v.gamma == Converges && v.bounded == Converges;
    if (v.hend == Converges) != both {
        violations.push(
            "endograph-metric convergence must coincide with set convergence plus boundedness",
        );
    }
    if v.gamma == Converges && v.support_bounded == Converges && v.dp != Converges {
        violations.push("set convergence with bounded supports must imply d_p convergence");
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(ConvergenceError::ImplicationViolation {
            details: violations.join("; "),
        })
    }
}

/// Full verdict report with the one-way implications and the
/// convergence/boundedness equivalence asserted. A violation signals an
/// implementation defect, not a mathematical failure, and is returned as an
/// error.
pub fn implication_report(
    seq: &SequencePrefix,
    u: &LevelFuzzySet,
    alpha_grid: &[f64],
    radii: &[f64],
    p: f64,
    policy: &DecayPolicy,
) -> Result<ConvergenceVerdicts, ConvergenceError> {
    let (verdicts, _) = convergence_verdicts(seq, u, alpha_grid, radii, p, policy)?;
    check_implications(&verdicts)?;
    Ok(verdicts)
}

/// On families whose cuts are all connected (under `cfg`) with a nonempty
/// candidate, the set-convergence verdict and the endograph-metric verdict
/// must coincide; returns the common verdict. Reports the offending item
/// and level when a disconnected cut violates the precondition.
pub fn gamma_equals_hend_on_connected(
    seq: &SequencePrefix,
    u: &LevelFuzzySet,
    alpha_grid: &[f64],
    radii: &[f64],
    p: f64,
    policy: &DecayPolicy,
    cfg: &GeometryConfig,
) -> Result<Verdict, ConvergenceError> {
    if u.is_empty_fuzzy() {
        return Err(ConvergenceError::EmptyCandidate);
    }
    for (index, item) in seq.items.iter().enumerate() {
        for (level, cut) in item.levels().iter().zip(item.cuts()) {
            if !is_connected(cut, cfg) {
                return Err(ConvergenceError::DisconnectedCut {
                    index,
                    level: *level,
                });
            }
        }
    }
    let (verdicts, _) = convergence_verdicts(seq, u, alpha_grid, radii, p, policy)?;
    if verdicts.gamma != verdicts.hend {
        return Err(ConvergenceError::EquivalenceMismatch {
            gamma: verdicts.gamma,
            hend: verdicts.hend,
        });
    }
    Ok(verdicts.gamma)
}
