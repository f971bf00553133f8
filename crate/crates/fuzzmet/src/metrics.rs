//! Fuzzy-set metrics on step representations.
//!
//! The endograph of `u` is `end u = {(x, t) in R^m x [0,1] : u(x) >= t}`.
//! For a step set this is the full zero slab `R^m x {0}` together with one
//! vertical segment `{x} x [0, u(x)]` per support point, so the Euclidean
//! distance from a point `(x, t)` to `end v` has the closed form
//!
//! ```text
//! d((x,t), end v) = min( t, min_{y in supp v} sqrt(|x-y|^2 + max(0, t - v(y))^2) )
//! ```
//!
//! The first candidate is the slab, the second the vertical segments. The
//! function is nondecreasing in `t`, so the supremum over `end u` is
//! attained at segment tops and the endograph metric of two step sets is
//! computed exactly from finitely many point evaluations. The slab candidate
//! also caps the metric at 1.
//!
//! The sendograph drops the zero slab and restricts to the support, which
//! removes the cap and makes the metric infinite when exactly one operand is
//! the empty fuzzy set. The `d_p` metrics integrate the per-level Hausdorff
//! distance; for step sets the integrand is piecewise constant on the merged
//! level grid and the integral is a finite sum.

use thiserror::Error;

use crate::fuzzy::{check_same_dim, FuzzyError, LevelFuzzySet};
use crate::geometry::{dist_sq, hausdorff, ExtendedDistance, GeometryError, PointCloud};

#[derive(Debug, Error, PartialEq)]
pub enum MetricError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error("t: {0} outside [0,1]")]
    HeightRange(f64),
    #[error("p: must be at least 1, got {0}")]
    BadExponent(f64),
    #[error("{field}: must be strictly positive")]
    NonPositive { field: &'static str },
}

/// Distance oracle for the endograph of one step fuzzy set.
///
/// The endograph itself is never materialized; queries go through the
/// closed form above using the cached membership value of every support
/// point.
pub struct EndographView<'a> {
    set: &'a LevelFuzzySet,
    support: PointCloud,
    tops: Vec<f64>,
}

impl<'a> EndographView<'a> {
    pub fn new(set: &'a LevelFuzzySet) -> EndographView<'a> {
        EndographView {
            set,
            support: set.support(),
            tops: set.support_memberships(),
        }
    }

    pub fn set(&self) -> &LevelFuzzySet {
        self.set
    }

    /// Exact Euclidean distance from `(x, t)` to the endograph.
    pub fn point_distance(&self, x: &[f64], t: f64) -> Result<f64, MetricError> {
        if x.len() != self.set.dim() {
            return Err(GeometryError::DimensionMismatch {
                left: self.set.dim(),
                right: x.len(),
            }
            .into());
        }
        if !t.is_finite() || !(0.0..=1.0).contains(&t) {
            return Err(MetricError::HeightRange(t));
        }
        // Slab candidate.
        let mut best = t * t;
        for (y, top) in self.support.iter().zip(&self.tops) {
            let overshoot = (t - top).max(0.0);
            let candidate = dist_sq(x, y) + overshoot * overshoot;
            if candidate < best {
                best = candidate;
            }
        }
        Ok(best.sqrt())
    }
}

/// Distance from the point `(x, t)` to the endograph of `v`.
pub fn point_to_endograph(x: &[f64], t: f64, v: &LevelFuzzySet) -> Result<f64, MetricError> {
    EndographView::new(v).point_distance(x, t)
}

fn directed_endograph(u: &LevelFuzzySet, view_v: &EndographView<'_>) -> Result<f64, MetricError> {
    // Supremum over end u is attained at the segment tops (x, u(x)); the
    // zero slab is shared and contributes 0.
    let mut worst = 0.0f64;
    for (x, top) in u.support().iter().zip(u.support_memberships()) {
        let d = view_v.point_distance(x, top)?;
        if d > worst {
            worst = d;
        }
    }
    Ok(worst)
}

/// Endograph metric `H(end u, end v)`. Always finite and at most 1.
pub fn endograph_metric(u: &LevelFuzzySet, v: &LevelFuzzySet) -> Result<f64, MetricError> {
    check_same_dim(u, v)?;
    let view_u = EndographView::new(u);
    let view_v = EndographView::new(v);
    let uv = directed_endograph(u, &view_v)?;
    let vu = directed_endograph(v, &view_u)?;
    Ok(uv.max(vu))
}

fn directed_sendograph(u: &LevelFuzzySet, v: &LevelFuzzySet) -> f64 {
    let v_support = v.support();
    let v_tops = v.support_memberships();
    let mut worst = 0.0f64;
    for (x, u_top) in u.support().iter().zip(u.support_memberships()) {
        let mut best = f64::INFINITY;
        for (y, v_top) in v_support.iter().zip(&v_tops) {
            let overshoot = (u_top - v_top).max(0.0);
            let candidate = dist_sq(x, y) + overshoot * overshoot;
            if candidate < best {
                best = candidate;
            }
        }
        if best > worst {
            worst = best;
        }
    }
    worst.sqrt()
}

/// Sendograph metric: Hausdorff distance between the endographs restricted
/// over the supports, without the zero slab. Infinite when exactly one
/// operand is the empty fuzzy set, zero when both are.
pub fn sendograph_metric(
    u: &LevelFuzzySet,
    v: &LevelFuzzySet,
) -> Result<ExtendedDistance, MetricError> {
    check_same_dim(u, v)?;
    match (u.is_empty_fuzzy(), v.is_empty_fuzzy()) {
        (true, true) => return Ok(ExtendedDistance::ZERO),
        (true, false) | (false, true) => return Ok(ExtendedDistance::INFINITE),
        (false, false) => {}
    }
    let uv = directed_sendograph(u, v);
    let vu = directed_sendograph(v, u);
    Ok(ExtendedDistance::new(uv.max(vu)))
}

/// The `d_p` metric: `( \int_0^1 H([u]_a, [v]_a)^p da )^{1/p}`, evaluated
/// exactly as a finite sum over the merged level grid. Infinite when some
/// positive-length level interval has exactly one empty cut. The measure-zero
/// endpoint `a = 0` is ignored.
pub fn dp_metric(
    u: &LevelFuzzySet,
    v: &LevelFuzzySet,
    p: f64,
) -> Result<ExtendedDistance, MetricError> {
    check_same_dim(u, v)?;
    if !p.is_finite() || p < 1.0 {
        return Err(MetricError::BadExponent(p));
    }
    let mut thresholds: Vec<f64> = u
        .levels()
        .iter()
        .chain(v.levels().iter())
        .copied()
        .chain(std::iter::once(1.0))
        .collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();

    let mut acc = 0.0f64;
    let mut prev = 0.0f64;
    for &t in &thresholds {
        let len = t - prev;
        prev = t;
        if len <= 0.0 {
            continue;
        }
        // Both cut maps are constant on (prev, t]; evaluate at t.
        let cu = u.cut(t)?;
        let cv = v.cut(t)?;
        match (cu.is_empty(), cv.is_empty()) {
            (true, true) => {}
            (true, false) | (false, true) => return Ok(ExtendedDistance::INFINITE),
            (false, false) => {
                let h = hausdorff(&cu, &cv)?.value();
                acc += len * h.powf(p);
            }
        }
    }
    Ok(ExtendedDistance::new(acc.powf(1.0 / p)))
}

/// Crisp fuzzy set whose level-1 cut samples the closed ball of radius `r`
/// about the origin on a lattice of the given spacing. The origin is always
/// a sample point.
pub fn ball_fuzzy(r: f64, dim: usize, grid_spacing: f64) -> Result<LevelFuzzySet, MetricError> {
    if !crate::geometry::is_positive_length(r) {
        return Err(MetricError::NonPositive { field: "r" });
    }
    if !crate::geometry::is_positive_length(grid_spacing) {
        return Err(MetricError::NonPositive {
            field: "grid_spacing",
        });
    }
    let reach = (r / grid_spacing).floor() as i64;
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..dim {
        let mut extended = Vec::new();
        for p in &points {
            for j in -reach..=reach {
                let mut q = p.clone();
                q.push(j as f64 * grid_spacing);
                extended.push(q);
            }
        }
        points = extended;
    }
    points.retain(|p| crate::geometry::norm_sq(p) <= r * r);
    let cloud = PointCloud::from_points(dim, &points)?;
    Ok(LevelFuzzySet::crisp(cloud)?)
}

/// Pointwise maximum of two step fuzzy sets: merged levels, union cuts.
pub fn join(u: &LevelFuzzySet, v: &LevelFuzzySet) -> Result<LevelFuzzySet, MetricError> {
    check_same_dim(u, v)?;
    let mut levels: Vec<f64> = u.levels().iter().chain(v.levels()).copied().collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let mut kept_levels: Vec<f64> = Vec::new();
    let mut kept_cuts: Vec<PointCloud> = Vec::new();
    for &level in levels.iter() {
        let cut = u.cut(level)?.union(&v.cut(level)?)?;
        // A run of equal adjacent cuts collapses to its highest level.
        if let Some(last) = kept_cuts.last() {
            if last.set_eq(&cut) {
                *kept_levels.last_mut().expect("parallel vectors") = level;
                continue;
            }
        }
        kept_levels.push(level);
        kept_cuts.push(cut);
    }
    Ok(LevelFuzzySet::from_level_family(
        u.dim(),
        kept_levels,
        kept_cuts,
    )?)
}

/// Endograph-metric excess of `u` over the radius-`r` ball indicator:
/// `H_end(u ∨ ball, ball)`. Zero exactly when the support of `u` lies inside
/// the sampled ball.
pub fn r_excess(u: &LevelFuzzySet, r: f64, grid_spacing: f64) -> Result<f64, MetricError> {
    let ball = ball_fuzzy(r, u.dim(), grid_spacing)?;
    let joined = join(u, &ball)?;
    endograph_metric(&joined, &ball)
}
