//! Step fuzzy sets given by finitely many levels with nested cuts.
//!
//! A [`LevelFuzzySet`] stores strictly increasing levels `a_1 < ... < a_k`
//! in `(0, 1]` together with nested nonempty cuts `C_1 ⊇ ... ⊇ C_k`. The
//! membership function is the step function `u(x) = max{a_i : x in C_i}`
//! (0 when no cut contains `x`), which is upper semi-continuous by
//! construction. `k = 0` is allowed and represents the everywhere-zero
//! fuzzy set.
//!
//! Cut access follows the usual conventions: `cut(u, a)` is the smallest
//! stored cut whose level is at least `a` (the support for `a = 0`, empty
//! above the top level), and `strong_cut(u, a)` uses strict inequality.
//! Because every set here is finite, closures are identities and the set of
//! levels where the cut map jumps — the platform points — is finite and
//! computable exactly.

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{
    hausdorff, is_connected, is_convex_sample, kernel, norm_sq, ExtendedDistance, GeometryConfig,
    GeometryError, PointCloud,
};

#[derive(Debug, Error, PartialEq)]
pub enum FuzzyError {
    #[error("levels: must be strictly increasing within (0,1], found {value} at index {index}")]
    BadLevel { index: usize, value: f64 },
    #[error("cuts: expected {levels} cuts to match the levels, found {cuts}")]
    CountMismatch { levels: usize, cuts: usize },
    #[error("cuts: cut at level index {index} is empty")]
    EmptyCut { index: usize },
    #[error("cuts: cut at level index {index} has dimension {got}, expected {expected}")]
    CutDimension {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("cuts: cut at level index {index} is not contained in the cut below it")]
    NotNested { index: usize },
    #[error("alpha: {value} outside {range}")]
    AlphaRange { value: f64, range: &'static str },
    #[error("direction: must be a unit vector")]
    NotUnit,
    #[error("radius: must be strictly positive")]
    NonPositiveRadius,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// A step fuzzy set on R^m with finitely many levels and nested cuts.
#[derive(Clone, Debug)]
pub struct LevelFuzzySet {
    dim: usize,
    levels: Vec<f64>,
    cuts: Vec<PointCloud>,
}

impl LevelFuzzySet {
    /// The everywhere-zero fuzzy set on R^dim.
    pub fn empty(dim: usize) -> LevelFuzzySet {
        assert!(dim >= 1, "dimension must be at least 1");
        LevelFuzzySet {
            dim,
            levels: Vec::new(),
            cuts: Vec::new(),
        }
    }

    /// The characteristic function of a nonempty cloud (membership 1 on it).
    pub fn crisp(cloud: PointCloud) -> Result<LevelFuzzySet, FuzzyError> {
        LevelFuzzySet::from_level_family(cloud.dim(), vec![1.0], vec![cloud])
    }

    /// Builds the unique step fuzzy set with `[u]_{a_i} = C_i`.
    ///
    /// Levels must be strictly increasing within `(0, 1]`; cuts must be
    /// nonempty, of matching dimension, and nested (`C_i ⊇ C_{i+1}`, exact
    /// finite-set containment). Reading the cuts back at the given levels
    /// reproduces the inputs exactly.
    pub fn from_level_family(
        dim: usize,
        levels: Vec<f64>,
        cuts: Vec<PointCloud>,
    ) -> Result<LevelFuzzySet, FuzzyError> {
        if dim == 0 {
            return Err(GeometryError::ZeroDimension.into());
        }
        if levels.len() != cuts.len() {
            return Err(FuzzyError::CountMismatch {
                levels: levels.len(),
                cuts: cuts.len(),
            });
        }
        let mut prev = 0.0f64;
        for (i, &a) in levels.iter().enumerate() {
            if !a.is_finite() || a <= prev || a > 1.0 {
                return Err(FuzzyError::BadLevel { index: i, value: a });
            }
            prev = a;
        }
        for (i, cut) in cuts.iter().enumerate() {
            if cut.is_empty() {
                return Err(FuzzyError::EmptyCut { index: i });
            }
            if cut.dim() != dim {
                return Err(FuzzyError::CutDimension {
                    index: i,
                    got: cut.dim(),
                    expected: dim,
                });
            }
            if i > 0 && !cut.is_subset_of(&cuts[i - 1]) {
                return Err(FuzzyError::NotNested { index: i });
            }
        }
        Ok(LevelFuzzySet { dim, levels, cuts })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn cuts(&self) -> &[PointCloud] {
        &self.cuts
    }

    /// True for the everywhere-zero fuzzy set.
    pub fn is_empty_fuzzy(&self) -> bool {
        self.levels.is_empty()
    }

    /// The largest level with a nonempty cut; `None` for the empty fuzzy set.
    pub fn top_level(&self) -> Option<f64> {
        self.levels.last().copied()
    }

    /// The support `[u]_0` (a copy of the bottom cut; empty for the empty
    /// fuzzy set).
    pub fn support(&self) -> PointCloud {
        self.cuts
            .first()
            .cloned()
            .unwrap_or_else(|| PointCloud::empty(self.dim))
    }

    /// Membership value at a point.
    pub fn membership(&self, x: &[f64]) -> Result<f64, FuzzyError> {
        if x.len() != self.dim {
            return Err(GeometryError::DimensionMismatch {
                left: self.dim,
                right: x.len(),
            }
            .into());
        }
        for (level, cut) in self.levels.iter().zip(&self.cuts).rev() {
            if cut.contains_point(x) {
                return Ok(*level);
            }
        }
        Ok(0.0)
    }

    /// The cut `[u]_a`: the smallest stored cut with level >= `a`, the
    /// support at `a = 0`, empty above the top level.
    pub fn cut(&self, alpha: f64) -> Result<PointCloud, FuzzyError> {
        if !alpha.is_finite() || !(0.0..=1.0).contains(&alpha) {
            return Err(FuzzyError::AlphaRange {
                value: alpha,
                range: "[0,1]",
            });
        }
        if alpha == 0.0 {
            return Ok(self.support());
        }
        let idx = self.levels.partition_point(|&l| l < alpha);
        Ok(match self.cuts.get(idx) {
            Some(cut) => cut.clone(),
            None => PointCloud::empty(self.dim),
        })
    }

    /// The strong cut `{u > a}`.
    pub fn strong_cut(&self, alpha: f64) -> Result<PointCloud, FuzzyError> {
        if !alpha.is_finite() || !(0.0..1.0).contains(&alpha) {
            return Err(FuzzyError::AlphaRange {
                value: alpha,
                range: "[0,1)",
            });
        }
        let idx = self.levels.partition_point(|&l| l <= alpha);
        Ok(match self.cuts.get(idx) {
            Some(cut) => cut.clone(),
            None => PointCloud::empty(self.dim),
        })
    }

    /// The levels where the cut map jumps: interior levels whose next cut is
    /// strictly smaller, plus the top level when it is below 1. For step
    /// sets this is exactly the set of discontinuity levels of
    /// `a -> [u]_a` under the Hausdorff metric, and it is always finite.
    pub fn platform_points(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for i in 0..self.levels.len() {
            let level = self.levels[i];
            if level >= 1.0 {
                continue;
            }
            match self.cuts.get(i + 1) {
                Some(next) => {
                    if next.distinct_len() < self.cuts[i].distinct_len() {
                        out.push(level);
                    }
                }
                // Top level below 1: the strong cut above it is empty.
                None => out.push(level),
            }
        }
        out
    }

    /// Hausdorff distances `H([u]_b, [u]_a)` for the given `b` values
    /// approaching `a` from below. For a step set these vanish as soon as
    /// `b` passes the largest level below `a`.
    pub fn cut_map_left_residual(
        &self,
        alpha: f64,
        betas: &[f64],
    ) -> Result<Vec<ExtendedDistance>, FuzzyError> {
        if !alpha.is_finite() || alpha <= 0.0 || alpha >= 1.0 {
            return Err(FuzzyError::AlphaRange {
                value: alpha,
                range: "(0,1)",
            });
        }
        let target = self.cut(alpha)?;
        let mut out = Vec::with_capacity(betas.len());
        for &beta in betas {
            if !beta.is_finite() || beta <= 0.0 || beta >= alpha {
                return Err(FuzzyError::AlphaRange {
                    value: beta,
                    range: "(0, alpha)",
                });
            }
            out.push(hausdorff(&self.cut(beta)?, &target)?);
        }
        Ok(out)
    }

    /// Membership value of each support point, in support order.
    pub(crate) fn support_memberships(&self) -> Vec<f64> {
        let support = match self.cuts.first() {
            Some(c) => c,
            None => return Vec::new(),
        };
        let mut value = vec![0.0f64; support.len()];
        // Sweep cuts upward; points in higher cuts overwrite their level.
        for (level, cut) in self.levels.iter().zip(&self.cuts) {
            for p in cut.iter() {
                for (i, q) in support.iter().enumerate() {
                    if crate::geometry::dist_sq(p, q) == 0.0 {
                        value[i] = *level;
                    }
                }
            }
        }
        value
    }

    /// Canonical (level, cut) list with runs of equal adjacent cuts merged
    /// into their highest level.
    fn canonical_pairs(&self) -> Vec<(f64, &PointCloud)> {
        let mut out: Vec<(f64, &PointCloud)> = Vec::new();
        for (level, cut) in self.levels.iter().zip(&self.cuts) {
            if let Some(last) = out.last_mut() {
                if last.1.set_eq(cut) {
                    last.0 = *level;
                    continue;
                }
            }
            out.push((*level, cut));
        }
        out
    }
}

/// Semantic equality: equal membership functions, i.e. equal canonical
/// level/cut families.
impl PartialEq for LevelFuzzySet {
    fn eq(&self, other: &Self) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let a = self.canonical_pairs();
        let b = other.canonical_pairs();
        a.len() == b.len()
            && a.iter()
                .zip(&b)
                .all(|((la, ca), (lb, cb))| la == lb && ca.set_eq(cb))
    }
}

/// Classification flags and derived class labels for a step fuzzy set.
///
/// `usc`, `uscg` and `uscb` are always true for finite representations;
/// they are kept so reports stay aligned with the class taxonomy. Labels
/// are derived hierarchically so the inclusion chain
/// `E ⊆ S ⊆ S_tilde ⊆ F_USCGCON` holds by construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassReport {
    pub empty: bool,
    pub usc: bool,
    pub uscg: bool,
    pub uscb: bool,
    pub normal: bool,
    pub all_cuts_connected: bool,
    pub all_cuts_convex: bool,
    pub all_cuts_star_shaped: bool,
    pub shared_star_center_exists: bool,
    pub labels: Vec<String>,
}

/// Evaluates the sampled geometry predicates on every cut and derives the
/// class labels. The shared-center flag tests whether the kernels of all
/// cuts have a common point, which characterizes the star-shaped-number
/// classes.
pub fn classify(u: &LevelFuzzySet, cfg: &GeometryConfig) -> ClassReport {
    let empty = u.is_empty_fuzzy();
    let normal = u.top_level() == Some(1.0);

    let mut all_connected = true;
    let mut all_convex = true;
    let mut all_star = true;
    let mut shared_center: Option<PointCloud> = None;
    for cut in u.cuts() {
        all_connected &= is_connected(cut, cfg);
        all_convex &= is_convex_sample(cut, cfg);
        let ker = kernel(cut, cfg);
        all_star &= !ker.is_empty();
        shared_center = Some(match shared_center {
            None => ker,
            Some(prev) => prev.intersect(&ker).expect("uniform dimension"),
        });
    }
    let shared = match &shared_center {
        Some(common) => !common.is_empty(),
        None => false,
    };

    let is_e = normal && all_convex;
    let is_s = is_e || (normal && shared);
    let is_s_tilde = is_s || (normal && all_star);

    let mut labels = vec![
        "F_USC".to_string(),
        "F_USCG".to_string(),
        "F_USCB".to_string(),
    ];
    if all_connected || is_s_tilde {
        labels.push("F_USCGCON".to_string());
    }
    if is_e {
        labels.push("E".to_string());
        labels.push("E_nc".to_string());
    }
    if is_s {
        labels.push("S".to_string());
        labels.push("S_nc".to_string());
    }
    if is_s_tilde {
        labels.push("S_tilde".to_string());
        labels.push("S_tilde_nc".to_string());
    }

    ClassReport {
        empty,
        usc: true,
        uscg: true,
        uscb: true,
        normal,
        all_cuts_connected: all_connected,
        all_cuts_convex: all_convex,
        all_cuts_star_shaped: all_star,
        shared_star_center_exists: shared,
        labels,
    }
}

/// Restriction of the support function to a closed ball, traced over the
/// level grid: for each stored level, the largest inner product
/// `<e, x - t>` over the cut intersected with the ball around `t`, or
/// `None` where that intersection is empty. Values are nonincreasing in
/// the level.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportFunctionTrace {
    pub direction: Vec<f64>,
    pub center: Vec<f64>,
    pub radius: f64,
    /// `(level, value)` pairs, level-ascending; `None` encodes `-∞`.
    pub samples: Vec<(f64, Option<f64>)>,
}

impl SupportFunctionTrace {
    /// Levels where the trace jumps down (including a drop to `-∞`) and the
    /// top level when it sits below 1 with a finite value. For axis-aligned
    /// probes on step sets these are platform levels of the underlying set.
    pub fn jump_levels(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (i, (level, value)) in self.samples.iter().enumerate() {
            let Some(v) = value else { continue };
            match self.samples.get(i + 1) {
                Some((_, next)) => {
                    if next.is_none_or(|n| n < *v) {
                        out.push(*level);
                    }
                }
                None => {
                    if *level < 1.0 {
                        out.push(*level);
                    }
                }
            }
        }
        out
    }
}

/// Traces the ball-restricted support function of `u` in direction `e`
/// (a unit vector) over the stored levels.
pub fn support_function_trace(
    u: &LevelFuzzySet,
    center: &[f64],
    radius: f64,
    direction: &[f64],
) -> Result<SupportFunctionTrace, FuzzyError> {
    if center.len() != u.dim() || direction.len() != u.dim() {
        return Err(GeometryError::DimensionMismatch {
            left: u.dim(),
            right: center.len().max(direction.len()),
        }
        .into());
    }
    if !crate::geometry::is_positive_length(radius) {
        return Err(FuzzyError::NonPositiveRadius);
    }
    if (norm_sq(direction).sqrt() - 1.0).abs() > 1e-9 {
        return Err(FuzzyError::NotUnit);
    }
    let r_sq = radius * radius;
    let mut samples = Vec::with_capacity(u.levels().len());
    for (level, cut) in u.levels().iter().zip(u.cuts()) {
        let mut best: Option<f64> = None;
        for p in cut.iter() {
            let offset: Vec<f64> = p.iter().zip(center).map(|(a, b)| a - b).collect();
            if norm_sq(&offset) > r_sq {
                continue;
            }
            let score: f64 = direction.iter().zip(&offset).map(|(e, d)| e * d).sum();
            best = Some(match best {
                Some(b) if b >= score => b,
                _ => score,
            });
        }
        samples.push((*level, best));
    }
    Ok(SupportFunctionTrace {
        direction: direction.to_vec(),
        center: center.to_vec(),
        radius,
        samples,
    })
}

pub(crate) fn check_same_dim(u: &LevelFuzzySet, v: &LevelFuzzySet) -> Result<(), GeometryError> {
    if u.dim() != v.dim() {
        return Err(GeometryError::DimensionMismatch {
            left: u.dim(),
            right: v.dim(),
        });
    }
    Ok(())
}
