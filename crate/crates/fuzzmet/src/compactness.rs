//! Boundedness profiles, greedy nets and constructive limit extraction.
//!
//! Total boundedness of a family under the endograph metric is equivalent
//! to per-level boundedness of the union of its cuts. Finite families
//! witness that criterion through two computable artifacts: the
//! [`family_profile`] (bounding radius of the union of cuts, per level) and
//! the greedy [`EpsilonNet`], whose size stays bounded as a bounded-profile
//! family grows and which degenerates to one center per member on
//! escaping families.
//!
//! [`truncate_below`] zeroes membership below a level, mapping any set to
//! one with support equal to that level's cut; the endograph distance to
//! the original is capped by the truncation level (the dropped segments sit
//! within that height of the zero slab). [`diagonal_limit_candidate`]
//! rebuilds a candidate limit for a numerically Cauchy prefix from
//! stabilized per-level cuts, intersecting downward to restore nesting.

use serde::Serialize;
use thiserror::Error;

use crate::convergence::SequencePrefix;
use crate::fuzzy::{FuzzyError, LevelFuzzySet};
use crate::geometry::{bounding_radius, hausdorff, ExtendedDistance, GeometryError, PointCloud};
use crate::metrics::{endograph_metric, MetricError};
use rayon::prelude::*;

#[derive(Debug, Error, PartialEq)]
pub enum CompactnessError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("family: must be nonempty")]
    EmptyFamily,
    #[error("epsilon: must be strictly positive")]
    NonPositiveEpsilon,
    #[error("alpha: {0} outside (0,1]")]
    AlphaRange(f64),
    #[error("no stabilization at levels {levels:?}: prefix is not Cauchy at this resolution")]
    NoStabilization { levels: Vec<f64> },
}

/// A finite family of fuzzy sets of one dimension, with an optional note
/// about the closed-form bound it witnesses.
#[derive(Clone, Debug)]
pub struct FuzzyFamily {
    members: Vec<LevelFuzzySet>,
    pub note: Option<String>,
}

impl FuzzyFamily {
    pub fn new(members: Vec<LevelFuzzySet>) -> Result<FuzzyFamily, CompactnessError> {
        if members.is_empty() {
            return Err(CompactnessError::EmptyFamily);
        }
        let dim = members[0].dim();
        for m in &members[1..] {
            if m.dim() != dim {
                return Err(GeometryError::DimensionMismatch {
                    left: dim,
                    right: m.dim(),
                }
                .into());
            }
        }
        Ok(FuzzyFamily {
            members,
            note: None,
        })
    }

    pub fn members(&self) -> &[LevelFuzzySet] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Bounding radius of the union of all members' cuts, per grid level: the
/// finite-family witness of the total-boundedness criterion.
pub fn family_profile(
    family: &FuzzyFamily,
    alpha_grid: &[f64],
) -> Result<Vec<ExtendedDistance>, CompactnessError> {
    let mut out = Vec::with_capacity(alpha_grid.len());
    for &alpha in alpha_grid {
        let mut worst = ExtendedDistance::ZERO;
        for member in &family.members {
            worst = worst.max(bounding_radius(&member.cut(alpha)?));
        }
        out.push(worst);
    }
    Ok(out)
}

/// An internal epsilon-net: member indices serving as centers, plus the
/// assignment of every member to a center within `epsilon` under the
/// endograph metric.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsilonNet {
    pub epsilon: f64,
    pub centers: Vec<usize>,
    pub assignment: Vec<usize>,
}

/// Pairwise endograph-metric matrix of the family, row-parallel but
/// order-deterministic.
pub fn pairwise_hend_matrix(family: &FuzzyFamily) -> Result<Vec<Vec<f64>>, CompactnessError> {
    let members = &family.members;
    let rows: Result<Vec<Vec<f64>>, MetricError> = members
        .par_iter()
        .map(|a| members.iter().map(|b| endograph_metric(a, b)).collect())
        .collect();
    Ok(rows?)
}

/// Greedy farthest-point net construction: start from the first member,
/// repeatedly promote the member farthest from the current centers until
/// everything is covered within `epsilon`. Deterministic given member
/// order; ties go to the lowest index.
pub fn greedy_epsilon_net(
    family: &FuzzyFamily,
    epsilon: f64,
) -> Result<EpsilonNet, CompactnessError> {
    if !crate::geometry::is_positive_length(epsilon) {
        return Err(CompactnessError::NonPositiveEpsilon);
    }
    let dist = pairwise_hend_matrix(family)?;
    let n = family.len();
    let mut centers = vec![0usize];
    let mut assignment = vec![0usize; n];
    let mut best = dist[0].clone();
    loop {
        let (farthest, &worst) = best
            .iter()
            .enumerate()
            .max_by(|(i, a), (j, b)| a.total_cmp(b).then(j.cmp(i)))
            .expect("nonempty family");
        if worst <= epsilon {
            break;
        }
        centers.push(farthest);
        for i in 0..n {
            if dist[farthest][i] < best[i] {
                best[i] = dist[farthest][i];
                assignment[i] = farthest;
            }
        }
    }
    Ok(EpsilonNet {
        epsilon,
        centers,
        assignment,
    })
}

/// Zeroes membership below `alpha`: levels under the threshold are dropped
/// and the support becomes the cut at `alpha`. Returns the empty fuzzy set
/// when `alpha` exceeds the top level.
pub fn truncate_below(u: &LevelFuzzySet, alpha: f64) -> Result<LevelFuzzySet, CompactnessError> {
    if !alpha.is_finite() || !(0.0..=1.0).contains(&alpha) || alpha == 0.0 {
        return Err(CompactnessError::AlphaRange(alpha));
    }
    let keep = u.levels().partition_point(|&l| l < alpha);
    let levels = u.levels()[keep..].to_vec();
    let cuts = u.cuts()[keep..].to_vec();
    Ok(LevelFuzzySet::from_level_family(u.dim(), levels, cuts)?)
}

/// Options for [`diagonal_limit_candidate`].
///
/// `stabilization_threshold` is the Hausdorff distance under which two
/// consecutive per-level cuts count as stabilized (twice the sample spacing
/// by default). `truncation_radius` spatially truncates every cut before
/// the stabilization scan; the default (infinite) performs no truncation,
/// which matches families whose cuts stay bounded. A finite radius lets the
/// construction recover the bounded core of families with escaping mass.
#[derive(Clone, Copy, Debug)]
pub struct DiagonalOptions {
    pub stabilization_threshold: f64,
    pub truncation_radius: f64,
}

impl Default for DiagonalOptions {
    fn default() -> DiagonalOptions {
        DiagonalOptions {
            stabilization_threshold: 2.0 / 16.0,
            truncation_radius: f64::INFINITY,
        }
    }
}

/// Constructs a candidate limit for a numerically Cauchy prefix.
///
/// For each grid level, the cut of the latest element whose (truncated) cut
/// sits within the stabilization threshold of its predecessor is chosen;
/// nesting is then enforced by intersecting upward through ascending
/// levels, and levels whose running intersection is empty are dropped.
/// Levels where no two consecutive cuts ever stabilize are reported
/// together as an error.
pub fn diagonal_limit_candidate(
    seq: &SequencePrefix,
    level_grid: &[f64],
    opts: &DiagonalOptions,
) -> Result<LevelFuzzySet, CompactnessError> {
    let mut grid: Vec<f64> = level_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();

    let mut failures = Vec::new();
    let mut chosen: Vec<(f64, PointCloud)> = Vec::new();
    for &q in &grid {
        let cuts: Vec<PointCloud> = seq
            .items()
            .iter()
            .map(|item| {
                item.cut(q).map(|c| {
                    if opts.truncation_radius.is_finite() {
                        c.restrict_to_ball(opts.truncation_radius)
                    } else {
                        c
                    }
                })
            })
            .collect::<Result<_, _>>()?;
        let mut pick = None;
        for t in (1..cuts.len()).rev() {
            let gap = hausdorff(&cuts[t], &cuts[t - 1])?;
            if gap.is_finite() && gap.value() <= opts.stabilization_threshold {
                pick = Some(t);
                break;
            }
        }
        match pick {
            Some(t) => chosen.push((q, cuts[t].clone())),
            None => failures.push(q),
        }
    }
    if !failures.is_empty() {
        return Err(CompactnessError::NoStabilization { levels: failures });
    }

    let mut levels = Vec::new();
    let mut cuts: Vec<PointCloud> = Vec::new();
    let mut running: Option<PointCloud> = None;
    for (q, cut) in chosen {
        let intersected = match &running {
            None => cut,
            Some(prev) => prev.intersect(&cut)?,
        };
        if intersected.is_empty() {
            break;
        }
        levels.push(q);
        cuts.push(intersected.clone());
        running = Some(intersected);
    }
    Ok(LevelFuzzySet::from_level_family(seq.dim(), levels, cuts)?)
}
