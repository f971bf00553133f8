//! Seeded closed-form sequence and family generators.
//!
//! Every generator is a pure function of `(spec, index)`. Cuts are built
//! top-down — the top cut is sampled first and lower cuts extend it by
//! exact set union — so nesting holds by construction, with no reliance on
//! floating-point coincidences. Interval and box samples live on a global
//! lattice of the spec's grid spacing with endpoints forced exactly, which
//! keeps the closed-form distances of the escaping (`gse`) and plateau
//! (`dphe`) families exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::convergence::{ConvergenceError, SequencePrefix};
use crate::fuzzy::{FuzzyError, LevelFuzzySet};
use crate::geometry::{GeometryError, PointCloud};

#[derive(Debug, Error, PartialEq)]
pub enum FamilyError {
    #[error("spec: {field} invalid")]
    InvalidSpec { field: &'static str },
    #[error("kind {kind:?} requires dim {expected}")]
    WrongDimension { kind: FamilyKind, expected: usize },
    #[error("index {n} outside range {lo}..={hi}")]
    IndexOutOfRange { n: usize, lo: usize, hi: usize },
    #[error("kind {0:?} has no closed-form limit")]
    NoClosedFormLimit(FamilyKind),
    #[error(transparent)]
    Fuzzy(#[from] FuzzyError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Convergence(#[from] ConvergenceError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// Crisp pair `{0, n}` (dimension 1): set-converges to the crisp
    /// singleton while the endograph metric stays at 1.
    Gse,
    /// Two-level plateau on `[0, 1/n]` over `[0, n]` (dimension 1): the
    /// endograph metric decays like `1/n` while every `d_p` stays large.
    Dphe,
    /// A seeded nested box sample translated by `1/n` along the first axis.
    Translate,
    /// A seeded nested box sample united with a copy shifted by a decaying
    /// offset; shrinks onto the base.
    Shrink,
    /// Independent seeded nested box samples with top level 1.
    RandomE,
    /// Independent seeded nested L-shaped samples with top level 1:
    /// star-shaped about the corner block, not convex.
    RandomS,
    /// Independent seeded nested scatter clouds, top level possibly below 1.
    RandomUscg,
    /// Crisp interval sample `[n, n+1]` on the first axis: connected cuts
    /// escaping to infinity.
    EscapingConnected,
}

fn default_spacing() -> f64 {
    1.0 / 16.0
}

/// Parameters of one generated family. Serializes to JSON; the CLI accepts
/// it inline or from a file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub dim: usize,
    pub n_min: usize,
    pub n_max: usize,
    #[serde(default = "default_spacing")]
    pub grid_spacing: f64,
    #[serde(default)]
    pub seed: u64,
    /// Spatial scale of the seeded generators (default 1).
    #[serde(default)]
    pub extent: Option<f64>,
    /// Number of levels of the seeded generators (default 3, capped at 6).
    #[serde(default)]
    pub level_count: Option<usize>,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, dim: usize, n_min: usize, n_max: usize) -> FamilySpec {
        FamilySpec {
            kind,
            dim,
            n_min,
            n_max,
            grid_spacing: default_spacing(),
            seed: 0,
            extent: None,
            level_count: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> FamilySpec {
        self.seed = seed;
        self
    }

    fn extent(&self) -> f64 {
        self.extent.unwrap_or(1.0)
    }

    fn level_count(&self) -> usize {
        self.level_count.unwrap_or(3).clamp(1, 6)
    }

    pub fn validate(&self) -> Result<(), FamilyError> {
        if self.dim == 0 {
            return Err(FamilyError::InvalidSpec { field: "dim" });
        }
        if self.n_min == 0 || self.n_min > self.n_max {
            return Err(FamilyError::InvalidSpec { field: "n_min" });
        }
        if !crate::geometry::is_positive_length(self.grid_spacing) {
            return Err(FamilyError::InvalidSpec {
                field: "grid_spacing",
            });
        }
        if !crate::geometry::is_positive_length(self.extent()) {
            return Err(FamilyError::InvalidSpec { field: "extent" });
        }
        if matches!(self.kind, FamilyKind::Gse | FamilyKind::Dphe) && self.dim != 1 {
            return Err(FamilyError::WrongDimension {
                kind: self.kind,
                expected: 1,
            });
        }
        Ok(())
    }
}

/// Evenly spaced sample of `[a, b]` with step at most `max_step` and both
/// endpoints exact.
fn linspace_exact(a: f64, b: f64, max_step: f64) -> Vec<f64> {
    let m = (((b - a) / max_step).ceil() as usize).max(1);
    (0..=m)
        .map(|j| {
            if j == m {
                b
            } else {
                a + j as f64 * (b - a) / m as f64
            }
        })
        .collect()
}

fn scalars(values: Vec<f64>) -> Result<PointCloud, FamilyError> {
    Ok(PointCloud::from_scalars(&values)?)
}

/// Embeds scalar samples as points on the first axis of R^dim.
fn axis_cloud(dim: usize, values: &[f64]) -> Result<PointCloud, FamilyError> {
    let pts: Vec<Vec<f64>> = values
        .iter()
        .map(|&v| {
            let mut p = vec![0.0; dim];
            p[0] = v;
            p
        })
        .collect();
    Ok(PointCloud::from_points(dim, &pts)?)
}

/// Lattice sample of the box with the given integer cell bounds per axis.
fn box_cloud(dim: usize, lo: &[i64], hi: &[i64], h: f64) -> Result<PointCloud, FamilyError> {
    let mut pts: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in 0..dim {
        let mut extended = Vec::new();
        for p in &pts {
            for j in lo[axis]..=hi[axis] {
                let mut q = p.clone();
                q.push(j as f64 * h);
                extended.push(q);
            }
        }
        pts = extended;
    }
    Ok(PointCloud::from_points(dim, &pts)?)
}

/// `count` distinct interior levels drawn from the 1/20 grid, ascending,
/// optionally topped with 1.
fn draw_levels(rng: &mut impl Rng, count: usize, normal: bool) -> Vec<f64> {
    let interior = if normal { count - 1 } else { count };
    let mut slots: Vec<u32> = Vec::new();
    while slots.len() < interior {
        let s = rng.gen_range(1..=19u32);
        if !slots.contains(&s) {
            slots.push(s);
        }
    }
    slots.sort_unstable();
    let mut levels: Vec<f64> = slots.iter().map(|&s| s as f64 / 20.0).collect();
    if normal {
        levels.push(1.0);
    }
    levels
}

/// Seeded nested box sample (top-down construction, exact nesting).
fn nested_boxes(
    rng: &mut impl Rng,
    dim: usize,
    h: f64,
    extent: f64,
    level_count: usize,
) -> Result<LevelFuzzySet, FamilyError> {
    let cells = ((extent / h).round() as i64).max(2);
    let half = match dim {
        1 => rng.gen_range(8..=12i64),
        2 => rng.gen_range(2..=3i64),
        _ => rng.gen_range(1..=2i64),
    };
    let growth = if dim == 1 { 2 } else { 1 };
    let mut lo: Vec<i64> = Vec::new();
    let mut hi: Vec<i64> = Vec::new();
    for _ in 0..dim {
        let c = rng.gen_range(-cells..=cells);
        lo.push(c - half);
        hi.push(c + half);
    }
    let levels = draw_levels(rng, level_count, true);
    // Top cut first, then widen downward.
    let mut bounds = vec![(lo.clone(), hi.clone())];
    for _ in 1..levels.len() {
        let (prev_lo, prev_hi) = bounds.last().unwrap().clone();
        let lo: Vec<i64> = prev_lo
            .iter()
            .map(|&l| l - rng.gen_range(1..=growth))
            .collect();
        let hi: Vec<i64> = prev_hi
            .iter()
            .map(|&u| u + rng.gen_range(1..=growth))
            .collect();
        bounds.push((lo, hi));
    }
    bounds.reverse(); // widest (lowest level) first
    let cuts = bounds
        .iter()
        .map(|(lo, hi)| box_cloud(dim, lo, hi, h))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LevelFuzzySet::from_level_family(dim, levels, cuts)?)
}

/// Seeded nested L-shape (dim 2) or L-prism (dim 3) lattice sample;
/// dimension 1 falls back to an interval. Star-shaped about the corner
/// block at every level, not convex once the arms outgrow the width.
fn nested_l_shapes(
    rng: &mut impl Rng,
    dim: usize,
    h: f64,
    level_count: usize,
) -> Result<LevelFuzzySet, FamilyError> {
    let levels = draw_levels(rng, level_count, true);
    if dim == 1 {
        let top = rng.gen_range(6..=10i64);
        let mut arms: Vec<i64> = vec![top];
        for _ in 1..levels.len() {
            arms.push(arms.last().unwrap() + rng.gen_range(1..=3));
        }
        arms.reverse();
        let cuts = arms
            .iter()
            .map(|&a| scalars((0..=a).map(|j| j as f64 * h).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(LevelFuzzySet::from_level_family(dim, levels, cuts)?);
    }

    let width = 2i64;
    let top_x = rng.gen_range(5..=8i64);
    let top_y = rng.gen_range(5..=8i64);
    let mut arms: Vec<(i64, i64)> = vec![(top_x, top_y)];
    for _ in 1..levels.len() {
        let (x, y) = *arms.last().unwrap();
        arms.push((x + rng.gen_range(1..=2), y + rng.gen_range(1..=2)));
    }
    arms.reverse();

    let depth = if dim >= 3 { width } else { 0 };
    let mut cuts = Vec::with_capacity(arms.len());
    for &(ax, ay) in &arms {
        let mut pts: Vec<Vec<f64>> = Vec::new();
        for i in 0..=ax.max(width) {
            for j in 0..=ay.max(width) {
                let in_x_arm = i <= ax && j <= width;
                let in_y_arm = i <= width && j <= ay;
                if !(in_x_arm || in_y_arm) {
                    continue;
                }
                for k in 0..=depth {
                    let mut p = vec![i as f64 * h, j as f64 * h];
                    if dim >= 3 {
                        p.push(k as f64 * h);
                    }
                    p.resize(dim, 0.0);
                    pts.push(p);
                }
            }
        }
        cuts.push(PointCloud::from_points(dim, &pts)?);
    }
    Ok(LevelFuzzySet::from_level_family(dim, levels, cuts)?)
}

/// Seeded nested scatter clouds; top level drawn from the 1/20 grid and
/// possibly below 1.
fn nested_scatter(
    rng: &mut impl Rng,
    dim: usize,
    extent: f64,
    level_count: usize,
) -> Result<LevelFuzzySet, FamilyError> {
    let mut levels: Vec<u32> = Vec::new();
    while levels.len() < level_count {
        let s = rng.gen_range(1..=20u32);
        if !levels.contains(&s) {
            levels.push(s);
        }
    }
    levels.sort_unstable();
    let levels: Vec<f64> = levels.iter().map(|&s| s as f64 / 20.0).collect();

    let random_point = |rng: &mut dyn rand::RngCore| -> Vec<f64> {
        (0..dim)
            .map(|_| rng.gen_range(-extent..=extent))
            .collect::<Vec<f64>>()
    };
    let top_len = rng.gen_range(1..=4usize);
    let mut cloud_points: Vec<Vec<f64>> = (0..top_len).map(|_| random_point(rng)).collect();
    let mut cuts_rev = vec![PointCloud::from_points(dim, &cloud_points)?];
    for _ in 1..levels.len() {
        for _ in 0..rng.gen_range(2..=6usize) {
            cloud_points.push(random_point(rng));
        }
        cuts_rev.push(PointCloud::from_points(dim, &cloud_points)?);
    }
    cuts_rev.reverse();
    Ok(LevelFuzzySet::from_level_family(dim, levels, cuts_rev)?)
}

fn member_rng(spec: &FamilySpec, n: usize) -> ChaCha8Rng {
    let stream = (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    ChaCha8Rng::seed_from_u64(spec.seed ^ stream)
}

fn base_rng(spec: &FamilySpec) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(spec.seed)
}

/// The shared base element of the translate/shrink kinds.
fn base_element(spec: &FamilySpec) -> Result<LevelFuzzySet, FamilyError> {
    let mut rng = base_rng(spec);
    nested_boxes(
        &mut rng,
        spec.dim,
        spec.grid_spacing,
        spec.extent(),
        spec.level_count(),
    )
}

fn shift_vector(dim: usize, magnitude: f64) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    v[0] = magnitude;
    v
}

/// Smallest half-width of the base's top cut along the first axis, used to
/// keep shrink-family unions overlapping (hence connected) at every index.
fn shrink_scale(base: &LevelFuzzySet) -> f64 {
    let top = base.cuts().last().expect("nonempty base");
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for p in top.iter() {
        min = min.min(p[0]);
        max = max.max(p[0]);
    }
    ((max - min) / 2.0).max(f64::MIN_POSITIVE)
}

/// Generates the `n`-th member of the family. Deterministic in
/// `(spec, n)`.
pub fn generate(spec: &FamilySpec, n: usize) -> Result<LevelFuzzySet, FamilyError> {
    spec.validate()?;
    if n < spec.n_min || n > spec.n_max {
        return Err(FamilyError::IndexOutOfRange {
            n,
            lo: spec.n_min,
            hi: spec.n_max,
        });
    }
    let h = spec.grid_spacing;
    match spec.kind {
        FamilyKind::Gse => Ok(LevelFuzzySet::crisp(scalars(vec![0.0, n as f64])?)?),
        FamilyKind::Dphe => {
            let top = scalars(linspace_exact(0.0, 1.0 / n as f64, h))?;
            if n == 1 {
                let cut = top.union(&scalars(linspace_exact(0.0, 1.0, h))?)?;
                return Ok(LevelFuzzySet::crisp(cut)?);
            }
            let bottom = top.union(&scalars(linspace_exact(0.0, n as f64, h))?)?;
            Ok(LevelFuzzySet::from_level_family(
                1,
                vec![1.0 / n as f64, 1.0],
                vec![bottom, top],
            )?)
        }
        FamilyKind::Translate => {
            let base = base_element(spec)?;
            let shift = shift_vector(spec.dim, 1.0 / n as f64);
            let cuts = base
                .cuts()
                .iter()
                .map(|c| c.translate(&shift))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(LevelFuzzySet::from_level_family(
                spec.dim,
                base.levels().to_vec(),
                cuts,
            )?)
        }
        FamilyKind::Shrink => {
            let base = base_element(spec)?;
            let shift = shift_vector(spec.dim, shrink_scale(&base) / n as f64);
            let cuts = base
                .cuts()
                .iter()
                .map(|c| c.union(&c.translate(&shift)?))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(LevelFuzzySet::from_level_family(
                spec.dim,
                base.levels().to_vec(),
                cuts,
            )?)
        }
        FamilyKind::RandomE => {
            let mut rng = member_rng(spec, n);
            nested_boxes(&mut rng, spec.dim, h, spec.extent(), spec.level_count())
        }
        FamilyKind::RandomS => {
            let mut rng = member_rng(spec, n);
            nested_l_shapes(&mut rng, spec.dim, h, spec.level_count())
        }
        FamilyKind::RandomUscg => {
            let mut rng = member_rng(spec, n);
            nested_scatter(&mut rng, spec.dim, spec.extent(), spec.level_count())
        }
        FamilyKind::EscapingConnected => {
            let sample = linspace_exact(n as f64, n as f64 + 1.0, h);
            Ok(LevelFuzzySet::crisp(axis_cloud(spec.dim, &sample)?)?)
        }
    }
}

/// The closed-form limit of the family, when the kind has one.
pub fn limit_of(spec: &FamilySpec) -> Result<LevelFuzzySet, FamilyError> {
    spec.validate()?;
    match spec.kind {
        FamilyKind::Gse | FamilyKind::Dphe => Ok(LevelFuzzySet::crisp(scalars(vec![0.0])?)?),
        FamilyKind::Translate | FamilyKind::Shrink => base_element(spec),
        FamilyKind::EscapingConnected => Ok(LevelFuzzySet::empty(spec.dim)),
        FamilyKind::RandomE | FamilyKind::RandomS | FamilyKind::RandomUscg => {
            Err(FamilyError::NoClosedFormLimit(spec.kind))
        }
    }
}

/// The whole prefix `n_min..=n_max` as a labeled sequence.
pub fn prefix(spec: &FamilySpec) -> Result<SequencePrefix, FamilyError> {
    spec.validate()?;
    let mut items = Vec::with_capacity(spec.n_max - spec.n_min + 1);
    let mut labels = Vec::with_capacity(items.capacity());
    for n in spec.n_min..=spec.n_max {
        items.push(generate(spec, n)?);
        labels.push(n as f64);
    }
    Ok(SequencePrefix::with_labels(items, labels)?)
}
