//! Point-cloud primitives.
//!
//! A [`PointCloud`] is a finite sample of a compact subset of R^m; the empty
//! cloud is a legal value and stands for the empty set. Distances follow the
//! usual Hausdorff construction extended by the empty-set convention:
//!
//! - `H*(A, B) = sup_{x in A} inf_{y in B} |x - y|`, with `H*(∅, B) = 0` and
//!   `H*(A, ∅) = +∞` for nonempty `A`;
//! - `H(A, B) = max(H*(A, B), H*(B, A))`, with `H(∅, ∅) = 0`.
//!
//! Connectivity, convexity and star-shapedness are decidable on finite
//! samples only up to a tolerance; [`GeometryConfig`] carries the membership
//! tolerance, the adjacency radius and the segment sampling resolution used
//! by those predicates. The predicates answer questions about the compact
//! set the cloud samples, so tolerances should track the sample spacing
//! (twice the spacing is the intended default).

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("dim: dimension mismatch ({left} vs {right})")]
    DimensionMismatch { left: usize, right: usize },
    #[error("dim: must be at least 1")]
    ZeroDimension,
    #[error("points: point {point} has {got} coordinates, expected {expected}")]
    WrongArity {
        point: usize,
        got: usize,
        expected: usize,
    },
    #[error("points: coordinate {coordinate} of point {point} is not finite")]
    NonFiniteCoordinate { point: usize, coordinate: usize },
    #[error("config: {field} must be strictly positive")]
    NonPositiveConfig { field: &'static str },
    #[error("config: segment_samples must be at least 2")]
    TooFewSegmentSamples,
}

/// A nonnegative distance that may be the distinguished value `+∞`.
///
/// Carries the empty-set convention of the extended Hausdorff metric:
/// `+∞` compares greater than every finite value. `NaN` is never stored,
/// so the ordering is total.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExtendedDistance(f64);

impl ExtendedDistance {
    pub const ZERO: ExtendedDistance = ExtendedDistance(0.0);
    pub const INFINITE: ExtendedDistance = ExtendedDistance(f64::INFINITY);

    /// Wraps a nonnegative value; `f64::INFINITY` is allowed.
    pub fn new(value: f64) -> ExtendedDistance {
        assert!(value >= 0.0, "distance must be nonnegative, got {value}");
        // Normalize -0.0 so equality and ordering agree.
        ExtendedDistance(if value == 0.0 { 0.0 } else { value })
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn as_finite(self) -> Option<f64> {
        self.is_finite().then_some(self.0)
    }

    pub fn max(self, other: ExtendedDistance) -> ExtendedDistance {
        if self.0 >= other.0 {
            self
        } else {
            other
        }
    }
}

impl Eq for ExtendedDistance {}

impl Ord for ExtendedDistance {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for ExtendedDistance {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExtendedDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Tolerances for the sampled geometry predicates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GeometryConfig {
    /// Point-to-set inclusion tolerance (length units).
    pub tol_membership: f64,
    /// Adjacency radius for connectivity graphs (length units).
    pub conn_radius: f64,
    /// Number of sample points per segment in convexity and visibility tests.
    pub segment_samples: usize,
}

impl GeometryConfig {
    pub fn new(
        tol_membership: f64,
        conn_radius: f64,
        segment_samples: usize,
    ) -> Result<GeometryConfig, GeometryError> {
        if !is_positive_length(tol_membership) {
            return Err(GeometryError::NonPositiveConfig {
                field: "tol_membership",
            });
        }
        if !is_positive_length(conn_radius) {
            return Err(GeometryError::NonPositiveConfig {
                field: "conn_radius",
            });
        }
        if segment_samples < 2 {
            return Err(GeometryError::TooFewSegmentSamples);
        }
        Ok(GeometryConfig {
            tol_membership,
            conn_radius,
            segment_samples,
        })
    }

    /// Tolerances matched to a sample of the given spacing: membership and
    /// adjacency at twice the spacing, 64 samples per segment.
    pub fn for_spacing(spacing: f64) -> GeometryConfig {
        GeometryConfig::new(2.0 * spacing, 2.0 * spacing, 64).expect("positive spacing")
    }
}

impl Default for GeometryConfig {
    /// Matches the default sample spacing of 1/16 used by the generators.
    fn default() -> GeometryConfig {
        GeometryConfig::for_spacing(1.0 / 16.0)
    }
}

/// A finite sample of a compact subset of R^m. May be empty.
///
/// Coordinates are stored flat, `dim` per point, in insertion order.
/// Set-level operations (containment, union, intersection) compare points
/// exactly, coordinate by coordinate, so clouds meant to be related by
/// containment must share the actual floating-point values.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    pub fn empty(dim: usize) -> PointCloud {
        assert!(dim >= 1, "dimension must be at least 1");
        PointCloud {
            dim,
            coords: Vec::new(),
        }
    }

    /// Builds a cloud from per-point coordinate slices, validating arity and
    /// finiteness.
    pub fn from_points<P: AsRef<[f64]>>(
        dim: usize,
        points: &[P],
    ) -> Result<PointCloud, GeometryError> {
        if dim == 0 {
            return Err(GeometryError::ZeroDimension);
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for (i, p) in points.iter().enumerate() {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(GeometryError::WrongArity {
                    point: i,
                    got: p.len(),
                    expected: dim,
                });
            }
            for (j, &c) in p.iter().enumerate() {
                if !c.is_finite() {
                    return Err(GeometryError::NonFiniteCoordinate {
                        point: i,
                        coordinate: j,
                    });
                }
                coords.push(c);
            }
        }
        Ok(PointCloud { dim, coords })
    }

    /// One-dimensional convenience constructor.
    pub fn from_scalars(values: &[f64]) -> Result<PointCloud, GeometryError> {
        let pts: Vec<[f64; 1]> = values.iter().map(|&v| [v]).collect();
        PointCloud::from_points(1, &pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    fn key(point: &[f64]) -> Vec<u64> {
        // Normalize -0.0 so it equals +0.0 under bit comparison.
        point
            .iter()
            .map(|&c| {
                if c == 0.0 {
                    0.0f64.to_bits()
                } else {
                    c.to_bits()
                }
            })
            .collect()
    }

    fn key_set(&self) -> HashSet<Vec<u64>> {
        self.iter().map(PointCloud::key).collect()
    }

    /// Exact membership: the point appears in the cloud with identical
    /// coordinates.
    pub fn contains_point(&self, point: &[f64]) -> bool {
        let k = PointCloud::key(point);
        self.iter().any(|p| PointCloud::key(p) == k)
    }

    /// Exact set containment: every point of `self` appears in `other`.
    pub fn is_subset_of(&self, other: &PointCloud) -> bool {
        if self.dim != other.dim {
            return false;
        }
        let keys = other.key_set();
        self.iter().all(|p| keys.contains(&PointCloud::key(p)))
    }

    /// Exact set equality, ignoring point order and duplicates.
    pub fn set_eq(&self, other: &PointCloud) -> bool {
        self.dim == other.dim && self.key_set() == other.key_set()
    }

    /// Number of distinct points.
    pub fn distinct_len(&self) -> usize {
        self.key_set().len()
    }

    /// Set union; keeps `self`'s points first, then the new ones of `other`.
    pub fn union(&self, other: &PointCloud) -> Result<PointCloud, GeometryError> {
        check_dims(self, other)?;
        let mut seen = self.key_set();
        let mut coords = self.coords.clone();
        for p in other.iter() {
            if seen.insert(PointCloud::key(p)) {
                coords.extend_from_slice(p);
            }
        }
        Ok(PointCloud {
            dim: self.dim,
            coords,
        })
    }

    /// Set intersection, in `self`'s point order.
    pub fn intersect(&self, other: &PointCloud) -> Result<PointCloud, GeometryError> {
        check_dims(self, other)?;
        let keys = other.key_set();
        let mut coords = Vec::new();
        let mut seen = HashSet::new();
        for p in self.iter() {
            let k = PointCloud::key(p);
            if keys.contains(&k) && seen.insert(k) {
                coords.extend_from_slice(p);
            }
        }
        Ok(PointCloud {
            dim: self.dim,
            coords,
        })
    }

    /// The subcloud inside the closed origin-centered ball of the given
    /// radius.
    pub fn restrict_to_ball(&self, radius: f64) -> PointCloud {
        let mut coords = Vec::new();
        for p in self.iter() {
            if norm_sq(p) <= radius * radius {
                coords.extend_from_slice(p);
            }
        }
        PointCloud {
            dim: self.dim,
            coords,
        }
    }

    /// Pointwise translation by `shift` (must have matching arity).
    pub fn translate(&self, shift: &[f64]) -> Result<PointCloud, GeometryError> {
        if shift.len() != self.dim {
            return Err(GeometryError::DimensionMismatch {
                left: self.dim,
                right: shift.len(),
            });
        }
        let mut coords = Vec::with_capacity(self.coords.len());
        for p in self.iter() {
            for (c, s) in p.iter().zip(shift) {
                coords.push(c + s);
            }
        }
        Ok(PointCloud {
            dim: self.dim,
            coords,
        })
    }
}

fn check_dims(a: &PointCloud, b: &PointCloud) -> Result<(), GeometryError> {
    if a.dim != b.dim {
        return Err(GeometryError::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        });
    }
    Ok(())
}

/// Finite and strictly positive: the validity test for every length-like
/// parameter (tolerances, radii, spacings).
pub(crate) fn is_positive_length(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

pub(crate) fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = x - y;
            d * d
        })
        .sum()
}

pub(crate) fn norm_sq(a: &[f64]) -> f64 {
    a.iter().map(|x| x * x).sum()
}

/// Squared distance from a point to the cloud; `+∞` for the empty cloud.
pub(crate) fn nearest_sq(x: &[f64], cloud: &PointCloud) -> f64 {
    let mut best = f64::INFINITY;
    for p in cloud.iter() {
        let d = dist_sq(x, p);
        if d < best {
            best = d;
        }
    }
    best
}

/// Euclidean distance from a point to the cloud, `+∞` if the cloud is empty.
pub fn point_to_cloud(x: &[f64], cloud: &PointCloud) -> ExtendedDistance {
    ExtendedDistance::new(nearest_sq(x, cloud).sqrt())
}

/// Nearest-neighbor index over a cloud, sorted by the first coordinate.
///
/// Queries scan outward from the insertion position and stop once the first
/// coordinate alone rules out any improvement, which keeps the result exactly
/// equal to the brute-force minimum.
pub struct CloudIndex<'a> {
    cloud: &'a PointCloud,
    order: Vec<u32>,
    first: Vec<f64>,
}

impl<'a> CloudIndex<'a> {
    pub fn new(cloud: &'a PointCloud) -> CloudIndex<'a> {
        let mut order: Vec<u32> = (0..cloud.len() as u32).collect();
        order.sort_by(|&i, &j| cloud.point(i as usize)[0].total_cmp(&cloud.point(j as usize)[0]));
        let first = order.iter().map(|&i| cloud.point(i as usize)[0]).collect();
        CloudIndex {
            cloud,
            order,
            first,
        }
    }

    pub fn nearest_sq(&self, x: &[f64]) -> f64 {
        if self.cloud.is_empty() {
            return f64::INFINITY;
        }
        let x0 = x[0];
        let start = self.first.partition_point(|&k| k < x0);
        let mut best = f64::INFINITY;
        for i in start..self.order.len() {
            let dx = self.first[i] - x0;
            if dx * dx >= best {
                break;
            }
            let d = dist_sq(x, self.cloud.point(self.order[i] as usize));
            if d < best {
                best = d;
            }
        }
        for i in (0..start).rev() {
            let dx = x0 - self.first[i];
            if dx * dx >= best {
                break;
            }
            let d = dist_sq(x, self.cloud.point(self.order[i] as usize));
            if d < best {
                best = d;
            }
        }
        best
    }
}

/// Reference implementation of the directed Hausdorff distance, quadratic
/// scan. The accelerated [`directed_hausdorff`] is validated against it.
pub fn directed_hausdorff_brute(
    a: &PointCloud,
    b: &PointCloud,
) -> Result<ExtendedDistance, GeometryError> {
    check_dims(a, b)?;
    if a.is_empty() {
        return Ok(ExtendedDistance::ZERO);
    }
    if b.is_empty() {
        return Ok(ExtendedDistance::INFINITE);
    }
    let mut worst = 0.0f64;
    for x in a.iter() {
        let d = nearest_sq(x, b);
        if d > worst {
            worst = d;
        }
    }
    Ok(ExtendedDistance::new(worst.sqrt()))
}

// Below this many point pairs the quadratic scan wins.
const BRUTE_FORCE_PAIR_LIMIT: usize = 4096;

/// Directed Hausdorff distance `H*(a, b) = sup_{x in a} d(x, b)`.
///
/// Returns 0 when `a` is empty and `+∞` when `a` is nonempty but `b` is.
/// Large inputs go through the sorted first-coordinate index; the value is
/// identical to the brute-force scan.
pub fn directed_hausdorff(
    a: &PointCloud,
    b: &PointCloud,
) -> Result<ExtendedDistance, GeometryError> {
    check_dims(a, b)?;
    if a.is_empty() {
        return Ok(ExtendedDistance::ZERO);
    }
    if b.is_empty() {
        return Ok(ExtendedDistance::INFINITE);
    }
    if a.len() * b.len() <= BRUTE_FORCE_PAIR_LIMIT {
        return directed_hausdorff_brute(a, b);
    }
    let index = CloudIndex::new(b);
    let mut worst = 0.0f64;
    for x in a.iter() {
        let d = index.nearest_sq(x);
        if d > worst {
            worst = d;
        }
    }
    Ok(ExtendedDistance::new(worst.sqrt()))
}

/// Symmetric Hausdorff distance with the empty-set extension: 0 when both
/// clouds are empty, `+∞` when exactly one is.
pub fn hausdorff(a: &PointCloud, b: &PointCloud) -> Result<ExtendedDistance, GeometryError> {
    let ab = directed_hausdorff(a, b)?;
    let ba = directed_hausdorff(b, a)?;
    Ok(ab.max(ba))
}

/// Largest norm over the cloud; 0 for the empty cloud.
pub fn bounding_radius(a: &PointCloud) -> ExtendedDistance {
    let mut worst = 0.0f64;
    for p in a.iter() {
        let n = norm_sq(p);
        if n > worst {
            worst = n;
        }
    }
    ExtendedDistance::new(worst.sqrt())
}

/// True when the graph on the cloud's points with edges at distance at most
/// `cfg.conn_radius` is connected. Empty and singleton clouds count as
/// connected.
pub fn is_connected(a: &PointCloud, cfg: &GeometryConfig) -> bool {
    let n = a.len();
    if n <= 1 {
        return true;
    }
    let r_sq = cfg.conn_radius * cfg.conn_radius;
    let mut visited = vec![false; n];
    let mut stack = vec![0usize];
    visited[0] = true;
    let mut reached = 1;
    while let Some(i) = stack.pop() {
        for (j, seen) in visited.iter_mut().enumerate() {
            if !*seen && dist_sq(a.point(i), a.point(j)) <= r_sq {
                *seen = true;
                reached += 1;
                stack.push(j);
            }
        }
    }
    reached == n
}

fn segment_within(a: &PointCloud, from: &[f64], to: &[f64], cfg: &GeometryConfig) -> bool {
    let tol_sq = cfg.tol_membership * cfg.tol_membership;
    let steps = cfg.segment_samples - 1;
    let mut probe = vec![0.0f64; a.dim()];
    for k in 0..=steps {
        let lambda = k as f64 / steps as f64;
        for (c, (f, t)) in probe.iter_mut().zip(from.iter().zip(to)) {
            *c = f + lambda * (t - f);
        }
        if nearest_sq(&probe, a) > tol_sq {
            return false;
        }
    }
    true
}

/// True when the cloud is a tolerance-sample of a convex set: every sampled
/// point of every segment between cloud points lies within
/// `cfg.tol_membership` of the cloud. Empty and singleton clouds are
/// vacuously convex.
pub fn is_convex_sample(a: &PointCloud, cfg: &GeometryConfig) -> bool {
    let n = a.len();
    if n <= 1 {
        return true;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !segment_within(a, a.point(i), a.point(j), cfg) {
                return false;
            }
        }
    }
    true
}

/// True when every sampled segment from `x` to a cloud point stays within
/// tolerance of the cloud. Returns false (not an error) when `x` itself is
/// farther than the tolerance from the cloud.
pub fn is_star_shaped_about(
    a: &PointCloud,
    x: &[f64],
    cfg: &GeometryConfig,
) -> Result<bool, GeometryError> {
    if x.len() != a.dim() {
        return Err(GeometryError::DimensionMismatch {
            left: a.dim(),
            right: x.len(),
        });
    }
    let tol_sq = cfg.tol_membership * cfg.tol_membership;
    if nearest_sq(x, a) > tol_sq {
        return Ok(false);
    }
    for i in 0..a.len() {
        if !segment_within(a, x, a.point(i), cfg) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The subcloud of points about which the cloud is star-shaped (sampled
/// kernel). Candidates are restricted to the cloud's own points; refine by
/// densifying the sample.
pub fn kernel(a: &PointCloud, cfg: &GeometryConfig) -> PointCloud {
    let mut coords = Vec::new();
    for i in 0..a.len() {
        let x = a.point(i);
        if is_star_shaped_about(a, x, cfg).expect("matching dims") {
            coords.extend_from_slice(x);
        }
    }
    PointCloud {
        dim: a.dim(),
        coords,
    }
}
