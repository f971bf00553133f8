//! Property tests for the metric axioms and the structural invariants of
//! step fuzzy sets.

use proptest::prelude::*;

use fuzzmet::compactness::truncate_below;
use fuzzmet::convergence::{inner_residual, truncated_outer_residual};
use fuzzmet::fuzzy::support_function_trace;
use fuzzmet::geometry::{
    bounding_radius, directed_hausdorff, directed_hausdorff_brute, hausdorff, kernel,
    GeometryConfig, PointCloud,
};
use fuzzmet::metrics::{dp_metric, endograph_metric, join, point_to_endograph, sendograph_metric};
use fuzzmet::LevelFuzzySet;

fn arb_cloud(dim: usize) -> impl Strategy<Value = PointCloud> {
    prop::collection::vec(prop::collection::vec(-8.0f64..8.0, dim), 1..12)
        .prop_map(move |pts| PointCloud::from_points(dim, &pts).unwrap())
}

/// Random step set built top-down by exact union, so nesting always holds.
/// `normal` forces the top level to 1 (keeps `d_p` finite).
fn arb_step_set(dim: usize, normal: bool) -> impl Strategy<Value = LevelFuzzySet> {
    let levels = prop::collection::btree_set(1u32..=19, 1..=3usize);
    let batches = prop::collection::vec(
        prop::collection::vec(prop::collection::vec(-8.0f64..8.0, dim), 1..5),
        3,
    );
    (levels, batches).prop_map(move |(slots, batches)| {
        let mut levels: Vec<f64> = slots.iter().map(|&s| s as f64 / 20.0).collect();
        if normal {
            *levels.last_mut().unwrap() = 1.0;
        }
        let k = levels.len();
        // Top cut first; each lower cut extends the one above it.
        let mut cuts_rev: Vec<PointCloud> = Vec::with_capacity(k);
        for batch in batches.iter().take(k) {
            let fresh = PointCloud::from_points(dim, batch).unwrap();
            let cut = match cuts_rev.last() {
                None => fresh,
                Some(upper) => upper.union(&fresh).unwrap(),
            };
            cuts_rev.push(cut);
        }
        cuts_rev.reverse();
        LevelFuzzySet::from_level_family(dim, levels, cuts_rev).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn hausdorff_axioms(a in arb_cloud(2), b in arb_cloud(2), c in arb_cloud(2)) {
        prop_assert_eq!(hausdorff(&a, &a).unwrap().value(), 0.0);
        prop_assert_eq!(hausdorff(&a, &b).unwrap(), hausdorff(&b, &a).unwrap());
        let ab = hausdorff(&a, &b).unwrap().value();
        let bc = hausdorff(&b, &c).unwrap().value();
        let ac = hausdorff(&a, &c).unwrap().value();
        prop_assert!(ac <= ab + bc + 1e-12);
    }

    #[test]
    fn directed_hausdorff_zero_iff_subset(a in arb_cloud(1), b in arb_cloud(1)) {
        let d = directed_hausdorff(&a, &b).unwrap();
        prop_assert_eq!(d.value() == 0.0, a.is_subset_of(&b));
    }

    #[test]
    fn accelerated_distance_matches_brute_force(a in arb_cloud(2), b in arb_cloud(2)) {
        prop_assert_eq!(
            directed_hausdorff(&a, &b).unwrap(),
            directed_hausdorff_brute(&a, &b).unwrap()
        );
    }

    #[test]
    fn cut_monotonicity(u in arb_step_set(1, false), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(u.cut(hi).unwrap().is_subset_of(&u.cut(lo).unwrap()));
        // Left continuity: just below a stored level the cut is unchanged,
        // so the cut at the level equals the intersection of all lower cuts.
        let mut prev = 0.0f64;
        for &level in u.levels() {
            let just_below = prev + (level - prev) * 0.75;
            if just_below > prev {
                prop_assert!(u.cut(just_below).unwrap().set_eq(&u.cut(level).unwrap()));
            }
            let mut running = u.cut(0.0).unwrap();
            for gamma in [level * 0.25, level * 0.5, just_below] {
                if gamma > 0.0 {
                    running = running.intersect(&u.cut(gamma).unwrap()).unwrap();
                }
            }
            prop_assert!(u.cut(level).unwrap().set_eq(&running));
            prev = level;
        }
    }

    #[test]
    fn round_trip_reproduces_level_family(u in arb_step_set(2, false)) {
        let rebuilt = LevelFuzzySet::from_level_family(
            u.dim(),
            u.levels().to_vec(),
            u.levels().iter().map(|&l| u.cut(l).unwrap()).collect(),
        ).unwrap();
        prop_assert_eq!(&rebuilt, &u);
        for &level in u.levels() {
            prop_assert!(rebuilt.cut(level).unwrap().set_eq(&u.cut(level).unwrap()));
        }
    }

    #[test]
    fn platform_points_are_exactly_cut_map_jumps(u in arb_step_set(1, false)) {
        let platform = u.platform_points();
        for &level in u.levels() {
            if level >= 1.0 { continue; }
            let above = u.cut((level + 0.025).min(1.0)).unwrap();
            let at = u.cut(level).unwrap();
            let jumps = !above.set_eq(&at);
            prop_assert_eq!(platform.contains(&level), jumps);
        }
        // Off the stored levels the cut map is locally constant.
        for &level in &platform {
            prop_assert!(u.levels().contains(&level));
        }
    }

    #[test]
    fn endograph_metric_axioms_and_cap(
        u in arb_step_set(1, true),
        v in arb_step_set(1, true),
        w in arb_step_set(1, true),
    ) {
        let uv = endograph_metric(&u, &v).unwrap();
        prop_assert!((0.0..=1.0).contains(&uv));
        prop_assert_eq!(uv, endograph_metric(&v, &u).unwrap());
        prop_assert_eq!(endograph_metric(&u, &u).unwrap(), 0.0);
        let vw = endograph_metric(&v, &w).unwrap();
        let uw = endograph_metric(&u, &w).unwrap();
        prop_assert!(uw <= uv + vw + 1e-12);
    }

    #[test]
    fn dp_metric_axioms_on_normal_sets(
        u in arb_step_set(1, true),
        v in arb_step_set(1, true),
        w in arb_step_set(1, true),
    ) {
        let p = 2.0;
        let uv = dp_metric(&u, &v, p).unwrap();
        prop_assert!(uv.is_finite());
        prop_assert_eq!(uv, dp_metric(&v, &u, p).unwrap());
        prop_assert_eq!(dp_metric(&u, &u, p).unwrap().value(), 0.0);
        let vw = dp_metric(&v, &w, p).unwrap().value();
        let uw = dp_metric(&u, &w, p).unwrap().value();
        prop_assert!(uw <= uv.value() + vw + 1e-9);
    }

    #[test]
    fn crisp_endograph_equals_capped_hausdorff(a in arb_cloud(2), b in arb_cloud(2)) {
        let d = LevelFuzzySet::crisp(a.clone()).unwrap();
        let g = LevelFuzzySet::crisp(b.clone()).unwrap();
        let hend = endograph_metric(&d, &g).unwrap();
        let h = hausdorff(&a, &b).unwrap().value();
        prop_assert!((hend - h.min(1.0)).abs() <= 1e-12);
        // Sendograph on crisp pairs is the uncapped Hausdorff distance.
        let send = sendograph_metric(&d, &g).unwrap().value();
        prop_assert!((send - h).abs() <= 1e-12);
    }

    #[test]
    fn point_to_endograph_is_monotone_in_height(
        v in arb_step_set(1, false),
        x in -8.0f64..8.0,
        t in 0.0f64..1.0,
    ) {
        let lower = point_to_endograph(&[x], t * 0.5, &v).unwrap();
        let upper = point_to_endograph(&[x], t, &v).unwrap();
        prop_assert!(lower <= upper + 1e-15);
    }

    #[test]
    fn join_is_idempotent_commutative_and_neutral(
        u in arb_step_set(1, false),
        v in arb_step_set(1, false),
    ) {
        prop_assert_eq!(&join(&u, &u).unwrap(), &u);
        prop_assert_eq!(join(&u, &v).unwrap(), join(&v, &u).unwrap());
        let empty = LevelFuzzySet::empty(1);
        prop_assert_eq!(&join(&u, &empty).unwrap(), &u);
        // Membership of the join is the pointwise maximum.
        let joined = join(&u, &v).unwrap();
        for p in u.support().iter().chain(v.support().iter()) {
            let expected = u.membership(p).unwrap().max(v.membership(p).unwrap());
            prop_assert_eq!(joined.membership(p).unwrap(), expected);
        }
    }

    #[test]
    fn truncation_distance_capped_by_level(u in arb_step_set(1, false), alpha in 0.01f64..1.0) {
        let t = truncate_below(&u, alpha).unwrap();
        prop_assert!(endograph_metric(&t, &u).unwrap() <= alpha);
    }

    #[test]
    fn support_trace_is_nonincreasing(u in arb_step_set(2, false), r in 0.5f64..12.0) {
        let trace = support_function_trace(&u, &[0.0, 0.0], r, &[1.0, 0.0]).unwrap();
        let mut prev = f64::INFINITY;
        for (_, value) in &trace.samples {
            match value {
                Some(v) => {
                    prop_assert!(*v <= prev + 1e-12);
                    prev = *v;
                }
                // Once the intersection is empty it stays empty upward.
                None => prev = f64::NEG_INFINITY,
            }
        }
    }

    #[test]
    fn kernel_is_a_subcloud(a in arb_cloud(2)) {
        let ker = kernel(&a, &GeometryConfig::default());
        prop_assert!(ker.is_subset_of(&a));
    }

    #[test]
    fn residual_monotonicity_under_enlargement(
        c in arb_cloud(1),
        cn in arb_cloud(1),
        extra in arb_cloud(1),
    ) {
        // Enlarging the second argument of the inner residual can only help.
        let bigger = cn.union(&extra).unwrap();
        prop_assert!(inner_residual(&c, &bigger).unwrap() <= inner_residual(&c, &cn).unwrap());
        // Enlarging the target of the outer residual can only help.
        let bigger_target = c.union(&extra).unwrap();
        prop_assert!(
            truncated_outer_residual(&cn, &bigger_target, 16.0).unwrap()
                <= truncated_outer_residual(&cn, &c, 16.0).unwrap()
        );
    }

    #[test]
    fn bounding_radius_dominates_members(a in arb_cloud(3)) {
        let r = bounding_radius(&a).value();
        for p in a.iter() {
            prop_assert!(p.iter().map(|x| x * x).sum::<f64>().sqrt() <= r + 1e-12);
        }
    }
}

#[test]
fn accelerated_path_engages_on_large_clouds() {
    // 80 x 80 points exceeds the brute-force pair limit, forcing the sorted
    // index path; values must match the reference scan exactly.
    let a: Vec<[f64; 2]> = (0..80)
        .map(|i| [(i % 13) as f64 * 0.37 - 2.0, (i % 7) as f64 * 0.61])
        .collect();
    let b: Vec<[f64; 2]> = (0..80)
        .map(|i| [(i % 11) as f64 * 0.43 - 1.0, (i % 5) as f64 * 0.29 + 0.1])
        .collect();
    let a = PointCloud::from_points(2, &a).unwrap();
    let b = PointCloud::from_points(2, &b).unwrap();
    assert_eq!(
        directed_hausdorff(&a, &b).unwrap(),
        directed_hausdorff_brute(&a, &b).unwrap()
    );
    assert_eq!(
        directed_hausdorff(&b, &a).unwrap(),
        directed_hausdorff_brute(&b, &a).unwrap()
    );
}
