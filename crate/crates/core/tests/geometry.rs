use num_rational::Ratio;
use proptest::prelude::*;
use symtri::geometry::{
    classify_h_feasible, feasible_symmetry_group, h_admissible_pair, h_feasible, is_unimodular,
    lattice_points, normalized_area, properly_intersect, reflection, symmetry_group, FeasibleClass,
    LatticePoint, PointConfiguration, Region, Simplex,
};

type Q = Ratio<i64>;
type QPoint = (Q, Q);

fn q(p: LatticePoint) -> QPoint {
    (Q::from_integer(p.x), Q::from_integer(p.y))
}

fn cross(a: QPoint, b: QPoint, c: QPoint) -> Q {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Clips `subject` against the closed counter-clockwise triangle `clip`.
fn clip(subject: Vec<QPoint>, clip: [QPoint; 3]) -> Vec<QPoint> {
    let mut out = subject;
    for i in 0..3 {
        let (a, b) = (clip[i], clip[(i + 1) % 3]);
        let input = std::mem::take(&mut out);
        for j in 0..input.len() {
            let (p, r) = (input[j], input[(j + 1) % input.len()]);
            let (sp, sr) = (cross(a, b, p), cross(a, b, r));
            let zero = Q::from_integer(0);
            if sp >= zero && sr >= zero {
                out.push(r);
            } else if (sp >= zero) != (sr >= zero) {
                let t = sp / (sp - sr);
                let x = (p.0 + (r.0 - p.0) * t, p.1 + (r.1 - p.1) * t);
                out.push(x);
                if sr >= zero {
                    out.push(r);
                }
            }
        }
        if out.is_empty() {
            break;
        }
    }
    out
}

fn ccw(config: &PointConfiguration, s: Simplex) -> [QPoint; 3] {
    let [a, b, c] = config.simplex_points(s).map(q);
    if cross(a, b, c) > Q::from_integer(0) {
        [a, b, c]
    } else {
        [a, c, b]
    }
}

fn on_segment(p: QPoint, a: QPoint, b: QPoint) -> bool {
    cross(a, b, p) == Q::from_integer(0)
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

/// Reference answer from the exact intersection polygon: proper iff the
/// intersection is empty or is exactly the convex hull of the shared vertices.
fn oracle(config: &PointConfiguration, s: Simplex, r: Simplex) -> bool {
    let inter = clip(ccw(config, s).to_vec(), ccw(config, r));
    let shared: Vec<QPoint> = s
        .0
        .iter()
        .filter(|i| r.contains(**i))
        .map(|&i| q(config.point(i)))
        .collect();
    match shared.len() {
        0 => inter.is_empty(),
        1 => inter.iter().all(|p| *p == shared[0]),
        2 => {
            inter.iter().all(|p| on_segment(*p, shared[0], shared[1]))
                && shared.iter().all(|v| inter.contains(v))
        }
        _ => true,
    }
}

fn p(x: i64, y: i64) -> LatticePoint {
    LatticePoint::new(x, y)
}

fn simplex(config: &PointConfiguration, a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> Simplex {
    config.simplex_at(p(a.0, a.1), p(b.0, b.1), p(c.0, c.1)).unwrap()
}

#[test]
fn proper_intersection_agrees_with_polygon_clipping() {
    for d in 1..=3 {
        let config = lattice_points(Region::full(d));
        let pool = config.nondegenerate_simplices();
        for &s in &pool {
            for &r in &pool {
                if s != r {
                    assert_eq!(properly_intersect(&config, s, r), oracle(&config, s, r), "d={d} {s} {r}");
                }
            }
        }
    }
}

#[test]
fn proper_intersection_agrees_with_clipping_on_unimodular_pairs() {
    let config = lattice_points(Region::full(5));
    let pool = config.unimodular_simplices();
    for &s in &pool {
        for &r in &pool {
            if s < r {
                assert_eq!(properly_intersect(&config, s, r), oracle(&config, s, r), "{s} {r}");
            }
        }
    }
}

#[test]
fn proper_intersection_is_symmetric() {
    for d in 1..=4 {
        let config = lattice_points(Region::full(d));
        let pool = config.nondegenerate_simplices();
        for (i, &s) in pool.iter().enumerate() {
            for &r in &pool[i + 1..] {
                assert_eq!(properly_intersect(&config, s, r), properly_intersect(&config, r, s));
            }
        }
    }
}

#[test]
fn classification_matches_feasibility() {
    for d in 1..=5 {
        let config = lattice_points(Region::full(d));
        let pi = reflection(&config).unwrap();
        for s in config.unimodular_simplices() {
            let class = classify_h_feasible(&config, s);
            assert_ne!(class, FeasibleClass::OutOfLemmaScope);
            assert_eq!(h_feasible(&config, &pi, s), class != FeasibleClass::Infeasible, "d={d} {s}");
        }
    }
}

#[test]
fn non_unimodular_is_out_of_scope() {
    let config = lattice_points(Region::full(3));
    let s = simplex(&config, (0, 0), (2, 0), (0, 2));
    assert_eq!(classify_h_feasible(&config, s), FeasibleClass::OutOfLemmaScope);
}

#[test]
fn point_counts_up_to_fifty() {
    for d in 1..=50u32 {
        let n = lattice_points(Region::full(d)).len() as u32;
        assert_eq!(n, (d + 1) * (d + 2) / 2);
    }
    assert_eq!(lattice_points(Region::full(7)).len(), 36);
    assert_eq!(lattice_points(Region::half(6)).len(), 16);
}

#[test]
fn half_region_hulls() {
    assert_eq!(
        Region::half(3).hull(),
        vec![p(0, 0), p(3, 0), p(2, 1), p(1, 1)]
    );
    assert_eq!(Region::half(4).hull(), vec![p(0, 0), p(4, 0), p(2, 2)]);
}

#[test]
fn reflection_maps_half_onto_upper_part() {
    for d in 1..=9 {
        let full = lattice_points(Region::full(d));
        let pi = reflection(&full).unwrap();
        let mut images: Vec<LatticePoint> = lattice_points(Region::half(d))
            .points()
            .iter()
            .map(|&q| pi.apply_point(q))
            .collect();
        images.sort_by_key(|q| (q.y, q.x));
        let mut upper: Vec<LatticePoint> = full.points().iter().copied().filter(|q| q.y >= q.x).collect();
        upper.sort_by_key(|q| (q.y, q.x));
        assert_eq!(images, upper, "d={d}");
    }
}

#[test]
fn reflection_is_an_involution_fixing_the_axis() {
    let config = lattice_points(Region::full(3));
    let pi = reflection(&config).unwrap();
    assert!(pi.compose(&pi).is_identity());
    for &q in config.points() {
        assert_eq!(pi.apply_point(q) == q, q.x == q.y);
    }
    assert_eq!(pi.apply_point(p(2, 1)), p(1, 2));
    assert!(reflection(&lattice_points(Region::half(3))).is_err());
}

#[test]
fn admissible_pairs() {
    let config = lattice_points(Region::full(4));
    let pi = reflection(&config).unwrap();
    let lower = simplex(&config, (1, 0), (0, 1), (0, 0));
    let upper = simplex(&config, (1, 0), (0, 1), (1, 1));
    assert!(h_admissible_pair(&config, &pi, lower, upper));
    let a = simplex(&config, (1, 0), (2, 0), (2, 1));
    let b = simplex(&config, (1, 0), (2, 1), (1, 1));
    assert!(h_admissible_pair(&config, &pi, a, b));

    // A feasible simplex below the axis whose area overlaps the mirror image
    // of another feasible simplex.
    let found = config
        .unimodular_simplices()
        .into_iter()
        .filter(|&s| h_feasible(&config, &pi, s))
        .flat_map(|s| config.unimodular_simplices().into_iter().map(move |r| (s, r)))
        .find(|&(s, r)| {
            h_feasible(&config, &pi, r)
                && properly_intersect(&config, s, r)
                && !properly_intersect(&config, s, pi.apply_simplex(r))
        });
    let (s, r) = found.expect("an inadmissible pair exists at d = 4");
    assert!(!h_admissible_pair(&config, &pi, s, r));
}

#[test]
fn feasible_group_contains_reflection_and_is_closed() {
    for d in 2..=5 {
        let config = lattice_points(Region::full(d));
        let pi = reflection(&config).unwrap();
        let pool: Vec<Simplex> = config
            .unimodular_simplices()
            .into_iter()
            .filter(|&s| h_feasible(&config, &pi, s))
            .collect();
        let g = feasible_symmetry_group(&symmetry_group(&config), &pool);
        assert!(g.contains_permutation(&(0..config.len() as u32).map(|i| pi.apply_index(i)).collect::<Vec<_>>()));
        assert!(g.is_closed());
        assert_eq!(g.order(), 2, "d={d}");
    }
}

fn simplex_strategy(max_d: u32) -> impl Strategy<Value = (u32, [u32; 3])> {
    (1..=max_d).prop_flat_map(|d| {
        let n = (d + 1) * (d + 2) / 2;
        (Just(d), [0..n, 0..n, 0..n])
    })
}

proptest! {
    #[test]
    fn area_is_invariant_under_symmetries((d, idx) in simplex_strategy(8)) {
        let config = lattice_points(Region::full(d));
        prop_assume!(idx[0] != idx[1] && idx[1] != idx[2] && idx[0] != idx[2]);
        let s = Simplex::new(idx[0], idx[1], idx[2]);
        for g in symmetry_group(&config).elements() {
            prop_assert_eq!(normalized_area(&config, g.apply_simplex(s)), normalized_area(&config, s));
        }
    }

    #[test]
    fn intersection_symmetric_and_matches_oracle((d, a) in simplex_strategy(7), b in proptest::array::uniform3(0u32..36)) {
        let config = lattice_points(Region::full(d));
        let n = config.len() as u32;
        let b = b.map(|i| i % n);
        prop_assume!(a[0] != a[1] && a[1] != a[2] && a[0] != a[2]);
        prop_assume!(b[0] != b[1] && b[1] != b[2] && b[0] != b[2]);
        let s = Simplex::new(a[0], a[1], a[2]);
        let r = Simplex::new(b[0], b[1], b[2]);
        prop_assume!(s != r && normalized_area(&config, s) > 0 && normalized_area(&config, r) > 0);
        let forward = properly_intersect(&config, s, r);
        prop_assert_eq!(forward, properly_intersect(&config, r, s));
        prop_assert_eq!(forward, oracle(&config, s, r));
    }

    #[test]
    fn unimodular_means_area_one((d, idx) in simplex_strategy(8)) {
        let config = lattice_points(Region::full(d));
        prop_assume!(idx[0] != idx[1] && idx[1] != idx[2] && idx[0] != idx[2]);
        let s = Simplex::new(idx[0], idx[1], idx[2]);
        prop_assert_eq!(is_unimodular(&config, s), normalized_area(&config, s) == 1);
    }
}
