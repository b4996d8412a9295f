use mcrs::mcrs::{group_from_matrix, markoff_minimum, md_form, MCRSGroup};
use mcrs::numeric::{parse_real, Alg};
use mcrs::sails2d::{
    geometric_cf, k_sail, level_in_cone, sail, sail_membership_level, sail_period, Cone2, Point, SailEnd, SailError,
};
use proptest::prelude::*;

fn golden() -> Alg {
    parse_real("(1+sqrt 5)/2").unwrap()
}

/// The cone between the eigenrays `(1, −1/θ)` and `(1, θ)`.
fn fibonacci_cone() -> Cone2 {
    let t = golden();
    Cone2::new([Alg::one(), Alg::one() - &t], [Alg::one(), t]).unwrap()
}

fn fibonacci() -> Vec<Vec<i64>> {
    vec![vec![1, 1], vec![1, 0]]
}

fn cross(o: Point, a: Point, b: Point) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Near side of the hull of all cone points in the box, by gift wrapping
/// from the point closest to the first ray.
fn brute_sail(cone: &Cone2, bound: i64) -> Vec<Point> {
    let pts = cone.points_in_box(bound);
    let r1 = cone.ray1();
    let d1 = |p: &Point| (&r1[0] * Alg::from_int(p.1) - &r1[1] * Alg::from_int(p.0)) / (r1[0].abs() + r1[1].abs());
    // Start: a point of least distance to the first ray, nearest the origin among those.
    let start = *pts
        .iter()
        .min_by(|a, b| d1(a).cmp(&d1(b)).then((a.0.abs() + a.1.abs()).cmp(&(b.0.abs() + b.1.abs()))))
        .unwrap();
    let mut chain = vec![start];
    let mut cur = start;
    loop {
        // Next: the point leaving every other point to the right of cur→next, farthest on ties.
        let mut next: Option<Point> = None;
        for &p in &pts {
            if p == cur {
                continue;
            }
            next = match next {
                None => Some(p),
                Some(q) => {
                    let c = cross(cur, q, p);
                    let far = |x: Point| (x.0 - cur.0).abs() + (x.1 - cur.1).abs();
                    if c > 0 || (c == 0 && far(p) > far(q)) {
                        Some(p)
                    } else {
                        Some(q)
                    }
                }
            };
        }
        let Some(n) = next else { break };
        // Stop once the edge no longer faces the origin.
        if cross(cur, n, (0, 0)) <= 0 {
            break;
        }
        chain.push(n);
        cur = n;
    }
    chain
}

fn scaled(vs: &[Point], k: i64) -> Vec<Point> {
    vs.iter().map(|&(x, y)| (k * x, k * y)).collect()
}

#[test]
fn first_quadrant_sail() {
    let c = Cone2::from_points((1, 0), (0, 1)).unwrap();
    let s = sail(&c, 10).unwrap();
    assert_eq!(s.vertices, vec![(1, 0), (0, 1)]);
    assert_eq!((s.start, s.end), (SailEnd::Ray, SailEnd::Ray));
}

#[test]
fn narrow_cone_has_two_vertices() {
    let c = Cone2::from_points((1, 2), (2, 3)).unwrap();
    assert_eq!(sail(&c, 10).unwrap().vertices, vec![(2, 3), (1, 2)]);
}

#[test]
fn degenerate_cone_is_rejected() {
    assert_eq!(Cone2::from_points((1, 2), (-2, -4)), Err(SailError::Degenerate));
}

#[test]
fn fibonacci_sail_vertices() {
    let s = sail(&fibonacci_cone(), 100).unwrap();
    for v in [(1, 1), (2, 3), (5, 8), (13, 21), (34, 55), (1, 0), (2, -1), (5, -3), (13, -8)] {
        assert!(s.vertices.contains(&v), "{v:?} missing from {s}");
    }
    assert_eq!((s.start, s.end), (SailEnd::Truncated, SailEnd::Truncated));
    // The walk agrees with a brute-force hull away from the box edge.
    let brute = brute_sail(&fibonacci_cone(), 100);
    let inner = |vs: &[Point]| vs.iter().copied().filter(|&(x, y)| x.abs().max(y.abs()) <= 30).collect::<Vec<_>>();
    assert_eq!(inner(&s.vertices), inner(&brute));
}

#[test]
fn box_zero_is_an_error() {
    let a = group_from_matrix(&fibonacci()).unwrap();
    assert!(matches!(geometric_cf(&a, 1, 0), Err(SailError::BoxExhausted(1))));
    let c = Cone2::from_points((1, 0), (0, 1)).unwrap();
    assert!(matches!(k_sail(&c, 3, 2), Err(SailError::BoxExhausted(3))));
}

#[test]
fn first_quadrant_two_sail() {
    let c = Cone2::from_points((1, 0), (0, 1)).unwrap();
    assert_eq!(k_sail(&c, 2, 10).unwrap().vertices, vec![(2, 0), (0, 2)]);
}

#[test]
fn fibonacci_three_sail_is_homothetic() {
    let c = fibonacci_cone();
    let one = sail(&c, 1000).unwrap();
    let three = k_sail(&c, 3, 1000).unwrap();
    let window = |vs: Vec<Point>| vs.into_iter().filter(|&(x, y)| x.abs().max(y.abs()) <= 250).collect::<Vec<_>>();
    let expect = window(scaled(&one.vertices, 3));
    assert!(expect.len() >= 8);
    assert_eq!(window(three.vertices), expect);
}

#[test]
fn fibonacci_cf_is_shift_invariant() {
    let m = fibonacci();
    let a = group_from_matrix(&m).unwrap();
    let cf = geometric_cf(&a, 1, 400).unwrap();
    let all: Vec<Point> = cf.iter().flat_map(|s| s.vertices.iter().copied()).collect();
    let mut checked = 0;
    for &(x, y) in &all {
        let img = (x + y, x);
        if img.0.abs().max(img.1.abs()) <= 400 {
            assert!(all.contains(&img), "image of {:?}", (x, y));
            checked += 1;
        }
    }
    assert!(checked > 20);
    // The transposed matrix preserves the cone of the rays (1, −1/θ) and (1, θ).
    let p = sail_period(&fibonacci_cone(), &[vec![0, 1], vec![1, 1]]).unwrap();
    let s = p.periodic_shift.unwrap();
    let shift = |(x, y): Point| (s[0][0] * x + s[0][1] * y, s[1][0] * x + s[1][1] * y);
    let long = sail(&fibonacci_cone(), 10_000).unwrap().vertices;
    let i = long.iter().position(|&v| v == p.vertices[0]).unwrap();
    let n = p.vertices.len();
    assert_eq!(&long[i..i + n], &p.vertices[..]);
    assert_eq!(long[i + n], shift(p.vertices[0]));
}

#[test]
fn antisail_geometric_cf() {
    let a = MCRSGroup::from_int_vectors(&[&[1, 2], &[2, 3]]).unwrap();
    let cf = geometric_cf(&a, 1, 20).unwrap();
    // det((1,2), (−2,−3)) = 1, so the wide cones have a single edge too.
    let mut pts: Vec<Point> = cf.iter().flat_map(|s| s.vertices.iter().copied()).collect();
    pts.sort();
    pts.dedup();
    assert_eq!(pts, vec![(-2, -3), (-1, -2), (1, 2), (2, 3)]);
    for s in &cf {
        assert_eq!(s.vertices.len(), 2);
        assert_eq!((s.start, s.end), (SailEnd::Ray, SailEnd::Ray));
    }
}

#[test]
fn membership_levels() {
    let a = group_from_matrix(&fibonacci()).unwrap();
    assert_eq!(sail_membership_level(&a, (1, 1)).unwrap(), 1);
    assert_eq!(sail_membership_level(&a, (2, 2)).unwrap(), 2);
    assert_eq!(sail_membership_level(&a, (0, 0)), Err(SailError::ZeroPoint));

    let b = MCRSGroup::from_int_vectors(&[&[1, 2], &[2, 3]]).unwrap();
    let k = sail_membership_level(&b, (1, 0)).unwrap();
    let phi = md_form(&b).unwrap().eval_int(&[1, 0]).re.abs();
    let alpha = markoff_minimum(&b).unwrap();
    assert!(alpha.is_zero());
    assert!(Alg::from_int(k as i64) * &alpha <= phi);
    // Peeling oracle: (1,0) sits on the k-sail of its cone.
    let cone = Cone2::from_points((1, 2), (-2, -3)).unwrap();
    let cone = if cone.contains((1, 0)) { cone } else { Cone2::from_points((2, 3), (-1, -2)).unwrap() };
    assert!(cone.contains((1, 0)));
    let peeled = k_sail(&cone, k as u32, 40).unwrap();
    assert!(peeled.lattice_points().contains(&(1, 0)));
}

#[test]
fn fibonacci_markoff_minimum() {
    let a = group_from_matrix(&fibonacci()).unwrap();
    let alpha = markoff_minimum(&a).unwrap();
    assert_eq!(alpha, parse_real("1/sqrt 5").unwrap());
    // Brute force: the form is a multiple of the integer form x² − xy − y².
    let mut best = (i64::MAX, (0, 0));
    for x in -1000i64..=1000 {
        for y in -1000i64..=1000 {
            let q = (x * x - x * y - y * y).abs();
            if (x, y) != (0, 0) && q < best.0 {
                best = (q, (x, y));
            }
        }
    }
    let p = best.1;
    assert_eq!(md_form(&a).unwrap().eval_int(&[p.0, p.1]).re.abs(), alpha);
    for (x, y) in [(3, 7), (10, -4), (55, 34)] {
        let q = md_form(&a).unwrap().eval_int(&[x, y]).re.abs();
        assert!(q >= alpha);
    }
}

#[test]
fn markoff_minimum_needs_a_matrix() {
    let t = golden();
    let a = MCRSGroup::from_slopes(&(Alg::one() / &t), &-&t).unwrap();
    assert!(markoff_minimum(&a).is_err());
}

/// `|Φ| ≥ kα` on every integer point of the k-geometric continued fraction.
#[test]
fn lower_bound_on_k_cf() {
    for m in [fibonacci(), vec![vec![2, 1], vec![1, 1]], vec![vec![3, 1], vec![1, 0]]] {
        let a = group_from_matrix(&m).unwrap();
        let alpha = markoff_minimum(&a).unwrap();
        assert!(!alpha.is_zero());
        let phi = md_form(&a).unwrap();
        for k in 1..=3u32 {
            let bound = if k == 1 { 1000 } else { 400 };
            for s in geometric_cf(&a, k, bound).unwrap() {
                for p in s.lattice_points() {
                    let v = phi.eval_int(&[p.0, p.1]).re.abs();
                    assert!(v >= Alg::from_int(k as i64) * &alpha, "{m:?} k={k} {p:?}");
                }
            }
        }
    }
}

fn small_vector() -> impl Strategy<Value = Point> {
    (-12i64..=12, -12i64..=12).prop_filter("nonzero", |p| *p != (0, 0))
}

fn rational_cone() -> impl Strategy<Value = Cone2> {
    (small_vector(), small_vector())
        .prop_filter("independent", |(a, b)| a.0 * b.1 != a.1 * b.0)
        .prop_map(|(a, b)| Cone2::from_points(a, b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn walk_matches_brute_force_hull(c in rational_cone(), bound in 24i64..=200) {
        let s = sail(&c, bound).unwrap();
        prop_assert_eq!(&s.vertices, &brute_sail(&c, bound));
        prop_assert_eq!((s.start, s.end), (SailEnd::Ray, SailEnd::Ray));
    }

    #[test]
    fn one_sail_by_peeling_equals_walk(c in rational_cone()) {
        prop_assert_eq!(k_sail(&c, 1, 30).unwrap().vertices, sail(&c, 30).unwrap().vertices);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn homothety(c in rational_cone()) {
        let one = sail(&c, 12).unwrap().vertices;
        for k in 2..=5i64 {
            let s = k_sail(&c, k as u32, 12 * k + 12).unwrap();
            prop_assert_eq!(s.vertices, scaled(&one, k), "k = {}", k);
        }
    }

    #[test]
    fn level_matches_peeling(c in rational_cone(), x in -9i64..=9, y in -9i64..=9) {
        prop_assume!((x, y) != (0, 0) && c.contains((x, y)));
        let k = level_in_cone(&c, (x, y)).unwrap();
        let reach = sail(&c, 12).unwrap().vertices.iter().map(|p| p.0.abs().max(p.1.abs())).max().unwrap();
        let bound = k as i64 * reach + 1;
        prop_assume!(bound <= 300);
        let s = k_sail(&c, k as u32, bound).unwrap();
        prop_assert!(s.lattice_points().contains(&(x, y)));
    }
}
