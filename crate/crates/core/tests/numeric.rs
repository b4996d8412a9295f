use mcrs::numeric::*;
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use std::cmp::Ordering;
use std::sync::Arc;

fn surd(p: i64, q: i64, r: i64, d: i64) -> QuadraticSurd {
    QuadraticSurd::new(p.into(), q.into(), r.into(), d.into()).unwrap()
}

fn cubic(poly: [i64; 4], lo: i64, hi: i64) -> Alg {
    let f = NumberField::new(poly.iter().map(|&c| BigInt::from(c)).collect(), rat(lo, 1), rat(hi, 1)).unwrap();
    f.generator()
}

#[test]
fn golden_ratio_exceeds_three_halves() {
    let phi = surd(1, 1, 2, 5);
    assert_eq!(surd_cmp(&phi, &QuadraticSurd::from_rational(&rat(3, 2))).unwrap(), Ordering::Greater);
    assert_eq!(phi.cmp_rational(&rat(3, 2)), Ordering::Greater);
}

#[test]
fn zero_surd_equals_zero() {
    let z = surd(0, 0, 1, 5);
    assert_eq!(z.cmp_rational(&rat(0, 1)), Ordering::Equal);
}

#[test]
fn one_plus_sqrt2_exceeds_three_halves() {
    // 1 + √2 = 2.41421356237309504880168872420969807856967187537694807317667973799...
    let x = surd(1, 1, 1, 2);
    let y = surd(3, 0, 2, 2);
    assert_eq!(surd_cmp(&x, &y).unwrap(), Ordering::Greater);
}

#[test]
fn mixed_radicands_are_incomparable() {
    let err = surd_cmp(&surd(0, 1, 1, 2), &surd(0, 1, 1, 3)).unwrap_err();
    assert!(err.to_string().contains("incomparable surd fields"));
}

#[test]
fn surd_normalizes_square_factors() {
    let s = surd(0, 2, 4, 8); // 2√8/4 = √2
    assert_eq!(s, surd(0, 1, 1, 2));
    assert_eq!(surd(2, 0, 4, 3).to_string(), "1/2");
}

#[test]
fn sqrt2_ball_refines() {
    let b = BallReal::from_alg(&QuadraticSurd::sqrt(2).unwrap().to_alg(), 4);
    let r = ball_refine(&b, 10);
    assert!(r.radius() <= rat(1, 1024));
    assert!((r.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-3);
}

#[test]
fn cubic_root_of_b_is_enclosed() {
    let xi = cubic([-1, -1, 0, 1], 1, 2);
    let b = ball_refine(&BallReal::from_alg(&xi, 8), 40);
    assert!(b.radius() <= BigRational::new(1.into(), BigInt::from(1u64 << 40)));
    let v = rat(13247179573, 10000000000);
    assert!((b.lo() - &v).abs() < rat(1, 10000000000) && (b.hi() - &v).abs() < rat(1, 10000000000));
    assert!((b.to_f64() - 1.3247179573).abs() < 1e-10);
}

#[test]
fn largest_root_of_e1_is_enclosed() {
    let xi = cubic([1, -1, -2, 1], 2, 3);
    let b = ball_refine(&BallReal::from_alg(&xi, 8), 40);
    assert!((b.to_f64() - 2.2469796037).abs() < 1e-10);
}

#[test]
fn primitive_divides_common_factor() {
    let v = GaussianVector::real(&[2, 4]);
    assert_eq!(gaussian_primitive(&v).unwrap(), GaussianVector::real(&[1, 2]));
}

#[test]
fn primitive_rotates_first_coordinate() {
    let v = GaussianVector::new(vec![GaussianInt::new(0, 1), GaussianInt::new(1, 0)]);
    let p = gaussian_primitive(&v).unwrap();
    assert_eq!(p, GaussianVector::new(vec![GaussianInt::new(1, 0), GaussianInt::new(0, -1)]));
    assert_eq!(p.norm_sq(), v.norm_sq());
}

#[test]
fn primitive_of_single_gaussian_coordinate() {
    let v = GaussianVector::new(vec![GaussianInt::new(0, 0), GaussianInt::new(3, 3)]);
    assert_eq!(gaussian_primitive(&v).unwrap(), GaussianVector::real(&[0, 1]));
}

#[test]
fn primitive_rejects_zero() {
    assert!(gaussian_primitive(&GaussianVector::real(&[0, 0])).is_err());
}

#[test]
fn parser_accepts_surd_syntax() {
    assert_eq!(parse_surd("(1+sqrt 5)/2").unwrap(), surd(1, 1, 2, 5));
    assert_eq!(parse_surd("(1+√5)/2").unwrap(), surd(1, 1, 2, 5));
    assert_eq!(parse_surd("3 sqrt 8").unwrap(), surd(0, 6, 1, 2));
    assert_eq!(parse_rational("-7/21").unwrap(), rat(-1, 3));
    assert!(parse_real("sqrt 2 + sqrt 3").is_err());
    assert!(parse_rational("sqrt 2").is_err());
    assert!(parse_real("1/0").is_err());
}

#[test]
fn cubic_field_arithmetic() {
    let xi = cubic([-1, -1, 0, 1], 1, 2);
    let cube = &xi * &xi * &xi;
    assert_eq!(cube, &xi + &Alg::one());
    let inv = xi.inv().unwrap();
    assert_eq!(&inv * &xi, Alg::one());
    // 1/ξ = ξ² − 1 for ξ³ = ξ + 1.
    assert_eq!(inv, &xi * &xi - Alg::one());
}

#[test]
fn e1_roots_are_all_real() {
    let roots = NumberField::real_roots(vec![1.into(), (-1).into(), (-2).into(), 1.into()]).unwrap();
    let vals: Vec<f64> = roots.iter().map(|f| f.generator().to_f64()).collect();
    assert_eq!(vals.len(), 3);
    assert!((vals[0] + 0.8019377358).abs() < 1e-9);
    assert!((vals[1] - 0.5549581321).abs() < 1e-9);
    assert!((vals[2] - 2.2469796037).abs() < 1e-9);
}

fn gauss() -> impl Strategy<Value = GaussianInt> {
    (-50i64..50, -50i64..50).prop_map(|(a, b)| GaussianInt::new(a, b))
}

fn gvec() -> impl Strategy<Value = GaussianVector> {
    prop::collection::vec(gauss(), 2..4)
        .prop_filter("nonzero", |v| v.iter().any(|z| !z.is_zero()))
        .prop_map(GaussianVector::new)
}

proptest! {
    #[test]
    fn surd_embedding_preserves_rational_order(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
        let x = QuadraticSurd::from_rational(&rat(a, b));
        let y = QuadraticSurd::from_rational(&rat(c, d));
        prop_assert_eq!(surd_cmp(&x, &y).unwrap(), rat(a, b).cmp(&rat(c, d)));
    }

    #[test]
    fn surd_order_matches_floating_point(p in -100i64..100, q in -100i64..100, r in 1i64..100, s in -100i64..100, t in -100i64..100, u in 1i64..100, d in prop::sample::select(vec![2i64, 3, 5, 7, 13])) {
        let x = surd(p, q, r, d);
        let y = surd(s, t, u, d);
        let (fx, fy) = (x.to_f64(), y.to_f64());
        prop_assume!((fx - fy).abs() > 1e-9);
        prop_assert_eq!(surd_cmp(&x, &y).unwrap(), fx.partial_cmp(&fy).unwrap());
    }

    #[test]
    fn surd_floor_matches_float(p in -1000i64..1000, q in -1000i64..1000, r in 1i64..100, d in prop::sample::select(vec![2i64, 3, 5, 6, 10])) {
        let x = surd(p, q, r, d);
        let f = x.to_f64();
        prop_assume!((f - f.round()).abs() > 1e-9);
        prop_assert_eq!(x.floor(), BigInt::from(f.floor() as i64));
    }

    #[test]
    fn unit_multiples_keep_norm(v in gvec(), k in 0usize..4) {
        let u = [GaussianInt::new(1, 0), GaussianInt::new(0, 1), GaussianInt::new(-1, 0), GaussianInt::new(0, -1)][k];
        prop_assert_eq!(v.scale(u).norm_sq(), v.norm_sq());
    }

    #[test]
    fn primitive_is_idempotent(v in gvec()) {
        let p = gaussian_primitive(&v).unwrap();
        prop_assert!(p.is_primitive());
        prop_assert_eq!(gaussian_primitive(&p).unwrap(), p.clone());
        let first = p.coords.iter().find(|z| !z.is_zero()).unwrap();
        prop_assert!(first.re > 0 && first.im >= 0);
    }

    #[test]
    fn primitive_is_unit_invariant(v in gvec(), k in 0usize..4) {
        let u = [GaussianInt::new(1, 0), GaussianInt::new(0, 1), GaussianInt::new(-1, 0), GaussianInt::new(0, -1)][k];
        prop_assert_eq!(gaussian_primitive(&v.scale(u)).unwrap(), gaussian_primitive(&v).unwrap());
    }

    #[test]
    fn refined_ball_contains_high_precision_value(bits in 1u32..80, which in 0usize..3) {
        let x = match which {
            0 => cubic([-1, -1, 0, 1], 1, 2),
            1 => cubic([1, -1, -2, 1], 2, 3),
            _ => QuadraticSurd::sqrt(7).unwrap().to_alg(),
        };
        let coarse = BallReal::new(Arc::new(x.clone()), bits);
        let fine = BallReal::new(Arc::new(x), 256);
        prop_assert!(coarse.lo() <= fine.lo() && fine.hi() <= coarse.hi());
        let r = ball_refine(&coarse, bits + 5);
        prop_assert!(r.contains(&fine.midpoint()));
        prop_assert!(r.radius() <= BigRational::new(1.into(), BigInt::from(1) << (bits as usize + 5)));
    }
}
