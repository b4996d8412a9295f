use mcrs::cf::*;
use mcrs::numeric::*;
use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn cubic(poly: [i64; 4], lo: i64, hi: i64) -> Alg {
    NumberField::new(poly.iter().map(|&c| BigInt::from(c)).collect(), rat(lo, 1), rat(hi, 1)).unwrap().generator()
}

fn golden() -> Alg {
    parse_real("(1+sqrt 5)/2").unwrap()
}

/// Exhaustive box scan: for each denominator only the two neighbours of x·n can win.
fn scan_best(x: &Alg, n_box: i64) -> (Alg, Vec<BigRational>) {
    let mut best: Option<(Alg, Vec<BigRational>)> = None;
    for n in 1..=n_box {
        let f = (x * &Alg::from_int(n)).floor();
        for m in [f.clone(), f + 1] {
            let m = m.clamp(BigInt::from(-n_box), BigInt::from(n_box));
            let q = BigRational::new(m, n.into());
            let d = (x - &Alg::from_rational(q.clone())).abs();
            match &mut best {
                Some((bd, set)) if *bd == d => {
                    if !set.contains(&q) {
                        set.push(q)
                    }
                }
                Some((bd, _)) if *bd < d => {}
                _ => best = Some((d, vec![q])),
            }
        }
    }
    best.unwrap()
}

#[test]
fn half_expands_to_zero_two() {
    let cf = cf_expand(&Alg::from_rational(rat(1, 2)), 10).unwrap();
    assert_eq!(cf.terms, big(&[0, 2]));
    assert_eq!(cf.kind, CfKind::Finite);
}

#[test]
fn golden_ratio_is_periodic_ones() {
    let cf = cf_expand(&golden(), 10).unwrap();
    assert_eq!(cf.kind, CfKind::Periodic { preperiod: 0, period: 1 });
    assert_eq!(cf.take(6), big(&[1, 1, 1, 1, 1, 1]));
    assert_eq!(cf.to_string(), "[(1)]");
}

#[test]
fn sqrt_seven_period() {
    let cf = cf_expand(&parse_real("sqrt 7").unwrap(), 10).unwrap();
    assert_eq!(cf.kind, CfKind::Periodic { preperiod: 1, period: 4 });
    assert_eq!(cf.terms, big(&[2, 1, 1, 1, 4]));
}

#[test]
fn plastic_number_prefix() {
    let xi = cubic([-1, -1, 0, 1], 1, 2);
    let cf = cf_expand(&xi, 15).unwrap();
    assert_eq!(cf.terms, big(&[1, 3, 12, 1, 1, 3, 2, 3, 2, 4, 2, 141, 80, 2, 5]));
    let ball = cf_ball(&BallReal::from_alg(&xi, 128), 9, 128).unwrap();
    assert_eq!(ball.terms, big(&[1, 3, 12, 1, 1, 3, 2, 3, 2]));
}

#[test]
fn e1_root_prefix() {
    let xi = cubic([1, -1, -2, 1], 2, 3);
    let cf = cf_expand(&xi, 15).unwrap();
    assert_eq!(cf.terms, big(&[2, 4, 20, 2, 3, 1, 6, 10, 5, 2, 2, 1, 2, 2, 1]));
}

#[test]
fn coarse_ball_reports_undecidable_digit() {
    let xi = cubic([-1, -1, 0, 1], 1, 2);
    let err = cf_ball(&BallReal::from_alg(&xi, 8), 40, 16).unwrap_err();
    assert!(matches!(err, CfError::UndecidableDigit { .. }));
}

#[test]
fn golden_box_hundred() {
    let r = best_dioph_in_box(&golden(), 100);
    assert_eq!((r.best.m.clone(), r.best.n.clone()), (89.into(), 55.into()));
    let next = r.next.unwrap();
    assert_eq!((next.m, next.n), (144.into(), 89.into()));
}

#[test]
fn box_contains_exact_value() {
    let r = best_dioph_in_box(&Alg::from_rational(rat(3, 7)), 10);
    assert_eq!(r.best.to_string(), "3/7");
    assert!(r.error.is_zero());
    assert!(r.next.is_none());
}

#[test]
fn e1_root_box_fifty() {
    let xi = cubic([1, -1, -2, 1], 2, 3);
    let r = best_dioph_in_box(&xi, 50);
    let (d, set) = scan_best(&xi, 50);
    assert_eq!(set, vec![r.best.value()]);
    assert_eq!(r.error, d);
    // 2.2469796 ≈ [2; 4, 20, …]: 9/4 is the last convergent inside the box.
    assert_eq!(r.best.to_string(), "9/4");
}

#[test]
fn numerator_bound_binds_for_large_values() {
    let r = best_dioph_in_box(&Alg::from_int(1000), 10);
    assert_eq!(r.best.to_string(), "10/1");
    let r = best_dioph_in_box(&parse_real("-sqrt 200").unwrap(), 12);
    assert_eq!(r.best.to_string(), "-12/1");
}

#[test]
fn best_matches_scan_for_small_boxes() {
    let xs = [
        golden(),
        parse_real("sqrt 2").unwrap(),
        parse_real("(3 - sqrt 13)/7").unwrap(),
        parse_real("-17/5").unwrap(),
        Alg::from_rational(rat(22, 7)),
        cubic([-1, -1, 0, 1], 1, 2),
    ];
    for x in &xs {
        for n in (1..=200).step_by(7) {
            let r = best_dioph_in_box(x, n as u64);
            let (d, set) = scan_best(x, n);
            assert!(set.contains(&r.best.value()), "x={x} N={n}: got {} want {:?}", r.best, set);
            assert_eq!(r.error, d);
        }
    }
}

#[test]
fn next_is_first_strict_improvement() {
    let x = parse_real("sqrt 3").unwrap();
    for n in 1..=40u64 {
        let r = best_dioph_in_box(&x, n);
        let next = r.next.unwrap();
        let m = next.m.abs().max(next.n.clone());
        let m: u64 = m.try_into().unwrap();
        assert!(m > n);
        // Every box up to m − 1 keeps the old error; box m achieves next.
        assert_eq!(best_dioph_in_box(&x, m - 1).error, r.error);
        let at = best_dioph_in_box(&x, m);
        assert_eq!(at.best, Convergent::new(next.m.clone(), next.n.clone(), at.best.index));
    }
}

#[test]
fn classical_sequence_of_two_fifths() {
    let s = classical_best_sequence(&Alg::from_rational(rat(2, 5)), 10).unwrap();
    let v: Vec<String> = s.iter().map(|c| c.to_string()).collect();
    assert_eq!(v, ["1/2", "2/5", "1/3"]);
}

#[test]
fn classical_sequence_of_zero() {
    let s = classical_best_sequence(&Alg::zero(), 10).unwrap();
    assert_eq!(s.len(), 1);
    assert_eq!(s[0].to_string(), "0/1");
}

#[test]
fn classical_sequence_of_inverse_golden_square() {
    // 1/φ² = (3 − √5)/2 = [0; 2, 1, 1, 1, …]
    let s = classical_best_sequence(&parse_real("(3 - sqrt 5)/2").unwrap(), 6).unwrap();
    let v: Vec<String> = s.iter().map(|c| c.to_string()).collect();
    assert_eq!(v, ["1/2", "1/3", "2/5", "3/8", "5/13", "8/21"]);
}

#[test]
fn classical_sequence_rejects_outside_unit_interval() {
    assert!(classical_best_sequence(&Alg::from_rational(rat(3, 2)), 5).is_err());
    assert!(classical_best_sequence(&Alg::from_rational(rat(-1, 2)), 5).is_err());
}

#[test]
fn interval_enumeration_matches_scan() {
    let cases = [
        (rat(-3, 2), rat(5, 7), 12),
        (rat(1, 3), rat(1, 3), 9),
        (rat(2, 5), rat(1, 2), 30),
        (rat(-40, 1), rat(-39, 2), 25),
    ];
    for (lo, hi, n) in cases {
        let got = fractions_in_interval(&lo, &hi, n);
        let mut want = Vec::new();
        for q in 1..=n {
            for p in -n..=n {
                let f = rat(p, q);
                if num_integer::gcd(p, q) == 1 && lo <= f && f <= hi {
                    want.push((f, (p, q)));
                }
            }
        }
        want.sort();
        let want: Vec<(i64, i64)> = want.into_iter().map(|x| x.1).collect();
        assert_eq!(got, want, "[{lo}, {hi}] N={n}");
    }
}

fn alg_of(k: u8) -> Alg {
    match k % 4 {
        0 => golden(),
        1 => parse_real("(5 + 2 sqrt 3)/11").unwrap(),
        2 => cubic([-1, -1, 0, 1], 1, 2),
        _ => parse_real("sqrt 19 - 4").unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convergent_determinants_alternate(k in 0u8..4) {
        let cs = cf_expand(&alg_of(k), 20).unwrap().convergents(20);
        for w in cs.windows(2) {
            let det = &w[1].m * &w[0].n - &w[0].m * &w[1].n;
            prop_assert!(det == BigInt::one() || det == -BigInt::one());
        }
    }

    #[test]
    fn convergent_error_is_below_reciprocal_product(k in 0u8..4) {
        let x = alg_of(k);
        let cs = cf_expand(&x, 18).unwrap().convergents(18);
        for w in cs.windows(2) {
            let err = (&x - &Alg::from_rational(w[0].value())).abs();
            let bound = Alg::from_rational(BigRational::new(BigInt::one(), &w[0].n * &w[1].n));
            prop_assert!(err < bound);
        }
    }

    #[test]
    fn periodic_expansion_round_trips(p in -50i64..50, q in 1i64..20, r in 1i64..30, d in prop::sample::select(vec![2i64, 3, 5, 6, 7, 11, 13])) {
        let x = QuadraticSurd::new(p.into(), q.into(), r.into(), d.into()).unwrap();
        let cf = cf_surd(&x);
        let CfKind::Periodic { preperiod, period } = cf.kind else { panic!("surd must be periodic") };
        // Recover the tail z from x through the preperiod, then check that it is
        // the fixed point z = (P z + P')/(Q z + Q') of the period.
        let xa = x.to_alg();
        let big = |v: &BigInt| Alg::from_bigint(v.clone());
        let pre = convergents_of(&cf.terms[..preperiod]);
        let z = if preperiod == 0 {
            xa
        } else {
            let (m1, n1) = (big(&pre[preperiod - 1].m), big(&pre[preperiod - 1].n));
            let (m0, n0) = if preperiod >= 2 {
                (big(&pre[preperiod - 2].m), big(&pre[preperiod - 2].n))
            } else {
                (Alg::one(), Alg::zero())
            };
            (m0 - &n0 * &xa) / (&n1 * &xa - m1)
        };
        let per = convergents_of(&cf.terms[preperiod..]);
        let (pp, qq) = (big(&per[period - 1].m), big(&per[period - 1].n));
        let (pp1, qq1) = if period >= 2 {
            (big(&per[period - 2].m), big(&per[period - 2].n))
        } else {
            (Alg::one(), Alg::zero())
        };
        prop_assert!(z > Alg::one());
        prop_assert_eq!(&z * &(&qq * &z + qq1), &pp * &z + pp1);
    }

    #[test]
    fn best_dioph_agrees_with_scan(p in -60i64..60, q in 1i64..10, r in 1i64..12, d in prop::sample::select(vec![2i64, 3, 5, 10]), n in 1i64..120) {
        let x = QuadraticSurd::new(p.into(), q.into(), r.into(), d.into()).unwrap().to_alg();
        let res = best_dioph_in_box(&x, n as u64);
        let (dist, set) = scan_best(&x, n);
        prop_assert!(set.contains(&res.best.value()));
        prop_assert_eq!(res.error, dist);
    }

    #[test]
    fn interval_enumeration_is_exact(a in -30i64..30, b in 1i64..15, w in 0i64..20, n in 1i64..25) {
        let lo = rat(a, b);
        let hi = &lo + rat(w, 7);
        let got = fractions_in_interval(&lo, &hi, n);
        let mut count = 0;
        for qd in 1..=n {
            for pn in -n..=n {
                let f = rat(pn, qd);
                if num_integer::gcd(pn, qd) == 1 && lo <= f && f <= hi {
                    count += 1;
                    prop_assert!(got.contains(&(pn, qd)));
                }
            }
        }
        prop_assert_eq!(got.len(), count);
        prop_assert!(got.windows(2).all(|w| rat(w[0].0, w[0].1) < rat(w[1].0, w[1].1)));
    }
}

#[test]
fn box_best_of_zero() {
    let b = best_dioph_in_box(&Alg::zero(), 7);
    assert_eq!((b.best.m.to_string(), b.best.n.to_string()), ("0".into(), "1".into()));
    assert!(b.next.is_none());
}
