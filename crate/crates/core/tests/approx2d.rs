use mcrs::approx2d::*;
use mcrs::mcrs::{discrepancy, group_from_matrix, md_form, EigenLine, MCRSGroup};
use mcrs::numeric::{parse_real, rat, Alg, BigRational, Cx, GaussianInt};
use mcrs::sails2d::{cones, k_sail};
use proptest::prelude::*;

fn fibonacci() -> MCRSGroup {
    group_from_matrix(&[vec![0, 1], vec![1, 1]]).unwrap()
}

fn antisail() -> MCRSGroup {
    MCRSGroup::from_int_vectors(&[&[1, 2], &[2, 3]]).unwrap()
}

fn sqrt2_group() -> MCRSGroup {
    let s = parse_real("sqrt 2").unwrap();
    MCRSGroup::from_slopes(&s, &-s.inv().unwrap()).unwrap()
}

/// Lines `y = (α ± Iβ)x` with `α = β = 1/√2`.
fn complex_group() -> MCRSGroup {
    let h = parse_real("sqrt 2").unwrap() / Alg::from_int(2);
    let tau = Cx::new(h.clone(), h);
    MCRSGroup::new(vec![
        EigenLine::new(vec![Cx::one(), tau.clone()]).unwrap(),
        EigenLine::new(vec![Cx::one(), tau.conj()]).unwrap(),
    ])
    .unwrap()
}

fn rotation() -> MCRSGroup {
    group_from_matrix(&[vec![0, -1], vec![1, 0]]).unwrap()
}

fn query(a: &MCRSGroup, n: i64) -> ApproxQuery {
    ApproxQuery::new(a.clone(), n).unwrap()
}

fn theta() -> Alg {
    parse_real("(1+sqrt 5)/2").unwrap()
}

fn r(x: BigRational) -> Alg {
    Alg::from_rational(x)
}

fn fib(k: usize) -> i64 {
    let (mut a, mut b) = (0i64, 1i64);
    for _ in 0..k {
        (a, b) = (b, a + b);
    }
    a
}

#[test]
fn antisail_has_four_minimizers_of_size_one() {
    let expected = vec![
        Candidate::real((0, 1), (1, 0)).unwrap(),
        Candidate::real((0, 1), (1, 1)).unwrap(),
        Candidate::real((1, -1), (1, 0)).unwrap(),
        Candidate::real((1, 0), (1, 1)).unwrap(),
    ];
    let q = query(&antisail(), 1);
    for res in [best_approx_hyperbolic(&q).unwrap(), brute_force_best(&q, DEFAULT_ORACLE_CAP).unwrap()] {
        assert_eq!(res.minimizers, expected);
        assert_eq!(res.rho.squared, Alg::from_int(36));
    }
}

#[test]
fn fibonacci_at_one_million() {
    let res = best_approx_hyperbolic(&query(&fibonacci(), 1_000_000)).unwrap();
    let (f29, f30) = (fib(29), fib(30));
    assert_eq!((f29, f30), (514229, 832040));
    assert_eq!(res.minimizers, vec![Candidate::real((f29, f30), (f30, -f29)).unwrap()]);
    let levels = sail_level_of_result(&res).unwrap();
    assert_eq!(levels[0].1, [1, 1]);
}

#[test]
fn fibonacci_minimizers_follow_consecutive_terms() {
    for n in (1..=200).chain([1000, 4181, 4180, 10_000, 100_000]) {
        let res = best_approx_hyperbolic(&query(&fibonacci(), n)).unwrap();
        let k = (1..).take_while(|&k| fib(k) <= n).last().unwrap();
        let (a, b) = (fib(k - 1).max(1), fib(k));
        assert_eq!(res.minimizers, vec![Candidate::real((a, b), (b, -a)).unwrap()], "N = {n}");
    }
}

#[test]
fn rational_target_within_box_is_its_own_best() {
    let a = MCRSGroup::from_int_vectors(&[&[3, 2], &[1, -4]]).unwrap();
    let res = best_approx_hyperbolic(&query(&a, 4)).unwrap();
    assert!(res.rho.is_zero());
    assert_eq!(res.minimizers, vec![Candidate::real((3, 2), (1, -4)).unwrap()]);
    let res = best_approx_complex(&query(&rotation(), 1)).unwrap();
    assert!(res.rho.is_zero());
    assert_eq!(res.minimizers, vec![Candidate::complex(GaussianInt::real(1), GaussianInt::new(0, 1)).unwrap()]);
}

#[test]
fn vertical_and_wrong_spectrum_are_rejected() {
    let classical = MCRSGroup::classical(&theta());
    assert_eq!(best_approx_hyperbolic(&query(&classical, 5)).unwrap_err(), ApproxError::VerticalLine);
    assert_eq!(best_approx_hyperbolic(&query(&rotation(), 5)).unwrap_err(), ApproxError::NotHyperbolic);
    assert_eq!(best_approx_complex(&query(&fibonacci(), 5)).unwrap_err(), ApproxError::NotComplexPair);
    assert!(matches!(ApproxQuery::new(fibonacci(), 0), Err(ApproxError::BadSize(0))));
    assert!(matches!(brute_force_best(&query(&fibonacci(), 61), 60), Err(ApproxError::OverCap { .. })));
}

#[test]
fn worked_example_constants() {
    let (a1, a2) = (theta(), -theta().inv().unwrap());
    let n2 = Alg::from_int(10_000);
    // Step 2: eps2 = 1/(55*89), scaled by (89/55)^3.
    let c2 = eps_bound_from_delta(&a1, &a2, &rat(1, 4895)).unwrap()
        * Alg::from_int(4895)
        * r(rat(89 * 89 * 89, 55 * 55 * 55));
    assert_eq!(round_up_decimal(&c2, 2), rat(379, 100));
    // Step 3 at N = 100.
    let eps1 = rat(379, 100) / BigRational::from_integer(10_000.into());
    let (d1, d2) = delta_bound_from_eps(&a1, &a2, &eps1).unwrap();
    assert_eq!(round_up_decimal(&(&d1 * &n2), 2), rat(8035, 100));
    assert_eq!(round_up_decimal(&(&d2 * &n2), 2), rat(1897, 100));
    // Step 4 with eps3 the rounded step-3 bounds.
    let (e1, e2) = (r(rat(8035, 100)) / &n2, r(rat(1897, 100)) / &n2);
    let f1 = phi_over_q2_bound(&a1, &a2, &e1, Side::First).unwrap();
    let f2 = phi_over_q2_bound(&a1, &a2, &e2, Side::Second).unwrap();
    assert_eq!(round_up_decimal(&(f2 * r(rat(1897, 100))), 2), rat(1899, 100));
    // The first side rounds to 80.64, one unit below the reference value 80.65.
    assert_eq!(round_up_decimal(&(f1 * r(rat(8035, 100))), 2), rat(8064, 100));
}

#[test]
fn uncorrected_bound_examples() {
    let (two, one) = (Alg::from_int(2), Alg::from_int(1));
    let (d1, d2) = delta_bound_from_eps(&two, &one, &rat(1, 10)).unwrap();
    assert_eq!((d1, d2), (r(rat(1, 3)), r(rat(1, 9))));
    assert_eq!(delta_bound_from_eps(&two, &Alg::zero(), &rat(1, 10)).unwrap_err(), ApproxError::ZeroSlope);
    assert!(matches!(delta_bound_from_eps(&two, &one, &rat(1, 1)), Err(ApproxError::EpsilonTooLarge(_))));
    // alpha = (1, 0): the bound tends to 2 eps2.
    let e = rat(1, 1_000_000);
    let b = eps_bound_from_delta(&one, &Alg::zero(), &e).unwrap() / r(e.clone());
    assert!((b.to_f64() - 2.0).abs() < 1e-5);
    // Complex precondition eps1 < 1/(2(1+|beta|)).
    let err = complex_delta_bound_from_eps(&Alg::zero(), &one, &rat(1, 4)).unwrap_err();
    assert!(matches!(err, ApproxError::EpsilonTooLarge(_)));
    assert!(complex_delta_bound_from_eps(&Alg::from_int(3), &one, &rat(1, 5)).is_ok());
    assert_eq!(complex_eps_bound_from_delta(&one, &Alg::zero(), &e).unwrap_err(), ApproxError::NotComplexPair);
}

/// The uncorrected discrepancy bound for perturbed lines fails here; the
/// corrected denominator covers it.
#[test]
fn uncorrected_perturbation_bound_counterexample() {
    let (one, zero) = (Alg::from_int(1), Alg::zero());
    let a = MCRSGroup::from_slopes(&one, &zero).unwrap();
    let b = MCRSGroup::from_slopes(&r(rat(901, 1000)), &r(rat(99, 1000))).unwrap();
    let rho = discrepancy(&a, &b).unwrap();
    let uncorrected = eps_bound_from_delta(&one, &zero, &rat(1, 10)).unwrap();
    let corrected = eps_bound_from_delta_corrected(&one, &zero, &rat(1, 10)).unwrap();
    assert!(rho.squared > uncorrected.square());
    assert!(rho.squared < corrected.square());
}

/// A rational slightly above the float value of `rho`.
fn eps_above(rho: &mcrs::mcrs::DiscrepancyValue) -> BigRational {
    rat((rho.to_f64() * 1e12).ceil() as i64 + 1, 1_000_000_000_000)
}

fn small_rational() -> impl Strategy<Value = BigRational> {
    (-40i64..=40, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn corrected_perturbation_bound_holds(
        a1 in small_rational(), a2 in small_rational(),
        t1 in -99i64..=99, t2 in -99i64..=99, e in 1i64..=50,
    ) {
        prop_assume!(a1 != a2);
        let (x1, x2) = (r(a1.clone()), r(a2.clone()));
        let eps2 = rat(e, 1000);
        let Ok(bound) = eps_bound_from_delta_corrected(&x1, &x2, &eps2) else { return Ok(()); };
        let d1 = &eps2 * rat(t1, 100);
        let d2 = &eps2 * rat(t2, 100);
        let a = MCRSGroup::from_slopes(&x1, &x2).unwrap();
        let b = MCRSGroup::from_slopes(&r(a1 + d1), &r(a2 + d2)).unwrap();
        let rho = discrepancy(&a, &b).unwrap();
        prop_assert!(rho.squared < bound.square());
    }

    /// Any candidate within eps has one line in each slope interval.
    #[test]
    fn slope_radius_is_sound(
        a1 in small_rational(), a2 in small_rational(),
        p1 in -60i64..=60, q1 in 1i64..=30, p2 in -60i64..=60, q2 in 1i64..=30,
    ) {
        prop_assume!(a1 != a2);
        let (x1, x2) = (r(a1.clone()), r(a2.clone()));
        let (b1, b2) = (rat(p1, q1), rat(p2, q2));
        prop_assume!(b1 != b2);
        let a = MCRSGroup::from_slopes(&x1, &x2).unwrap();
        let b = MCRSGroup::from_slopes(&r(b1.clone()), &r(b2.clone())).unwrap();
        let rho = discrepancy(&a, &b).unwrap();
        let eps = eps_above(&rho);
        prop_assume!(r(&eps * &eps) >= rho.squared);
        let d = (&x1 - &x2).abs();
        let (Some(r1), Some(r2)) = (slope_radius(&x1, &d, &eps), slope_radius(&x2, &d, &eps)) else { return Ok(()); };
        let inside = |b: &BigRational, c: &Alg, rad: &Alg| (r(b.clone()) - c).abs() <= *rad;
        let direct = inside(&b1, &x1, &r1) && inside(&b2, &x2, &r2);
        let swapped = inside(&b2, &x1, &r1) && inside(&b1, &x2, &r2);
        prop_assert!(direct || swapped);
    }

    /// `|Φ(n, m)|/n² < f·|α₁ − m/n|` for `m/n` within `ε₃` of `α₁`.
    #[test]
    fn phi_bound_holds_near_fibonacci_slope(n in 1i64..=5000, shift in -3i64..=3, e3 in 1i64..=100) {
        let (a1, a2) = (theta(), -theta().inv().unwrap());
        let m = (a1.to_f64() * n as f64).round() as i64 + shift;
        let x = r(rat(m, n));
        let dist = (&a1 - &x).abs();
        let eps3 = r(rat(e3, 100));
        prop_assume!(dist < eps3);
        let f = phi_over_q2_bound(&a1, &a2, &eps3, Side::First).unwrap();
        let phi = md_form(&fibonacci()).unwrap().eval_int(&[n, m]).re.abs() / Alg::from_int(n * n);
        prop_assert!(phi < f * dist);
    }

    /// Every conjugate pair within eps lies in the Gaussian box.
    #[test]
    fn gaussian_radii_are_sound(
        zr in 1i64..=12, zi in 0i64..=12, wr in -12i64..=12, wi in -12i64..=12,
    ) {
        let Some(c) = Candidate::complex(GaussianInt::new(zr, zi), GaussianInt::new(wr, wi)) else { return Ok(()); };
        let target = complex_group();
        let rho = discrepancy(&target, &c.group().unwrap()).unwrap();
        let eps = eps_above(&rho);
        prop_assume!(r(&eps * &eps) >= rho.squared);
        let h = parse_real("sqrt 2").unwrap() / Alg::from_int(2);
        let Some((ra, rb)) = gaussian_radii(&h, &h, &eps) else { return Ok(()); };
        let Candidate::Complex(z1, z2) = c else { unreachable!() };
        // a + Ib = z2/z1
        let n1 = z1.norm() as i64;
        let re = z2.re * z1.re + z2.im * z1.im;
        let im = z2.im * z1.re - z2.re * z1.im;
        let (a, b) = (r(rat(re, n1)), r(rat(im, n1)));
        prop_assert!((a - &h).abs() <= ra);
        prop_assert!((b - &h).abs() <= rb);
    }
}

/// Certified search against the exhaustive oracle for every N up to 40.
fn oracle_equivalence(target: &MCRSGroup, n_max: i64) {
    let sweep = brute_force_sweep(target, n_max, DEFAULT_ORACLE_CAP).unwrap();
    let mut last: Option<Alg> = None;
    for oracle in &sweep {
        let res = best_approx(&query(target, oracle.n)).unwrap();
        assert_eq!(res.rho.squared, oracle.rho.squared, "N = {}", oracle.n);
        assert_eq!(res.minimizers, oracle.minimizers, "N = {}", oracle.n);
        for c in &res.minimizers {
            assert!(c.size().norm_sq() <= (oracle.n * oracle.n) as i128);
        }
        if let Some(prev) = &last {
            assert!(res.rho.squared <= *prev);
        }
        last = Some(res.rho.squared);
    }
}

#[test]
fn oracle_equivalence_fibonacci() {
    oracle_equivalence(&fibonacci(), 40);
}

#[test]
fn oracle_equivalence_sqrt2() {
    oracle_equivalence(&sqrt2_group(), 40);
}

#[test]
fn oracle_equivalence_antisail() {
    oracle_equivalence(&antisail(), 40);
}

#[test]
fn oracle_equivalence_complex_pair() {
    oracle_equivalence(&complex_group(), 40);
}

#[test]
fn oracle_equivalence_rotation() {
    oracle_equivalence(&rotation(), 12);
}

#[test]
fn lagrange_windows_are_bounded() {
    let ns = [10, 100, 1000, 10_000];
    for target in [fibonacci(), sqrt2_group(), complex_group()] {
        let rep = lagrange_sweep(&target, &ns).unwrap();
        let (lo, hi) = rep.window.unwrap();
        assert!(lo > 0.0 && hi < 10.0 && hi / lo < 20.0, "{target}: {lo} {hi}");
    }
    let rep = lagrange_sweep(&antisail(), &[1, 3, 10]).unwrap();
    assert!(rep.degenerate());
    assert!(rep.records[2].rho.is_zero());
}

/// `α₁ = [1; 1, 1, 2, 5, 27, 734, 538783]`: each partial quotient is the
/// previous denominator. At `N_k = (n_k + n_{k+1})/2` the error decays no
/// faster than `N^{-3/2}`.
#[test]
fn fast_growing_quotients_slow_the_rate() {
    let terms = [1i64, 1, 1, 2, 5, 27, 734, 538783];
    let mut x = rat(terms[terms.len() - 1], 1);
    for &t in terms[..terms.len() - 1].iter().rev() {
        x = rat(t, 1) + rat(1, 1) / x;
    }
    let target = MCRSGroup::from_slopes(&r(x), &Alg::zero()).unwrap();
    let ns = [3i64, 16, 380, 269_758];
    let rep = lagrange_sweep(&target, &ns).unwrap();
    let scaled: Vec<f64> = rep.records.iter().map(|r| r.rho.to_f64() * (r.n as f64).powf(1.5)).collect();
    let lo = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(lo > 0.1, "{scaled:?}");
    // Far from the quadratic rate: rho N^2 grows along the sequence.
    let sq: Vec<f64> = rep.records.iter().map(|r| r.scaled).collect();
    assert!(sq[3] > 50.0 * sq[0], "{sq:?}");
    let slope = rate_exponent(&rep.records.iter().map(|r| (r.n, r.rho.to_f64())).collect::<Vec<_>>()).unwrap();
    assert!(slope > -1.6, "{slope}");
}

#[test]
fn antisail_minimizers_sit_off_the_sail() {
    let res = best_approx_hyperbolic(&query(&antisail(), 1)).unwrap();
    let levels = sail_level_of_result(&res).unwrap();
    let found: Vec<[u64; 2]> = levels.iter().map(|l| l.1).collect();
    assert_eq!(found, vec![[3, 5], [3, 2], [8, 5], [5, 2]]);
    // Cross-check each level by peeling.
    let cs = cones(&antisail()).unwrap();
    for (c, ks) in &levels {
        let Candidate::Real(vs) = c else { unreachable!() };
        for (v, &k) in vs.iter().zip(ks) {
            let cone = cs.iter().find(|c| c.contains(*v)).unwrap();
            let on = |k: u32| k_sail(cone, k, 40).map(|s| s.lattice_points().contains(v)).unwrap_or(false);
            assert!(on(k as u32), "{v:?} at {k}");
            assert!((1..k as u32).all(|j| !on(j)), "{v:?} below {k}");
        }
    }
}

#[test]
fn certificates_serialize() {
    let res = best_approx_hyperbolic(&query(&fibonacci(), 100)).unwrap();
    let j = res.to_json();
    assert_eq!(j["schema"], "mcrs-approx/1");
    assert_eq!(j["certificate"]["confinement"]["kind"], "slope-intervals");
    assert!(j["certificate"]["bound_chain"]["delta_bounds"].is_array());
    let res = best_approx_complex(&query(&complex_group(), 100)).unwrap();
    assert_eq!(res.to_json()["certificate"]["confinement"]["kind"], "gaussian-box");
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let run = |t: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
        pool.install(|| {
            let a = best_approx(&query(&fibonacci(), 5000)).unwrap().to_json();
            let b = best_approx(&query(&complex_group(), 300)).unwrap().to_json();
            serde_json::to_string(&(a, b)).unwrap()
        })
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(8));
}
