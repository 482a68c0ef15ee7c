use std::str::FromStr;

use ddfloat::{Cdd, Dd, C64};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rssynth::{
    enumerate_u_candidates, euler_matrix, euler_zxz, exact_synthesize, grid_points_1d,
    solve_norm_equation, synthesize, synthesize_axis, word_to_matrix, Axis, CacheEntry, Gate,
    GateWord, Interval, SynthCache, SynthesisRequest,
};
use zrings::{DOmega, UnitaryDOmega, ZOmega, ZRootTwo};

fn dd(x: f64) -> Dd {
    Dd::from_f64(x)
}

fn rz_cdd(theta: f64) -> [[Cdd; 2]; 2] {
    let half = dd(theta) / dd(2.0);
    let (s, c) = half.sin_cos();
    [
        [Cdd { re: c, im: -s }, Cdd { re: Dd::ZERO, im: Dd::ZERO }],
        [Cdd { re: Dd::ZERO, im: Dd::ZERO }, Cdd { re: c, im: s }],
    ]
}

/// Operator-norm distance between the word's matrix and R_z(theta), at
/// double-double precision.
fn word_rz_error(w: &GateWord, theta: f64) -> f64 {
    let m = word_to_matrix(w).to_cdd();
    let r = rz_cdd(theta);
    let mut diff = [[Cdd { re: Dd::ZERO, im: Dd::ZERO }; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            diff[i][j] = m[i][j] - r[i][j];
        }
    }
    ddfloat::opnorm_2x2(diff).to_f64()
}

#[test]
fn empty_word_is_identity() {
    assert_eq!(word_to_matrix(&GateWord::empty()), UnitaryDOmega::identity());
}

#[test]
fn t_word_is_omega_diagonal() {
    let m = word_to_matrix(&GateWord::from_str("T").unwrap());
    assert_eq!(m.e00, DOmega::one());
    assert_eq!(m.e11, DOmega::from_zomega(ZOmega::omega_pow(1)));
    assert!(m.e01.is_zero() && m.e10.is_zero());
    assert_eq!(m.w, 0);
}

#[test]
fn hh_is_identity() {
    let m = word_to_matrix(&GateWord::from_str("HH").unwrap());
    assert_eq!(m, UnitaryDOmega::identity());
}

#[test]
fn word_order_is_leftmost_first() {
    // "HT" means H applied first, so the matrix is T * H.
    let m = word_to_matrix(&GateWord::from_str("HT").unwrap());
    let h = word_to_matrix(&GateWord::from_str("H").unwrap());
    let t = word_to_matrix(&GateWord::from_str("T").unwrap());
    assert_eq!(m, &t * &h);
}

#[test]
fn exact_synthesis_of_identity() {
    let w = exact_synthesize(&UnitaryDOmega::identity()).unwrap();
    assert_eq!(word_to_matrix(&w), UnitaryDOmega::identity());
    assert_eq!(w.t_count(), 0);
}

#[test]
fn exact_synthesis_of_t() {
    let t = word_to_matrix(&GateWord::from_str("T").unwrap());
    let w = exact_synthesize(&t).unwrap();
    assert_eq!(word_to_matrix(&w), t);
    assert_eq!(w.t_count(), 1);
}

#[test]
fn exact_synthesis_rejects_non_unitary() {
    let bad = UnitaryDOmega::new(DOmega::one(), DOmega::one(), DOmega::zero(), DOmega::one(), 0);
    assert!(exact_synthesize(&bad).is_err());
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> GateWord {
    let len = rng.gen_range(0..=max_len);
    let letters = [Gate::H, Gate::S, Gate::T, Gate::X, Gate::W];
    GateWord((0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect())
}

#[test]
fn exact_synthesis_round_trips_500_random_words() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let w = random_word(&mut rng, 200);
        let m = word_to_matrix(&w);
        let back = exact_synthesize(&m).unwrap();
        assert_eq!(word_to_matrix(&back), m, "round trip failed for {:?}", w);
        assert!(
            back.t_count() <= w.t_count() + 8,
            "T-count blowup: {} -> {}",
            w.t_count(),
            back.t_count()
        );
    }
}

fn brute_grid(i: Interval, j: Interval, bound: i64) -> Vec<ZRootTwo> {
    let mut out = Vec::new();
    for p in -bound..=bound {
        for q in -bound..=bound {
            let a = ZRootTwo::new(p, q);
            if i.contains(a.to_dd()) && j.contains(a.conj().to_dd()) {
                out.push(a);
            }
        }
    }
    out.sort();
    out
}

#[test]
fn grid_points_unit_box_gives_zero() {
    let i = Interval::new(dd(-0.5), dd(0.5));
    let pts = grid_points_1d(i, i);
    assert_eq!(pts, vec![ZRootTwo::zero()]);
}

#[test]
fn grid_points_match_brute_force_small_box() {
    let i = Interval::new(dd(0.0), dd(3.0));
    let j = Interval::new(dd(-3.0), dd(3.0));
    assert_eq!(grid_points_1d(i, j), brute_grid(i, j, 10));
}

#[test]
fn grid_points_narrow_interval_far_from_origin() {
    let i = Interval::new(dd(1.0e6), dd(1.0e6) + dd(1.0e-6));
    let j = Interval::new(dd(-1.0), dd(1.0));
    // Oracle: q is pinned to a narrow derived range, enumerate it directly.
    let s2 = Dd::SQRT_2;
    let q_lo = ((i.lo - j.hi) / (dd(2.0) * s2)).floor().to_f64() as i64 - 1;
    let q_hi = ((i.hi - j.lo) / (dd(2.0) * s2)).ceil().to_f64() as i64 + 1;
    let mut oracle = Vec::new();
    for q in q_lo..=q_hi {
        let lo = (i.lo - Dd::from_i64(q) * s2).ceil().to_f64() as i64 - 1;
        let hi = (i.hi - Dd::from_i64(q) * s2).floor().to_f64() as i64 + 1;
        for p in lo..=hi {
            let a = ZRootTwo::new(p, q);
            if i.contains(a.to_dd()) && j.contains(a.conj().to_dd()) {
                oracle.push(a);
            }
        }
    }
    oracle.sort();
    assert_eq!(grid_points_1d(i, j), oracle);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn grid_points_match_brute_force_random(
        a in -8.0f64..8.0, w1 in 0.01f64..4.0,
        b in -8.0f64..8.0, w2 in 0.01f64..4.0,
    ) {
        let i = Interval::new(dd(a), dd(a + w1));
        let j = Interval::new(dd(b), dd(b + w2));
        prop_assert_eq!(grid_points_1d(i, j), brute_grid(i, j, 16));
    }
}

fn brute_candidates(theta: f64, eps: Dd, k: u32) -> Vec<DOmega> {
    // Coefficients of any valid z are bounded by 2*sqrt2^k via |z|, |z'| <= sqrt2^k.
    let bound = (2.0 * 2f64.powf(k as f64 / 2.0)).ceil() as i64 + 1;
    let half = dd(theta) / dd(2.0);
    let (s, c) = half.sin_cos();
    let scale = Dd::SQRT_2.powi(k as i32);
    let two_k = ZRootTwo::new(BigInt::from(1) << k, 0);
    let mut out = Vec::new();
    for a in -bound..=bound {
        for b in -bound..=bound {
            for cc in -bound..=bound {
                for d in -bound..=bound {
                    let z = ZOmega::new(a, b, cc, d);
                    let zz = (&z * &z.conj()).to_zroottwo().unwrap();
                    let slack = &two_k - &zz;
                    if slack.signum() < 0 || slack.conj().signum() < 0 {
                        continue;
                    }
                    let u = z.to_cdd();
                    let ur = u.re / scale;
                    let ui = u.im / scale;
                    let dr = ur - c;
                    let di = ui + s;
                    let err2 = dr * dr + di * di + Dd::ONE - (ur * ur + ui * ui);
                    if err2 > eps * eps {
                        continue;
                    }
                    out.push(DOmega::new(z, k));
                }
            }
        }
    }
    out
}

#[test]
fn candidates_contain_one_at_theta_zero() {
    let got = enumerate_u_candidates(0.0, dd(0.1), 0);
    assert!(got.contains(&DOmega::one()));
}

#[test]
fn candidates_contain_exact_quarter_turn_value() {
    // e^(-i pi/4) = omega^(-1) is exactly representable at k = 0.
    let got = enumerate_u_candidates(std::f64::consts::FRAC_PI_2, dd(0.2), 0);
    assert!(got.contains(&DOmega::from_zomega(ZOmega::omega_pow(-1))));
}

#[test]
fn candidates_match_brute_force_small_k() {
    let theta = 0.3;
    let eps = dd(0.05);
    for k in 0..=6u32 {
        let mut got = enumerate_u_candidates(theta, eps, k);
        let mut want = brute_candidates(theta, eps, k);
        got.sort_by_key(|u| format!("{:?}", u));
        want.sort_by_key(|u| format!("{:?}", u));
        want.dedup();
        assert_eq!(got, want, "mismatch at k = {}", k);
    }
}

#[test]
fn norm_equation_trivial_cases() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let t = solve_norm_equation(&ZRootTwo::one(), &mut rng).unwrap();
    assert_eq!(&t * &t.conj(), ZOmega::one());
    let t = solve_norm_equation(&ZRootTwo::new(2, 0), &mut rng).unwrap();
    assert_eq!((&t * &t.conj()).to_zroottwo().unwrap(), ZRootTwo::new(2, 0));
}

fn brute_norm_solution(xi: &ZRootTwo, bound: i64) -> Option<ZOmega> {
    for a in -bound..=bound {
        for b in -bound..=bound {
            for c in -bound..=bound {
                for d in -bound..=bound {
                    let t = ZOmega::new(a, b, c, d);
                    if (&t * &t.conj()).to_zroottwo().as_ref() == Some(xi) {
                        return Some(t);
                    }
                }
            }
        }
    }
    None
}

#[test]
fn norm_equation_split_prime_case() {
    // 5 + 2*sqrt2 has rational norm 17 = 1 mod 8 and is solvable.
    let xi = ZRootTwo::new(5, 2);
    assert!(brute_norm_solution(&xi, 3).is_some());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let t = solve_norm_equation(&xi, &mut rng).unwrap();
    assert_eq!((&t * &t.conj()).to_zroottwo().unwrap(), xi);
}

#[test]
fn norm_equation_inert_prime_is_unsolvable() {
    // 3 + sqrt2 has rational norm 7 = 7 mod 8; no t exists, and brute force
    // over the full coefficient ball (|t|^2 <= 3 + sqrt2 bounds each
    // coefficient well below 5) agrees.
    let xi = ZRootTwo::new(3, 1);
    assert!(brute_norm_solution(&xi, 5).is_none());
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    assert!(solve_norm_equation(&xi, &mut rng).is_err());
}

#[test]
fn norm_equation_rejects_negative() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    assert!(solve_norm_equation(&ZRootTwo::new(-1, 0), &mut rng).is_err());
    // 1 - sqrt2 is negative in the embedding.
    assert!(solve_norm_equation(&ZRootTwo::new(1, -1), &mut rng).is_err());
}

#[test]
fn norm_equation_solves_constructed_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..200 {
        let t0 = ZOmega::new(
            rng.gen_range(-20i64..=20),
            rng.gen_range(-20i64..=20),
            rng.gen_range(-20i64..=20),
            rng.gen_range(-20i64..=20),
        );
        if t0.is_zero() {
            continue;
        }
        let xi = (&t0 * &t0.conj()).to_zroottwo().unwrap();
        let t = solve_norm_equation(&xi, &mut rng)
            .unwrap_or_else(|e| panic!("trial {}: {:?} unsolved: {}", trial, xi, e));
        assert_eq!((&t * &t.conj()).to_zroottwo().unwrap(), xi);
    }
}

#[test]
fn synthesize_quarter_turns_need_no_t_gates() {
    for (theta, d) in [
        (std::f64::consts::FRAC_PI_2, 4),
        (-std::f64::consts::FRAC_PI_2, 6),
        (std::f64::consts::PI, 8),
        (0.0, 3),
    ] {
        let res = synthesize(SynthesisRequest { theta, digits: d }, 0).unwrap();
        assert_eq!(res.t_count, 0, "theta = {}", theta);
        // The f64 angle itself carries ~1e-16 of quantization.
        assert!(word_rz_error(&res.word, theta) < 1e-15);
    }
}

#[test]
fn synthesize_zero_angle_is_empty_word() {
    let res = synthesize(SynthesisRequest { theta: 0.0, digits: 5 }, 0).unwrap();
    assert!(res.word.is_empty());
}

#[test]
fn synthesize_half_pi_matches_reference_words() {
    let plus = synthesize(SynthesisRequest { theta: std::f64::consts::FRAC_PI_2, digits: 4 }, 0)
        .unwrap();
    assert_eq!(
        word_to_matrix(&plus.word),
        word_to_matrix(&GateWord::from_str("SWWWWWWW").unwrap())
    );
    let minus = synthesize(SynthesisRequest { theta: -std::f64::consts::FRAC_PI_2, digits: 4 }, 0)
        .unwrap();
    assert_eq!(
        word_to_matrix(&minus.word),
        word_to_matrix(&GateWord::from_str("SSSW").unwrap())
    );
}

#[test]
fn synthesize_generic_angle_d4() {
    let res = synthesize(SynthesisRequest { theta: 0.5, digits: 4 }, 11).unwrap();
    assert!(res.achieved_error <= 1e-4);
    assert!(word_rz_error(&res.word, 0.5) <= 1e-4);
    assert!(
        (25..=60).contains(&res.t_count),
        "t_count {} outside typical window",
        res.t_count
    );
}

#[test]
fn synthesize_is_sound_across_digits() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for d in 1..=6u32 {
        for _ in 0..3 {
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let res = synthesize(SynthesisRequest { theta, digits: d }, 42).unwrap();
            let err = word_rz_error(&res.word, theta);
            assert!(err <= 10f64.powi(-(d as i32)), "theta {} d {}: err {}", theta, d, err);
            assert!((res.achieved_error - err).abs() <= 1e-12 * (1.0 + err));
        }
    }
}

#[test]
fn synthesize_is_deterministic() {
    let req = SynthesisRequest { theta: 1.234, digits: 4 };
    let a = synthesize(req, 9).unwrap();
    let b = synthesize(req, 9).unwrap();
    assert_eq!(a.word, b.word);
    assert_eq!(a.k_final, b.k_final);
}

fn axis_matrix(axis: Axis, theta: f64) -> [[Cdd; 2]; 2] {
    let half = dd(theta) / dd(2.0);
    let (s, c) = half.sin_cos();
    let zero = Cdd { re: Dd::ZERO, im: Dd::ZERO };
    match axis {
        Axis::Z => rz_cdd(theta),
        Axis::X => [
            [Cdd { re: c, im: Dd::ZERO }, Cdd { re: Dd::ZERO, im: -s }],
            [Cdd { re: Dd::ZERO, im: -s }, Cdd { re: c, im: Dd::ZERO }],
        ],
        Axis::Y => [
            [Cdd { re: c, im: Dd::ZERO }, Cdd { re: -s, im: Dd::ZERO }],
            [Cdd { re: s, im: Dd::ZERO }, Cdd { re: c, im: Dd::ZERO }],
        ],
    }
    .map(|row| row.map(|e| e + zero))
}

fn word_axis_error(w: &GateWord, axis: Axis, theta: f64) -> f64 {
    let m = word_to_matrix(w).to_cdd();
    let r = axis_matrix(axis, theta);
    let mut diff = [[Cdd { re: Dd::ZERO, im: Dd::ZERO }; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            diff[i][j] = m[i][j] - r[i][j];
        }
    }
    ddfloat::opnorm_2x2(diff).to_f64()
}

#[test]
fn axis_x_wrapping() {
    let res = synthesize_axis(Axis::X, SynthesisRequest { theta: std::f64::consts::PI, digits: 4 }, 0)
        .unwrap();
    assert!(word_axis_error(&res.word, Axis::X, std::f64::consts::PI) <= 1e-4);
}

#[test]
fn axis_y_wrapping() {
    let res = synthesize_axis(Axis::Y, SynthesisRequest { theta: 0.7, digits: 5 }, 0).unwrap();
    assert!(word_axis_error(&res.word, Axis::Y, 0.7) <= 1e-5);
    // T-count unchanged by the Clifford conjugation.
    let z = synthesize(SynthesisRequest { theta: 0.7, digits: 5 }, 0).unwrap();
    assert_eq!(res.t_count, z.t_count);
}

fn c64_rz(theta: f64) -> [[C64; 2]; 2] {
    [
        [C64::new((theta / 2.0).cos(), -(theta / 2.0).sin()), C64::zero()],
        [C64::zero(), C64::new((theta / 2.0).cos(), (theta / 2.0).sin())],
    ]
}

#[test]
fn euler_of_pure_z_rotation() {
    let e = euler_zxz(c64_rz(0.3));
    assert!((e.theta1 + e.theta2 - 0.3).abs() < 1e-12);
    assert!(e.phi.abs() < 1e-12);
}

#[test]
fn euler_of_pure_x_rotation() {
    let t = std::f64::consts::FRAC_PI_2;
    let m = [
        [C64::new((t / 2.0).cos(), 0.0), C64::new(0.0, -(t / 2.0).sin())],
        [C64::new(0.0, -(t / 2.0).sin()), C64::new((t / 2.0).cos(), 0.0)],
    ];
    let e = euler_zxz(m);
    assert!(e.theta1.abs() < 1e-12 && e.theta2.abs() < 1e-12);
    assert!((e.phi - t).abs() < 1e-12);
}

#[test]
fn euler_reconstruction_matches_input() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..100 {
        let t1 = rng.gen_range(-3.0..3.0);
        let ph = rng.gen_range(0.01..3.1);
        let t2 = rng.gen_range(-3.0..3.0);
        let m = euler_matrix(&rssynth::EulerZXZ { theta1: t1, phi: ph, theta2: t2 });
        let e = euler_zxz(m);
        let back = euler_matrix(&e);
        for i in 0..2 {
            for j in 0..2 {
                let d = m[i][j] - back[i][j];
                assert!(d.abs() < 1e-9, "entry ({}, {}) differs", i, j);
            }
        }
    }
}

#[test]
fn euler_of_synthesized_word() {
    let res = synthesize(SynthesisRequest { theta: 1.1, digits: 6 }, 0).unwrap();
    let m = word_to_matrix(&res.word).to_cdd();
    let mc = m.map(|row| row.map(|e| e.to_c64()));
    let e = euler_zxz(mc);
    let sum = (e.theta1 + e.theta2).rem_euclid(std::f64::consts::TAU);
    let target = 1.1f64.rem_euclid(std::f64::consts::TAU);
    let circ = (sum - target).abs().min(std::f64::consts::TAU - (sum - target).abs());
    assert!(circ <= 1e-5, "angle sum off by {}", circ);
    assert!(e.phi.abs() <= 1e-5);
}

#[test]
fn cache_round_trips_through_disk() {
    let dir = std::env::temp_dir().join(format!("synthcache-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cache.txt");
    let _ = std::fs::remove_file(&path);
    {
        let cache = SynthCache::open(path.clone()).unwrap();
        cache.insert(
            0.5,
            4,
            CacheEntry {
                word: GateWord::from_str("HTHTS").unwrap(),
                achieved_error: 3.2e-5,
                t_count: 2,
            },
        );
        cache.insert(0.0, 3, CacheEntry { word: GateWord::empty(), achieved_error: 0.0, t_count: 0 });
    }
    let cache = SynthCache::open(path.clone()).unwrap();
    assert_eq!(cache.len(), 2);
    let e = cache.get(0.5, 4).unwrap();
    assert_eq!(e.word, GateWord::from_str("HTHTS").unwrap());
    assert_eq!(e.t_count, 2);
    assert!(cache.get(0.0, 3).unwrap().word.is_empty());
    let _ = std::fs::remove_file(&path);
}
