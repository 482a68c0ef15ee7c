use ddfloat::{Cdd, Dd};
use num_bigint::BigInt;
use proptest::prelude::*;
use zrings::{DOmega, UnitaryDOmega, ZOmega, ZRootTwo};

fn zomega(a: i64, b: i64, c: i64, d: i64) -> ZOmega {
    ZOmega::new(a, b, c, d)
}

fn cdd_close(x: Cdd, y: Cdd, tol: f64) -> bool {
    let d = x - y;
    (d.re.to_f64().powi(2) + d.im.to_f64().powi(2)).sqrt() <= tol
}

#[test]
fn omega_power_relations() {
    let w = ZOmega::omega_pow(1);
    let mut p = ZOmega::one();
    for _ in 0..4 {
        p = &p * &w;
    }
    assert_eq!(p, -ZOmega::one());
    for _ in 0..4 {
        p = &p * &w;
    }
    assert_eq!(p, ZOmega::one());
    assert_eq!(ZOmega::omega_pow(-1), ZOmega::omega_pow(7));
}

#[test]
fn sqrt2_squares_to_two() {
    let s = ZOmega::sqrt2();
    assert_eq!(&s * &s, zomega(2, 0, 0, 0));
    assert!(s.to_zroottwo().is_some());
    assert_eq!(s.to_zroottwo().unwrap(), ZRootTwo::new(0, 1));
}

#[test]
fn sqrt2_division_round_trip() {
    let z = zomega(3, 5, 7, 1);
    let zs = &z * &ZOmega::sqrt2();
    assert!(zs.divisible_by_sqrt2());
    assert_eq!(zs.div_sqrt2(), z);
    assert!(!zomega(1, 0, 0, 0).divisible_by_sqrt2());
}

#[test]
fn conjugation_is_involutive_and_multiplicative() {
    let x = zomega(2, -3, 5, 7);
    let y = zomega(-1, 4, 0, 2);
    assert_eq!(x.conj().conj(), x);
    assert_eq!(x.conj2().conj2(), x);
    assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
    assert_eq!((&x * &y).conj2(), &x.conj2() * &y.conj2());
}

#[test]
fn gcd_of_two_and_sqrt2() {
    let g = zomega(2, 0, 0, 0).gcd(&ZOmega::sqrt2()).unwrap();
    // gcd(2, sqrt2) is sqrt2 up to a unit: its norm is 4.
    assert_eq!(g.norm(), BigInt::from(4));
}

#[test]
fn gcd_recovers_common_factor() {
    let g = zomega(3, 1, -2, 0);
    let x = &g * &zomega(5, -1, 0, 2);
    let y = &g * &zomega(0, 3, 1, 1);
    let got = x.gcd(&y).unwrap();
    assert!(got.div_exact(&g).is_some());
    assert!(x.div_exact(&got).is_some());
    assert!(y.div_exact(&got).is_some());
}

#[test]
fn zroottwo_sign_cases() {
    assert_eq!(ZRootTwo::new(3, -2).signum(), 1); // 3 - 2.83 > 0
    assert_eq!(ZRootTwo::new(-3, 2).signum(), -1);
    assert_eq!(ZRootTwo::new(1, -1).signum(), -1); // 1 - 1.41 < 0
    assert_eq!(ZRootTwo::new(0, 0).signum(), 0);
    assert_eq!(ZRootTwo::new(0, -5).signum(), -1);
    assert_eq!(ZRootTwo::lambda().signum(), 1);
    assert_eq!(ZRootTwo::lambda_inv().signum(), 1);
}

#[test]
fn lambda_times_inverse_is_one() {
    assert!((&ZRootTwo::lambda() * &ZRootTwo::lambda_inv()).is_one());
    assert_eq!(ZRootTwo::lambda().norm(), BigInt::from(-1));
}

#[test]
fn domega_canonical_form_is_minimal() {
    let v = DOmega::new(&zomega(2, 0, 2, 0) * &ZOmega::one(), 3);
    // 2 + 2 w^2 = sqrt2 * (1 + w + w^2 - w^3)... canonicalization strips
    // every sqrt2 factor it can.
    assert!(v.sde() == 0 || !v.numer().divisible_by_sqrt2());
    let w = DOmega::new(zomega(1, 0, 0, 0), 2);
    assert_eq!(w.sde(), 2);
}

#[test]
fn domega_zero_has_sde_zero() {
    assert_eq!(DOmega::new(ZOmega::zero(), 5).sde(), 0);
}

fn h_gate() -> UnitaryDOmega {
    let one = DOmega::new(ZOmega::one(), 1);
    UnitaryDOmega::new(one.clone(), one.clone(), one.clone(), -&one, 0)
}

fn t_gate() -> UnitaryDOmega {
    UnitaryDOmega::new(
        DOmega::one(),
        DOmega::zero(),
        DOmega::zero(),
        DOmega::from_zomega(ZOmega::omega_pow(1)),
        0,
    )
}

fn s_gate() -> UnitaryDOmega {
    &t_gate() * &t_gate()
}

fn x_gate() -> UnitaryDOmega {
    UnitaryDOmega::new(DOmega::zero(), DOmega::one(), DOmega::one(), DOmega::zero(), 0)
}

#[test]
fn generator_matrices_are_unitary() {
    for m in [h_gate(), s_gate(), t_gate(), x_gate()] {
        assert!(m.is_unitary());
        let inv = m.dagger();
        assert_eq!(&inv * &m, UnitaryDOmega::identity());
    }
}

#[test]
fn hadamard_squares_to_identity() {
    assert_eq!(&h_gate() * &h_gate(), UnitaryDOmega::identity());
}

#[test]
fn t_to_the_eighth_is_identity() {
    let mut m = UnitaryDOmega::identity();
    for _ in 0..8 {
        m = &m * &t_gate();
    }
    assert_eq!(m, UnitaryDOmega::identity());
}

#[test]
fn embedding_matches_omega_arithmetic() {
    let z = zomega(3, -2, 5, 7);
    let c = z.to_cdd();
    let inv = 1.0 / 2.0_f64.sqrt();
    let re = 3.0 + (-2.0 - 7.0) * inv;
    let im = 5.0 + (-2.0 + 7.0) * inv;
    assert!((c.re.to_f64() - re).abs() < 1e-14);
    assert!((c.im.to_f64() - im).abs() < 1e-14);
}

fn small_zomega() -> impl Strategy<Value = ZOmega> {
    (-50i64..=50, -50i64..=50, -50i64..=50, -50i64..=50)
        .prop_map(|(a, b, c, d)| zomega(a, b, c, d))
}

fn small_zrt() -> impl Strategy<Value = ZRootTwo> {
    (-50i64..=50, -50i64..=50).prop_map(|(p, q)| ZRootTwo::new(p, q))
}

proptest! {
    #[test]
    fn zomega_mul_commutes_and_associates(x in small_zomega(), y in small_zomega(), z in small_zomega()) {
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
    }

    #[test]
    fn zomega_norm_is_multiplicative(x in small_zomega(), y in small_zomega()) {
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn zomega_embedding_is_a_homomorphism(x in small_zomega(), y in small_zomega()) {
        let lhs = (&x * &y).to_cdd();
        let rhs = x.to_cdd() * y.to_cdd();
        prop_assert!(cdd_close(lhs, rhs, 1e-8));
    }

    #[test]
    fn zomega_exact_division_round_trips(x in small_zomega(), y in small_zomega()) {
        prop_assume!(!y.is_zero());
        let q = (&x * &y).div_exact(&y).unwrap();
        prop_assert_eq!(q, x);
    }

    #[test]
    fn zomega_euclidean_remainder_shrinks(x in small_zomega(), y in small_zomega()) {
        prop_assume!(!y.is_zero());
        let q = x.div_round(&y).unwrap();
        let r = &x - &(&q * &y);
        prop_assert!(r.norm() < y.norm());
    }

    #[test]
    fn zomega_gcd_divides_both(x in small_zomega(), y in small_zomega()) {
        prop_assume!(!x.is_zero() || !y.is_zero());
        let g = x.gcd(&y).unwrap();
        prop_assert!(x.div_exact(&g).is_some());
        prop_assert!(y.div_exact(&g).is_some());
    }

    #[test]
    fn zroottwo_norm_is_multiplicative(x in small_zrt(), y in small_zrt()) {
        prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn zroottwo_sign_matches_embedding(x in small_zrt()) {
        let f = x.to_dd().to_f64();
        if f.abs() > 1e-9 {
            prop_assert_eq!(x.signum(), if f > 0.0 { 1 } else { -1 });
        }
    }

    #[test]
    fn zroottwo_gcd_divides_both(x in small_zrt(), y in small_zrt()) {
        prop_assume!(!x.is_zero() || !y.is_zero());
        let g = x.gcd(&y).unwrap();
        prop_assert!(x.div_exact(&g).is_some());
        prop_assert!(y.div_exact(&g).is_some());
    }

    #[test]
    fn domega_sde_is_subadditive(x in small_zomega(), y in small_zomega(), j in 0u32..6, k in 0u32..6) {
        let u = DOmega::new(x, j);
        let v = DOmega::new(y, k);
        let p = &u * &v;
        prop_assert!(p.sde() <= u.sde() + v.sde());
    }

    #[test]
    fn domega_arithmetic_matches_embedding(x in small_zomega(), y in small_zomega(), j in 0u32..4, k in 0u32..4) {
        let u = DOmega::new(x, j);
        let v = DOmega::new(y, k);
        prop_assert!(cdd_close((&u + &v).to_cdd(), u.to_cdd() + v.to_cdd(), 1e-8));
        prop_assert!(cdd_close((&u * &v).to_cdd(), u.to_cdd() * v.to_cdd(), 1e-8));
    }

    #[test]
    fn domega_conj2_matches_embedding_on_reals(p in -50i64..=50, q in -50i64..=50, k in 0u32..4) {
        // sqrt2-conjugation negates the sqrt2 part of the embedded value.
        let z = ZOmega::from_zroottwo(&ZRootTwo::new(p, q));
        let v = DOmega::new(z, k);
        let got = v.conj2().to_cdd().re.to_f64();
        let kf = 2.0_f64.powf(-(v.sde() as f64) / 2.0);
        // Recover p', q' at the canonical level and flip q'.
        let zz = v.numer().to_zroottwo().unwrap();
        let want = (BigIntF(&zz.p).f() - BigIntF(&zz.q).f() * 2.0_f64.sqrt()) * kf
            * if v.sde() % 2 == 1 { -1.0 } else { 1.0 };
        prop_assert!((got - want).abs() < 1e-6 * (1.0 + want.abs()));
    }
}

struct BigIntF<'a>(&'a BigInt);
impl BigIntF<'_> {
    fn f(&self) -> f64 {
        Dd::from_bigint(self.0).to_f64()
    }
}
