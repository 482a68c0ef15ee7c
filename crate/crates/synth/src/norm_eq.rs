use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use rand_chacha::ChaCha8Rng;
use zrings::{ZOmega, ZRootTwo};

use crate::SynthError;

const TRIAL_DIVISION_BOUND: u64 = 100_000;
const FACTOR_ATTEMPT_BUDGET: u32 = 8;

/// Solves t * conj(t) = xi over Z[omega] for doubly nonnegative xi.
/// Sound but incomplete: success is verified exactly, failure makes no
/// unsolvability claim (the factoring budget may simply run out).
pub fn solve_norm_equation(xi: &ZRootTwo, rng: &mut ChaCha8Rng) -> Result<ZOmega, SynthError> {
    if xi.signum() < 0 || xi.conj().signum() < 0 {
        return Err(SynthError::NormEqPrecondition);
    }
    if xi.is_zero() {
        return Ok(ZOmega::zero());
    }

    // Strip sqrt2 factors first; delta = 1 + omega has delta*conj(delta)
    // = sqrt2 * lambda, with the stray lambdas absorbed by the final unit fix.
    let mut rem = xi.clone();
    let sqrt2 = ZRootTwo::new(0, 1);
    let delta = ZOmega::new(1, 1, 0, 0);
    let mut t = ZOmega::one();
    while rem.p.is_even() {
        match rem.div_exact(&sqrt2) {
            Some(q) => {
                rem = q;
                t = &t * &delta;
            }
            None => break,
        }
    }

    // Stripping sqrt2 flips the conjugate's sign, so only |N(rem)| is
    // meaningful from here on.
    let n = rem.norm();
    let factors = factor(n.magnitude().clone(), rng).ok_or(SynthError::NormEqFailure)?;

    for (p, e) in factors {
        let p_int = BigInt::from(p.clone());
        let pm8 = (&p % 8u32).to_u32().unwrap();
        if pm8 == 1 || pm8 == 7 {
            // p splits in Z[sqrt2]: pi = gcd(p, h - sqrt2) with h^2 = 2 mod p.
            let h = sqrt_mod(&BigUint::from(2u32), &p, rng).ok_or(SynthError::NormEqFailure)?;
            let pi = ZRootTwo::new(BigInt::from(h), -1)
                .gcd(&ZRootTwo::new(p_int.clone(), 0))
                .map_err(|_| SynthError::NormEqFailure)?;
            for piv in [pi.clone(), pi.conj()] {
                let mut f = 0u32;
                while let Some(q) = rem.div_exact(&piv) {
                    rem = q;
                    f += 1;
                }
                if f == 0 {
                    continue;
                }
                if pm8 == 1 {
                    // pi splits further: s = gcd(pi, h' - omega^2), h'^2 = -1.
                    let h2 = sqrt_mod(&(&p - 1u32), &p, rng).ok_or(SynthError::NormEqFailure)?;
                    let s = ZOmega::from_zroottwo(&piv)
                        .gcd(&(&ZOmega::new(BigInt::from(h2), 0, 0, 0) - &ZOmega::new(0, 0, 1, 0)))
                        .map_err(|_| SynthError::NormEqFailure)?;
                    for _ in 0..f {
                        t = &t * &s;
                    }
                } else {
                    // p = 7 mod 8: pi is inert in Z[omega], needs even power.
                    if f % 2 == 1 {
                        return Err(SynthError::NormEqFailure);
                    }
                    let piw = ZOmega::from_zroottwo(&piv);
                    for _ in 0..f / 2 {
                        t = &t * &piw;
                    }
                }
            }
        } else {
            // p = 3 or 5 mod 8: inert in Z[sqrt2]; its multiplicity in the
            // norm is even, with p^(e/2) dividing xi.
            if e % 2 == 1 {
                return Err(SynthError::NormEqFailure);
            }
            let pr = ZRootTwo::new(p_int.clone(), 0);
            let mut f = 0u32;
            while let Some(q) = rem.div_exact(&pr) {
                rem = q;
                f += 1;
            }
            // s*conj(s) is an associate of p via a split in Z[omega].
            let s = if pm8 == 5 {
                // -1 is a square mod p.
                let h = sqrt_mod(&(&p - 1u32), &p, rng).ok_or(SynthError::NormEqFailure)?;
                ZOmega::new(p_int.clone(), 0, 0, 0)
                    .gcd(&(&ZOmega::new(BigInt::from(h), 0, 0, 0) - &ZOmega::new(0, 0, 1, 0)))
                    .map_err(|_| SynthError::NormEqFailure)?
            } else {
                // p = 3 mod 8: -2 is a square mod p; omega + omega^3 squares to -2.
                let h = sqrt_mod(&(&p - 2u32), &p, rng).ok_or(SynthError::NormEqFailure)?;
                ZOmega::new(p_int.clone(), 0, 0, 0)
                    .gcd(&(&ZOmega::new(BigInt::from(h), 0, 0, 0) - &ZOmega::new(0, 1, 0, 1)))
                    .map_err(|_| SynthError::NormEqFailure)?
            };
            for _ in 0..f {
                t = &t * &s;
            }
        }
    }

    // Unit correction: xi / (t*conj(t)) is a doubly positive unit lambda^(2m).
    let tt = (&t * &t.conj()).to_zroottwo().ok_or(SynthError::NormEqFailure)?;
    let mut u = xi.div_exact(&tt).ok_or(SynthError::NormEqFailure)?;
    if u.norm().magnitude() != &BigUint::one() {
        return Err(SynthError::NormEqFailure);
    }
    let lambda = ZRootTwo::lambda();
    let lambda_inv = ZRootTwo::lambda_inv();
    let mut m: i64 = 0;
    let mut guard = 0;
    while !u.is_one() {
        if u.to_dd().to_f64().abs() > 1.0 {
            u = u.div_exact(&lambda).ok_or(SynthError::NormEqFailure)?;
            m += 1;
        } else {
            u = &u * &lambda;
            m -= 1;
        }
        guard += 1;
        if guard > 4096 {
            return Err(SynthError::NormEqFailure);
        }
    }
    if m % 2 != 0 {
        return Err(SynthError::NormEqFailure);
    }
    let half = if m >= 0 { lambda } else { lambda_inv };
    let hw = ZOmega::from_zroottwo(&half);
    for _ in 0..(m.unsigned_abs() / 2) {
        t = &t * &hw;
    }

    // Exact verification; returning an unchecked t is never allowed.
    if (&t * &t.conj()).to_zroottwo().as_ref() == Some(xi) {
        Ok(t)
    } else {
        Err(SynthError::NormEqFailure)
    }
}

/// Factors n into primes; None when the budget runs out on a composite.
fn factor(mut n: BigUint, rng: &mut ChaCha8Rng) -> Option<Vec<(BigUint, u32)>> {
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    if n.is_zero() {
        return None;
    }
    let push = |p: BigUint, e: u32, out: &mut Vec<(BigUint, u32)>| {
        if let Some(slot) = out.iter_mut().find(|(q, _)| *q == p) {
            slot.1 += e;
        } else {
            out.push((p, e));
        }
    };
    let mut d = 2u64;
    while d < TRIAL_DIVISION_BOUND && BigUint::from(d).pow(2) <= n {
        let bd = BigUint::from(d);
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            push(bd, e, &mut out);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n.is_one() {
        return Some(out);
    }
    // Remaining cofactor: recurse with Pollard rho (Brent variant).
    let mut stack = vec![n];
    let mut budget = FACTOR_ATTEMPT_BUDGET;
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_probable_prime(&m, rng) {
            push(m, 1, &mut out);
            continue;
        }
        let mut found = None;
        while budget > 0 {
            budget -= 1;
            if let Some(f) = pollard_brent(&m, rng) {
                found = Some(f);
                break;
            }
        }
        let f = found?;
        stack.push(&m / &f);
        stack.push(f);
    }
    Some(out)
}

fn is_probable_prime(n: &BigUint, rng: &mut ChaCha8Rng) -> bool {
    if *n < BigUint::from(2u32) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let bp = BigUint::from(p);
        if *n == bp {
            return true;
        }
        if (n % &bp).is_zero() {
            return false;
        }
    }
    let n1 = n - 1u32;
    let s = n1.trailing_zeros().unwrap();
    let d = &n1 >> s;
    'witness: for _ in 0..24 {
        let a = rng.gen_biguint_range(&BigUint::from(2u32), &n1);
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = x.modpow(&BigUint::from(2u32), n);
            if x == n1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &BigUint, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    let c = rng.gen_biguint_range(&one, n);
    let mut y = rng.gen_biguint_range(&one, n);
    let m = 128u64;
    let mut g = BigUint::one();
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut x = y.clone();
    let mut ys = y.clone();
    let step = |v: &BigUint| (v * v + &c) % n;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        let mut k = 0u64;
        while k < r && g.is_one() {
            ys = y.clone();
            let lim = m.min(r - k);
            for _ in 0..lim {
                y = step(&y);
                let diff = if x > y { &x - &y } else { &y - &x };
                q = (q * diff) % n;
            }
            g = q.gcd(n);
            k += m;
        }
        r *= 2;
        // Give up quickly; the caller treats an unfactored cofactor as a
        // skippable candidate, so a short attempt is the right trade.
        if r > 1 << 12 {
            return None;
        }
    }
    if g == *n {
        loop {
            ys = step(&ys);
            let diff = if x > ys { &x - &ys } else { &ys - &x };
            g = diff.gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if g == *n || g.is_one() {
        None
    } else {
        Some(g)
    }
}

/// Tonelli-Shanks square root of a mod odd prime p.
fn sqrt_mod(a: &BigUint, p: &BigUint, rng: &mut ChaCha8Rng) -> Option<BigUint> {
    let a = a % p;
    if a.is_zero() {
        return Some(BigUint::zero());
    }
    let one = BigUint::one();
    let p1 = p - &one;
    let legendre_exp = &p1 >> 1;
    if a.modpow(&legendre_exp, p) != one {
        return None;
    }
    if (p % 4u32) == BigUint::from(3u32) {
        let e = (p + &one) >> 2;
        return Some(a.modpow(&e, p));
    }
    // Find a quadratic nonresidue.
    let mut z = BigUint::from(2u32);
    loop {
        if z.modpow(&legendre_exp, p) == p1 {
            break;
        }
        z = rng.gen_biguint_range(&BigUint::from(2u32), p);
    }
    let s = p1.trailing_zeros().unwrap();
    let q = &p1 >> s;
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while !t.is_one() {
        let mut i = 0u64;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = (&t2 * &t2) % p;
            i += 1;
            if i == m {
                return None;
            }
        }
        let mut b = c.clone();
        for _ in 0..m - i - 1 {
            b = (&b * &b) % p;
        }
        m = i;
        c = (&b * &b) % p;
        t = (&t * &c) % p;
        r = (r * b) % p;
    }
    Some(r)
}
