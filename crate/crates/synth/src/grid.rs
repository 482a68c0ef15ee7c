use ddfloat::Dd;
use num_bigint::BigInt;
use num_traits::Zero;
use zrings::{DOmega, ZOmega, ZRootTwo};

/// Closed real interval with double-double endpoints.
#[derive(Copy, Clone, Debug)]
pub struct Interval {
    pub lo: Dd,
    pub hi: Dd,
}

impl Interval {
    pub fn new(lo: Dd, hi: Dd) -> Self {
        Interval { lo, hi }
    }

    pub fn width(&self) -> Dd {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, x: Dd) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// Scales by a factor, swapping endpoints when it is negative.
    fn scale(&self, f: Dd) -> Interval {
        let a = self.lo * f;
        let b = self.hi * f;
        if f >= Dd::ZERO {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }

    fn shift(&self, s: Dd) -> Interval {
        Interval::new(self.lo + s, self.hi + s)
    }
}

fn dd_max(a: Dd, b: Dd) -> Dd {
    if a >= b {
        a
    } else {
        b
    }
}

fn dd_min(a: Dd, b: Dd) -> Dd {
    if a <= b {
        a
    } else {
        b
    }
}

/// lambda^e exactly in Z[sqrt2]; lambda = 1 + sqrt2, lambda^(-1) = sqrt2 - 1.
fn lambda_pow(e: i64) -> ZRootTwo {
    let base = if e >= 0 {
        ZRootTwo::lambda()
    } else {
        ZRootTwo::lambda_inv()
    };
    base.pow(e.unsigned_abs() as u32)
}

/// lambda^e as a double-double; only used for interval screening, the exact
/// ring arithmetic never sees it.
fn lambda_pow_dd(e: i64) -> Dd {
    let base = if e >= 0 { Dd::ONE + Dd::SQRT_2 } else { Dd::SQRT_2 - Dd::ONE };
    base.powi(e.unsigned_abs() as i32)
}

/// Exact integer value of an integral double-double. Both components of a
/// normalized integral Dd are integral f64 values, so the sum is exact.
fn dd_to_i128(x: Dd) -> i128 {
    debug_assert!(x.hi.abs() < 2f64.powi(100), "loop bound out of range");
    x.hi as i128 + x.lo as i128
}

/// All alpha = p + q*sqrt2 with alpha in I and the conjugate alpha* in J.
/// I is rescaled by lambda^m so its width lands in [1, lambda), which keeps
/// the per-q candidate count O(1); J picks up the factor (1 - sqrt2)^m.
/// Screening runs entirely in the rescaled double-double frame with a pad;
/// only survivors are mapped back by the exact lambda^(-m) and checked
/// against the original intervals, which decide membership.
pub fn grid_points_1d(i: Interval, j: Interval) -> Vec<ZRootTwo> {
    let mut out = grid_points_1d_unsorted(i, j);
    out.sort();
    out.dedup();
    out
}

fn grid_points_1d_unsorted(i: Interval, j: Interval) -> Vec<ZRootTwo> {
    if i.is_empty() || j.is_empty() {
        return Vec::new();
    }
    let lambda = Dd::ONE + Dd::SQRT_2;

    let mut m: i64 = 0;
    let w = i.width();
    if w > Dd::ZERO {
        m = -(w.to_f64().ln() / lambda.to_f64().ln()).floor() as i64;
    }
    // Guard against rounding in the log estimate.
    while i.width() * lambda_pow_dd(m) >= lambda {
        m -= 1;
    }
    while i.width() * lambda_pow_dd(m) < Dd::ONE && !i.width().is_zero() {
        m += 1;
    }
    let is = i.scale(lambda_pow_dd(m));
    // Conjugate of lambda^m is (1 - sqrt2)^m = (-1)^m lambda^(-m).
    let conj_factor =
        if m % 2 == 0 { lambda_pow_dd(-m) } else { -lambda_pow_dd(-m) };
    let js = j.scale(conj_factor);
    // Exact map back to the original frame, built only if something passes
    // the screen; most calls return empty without any big-integer work.
    let mut back: Option<ZRootTwo> = None;

    let loose = |iv: &Interval, x: Dd| {
        let slack = (Dd::ONE + iv.lo.abs() + iv.hi.abs()) * Dd::exp10i(-25);
        x >= iv.lo - slack && x <= iv.hi + slack
    };

    let sqrt2 = Dd::SQRT_2;
    let two_sqrt2 = Dd::from_f64(2.0) * sqrt2;
    // A near-degenerate intersection must not be rejected (rounding can make
    // it look empty); only a gap of more than two whole units, far beyond
    // double-double rounding at these magnitudes, skips.
    let certainly_empty = |lo: Dd, hi: Dd| hi - lo < Dd::from_f64(-2.0);
    let mut out = Vec::new();
    let q_lo_d = ((is.lo - js.hi) / two_sqrt2).floor();
    let q_hi_d = ((is.hi - js.lo) / two_sqrt2).ceil();
    if certainly_empty(q_lo_d, q_hi_d) {
        return out;
    }
    let q_lo = dd_to_i128(q_lo_d) - 1;
    let q_hi = dd_to_i128(q_hi_d) + 1;
    for q in q_lo..=q_hi {
        let qd = Dd::from_f64(q as f64)
            + Dd::from_f64((q - (q as f64) as i128) as f64);
        let qs = qd * sqrt2;
        let p_lo = dd_max(is.lo - qs, js.lo + qs);
        let p_hi = dd_min(is.hi - qs, js.hi + qs);
        if certainly_empty(p_lo, p_hi) {
            continue;
        }
        let pa = dd_to_i128(p_lo.floor()) - 1;
        let pb = dd_to_i128(p_hi.ceil()) + 1;
        for p in pa..=pb {
            let pd = Dd::from_f64(p as f64)
                + Dd::from_f64((p - (p as f64) as i128) as f64);
            if !loose(&is, pd + qs) || !loose(&js, pd - qs) {
                continue;
            }
            let b = back.get_or_insert_with(|| lambda_pow(-m));
            let alpha = &ZRootTwo::new(BigInt::from(p), BigInt::from(q)) * &*b;
            if i.contains(alpha.to_dd()) && j.contains(alpha.conj().to_dd()) {
                out.push(alpha);
            }
        }
    }
    out
}

/// Candidate numerators for the approximation stage: all u = z/sqrt2^k with
/// |u| <= 1, |u*| <= 1 for the sqrt2-conjugate, and
/// |w - u|^2 + 1 - |u|^2 <= eps^2 where w = e^(-i theta/2); the left side is
/// the squared operator-norm error of the unitary completed from u, so these
/// are exactly the usable top-left entries, sorted by that error. The error
/// bound is linear in u (it equals 2 - 2 Re(u conj(w))), which cuts the
/// enumeration to a thin crescent instead of the full eps-disk. Real and
/// imaginary parts both lie on the scaled grid (b-d) + a*sqrt2 over
/// sqrt2^(k+1), coupled by the shared parity of b-d and b+d.
pub fn enumerate_u_candidates(theta: f64, eps: Dd, k: u32) -> Vec<DOmega> {
    let half = Dd::from_f64(theta) / Dd::from_f64(2.0);
    let (s, c) = half.sin_cos();
    let wr = c;
    let wi = -s;

    let scale = Dd::SQRT_2.powi(k as i32 + 1);
    let scale_k = Dd::SQRT_2.powi(k as i32);
    let one = Dd::ONE;
    // Enumeration intervals carry a small pad; the final filters (exact
    // disk membership plus the distance test below) decide inclusion.
    let pad = Dd::exp10i(-25);
    let eps2 = eps * eps;
    // The crescent sits at radius within eps^2/2 of 1 and angular distance
    // within ~eps of -theta/2, so its x extent is the cosine over that arc
    // widened by eps^2/2. This is much tighter than [wr - eps, wr + eps]
    // whenever the crescent is not centered near the real axis.
    let delta = eps * Dd::from_f64(1.0 + 1e-6) + pad;
    let (_, c1) = (-half - delta).sin_cos();
    let (_, c2) = (-half + delta).sin_cos();
    let mut x_min = dd_min(c1, c2);
    let mut x_max = dd_max(c1, c2);
    {
        // If the arc crosses an extremum of cosine the endpoint values do
        // not bound it; widen to the extremum. Checked in f64 with slack.
        let lo = (-half - delta).to_f64();
        let hi = (-half + delta).to_f64();
        let tau = std::f64::consts::TAU;
        let sl = 1e-9 + (hi - lo) * 1e-12;
        if ((lo - sl) / tau).ceil() <= ((hi + sl) / tau).floor() {
            x_max = one;
        }
        let pi = std::f64::consts::PI;
        if ((lo - pi - sl) / tau).ceil() <= ((hi - pi + sl) / tau).floor() {
            x_min = -one;
        }
    }
    let widen = eps2 / Dd::from_f64(2.0) + pad;
    let x_lo = dd_max(x_min - widen, -one - pad);
    let x_hi = dd_min(x_max + widen, one + pad);
    if x_lo > x_hi {
        return Vec::new();
    }
    let conj_bound = Interval::new(-scale - pad, scale + pad);
    let xs = grid_points_1d_unsorted(Interval::new(x_lo * scale, x_hi * scale), conj_bound);

    let mut out: Vec<(Dd, DOmega)> = Vec::new();
    let two_pow_k = ZRootTwo::new(BigInt::from(1) << k, 0);
    for beta_x in xs {
        let x = beta_x.to_dd() / scale;
        let dx = x - wr;
        let ry2 = eps2 - dx * dx + pad;
        if ry2 < Dd::ZERO {
            continue;
        }
        let ry = ry2.sqrt() + pad;
        let ymax2 = one - x * x + pad;
        if ymax2 < Dd::ZERO {
            continue;
        }
        let ymax = ymax2.sqrt() + pad;
        let mut y_lo = dd_max(wi - ry, -ymax);
        let mut y_hi = dd_min(wi + ry, ymax);
        // Crescent cut: wr*x + wi*y >= 1 - eps^2/2, a half-plane in y.
        if !wi.is_zero() {
            let bound = (one - eps2 / Dd::from_f64(2.0) - wr * x) / wi;
            let slack = pad * (one + bound.abs());
            if wi > Dd::ZERO {
                y_lo = dd_max(y_lo, bound - slack);
            } else {
                y_hi = dd_min(y_hi, bound + slack);
            }
        }
        if y_lo > y_hi {
            continue;
        }
        let par: i64 = if (&beta_x.p % 2u8).is_zero() { 0 } else { 1 };
        let par_dd = Dd::from_i64(par);
        // With beta_y = par + sqrt2*gamma the parity constraint
        // (b+d) = (b-d) mod 2 becomes gamma ranging over a plain grid:
        // gamma in (I_y - par)/sqrt2, gamma* in (J_y - par)/(-sqrt2).
        let iy = Interval::new(y_lo * scale, y_hi * scale);
        let inv_sqrt2 = one / Dd::SQRT_2;
        let gi = iy.shift(-par_dd).scale(inv_sqrt2);
        let gj = conj_bound.shift(-par_dd).scale(-inv_sqrt2);
        for gamma in grid_points_1d_unsorted(gi, gj) {
            let py: BigInt = BigInt::from(par) + 2 * &gamma.q;
            let b: BigInt = (&beta_x.p + &py) / 2;
            let d: BigInt = (&py - &beta_x.p) / 2;
            let z = ZOmega { a: beta_x.q.clone(), b, c: gamma.p.clone(), d };
            // Exact unit-disk membership for z and its sqrt2-conjugate:
            // 2^k - z*conj(z) must be doubly nonnegative.
            let zz = (&z * &z.conj()).to_zroottwo().expect("z*conj(z) is real");
            let slack = &two_pow_k - &zz;
            if slack.signum() < 0 || slack.conj().signum() < 0 {
                continue;
            }
            let u = z.to_cdd();
            let ur = u.re / scale_k;
            let ui = u.im / scale_k;
            let du_re = ur - wr;
            let du_im = ui - wi;
            let err2 = du_re * du_re + du_im * du_im + one - (ur * ur + ui * ui);
            if err2 > eps2 {
                continue;
            }
            out.push((err2, DOmega::new(z, k)));
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out.dedup_by(|a, b| a.1 == b.1);
    out.into_iter().map(|(_, u)| u).collect()
}
