//! Signs of totally real cyclotomic numbers under the real embeddings.
//!
//! For `x` in `Q(zeta_n)` fixed by complex conjugation, every image
//! `sigma_k(x)` is a real algebraic number `sum_j c_j cos(2 pi j k / n)`.
//! Signs are decided by fixed-point interval arithmetic with explicit error
//! bounds, doubling the working precision until the interval excludes zero.
//! A nonzero input guarantees termination because field automorphisms are
//! injective, so each embedding value is exactly nonzero.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cyclotomic::{units_mod, CyclotomicNumber};
use crate::rational::clear_denominators;

/// True iff `x` is fixed by complex conjugation (so all embeddings are real).
pub fn is_real(x: &CyclotomicNumber) -> bool {
    let n = x.conductor();
    if n <= 2 {
        return true;
    }
    x.galois(n - 1) == *x
}

/// Sign of `sigma_k(x)` for real `x`: -1, 0, or +1.
pub fn embedding_sign(x: &CyclotomicNumber, k: u64) -> i8 {
    assert!(is_real(x), "element is not totally real");
    if x.is_zero() {
        return 0;
    }
    if let Some(r) = x.to_rational() {
        return if r.is_positive() { 1 } else { -1 };
    }
    let n = x.conductor();
    let (numerators, _den) = clear_denominators(x.coords());
    // sigma_k(x) * den = sum_j numerators[j] * cos(2 pi (j k mod n) / n)
    let angles: Vec<u64> = (0..numerators.len() as u64)
        .map(|j| (j as u128 * k as u128 % n as u128) as u64)
        .collect();

    let mut pw: u32 = 96;
    loop {
        let ctx = FixedPoint::new(pw);
        let mut acc = BigInt::zero();
        let mut err = BigInt::zero();
        for (c, &a) in numerators.iter().zip(angles.iter()) {
            if c.is_zero() {
                continue;
            }
            let (cv, ce) = ctx.cos_two_pi_frac(a, n);
            acc += c * cv;
            err += c.abs() * (ce + 1u32);
        }
        if acc.abs() > err {
            return if acc.is_positive() { 1 } else { -1 };
        }
        pw *= 2;
        assert!(pw <= 1 << 20, "precision runaway deciding a sign");
    }
}

/// Signs of `x` under every embedding `sigma_k`, `k` coprime to the
/// conductor, as `(k, sign)` pairs.
pub fn all_embedding_signs(x: &CyclotomicNumber) -> Vec<(u64, i8)> {
    units_mod(x.conductor())
        .into_iter()
        .map(|k| (k, embedding_sign(x, k)))
        .collect()
}

/// True iff every real embedding of `x` is strictly negative.
pub fn is_totally_negative(x: &CyclotomicNumber) -> bool {
    !x.is_zero() && all_embedding_signs(x).iter().all(|(_, s)| *s < 0)
}

/// True iff every real embedding of `x` is strictly positive.
pub fn is_totally_positive(x: &CyclotomicNumber) -> bool {
    !x.is_zero() && all_embedding_signs(x).iter().all(|(_, s)| *s > 0)
}

// Fixed-point arithmetic at scale 2^pw. Every value carries an error bound in
// units of 2^-pw; the true quantity lies in [val - err, val + err] / 2^pw.
struct FixedPoint {
    pw: u32,
    two_pi: BigInt,
    two_pi_err: BigInt,
}

impl FixedPoint {
    fn new(pw: u32) -> Self {
        let (pi, pi_err) = fp_pi(pw);
        FixedPoint {
            pw,
            two_pi: &pi * 2,
            two_pi_err: &pi_err * 2,
        }
    }

    // cos(2 pi a / n) with 0 <= a < n, returning (value, error_ulps).
    fn cos_two_pi_frac(&self, a: u64, n: u64) -> (BigInt, BigInt) {
        // angle = 2 pi a / n in [0, 2 pi)
        let mut y = &self.two_pi * a / n;
        let mut y_err = &self.two_pi_err * a / n + 1u32;
        let pi = &self.two_pi / 2;
        // cos(2 pi - y) = cos(y)
        if y > pi {
            y = &self.two_pi - y;
            y_err += &self.two_pi_err;
        }
        // cos(y) = -cos(pi - y) folds into [0, pi/2]
        let mut negate = false;
        if &y * 2u32 > pi {
            y = pi - y;
            y_err += &self.two_pi_err / 2u32 + 1u32;
            negate = true;
        }
        if y.is_negative() {
            y = -y;
        }
        let (c, c_err) = self.cos_small(&y, &y_err);
        if negate {
            (-c, c_err)
        } else {
            (c, c_err)
        }
    }

    // Taylor series for cos on [0, pi/2]; the series alternates with
    // decreasing terms there, so the tail is bounded by the first omitted
    // term, which the loop runs down to zero.
    fn cos_small(&self, y: &BigInt, y_err: &BigInt) -> (BigInt, BigInt) {
        let one = BigInt::from(1u32) << self.pw;
        let y2 = (y * y) >> self.pw;
        let mut term = one.clone();
        let mut acc = one;
        let mut sign = -1i32;
        let mut i = 1u64;
        let mut rounding = BigInt::zero();
        while !term.is_zero() {
            term = (&term * &y2) >> self.pw;
            term /= (2 * i - 1) * (2 * i);
            if sign < 0 {
                acc -= &term;
            } else {
                acc += &term;
            }
            rounding += 2u32;
            sign = -sign;
            i += 1;
            assert!(i < 256, "cosine series failed to converge");
        }
        // |d cos / dy| <= 1, so the input error passes through; add the
        // per-term rounding and one ulp for the truncated tail.
        (acc, y_err + rounding + 1u32)
    }
}

// pi * 2^pw via Machin's formula, with an error bound in ulps.
fn fp_pi(pw: u32) -> (BigInt, BigInt) {
    let (a5, e5) = fp_arctan_inv(5, pw);
    let (a239, e239) = fp_arctan_inv(239, pw);
    let val = a5 * 16 - a239 * 4;
    let err = e5 * 16u32 + e239 * 4u32 + 2u32;
    (val, err)
}

// arctan(1/m) * 2^pw for integer m >= 2; alternating series, error bounded by
// one ulp per computed term plus the first omitted term.
fn fp_arctan_inv(m: u64, pw: u32) -> (BigInt, BigInt) {
    let m2 = BigInt::from(m) * m;
    let mut power = (BigInt::from(1u32) << pw) / m;
    let mut acc = power.clone();
    let mut i = 1u64;
    let mut terms = BigInt::from(1u32);
    loop {
        power = power / &m2;
        let term = &power / (2 * i + 1);
        if term.is_zero() {
            break;
        }
        if i % 2 == 1 {
            acc -= &term;
        } else {
            acc += &term;
        }
        terms += 1u32;
        i += 1;
    }
    (acc, terms + 2u32)
}
