//! Big-integer kernels for the exact evaluation mode.
//!
//! Everything here works on `BigUint`/`BigRational` so that probabilities of
//! a binomial with rational success chance are held as exact ratios of
//! integers. Conversion to `f64` is done once, at the very end, with explicit
//! round-to-nearest-even so the result is the closest double to the true
//! rational.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Binomial coefficient C(n, k) via the multiplicative recurrence.
pub(crate) fn binom_coeff(n: u64, k: u64) -> BigUint {
    debug_assert!(k <= n);
    let k = k.min(n - k);
    let mut c = BigUint::one();
    for i in 1..=k {
        // c * (n-k+i) is always divisible by i at this point
        c = c * BigUint::from(n - k + i) / BigUint::from(i);
    }
    c
}

/// Exact P(X = k) for X ~ Binomial(n, num/den).
pub(crate) fn exact_pmf(n: u64, num: u64, den: u64, k: u64) -> BigRational {
    debug_assert!(k <= n && num <= den && den >= 1);
    if num == 0 {
        return if k == 0 { BigRational::one() } else { BigRational::zero() };
    }
    if num == den {
        return if k == n { BigRational::one() } else { BigRational::zero() };
    }
    let numer = binom_coeff(n, k)
        * BigUint::from(num).pow(k as u32)
        * BigUint::from(den - num).pow((n - k) as u32);
    ratio(numer, BigUint::from(den).pow(n as u32))
}

/// Unnormalized integer weights w_k = C(n,k) num^k (den-num)^(n-k) for
/// k = 0..=n, plus the common denominator den^n. Degenerate num in {0, den}
/// is handled by the callers.
pub(crate) fn exact_weights(n: u64, num: u64, den: u64) -> (Vec<BigUint>, BigUint) {
    debug_assert!(0 < num && num < den);
    let q = den - num;
    let mut weights = Vec::with_capacity(n as usize + 1);
    let mut w = BigUint::from(q).pow(n as u32); // k = 0
    weights.push(w.clone());
    for k in 0..n {
        // w_{k+1} = w_k * (n-k) * num / ((k+1) * (den-num)); division is exact
        w = w * BigUint::from((n - k) * num) / BigUint::from((k + 1) * q);
        weights.push(w.clone());
    }
    (weights, BigUint::from(den).pow(n as u32))
}

/// Exact P(X <= k), summed from the smaller tail.
pub(crate) fn exact_cdf(n: u64, num: u64, den: u64, k: u64) -> BigRational {
    debug_assert!(k <= n);
    if k == n {
        return BigRational::one();
    }
    if num == 0 {
        return BigRational::one(); // all mass at zero
    }
    if num == den {
        return BigRational::zero(); // all mass at n, k < n here
    }
    let (weights, denom) = exact_weights(n, num, den);
    if 2 * k < n {
        let sum: BigUint = weights[..=k as usize].iter().sum();
        ratio(sum, denom)
    } else {
        let sum: BigUint = weights[k as usize + 1..].iter().sum();
        BigRational::one() - ratio(sum, denom)
    }
}

fn ratio(numer: BigUint, denom: BigUint) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Round a nonnegative rational to the nearest `f64` (ties to even).
///
/// The quotient is taken to 54 significant bits plus a sticky remainder, so
/// exactly one rounding happens for normal results. Results in the subnormal
/// range round a second time in the final scaling, which keeps them within
/// one ulp of the true value.
pub(crate) fn rational_to_f64(r: &BigRational) -> f64 {
    debug_assert!(!r.is_negative());
    let num = r.numer().magnitude();
    let den = r.denom().magnitude();
    if num.is_zero() {
        return 0.0;
    }

    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    // Aim for a 54-bit quotient of (num << shift) / den.
    let mut shift = 54 - (nb - db);
    let (mut q, mut rem) = shifted_div(num, den, shift);
    while q.bits() != 54 {
        shift += 54 - q.bits() as i64;
        let (q2, rem2) = shifted_div(num, den, shift);
        q = q2;
        rem = rem2;
    }

    // q has exactly 54 bits; value = q * 2^-shift. Round to 53 bits.
    let round_bit = (&q & BigUint::one()) == BigUint::one();
    let mut q53 = u64::try_from(q >> 1usize).expect("53-bit quotient fits u64");
    let mut exp = -(shift as i32) + 1;
    if round_bit && (!rem.is_zero() || q53 & 1 == 1) {
        q53 += 1;
        if q53 == (1u64 << 53) {
            q53 >>= 1;
            exp += 1;
        }
    }
    mul_pow2(q53 as f64, exp)
}

fn shifted_div(num: &BigUint, den: &BigUint, shift: i64) -> (BigUint, BigUint) {
    if shift >= 0 {
        let scaled = num << shift as usize;
        (&scaled / den, &scaled % den)
    } else {
        let scaled = den << (-shift) as usize;
        (num / &scaled, num % &scaled)
    }
}

/// x * 2^exp, applied in chunks so intermediates stay in the normal range and
/// only the final step can round (into the subnormal range).
fn mul_pow2(mut x: f64, mut exp: i32) -> f64 {
    const CHUNK: i32 = 900;
    while exp > CHUNK {
        x *= 2f64.powi(CHUNK);
        exp -= CHUNK;
    }
    while exp < -CHUNK {
        x *= 2f64.powi(-CHUNK);
        exp += CHUNK;
    }
    x * 2f64.powi(exp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: u64, d: u64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_coefficients() {
        assert_eq!(binom_coeff(4, 2), BigUint::from(6u32));
        assert_eq!(binom_coeff(6, 0), BigUint::one());
        assert_eq!(binom_coeff(6, 6), BigUint::one());
        assert_eq!(binom_coeff(5, 2), binom_coeff(5, 3));
    }

    #[test]
    fn big_coefficient_against_known_decimal() {
        let c = binom_coeff(156, 78);
        assert_eq!(
            c.to_string(),
            "5825874245311064218315521996517139009907512400"
        );
    }

    #[test]
    fn rational_conversion_simple() {
        assert_eq!(rational_to_f64(&rat(1, 2)), 0.5);
        assert_eq!(rational_to_f64(&rat(1, 3)), 1.0 / 3.0);
        assert_eq!(rational_to_f64(&rat(2, 3)), 2.0 / 3.0);
        assert_eq!(rational_to_f64(&rat(1, 10)), 0.1);
        assert_eq!(rational_to_f64(&BigRational::zero()), 0.0);
        assert_eq!(rational_to_f64(&rat(7, 1)), 7.0);
    }

    #[test]
    fn rational_conversion_subnormal() {
        // 1 / 2^1024 and 3 / 2^1040 are subnormal doubles
        let tiny = BigRational::new(BigInt::one(), BigInt::from(2u8).pow(1024));
        assert_eq!(rational_to_f64(&tiny), 5.562684646268003e-309);
        let sub = BigRational::new(BigInt::from(3u8), BigInt::from(2u8).pow(1040));
        assert_eq!(rational_to_f64(&sub), 2.54639494916e-313);
    }

    #[test]
    fn rational_conversion_roundtrips_dyadics() {
        for &x in &[0.4637454308575066_f64, 1.5e-300, 0.9999999999999999, 6.1e-5] {
            let r = BigRational::from_float(x).unwrap();
            assert_eq!(rational_to_f64(&r), x);
        }
    }
}
