use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::BigRat;
use crate::error::{invalid, Result};

/// `⌊√n⌋`.
pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

/// `⌊n^e⌋` for a non-negative rational exponent `e = p/q`: the largest `x`
/// with `x^q ≤ n^p`.
pub fn floor_pow(n: u64, exponent: &BigRat) -> Result<u64> {
    if exponent.is_negative() {
        return Err(invalid("exponent", "must be non-negative"));
    }
    let p = exponent.numer().to_u32().ok_or_else(|| invalid("exponent", "numerator too large"))?;
    let q = exponent.denom().to_u32().ok_or_else(|| invalid("exponent", "denominator too large"))?;
    if n == 0 {
        return Ok(if p == 0 { 1 } else { 0 });
    }
    let target = num_traits::pow(BigUint::from(n), p as usize);
    let fits = |x: u64| num_traits::pow(BigUint::from(x), q as usize) <= target;
    let guess = (n as f64).powf(p as f64 / q as f64);
    if !guess.is_finite() || guess > 1e18 {
        return Err(invalid("exponent", "result does not fit in u64"));
    }
    let mut x = guess as u64;
    while x > 0 && !fits(x) {
        x -= 1;
    }
    while fits(x + 1) {
        x += 1;
    }
    debug_assert!(!target.is_zero());
    Ok(x)
}

/// `x ≤ coef · n^e` decided exactly, for `n ≥ 1`, `coef ≥ 0` and `e ≥ 0`.
pub fn le_scaled_power(x: &BigRat, coef: &BigRat, n: u64, exponent: &BigRat) -> Result<bool> {
    if exponent.is_negative() || coef.is_negative() || n == 0 {
        return Err(invalid("exponent", "requires n ≥ 1, coef ≥ 0 and exponent ≥ 0"));
    }
    if !x.is_positive() {
        return Ok(true);
    }
    // x ≤ c n^(p/q)  ⇔  x^q ≤ c^q n^p
    let p = exponent.numer().to_u32().ok_or_else(|| invalid("exponent", "numerator too large"))?;
    let q = exponent.denom().to_u32().ok_or_else(|| invalid("exponent", "denominator too large"))?;
    let lhs = x.pow(q as i32)?;
    let rhs = coef.pow(q as i32)? * BigRat::from_bigint(num_traits::pow(num_bigint::BigInt::from(n), p as usize));
    Ok(lhs <= rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floors_match_brute_force() {
        let sixth = BigRat::frac(1, 6);
        let two_thirds = BigRat::frac(2, 3);
        assert_eq!(floor_pow(4096, &sixth).unwrap(), 4);
        assert_eq!(floor_pow(4096, &two_thirds).unwrap(), 256);
        assert_eq!(floor_pow(1 << 21, &sixth).unwrap(), 11);
        assert_eq!(floor_pow(1 << 21, &two_thirds).unwrap(), 16384);
        assert_eq!(floor_pow(256, &BigRat::frac(1, 8)).unwrap(), 2);
        assert_eq!(floor_pow(63, &sixth).unwrap(), 1);
        assert_eq!(floor_pow(64, &sixth).unwrap(), 2);
        for n in 1u64..2000 {
            let x = floor_pow(n, &BigRat::frac(3, 4)).unwrap();
            assert!(x.pow(4) <= n.pow(3) && (x + 1).pow(4) > n.pow(3));
        }
        assert_eq!(isqrt(99), 9);
        assert!(floor_pow(10, &BigRat::frac(-1, 2)).is_err());
    }

    #[test]
    fn scaled_power_comparison() {
        let four_thirds = BigRat::frac(4, 3);
        let one = BigRat::one();
        // 4096^(4/3) = 65536
        assert!(le_scaled_power(&BigRat::from_integer(65536), &one, 4096, &four_thirds).unwrap());
        assert!(!le_scaled_power(&BigRat::from_integer(65537), &one, 4096, &four_thirds).unwrap());
        assert!(le_scaled_power(&BigRat::from_integer(131072), &BigRat::from_integer(2), 4096, &four_thirds).unwrap());
        assert!(le_scaled_power(&BigRat::from_integer(-5), &one, 2, &one).unwrap());
        // 2^(1/2) ≈ 1.414
        assert!(le_scaled_power(&BigRat::frac(1414, 1000), &one, 2, &BigRat::frac(1, 2)).unwrap());
        assert!(!le_scaled_power(&BigRat::frac(1415, 1000), &one, 2, &BigRat::frac(1, 2)).unwrap());
    }
}
