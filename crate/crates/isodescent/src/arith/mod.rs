//! Exact arithmetic bedrock: factorization, Kummer classes `Q*/(Q*)^k`,
//! p-adic square and fourth-power tests, and the bad-place set Sigma.

pub mod factor;
pub mod kummer;
pub mod padic;
pub mod sigma;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Exact rationals; every quantity in the descent is one of these.
pub type Rational = num_rational::BigRational;

pub fn rat<N: Into<BigInt>, D: Into<BigInt>>(n: N, d: D) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn int<N: Into<BigInt>>(n: N) -> Rational {
    Rational::from_integer(n.into())
}

/// Jacobi symbol (a/n) for odd positive n. Returns 0 when gcd(a, n) > 1.
pub fn jacobi(a: &BigInt, n: &BigInt) -> i32 {
    assert!(n.is_positive() && n.is_odd(), "jacobi needs odd positive n");
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1i32;
    let three = BigInt::from(3);
    let five = BigInt::from(5);
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        while a.is_even() {
            a /= 2;
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        result
    } else {
        0
    }
}

/// Exact integer k-th root when |n| is a perfect k-th power (sign-aware:
/// odd k allows negatives).
pub fn perfect_kth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_zero() {
        return Some(BigInt::zero());
    }
    if n.is_negative() && k % 2 == 0 {
        return None;
    }
    let m = n.abs();
    let r = m.nth_root(k);
    if num_traits::pow::pow(r.clone(), k as usize) == m {
        Some(if n.is_negative() { -r } else { r })
    } else {
        None
    }
}

pub fn perfect_square_root(n: &BigInt) -> Option<BigInt> {
    perfect_kth_root(n, 2)
}

/// Exact square root of a rational, when it is one.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    let n = perfect_kth_root(q.numer(), 2)?;
    let d = perfect_kth_root(q.denom(), 2)?;
    Some(Rational::new(n, d))
}

/// Exact fourth root of a rational, when it is one.
pub fn rational_fourth_root(q: &Rational) -> Option<Rational> {
    rational_kth_root(q, 4)
}

/// Exact k-th root of a rational, when it is one (reduced form, so the root
/// exists iff numerator and denominator are both k-th powers).
pub fn rational_kth_root(q: &Rational, k: u32) -> Option<Rational> {
    let n = perfect_kth_root(q.numer(), k)?;
    let d = perfect_kth_root(q.denom(), k)?;
    Some(Rational::new(n, d))
}

/// |n| = b^k with k >= 2 and k maximal, if such a decomposition exists.
/// Signs are the caller's business (factorization works on |n| anyway).
/// Speeds factorization of the s * m^2 shapes the fixture tables produce.
pub fn perfect_power(n: &BigInt) -> Option<(BigInt, u32)> {
    let m = n.abs();
    if m <= BigInt::one() {
        return None;
    }
    let bits = m.bits() as u32;
    let mut k = bits;
    while k >= 2 {
        if let Some(b) = perfect_kth_root(&m, k) {
            if b > BigInt::one() {
                return Some((b, k));
            }
        }
        k -= 1;
    }
    None
}

/// v_p(n) for n != 0.
pub fn int_valuation(n: &BigInt, p: &BigInt) -> u32 {
    assert!(!n.is_zero(), "valuation of 0 is infinite");
    let mut m = n.abs();
    let mut v = 0u32;
    while (&m % p).is_zero() {
        m /= p;
        v += 1;
    }
    v
}

/// v_p(q) for a nonzero rational.
pub fn valuation(q: &Rational, p: &BigInt) -> i64 {
    assert!(!q.is_zero(), "valuation of 0 is infinite");
    int_valuation(q.numer(), p) as i64 - int_valuation(q.denom(), p) as i64
}

/// q = p^v * (a/b) with a, b prime to p; returns (v, a/b) as (i64, Rational).
pub fn split_valuation(q: &Rational, p: &BigInt) -> (i64, Rational) {
    let v = valuation(q, p);
    let pv = power_rational(p, v);
    (v, q / pv)
}

/// p^v as a rational, v may be negative.
pub fn power_rational(p: &BigInt, v: i64) -> Rational {
    let pk = num_traits::pow::pow(p.clone(), v.unsigned_abs() as usize);
    if v >= 0 {
        Rational::from_integer(pk)
    } else {
        Rational::new(BigInt::one(), pk)
    }
}

/// Modular inverse of a mod m (gcd(a, m) = 1).
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "mod_inverse of non-unit");
    e.x.mod_floor(m)
}
