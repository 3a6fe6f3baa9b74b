//! p-adic approximations with tracked precision, exact square and fourth
//! power tests for rationals inside Q_p, and square roots modulo prime
//! powers (Tonelli-Shanks plus Hensel lifting).
//!
//! A `PadicElement` represents a coset x + O(p^precision): `x = p^valuation *
//! unit` with the unit known modulo `p^(precision - valuation)`. Arithmetic
//! propagates precision pessimistically, and additive cancellation can shrink
//! the number of known digits to zero; callers then escalate their working
//! precision and retry (the local solvers do exactly that).

use super::{int_valuation, jacobi, mod_inverse, split_valuation, Rational};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicElement {
    pub prime: BigInt,
    /// Valuation of x; when the element is zero to working precision this is
    /// set to `precision` and `unit` is zero.
    pub valuation: i64,
    /// Unit part of x, reduced modulo p^(precision - valuation).
    pub unit: BigInt,
    /// x is known modulo p^precision (absolute precision; may be <= 0 for
    /// deep denominators, as long as it exceeds the valuation).
    pub precision: i64,
}

fn pow_big(p: &BigInt, k: i64) -> BigInt {
    debug_assert!(k >= 0);
    num_traits::pow::pow(p.clone(), k as usize)
}

impl PadicElement {
    /// Exact embedding of a rational, recorded to `precision` absolute
    /// digits. A value with valuation >= precision is the zero coset.
    pub fn from_rational(q: &Rational, p: &BigInt, precision: i64) -> Result<Self> {
        if q.is_zero() {
            return Ok(Self::zero_to_precision(p, precision));
        }
        let (v, u) = split_valuation(q, p);
        if precision <= v {
            return Ok(Self::zero_to_precision(p, precision));
        }
        let k = precision - v;
        let modulus = pow_big(p, k);
        let num = u.numer().mod_floor(&modulus);
        let den_inv = mod_inverse(&u.denom().mod_floor(&modulus), &modulus);
        Ok(PadicElement {
            prime: p.clone(),
            valuation: v,
            unit: (num * den_inv).mod_floor(&modulus),
            precision,
        })
    }

    pub fn zero_to_precision(p: &BigInt, precision: i64) -> Self {
        PadicElement { prime: p.clone(), valuation: precision, unit: BigInt::zero(), precision }
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.unit.is_zero()
    }

    /// Digits of the unit that are actually known.
    pub fn unit_digits(&self) -> i64 {
        self.precision - self.valuation
    }

    fn normalized(p: &BigInt, shifted: BigInt, base_val: i64, precision: i64) -> Self {
        // `shifted` holds x / p^base_val modulo p^(precision - base_val).
        if shifted.is_zero() {
            return Self::zero_to_precision(p, precision);
        }
        let extra = int_valuation(&shifted, p) as i64;
        let v = base_val + extra;
        if v >= precision {
            return Self::zero_to_precision(p, precision);
        }
        let unit_mod = pow_big(p, precision - v);
        let unit = (shifted / pow_big(p, extra)).mod_floor(&unit_mod);
        PadicElement { prime: p.clone(), valuation: v, unit, precision }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime);
        let p = &self.prime;
        let n = self.precision.min(other.precision);
        if self.is_zero_to_precision() {
            return other.truncate(n);
        }
        if other.is_zero_to_precision() {
            return self.truncate(n);
        }
        let v = self.valuation.min(other.valuation);
        if v >= n {
            return Self::zero_to_precision(p, n);
        }
        let m = pow_big(p, n - v);
        let a = (&self.unit * pow_big(p, self.valuation - v)).mod_floor(&m);
        let b = (&other.unit * pow_big(p, other.valuation - v)).mod_floor(&m);
        Self::normalized(p, (a + b).mod_floor(&m), v, n)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero_to_precision() {
            return self.clone();
        }
        let m = pow_big(&self.prime, self.unit_digits());
        PadicElement {
            prime: self.prime.clone(),
            valuation: self.valuation,
            unit: (&m - &self.unit).mod_floor(&m),
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.prime, other.prime);
        let p = &self.prime;
        if self.is_zero_to_precision() || other.is_zero_to_precision() {
            // x = O(p^a), y = p^w * unit + ... => xy = O(p^(a + w)).
            let bound = if self.is_zero_to_precision() && other.is_zero_to_precision() {
                self.precision + other.precision
            } else if self.is_zero_to_precision() {
                self.precision + other.valuation
            } else {
                other.precision + self.valuation
            };
            return Self::zero_to_precision(p, bound);
        }
        let digits = self.unit_digits().min(other.unit_digits());
        let v = self.valuation + other.valuation;
        let m = pow_big(p, digits);
        PadicElement {
            prime: p.clone(),
            valuation: v,
            unit: (&self.unit * &other.unit).mod_floor(&m),
            precision: v + digits,
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.prime, other.prime);
        if other.is_zero_to_precision() {
            return Err(Error::InsufficientPrecision {
                prime: self.prime.clone(),
                needed: other.precision + 1,
                have: other.precision,
            });
        }
        let p = &self.prime;
        if self.is_zero_to_precision() {
            return Ok(Self::zero_to_precision(p, self.precision - other.valuation));
        }
        let digits = self.unit_digits().min(other.unit_digits());
        let v = self.valuation - other.valuation;
        let m = pow_big(p, digits);
        let unit = (&self.unit * mod_inverse(&other.unit.mod_floor(&m), &m)).mod_floor(&m);
        Ok(PadicElement { prime: p.clone(), valuation: v, unit, precision: v + digits })
    }

    fn truncate(&self, precision: i64) -> Self {
        if precision >= self.precision {
            return self.clone();
        }
        if self.is_zero_to_precision() || self.valuation >= precision {
            return Self::zero_to_precision(&self.prime, precision);
        }
        let m = pow_big(&self.prime, precision - self.valuation);
        PadicElement {
            prime: self.prime.clone(),
            valuation: self.valuation,
            unit: self.unit.mod_floor(&m),
            precision,
        }
    }

    /// Square root with both precision accounting and existence decision.
    /// `Ok(None)` means "provably not a square"; insufficient digits surface
    /// as an error so the caller can retry at higher working precision.
    pub fn sqrt(&self) -> Result<Option<Self>> {
        let p = &self.prime;
        let two = p == &BigInt::from(2);
        let needed = if two { 3 } else { 1 };
        if self.is_zero_to_precision() || self.unit_digits() < needed {
            return Err(Error::InsufficientPrecision {
                prime: p.clone(),
                needed: self.valuation + needed,
                have: self.precision,
            });
        }
        if self.valuation % 2 != 0 {
            return Ok(None);
        }
        let k = self.unit_digits();
        let root = match sqrt_unit_mod_prime_power(&self.unit, p, k as u32) {
            Some(r) => r,
            None => return Ok(None),
        };
        let root_digits = if two { k - 1 } else { k };
        let v = self.valuation / 2;
        let m = pow_big(p, root_digits);
        Ok(Some(PadicElement {
            prime: p.clone(),
            valuation: v,
            unit: root.mod_floor(&m),
            precision: v + root_digits,
        }))
    }

    /// Is this element a square in Q_p? Errors if fewer unit digits are known
    /// than the decision needs (3 for odd p counting the safety margin the
    /// contract asks for, 5 for p = 2).
    pub fn is_square(&self) -> Result<bool> {
        padic_sqrt_exists(self)
    }
}

/// Decide squareness of a p-adic approximation. Contract: the element must
/// carry `precision >= valuation + 2*(1 + [p=2]) + 1`, i.e. at least 3 known
/// unit digits for odd p and 5 for p = 2; otherwise the decision would rest
/// on unknown digits and an `InsufficientPrecision` error is returned.
pub fn padic_sqrt_exists(x: &PadicElement) -> Result<bool> {
    let two = x.prime == BigInt::from(2);
    let needed = 2 * (1 + i64::from(two)) + 1;
    if x.is_zero_to_precision() || x.unit_digits() < needed {
        return Err(Error::InsufficientPrecision {
            prime: x.prime.clone(),
            needed: x.valuation + needed,
            have: x.precision,
        });
    }
    if x.valuation % 2 != 0 {
        return Ok(false);
    }
    if two {
        Ok(x.unit.mod_floor(&BigInt::from(8)) == BigInt::one())
    } else {
        Ok(jacobi(&x.unit, &x.prime) == 1)
    }
}

/// Exact: is the nonzero rational q a square in Q_p?
pub fn rational_is_square_at(q: &Rational, p: &BigInt) -> bool {
    debug_assert!(!q.is_zero());
    let (v, u) = split_valuation(q, p);
    if v % 2 != 0 {
        return false;
    }
    unit_rational_is_square_at(&u, p)
}

/// Exact: is the nonzero rational q a fourth power in Q_p?
pub fn rational_is_fourth_power_at(q: &Rational, p: &BigInt) -> bool {
    debug_assert!(!q.is_zero());
    let (v, u) = split_valuation(q, p);
    if v % 4 != 0 {
        return false;
    }
    if p == &BigInt::from(2) {
        // (Z_2^*)^4 = 1 + 16 Z_2.
        return unit_rational_mod(&u, p, 4) == BigInt::one();
    }
    // u in (Z_p^*)^4 iff u^((p-1)/gcd(4, p-1)) = 1 mod p; Hensel lifts since
    // the derivative 4x^3 is a unit.
    let pm1 = p - 1u32;
    let g = pm1.gcd(&BigInt::from(4));
    let e = &pm1 / g;
    let un = unit_rational_mod(&u, p, 1);
    un.modpow(&e, p) == BigInt::one()
}

/// Unit rational u (v_p(u) = 0) reduced mod p^k.
pub fn unit_rational_mod(u: &Rational, p: &BigInt, k: u32) -> BigInt {
    let m = pow_big(p, k as i64);
    let num = u.numer().mod_floor(&m);
    let den = mod_inverse(&u.denom().mod_floor(&m), &m);
    (num * den).mod_floor(&m)
}

fn unit_rational_is_square_at(u: &Rational, p: &BigInt) -> bool {
    if p == &BigInt::from(2) {
        unit_rational_mod(u, p, 3) == BigInt::one()
    } else {
        let r = unit_rational_mod(u, p, 1);
        jacobi(&r, p) == 1
    }
}

/// Square root of a unit modulo p^k, if one exists. For p = 2 the result is
/// determined modulo 2^(k-1) only; the returned value is one valid lift.
pub fn sqrt_unit_mod_prime_power(a: &BigInt, p: &BigInt, k: u32) -> Option<BigInt> {
    let two = BigInt::from(2);
    if p == &two {
        if k == 0 {
            return Some(BigInt::zero());
        }
        let a8 = a.mod_floor(&BigInt::from(8.min(1 << k)));
        if k == 1 {
            return Some(BigInt::one());
        }
        if k == 2 {
            return if a8.mod_floor(&BigInt::from(4)) == BigInt::one() {
                Some(BigInt::one())
            } else {
                None
            };
        }
        if a8 != BigInt::one() {
            return None;
        }
        // Lift bit by bit: given r^2 = a mod 2^i, adjust by 2^(i-1).
        let mut r = BigInt::one();
        let mut i = 3u32;
        while i < k {
            let m_next = pow_big(p, (i + 1) as i64);
            if ((&r * &r - a).mod_floor(&m_next)).is_zero() {
                i += 1;
                continue;
            }
            r += pow_big(p, (i - 1) as i64);
            i += 1;
        }
        return Some(r.mod_floor(&pow_big(p, k as i64)));
    }
    let a0 = a.mod_floor(p);
    if a0.is_zero() {
        return None; // not a unit
    }
    let mut r = tonelli_shanks(&a0, p)?;
    // Newton lifting doubles the number of correct digits each pass.
    let mut have = 1u32;
    while have < k {
        let next = (2 * have).min(k);
        let m = pow_big(p, next as i64);
        let inv = mod_inverse(&(2u32 * &r).mod_floor(&m), &m);
        let r2 = (&r * &r).mod_floor(&m);
        r = (&r - ((r2 - a.mod_floor(&m)) * inv)).mod_floor(&m);
        have = next;
    }
    Some(r)
}

/// Tonelli-Shanks square root modulo an odd prime.
pub fn tonelli_shanks(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return Some(BigInt::zero());
    }
    if jacobi(&a, p) != 1 {
        return None;
    }
    let one = BigInt::one();
    let two = BigInt::from(2);
    let pm1 = p - &one;
    if p.mod_floor(&BigInt::from(4)) == BigInt::from(3) {
        let e = (p + &one) / 4;
        return Some(a.modpow(&e, p));
    }
    // p = 1 mod 4: full Tonelli-Shanks.
    let s = pm1.trailing_zeros().unwrap_or(0);
    let q = &pm1 >> s;
    // Find a quadratic non-residue.
    let mut z = BigInt::from(2);
    while jacobi(&z, p) != -1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) / 2), p);
    while !t.is_one() {
        // Least i with t^(2^i) = 1.
        let mut i = 0u64;
        let mut t2 = t.clone();
        while !t2.is_one() {
            t2 = t2.modpow(&two, p);
            i += 1;
        }
        let b = c.modpow(&pow_big(&two, (m - i - 1) as i64), p);
        m = i;
        c = b.modpow(&two, p);
        t = (&t * &c).mod_floor(p);
        r = (&r * &b).mod_floor(p);
    }
    Some(r)
}

/// Canonical key for the class of a nonzero rational in Q_p^* / (Q_p^*)^2:
/// (valuation mod 2, quadratic character data of the unit part).
pub fn square_class_key(q: &Rational, p: &BigInt) -> (u8, BigInt) {
    let (v, u) = split_valuation(q, p);
    let tag = if p == &BigInt::from(2) {
        unit_rational_mod(&u, p, 3) // unit class mod squares is u mod 8
    } else {
        BigInt::from(jacobi(&unit_rational_mod(&u, p, 1), p) + 1) // 0 or 2
    };
    ((v.rem_euclid(2)) as u8, tag)
}

/// Canonical key for the class of a nonzero rational in Q_p^* / (Q_p^*)^4:
/// (valuation mod 4, quartic character data of the unit part).
pub fn fourth_power_class_key(q: &Rational, p: &BigInt) -> (u8, BigInt) {
    let (v, u) = split_valuation(q, p);
    let tag = if p == &BigInt::from(2) {
        unit_rational_mod(&u, p, 4) // (Z_2^*)^4 = 1 + 16 Z_2
    } else {
        let pm1 = p - 1u32;
        let g = pm1.gcd(&BigInt::from(4));
        let e = &pm1 / g;
        unit_rational_mod(&u, p, 1).modpow(&e, p)
    };
    ((v.rem_euclid(4)) as u8, tag)
}
