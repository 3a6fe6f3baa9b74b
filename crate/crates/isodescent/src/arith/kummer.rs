//! Classes of nonzero rationals modulo k-th powers (k = 2 or 4), the ambient
//! group for all connecting-map images and Selmer elements here.
//!
//! Q^* / (Q^*)^k for even k splits as {+-1} x (direct sum over primes of
//! Z/k), since k-th powers are positive. A class is stored as its sign
//! together with the nonzero prime exponents reduced mod k, so equality,
//! multiplication and span computations are exact and cheap no matter how
//! large the representing rationals were.

use super::factor::factorize_rational;
use super::Rational;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KummerClass {
    /// 2 for classes mod squares, 4 for classes mod fourth powers.
    pub modulus: u8,
    /// Sign of the class representative; -1 has order 2 for either modulus.
    pub sign: i8,
    /// Prime exponents reduced into 0..modulus, zero entries omitted.
    pub exponents: BTreeMap<BigInt, u8>,
}

impl KummerClass {
    pub fn trivial(modulus: u8) -> Self {
        assert!(modulus == 2 || modulus == 4);
        KummerClass { modulus, sign: 1, exponents: BTreeMap::new() }
    }

    pub fn from_parts(sign: i8, pairs: &[(BigInt, u8)], modulus: u8) -> Self {
        assert!(modulus == 2 || modulus == 4);
        assert!(sign == 1 || sign == -1);
        let mut exponents = BTreeMap::new();
        for (p, e) in pairs {
            let e = e % modulus;
            if e != 0 {
                exponents.insert(p.clone(), e);
            }
        }
        KummerClass { modulus, sign, exponents }
    }

    pub fn is_trivial(&self) -> bool {
        self.sign == 1 && self.exponents.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.modulus, other.modulus);
        let mut exponents = self.exponents.clone();
        for (p, e) in &other.exponents {
            let cur = exponents.remove(p).unwrap_or(0);
            let sum = (cur + e) % self.modulus;
            if sum != 0 {
                exponents.insert(p.clone(), sum);
            }
        }
        KummerClass { modulus: self.modulus, sign: self.sign * other.sign, exponents }
    }

    pub fn inverse(&self) -> Self {
        let exponents = self
            .exponents
            .iter()
            .map(|(p, e)| (p.clone(), self.modulus - e))
            .collect();
        KummerClass { modulus: self.modulus, sign: self.sign, exponents }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut exponents = BTreeMap::new();
        for (p, e) in &self.exponents {
            let v = ((*e as u32 * k) % self.modulus as u32) as u8;
            if v != 0 {
                exponents.insert(p.clone(), v);
            }
        }
        let sign = if k % 2 == 0 { 1 } else { self.sign };
        KummerClass { modulus: self.modulus, sign, exponents }
    }

    /// Square of a mod-squares class, viewed mod fourth powers. This is the
    /// injection Q^*/sq -> Q^*/4th given by d -> d^2.
    pub fn square_into_mod4(&self) -> Self {
        assert_eq!(self.modulus, 2);
        let exponents = self.exponents.iter().map(|(p, _)| (p.clone(), 2u8)).collect();
        KummerClass { modulus: 4, sign: 1, exponents }
    }

    /// Natural projection Q^*/4th -> Q^*/sq.
    pub fn project_mod2(&self) -> Self {
        assert_eq!(self.modulus, 4);
        let exponents = self
            .exponents
            .iter()
            .filter(|(_, e)| *e % 2 == 1)
            .map(|(p, e)| (p.clone(), e % 2))
            .collect();
        KummerClass { modulus: 2, sign: self.sign, exponents }
    }

    /// Smallest integer representative: sign * prod p^e with e in 0..modulus.
    pub fn representative(&self) -> Rational {
        let mut n = BigInt::one();
        for (p, e) in &self.exponents {
            n *= num_traits::pow::pow(p.clone(), *e as usize);
        }
        if self.sign < 0 {
            n = -n;
        }
        Rational::from_integer(n)
    }

    /// Primes appearing in the class (its support).
    pub fn support(&self) -> BTreeSet<BigInt> {
        self.exponents.keys().cloned().collect()
    }
}

/// Class of a nonzero rational modulo k-th powers.
pub fn kummer_class(q: &Rational, modulus: u8) -> KummerClass {
    assert!(modulus == 2 || modulus == 4);
    assert!(!q.is_zero(), "zero has no Kummer class");
    let mut exponents = BTreeMap::new();
    for (p, e) in factorize_rational(q) {
        let r = (e.rem_euclid(modulus as i64)) as u8;
        if r != 0 {
            exponents.insert(p, r);
        }
    }
    KummerClass { modulus, sign: if q.is_negative() { -1 } else { 1 }, exponents }
}

/// Do two rationals lie in the same class mod k-th powers? Decided without
/// factoring: q1/q2 must be a k-th power, which `perfect_kth_root` checks on
/// numerator and denominator directly.
pub fn same_class_rational(q1: &Rational, q2: &Rational, modulus: u8) -> bool {
    assert!(!q1.is_zero() && !q2.is_zero());
    let ratio = q1 / q2;
    super::rational_kth_root(&ratio, modulus as u32).is_some()
}

/// Multiplicative closure of a set of generators (always contains the
/// trivial class). Fine for the group sizes descent produces.
pub fn span(generators: &[KummerClass], modulus: u8) -> BTreeSet<KummerClass> {
    let mut out = BTreeSet::new();
    out.insert(KummerClass::trivial(modulus));
    let mut frontier: Vec<KummerClass> = vec![KummerClass::trivial(modulus)];
    while let Some(cur) = frontier.pop() {
        for g in generators {
            let next = cur.mul(g);
            if out.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }
    out
}

/// log2 of the size of the span of `generators`.
pub fn span_log2(generators: &[KummerClass], modulus: u8) -> u32 {
    let n = span(generators, modulus).len();
    debug_assert!(n.is_power_of_two());
    n.trailing_zeros()
}

/// Number of invariant factors of the span, i.e. dim_F2 (H / 2H). For
/// modulus 2 this is just log2 |H|; for modulus 4 square the generators to
/// get 2H.
pub fn invariant_factor_count(generators: &[KummerClass], modulus: u8) -> u32 {
    let h = span_log2(generators, modulus);
    if modulus == 2 {
        return h;
    }
    let squares: Vec<KummerClass> = generators.iter().map(|g| g.pow(2)).collect();
    h - span_log2(&squares, modulus)
}

impl fmt::Display for KummerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative().numer())
    }
}

impl Serialize for KummerClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&format!("{self}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn classes_reduce_modulo_kth_powers() {
        let c = kummer_class(&rat(-48, 1), 2); // -48 = -3 * 16
        assert_eq!(c.representative(), rat(-3, 1));
        let c4 = kummer_class(&rat(-48, 1), 4); // -48 = -(2^4) * 3
        assert_eq!(c4.representative(), rat(-3, 1));
        let c4b = kummer_class(&rat(32, 1), 4); // 2^5 -> 2
        assert_eq!(c4b.representative(), rat(2, 1));
        let den = kummer_class(&rat(1, 2), 2); // 1/2 ~ 2 mod squares
        assert_eq!(den.representative(), rat(2, 1));
        let den4 = kummer_class(&rat(1, 2), 4); // 1/2 ~ 2^3 mod fourth powers
        assert_eq!(den4.representative(), rat(8, 1));
    }

    #[test]
    fn group_laws_hold_on_many_rationals() {
        // Deterministic LCG-driven sample; the product/inverse/power laws
        // must agree with arithmetic on the underlying rationals.
        let mut state = 0x3c6ef372fe94f82bu64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            state
        };
        for modulus in [2u8, 4] {
            for _ in 0..250 {
                let a = (next() % 4001) as i64 - 2000;
                let b = (next() % 997) as i64 + 1;
                let c = (next() % 4001) as i64 - 2000;
                let d = (next() % 997) as i64 + 1;
                if a == 0 || c == 0 {
                    continue;
                }
                let q1 = rat(a, b);
                let q2 = rat(c, d);
                let k1 = kummer_class(&q1, modulus);
                let k2 = kummer_class(&q2, modulus);
                assert_eq!(k1.mul(&k2), kummer_class(&(&q1 * &q2), modulus));
                assert_eq!(k1.inverse(), kummer_class(&(rat(1, 1) / &q1), modulus));
                assert!(k1.mul(&k1.inverse()).is_trivial());
                let p4 = k1.pow(modulus as u32);
                assert!(p4.is_trivial(), "q^k is trivial mod kth powers");
                let shifted = &q1 * q2.pow(modulus as i32);
                assert!(same_class_rational(&q1, &shifted, modulus));
                assert_eq!(k1, kummer_class(&shifted, modulus));
            }
        }
    }

    #[test]
    fn same_class_matches_explicit_classes() {
        assert!(same_class_rational(&rat(2, 1), &rat(32, 1), 2)); // ratio 1/16
        assert!(same_class_rational(&rat(2, 1), &rat(32, 1), 4)); // ratio 1/16 = (1/2)^4
        assert!(!same_class_rational(&rat(2, 1), &rat(8, 1), 4)); // ratio 1/4 is not a 4th power
        assert!(!same_class_rational(&rat(2, 1), &rat(7, 1), 2));
        assert!(same_class_rational(&rat(-3, 1), &rat(-27, 1), 2)); // ratio 1/9
        assert!(same_class_rational(&rat(5, 1), &rat(405, 1), 4)); // 405 = 5 * 81
    }

    #[test]
    fn projection_and_squaring_between_moduli() {
        let c = kummer_class(&rat(12, 1), 4); // 2^2 * 3
        let down = c.project_mod2(); // 3 mod squares
        assert_eq!(down.representative(), rat(3, 1));
        let sq = kummer_class(&rat(-6, 1), 2).square_into_mod4(); // 36 mod 4th
        assert_eq!(sq.representative(), rat(36, 1));
        assert!(!sq.is_trivial());
        assert_eq!(sq.project_mod2().representative(), rat(1, 1));
        // -1 is nontrivial mod fourth powers and not a square of any class.
        let neg = kummer_class(&rat(-1, 1), 4);
        assert!(!neg.is_trivial());
        assert_eq!(neg.pow(2), KummerClass::trivial(4));
    }

    #[test]
    fn spans_and_invariant_factors() {
        let g1 = kummer_class(&rat(2, 1), 2);
        let g2 = kummer_class(&rat(3, 1), 2);
        let g3 = kummer_class(&rat(6, 1), 2);
        assert_eq!(span(&[g1.clone(), g2.clone(), g3.clone()], 2).len(), 4);
        assert_eq!(span_log2(&[g1.clone(), g2.clone()], 2), 2);
        assert_eq!(invariant_factor_count(&[g1, g2], 2), 2);
        // Mod fourth powers: <2> has order 4, one invariant factor.
        let h = kummer_class(&rat(2, 1), 4);
        assert_eq!(span(&[h.clone()], 4).len(), 4);
        assert_eq!(invariant_factor_count(&[h.clone()], 4), 1);
        // <2, 4> is still cyclic of order 4.
        let h2 = kummer_class(&rat(4, 1), 4);
        assert_eq!(span(&[h.clone(), h2.clone()], 4).len(), 4);
        assert_eq!(invariant_factor_count(&[h, h2.clone()], 4), 1);
        // <4, -1> is (Z/2)^2: two invariant factors.
        let m1 = kummer_class(&rat(-1, 1), 4);
        assert_eq!(span(&[h2.clone(), m1.clone()], 4).len(), 4);
        assert_eq!(invariant_factor_count(&[h2, m1], 4), 2);
    }
}
