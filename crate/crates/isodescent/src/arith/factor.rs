//! Integer factorization sized for this crate's inputs: trial division over a
//! sieve, Brent's cycle-finding rho with a u128 fast path, and primality by
//! deterministic Miller-Rabin (exact below 3.317e24 with the first 13 prime
//! bases) plus a strong Lucas test beyond that range.

use super::{perfect_power, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::sync::OnceLock;

const TRIAL_BOUND: u64 = 1 << 16;

static SMALL_PRIMES: OnceLock<Vec<u64>> = OnceLock::new();

pub fn small_primes() -> &'static [u64] {
    SMALL_PRIMES.get_or_init(|| {
        let n = TRIAL_BOUND as usize;
        let mut is_comp = vec![false; n];
        let mut out = Vec::with_capacity(6600);
        for i in 2..n {
            if !is_comp[i] {
                out.push(i as u64);
                let mut j = i * i;
                while j < n {
                    is_comp[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

/// Prime factorization of |n| as an exponent map. n must be nonzero.
pub fn factorize(n: &BigInt) -> BTreeMap<BigInt, u32> {
    assert!(!n.is_zero(), "factorize(0) is undefined");
    let mut out = BTreeMap::new();
    let mut m = n.abs();
    if m.is_one() {
        return out;
    }
    for &p in small_primes() {
        let pb = BigInt::from(p);
        if (&pb * &pb) > m {
            break;
        }
        while (&m % &pb).is_zero() {
            m /= &pb;
            *out.entry(pb.clone()).or_insert(0) += 1;
        }
        if m.is_one() {
            return out;
        }
    }
    // Whatever is left has no factor below TRIAL_BOUND.
    split_into(m, 1, &mut out);
    out
}

/// Factor the numerator and denominator of a nonzero rational; denominator
/// primes get negative exponents.
pub fn factorize_rational(q: &Rational) -> BTreeMap<BigInt, i64> {
    assert!(!q.is_zero(), "factorize_rational(0) is undefined");
    let mut out: BTreeMap<BigInt, i64> = BTreeMap::new();
    for (p, e) in factorize(q.numer()) {
        *out.entry(p).or_insert(0) += e as i64;
    }
    for (p, e) in factorize(q.denom()) {
        *out.entry(p).or_insert(0) -= e as i64;
    }
    out.retain(|_, e| *e != 0);
    out
}

fn split_into(m: BigInt, multiplicity: u32, out: &mut BTreeMap<BigInt, u32>) {
    if m.is_one() {
        return;
    }
    if is_prime(&m) {
        *out.entry(m).or_insert(0) += multiplicity;
        return;
    }
    if let Some((b, k)) = perfect_power(&m) {
        split_into(b, multiplicity * k, out);
        return;
    }
    let d = rho_factor(&m);
    let q = &m / &d;
    split_into(d, multiplicity, out);
    split_into(q, multiplicity, out);
}

/// Brent's improvement of Pollard rho. Returns a nontrivial divisor of m,
/// which must be composite, odd-ish (no factor < TRIAL_BOUND) and not a
/// perfect power. Deterministic: the polynomial offset walks 1, 2, 3, ...
fn rho_factor(m: &BigInt) -> BigInt {
    if let Some(sm) = m.to_u128() {
        return BigInt::from(rho_u128(sm));
    }
    let one = BigInt::one();
    for c in 1u64.. {
        let cb = BigInt::from(c);
        let mut y = BigInt::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = (&y * &y + &cb) % m;
            }
            let mut k: u64 = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                let bound = 128.min(r - k);
                for _ in 0..bound {
                    y = (&y * &y + &cb) % m;
                    let diff = if x >= y { &x - &y } else { &y - &x };
                    q = (&q * &diff) % m;
                }
                g = q.gcd(m);
                k += bound;
            }
            r *= 2;
        }
        if &g == m {
            // Backtrack one step at a time.
            loop {
                ys = (&ys * &ys + &cb) % m;
                let diff = if x >= ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(m);
                if !g.is_one() {
                    break;
                }
            }
        }
        if g > one && &g < m {
            return g;
        }
    }
    unreachable!("rho on composite input must terminate");
}

fn mulmod_slow(mut a: u128, mut b: u128, m: u128) -> u128 {
    a %= m;
    let mut acc: u128 = 0;
    while b > 0 {
        if b & 1 == 1 {
            acc = acc.checked_add(a).map(|s| s % m).unwrap_or_else(|| {
                let s = a.wrapping_add(acc);
                s.wrapping_sub(m) % m
            });
        }
        b >>= 1;
        a = a.checked_add(a).map(|s| s % m).unwrap_or_else(|| {
            let s = a.wrapping_add(a);
            s.wrapping_sub(m) % m
        });
    }
    acc
}

fn rho_u128(m: u128) -> u128 {
    let f = |x: u128, c: u128| (mulmod_slow(x, x, m) + c) % m;
    for c in 1u128.. {
        let mut x: u128 = 2;
        let mut y: u128 = 2;
        let mut g: u128 = 1;
        while g == 1 {
            x = f(x, c);
            y = f(f(y, c), c);
            let diff = if x >= y { x - y } else { y - x };
            if diff == 0 {
                g = m;
                break;
            }
            g = gcd_u128(diff, m);
        }
        if g != m {
            return g;
        }
    }
    unreachable!()
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Deterministic primality below 3.317e24 (first 13 prime bases); above that
/// the same bases plus a strong Lucas test (BPSW flavor, no known
/// counterexamples, and nothing in this crate's input range gets there
/// without first being split by rho).
pub fn is_prime(n: &BigInt) -> bool {
    if n <= &BigInt::one() {
        return false;
    }
    let two = BigInt::from(2u32);
    if n == &two {
        return true;
    }
    if n.is_even() {
        return false;
    }
    for &p in &[3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let pb = BigInt::from(p);
        if n == &pb {
            return true;
        }
        if (n % pb).is_zero() {
            return false;
        }
    }
    let bases: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for &a in &bases {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    // Exact below the deterministic threshold.
    let threshold: BigInt = "3317044064679887385961981".parse().unwrap();
    if n < &threshold {
        return true;
    }
    strong_lucas_probable_prime(n)
}

/// Strong Lucas test with Selfridge's parameter choice.
fn strong_lucas_probable_prime(n: &BigInt) -> bool {
    use super::jacobi;
    if super::perfect_square_root(n).is_some() {
        return false;
    }
    // Find D in 5, -7, 9, -11, ... with (D/n) = -1.
    let mut d = BigInt::from(5);
    loop {
        let j = jacobi(&d, n);
        if j == -1 {
            break;
        }
        if j == 0 && d.abs() < *n {
            return false;
        }
        d = if d.is_positive() { -(d + 2i32) } else { -(d - 2i32) };
    }
    // P = 1, Q = (1 - D) / 4.
    let q = (BigInt::one() - &d) / 4i32;
    let delta = n + 1u32;
    let s = delta.trailing_zeros().unwrap_or(0);
    let dd = &delta >> s;

    // Compute U_dd, V_dd by binary ladder.
    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = q.mod_floor(n);
    let bits = dd.bits();
    let inv2 = super::mod_inverse(&BigInt::from(2), n);
    for i in (0..bits - 1).rev() {
        // Double: U_{2k} = U_k V_k, V_{2k} = V_k^2 - 2 Q^k.
        let u2 = (&u * &v).mod_floor(n);
        let v2 = (&v * &v - (&qk << 1u32)).mod_floor(n);
        let qk2 = (&qk * &qk).mod_floor(n);
        u = u2;
        v = v2;
        qk = qk2;
        if dd.bit(i) {
            // Add one: U_{k+1} = (P U_k + V_k)/2, V_{k+1} = (D U_k + P V_k)/2.
            let un = ((&u + &v) * &inv2).mod_floor(n);
            let vn = ((&d * &u + &v) * &inv2).mod_floor(n);
            u = un;
            v = vn;
            qk = (&qk * &q).mod_floor(n);
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = (&v * &v - (&qk << 1u32)).mod_floor(n);
        if v.is_zero() {
            return true;
        }
        qk = (&qk * &qk).mod_floor(n);
    }
    false
}
