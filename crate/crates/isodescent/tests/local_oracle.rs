//! Independent oracles for local solvability of the descent spaces.
//!
//! Everything in `mod oracle` is built from scratch on elementary integer
//! arithmetic: residue subdivision with exact evaluation, Legendre symbols
//! by modular exponentiation, integer Hensel lifting for square roots, and
//! exact real calculus. None of it shares code with the production solver,
//! so agreement on the grids below is meaningful evidence.

use isodescent::descent::{biquadratic_local_solvable, quartic_local_solvable};
use isodescent::{BiquadraticSpace, Place, QuarticSpace, Rational, TwoIsogenyDirection};
use num_bigint::BigInt;

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

mod oracle {
    use super::*;
    use num_integer::{Integer, Roots};
    use num_traits::{One, Signed, ToPrimitive, Zero};

    #[derive(Clone, Copy, Debug, PartialEq, Eq)]
    pub enum Verdict {
        Yes,
        No,
        Unknown,
    }

    /// p-adic valuation of a nonzero integer.
    pub fn vp(n: &BigInt, p: &BigInt) -> i64 {
        assert!(!n.is_zero());
        let mut v = 0;
        let mut m = n.clone();
        while (&m % p).is_zero() {
            m /= p;
            v += 1;
        }
        v
    }

    /// Valuation plus the unit parts of numerator and denominator.
    fn split_rat(q: &Rational, p: &BigInt) -> (i64, BigInt, BigInt) {
        let vn = vp(q.numer(), p);
        let vd = vp(q.denom(), p);
        let un = q.numer() / p.pow(vn as u32);
        let ud = q.denom() / p.pow(vd as u32);
        (vn - vd, un, ud)
    }

    /// Legendre symbol of a unit modulo an odd prime, by exponentiation.
    fn legendre(a: &BigInt, p: &BigInt) -> i32 {
        let r = a.mod_floor(p);
        assert!(!r.is_zero(), "legendre symbol of a non-unit");
        let e = (p - 1u32) / 2u32;
        let s = r.modpow(&e, p);
        if s.is_one() {
            1
        } else {
            -1
        }
    }

    /// Is the nonzero rational a square in Q_p?
    pub fn is_square_rat(q: &Rational, p: &BigInt) -> bool {
        let (v, un, ud) = split_rat(q, p);
        if v % 2 != 0 {
            return false;
        }
        let u = un * ud;
        if p == &BigInt::from(2) {
            u.mod_floor(&BigInt::from(8)).is_one()
        } else {
            legendre(&u, p) == 1
        }
    }

    fn is_square_int(n: &BigInt, p: &BigInt) -> bool {
        is_square_rat(&Rational::from_integer(n.clone()), p)
    }

    /// Does the integer polynomial take a square value (or vanish) on Z_p?
    ///
    /// Residue classes are split until the value at the exact center either
    /// certifies a point (an exact square in Q_p stands on its own) or is
    /// shallow enough that its square class is constant on the whole class:
    /// an integer polynomial moves by multiples of p^level across
    /// center + p^level Z_p.
    pub fn square_value_reached(coeffs: &[BigInt], p: &BigInt, cap: u32) -> Verdict {
        let margin: i64 = if p == &BigInt::from(2) { 3 } else { 1 };
        let p_small = p.to_u64().expect("small prime");
        let mut stack: Vec<(BigInt, u32)> = (0..p_small)
            .map(|r| (BigInt::from(r), 1u32))
            .collect();
        let mut unknown = false;
        while let Some((center, level)) = stack.pop() {
            let mut val = BigInt::zero();
            for c in coeffs.iter().rev() {
                val = val * &center + c;
            }
            if val.is_zero() || is_square_int(&val, p) {
                return Verdict::Yes;
            }
            if vp(&val, p) + margin <= level as i64 {
                continue;
            }
            if level >= cap {
                unknown = true;
                continue;
            }
            let step = p.pow(level);
            for i in 0..p_small {
                stack.push((&center + i * &step, level + 1));
            }
        }
        if unknown {
            Verdict::Unknown
        } else {
            Verdict::No
        }
    }

    /// Clear denominators of a rational polynomial by a square factor, which
    /// leaves every value's square class in Q_p unchanged.
    fn integer_coeffs(raw: &[Rational]) -> Vec<BigInt> {
        let mut l = BigInt::one();
        for c in raw {
            l = l.lcm(c.denom());
        }
        let l2 = Rational::from_integer(&l * &l);
        raw.iter().map(|c| (c * &l2).to_integer()).collect()
    }

    /// Local solvability of d W^2 = d^2 + b d Z^2 + c Z^4 over Q_p via the
    /// two affine charts (d W)^2 = d^3 + b d^2 Z^2 + c d Z^4 and its
    /// reciprocal  (d W')^2 = c d + b d^2 Z'^2 + d^3 Z'^4.
    pub fn quartic(space: &QuarticSpace, p: &BigInt) -> Verdict {
        let (d, b, c) = (&space.d, &space.b, &space.c);
        let a0 = d * d * d;
        let a2 = b * d * d;
        let a4 = c * d;
        let chart_a = integer_coeffs(&[a0.clone(), rat(0, 1), a2.clone(), rat(0, 1), a4.clone()]);
        let chart_b = integer_coeffs(&[a4, rat(0, 1), a2, rat(0, 1), a0]);
        let mut saw_unknown = false;
        for chart in [chart_a, chart_b] {
            let gap = &chart[2] * &chart[2]
                - BigInt::from(4) * &chart[0] * &chart[4];
            let sentinel = BigInt::from(2) * &chart[0] * &chart[4] * gap;
            let margin: i64 = if p == &BigInt::from(2) { 3 } else { 1 };
            let cap = (2 * (vp(&sentinel, p) + margin) + 10).max(16) as u32;
            match square_value_reached(&chart, p, cap) {
                Verdict::Yes => return Verdict::Yes,
                Verdict::No => {}
                Verdict::Unknown => saw_unknown = true,
            }
        }
        if saw_unknown {
            Verdict::Unknown
        } else {
            Verdict::No
        }
    }

    /// Real solvability of the quartic space, by evaluating the quadratic
    /// q(x) = d^2 + b d x + c x^2 at x = 0, at its vertex, and at infinity.
    pub fn quartic_real(space: &QuarticSpace) -> bool {
        let zero = rat(0, 1);
        let (d, b, c) = (&space.d, &space.b, &space.c);
        if d > &zero {
            return true;
        }
        if &(c * d) > &zero {
            return true;
        }
        // d < 0: the curve needs q(x) <= 0 at some x = Z^2 >= 0, and q
        // opens upward here (c d < 0, d < 0 force c > 0).
        let vertex = -(b * d) / (rat(2, 1) * c);
        if vertex <= zero {
            return false;
        }
        let q_min = d * d + b * d * &vertex + c * &vertex * &vertex;
        q_min <= zero
    }

    /// Modular inverse by the extended euclidean algorithm.
    fn inv_mod(a: &BigInt, m: &BigInt) -> BigInt {
        let e = a.extended_gcd(m);
        assert!(e.gcd.is_one(), "inverse of a non-unit");
        e.x.mod_floor(m)
    }

    /// Square root of a unit u modulo p^m by Hensel lifting. Returns None
    /// when u is not a square unit.
    fn sqrt_unit_mod(u: &BigInt, p: &BigInt, m: u32) -> Option<BigInt> {
        if p == &BigInt::from(2) {
            if !u.mod_floor(&BigInt::from(8)).is_one() {
                return None;
            }
            let mut r = BigInt::one();
            let mut k = 3u32;
            let modulus = p.pow(m);
            while k < m {
                let e = (&r * &r - u) / BigInt::from(2).pow(k);
                if e.is_odd() {
                    r += BigInt::from(2).pow(k - 1);
                }
                k += 1;
            }
            return Some(r.mod_floor(&modulus));
        }
        let p_small = p.to_u64().expect("small prime");
        let u0 = u.mod_floor(p);
        let mut r = BigInt::zero();
        let mut found = false;
        for x in 1..p_small {
            if (BigInt::from(x) * BigInt::from(x)).mod_floor(p) == u0 {
                r = BigInt::from(x);
                found = true;
                break;
            }
        }
        if !found {
            return None;
        }
        let mut k = 1u32;
        while k < m {
            let k2 = (2 * k).min(m);
            let modulus = p.pow(k2);
            let two_inv = inv_mod(&BigInt::from(2), &modulus);
            r = ((&r + u * inv_mod(&r, &modulus)) * two_inv).mod_floor(&modulus);
            k = k2;
        }
        Some(r)
    }

    /// Square class of an exact p-adic integer sigma (known mod p^prec)
    /// times an exact rational kappa.
    fn product_is_square(sigma: &BigInt, kappa: &Rational, p: &BigInt) -> bool {
        let vs = vp(sigma, p);
        let us = sigma / p.pow(vs as u32);
        let (vk, un, ud) = split_rat(kappa, p);
        if (vs + vk) % 2 != 0 {
            return false;
        }
        let u = us * un * ud;
        if p == &BigInt::from(2) {
            u.mod_floor(&BigInt::from(8)).is_one()
        } else {
            legendre(&u, p) == 1
        }
    }

    /// Try to certify a Q_p point of the biquadratic space with w = wstar.
    ///
    /// Substituting s = z^2 turns the space into the quadratic
    /// (-d/(4t^2)) s^2 + d w s - (w^2-d)^2 = 0 with discriminant/4t^-2 form
    /// Delta(w) = d^2 w^2 - (d/t^2)(w^2-d)^2 and roots
    /// s = (d w +/- sqrt(Delta)) 2t^2/d. A point exists at wstar exactly
    /// when some root is a nonzero square in Q_p; the root is computed to
    /// explicit precision with integer Hensel lifting.
    pub fn biq_point_at(space: &BiquadraticSpace, p: &BigInt, wstar: &Rational) -> bool {
        let (d, t) = (&space.d, &space.t);
        let t2 = t * t;
        let shift = wstar * wstar - d;
        if shift.is_zero() {
            // Double root collapse: s (d wstar - d s/(4t^2)) = 0, and the
            // zero root is the node over z = 0.
            return is_square_rat(&(rat(4, 1) * &t2 * wstar), p);
        }
        let delta2 = d * d * wstar * wstar - (d / &t2) * &shift * &shift;
        if delta2.is_zero() {
            return is_square_rat(&(rat(2, 1) * &t2 * wstar), p);
        }
        if !is_square_rat(&delta2, p) {
            return false;
        }
        // Clear denominators: with C = den(d wstar) * den(Delta),
        // A = C d wstar and C^2 Delta are integers and
        // s = (A +/- sqrt(C^2 Delta)) * 2t^2/(d C).
        let q = d * wstar;
        let c_fac = q.denom() * delta2.denom();
        let a_val = (&q * Rational::from_integer(c_fac.clone())).to_integer();
        let i_val = (&delta2 * Rational::from_integer(&c_fac * &c_fac)).to_integer();
        let vi = vp(&i_val, p);
        debug_assert!(vi % 2 == 0);
        let kappa = rat(2, 1) * &t2 / (d * Rational::from_integer(c_fac));
        for extra in [48i64, 96] {
            let m = (vi + extra) as u32;
            let unit = &i_val / p.pow(vi as u32);
            let Some(root_unit) = sqrt_unit_mod(&unit.mod_floor(&p.pow(m)), p, m) else {
                return false;
            };
            let dhat = root_unit * p.pow((vi / 2) as u32);
            let modulus = p.pow(m);
            let mut deep = false;
            for sgn in [1i64, -1] {
                let sigma = (&a_val + BigInt::from(sgn) * &dhat).mod_floor(&modulus);
                if sigma.is_zero() || vp(&sigma, p) > (m as i64) - 6 {
                    deep = true;
                    continue;
                }
                if product_is_square(&sigma, &kappa, p) {
                    return true;
                }
            }
            if !deep {
                return false;
            }
        }
        false
    }

    /// Search a grid of exact rational w for a certified point.
    pub fn biq_search(space: &BiquadraticSpace, p: &BigInt) -> bool {
        let vd = vp_rat_abs(&space.d, p);
        let vt = vp_rat_abs(&space.t, p);
        let window = 7 + vd + 2 * vt;
        if biq_point_at(space, p, &rat(0, 1)) {
            return true;
        }
        for k in -window..=window {
            for u in 1..=300i64 {
                if BigInt::from(u).mod_floor(p).is_zero() {
                    continue;
                }
                for sgn in [1i64, -1] {
                    let wstar = Rational::from_integer(BigInt::from(sgn * u))
                        * power_of(p, k);
                    if biq_point_at(space, p, &wstar) {
                        return true;
                    }
                }
            }
        }
        false
    }

    fn vp_rat_abs(q: &Rational, p: &BigInt) -> i64 {
        let (v, _, _) = split_rat(q, p);
        v.abs()
    }

    fn power_of(p: &BigInt, k: i64) -> Rational {
        if k >= 0 {
            Rational::from_integer(p.pow(k as u32))
        } else {
            Rational::new(BigInt::one(), p.pow((-k) as u32))
        }
    }

    /// Construct evidence of a real point on the biquadratic space.
    ///
    /// For d > 0 a rational w near sqrt(d) makes d t^2 w^2 - (w^2-d)^2
    /// positive, which is the space evaluated at z^2 = 2t^2 w; the value at
    /// the exact point is positive while both w-tails go to -infinity, so a
    /// real point exists. For d < 0 pick lambda with lambda^4 < -d/(4t^2);
    /// along w = lambda z the leading z^4 coefficient is positive, so some
    /// rational (z, lambda z) has positive value and the tails argument
    /// applies again.
    pub fn biq_real(space: &BiquadraticSpace) -> bool {
        let (d, t) = (&space.d, &space.t);
        let t2 = t * t;
        let zero = rat(0, 1);
        if d > &zero {
            for m in 0..64u32 {
                let scale = BigInt::from(4).pow(m);
                let floor = (d * Rational::from_integer(scale)).to_integer();
                let wstar = Rational::new(floor.sqrt(), BigInt::from(2).pow(m));
                let shift = &wstar * &wstar - d;
                if d * &t2 * &wstar * &wstar - &shift * &shift > zero {
                    return true;
                }
            }
            return false;
        }
        let bound = -d / (rat(4, 1) * &t2);
        let mut lam = rat(1, 1);
        while &lam * &lam * &lam * &lam >= bound {
            lam = lam / rat(2, 1);
        }
        let mut z = rat(1, 1);
        for _ in 0..256 {
            let w = &lam * &z;
            let z2 = &z * &z;
            let shift = &w * &w - d;
            let val = d * (&w - &z2 / (rat(4, 1) * &t2)) * &z2 - &shift * &shift;
            if val > zero {
                return true;
            }
            z = z * rat(2, 1);
        }
        false
    }
}

/// Grid of (t, finite places, fourth-power-free d values supported there).
fn quartic_grid() -> Vec<(Rational, Vec<u64>, Vec<i64>)> {
    vec![
        (
            rat(8, 1),
            vec![2, 3, 5, 17],
            vec![1, -1, 2, -2, 17, -17, 34, -34, 3, -3],
        ),
        (
            rat(3, 2),
            vec![2, 3, 5, 7],
            vec![1, -1, 2, -2, 3, -3, 5, -5, 15, -15, 30, -30],
        ),
        (
            rat(5, 1),
            vec![2, 3, 5, 29],
            vec![1, -1, 5, -5, 29, -29, 145, -145, 2, -2],
        ),
    ]
}

#[test]
fn quartic_solvability_matches_the_subdivision_oracle() {
    for (t, primes, ds) in quartic_grid() {
        for dir in TwoIsogenyDirection::ALL {
            for &d in &ds {
                let space = dir.space(rat(d, 1), &t).unwrap();
                let prod_real = quartic_local_solvable(&space, &Place::Infinite)
                    .unwrap()
                    .solvable;
                assert_eq!(
                    prod_real,
                    oracle::quartic_real(&space),
                    "real place, {dir:?}, d = {d}, t = {t}"
                );
                for &q in &primes {
                    let p = BigInt::from(q);
                    let verdict = oracle::quartic(&space, &p);
                    assert_ne!(
                        verdict,
                        oracle::Verdict::Unknown,
                        "oracle inconclusive at p = {q}, {dir:?}, d = {d}, t = {t}"
                    );
                    let prod = quartic_local_solvable(&space, &Place::finite(q))
                        .unwrap()
                        .solvable;
                    assert_eq!(
                        prod,
                        verdict == oracle::Verdict::Yes,
                        "p = {q}, {dir:?}, d = {d}, t = {t}"
                    );
                }
            }
        }
    }
}

#[test]
fn selmer_membership_sets_recomputed_by_the_oracle_alone() {
    // t = 8, Sigma = {2, 17, infinity}; membership asks for solvability at
    // every place of Sigma. These sets feed the worked rank bounds.
    let t = rat(8, 1);
    let candidates = [1i64, -1, 2, -2, 17, -17, 34, -34];
    let everywhere = |dir: TwoIsogenyDirection, d: i64| -> bool {
        let space = dir.space(rat(d, 1), &t).unwrap();
        if !oracle::quartic_real(&space) {
            return false;
        }
        [2u64, 17].iter().all(|&q| {
            oracle::quartic(&space, &BigInt::from(q)) == oracle::Verdict::Yes
        })
    };
    let varphi_hat: Vec<i64> = candidates
        .iter()
        .copied()
        .filter(|&d| everywhere(TwoIsogenyDirection::VarphiHat, d))
        .collect();
    assert_eq!(varphi_hat, vec![1, -1]);
    let eta: Vec<i64> = candidates
        .iter()
        .copied()
        .filter(|&d| everywhere(TwoIsogenyDirection::Eta, d))
        .collect();
    assert_eq!(eta, vec![1, -1, 2, -2]);
}

#[test]
fn biquadratic_yes_verdicts_carry_point_certificates() {
    let grids: Vec<(Rational, Vec<u64>, Vec<i64>)> = vec![
        (
            rat(8, 1),
            vec![2, 17],
            vec![1, -1, 2, -2, 4, -4, 17, -17, 8, -8, 68, -68],
        ),
        (
            rat(3, 2),
            vec![2, 3, 5],
            vec![1, -1, 3, -3, 9, -9, 5, -5, 15, -15, 45, -45],
        ),
    ];
    for (t, primes, ds) in grids {
        for &d in &ds {
            let space = BiquadraticSpace::new(rat(d, 1), t.clone()).unwrap();
            for &q in &primes {
                let p = BigInt::from(q);
                let prod = biquadratic_local_solvable(&space, &Place::finite(q))
                    .unwrap()
                    .solvable;
                let cert = oracle::biq_search(&space, &p);
                assert_eq!(
                    prod, cert,
                    "p = {q}, d = {d}, t = {t}: production {prod}, certificate {cert}"
                );
            }
        }
    }
}

#[test]
fn biquadratic_real_points_constructed_explicitly() {
    for (t, _, ds) in quartic_grid() {
        for &d in &ds {
            let space = BiquadraticSpace::new(rat(d, 1), t.clone()).unwrap();
            assert!(
                biquadratic_local_solvable(&space, &Place::Infinite)
                    .unwrap()
                    .solvable
            );
            assert!(oracle::biq_real(&space), "d = {d}, t = {t}");
        }
    }
}
