//! Height-bounded search for rational points on the biquadratic spaces.
//!
//! The space d(w - z^2/(4t^2)) z^2 = (w^2 - d)^2 is quadratic in s = z^2, so
//! a candidate abscissa w carries a point exactly when the discriminant of
//! that quadratic is a rational square and one of the two roots s is itself
//! a nonzero rational square. The search walks w = m/n ordered by the height
//! max(|m|, n) and applies that two-step square test.
//!
//! Writing d = a/b and t^2 = p/q in lowest terms, the discriminant is a
//! square if and only if the integer
//!
//!   K(m, n) = a b q (a b p m^2 n^2 - q (b m^2 - a n^2)^2)
//!
//! is a perfect square. Almost every w is rejected by K alone, so the scan
//! first tests K modulo a fixed composite (a nonresidue at any prime-power
//! factor refutes squareness) and falls back to exact arithmetic only for
//! the survivors. For d > 0 the discriminant is negative outside an explicit
//! window of |w|, which is checked in floating point with a wide margin
//! before anything else; for d < 0 it is nonnegative everywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::spaces::BiquadraticSpace;
use crate::arith::{rational_sqrt, Rational};

/// Reduced pairs (m, n) representing w = m/n with max(|m|, n) <= height,
/// ordered by that height and within one height by (n, m). The pair (0, 1)
/// appears at height 1.
pub(crate) fn w_ladder(height: u64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let h_max = height.min(i64::MAX as u64) as i64;
    for h in 1..=h_max {
        for n in 1..=h {
            if n < h {
                if n.gcd(&h) == 1 {
                    out.push((-h, n));
                    out.push((h, n));
                }
            } else {
                for m in -h..=h {
                    if m.unsigned_abs().gcd(&(h as u64)) == 1 {
                        out.push((m, h));
                    }
                }
            }
        }
    }
    out
}

/// 2^8 * 3^2 * 5 * 7 * 11 * 13; small enough that products of two residues
/// fit in a u64, composite enough to reject ~99% of nonsquares.
const FILTER_MODULUS: u64 = 256 * 9 * 5 * 7 * 11 * 13;

struct SquareFilter {
    mod256: [bool; 256],
    mod9: [bool; 9],
    mod5: [bool; 5],
    mod7: [bool; 7],
    mod11: [bool; 11],
    mod13: [bool; 13],
}

impl SquareFilter {
    fn new() -> Self {
        fn table<const N: usize>() -> [bool; N] {
            let mut t = [false; N];
            for r in 0..N as u64 {
                t[((r * r) % N as u64) as usize] = true;
            }
            t
        }
        SquareFilter {
            mod256: table::<256>(),
            mod9: table::<9>(),
            mod5: table::<5>(),
            mod7: table::<7>(),
            mod11: table::<11>(),
            mod13: table::<13>(),
        }
    }

    /// Whether r (a residue of K modulo FILTER_MODULUS) is consistent with
    /// K being a perfect square.
    fn admits(&self, r: u64) -> bool {
        self.mod256[(r & 255) as usize]
            && self.mod9[(r % 9) as usize]
            && self.mod5[(r % 5) as usize]
            && self.mod7[(r % 7) as usize]
            && self.mod11[(r % 11) as usize]
            && self.mod13[(r % 13) as usize]
    }
}

fn residue(n: &BigInt, modulus: u64) -> u64 {
    n.mod_floor(&BigInt::from(modulus)).to_u64().expect("residue fits")
}

/// One space prepared for scanning many w values.
pub(crate) struct SpaceScanner {
    space: BiquadraticSpace,
    filter: SquareFilter,
    /// Residues mod FILTER_MODULUS of a, b, q, abp, abq.
    ra: u64,
    rb: u64,
    rq: u64,
    rabp: u64,
    rabq: u64,
    /// For d > 0 the discriminant is nonnegative only for |w| inside this
    /// closed window (padded outward, so it never excludes a real solution).
    window: Option<(f64, f64)>,
}

impl SpaceScanner {
    pub(crate) fn new(space: &BiquadraticSpace) -> Self {
        let m = FILTER_MODULUS;
        let a = space.d.numer().clone();
        let b = space.d.denom().clone();
        let t2 = &space.t * &space.t;
        let p = t2.numer().clone();
        let q = t2.denom().clone();
        let ra = residue(&a, m);
        let rb = residue(&b, m);
        let rq = residue(&q, m);
        let rabp = (ra * rb % m) * residue(&p, m) % m;
        let rabq = (ra * rb % m) * rq % m;
        let window = if space.d.is_positive() {
            // d t^2 w^2 >= (w^2 - d)^2 pins |w| between
            // 2d / (|t| sqrt(d) + sqrt((t^2+4) d)) and their half-sum.
            let df = space.d.to_f64().unwrap_or(f64::INFINITY);
            let tf = space.t.to_f64().unwrap_or(f64::INFINITY).abs();
            let root = (df * (tf * tf + 4.0)).sqrt();
            let hi = (tf * df.sqrt() + root) / 2.0;
            let lo = if hi.is_finite() { df / hi } else { f64::INFINITY };
            Some((lo * 0.999 - 1e-9, hi * 1.001 + 1e-9))
        } else {
            None
        };
        SpaceScanner {
            space: space.clone(),
            filter: SquareFilter::new(),
            ra,
            rb,
            rq,
            rabp,
            rabq,
            window,
        }
    }

    /// K(m, n) modulo FILTER_MODULUS.
    fn k_residue(&self, m: i64, n: i64) -> u64 {
        let md = FILTER_MODULUS;
        let rm = m.rem_euclid(md as i64) as u64;
        let rn = n.rem_euclid(md as i64) as u64;
        let m2 = rm * rm % md;
        let n2 = rn * rn % md;
        let x = m2 * n2 % md;
        let y = (self.rb * m2 % md + md - self.ra * n2 % md) % md;
        let inner = (self.rabp * x % md + md - self.rq * (y * y % md) % md) % md;
        self.rabq * inner % md
    }

    /// Exact acceptance test for one w; pushes every point it yields.
    fn verify(&self, m: i64, n: i64, out: &mut Vec<(Rational, Rational)>) {
        let w = Rational::new(BigInt::from(m), BigInt::from(n));
        let disc = self.space.s_discriminant(&w);
        if disc.is_negative() {
            return;
        }
        let Some(delta) = rational_sqrt(&disc) else {
            return;
        };
        let (s_plus, s_minus) = self.space.s_roots(&w, &delta);
        let mut roots = vec![s_plus];
        if !delta.is_zero() {
            roots.push(s_minus);
        }
        for s in roots {
            if !s.is_positive() {
                continue;
            }
            if let Some(z) = rational_sqrt(&s) {
                debug_assert!(self.space.on_space(&z, &w));
                out.push((z, w.clone()));
            }
        }
    }

    /// Scan a ladder of reduced (m, n) pairs in order; points come out with
    /// z > 0, in ladder order, at most two per w.
    pub(crate) fn scan(&self, ladder: &[(i64, i64)]) -> Vec<(Rational, Rational)> {
        let mut out = Vec::new();
        for &(m, n) in ladder {
            if let Some((lo, hi)) = self.window {
                let wf = (m as f64 / n as f64).abs();
                if wf < lo || wf > hi {
                    continue;
                }
            }
            if !self.filter.admits(self.k_residue(m, n)) {
                continue;
            }
            self.verify(m, n, &mut out);
        }
        out
    }
}

/// All points (z, w) on the space with height(w) = max(|m|, n) <= the bound
/// (w = m/n reduced), deduplicated up to the sign of z: only the z > 0
/// representative is returned. Points are ordered by height of w, then by
/// (n, m), then with the larger root s first.
pub fn search_points(space: &BiquadraticSpace, height_bound: u64) -> Vec<(Rational, Rational)> {
    SpaceScanner::new(space).scan(&w_ladder(height_bound))
}
