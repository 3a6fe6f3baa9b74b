//! The curve family and exact group arithmetic on long Weierstrass models.
//!
//! For a nonzero rational parameter t the family consists of
//!
//! ```text
//! E_t   : v^2 = u^3 + (t^2+2) u^2 + u
//! E'_t  : V^2 = U^3 - 2(t^2-4) U^2 + (t^2+4)^2 U
//! E''_t : y^2 = x (x - 4) (x + t^2)
//! ```
//!
//! together with two isomorphic "small" models carrying the 4-isogeny in its
//! classical shape:
//!
//! ```text
//! E_small  : y^2 + xy + ay = x^3 + ax^2,   a = -1/(4t^2)
//! E'_small : y^2 + xy + Ay = x^3 + Ax^2,   A = (t^2+4)/64
//! ```
//!
//! All arithmetic is exact over Q.

use crate::arith::{int, rat, Rational};
use crate::{Error, Result};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CurveLabel {
    #[serde(rename = "E_t")]
    E,
    #[serde(rename = "E'_t")]
    EPrime,
    #[serde(rename = "E''_t")]
    EDoublePrime,
    #[serde(rename = "E_small")]
    ESmall,
    #[serde(rename = "E'_small")]
    EPrimeSmall,
}

impl fmt::Display for CurveLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CurveLabel::E => "E_t",
            CurveLabel::EPrime => "E'_t",
            CurveLabel::EDoublePrime => "E''_t",
            CurveLabel::ESmall => "E_small",
            CurveLabel::EPrimeSmall => "E'_small",
        };
        f.write_str(s)
    }
}

/// A point on a labeled curve: affine coordinates or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurvePoint {
    pub curve: CurveLabel,
    /// `None` is the point at infinity.
    pub coords: Option<(Rational, Rational)>,
}

impl CurvePoint {
    pub fn infinity(curve: CurveLabel) -> Self {
        CurvePoint { curve, coords: None }
    }

    pub fn affine(curve: CurveLabel, x: Rational, y: Rational) -> Self {
        CurvePoint { curve, coords: Some((x, y)) }
    }

    pub fn is_infinity(&self) -> bool {
        self.coords.is_none()
    }

    pub fn x(&self) -> Option<&Rational> {
        self.coords.as_ref().map(|(x, _)| x)
    }

    pub fn y(&self) -> Option<&Rational> {
        self.coords.as_ref().map(|(_, y)| y)
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.coords {
            None => write!(f, "infinity"),
            Some((x, y)) => write!(f, "({x}, {y})"),
        }
    }
}

impl Serialize for CurvePoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        match &self.coords {
            None => {
                let mut st = s.serialize_struct("CurvePoint", 2)?;
                st.serialize_field("curve", &self.curve)?;
                st.serialize_field("infinity", &true)?;
                st.end()
            }
            Some((x, y)) => {
                let mut st = s.serialize_struct("CurvePoint", 3)?;
                st.serialize_field("curve", &self.curve)?;
                st.serialize_field("x", &x.to_string())?;
                st.serialize_field("y", &y.to_string())?;
                st.end()
            }
        }
    }
}

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with exact coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Curve {
    pub label: CurveLabel,
    pub a1: Rational,
    pub a2: Rational,
    pub a3: Rational,
    pub a4: Rational,
    pub a6: Rational,
}

impl Curve {
    fn new(label: CurveLabel, a1: Rational, a2: Rational, a3: Rational, a4: Rational, a6: Rational) -> Self {
        Curve { label, a1, a2, a3, a4, a6 }
    }

    pub fn infinity(&self) -> CurvePoint {
        CurvePoint::infinity(self.label)
    }

    pub fn point(&self, x: Rational, y: Rational) -> CurvePoint {
        CurvePoint::affine(self.label, x, y)
    }

    pub fn contains(&self, p: &CurvePoint) -> bool {
        if p.curve != self.label {
            return false;
        }
        match &p.coords {
            None => true,
            Some((x, y)) => {
                y * y + &self.a1 * x * y + &self.a3 * y
                    == x * x * x + &self.a2 * x * x + &self.a4 * x + &self.a6
            }
        }
    }

    pub fn discriminant(&self) -> Rational {
        let b2 = &self.a1 * &self.a1 + rat(4, 1) * &self.a2;
        let b4 = rat(2, 1) * &self.a4 + &self.a1 * &self.a3;
        let b6 = &self.a3 * &self.a3 + rat(4, 1) * &self.a6;
        let b8 = &self.a1 * &self.a1 * &self.a6 + rat(4, 1) * &self.a2 * &self.a6
            - &self.a1 * &self.a3 * &self.a4
            + &self.a2 * &self.a3 * &self.a3
            - &self.a4 * &self.a4;
        -&b2 * &b2 * &b8 - rat(8, 1) * &b4 * &b4 * &b4 - rat(27, 1) * &b6 * &b6
            + rat(9, 1) * &b2 * &b4 * &b6
    }

    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        debug_assert!(self.contains(p));
        match &p.coords {
            None => p.clone(),
            Some((x, y)) => {
                let ny = -y - &self.a1 * x - &self.a3;
                self.point(x.clone(), ny)
            }
        }
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        debug_assert!(self.contains(p), "add: {p} not on {}", self.label);
        debug_assert!(self.contains(q), "add: {q} not on {}", self.label);
        let (x1, y1) = match &p.coords {
            None => return q.clone(),
            Some(c) => c,
        };
        let (x2, y2) = match &q.coords {
            None => return p.clone(),
            Some(c) => c,
        };
        let lambda = if x1 == x2 {
            let neg_y1 = -y1 - &self.a1 * x1 - &self.a3;
            if *y2 == neg_y1 {
                return self.infinity();
            }
            // Tangent slope.
            let num = rat(3, 1) * x1 * x1 + rat(2, 1) * &self.a2 * x1 + &self.a4 - &self.a1 * y1;
            let den = rat(2, 1) * y1 + &self.a1 * x1 + &self.a3;
            num / den
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &lambda * &lambda + &self.a1 * &lambda - &self.a2 - x1 - x2;
        let y3 = &lambda * (x1 - &x3) - y1 - &self.a1 * &x3 - &self.a3;
        self.point(x3, y3)
    }

    pub fn double(&self, p: &CurvePoint) -> CurvePoint {
        self.add(p, p)
    }

    pub fn multiply(&self, n: i64, p: &CurvePoint) -> CurvePoint {
        if n == 0 || p.is_infinity() {
            return self.infinity();
        }
        if n < 0 {
            return self.multiply(-n, &self.neg(p));
        }
        let mut acc = self.infinity();
        let mut base = p.clone();
        let mut k = n as u64;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.double(&base);
            }
        }
        acc
    }

    /// Order of a point when it is torsion of order <= bound, else None.
    pub fn point_order(&self, p: &CurvePoint, bound: u32) -> Option<u32> {
        if p.is_infinity() {
            return Some(1);
        }
        let mut acc = p.clone();
        for n in 1..=bound {
            // Invariant: acc = [n] p.
            if acc.is_infinity() {
                return Some(n);
            }
            acc = self.add(&acc, p);
        }
        None
    }
}

/// All five models for one parameter value, with the quantities the maps
/// between them need.
#[derive(Clone, Debug)]
pub struct CurveFamily {
    pub t: Rational,
    pub e: Curve,
    pub e_prime: Curve,
    pub e_doubleprime: Curve,
    pub e_small: Curve,
    pub e_prime_small: Curve,
    /// a = -1/(4 t^2), the E_small parameter.
    pub a: Rational,
    /// A = (t^2 + 4)/64, the E'_small parameter.
    pub a_cap: Rational,
}

/// Construct every model for the parameter t. Rejects t = 0, where the whole
/// family degenerates (each discriminant acquires the factor t^2).
pub fn build_family(t: &Rational) -> Result<CurveFamily> {
    if t.is_zero() {
        return Err(Error::Degenerate { factor: "t".into() });
    }
    let t2 = t * t;
    let zero = int(0);
    let one = int(1);
    let e = Curve::new(
        CurveLabel::E,
        zero.clone(),
        &t2 + rat(2, 1),
        zero.clone(),
        one.clone(),
        zero.clone(),
    );
    let s2 = &t2 + rat(4, 1);
    let e_prime = Curve::new(
        CurveLabel::EPrime,
        zero.clone(),
        rat(-2, 1) * (&t2 - rat(4, 1)),
        zero.clone(),
        &s2 * &s2,
        zero.clone(),
    );
    let e_doubleprime = Curve::new(
        CurveLabel::EDoublePrime,
        zero.clone(),
        &t2 - rat(4, 1),
        zero.clone(),
        rat(-4, 1) * &t2,
        zero.clone(),
    );
    let a = -one.clone() / (rat(4, 1) * &t2);
    let e_small = Curve::new(
        CurveLabel::ESmall,
        one.clone(),
        a.clone(),
        a.clone(),
        zero.clone(),
        zero.clone(),
    );
    let a_cap = &s2 / rat(64, 1);
    let e_prime_small = Curve::new(
        CurveLabel::EPrimeSmall,
        one,
        a_cap.clone(),
        a_cap.clone(),
        zero.clone(),
        zero,
    );
    debug_assert!(!e.discriminant().is_zero());
    debug_assert!(!e_prime.discriminant().is_zero());
    debug_assert!(!e_doubleprime.discriminant().is_zero());
    debug_assert!(!e_small.discriminant().is_zero());
    debug_assert!(!e_prime_small.discriminant().is_zero());
    Ok(CurveFamily { t: t.clone(), e, e_prime, e_doubleprime, e_small, e_prime_small, a, a_cap })
}

impl CurveFamily {
    pub fn curve(&self, label: CurveLabel) -> &Curve {
        match label {
            CurveLabel::E => &self.e,
            CurveLabel::EPrime => &self.e_prime,
            CurveLabel::EDoublePrime => &self.e_doubleprime,
            CurveLabel::ESmall => &self.e_small,
            CurveLabel::EPrimeSmall => &self.e_prime_small,
        }
    }

    /// Change of coordinates between a big model and its small model (either
    /// direction, E_t <-> E_small and E'_t <-> E'_small). These are affine
    /// substitutions, defined on every point including infinity.
    pub fn transform(&self, p: &CurvePoint, to: CurveLabel) -> Result<CurvePoint> {
        let from = p.curve;
        if from == to {
            return Ok(p.clone());
        }
        let unsupported = || Error::UnsupportedTransform {
            from: from.to_string(),
            to: to.to_string(),
        };
        let (x, y) = match &p.coords {
            None => return Ok(CurvePoint::infinity(to)),
            Some(c) => c.clone(),
        };
        let t = &self.t;
        let t2 = t * t;
        let out = match (from, to) {
            // (u, v) on E_t -> (x, y) on E_small.
            (CurveLabel::E, CurveLabel::ESmall) => {
                let nx = (&x + int(1)) / (rat(4, 1) * &t2);
                let ny = (&y - t * &x) / (rat(8, 1) * &t2 * t);
                CurvePoint::affine(to, nx, ny)
            }
            (CurveLabel::ESmall, CurveLabel::E) => {
                let u = rat(4, 1) * &t2 * &x - int(1);
                let v = rat(8, 1) * &t2 * t * &y + t * &u;
                CurvePoint::affine(to, u, v)
            }
            // (U, V) on E'_t -> (X, Y) on E'_small.
            (CurveLabel::EPrime, CurveLabel::EPrimeSmall) => {
                let s2 = &t2 + rat(4, 1);
                let nx = (&x - &s2) / rat(64, 1);
                let ny = (&y - rat(4, 1) * &x) / rat(512, 1);
                CurvePoint::affine(to, nx, ny)
            }
            (CurveLabel::EPrimeSmall, CurveLabel::EPrime) => {
                let s2 = &t2 + rat(4, 1);
                let u = rat(64, 1) * &x + &s2;
                let v = rat(512, 1) * &y + rat(4, 1) * &u;
                CurvePoint::affine(to, u, v)
            }
            _ => return Err(unsupported()),
        };
        debug_assert!(self.curve(to).contains(&out), "transform left the curve");
        Ok(out)
    }
}
