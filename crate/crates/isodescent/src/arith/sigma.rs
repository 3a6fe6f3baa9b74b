//! Places of Q and the bad-place set for a family member: 2, infinity, and
//! every prime dividing t or t^2 + 4. Outside this set all the homogeneous
//! spaces that matter here have good reduction, so local solvability is
//! automatic and the Selmer search can restrict supports accordingly.

use super::{factor::factorize_rational, Rational};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// A place of Q: a finite prime or the real place.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Finite(BigInt),
    Infinite,
}

impl Place {
    pub fn finite(p: u64) -> Self {
        Place::Finite(BigInt::from(p))
    }

    pub fn prime(&self) -> Option<&BigInt> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Infinite => None,
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Infinite => write!(f, "infinity"),
        }
    }
}

impl Serialize for Place {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Place {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        if raw == "infinity" || raw == "inf" {
            return Ok(Place::Infinite);
        }
        raw.parse::<BigInt>()
            .map(Place::Finite)
            .map_err(|e| serde::de::Error::custom(format!("bad place {raw:?}: {e}")))
    }
}

/// The finite-prime part of a set of places, plus the real place (always
/// included for the descents done here).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PlaceSetWire", try_from = "PlaceSetWire")]
pub struct PlaceSet {
    /// Sorted, deduplicated primes.
    pub primes: Vec<BigInt>,
    pub includes_infinity: bool,
}

/// JSON shape: primes as decimal strings, exact at any size.
#[derive(Serialize, Deserialize)]
struct PlaceSetWire {
    primes: Vec<String>,
    includes_infinity: bool,
}

impl From<PlaceSet> for PlaceSetWire {
    fn from(s: PlaceSet) -> Self {
        PlaceSetWire {
            primes: s.primes.iter().map(|p| p.to_string()).collect(),
            includes_infinity: s.includes_infinity,
        }
    }
}

impl TryFrom<PlaceSetWire> for PlaceSet {
    type Error = String;

    fn try_from(w: PlaceSetWire) -> std::result::Result<Self, String> {
        let mut primes = Vec::with_capacity(w.primes.len());
        for raw in &w.primes {
            primes.push(raw.parse::<BigInt>().map_err(|e| format!("bad prime {raw:?}: {e}"))?);
        }
        Ok(PlaceSet { primes, includes_infinity: w.includes_infinity })
    }
}

impl PlaceSet {
    pub fn new(primes: BTreeSet<BigInt>) -> Self {
        PlaceSet { primes: primes.into_iter().collect(), includes_infinity: true }
    }

    pub fn contains_prime(&self, p: &BigInt) -> bool {
        self.primes.binary_search(p).is_ok()
    }

    /// All places, finite ones first in increasing order.
    pub fn places(&self) -> Vec<Place> {
        let mut out: Vec<Place> = self.primes.iter().cloned().map(Place::Finite).collect();
        if self.includes_infinity {
            out.push(Place::Infinite);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.primes.len() + usize::from(self.includes_infinity)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for PlaceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.primes.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        if self.includes_infinity {
            if !self.primes.is_empty() {
                write!(f, ", ")?;
            }
            write!(f, "infinity")?;
        }
        write!(f, "}}")
    }
}

/// Bad places for the parameter t: 2, infinity, and the primes dividing the
/// numerator or denominator of t or the numerator of t^2 + 4. (For t = m/n
/// in lowest terms, gcd(m^2 + 4n^2, n) = 1, so the numerator of t^2 + 4 is
/// m^2 + 4n^2 exactly and its denominator brings in nothing new.)
pub fn sigma_set(t: &Rational) -> PlaceSet {
    assert!(!num_traits::Zero::is_zero(t), "sigma_set needs a nonzero parameter");
    let mut primes: BTreeSet<BigInt> = BTreeSet::new();
    primes.insert(BigInt::from(2));
    for (p, _) in factorize_rational(t) {
        primes.insert(p);
    }
    let disc_part = t * t + Rational::from_integer(BigInt::from(4));
    for (p, _) in factorize_rational(&disc_part) {
        primes.insert(p);
    }
    PlaceSet::new(primes)
}
