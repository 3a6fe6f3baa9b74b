//! Selmer groups by exhaustion over candidate classes.
//!
//! A class supported outside the bad places has a homogeneous space with
//! good reduction everywhere it matters, so candidates can be restricted to
//! the classes supported on Sigma. For a 2-isogeny direction the candidates
//! are the signed squarefree products of bad primes; each one passes or
//! fails by local solvability of its quartic space at the places of Sigma.
//! For the 4-isogeny the candidates are the lifts, modulo fourth powers, of
//! the members of the varphi_hat group, since a biquadratic class reduces
//! mod squares to the class of u on E_t.
//!
//! Local verdicts are memoized per place under the local class key of d:
//! scaling d by a square (respectively a fourth power) of Q_p moves a point
//! (Z, W) to (lambda Z, lambda W) on the quartic model and (z, w) to
//! (mu z, mu^2 w) on the biquadratic one, so solvability at p only depends
//! on that key.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::local::{biquadratic_local_solvable, quartic_local_solvable};
use super::spaces::{BiquadraticSpace, TwoIsogenyDirection};
use crate::arith::kummer::{kummer_class, span, KummerClass};
use crate::arith::padic::{fourth_power_class_key, square_class_key};
use crate::arith::sigma::{sigma_set, Place};
use crate::arith::Rational;
use crate::isogeny::IsogenyName;
use crate::Result;

/// A Selmer group presented by its full element list (it is finite and
/// small) together with a minimal generating set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelmerGroup {
    pub isogeny_name: IsogenyName,
    /// 2 for the 2-isogeny groups (classes mod squares), 4 for the
    /// 4-isogeny group (classes mod fourth powers).
    pub modulus: u8,
    pub generators: Vec<KummerClass>,
    pub all_elements: Vec<KummerClass>,
}

impl SelmerGroup {
    pub fn size(&self) -> u64 {
        self.all_elements.len() as u64
    }

    /// log2 of the group order; every group here is a finite 2-group.
    pub fn log2_size(&self) -> u32 {
        let n = self.size();
        assert!(n.is_power_of_two(), "Selmer group order {n} is not a power of two");
        n.trailing_zeros()
    }

    pub fn contains(&self, class: &KummerClass) -> bool {
        self.all_elements.binary_search(class).is_ok()
    }
}

/// Signed squarefree products of the given primes, in mask order; the
/// positive one comes first in each pair. Includes +1 and -1.
fn squarefree_candidates(primes: &[BigInt]) -> Vec<Rational> {
    let n = primes.len();
    assert!(n < 63, "too many bad primes to enumerate supports");
    let mut out = Vec::with_capacity(2 << n);
    for mask in 0u64..(1 << n) {
        let mut m = BigInt::one();
        for (i, p) in primes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                m *= p;
            }
        }
        out.push(Rational::from_integer(m.clone()));
        out.push(Rational::from_integer(-m));
    }
    out
}

/// Finite test places in the order used for pruning: odd primes ascending,
/// then 2 last (its local tests are the most expensive ones).
fn finite_places_two_last(primes: &[BigInt]) -> Vec<BigInt> {
    let two = BigInt::from(2);
    let mut out: Vec<BigInt> = primes.iter().filter(|p| **p != two).cloned().collect();
    out.push(two);
    out
}

/// Minimal generating set of a finite abelian 2-group given as a sorted
/// element list. Seeds the generated set with all squares, so a new
/// generator is accepted exactly when it is independent in G/G^2; by the
/// Frattini argument the accepted ones generate G and their number is the
/// minimum possible.
fn minimal_generators(elements: &[KummerClass], modulus: u8) -> Vec<KummerClass> {
    let mut spanned: BTreeSet<KummerClass> = elements.iter().map(|e| e.pow(2)).collect();
    let mut generators: Vec<KummerClass> = Vec::new();
    for e in elements {
        if spanned.contains(e) {
            continue;
        }
        generators.push(e.clone());
        let mut next = BTreeSet::new();
        let mut power = KummerClass::trivial(modulus);
        for _ in 0..modulus {
            for x in &spanned {
                next.insert(x.mul(&power));
            }
            power = power.mul(e);
        }
        spanned = next;
    }
    assert_eq!(
        spanned.len(),
        elements.len(),
        "locally solvable classes failed to close under multiplication"
    );
    generators
}

fn assemble(
    isogeny_name: IsogenyName,
    modulus: u8,
    members: BTreeSet<KummerClass>,
) -> SelmerGroup {
    let all_elements: Vec<KummerClass> = members.into_iter().collect();
    let generators = minimal_generators(&all_elements, modulus);
    debug_assert_eq!(
        span(&generators, modulus),
        all_elements.iter().cloned().collect::<BTreeSet<_>>()
    );
    SelmerGroup { isogeny_name, modulus, generators, all_elements }
}

/// The Selmer group of one 2-isogeny direction, inside Q^*/(Q^*)^2.
///
/// Candidates are the signed squarefree products of the primes of Sigma(t);
/// d = 1 is the class of the curve itself and is kept without testing. A
/// candidate survives when its quartic space is solvable over R and over
/// Q_p for every p in Sigma.
pub fn selmer_2isogeny(t: &Rational, direction: TwoIsogenyDirection) -> Result<SelmerGroup> {
    let sigma = sigma_set(t);
    let finite = finite_places_two_last(&sigma.primes);
    let mut memo: BTreeMap<(BigInt, (u8, BigInt)), bool> = BTreeMap::new();
    let mut members: BTreeSet<KummerClass> = BTreeSet::new();

    'candidates: for d in squarefree_candidates(&sigma.primes) {
        if d.is_one() {
            members.insert(KummerClass::trivial(2));
            continue;
        }
        let space = direction.space(d.clone(), t)?;
        if !space.real_solvable() {
            continue;
        }
        for p in &finite {
            let key = (p.clone(), square_class_key(&d, p));
            let ok = match memo.get(&key) {
                Some(v) => *v,
                None => {
                    let out = quartic_local_solvable(&space, &Place::Finite(p.clone()))?;
                    memo.insert(key, out.solvable);
                    out.solvable
                }
            };
            if !ok {
                continue 'candidates;
            }
        }
        members.insert(kummer_class(&d, 2));
    }
    Ok(assemble(direction.isogeny_name(), 2, members))
}

/// The Selmer group of the 4-isogeny, inside Q^*/(Q^*)^4.
///
/// Every member reduces mod squares to a member of the varphi_hat group, so
/// the candidates are sigma * e^2 with sigma running over that group and e
/// over the squarefree products of bad primes; distinct pairs give distinct
/// classes mod fourth powers. Pruning order per candidate: the mod-squares
/// reduction is solvable by construction, then the real place, then the odd
/// primes ascending, then 2.
pub fn selmer_4isogeny(t: &Rational) -> Result<SelmerGroup> {
    let base = selmer_2isogeny(t, TwoIsogenyDirection::VarphiHat)?;
    let sigma = sigma_set(t);
    let finite = finite_places_two_last(&sigma.primes);
    let lifts: Vec<Rational> = squarefree_candidates(&sigma.primes)
        .into_iter()
        .filter(|e| e > &Rational::from_integer(BigInt::from(0)))
        .collect();

    let mut memo: BTreeMap<(BigInt, (u8, BigInt)), bool> = BTreeMap::new();
    let mut members: BTreeSet<KummerClass> = BTreeSet::new();

    for small in &base.all_elements {
        let sigma_rep = small.representative();
        'lifts: for e in &lifts {
            let d = &sigma_rep * e * e;
            if d.is_one() {
                members.insert(KummerClass::trivial(4));
                continue;
            }
            let space = BiquadraticSpace::new(d.clone(), t.clone())?;
            if !biquadratic_local_solvable(&space, &Place::Infinite)?.solvable {
                continue;
            }
            for p in &finite {
                let key = (p.clone(), fourth_power_class_key(&d, p));
                let ok = match memo.get(&key) {
                    Some(v) => *v,
                    None => {
                        let out =
                            biquadratic_local_solvable(&space, &Place::Finite(p.clone()))?;
                        memo.insert(key, out.solvable);
                        out.solvable
                    }
                };
                if !ok {
                    continue 'lifts;
                }
            }
            members.insert(kummer_class(&d, 4));
        }
    }
    Ok(assemble(IsogenyName::PhiHat, 4, members))
}

/// Order of the 4-isogeny group as computed, next to the order predicted by
/// the two 2-isogeny groups through the exact sequence
/// 1 -> {+-1} -> S(eta) -> S(phi_hat) -> S(varphi_hat) -> 1,
/// which gives #S(phi_hat) = #S(eta) * #S(varphi_hat) / 2.
pub fn selmer_size_relation(t: &Rational) -> Result<(u64, u64)> {
    let eta = selmer_2isogeny(t, TwoIsogenyDirection::Eta)?;
    let vh = selmer_2isogeny(t, TwoIsogenyDirection::VarphiHat)?;
    let four = selmer_4isogeny(t)?;
    let predicted = eta.size() * vh.size() / 2;
    Ok((four.size(), predicted))
}
