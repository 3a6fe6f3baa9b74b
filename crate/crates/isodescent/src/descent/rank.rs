//! Rank bounds for the isogeny class of E_t.
//!
//! All three curves in the chain E -> E'' -> E' are isogenous, so they share
//! one Mordell-Weil rank r. Upper bounds come from Selmer dimensions: a dual
//! pair of 2-isogenies phi, phi_hat between curves A and B satisfies
//! r <= dim S^(phi) + dim S^(phi_hat) - 2, and a complete 2-descent on a
//! curve with full rational 2-torsion gives r <= dim S_2 - 2 directly. The
//! reported upper bound is the minimum over every route the engine can
//! compute.
//!
//! Lower bounds come from images of known points under the connecting
//! homomorphisms. If the classes of P_1, ..., P_k span a quotient that
//! needs m generators over the image of the torsion subgroup, then no
//! relation sum a_i P_i in torsion with some a_i odd is possible, so the
//! points generate a subgroup of rank at least m. The generator count is
//! read off with the Burnside basis theorem: log2 of the whole span minus
//! log2 of the span of squares and torsion images.

use std::cmp::min;

use serde::Serialize;

use super::selmer::{selmer_2isogeny, selmer_4isogeny, SelmerGroup};
use super::spaces::{psi_prime, BiquadraticSpace, TwoIsogenyDirection};
use super::two_descent::{two_selmer_group, two_selmer_group_on_e};
use super::{delta_doubleprime, delta_prime, search_points};
use crate::arith::kummer::{span_log2, KummerClass};
use crate::arith::Rational;
use crate::curves::{build_family, CurveFamily, CurvePoint};
use crate::torsion::torsion_points;
use crate::Result;

/// Lower and upper bounds on the common rank of E_t, E'_t, E''_t.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RankBounds {
    pub lower: u32,
    pub upper: u32,
}

/// Bounds the rank using everything the engine knows how to compute: the
/// four 2-isogeny Selmer groups and both complete 2-descents for the upper
/// bound, and connecting-homomorphism images of points found by searching
/// the 4-isogeny Selmer spaces up to `height_bound`, together with the
/// supplied points on E_t (typically pulled back from homogeneous-space
/// fixtures), for the lower bound.
pub fn rank_bounds(
    t: &Rational,
    height_bound: u64,
    extra_points: &[CurvePoint],
) -> Result<RankBounds> {
    let family = build_family(t)?;
    let selmer = selmer_4isogeny(t)?;
    let mut points = search_images(&family, &selmer, height_bound)?;
    points.extend_from_slice(extra_points);
    Ok(RankBounds {
        lower: lower_bound(&family, &points)?,
        upper: upper_bound(t)?,
    })
}

/// Same bounds, reusing a 4-isogeny Selmer group the caller already has.
pub(crate) fn rank_bounds_with_selmer(
    family: &CurveFamily,
    selmer: &SelmerGroup,
    height_bound: u64,
    extra_points: &[CurvePoint],
) -> Result<RankBounds> {
    let mut points = search_images(family, selmer, height_bound)?;
    points.extend_from_slice(extra_points);
    Ok(RankBounds {
        lower: lower_bound(family, &points)?,
        upper: upper_bound(&family.t)?,
    })
}

/// Searches every nontrivial Selmer space up to the height bound and maps
/// the points found onto E_t. The trivial class is skipped: its points only
/// ever land in the image of the torsion subgroup.
pub(crate) fn search_images(
    family: &CurveFamily,
    selmer: &SelmerGroup,
    height_bound: u64,
) -> Result<Vec<CurvePoint>> {
    let mut found = Vec::new();
    for class in &selmer.all_elements {
        if class.is_trivial() {
            continue;
        }
        let space = BiquadraticSpace::new(class.representative(), family.t.clone())?;
        for (z, w) in search_points(&space, height_bound) {
            found.push(psi_prime(family, &space, &z, &w)?);
        }
    }
    Ok(found)
}

/// Minimum of every Selmer upper bound available for this t.
pub(crate) fn upper_bound(t: &Rational) -> Result<u32> {
    let dim = |direction: TwoIsogenyDirection| -> Result<u32> {
        Ok(selmer_2isogeny(t, direction)?.log2_size())
    };
    let pair_e = dim(TwoIsogenyDirection::Varphi)? + dim(TwoIsogenyDirection::VarphiHat)?;
    let pair_eprime = dim(TwoIsogenyDirection::Eta)? + dim(TwoIsogenyDirection::EtaHat)?;
    let mut upper = min(pair_e, pair_eprime).saturating_sub(2);

    upper = min(upper, two_selmer_group(t)?.dimension.saturating_sub(2));
    if let Some(full) = two_selmer_group_on_e(t)? {
        upper = min(upper, full.dimension.saturating_sub(2));
    }
    Ok(upper)
}

/// Best lower bound over the two connecting homomorphisms.
pub(crate) fn lower_bound(family: &CurveFamily, points: &[CurvePoint]) -> Result<u32> {
    let torsion = torsion_points(family, crate::curves::CurveLabel::E)?;

    let mut prime_free = Vec::with_capacity(points.len());
    let mut double_free = Vec::with_capacity(points.len());
    for p in points {
        prime_free.push(delta_prime(family, p)?);
        double_free.push(delta_doubleprime(family, p)?);
    }
    let mut prime_torsion = Vec::with_capacity(torsion.len());
    let mut double_torsion = Vec::with_capacity(torsion.len());
    for p in &torsion {
        prime_torsion.push(delta_prime(family, p)?);
        double_torsion.push(delta_doubleprime(family, p)?);
    }

    let via_prime = minimal_generator_count(&prime_free, &prime_torsion, 4);
    let via_double = minimal_generator_count(&double_free, &double_torsion, 2);
    Ok(via_prime.max(via_double))
}

/// Number of generators needed by span(torsion, free) / span(torsion),
/// computed as the F_2-dimension of the quotient modulo its squares.
fn minimal_generator_count(
    free: &[KummerClass],
    torsion: &[KummerClass],
    modulus: u8,
) -> u32 {
    let mut whole: Vec<KummerClass> = torsion.to_vec();
    whole.extend_from_slice(free);
    let total = span_log2(&whole, modulus);

    let mut frattini: Vec<KummerClass> = whole.iter().map(|g| g.pow(2)).collect();
    frattini.extend_from_slice(torsion);
    total - span_log2(&frattini, modulus)
}
