//! The degree-4 isogeny phi, its dual, the four 2-isogenies connecting the
//! models, and the pairing functions f and g.
//!
//! phi and phi_hat act on the small models; varphi, eta and their duals act
//! on the t-models. Every map validates curve membership first, sends its
//! rational kernel points to infinity explicitly (no indeterminate forms),
//! and is exercised against the composition identities phi_hat . phi = [4]
//! and varphi_hat . varphi = [2] in the tests.

use crate::arith::{rat, Rational};
use crate::curves::{CurveFamily, CurveLabel, CurvePoint};
use crate::{Error, Result};
use num_traits::Zero;
use serde::Serialize;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum IsogenyName {
    #[serde(rename = "phi")]
    Phi,
    #[serde(rename = "phi_hat")]
    PhiHat,
    #[serde(rename = "varphi")]
    Varphi,
    #[serde(rename = "varphi_hat")]
    VarphiHat,
    #[serde(rename = "eta")]
    Eta,
    #[serde(rename = "eta_hat")]
    EtaHat,
}

impl fmt::Display for IsogenyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            IsogenyName::Phi => "phi",
            IsogenyName::PhiHat => "phi_hat",
            IsogenyName::Varphi => "varphi",
            IsogenyName::VarphiHat => "varphi_hat",
            IsogenyName::Eta => "eta",
            IsogenyName::EtaHat => "eta_hat",
        };
        f.write_str(s)
    }
}

/// Metadata for one of the six isogenies between the family's models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IsogenyMap {
    pub name: IsogenyName,
    pub domain: CurveLabel,
    pub codomain: CurveLabel,
    pub degree: u8,
}

impl IsogenyMap {
    pub fn new(name: IsogenyName) -> Self {
        let (domain, codomain, degree) = match name {
            IsogenyName::Phi => (CurveLabel::ESmall, CurveLabel::EPrimeSmall, 4),
            IsogenyName::PhiHat => (CurveLabel::EPrimeSmall, CurveLabel::ESmall, 4),
            IsogenyName::Varphi => (CurveLabel::E, CurveLabel::EDoublePrime, 2),
            IsogenyName::VarphiHat => (CurveLabel::EDoublePrime, CurveLabel::E, 2),
            IsogenyName::Eta => (CurveLabel::EPrime, CurveLabel::EDoublePrime, 2),
            IsogenyName::EtaHat => (CurveLabel::EDoublePrime, CurveLabel::EPrime, 2),
        };
        IsogenyMap { name, domain, codomain, degree }
    }

    pub fn eval(&self, family: &CurveFamily, p: &CurvePoint) -> Result<CurvePoint> {
        match self.name {
            IsogenyName::Phi => phi(family, p),
            IsogenyName::PhiHat => phi_hat(family, p),
            IsogenyName::Varphi => varphi(family, p),
            IsogenyName::VarphiHat => varphi_hat(family, p),
            IsogenyName::Eta => eta(family, p),
            IsogenyName::EtaHat => eta_hat(family, p),
        }
    }
}

fn check_domain(family: &CurveFamily, p: &CurvePoint, label: CurveLabel) -> Result<()> {
    if p.curve != label || !family.curve(label).contains(p) {
        return Err(Error::NotOnCurve { curve: label.to_string(), point: p.to_string() });
    }
    Ok(())
}

/// The 4-isogeny E_small -> E'_small with kernel {(0,0), (-a,0), (0,-a), O}.
pub fn phi(family: &CurveFamily, p: &CurvePoint) -> Result<CurvePoint> {
    check_domain(family, p, CurveLabel::ESmall)?;
    let a = &family.a;
    let a_cap = &family.a_cap;
    let t = &family.t;
    let (x, y) = match &p.coords {
        None => return Ok(CurvePoint::infinity(CurveLabel::EPrimeSmall)),
        Some(c) => c.clone(),
    };
    let zero = rat(0, 1);
    let kernel = [(zero.clone(), zero.clone()), (-a.clone(), zero.clone()), (zero, -a.clone())];
    if kernel.contains(&(x.clone(), y.clone())) {
        return Ok(CurvePoint::infinity(CurveLabel::EPrimeSmall));
    }
    let den = rat(8, 1) * &x * (&x + a);
    let lever = rat(2, 1) * &y + &x + a;
    let slope = t * (&x + rat(2, 1) * a) * &lever / &den;
    let cap_x = -a_cap + &slope * &slope;
    let quart = (&lever - rat(2, 1) * t * &x * (&x + rat(2, 1) * a)) / &den;
    let q2 = &quart * &quart;
    let cap_y = &cap_x * &cap_x - (&x + a) * (&x + a) * &q2 * &q2;
    let image = CurvePoint::affine(CurveLabel::EPrimeSmall, cap_x, cap_y);
    debug_assert!(family.e_prime_small.contains(&image));
    Ok(image)
}

/// The dual 4-isogeny E'_small -> E_small. Its rational kernel is
/// {(-A, 0), O}; the other two kernel points have irrational coordinates
/// and cannot arise on rational inputs.
pub fn phi_hat(family: &CurveFamily, p: &CurvePoint) -> Result<CurvePoint> {
    check_domain(family, p, CurveLabel::EPrimeSmall)?;
    let a = &family.a;
    let a_cap = &family.a_cap;
    let t = &family.t;
    let (x, y) = match &p.coords {
        None => return Ok(CurvePoint::infinity(CurveLabel::ESmall)),
        Some(c) => c.clone(),
    };
    if x == -a_cap.clone() && y.is_zero() {
        return Ok(CurvePoint::infinity(CurveLabel::ESmall));
    }
    if x == rat(-2, 1) * a_cap {
        // Would be a kernel point over Q(i); no rational point sits here.
        return Err(Error::Pole { map: "phi_hat".into(), point: p.to_string() });
    }
    let lever = rat(2, 1) * &y + &x + a_cap;
    let slope = &x * &lever / (rat(2, 1) * t * (&x + a_cap) * (&x + rat(2, 1) * a_cap));
    let small_x = -a + &slope * &slope;
    let g = pairing_g_value(t, a_cap, &x, &y);
    let g2 = &g * &g;
    let small_y = &small_x * &small_x - &g2 * &g2;
    let image = CurvePoint::affine(CurveLabel::ESmall, small_x, small_y);
    debug_assert!(family.e_small.contains(&image));
    Ok(image)
}

/// The 2-isogeny E_t -> E''_t with kernel {(0,0), O}.
pub fn varphi(family: &CurveFamily, p: &CurvePoint) -> Result<CurvePoint> {
    check_domain(family, p, CurveLabel::E)?;
    let (u, v) = match &p.coords {
        None => return Ok(CurvePoint::infinity(CurveLabel::EDoublePrime)),
        Some(c) => c.clone(),
    };
    if u.is_zero() {
        return Ok(CurvePoint::infinity(CurveLabel::EDoublePrime));
    }
    let up1 = &u + rat(1, 1);
    let fu = &up1 * &up1 / &u;
    let fv = (rat(1, 1) - &u * &u) * &v / (&u * &u);
    let image = CurvePoint::affine(CurveLabel::EDoublePrime, fu, fv);
    debug_assert!(family.e_doubleprime.contains(&image));
    Ok(image)
}

/// The dual 2-isogeny E''_t -> E_t with kernel {(-t^2, 0), O}.
pub fn varphi_hat(family: &CurveFamily, p: &CurvePoint) -> Result<CurvePoint> {
    check_domain(family, p, CurveLabel::EDoublePrime)?;
    let t2 = &family.t * &family.t;
    let (fu, fv) = match &p.coords {
        None => return Ok(CurvePoint::infinity(CurveLabel::E)),
        Some(c) => c.clone(),
    };
    if fu == -t2.clone() {
        return Ok(CurvePoint::infinity(CurveLabel::E));
    }
    let shift = &fu + &t2;
    let den = rat(4, 1) * &shift * &shift;
    let u = &fv * &fv / &den;
    let v = -(&fu * &fu + rat(2, 1) * &t2 * &fu - rat(4, 1) * &t2) * &fv / (rat(2, 1) * &den);
    let image = CurvePoint::affine(CurveLabel::E, u, v);
    debug_assert!(family.e.contains(&image));
    Ok(image)
}

/// The 2-isogeny E'_t -> E''_t with kernel {(0,0), O}.
pub fn eta(family: &CurveFamily, p: &CurvePoint) -> Result<CurvePoint> {
    check_domain(family, p, CurveLabel::EPrime)?;
    let t2p4 = &family.t * &family.t + rat(4, 1);
    let (u, v) = match &p.coords {
        None => return Ok(CurvePoint::infinity(CurveLabel::EDoublePrime)),
        Some(c) => c.clone(),
    };
    if u.is_zero() {
        return Ok(CurvePoint::infinity(CurveLabel::EDoublePrime));
    }
    let u2 = &u * &u;
    let fu = &v * &v / (rat(4, 1) * &u2);
    let fv = (&t2p4 * &t2p4 - &u2) * &v / (rat(8, 1) * &u2);
    let image = CurvePoint::affine(CurveLabel::EDoublePrime, fu, fv);
    debug_assert!(family.e_doubleprime.contains(&image));
    Ok(image)
}

/// The dual 2-isogeny E''_t -> E'_t with kernel {(0,0), O}.
pub fn eta_hat(family: &CurveFamily, p: &CurvePoint) -> Result<CurvePoint> {
    check_domain(family, p, CurveLabel::EDoublePrime)?;
    let t2 = &family.t * &family.t;
    let (fu, fv) = match &p.coords {
        None => return Ok(CurvePoint::infinity(CurveLabel::EPrime)),
        Some(c) => c.clone(),
    };
    if fu.is_zero() {
        return Ok(CurvePoint::infinity(CurveLabel::EPrime));
    }
    let fu2 = &fu * &fu;
    let u = &fv * &fv / &fu2;
    let v = (rat(-4, 1) * &t2 - &fu2) * &fv / &fu2;
    let image = CurvePoint::affine(CurveLabel::EPrime, u, v);
    debug_assert!(family.e_prime.contains(&image));
    Ok(image)
}

/// f(x, y) = x^2 - y on E_small; div(f) = 4((0,0)) - 4(O).
pub fn pairing_f(family: &CurveFamily, p: &CurvePoint) -> Result<Rational> {
    check_domain(family, p, CurveLabel::ESmall)?;
    match &p.coords {
        None => Err(Error::Pole { map: "pairing_f".into(), point: p.to_string() }),
        Some((x, y)) => Ok(x * x - y),
    }
}

fn pairing_g_value(t: &Rational, a_cap: &Rational, x: &Rational, y: &Rational) -> Rational {
    let lever = rat(2, 1) * y + x + a_cap;
    let num = rat(2, 1) * (x + rat(2, 1) * a_cap) * &lever - t * x * (x + a_cap);
    let den = rat(4, 1) * t * (x + a_cap) * (x + rat(2, 1) * a_cap);
    num / den
}

/// g on E'_small, satisfying f(phi_hat(P)) = g(P)^4 away from poles.
pub fn pairing_g(family: &CurveFamily, p: &CurvePoint) -> Result<Rational> {
    check_domain(family, p, CurveLabel::EPrimeSmall)?;
    let a_cap = &family.a_cap;
    match &p.coords {
        None => Err(Error::Pole { map: "pairing_g".into(), point: p.to_string() }),
        Some((x, y)) => {
            if x == &-a_cap.clone() || x == &(rat(-2, 1) * a_cap) {
                return Err(Error::Pole { map: "pairing_g".into(), point: p.to_string() });
            }
            Ok(pairing_g_value(&family.t, a_cap, x, y))
        }
    }
}
