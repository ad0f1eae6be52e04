//! The exact identity suite: each entry builds both sides of an identity
//! from independent constructions and compares them on their common range.

use serde::Serialize;

use crate::decomp::{decompose, DecompResult};
use crate::error::Result;
use crate::jacobi_series::JSeries;
use crate::mock::{s_series_oracle, theta1sq_mu, SPair};
use crate::qseries::QSeries;
use crate::rational::{format_rational, int, Rational};
use crate::svoa::{build_k3, build_rank6};
use crate::theta::{eta_power, eta_power_scaled, theta1_squared, theta2, theta3, theta_const};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    /// Exponents below this bound were compared.
    pub checked_below: String,
    pub pass: bool,
    pub detail: String,
}

fn q_check(name: &str, lhs: &QSeries, rhs: &QSeries, need: &Rational) -> IdentityCheck {
    let reach = std::cmp::min(lhs.order(), rhs.order()).clone();
    let mut detail = String::new();
    let mut pass = true;
    if &reach < need {
        pass = false;
        detail = format!("comparison range stops at {}", format_rational(&reach));
    } else if !lhs.agrees_with(rhs) {
        pass = false;
        let diff = (lhs - rhs).truncate(need);
        let first = diff.terms().next().map(|(e, c)| (e, c.clone()));
        if let Some((e, c)) = first {
            detail = format!("first difference at q^{}: {}", format_rational(&e), format_rational(&c));
        }
    }
    IdentityCheck { name: name.into(), checked_below: format_rational(&reach), pass, detail }
}

fn j_check(name: &str, lhs: &JSeries, rhs: &JSeries, need: &Rational) -> IdentityCheck {
    let reach = std::cmp::min(lhs.order(), rhs.order()).clone();
    let mut detail = String::new();
    let mut pass = true;
    if &reach < need {
        pass = false;
        detail = format!("comparison range stops at {}", format_rational(&reach));
    } else if !lhs.agrees_with(rhs) {
        pass = false;
        let diff = (lhs - rhs).truncate(need);
        let first = diff.terms().next();
        if let Some((n, r, c)) = first {
            detail = format!(
                "first difference at q^{} ζ^{}: {}",
                format_rational(&n),
                format_rational(&r),
                format_rational(&c)
            );
        }
    }
    IdentityCheck { name: name.into(), checked_below: format_rational(&reach), pass, detail }
}

/// `θ_1(z;τ)^2 = θ_2(2τ) θ_3(2z;2τ) - θ_3(2τ) θ_2(2z;2τ)`.
pub fn theta1_squared_identity(order: &Rational) -> IdentityCheck {
    let w = order + int(1);
    let rhs = theta3(2, 2, &w).mul_q(&theta_const(2, 2, &w)) - theta2(2, 2, &w).mul_q(&theta_const(3, 2, &w));
    j_check("theta1-squared", &theta1_squared(&w), &rhs, order)
}

/// `S_0 θ_3(2τ) + S_1 θ_2(2τ) = η^3`.
pub fn s_eta_identity(s: &SPair, order: &Rational) -> IdentityCheck {
    let w = order + int(1);
    let lhs = &s.s0 * &theta_const(3, 2, &w) + &s.s1 * &theta_const(2, 2, &w);
    q_check("S0-S1-eta3", &lhs, &eta_power(3, &w), order)
}

/// `θ_2^4 - θ_3^4 + θ_4^4 = 0`.
pub fn jacobi_quartic(order: &Rational) -> IdentityCheck {
    let w = order + int(1);
    let p = |j| theta_const(j, 1, &w).pow(4).expect("positive power");
    let lhs = p(2) - p(3) + p(4);
    q_check("jacobi-quartic", &lhs, &QSeries::zero(w.clone()), order)
}

/// `θ_1^2 μ = S_0 θ_3(2z;2τ) + S_1 θ_2(2z;2τ)`, from the triple sum on the
/// left and the nested S-series on the right.
pub fn theta1_mu_identity(s: &SPair, order: &Rational) -> IdentityCheck {
    let w = order + int(1);
    let rhs = theta3(2, 2, &w).mul_q(&s.s0) + theta2(2, 2, &w).mul_q(&s.s1);
    j_check("theta1-squared-mu", &theta1sq_mu(&w), &rhs, order)
}

/// `η^3 f_0 = χ S_0 + θ_2(2τ) F` and `η^3 f_1 = χ S_1 - θ_3(2τ) F`.
pub fn hsf_identities(d: &DecompResult, s: &SPair, order: &Rational) -> [IdentityCheck; 2] {
    let w = order + int(1);
    let eta3 = eta_power(3, &w);
    let chi = QSeries::constant(d.chi.clone(), w.clone());
    let l0 = &eta3 * &d.f0;
    let r0 = &chi * &s.s0 + &theta_const(2, 2, &w) * &d.fmock;
    let l1 = &eta3 * &d.f1;
    let r1 = &chi * &s.s1 - &theta_const(3, 2, &w) * &d.fmock;
    [
        q_check(&format!("eta3-f0 ({})", d.label), &l0, &r0, order),
        q_check(&format!("eta3-f1 ({})", d.label), &l1, &r1, order),
    ]
}

/// `R^{K3} = -16 + 32 (θ_3(2τ)/θ_4(2τ))^4 = 16 + 512 (η(4τ)/η(τ))^8`.
pub fn hauptmodul_identities(r: &QSeries, order: &Rational) -> Result<[IdentityCheck; 2]> {
    let w = order + int(1);
    let ratio = theta_const(3, 2, &w).div(&theta_const(4, 2, &w))?.pow(4)?;
    let a = ratio.scale(&int(32)) - QSeries::constant(int(16), w.clone());
    let eta = eta_power_scaled(1, 4, &w).div(&eta_power(1, &w))?.pow(8)?;
    let b = eta.scale(&int(512)) + QSeries::constant(int(16), w.clone());
    Ok([q_check("hauptmodul-theta", r, &a, order), q_check("hauptmodul-eta", r, &b, order)])
}

/// The nested and quadrant formulas for `S_0, S_1`.
pub fn s_oracle_identity(order: &Rational) -> [IdentityCheck; 2] {
    let s = SPair::new(order);
    [
        q_check("S0-oracle", &s.s0, &s_series_oracle(0, order), order),
        q_check("S1-oracle", &s.s1, &s_series_oracle(1, order), order),
    ]
}

/// Runs the whole suite at `order` with the given S-pair, so a perturbed
/// pair can be injected. The pair must be valid past `order + 1/8`.
pub fn identity_suite_with(order: &Rational, s: &SPair) -> Result<Vec<IdentityCheck>> {
    let mut out = vec![theta1_squared_identity(order), s_eta_identity(s, order), jacobi_quartic(order)];
    out.push(theta1_mu_identity(s, order));
    let w = order + int(1);
    let k3 = decompose(&build_k3(&w)?, None)?;
    out.extend(hsf_identities(&k3, s, order));
    out.extend(hauptmodul_identities(&k3.r_shift, order)?);
    let (_, genus) = build_rank6(&w)?;
    let g = decompose(&crate::decomp::JacobiFormInput::new("rank6", genus.series)?, None)?;
    out.extend(hsf_identities(&g, s, order));
    out.extend(s_oracle_identity(order));
    Ok(out)
}

/// `identity_suite_with` on the true S-pair, a little past `order` so
/// products keep the full range.
pub fn identity_suite(order: &Rational) -> Result<Vec<IdentityCheck>> {
    let s = SPair::new(&(order + int(1)));
    identity_suite_with(order, &s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_identities_hold() {
        let o = int(6);
        let s = SPair::new(&int(7));
        assert!(theta1_squared_identity(&o).pass);
        assert!(s_eta_identity(&s, &o).pass);
        assert!(jacobi_quartic(&o).pass);
        assert!(theta1_mu_identity(&s, &o).pass);
    }

    #[test]
    fn flipped_s1_is_caught() {
        let o = int(5);
        let mut s = SPair::new(&int(6));
        s.s1 = -&s.s1;
        let c = s_eta_identity(&s, &o);
        assert!(!c.pass);
        assert!(c.detail.contains("first difference"));
    }
}
