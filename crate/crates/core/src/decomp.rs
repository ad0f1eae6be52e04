//! Theta decomposition of weight-zero index-one weak Jacobi forms, the
//! coefficient mock modular form `F^φ = f_0 S_1 - f_1 S_0` and the N=4
//! Ramond character coefficients `A_0, B_n`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi_series::JSeries;
use crate::mock::{theta1sq_mu, SPair};
use crate::qseries::QSeries;
use crate::rational::{floor_i64, format_rational, int, parse_rational, rat, Rational};
use crate::theta::{eta_power, theta1_squared, theta_const, theta_mmu};

/// A Jacobi form with integer ζ-exponents and a label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "JacobiFormWire", into = "JacobiFormWire")]
pub struct JacobiFormInput {
    pub label: String,
    pub form: JSeries,
}

impl JacobiFormInput {
    pub fn new(label: impl Into<String>, form: JSeries) -> Result<Self> {
        if !form.has_integer_zexponents() {
            return Err(Error::InvalidArgument("Jacobi form input must have integer ζ-exponents".into()));
        }
        Ok(JacobiFormInput { label: label.into(), form })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompResult {
    pub label: String,
    #[serde(with = "rational_string")]
    pub chi: Rational,
    pub r_shift: QSeries,
    pub f0: QSeries,
    pub f1: QSeries,
    pub fmock: QSeries,
    #[serde(with = "rational_string")]
    pub a0: Rational,
    #[serde(with = "rational_vec")]
    pub b: Vec<Rational>,
}

/// Checks that `c(n,r)` depends only on `4mn - r^2` and `r mod 2m` over the
/// stored range: every stored term is compared with all its partners
/// `(n', r')` below the order, absent partners counting as zero.
pub fn check_discriminant_symmetry(form: &JSeries, index: &Rational) -> Result<()> {
    if index.is_zero() {
        // index 0: c(n,r) must vanish for r != 0 (no ζ-dependence)
        if form.zexponents().iter().any(|r| !r.is_zero()) {
            return Err(Error::SymmetryViolation("index-0 form depends on ζ".into()));
        }
        return Ok(());
    }
    if !form.has_integer_zexponents() {
        return Err(Error::SymmetryViolation("ζ-exponents are not integers".into()));
    }
    let four_m = index * int(4);
    let period = index * int(2);
    if !period.is_integer() {
        return Err(Error::SymmetryViolation(format!("2m = {} is not an integer", format_rational(&period))));
    }
    let period = floor_i64(&period);
    let order = form.order();
    for (n, r, c) in form.terms() {
        let disc = &four_m * &n - &r * &r;
        let r0 = floor_i64(&r);
        // partners r' = r0 + j·2m with n' = (disc + r'^2)/4m < order
        let rbound = crate::rational::sqrt_ceil_bound(&(order * &four_m - &disc).max(Rational::zero()));
        let jlo = (-rbound - r0).div_euclid(period) - 1;
        let jhi = (rbound - r0).div_euclid(period) + 1;
        for j in jlo..=jhi {
            let rp = int(r0 + j * period);
            let np = (&disc + &rp * &rp) / &four_m;
            if np >= *order {
                continue;
            }
            let cp = form.coeff(&np, &rp)?;
            if cp != c {
                return Err(Error::SymmetryViolation(format!(
                    "c({}, {}) = {} but c({}, {}) = {}",
                    format_rational(&n),
                    format_rational(&r),
                    format_rational(&c),
                    format_rational(&np),
                    format_rational(&rp),
                    format_rational(&cp)
                )));
            }
        }
    }
    Ok(())
}

/// `f_r(τ) = q^{-r^2/4} [ζ^r] φ` for `r = 0, 1`, with the reconstruction
/// `f_0 θ_{1,0} + f_1 θ_{1,1}` required to reproduce `φ`.
pub fn theta_decompose(phi: &JSeries) -> Result<(QSeries, QSeries)> {
    if !phi.has_integer_zexponents() {
        return Err(Error::DecompositionMismatch("ζ-exponents are not integers".into()));
    }
    let f0 = phi.zcoeff(&int(0));
    let f1 = phi.zcoeff(&int(1)).shift(&rat(-1, 4));
    let rebuilt = reconstruct_from_theta(&f0, &f1, phi.order());
    if rebuilt.order() < phi.order() {
        return Err(Error::DecompositionMismatch("reconstruction order fell below the input order".into()));
    }
    if !rebuilt.agrees_with(phi) {
        let diff = &rebuilt - phi;
        let (n, r, c) = diff.terms().next().expect("nonzero difference");
        return Err(Error::DecompositionMismatch(format!(
            "f_0 θ_(1,0) + f_1 θ_(1,1) differs from the input at q^{} ζ^{} by {}",
            format_rational(&n),
            format_rational(&r),
            format_rational(&c)
        )));
    }
    Ok((f0, f1))
}

/// `f_0 θ_{1,0}(z;τ) + f_1 θ_{1,1}(z;τ)` truncated at `order`.
pub fn reconstruct_from_theta(f0: &QSeries, f1: &QSeries, order: &Rational) -> JSeries {
    let t_order = order + int(1);
    let t0 = theta_mmu(1, 0, &t_order);
    let t1 = theta_mmu(1, 1, &t_order);
    (t0.mul_q(f0) + t1.mul_q(f1)).truncate(order)
}

/// `χ = φ(0;τ)`, which must be constant.
pub fn chi_of(phi: &JSeries) -> Result<Rational> {
    let v = phi.eval_z0();
    for (e, c) in v.terms() {
        if !e.is_zero() {
            return Err(Error::NotConstant { exponent: e, coeff: c.clone() });
        }
    }
    if v.order().is_positive() {
        v.coeff(&Rational::zero())
    } else {
        Ok(Rational::zero())
    }
}

/// `R(τ) = φ(1/2;τ)`.
pub fn r_shift_of(phi: &JSeries) -> Result<QSeries> {
    Ok(phi.shift_half()?.eval_z0())
}

/// `f_0 = (χ+R)/(2θ_3(2τ))`, `f_1 = (χ-R)/(2θ_2(2τ))`, with `χ` a constant.
pub fn f_from_chi_r(chi: &Rational, r: &QSeries, order: &Rational) -> Result<(QSeries, QSeries)> {
    let c = QSeries::constant(chi.clone(), r.order().clone());
    f_from_chi_r_series(&c, r, order)
}

/// As `f_from_chi_r` with `χ(τ)` given as a series.
pub fn f_from_chi_r_series(chi: &QSeries, r: &QSeries, order: &Rational) -> Result<(QSeries, QSeries)> {
    let t_order = std::cmp::max(order, r.order()) + int(1);
    let th3 = theta_const(3, 2, &t_order).scale(&int(2));
    let th2 = theta_const(2, 2, &t_order).scale(&int(2));
    let f0 = (chi + r).div(&th3)?.truncate(order);
    let f1 = (chi - r).div(&th2)?.truncate(order);
    Ok((f0, f1))
}

/// `F^φ = f_0 S_1 - f_1 S_0`.
pub fn f_mock(f0: &QSeries, f1: &QSeries, s: &SPair) -> QSeries {
    f0 * &s.s1 - f1 * &s.s0
}

/// Largest `n` with `q^{n-1/8}` below the order of `f`, if any.
pub fn max_exact_n(f: &QSeries) -> Option<usize> {
    let top = f.order() + rat(1, 8);
    // n - 1/8 < order  <=>  n < order + 1/8
    let n = crate::rational::ceil_i64(&top) - 1;
    (n >= 0).then_some(n as usize)
}

/// `B_n = [q^{n-1/8}] F` for `n = 0..=nmax` and `A_0 = χ + 2 B_0`.
pub fn n4_coefficients(chi: &Rational, f: &QSeries, nmax: Option<usize>) -> Result<(Rational, Vec<Rational>)> {
    for (e, _) in f.terms() {
        let shifted = &e + rat(1, 8);
        if !shifted.is_integer() || shifted.is_negative() {
            return Err(Error::GridMismatch { exponent: e });
        }
    }
    let available = max_exact_n(f);
    let nmax = match (nmax, available) {
        (Some(n), _) => Some(n),
        (None, a) => a,
    };
    let mut b = Vec::new();
    if let Some(nmax) = nmax {
        for n in 0..=nmax {
            b.push(f.coeff(&(int(n as i64) - rat(1, 8)))?);
        }
    }
    let b0 = b.first().cloned().unwrap_or_else(Rational::zero);
    Ok((chi + b0 * int(2), b))
}

/// `φ = (χ θ_1^2 μ + F θ_1^2) η^{-3}` truncated at `order`.
pub fn reconstruct_phi(chi: &Rational, f: &QSeries, order: &Rational) -> Result<JSeries> {
    let work = order + int(1);
    let mu_part = theta1sq_mu(&work).scale(chi);
    let th1sq = theta1_squared(&work);
    let eta_inv = eta_power(-3, &work);
    let sum = mu_part + th1sq.mul_q(f);
    Ok(sum.mul_q(&eta_inv).truncate(order))
}

/// Runs the full pipeline on one form: decomposition by ζ-coefficients and
/// by `(χ, R)`, which must agree, then `F^φ` and the N=4 coefficients.
pub fn decompose(input: &JacobiFormInput, nmax: Option<usize>) -> Result<DecompResult> {
    let phi = &input.form;
    let (f0, f1) = theta_decompose(phi)?;
    let chi = chi_of(phi)?;
    let r_shift = r_shift_of(phi)?;
    let (g0, g1) = f_from_chi_r(&chi, &r_shift, phi.order())?;
    if !g0.agrees_with(&f0) || !g1.agrees_with(&f1) {
        return Err(Error::DecompositionMismatch(
            "f_0, f_1 from ζ-coefficients disagree with (χ ± R)/2θ".into(),
        ));
    }
    let s = SPair::new(&(phi.order() + int(1)));
    let fmock = f_mock(&f0, &f1, &s);
    let (a0, b) = n4_coefficients(&chi, &fmock, nmax)?;
    Ok(DecompResult { label: input.label.clone(), chi, r_shift, f0, f1, fmock, a0, b })
}

mod rational_string {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

mod rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter().map(|s| parse_rational(s).map_err(serde::de::Error::custom)).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct CoefficientWire {
    n: String,
    r: i64,
    c: String,
}

#[derive(Serialize, Deserialize)]
struct JacobiFormWire {
    label: String,
    order: String,
    coefficients: Vec<CoefficientWire>,
}

impl From<JacobiFormInput> for JacobiFormWire {
    fn from(j: JacobiFormInput) -> Self {
        let mut coeffs: Vec<(Rational, i64, Rational)> = j
            .form
            .terms()
            .map(|(n, r, c)| (n, floor_i64(&r), c))
            .collect();
        coeffs.sort_by(|a, b| (&a.0, a.1).cmp(&(&b.0, b.1)));
        JacobiFormWire {
            label: j.label,
            order: format_rational(j.form.order()),
            coefficients: coeffs
                .into_iter()
                .map(|(n, r, c)| CoefficientWire { n: format_rational(&n), r, c: format_rational(&c) })
                .collect(),
        }
    }
}

impl TryFrom<JacobiFormWire> for JacobiFormInput {
    type Error = Error;
    fn try_from(w: JacobiFormWire) -> Result<Self> {
        let order = parse_rational(&w.order)?;
        let mut seen = BTreeMap::new();
        for c in &w.coefficients {
            let n = parse_rational(&c.n)?;
            if n >= order {
                return Err(Error::Parse(format!("coefficient at q^{} lies at or beyond the order", c.n)));
            }
            if seen.insert((n, c.r), ()).is_some() {
                return Err(Error::Parse(format!("duplicate coefficient for q^{} ζ^{}", c.n, c.r)));
            }
        }
        let terms = w
            .coefficients
            .iter()
            .map(|c| Ok((parse_rational(&c.n)?, int(c.r), parse_rational(&c.c)?)))
            .collect::<Result<Vec<_>>>()?;
        JacobiFormInput::new(w.label, JSeries::from_terms(terms, order))
    }
}
