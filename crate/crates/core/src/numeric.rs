//! Floating-point evaluation of truncated series, the non-holomorphic
//! completion `C(τ)`, the indefinite theta functions `ϑ^ℓ`, and residual
//! checks of their transformation laws.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;
use libm::erfc;

use crate::error::{Error, Result};
use crate::jacobi_series::JSeries;
use crate::mock::SPair;
use crate::qseries::QSeries;
use crate::rational::{to_f64, Rational};
use crate::theta::theta_const;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Points this close to the real axis are refused.
pub const MIN_IM_TAU: f64 = 0.2;

#[derive(Clone, Debug, PartialEq)]
pub struct NumericContext {
    pub tau: Complex64,
    pub z: Option<Complex64>,
    pub radius: u32,
    pub tol: f64,
}

impl NumericContext {
    pub fn new(tau: Complex64, radius: u32, tol: f64) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::InvalidArgument(format!("tau = {tau} is not in the upper half-plane")));
        }
        if tau.im < MIN_IM_TAU {
            return Err(Error::InvalidArgument(format!("Im(tau) = {} is below {MIN_IM_TAU}", tau.im)));
        }
        if !(tol > 0.0) {
            return Err(Error::InvalidArgument("tol must be positive".into()));
        }
        if radius < 3 {
            return Err(Error::InvalidArgument("radius must be at least 3".into()));
        }
        Ok(NumericContext { tau, z: None, radius, tol })
    }

    pub fn with_z(mut self, z: Complex64) -> Self {
        self.z = Some(z);
        self
    }

    pub fn y(&self) -> f64 {
        self.tau.im
    }
}

/// Parses `a+bi`, `a-bi`, `bi`, `i`, `a`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || Error::Parse(format!("cannot read complex number {s:?}"));
    if t.is_empty() {
        return Err(err());
    }
    let imag = |p: &str| -> Result<f64> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse::<f64>().map_err(|_| err()),
        }
    };
    if let Some(body) = t.strip_suffix('i') {
        // split at the last sign that is not an exponent sign or leading
        let bytes = body.as_bytes();
        let mut cut = None;
        for k in (1..bytes.len()).rev() {
            if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
                cut = Some(k);
                break;
            }
        }
        match cut {
            Some(k) => {
                let re = body[..k].parse::<f64>().map_err(|_| err())?;
                Ok(Complex64::new(re, imag(&body[k..])?))
            }
            None => Ok(Complex64::new(0.0, imag(body)?)),
        }
    } else {
        Ok(Complex64::new(t.parse::<f64>().map_err(|_| err())?, 0.0))
    }
}

/// A value together with a truncation estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluation {
    pub value: Complex64,
    pub tail: f64,
}

fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `β(x) = ∫_x^∞ u^{-1/2} e^{-πu} du = erfc(√(πx))`.
pub fn beta_fn(x: f64) -> f64 {
    assert!(x >= 0.0, "beta_fn needs x >= 0");
    erfc((PI * x).sqrt())
}

/// `ln β(x)`, usable where `β` itself underflows.
pub fn ln_beta(x: f64) -> f64 {
    let t = (PI * x).sqrt();
    if t < 25.0 {
        return beta_fn(x).ln();
    }
    let u = 1.0 / (2.0 * t * t);
    let series = 1.0 - u + 3.0 * u * u - 15.0 * u * u * u + 105.0 * u.powi(4);
    -t * t - (t * PI.sqrt()).ln() + series.ln()
}

fn qpow(tau: Complex64, e: f64) -> Complex64 {
    (2.0 * PI * I * tau * e).exp()
}

/// `Σ c_e q^e`. The tail is the summed magnitude of the terms in the last
/// unit of exponent below the order (zero when that window is empty).
pub fn eval_qseries(s: &QSeries, tau: Complex64) -> Evaluation {
    let order = to_f64(s.order());
    let mut value = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    for (e, c) in s.terms() {
        let e = to_f64(&e);
        let t = qpow(tau, e) * to_f64(c);
        value += t;
        if e >= order - 1.0 {
            tail += t.norm();
        }
    }
    Evaluation { value, tail }
}

/// `Σ c(n,r) q^n ζ^r` at `ζ = e^{2πiz}`, with the same tail rule in `n`.
pub fn eval_jseries(j: &JSeries, z: Complex64, tau: Complex64) -> Evaluation {
    let order = to_f64(j.order());
    let mut value = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    for (n, r, c) in j.terms() {
        let n = to_f64(&n);
        let t = qpow(tau, n) * (2.0 * PI * I * z * to_f64(&r)).exp() * to_f64(&c);
        value += t;
        if n >= order - 1.0 {
            tail += t.norm();
        }
    }
    Evaluation { value, tail }
}

/// `C(τ) = ½ Σ_m (-1)^m sgn(m+½) β(2(m+½)^2 y) q^{-(m+½)^2/2}` over
/// `|m+½| <= radius`, summed in log-magnitude. The tail is the size of the
/// outermost pair.
pub fn c_completion(ctx: &NumericContext) -> Evaluation {
    c_at(ctx.tau, ctx.radius)
}

fn c_at(tau: Complex64, radius: u32) -> Evaluation {
    let y = tau.im;
    let r = radius as i64;
    let mut value = Complex64::new(0.0, 0.0);
    let mut tail = 0.0;
    for m in -r..r {
        let h = m as f64 + 0.5;
        let x = 0.5 * h * h;
        let lnmag = ln_beta(2.0 * h * h * y) + 2.0 * PI * y * x;
        let phase = (-2.0 * PI * I * tau.re * x).exp();
        let sign = if m.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        let t = phase * (0.5 * sign * sgn(h) * lnmag.exp());
        value += t;
        if m == -r || m == r - 1 {
            tail += t.norm();
        }
    }
    Evaluation { value, tail }
}

/// The data of the indefinite theta function: `A = [[1,2],[2,2]]`,
/// `a(ℓ) = (½, -ℓ/2)`, `b = (½, 0)`, `c_1 = (-1,1)`, `c_2 = (-2,1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IndefiniteThetaData {
    pub gram: [[f64; 2]; 2],
    pub b: [f64; 2],
    pub c1: [f64; 2],
    pub c2: [f64; 2],
}

impl Default for IndefiniteThetaData {
    fn default() -> Self {
        IndefiniteThetaData { gram: [[1.0, 2.0], [2.0, 2.0]], b: [0.5, 0.0], c1: [-1.0, 1.0], c2: [-2.0, 1.0] }
    }
}

impl IndefiniteThetaData {
    pub fn a_shift(ell: i64) -> [f64; 2] {
        [0.5, -(ell as f64) / 2.0]
    }

    pub fn bilinear(&self, u: &[f64; 2], v: &[f64; 2]) -> f64 {
        let g = &self.gram;
        u[0] * (g[0][0] * v[0] + g[0][1] * v[1]) + u[1] * (g[1][0] * v[0] + g[1][1] * v[1])
    }

    pub fn quad(&self, u: &[f64; 2]) -> f64 {
        0.5 * self.bilinear(u, u)
    }
}

/// `ϑ^ℓ` split into `Σ (sgn B(ν,c_1) - sgn B(ν,c_2)) e^{2πiB(ν,b)} q^{Q(ν)}`
/// and the remaining β-terms; `total = holomorphic + correction`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaParts {
    pub holomorphic: Complex64,
    pub correction: Complex64,
}

impl ThetaParts {
    pub fn total(&self) -> Complex64 {
        self.holomorphic + self.correction
    }
}

/// The ν-sum over `a(ℓ) + Z^2` with both coordinates bounded by `radius`.
pub fn indefinite_theta_parts(ell: i64, tau: Complex64, radius: u32) -> ThetaParts {
    let d = IndefiniteThetaData::default();
    let a = IndefiniteThetaData::a_shift(ell);
    let (qc1, qc2) = (d.quad(&d.c1), d.quad(&d.c2));
    let y = tau.im;
    let r = radius as f64;
    let mut holomorphic = Complex64::new(0.0, 0.0);
    let mut correction = Complex64::new(0.0, 0.0);
    let span = radius as i64 + 1;
    for n1 in -span..=span {
        let v1 = a[0] + n1 as f64;
        if v1.abs() > r {
            continue;
        }
        for n2 in -span..=span {
            let v2 = a[1] + n2 as f64;
            if v2.abs() > r {
                continue;
            }
            let nu = [v1, v2];
            let qv = d.quad(&nu);
            let b1 = d.bilinear(&nu, &d.c1);
            let b2 = d.bilinear(&nu, &d.c2);
            let (s1, s2) = (sgn(b1), sgn(b2));
            let phase = (2.0 * PI * I * (d.bilinear(&nu, &d.b) + tau.re * qv)).exp();
            let base = -2.0 * PI * y * qv;
            if s1 != s2 {
                holomorphic += phase * ((s1 - s2) * base.exp());
            }
            let mut c = 0.0;
            if s1 != 0.0 {
                c -= s1 * (ln_beta(-b1 * b1 / qc1 * y) + base).exp();
            }
            if s2 != 0.0 {
                c += s2 * (ln_beta(-b2 * b2 / qc2 * y) + base).exp();
            }
            correction += phase * c;
        }
    }
    ThetaParts { holomorphic, correction }
}

/// `ϑ^ℓ(τ)`, compared between `radius` and `radius - 2`.
pub fn indefinite_theta(ell: i64, ctx: &NumericContext) -> Result<Evaluation> {
    theta_self_converged(ell, ctx.tau, ctx)
}

fn theta_self_converged(ell: i64, tau: Complex64, ctx: &NumericContext) -> Result<Evaluation> {
    let hi = indefinite_theta_parts(ell, tau, ctx.radius).total();
    let lo = indefinite_theta_parts(ell, tau, ctx.radius - 2).total();
    let difference = (hi - lo).norm();
    if difference > ctx.tol {
        return Err(Error::ConvergenceNotReached { check: format!("indefinite theta, ell = {ell}"), difference, tol: ctx.tol });
    }
    Ok(Evaluation { value: hi, tail: difference })
}

/// An element `[[a,b],[c,d]]` of `SL_2(Z)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Gamma {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Gamma {
    pub const IDENTITY: Gamma = Gamma { a: 1, b: 0, c: 0, d: 1 };
    pub const S: Gamma = Gamma { a: 0, b: -1, c: 1, d: 0 };
    pub const T: Gamma = Gamma { a: 1, b: 1, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::InvalidArgument(format!("[[{a},{b}],[{c},{d}]] has determinant != 1")));
        }
        Ok(Gamma { a, b, c, d })
    }

    pub fn mul(&self, o: &Gamma) -> Gamma {
        Gamma {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    pub fn cocycle(&self, tau: Complex64) -> Complex64 {
        tau * self.c as f64 + self.d as f64
    }

    pub fn apply(&self, tau: Complex64) -> Complex64 {
        (tau * self.a as f64 + self.b as f64) / self.cocycle(tau)
    }
}

impl FromStr for Gamma {
    type Err = Error;

    /// Words in `S` and `T` with optional integer exponents, e.g. `ST3S`;
    /// `I` is the identity.
    fn from_str(s: &str) -> Result<Self> {
        let mut g = Gamma::IDENTITY;
        if s == "I" {
            return Ok(g);
        }
        let chars: Vec<char> = s.chars().collect();
        if chars.is_empty() {
            return Err(Error::Parse("empty SL2(Z) word".into()));
        }
        let mut k = 0;
        while k < chars.len() {
            let gen = match chars[k] {
                'S' => Gamma::S,
                'T' => Gamma::T,
                other => return Err(Error::Parse(format!("unexpected {other:?} in SL2(Z) word {s:?}"))),
            };
            k += 1;
            let start = k;
            if k < chars.len() && chars[k] == '-' {
                k += 1;
            }
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            let digits: String = chars[start..k].iter().collect();
            let e: i64 = if digits.is_empty() {
                1
            } else {
                digits.parse().map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?
            };
            let base = if e < 0 { Gamma { a: gen.d, b: -gen.b, c: -gen.c, d: gen.a } } else { gen };
            for _ in 0..e.abs() {
                g = g.mul(&base);
            }
        }
        Ok(g)
    }
}

impl fmt::Display for Gamma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub point: BTreeMap<String, serde_json::Value>,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    pub truncation: BTreeMap<String, serde_json::Value>,
    pub parts: BTreeMap<String, f64>,
    pub diagnostics: BTreeMap<String, f64>,
}

impl Report {
    fn new(check: &str, ctx: &NumericContext) -> Self {
        let mut point = BTreeMap::new();
        point.insert("tau".to_string(), complex_json(ctx.tau));
        if let Some(z) = ctx.z {
            point.insert("z".to_string(), complex_json(z));
        }
        let mut truncation = BTreeMap::new();
        truncation.insert("radius".to_string(), serde_json::json!(ctx.radius));
        Report {
            check: check.to_string(),
            point,
            residual: 0.0,
            tol: ctx.tol,
            pass: false,
            truncation,
            parts: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
        }
    }

    fn part(&mut self, name: &str, residual: f64) {
        self.parts.insert(name.to_string(), residual);
    }

    fn note(&mut self, name: &str, value: f64) {
        self.diagnostics.insert(name.to_string(), value);
    }

    fn finish(mut self) -> Self {
        self.residual = self.parts.values().fold(0.0, |m, v| if v.is_nan() { f64::NAN } else { m.max(*v) });
        self.pass = self.residual <= self.tol;
        self
    }
}

fn complex_json(z: Complex64) -> serde_json::Value {
    serde_json::json!([z.re, z.im])
}

/// Holomorphic part of `ϑ^ℓ` against `2i(-1)^ℓ S_ℓ` from the exact series.
pub fn check_vartheta_holomorphic(ctx: &NumericContext, order: &Rational) -> Result<Report> {
    let s = SPair::new(order);
    let mut rep = Report::new("vartheta-holomorphic", ctx);
    rep.truncation.insert("order".into(), serde_json::json!(crate::format_rational(order)));
    for ell in 0..2 {
        let hi = indefinite_theta_parts(ell, ctx.tau, ctx.radius).holomorphic;
        let lo = indefinite_theta_parts(ell, ctx.tau, ctx.radius - 2).holomorphic;
        converged(&format!("holomorphic part, ell = {ell}"), hi, lo, ctx.tol)?;
        let sv = eval_qseries(s.get(ell), ctx.tau);
        let want = 2.0 * I * parity(ell) * sv.value;
        rep.part(&format!("ell{ell}"), (hi - want).norm());
        rep.note(&format!("ell{ell}_without_parity_sign"), (hi - 2.0 * I * sv.value).norm());
        rep.note(&format!("ell{ell}_series_tail"), sv.tail);
    }
    Ok(rep.finish())
}

fn parity(ell: i64) -> f64 {
    if ell.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

fn converged(what: &str, hi: Complex64, lo: Complex64, tol: f64) -> Result<()> {
    let difference = (hi - lo).norm();
    if difference > tol {
        Err(Error::ConvergenceNotReached { check: what.to_string(), difference, tol })
    } else {
        Ok(())
    }
}

/// `ϑ^ℓ(τ+1) = e^{iπ(1/4 - ℓ^2/2)} ϑ^ℓ(τ)` and
/// `ϑ^ℓ(-1/τ) = -(iτ/√2) Σ_{ℓ'} (-1)^{ℓℓ'} ϑ^{ℓ'}(τ)` for `ℓ = 0, 1`.
pub fn check_vartheta_transforms(ctx: &NumericContext) -> Result<Report> {
    let mut rep = Report::new("vartheta-transforms", ctx);
    let th: Vec<Complex64> =
        (0..2).map(|l| theta_self_converged(l, ctx.tau, ctx).map(|e| e.value)).collect::<Result<_>>()?;
    let shifted = ctx.tau + 1.0;
    let inverted = -1.0 / ctx.tau;
    for ell in 0..2i64 {
        let lhs = theta_self_converged(ell, shifted, ctx)?.value;
        let phase = (I * PI * (0.25 - 0.5 * (ell * ell) as f64)).exp();
        rep.part(&format!("T_ell{ell}"), (lhs - phase * th[ell as usize]).norm());

        let lhs = theta_self_converged(ell, inverted, ctx)?.value;
        let sum: Complex64 = (0..2i64).map(|lp| th[lp as usize] * parity(ell * lp)).sum();
        let rhs = -(I * ctx.tau / SQRT_2) * sum;
        rep.part(&format!("S_ell{ell}"), (lhs - rhs).norm());
    }
    Ok(rep.finish())
}

/// `ϑ^ℓ = 2i(-1)^ℓ Ŝ_ℓ` with `Ŝ_0 = S_0 - θ_2(2τ)C`, `Ŝ_1 = S_1 + θ_3(2τ)C`.
pub fn check_completions(ctx: &NumericContext, order: &Rational) -> Result<Report> {
    let mut rep = Report::new("completions", ctx);
    rep.truncation.insert("order".into(), serde_json::json!(crate::format_rational(order)));
    let s = SPair::new(order);
    let c = c_self_converged(ctx.tau, ctx)?;
    let th2 = eval_qseries(&theta_const(2, 2, order), ctx.tau);
    let th3 = eval_qseries(&theta_const(3, 2, order), ctx.tau);
    let shat = [
        eval_qseries(&s.s0, ctx.tau).value - th2.value * c.value,
        eval_qseries(&s.s1, ctx.tau).value + th3.value * c.value,
    ];
    for ell in 0..2i64 {
        let th = theta_self_converged(ell, ctx.tau, ctx)?.value;
        rep.part(&format!("ell{ell}"), (th - 2.0 * I * parity(ell) * shat[ell as usize]).norm());
        rep.note(&format!("ell{ell}_without_parity_sign"), (th - 2.0 * I * shat[ell as usize]).norm());
    }
    Ok(rep.finish())
}

fn c_self_converged(tau: Complex64, ctx: &NumericContext) -> Result<Evaluation> {
    let hi = c_at(tau, ctx.radius);
    let lo = c_at(tau, ctx.radius - 2);
    converged("completion C", hi.value, lo.value, ctx.tol)?;
    Ok(hi)
}

/// `F̂ = F + χ C`: the ratio `|F̂(γτ)| / (|cτ+d|^{1/2} |F̂(τ)|)` should be 1.
/// The residual is `|ratio - 1|`; the measured multiplier phase (in turns)
/// is recorded but not asserted.
pub fn check_completion_modulus(f: &QSeries, chi: f64, gamma: &Gamma, ctx: &NumericContext) -> Result<Report> {
    let mut rep = Report::new("completion-modulus", ctx);
    rep.point.insert("gamma".into(), serde_json::json!(gamma.to_string()));
    rep.truncation.insert("order".into(), serde_json::json!(crate::format_rational(f.order())));
    let limit = ctx.tol / 10.0;
    let fhat = |tau: Complex64| -> Result<Complex64> {
        let fe = eval_qseries(f, tau);
        if fe.tail > limit {
            return Err(Error::ConvergencePoor { tail: fe.tail, limit });
        }
        let c = c_self_converged(tau, ctx)?;
        Ok(fe.value + c.value * chi)
    };
    let here = fhat(ctx.tau)?;
    let there = fhat(gamma.apply(ctx.tau))?;
    let j = gamma.cocycle(ctx.tau);
    let m = there / (here * j.sqrt());
    rep.part("modulus", (m.norm() - 1.0).abs());
    rep.finish_with_phase(m.arg() / (2.0 * PI))
}

impl Report {
    fn finish_with_phase(self, turns: f64) -> Result<Self> {
        let mut r = self.finish();
        r.truncation.insert("multiplier_phase_turns".into(), serde_json::json!(turns));
        Ok(r)
    }
}

/// Something that can be evaluated as `φ(z; τ)`.
pub trait JacobiEval {
    fn label(&self) -> String;
    fn eval(&self, z: Complex64, tau: Complex64) -> Evaluation;
}

/// Evaluation of an exact truncated Jacobi series.
pub struct SeriesModel<'a>(pub &'a JSeries);

impl JacobiEval for SeriesModel<'_> {
    fn label(&self) -> String {
        format!("series to order {}", crate::format_rational(self.0.order()))
    }

    fn eval(&self, z: Complex64, tau: Complex64) -> Evaluation {
        eval_jseries(self.0, z, tau)
    }
}

/// `ϑ[a;b](z;τ) = Σ_{ν ∈ a+Z} e^{πiν^2τ + 2πiν(z+b)}`, summed outward from
/// the largest term until terms fall below `1e-18` of it.
pub fn theta_char_value(a: f64, b: f64, z: Complex64, tau: Complex64) -> Evaluation {
    let term = |nu: f64| (PI * I * nu * nu * tau + 2.0 * PI * I * nu * (z + b)).exp();
    // the magnitude is maximal near ν = -Im(z)/Im(τ)
    let centre = (-z.im / tau.im - a).round();
    let mut value = Complex64::new(0.0, 0.0);
    let mut peak: f64 = 0.0;
    let mut tail;
    let mut k = 0i64;
    loop {
        let mut edge: f64 = 0.0;
        for nu in [centre + k as f64 + a, centre - k as f64 - 1.0 + a] {
            let t = term(nu);
            value += t;
            edge = edge.max(t.norm());
        }
        peak = peak.max(edge);
        tail = edge;
        k += 1;
        if k > 3 && edge <= 1e-18 * peak {
            break;
        }
    }
    Evaluation { value, tail }
}

/// `η(τ) = q^{1/24} Σ_n (-1)^n q^{n(3n-1)/2}`.
pub fn eta_value(tau: Complex64) -> Evaluation {
    let mut value = Complex64::new(0.0, 0.0);
    let mut tail;
    let mut n = 0i64;
    loop {
        let mut edge: f64 = 0.0;
        for m in if n == 0 { vec![0] } else { vec![n, -n] } {
            let e = (m * (3 * m - 1)) as f64 / 2.0 + 1.0 / 24.0;
            let t = qpow(tau, e) * parity(m);
            value += t;
            edge = edge.max(t.norm());
        }
        tail = edge;
        n += 1;
        if n > 2 && edge <= 1e-18 * value.norm() {
            break;
        }
    }
    Evaluation { value, tail }
}

/// Closed forms of the two worked examples, evaluated through theta sums
/// and the pentagonal series directly; these converge at any `τ` in the
/// upper half-plane since every summand is a Gaussian.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `2φ_{0,1} = 8 Σ_{j=2,3,4} (θ_j(z;τ)/θ_j(τ))^2`.
    K3,
    /// `-Σ_{r ∈ {1,3,5}} (ϑ[r/6;½](z;3τ)/η(τ))^6`.
    Rank6Genus,
}

impl JacobiEval for ClosedForm {
    fn label(&self) -> String {
        match self {
            ClosedForm::K3 => "2phi01 closed form".into(),
            ClosedForm::Rank6Genus => "rank-6 genus closed form".into(),
        }
    }

    fn eval(&self, z: Complex64, tau: Complex64) -> Evaluation {
        let zero = Complex64::new(0.0, 0.0);
        match self {
            ClosedForm::K3 => {
                let mut value = zero;
                let mut tail: f64 = 0.0;
                for (a, b) in [(0.5, 0.0), (0.0, 0.0), (0.0, 0.5)] {
                    let num = theta_char_value(a, b, z, tau);
                    let den = theta_char_value(a, b, zero, tau);
                    let ratio = num.value / den.value;
                    value += ratio * ratio * 8.0;
                    tail = tail.max(num.tail.max(den.tail));
                }
                Evaluation { value, tail }
            }
            ClosedForm::Rank6Genus => {
                let eta = eta_value(tau);
                let mut value = zero;
                let mut tail = eta.tail;
                for r in [1.0, 3.0, 5.0] {
                    let t = theta_char_value(r / 6.0, 0.5, z, tau * 3.0);
                    value -= (t.value / eta.value).powi(6);
                    tail = tail.max(t.tail);
                }
                Evaluation { value, tail }
            }
        }
    }
}

/// `|φ(z/(cτ+d); γτ) - e^{2πi c z^2/(cτ+d)} φ(z;τ)|` at the context point.
pub fn check_jacobi_automorphy(phi: &dyn JacobiEval, gamma: &Gamma, ctx: &NumericContext) -> Result<Report> {
    let z = ctx.z.ok_or_else(|| Error::InvalidArgument("automorphy check needs z".into()))?;
    let mut rep = Report::new("jacobi-automorphy", ctx);
    rep.point.insert("gamma".into(), serde_json::json!(gamma.to_string()));
    rep.truncation.insert("model".into(), serde_json::json!(phi.label()));
    let j = gamma.cocycle(ctx.tau);
    let image = gamma.apply(ctx.tau);
    rep.point.insert("gamma_tau".into(), complex_json(image));
    let lhs = phi.eval(z / j, image);
    let rhs = phi.eval(z, ctx.tau);
    let tail = lhs.tail.max(rhs.tail);
    rep.truncation.insert("tail".into(), serde_json::json!(tail));
    let limit = ctx.tol / 10.0;
    if !(tail <= limit) {
        return Err(Error::ConvergencePoor { tail, limit });
    }
    let factor = (2.0 * PI * I * (z * z * gamma.c as f64) / j).exp();
    rep.part("residual", (lhs.value - factor * rhs.value).norm());
    Ok(rep.finish())
}

/// `η^3` against `S_0 θ_3(2τ) + S_1 θ_2(2τ)`, both evaluated from exact series.
pub fn check_eta_cubed(ctx: &NumericContext, order: &Rational) -> Report {
    let mut rep = Report::new("eta3-identity", ctx);
    rep.truncation.insert("order".into(), serde_json::json!(crate::format_rational(order)));
    let s = SPair::new(order);
    let lhs = eval_qseries(&crate::theta::eta_power(3, order), ctx.tau).value;
    let rhs = eval_qseries(&s.s0, ctx.tau).value * eval_qseries(&theta_const(3, 2, order), ctx.tau).value
        + eval_qseries(&s.s1, ctx.tau).value * eval_qseries(&theta_const(2, 2, order), ctx.tau).value;
    rep.part("residual", (lhs - rhs).norm());
    rep.finish()
}
