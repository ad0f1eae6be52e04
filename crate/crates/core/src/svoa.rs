//! Jacobi trace functions of super vertex operator algebras, their
//! decomposition into `θ_{m,μ}`, the three half-period spectral flows, and
//! the two worked examples: the K3 elliptic genus and the rank-6 lattice
//! `L = L_3 + Zh` with `L_3 = (√3 Z)^6`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::decomp::{check_discriminant_symmetry, theta_decompose, JacobiFormInput};
use crate::error::{Error, Result};
use crate::jacobi_series::JSeries;
use crate::qseries::QSeries;
use crate::rational::{floor_i64, format_rational, int, rat, sign_pow, Rational};
use crate::theta::{
    eta_power, lattice_theta, theta2, theta3, theta4, theta_char, theta_const, theta_mnu, LatticeSpec, ThetaChar,
};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TraceFunction {
    pub series: JSeries,
    /// Index `m`, with `2m` a non-negative integer.
    #[serde(serialize_with = "ser_rational")]
    pub index: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub central_charge: Rational,
    pub label: String,
}

impl TraceFunction {
    pub fn new(series: JSeries, index: Rational, central_charge: Rational, label: impl Into<String>) -> Result<Self> {
        if !series.has_integer_zexponents() {
            return Err(Error::InvalidArgument("trace functions have integer ζ-exponents".into()));
        }
        if index.is_negative() || !(&index * int(2)).is_integer() {
            return Err(Error::InvalidArgument(format!("index {} is not in (1/2)Z>=0", format_rational(&index))));
        }
        Ok(TraceFunction { series, index, central_charge, label: label.into() })
    }

    fn with_series(&self, series: JSeries, label: String) -> Self {
        TraceFunction { series, index: self.index.clone(), central_charge: self.central_charge.clone(), label }
    }

    fn two_m(&self) -> i64 {
        floor_i64(&(&self.index * int(2)))
    }
}

/// `Z = Σ_{μ mod 2m} g_μ θ_{m,μ}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GDecomp {
    pub g: BTreeMap<i64, QSeries>,
    #[serde(serialize_with = "ser_rational")]
    pub index: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub central_charge: Rational,
}

impl GDecomp {
    pub fn get(&self, mu: i64) -> QSeries {
        let two_m = floor_i64(&(&self.index * int(2)));
        let key = if two_m == 0 { 0 } else { mu.rem_euclid(two_m) };
        self.g.get(&key).cloned().unwrap_or_else(|| QSeries::zero(int(0)))
    }

    /// `Σ_μ sign(μ) g_μ θ_{m, μ + shift}` truncated at `order`.
    fn assemble(&self, shift: &Rational, sign: impl Fn(i64) -> Rational, order: &Rational) -> JSeries {
        if self.index.is_zero() {
            let g = self.get(0).scale(&sign(0));
            return JSeries::from_q(g).truncate(order);
        }
        let t_order = order + int(2);
        let mut acc = JSeries::zero(order.clone());
        for (mu, g) in &self.g {
            let th = theta_mnu(&self.index, &(int(*mu) + shift), &t_order);
            acc = acc + th.mul_q(&g.scale(&sign(*mu)));
        }
        acc.truncate(order)
    }

    /// `Σ_μ g_μ θ_{m,μ}`.
    pub fn reconstruct(&self, order: &Rational) -> JSeries {
        self.assemble(&Rational::zero(), |_| int(1), order)
    }
}

/// `g_μ = q^{-μ^2/4m} [ζ^μ] Z` for `0 <= μ < 2m`, after checking the
/// discriminant symmetry and that `Σ g_μ θ_{m,μ}` gives back `Z`.
pub fn trace_decompose(t: &TraceFunction) -> Result<GDecomp> {
    check_discriminant_symmetry(&t.series, &t.index)?;
    let two_m = t.two_m();
    let mut g = BTreeMap::new();
    if two_m == 0 {
        g.insert(0, t.series.zcoeff(&int(0)));
    } else {
        let four_m = &t.index * int(4);
        for mu in 0..two_m {
            let f = t.series.zcoeff(&int(mu)).shift(&-(int(mu * mu) / &four_m));
            g.insert(mu, f);
        }
    }
    let d = GDecomp { g, index: t.index.clone(), central_charge: t.central_charge.clone() };
    let rebuilt = d.reconstruct(t.series.order());
    if !rebuilt.agrees_with(&t.series) {
        return Err(Error::DecompositionMismatch(format!("Σ g_μ θ_(m,μ) does not reproduce {}", t.label)));
    }
    Ok(d)
}

/// Both constructions of a spectral flow: by substitution in z and by
/// relabelling the theta decomposition.
#[derive(Clone, Debug)]
pub struct FlowRoutes {
    pub substitution: JSeries,
    pub theta: JSeries,
}

impl FlowRoutes {
    fn checked(self, what: &str) -> Result<JSeries> {
        if self.substitution.agrees_with(&self.theta) {
            Ok(self.theta)
        } else {
            Err(Error::Inconsistent(format!("{what}: z-substitution and theta relabelling differ")))
        }
    }
}

/// `Z(z + 1/2)` and `Σ e^{πiμ} g_μ θ_{m,μ}`.
pub fn supertrace_routes(t: &TraceFunction) -> Result<FlowRoutes> {
    let d = trace_decompose(t)?;
    Ok(FlowRoutes {
        substitution: t.series.shift_half()?,
        theta: d.assemble(&Rational::zero(), sign_pow, t.series.order()),
    })
}

fn integer_index(t: &TraceFunction) -> Result<i64> {
    if !t.index.is_integer() {
        return Err(Error::InvalidArgument("z -> z + τ/2 needs an integer index".into()));
    }
    Ok(floor_i64(&t.index))
}

/// `q^{m/4} ζ^m Z(z + τ/2)` and `Σ g_μ θ_{m,μ+m}`.
pub fn sigma_twist_routes(t: &TraceFunction) -> Result<FlowRoutes> {
    let m = integer_index(t)?;
    let d = trace_decompose(t)?;
    let substitution = t.series.shift_half_tau().shift_q(&rat(m, 4)).mul_zeta(&int(m));
    let order = t.series.order();
    let theta = d.assemble(&int(m), |_| int(1), order);
    Ok(FlowRoutes { substitution, theta })
}

/// `(-1)^m q^{m/4} ζ^m Z(z + τ/2 + 1/2)` and `Σ e^{πiμ} g_μ θ_{m,m+μ}`.
pub fn elliptic_genus_routes(t: &TraceFunction) -> Result<FlowRoutes> {
    let m = integer_index(t)?;
    let d = trace_decompose(t)?;
    let sigma = t.series.shift_half_tau().shift_q(&rat(m, 4)).mul_zeta(&int(m));
    let substitution = sigma.shift_half()?.scale(&sign_pow(m));
    let theta = d.assemble(&int(m), sign_pow, t.series.order());
    Ok(FlowRoutes { substitution, theta })
}

/// Supertrace `Z̃(z;τ) = Z(z + 1/2; τ)`.
pub fn supertrace(t: &TraceFunction) -> Result<TraceFunction> {
    let s = supertrace_routes(t)?.checked("supertrace")?;
    Ok(t.with_series(s, format!("supertrace({})", t.label)))
}

/// The σ-twisted trace `q^{m/4} ζ^m Z(z + τ/2)`. The theta route is
/// returned; it carries the larger validity order.
pub fn sigma_twist(t: &TraceFunction) -> Result<TraceFunction> {
    let s = sigma_twist_routes(t)?.checked("sigma twist")?;
    Ok(t.with_series(s, format!("sigma({})", t.label)))
}

/// The elliptic genus `(-1)^m Z_σ(z + 1/2)`.
pub fn elliptic_genus(t: &TraceFunction) -> Result<TraceFunction> {
    let s = elliptic_genus_routes(t)?.checked("elliptic genus")?;
    Ok(t.with_series(s, format!("genus({})", t.label)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositivityViolation {
    pub mu: i64,
    /// `N = 4m(e + c/24)` for the term `q^e` of `g_μ`.
    #[serde(serialize_with = "ser_rational")]
    pub n: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub coeff: Rational,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

/// Every `(μ, N)` with `c_μ(N) < 0`, and with `grading_nonneg` also every
/// nonzero `c_μ(N)` at `N < 0`.
pub fn positivity_check(g: &GDecomp, grading_nonneg: bool) -> Vec<PositivityViolation> {
    let four_m = &g.index * int(4);
    let shift = &g.central_charge / int(24);
    let mut out = Vec::new();
    for (mu, series) in &g.g {
        for (e, c) in series.terms() {
            let n = &four_m * (&e + &shift);
            if c.is_negative() || (grading_nonneg && n.is_negative()) {
                out.push(PositivityViolation { mu: *mu, n, coeff: c.clone() });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParityVerdict {
    Obstructed,
    Possible,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParityReport {
    pub verdict: ParityVerdict,
    /// Violations for the candidates `(g_0, g_1) = (f_1, -f_0)` and `(-f_1, f_0)`.
    pub candidates: [Vec<PositivityViolation>; 2],
}

/// An index-one form can be the elliptic genus of an SVOA with a parity
/// root only if `(g_0, g_1) = ±(f_1, -f_0)` has non-negative coefficients.
pub fn parity_root_obstruction(phi: &JacobiFormInput) -> Result<ParityReport> {
    let (f0, f1) = theta_decompose(&phi.form)?;
    let cand = |s: i64| {
        let mut g = BTreeMap::new();
        g.insert(0, f1.scale(&int(s)));
        g.insert(1, f0.scale(&int(-s)));
        positivity_check(&GDecomp { g, index: int(1), central_charge: int(6) }, false)
    };
    let candidates = [cand(1), cand(-1)];
    let verdict = if candidates.iter().all(|c| !c.is_empty()) {
        ParityVerdict::Obstructed
    } else {
        ParityVerdict::Possible
    };
    Ok(ParityReport { verdict, candidates })
}

/// `2φ_{0,1} = 8 Σ_{j=2,3,4} θ_j(z;τ)^2 / θ_j(τ)^2`.
pub fn build_k3(order: &Rational) -> Result<JacobiFormInput> {
    let work = order + int(1);
    let mut acc = JSeries::zero(work.clone());
    for (num, j) in [(theta2(1, 1, &work), 2u8), (theta3(1, 1, &work), 3), (theta4(1, 1, &work), 4)] {
        let c = theta_const(j, 1, &work);
        let inv = (&c * &c).invert()?;
        acc = acc + (&num * &num).mul_q(&inv);
    }
    let form = acc.scale(&int(8)).truncate(order);
    if form.order() < order {
        return Err(Error::Inconsistent("K3 construction lost validity order".into()));
    }
    JacobiFormInput::new("K3", form)
}

/// Gram data of `L` in the basis `{h, α_2, ..., α_6}`: `(h,h) = 2`,
/// `(h, α_i) = 1`, `(α_i, α_j) = 3δ_ij`; the pairing vector is `h`.
pub fn rank6_lattice(shift: Vec<Rational>) -> LatticeSpec {
    let mut gram = vec![vec![Rational::zero(); 6]; 6];
    gram[0][0] = int(2);
    for i in 1..6 {
        gram[0][i] = int(1);
        gram[i][0] = int(1);
        gram[i][i] = int(3);
    }
    let mut pairing = vec![Rational::zero(); 6];
    pairing[0] = int(1);
    LatticeSpec::new(gram, shift, pairing).expect("well-formed Gram data")
}

/// `L_3 + r h` in the orthogonal basis `α_i` (Gram `3 I_6`), with
/// `h = (1/3, ..., 1/3)`.
pub fn rank6_coset(r: i64) -> LatticeSpec {
    let mut gram = vec![vec![Rational::zero(); 6]; 6];
    for (i, row) in gram.iter_mut().enumerate() {
        row[i] = int(3);
    }
    LatticeSpec::new(gram, vec![rat(r, 3); 6], vec![rat(1, 3); 6]).expect("well-formed Gram data")
}

/// `θ_L^h / η^6`.
pub fn rank6_trace_lattice(order: &Rational) -> Result<JSeries> {
    let work = order + rat(1, 4);
    let th = lattice_theta(&rank6_lattice(vec![Rational::zero(); 6]), &work)?;
    Ok(th.mul_q(&eta_power(-6, &work)).truncate(order))
}

/// `Σ_{r ∈ {0,1,2}} (η^{-1} ϑ[r/3;0](z;3τ))^6`.
pub fn rank6_trace_product(order: &Rational) -> Result<JSeries> {
    let work = order + rat(1, 4);
    let mut acc = JSeries::zero(work.clone());
    for r in 0..3 {
        let t = theta_char(&ThetaChar::new(rat(r, 3), Rational::zero(), 1, 3), &work)?;
        acc = acc + t.pow(6).into_real()?;
    }
    Ok(acc.mul_q(&eta_power(-6, &work)).truncate(order))
}

/// `θ^h_{L + h/2} / η^6`, the σ-twisted module built from the coset lattice.
pub fn rank6_sigma_lattice(order: &Rational) -> Result<JSeries> {
    let work = order + rat(1, 4);
    let mut shift = vec![Rational::zero(); 6];
    shift[0] = rat(1, 2);
    let th = lattice_theta(&rank6_lattice(shift), &work)?;
    Ok(th.mul_q(&eta_power(-6, &work)).truncate(order))
}

/// `-Σ_{r ∈ {1,3,5}} (η^{-1} ϑ[r/6;1/2](z;3τ))^6`.
pub fn rank6_genus_product(order: &Rational) -> Result<JSeries> {
    let work = order + rat(1, 4);
    let mut acc = JSeries::zero(work.clone());
    for r in [1, 3, 5] {
        let t = theta_char(&ThetaChar::new(rat(r, 6), rat(1, 2), 1, 3), &work)?;
        acc = acc - t.pow(6).into_real()?;
    }
    Ok(acc.mul_q(&eta_power(-6, &work)).truncate(order))
}

/// `Z_{V_L,h}` (lattice and product constructions, required to agree) and
/// the elliptic genus `E_{V_L,h}` (product formula, required to agree with
/// the spectral flow of `Z` on their common range).
pub fn build_rank6(order: &Rational) -> Result<(TraceFunction, TraceFunction)> {
    let z_lat = rank6_trace_lattice(order)?;
    let z_prod = rank6_trace_product(order)?;
    if z_lat != z_prod {
        return Err(Error::Inconsistent("θ_L^h/η^6 differs from the coset product formula".into()));
    }
    let trace = TraceFunction::new(z_lat, int(1), int(6), "Z_{V_L,h}")?;
    let e_prod = rank6_genus_product(order)?;
    let e_flow = elliptic_genus(&trace)?;
    if !e_flow.series.agrees_with(&e_prod) {
        return Err(Error::Inconsistent("elliptic genus differs between spectral flow and product formula".into()));
    }
    let genus = TraceFunction::new(e_prod, int(1), int(6), "E_{V_L,h}")?;
    Ok((trace, genus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theta::theta_mmu;

    #[test]
    fn theta11_as_trace() {
        let t = TraceFunction::new(theta_mmu(1, 1, &int(8)), int(1), int(0), "θ11").unwrap();
        let d = trace_decompose(&t).unwrap();
        assert!(d.get(0).is_zero());
        assert_eq!(d.get(1), QSeries::one(d.get(1).order().clone()));
    }

    #[test]
    fn supertrace_of_theta11() {
        let t = TraceFunction::new(theta_mmu(1, 1, &int(8)), int(1), int(0), "θ11").unwrap();
        let s = supertrace(&t).unwrap();
        assert_eq!(s.series, -&t.series);
        assert_eq!(supertrace(&s).unwrap().series, t.series);
    }

    #[test]
    fn sigma_twist_of_theta10() {
        let o = int(12);
        let t = TraceFunction::new(theta_mmu(1, 0, &o), int(1), int(0), "θ10").unwrap();
        let routes = sigma_twist_routes(&t).unwrap();
        assert!(routes.substitution.agrees_with(&theta_mmu(1, 1, &o)));
        assert!(*routes.substitution.order() > int(6));
    }

    #[test]
    fn constant_trace_index_zero() {
        let q = QSeries::from_int_terms(1, &[(0, 1), (1, 3)], int(5));
        let t = TraceFunction::new(JSeries::from_q(q), int(0), int(0), "const").unwrap();
        assert_eq!(sigma_twist(&t).unwrap().series, t.series);
    }

    #[test]
    fn empty_positivity_for_zero() {
        let g = GDecomp { g: BTreeMap::new(), index: int(1), central_charge: int(6) };
        assert!(positivity_check(&g, true).is_empty());
        let zero = JacobiFormInput::new("0", JSeries::zero(int(4))).unwrap();
        assert_eq!(parity_root_obstruction(&zero).unwrap().verdict, ParityVerdict::Possible);
    }

    #[test]
    fn rank6_gram_data() {
        let l = rank6_lattice(vec![Rational::zero(); 6]);
        let h = &l.pairing;
        assert_eq!(l.bilinear(h, h), int(2));
        let l3 = rank6_coset(0);
        let hh = vec![rat(1, 3); 6];
        for i in 0..6 {
            let mut a = vec![Rational::zero(); 6];
            a[i] = int(1);
            assert_eq!(l3.bilinear(&hh, &a), int(1));
        }
        assert_eq!(l3.bilinear(&hh, &hh), int(2));
    }
}
