//! Theta series `Σ_{α ∈ L+s} q^{Q(α)} ζ^{B(α,h)}` of a positive-definite
//! lattice given by a rational Gram matrix.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jacobi_series::JSeries;
use crate::rational::{ceil_i64, floor_i64, format_rational, int, parse_rational, rat, sqrt_ceil_bound, Rational};

/// Gram matrix `A` in some basis of `L`, coset shift `s` and pairing vector
/// `h`, the latter two in the same basis. `Q(x) = xᵀAx/2`, `B(x,h) = xᵀAh`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LatticeSpecWire", into = "LatticeSpecWire")]
pub struct LatticeSpec {
    pub gram: Vec<Vec<Rational>>,
    pub shift: Vec<Rational>,
    pub pairing: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LatticeVector {
    /// Coordinates of `α + s`.
    pub coords: Vec<Rational>,
    /// `Q(α + s)`.
    pub norm: Rational,
    /// `B(α + s, h)`.
    pub pairing: Rational,
}

impl LatticeSpec {
    pub fn new(gram: Vec<Vec<Rational>>, shift: Vec<Rational>, pairing: Vec<Rational>) -> Result<Self> {
        let s = LatticeSpec { gram, shift, pairing };
        s.validate()?;
        Ok(s)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.gram.len();
        if self.gram.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidLattice("Gram matrix is not square".into()));
        }
        if self.shift.len() != n || self.pairing.len() != n {
            return Err(Error::InvalidLattice("shift and pairing must have the lattice rank".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if self.gram[i][j] != self.gram[j][i] {
                    return Err(Error::InvalidLattice(format!("Gram matrix is not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(())
    }

    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut s = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                s += xi * &self.gram[i][j] * yj;
            }
        }
        s
    }

    /// `A = L D Lᵀ` with `L` unit lower triangular, so that
    /// `xᵀAx = Σ_i d_i (x_i + Σ_{j>i} L_{ji} x_j)^2`.
    fn ldl(&self) -> Result<(Vec<Vec<Rational>>, Vec<Rational>)> {
        let n = self.rank();
        let mut l = vec![vec![Rational::zero(); n]; n];
        let mut d = vec![Rational::zero(); n];
        for j in 0..n {
            let mut dj = self.gram[j][j].clone();
            for k in 0..j {
                dj -= &l[j][k] * &l[j][k] * &d[k];
            }
            if !dj.is_positive() {
                return Err(Error::NotPositiveDefinite { index: j, pivot: dj });
            }
            l[j][j] = int(1);
            for i in j + 1..n {
                let mut v = self.gram[i][j].clone();
                for k in 0..j {
                    v -= &l[i][k] * &l[j][k] * &d[k];
                }
                l[i][j] = v / &dj;
            }
            d[j] = dj;
        }
        Ok((l, d))
    }
}

/// Every vector of `L + s` with `Q < order`, in lexicographic order of the
/// integer part. Coordinates are fixed from the last to the first; at level
/// `i` the remaining budget `2·order - Σ_{j>i} d_j t_j^2` bounds
/// `|x_i - c_i| <= sqrt(budget/d_i)`, with `c_i` the centre determined by the
/// coordinates already fixed. The square root is over-approximated by an
/// integer and every candidate is then tested exactly, so no vector is lost.
pub fn lattice_vectors(spec: &LatticeSpec, order: &Rational) -> Result<Vec<LatticeVector>> {
    spec.validate()?;
    let (l, d) = spec.ldl()?;
    let n = spec.rank();
    let budget = order * int(2);
    let mut out = Vec::new();
    if n == 0 {
        if order.is_positive() {
            out.push(LatticeVector { coords: vec![], norm: Rational::zero(), pairing: Rational::zero() });
        }
        return Ok(out);
    }
    let mut x = vec![Rational::zero(); n];
    let h_dual: Vec<Rational> = (0..n)
        .map(|i| (0..n).fold(Rational::zero(), |s, j| s + &spec.gram[i][j] * &spec.pairing[j]))
        .collect();
    enumerate_level(spec, &l, &d, &budget, n - 1, Rational::zero(), &mut x, &h_dual, &mut out);
    out.sort_by(|a, b| a.coords.cmp(&b.coords));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_level(
    spec: &LatticeSpec,
    l: &[Vec<Rational>],
    d: &[Rational],
    budget: &Rational,
    i: usize,
    used: Rational,
    x: &mut Vec<Rational>,
    h_dual: &[Rational],
    out: &mut Vec<LatticeVector>,
) {
    let n = x.len();
    let centre = -(i + 1..n).fold(Rational::zero(), |s, j| s + &l[j][i] * &x[j]);
    let rem = budget - &used;
    let w = int(sqrt_ceil_bound(&(&rem / &d[i])));
    let s = &spec.shift[i];
    let lo = floor_i64(&(&centre - s - &w));
    let hi = ceil_i64(&(&centre - s + &w));
    for a in lo..=hi {
        let xi = int(a) + s;
        let t = &xi - &centre;
        let used_here = &used + &d[i] * &t * &t;
        if used_here >= *budget {
            continue;
        }
        x[i] = xi;
        if i == 0 {
            let pairing = x.iter().zip(h_dual).fold(Rational::zero(), |acc, (a, b)| acc + a * b);
            out.push(LatticeVector { coords: x.clone(), norm: used_here * rat(1, 2), pairing });
        } else {
            enumerate_level(spec, l, d, budget, i - 1, used_here, x, h_dual, out);
        }
    }
    x[i] = Rational::zero();
}

/// `θ^h_{L+s}(z;τ)` exact below `order`.
pub fn lattice_theta(spec: &LatticeSpec, order: &Rational) -> Result<JSeries> {
    let vs = lattice_vectors(spec, order)?;
    Ok(JSeries::from_terms(
        vs.into_iter().map(|v| (v.norm, v.pairing, int(1))),
        order.clone(),
    ))
}

#[derive(Serialize, Deserialize)]
struct LatticeSpecWire {
    gram: Vec<Vec<String>>,
    shift: Vec<String>,
    pairing: Vec<String>,
}

impl From<LatticeSpec> for LatticeSpecWire {
    fn from(s: LatticeSpec) -> Self {
        let f = |v: &Vec<Rational>| v.iter().map(format_rational).collect::<Vec<_>>();
        LatticeSpecWire { gram: s.gram.iter().map(f).collect(), shift: f(&s.shift), pairing: f(&s.pairing) }
    }
}

impl TryFrom<LatticeSpecWire> for LatticeSpec {
    type Error = Error;
    fn try_from(w: LatticeSpecWire) -> Result<Self> {
        let p = |v: &Vec<String>| v.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>();
        let gram = w.gram.iter().map(p).collect::<Result<Vec<_>>>()?;
        LatticeSpec::new(gram, p(&w.shift)?, p(&w.pairing)?)
    }
}
