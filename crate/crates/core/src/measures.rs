//! Berger measures as exact data.
//!
//! Finitely atomic measures carry their atoms and densities. Every
//! continuous measure used here (Lebesgue on `[0,1]`, the Agler densities
//! `(j-1)(1-r)^{j-2} dr`, normalized arclength on the segment from `(0,1)` to
//! `(1,0)`) is represented only through its closed-form rational moments.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{RationalPolynomial, Scalar};

/// Probability measure on `[0, ∞)` with finitely many atoms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomicMeasure1D {
    atoms: Vec<Scalar>,
    densities: Vec<Scalar>,
}

impl AtomicMeasure1D {
    /// Atoms must be strictly ascending and nonnegative; densities positive
    /// and summing to one.
    pub fn new(atoms: Vec<Scalar>, densities: Vec<Scalar>) -> Result<Self> {
        if atoms.len() != densities.len() {
            return Err(Error::DimensionMismatch {
                expected: atoms.len(),
                found: densities.len(),
            });
        }
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        if let Some(a) = atoms.iter().find(|a| a.is_negative()) {
            return Err(Error::InvalidMeasure(format!("negative atom {a}")));
        }
        if let Some(w) = atoms.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMeasure(format!(
                "atoms not strictly ascending at {} >= {}",
                w[0], w[1]
            )));
        }
        check_densities(&densities)?;
        Ok(AtomicMeasure1D { atoms, densities })
    }

    /// Sorts the atoms and merges repeated ones by summing their densities.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Scalar, Scalar)>) -> Result<Self> {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut atoms: Vec<Scalar> = Vec::new();
        let mut densities: Vec<Scalar> = Vec::new();
        for (a, d) in pairs {
            if atoms.last() == Some(&a) {
                *densities.last_mut().unwrap() += d;
            } else {
                atoms.push(a);
                densities.push(d);
            }
        }
        Self::new(atoms, densities)
    }

    pub fn dirac(at: Scalar) -> Self {
        Self::new(vec![at], vec![Scalar::one()]).expect("point mass at a nonnegative atom")
    }

    pub fn atoms(&self) -> &[Scalar] {
        &self.atoms
    }

    pub fn densities(&self) -> &[Scalar] {
        &self.densities
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Scalar, &Scalar)> {
        self.atoms.iter().zip(self.densities.iter())
    }

    /// `∫ r^k dσ(r)`.
    pub fn moment(&self, k: usize) -> Scalar {
        self.iter().map(|(a, d)| d * a.pow(k as u32)).sum()
    }

    pub fn moments(&self, count: usize) -> Vec<Scalar> {
        (0..count).map(|k| self.moment(k)).collect()
    }

    pub fn support_bound(&self) -> Scalar {
        self.atoms.last().cloned().unwrap_or_else(Scalar::zero)
    }
}

/// Probability measure on `[0, ∞)^2` with finitely many atoms, kept in
/// lexicographic atom order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomicMeasure2D {
    atoms: Vec<(Scalar, Scalar)>,
    densities: Vec<Scalar>,
}

impl AtomicMeasure2D {
    pub fn new(atoms: Vec<(Scalar, Scalar)>, densities: Vec<Scalar>) -> Result<Self> {
        if atoms.len() != densities.len() {
            return Err(Error::DimensionMismatch {
                expected: atoms.len(),
                found: densities.len(),
            });
        }
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        if let Some((s, t)) = atoms.iter().find(|(s, t)| s.is_negative() || t.is_negative()) {
            return Err(Error::InvalidMeasure(format!("negative atom ({s}, {t})")));
        }
        check_densities(&densities)?;
        let mut pairs: Vec<_> = atoms.into_iter().zip(densities).collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        if let Some(w) = pairs.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidMeasure(format!(
                "repeated atom ({}, {})",
                w[0].0 .0, w[0].0 .1
            )));
        }
        let (atoms, densities) = pairs.into_iter().unzip();
        Ok(AtomicMeasure2D { atoms, densities })
    }

    /// Merges repeated atoms by summing their densities.
    pub fn from_pairs(pairs: impl IntoIterator<Item = ((Scalar, Scalar), Scalar)>) -> Result<Self> {
        let mut pairs: Vec<_> = pairs.into_iter().collect();
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<((Scalar, Scalar), Scalar)> = Vec::new();
        for (atom, d) in pairs {
            match merged.last_mut() {
                Some((last, acc)) if *last == atom => *acc += d,
                _ => merged.push((atom, d)),
            }
        }
        let (atoms, densities) = merged.into_iter().unzip();
        Self::new(atoms, densities)
    }

    pub fn dirac(s: Scalar, t: Scalar) -> Self {
        Self::new(vec![(s, t)], vec![Scalar::one()]).expect("point mass at a nonnegative atom")
    }

    pub fn atoms(&self) -> &[(Scalar, Scalar)] {
        &self.atoms
    }

    pub fn densities(&self) -> &[Scalar] {
        &self.densities
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Scalar, Scalar), &Scalar)> {
        self.atoms.iter().zip(self.densities.iter())
    }

    /// `∫∫ s^k1 t^k2 dμ(s, t)`.
    pub fn moment(&self, k1: usize, k2: usize) -> Scalar {
        self.iter()
            .map(|((s, t), d)| d * s.pow(k1 as u32) * t.pow(k2 as u32))
            .sum()
    }

    pub fn support_bounds(&self) -> (Scalar, Scalar) {
        let s = self.atoms.iter().map(|a| a.0.clone()).max().unwrap();
        let t = self.atoms.iter().map(|a| a.1.clone()).max().unwrap();
        (s, t)
    }
}

fn check_densities(densities: &[Scalar]) -> Result<()> {
    if let Some(d) = densities.iter().find(|d| !d.is_positive()) {
        return Err(Error::InvalidMeasure(format!("nonpositive density {d}")));
    }
    let total: Scalar = densities.iter().sum();
    if !total.is_one() {
        return Err(Error::InvalidMeasure(format!("densities sum to {total}, not 1")));
    }
    Ok(())
}

/// Exact moments of a probability measure on `[0, ∞)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MomentOracle1D {
    Atomic(AtomicMeasure1D),
    /// Lebesgue measure on `[0, 1]`.
    Lebesgue01,
    /// `(j-1)(1-r)^{j-2} dr` on `[0, 1]`, `j >= 2`; `j = 2` is Lebesgue.
    BetaFamily { j: u32 },
    /// Finitely many known moments `γ_0, γ_1, …`.
    PrefixTable {
        moments: Vec<Scalar>,
        support_bound: Scalar,
    },
    /// Normalized `t^j dμ(s, t)` projected to the first coordinate.
    Row {
        base: Box<MomentOracle2D>,
        j: usize,
        mass: Scalar,
    },
}

impl MomentOracle1D {
    pub fn beta_family(j: u32) -> Result<Self> {
        if j < 2 {
            return Err(Error::InvalidMeasure(format!("beta family needs j >= 2, got {j}")));
        }
        Ok(MomentOracle1D::BetaFamily { j })
    }

    pub fn prefix_table(moments: Vec<Scalar>, support_bound: Scalar) -> Result<Self> {
        match moments.first() {
            Some(m0) if m0.is_one() => Ok(MomentOracle1D::PrefixTable {
                moments,
                support_bound,
            }),
            _ => Err(Error::InvalidMeasure("moment table must start with 1".into())),
        }
    }

    pub fn moment(&self, k: usize) -> Result<Scalar> {
        Ok(match self {
            MomentOracle1D::Atomic(m) => m.moment(k),
            MomentOracle1D::Lebesgue01 => Scalar::ratio(1, k as i64 + 1),
            MomentOracle1D::BetaFamily { j } => beta_moment(*j, k),
            MomentOracle1D::PrefixTable { moments, .. } => moments
                .get(k)
                .cloned()
                .ok_or(Error::TailExhausted { index: k })?,
            MomentOracle1D::Row { base, j, mass } => base.moment(k, *j)? / mass,
        })
    }

    pub fn moments(&self, count: usize) -> Result<Vec<Scalar>> {
        (0..count).map(|k| self.moment(k)).collect()
    }

    pub fn support_bound(&self) -> Scalar {
        match self {
            MomentOracle1D::Atomic(m) => m.support_bound(),
            MomentOracle1D::Lebesgue01 | MomentOracle1D::BetaFamily { .. } => Scalar::one(),
            MomentOracle1D::PrefixTable { support_bound, .. } => support_bound.clone(),
            MomentOracle1D::Row { base, .. } => base.support_bounds().0,
        }
    }

    /// Whether every monomial moment is available exactly.
    pub fn has_all_moments(&self) -> bool {
        !matches!(self, MomentOracle1D::PrefixTable { .. })
    }

    /// Closed support interval `[0, b]` known to contain the support, or the
    /// atoms themselves for atomic measures.
    pub fn as_atomic(&self) -> Option<&AtomicMeasure1D> {
        match self {
            MomentOracle1D::Atomic(m) => Some(m),
            _ => None,
        }
    }
}

/// `k!(j-1)!/(k+j-1)! = Π_{i=1}^{j-1} i/(k+i)`.
fn beta_moment(j: u32, k: usize) -> Scalar {
    (1..j as i64)
        .map(|i| Scalar::ratio(i, k as i64 + i))
        .product()
}

/// Exact moments of a probability measure on `[0, ∞)^2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MomentOracle2D {
    Atomic(AtomicMeasure2D),
    /// Normalized arclength on `{(r, 1-r) : 0 <= r <= 1}`.
    ArclengthSegment01,
    /// Image of `base` under `r ↦ (p(r), q(r))`.
    Pushforward {
        p: RationalPolynomial,
        q: RationalPolynomial,
        base: Box<MomentOracle1D>,
    },
}

impl MomentOracle2D {
    pub fn moment(&self, k1: usize, k2: usize) -> Result<Scalar> {
        match self {
            MomentOracle2D::Atomic(m) => Ok(m.moment(k1, k2)),
            MomentOracle2D::ArclengthSegment01 => Ok(arclength_moment(k1, k2)),
            MomentOracle2D::Pushforward { p, q, base } => {
                let integrand = &p.pow(k1 as u32) * &q.pow(k2 as u32);
                integrate_poly(&integrand, base)
            }
        }
    }

    /// `γ_(i, j)` for `i <= max1`, `j <= max2`, indexed `[i][j]`.
    pub fn moment_table(&self, max1: usize, max2: usize) -> Result<Vec<Vec<Scalar>>> {
        match self {
            MomentOracle2D::Pushforward { p, q, base } => {
                let top = max1 * p.degree().unwrap_or(0) + max2 * q.degree().unwrap_or(0);
                let base_moments = base.moments(top + 1)?;
                let mut table = Vec::with_capacity(max1 + 1);
                let mut p_pow = RationalPolynomial::constant(Scalar::one());
                for _ in 0..=max1 {
                    let mut row = Vec::with_capacity(max2 + 1);
                    let mut integrand = p_pow.clone();
                    for _ in 0..=max2 {
                        row.push(dot_moments(&integrand, &base_moments));
                        integrand = &integrand * q;
                    }
                    table.push(row);
                    p_pow = &p_pow * p;
                }
                Ok(table)
            }
            _ => (0..=max1)
                .map(|i| (0..=max2).map(|j| self.moment(i, j)).collect())
                .collect(),
        }
    }

    pub fn support_bounds(&self) -> (Scalar, Scalar) {
        match self {
            MomentOracle2D::Atomic(m) => m.support_bounds(),
            MomentOracle2D::ArclengthSegment01 => (Scalar::one(), Scalar::one()),
            MomentOracle2D::Pushforward { p, q, base } => match base.as_atomic() {
                Some(sigma) => {
                    let max = |f: &RationalPolynomial| {
                        sigma.atoms().iter().map(|a| f.eval(a)).max().unwrap()
                    };
                    (max(p), max(q))
                }
                None => {
                    let b = base.support_bound();
                    (abs_bound(p, &b), abs_bound(q, &b))
                }
            },
        }
    }
}

/// `Σ |c_i| b^i`, an upper bound of `|f|` on `[0, b]`.
fn abs_bound(f: &RationalPolynomial, b: &Scalar) -> Scalar {
    f.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| c.abs() * b.pow(i as u32))
        .sum()
}

/// `k1! k2! / (k1 + k2 + 1)!`.
pub fn arclength_moment(k1: usize, k2: usize) -> Scalar {
    let (small, large) = if k1 <= k2 { (k1, k2) } else { (k2, k1) };
    // small! / ((large+1)(large+2)…(large+small+1))
    let mut acc = Scalar::ratio(1, large as i64 + small as i64 + 1);
    for i in 1..=small as i64 {
        acc *= Scalar::ratio(i, large as i64 + i);
    }
    acc
}

fn dot_moments(f: &RationalPolynomial, moments: &[Scalar]) -> Scalar {
    f.coeffs()
        .iter()
        .zip(moments)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, m)| c * m)
        .sum()
}

/// `∫ f dσ` for a polynomial `f`.
pub fn integrate_poly(f: &RationalPolynomial, sigma: &MomentOracle1D) -> Result<Scalar> {
    let mut acc = Scalar::zero();
    for (n, c) in f.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc += c * sigma.moment(n)?;
        }
    }
    Ok(acc)
}

/// `σ ∘ f⁻¹` for `f = (p, q)` and atomic `σ`; coinciding images merge.
pub fn pushforward_atomic(
    sigma: &AtomicMeasure1D,
    p: &RationalPolynomial,
    q: &RationalPolynomial,
) -> Result<AtomicMeasure2D> {
    let mut pairs = Vec::with_capacity(sigma.len());
    for (r, rho) in sigma.iter() {
        let s = p.eval(r);
        let t = q.eval(r);
        for v in [&s, &t] {
            if v.is_negative() {
                return Err(Error::NegativeValue {
                    atom: Box::new(r.clone()),
                    value: Box::new(v.clone()),
                });
            }
        }
        pairs.push(((s, t), rho.clone()));
    }
    AtomicMeasure2D::from_pairs(pairs)
}

/// Moment oracle of `σ ∘ f⁻¹`, `f = (p, q)`.
pub fn pushforward_moments(
    sigma: &MomentOracle1D,
    p: &RationalPolynomial,
    q: &RationalPolynomial,
) -> Result<MomentOracle2D> {
    if !sigma.has_all_moments() {
        return Err(Error::UnsupportedBase(
            "a finite moment table cannot be pushed forward".into(),
        ));
    }
    Ok(MomentOracle2D::Pushforward {
        p: p.clone(),
        q: q.clone(),
        base: Box::new(sigma.clone()),
    })
}

/// Coordinate axis for marginals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    X,
    Y,
}

/// Projection of `μ` onto one coordinate.
pub fn marginal(mu: &AtomicMeasure2D, axis: Axis) -> AtomicMeasure1D {
    let pairs = mu.iter().map(|((s, t), d)| {
        let x = match axis {
            Axis::X => s.clone(),
            Axis::Y => t.clone(),
        };
        (x, d.clone())
    });
    AtomicMeasure1D::from_pairs(pairs).expect("marginal of a probability measure")
}

/// Berger moments of row `j`: `γ_(k, j) / γ_(0, j)`.
pub fn row_measure(mu: &MomentOracle2D, j: usize) -> Result<MomentOracle1D> {
    let mass = mu.moment(0, j)?;
    if mass.is_zero() {
        return Err(Error::ZeroMass { row: j });
    }
    Ok(MomentOracle1D::Row {
        base: Box::new(mu.clone()),
        j,
        mass,
    })
}
