//! Unilateral weighted shifts described by their squared weights.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    isolate_real_roots, psd_test, rational_roots, vandermonde_solve, PsdVerdict, RationalPolynomial,
    RootInterval, Scalar, SymMatrix,
};
use crate::measures::{AtomicMeasure1D, MomentOracle1D};

/// Default number of Hankel base points for 1-variable tests.
pub const DEFAULT_WINDOW_1D: usize = 25;

/// Rule producing squared weights past the explicit prefix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tail {
    None,
    /// `ω_k² = num(k)/den(k)` for `k >= start`.
    RationalFn {
        num: RationalPolynomial,
        den: RationalPolynomial,
        start: usize,
    },
    /// `ω_k² = γ_{k+1}/γ_k` of the measure.
    FromMeasure(MomentOracle1D),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Shift1D {
    prefix_sq: Vec<Scalar>,
    tail: Tail,
    norm_bound_sq: Scalar,
}

impl Shift1D {
    pub fn new(prefix_sq: Vec<Scalar>, tail: Tail, norm_bound_sq: Scalar) -> Result<Self> {
        for (i, w) in prefix_sq.iter().enumerate() {
            if !w.is_positive() || *w > norm_bound_sq {
                return Err(Error::InvalidWeight {
                    index: i.to_string(),
                    value: w.clone(),
                });
            }
        }
        if let Tail::RationalFn { den, .. } = &tail {
            if den.is_zero() {
                return Err(Error::InvalidInput("tail denominator is the zero polynomial".into()));
            }
        }
        Ok(Shift1D {
            prefix_sq,
            tail,
            norm_bound_sq,
        })
    }

    /// Finite weight list with no tail; the norm bound is the largest weight.
    pub fn from_prefix(prefix_sq: Vec<Scalar>) -> Result<Self> {
        let bound = prefix_sq.iter().max().cloned().unwrap_or_else(Scalar::one);
        Self::new(prefix_sq, Tail::None, bound)
    }

    /// Prefix followed by `num(k)/den(k)` from `k = prefix.len()` on.
    pub fn with_rational_tail(
        prefix_sq: Vec<Scalar>,
        num: RationalPolynomial,
        den: RationalPolynomial,
        norm_bound_sq: Scalar,
    ) -> Result<Self> {
        let start = prefix_sq.len();
        Self::new(prefix_sq, Tail::RationalFn { num, den, start }, norm_bound_sq)
    }

    /// `ω_k² = (k+1)/(k+2)`.
    pub fn bergman() -> Self {
        Self::agler(2)
    }

    /// `ω_k² = (k+1)/(k+j)`, `j >= 1`.
    pub fn agler(j: i64) -> Self {
        assert!(j >= 1, "Agler index must be positive");
        Self::with_rational_tail(
            Vec::new(),
            RationalPolynomial::from_ints(&[1, 1]),
            RationalPolynomial::from_ints(&[j, 1]),
            Scalar::one(),
        )
        .expect("valid Agler weights")
    }

    /// All weights equal to one.
    pub fn unweighted() -> Self {
        Self::with_rational_tail(
            Vec::new(),
            RationalPolynomial::constant(Scalar::one()),
            RationalPolynomial::constant(Scalar::one()),
            Scalar::one(),
        )
        .expect("valid unit weights")
    }

    pub fn prefix_sq(&self) -> &[Scalar] {
        &self.prefix_sq
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn norm_bound_sq(&self) -> &Scalar {
        &self.norm_bound_sq
    }

    /// `ω_k²`.
    pub fn weight_sq(&self, k: usize) -> Result<Scalar> {
        if let Some(w) = self.prefix_sq.get(k) {
            return Ok(w.clone());
        }
        let w = match &self.tail {
            Tail::None => return Err(Error::TailExhausted { index: k }),
            Tail::RationalFn { num, den, start } => {
                if k < *start {
                    return Err(Error::TailExhausted { index: k });
                }
                let d = den.eval_int(k as i64);
                let Some(inv) = d.recip() else {
                    return Err(Error::InvalidInput(format!("tail denominator vanishes at {k}")));
                };
                num.eval_int(k as i64) * inv
            }
            Tail::FromMeasure(sigma) => {
                let lo = sigma.moment(k)?;
                if lo.is_zero() {
                    return Err(Error::ZeroMoment { index: k.to_string() });
                }
                sigma.moment(k + 1)? / lo
            }
        };
        if !w.is_positive() || w > self.norm_bound_sq {
            return Err(Error::InvalidWeight {
                index: k.to_string(),
                value: w,
            });
        }
        Ok(w)
    }

    /// `ω_0² .. ω_{count-1}²`.
    pub fn weights_sq(&self, count: usize) -> Result<Vec<Scalar>> {
        (0..count).map(|k| self.weight_sq(k)).collect()
    }

    /// `γ_0 .. γ_{count-1}`.
    pub fn moments(&self, count: usize) -> Result<Vec<Scalar>> {
        let mut out = Vec::with_capacity(count);
        let mut acc = Scalar::one();
        for k in 0..count {
            if k > 0 {
                acc *= self.weight_sq(k - 1)?;
            }
            out.push(acc.clone());
        }
        Ok(out)
    }
}

/// `γ_k = ω_0² ⋯ ω_{k-1}²`.
pub fn moment(shift: &Shift1D, k: usize) -> Result<Scalar> {
    let mut acc = Scalar::one();
    for i in 0..k {
        acc *= shift.weight_sq(i)?;
    }
    Ok(acc)
}

/// Shift whose Berger measure is `sigma`.
pub fn from_measure(sigma: &MomentOracle1D) -> Result<Shift1D> {
    let zero_at = match sigma {
        MomentOracle1D::Atomic(m) if m.atoms().iter().all(Scalar::is_zero) => Some(1),
        MomentOracle1D::PrefixTable { moments, .. } => moments.iter().position(Scalar::is_zero),
        _ => None,
    };
    if let Some(index) = zero_at {
        return Err(Error::ZeroMoment {
            index: index.to_string(),
        });
    }
    Shift1D::new(
        Vec::new(),
        Tail::FromMeasure(sigma.clone()),
        sigma.support_bound(),
    )
}

/// Window-scoped positivity verdict over a sweep of base points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypoVerdict<B> {
    pub holds: bool,
    pub k: usize,
    pub base_points_checked: usize,
    pub first_failure: Option<BaseFailure<B>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BaseFailure<B> {
    pub base: B,
    pub verdict: PsdVerdict,
}

/// Hankel test `(γ_{u+i+j})_{0<=i,j<=k} ⪰ 0` for `u = 0 .. window-1`.
pub fn k_hyponormal(shift: &Shift1D, k: usize, window: usize) -> Result<HypoVerdict<usize>> {
    let gammas = shift.moments(window + 2 * k)?;
    Ok(hankel_sweep(&gammas, k, window))
}

/// Hankel sweep over an explicit moment list (needs `window + 2k - 1` entries).
pub fn hankel_sweep(gammas: &[Scalar], k: usize, window: usize) -> HypoVerdict<usize> {
    assert!(gammas.len() + 1 >= window + 2 * k, "moment list too short");
    let failure = (0..window)
        .into_par_iter()
        .map(|u| (u, psd_test(&SymMatrix::from_fn(k + 1, |i, j| gammas[u + i + j].clone()))))
        .find_first(|(_, v)| !v.is_psd);
    HypoVerdict {
        holds: failure.is_none(),
        k,
        base_points_checked: window,
        first_failure: failure.map(|(base, verdict)| BaseFailure { base, verdict }),
    }
}

/// Outcome of [`detect_recursion`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RecursionResult {
    pub found: bool,
    pub order: Option<usize>,
    /// `φ_0 .. φ_{k-1}` with `γ_{n+k} = Σ φ_i γ_{n+i}`.
    pub coefficients: Vec<Scalar>,
    /// `g(s) = s^k - Σ φ_i s^i`.
    pub generating_poly: Option<RationalPolynomial>,
    /// Isolating intervals (exact for rational roots) of `g`.
    pub roots: Vec<RootInterval>,
    /// `(atom, density)` pairs, present when every root is rational and simple.
    pub atoms: Option<Vec<(Scalar, Scalar)>>,
}

impl RecursionResult {
    fn not_found() -> Self {
        RecursionResult {
            found: false,
            order: None,
            coefficients: Vec::new(),
            generating_poly: None,
            roots: Vec::new(),
            atoms: None,
        }
    }
}

/// Least-order linear recursion fitting every supplied moment.
pub fn detect_recursion(moments: &[Scalar], max_order: usize) -> RecursionResult {
    for k in 1..=max_order {
        if moments.len() < 2 * k + 1 {
            break;
        }
        let system: Vec<Vec<Scalar>> = (0..k)
            .map(|n| (0..k).map(|i| moments[n + i].clone()).collect())
            .collect();
        let rhs: Vec<Scalar> = (0..k).map(|n| moments[n + k].clone()).collect();
        let Some(phi) = crate::exact::matrix::solve(system, rhs) else {
            continue;
        };
        let fits = (0..moments.len() - k).all(|n| {
            let predicted: Scalar = phi.iter().enumerate().map(|(i, c)| c * &moments[n + i]).sum();
            predicted == moments[n + k]
        });
        if !fits {
            continue;
        }
        let mut g_coeffs: Vec<Scalar> = phi.iter().map(|c| -c.clone()).collect();
        g_coeffs.push(Scalar::one());
        let g = RationalPolynomial::new(g_coeffs);
        let roots = isolate_real_roots(&g);
        let rational = rational_roots(&g);
        let atoms = if rational.len() == k {
            vandermonde_solve(&rational, &moments[..k])
                .ok()
                .map(|dens| rational.into_iter().zip(dens).collect())
        } else {
            None
        };
        return RecursionResult {
            found: true,
            order: Some(k),
            coefficients: phi,
            generating_poly: Some(g),
            roots,
            atoms,
        };
    }
    RecursionResult::not_found()
}

/// Components of `W^m`: component `i` has squared weights
/// `ω²_{i+km} ⋯ ω²_{i+km+m-1}`, `k = 0 .. window-1`.
pub fn power_decompose(shift: &Shift1D, m: usize, window: usize) -> Result<Vec<Shift1D>> {
    if m == 0 {
        return Err(Error::InvalidInput("power must be positive".into()));
    }
    let weights = shift.weights_sq(window * m + m)?;
    let bound = shift.norm_bound_sq().pow(m as u32);
    (0..m)
        .map(|i| {
            let prefix = (0..window)
                .map(|k| weights[i + k * m..i + k * m + m].iter().cloned().product())
                .collect();
            Shift1D::new(prefix, Tail::None, bound.clone())
        })
        .collect()
}

/// Berger measures of the components of `W^m`: `σ_i` has atoms `s^m` with
/// densities `ρ s^i / γ_i`; atoms whose density vanishes are dropped.
pub fn curto_park_measures(sigma: &AtomicMeasure1D, m: usize) -> Result<Vec<AtomicMeasure1D>> {
    (0..m)
        .map(|i| {
            let gamma = sigma.moment(i);
            if gamma.is_zero() {
                return Err(Error::ZeroMoment { index: i.to_string() });
            }
            let pairs = sigma.iter().filter_map(|(s, rho)| {
                let d = rho * s.pow(i as u32) / &gamma;
                (!d.is_zero()).then(|| (s.pow(m as u32), d))
            });
            AtomicMeasure1D::from_pairs(pairs)
        })
        .collect()
}

/// Checks `supp σ_i = {r^m : r ∈ supp σ, r ≠ 0}`, plus `0` when `0 ∈ supp σ`
/// and `i = 0`, for every component.
pub fn support_power_map_check(sigma: &AtomicMeasure1D, m: usize) -> bool {
    let Ok(components) = curto_park_measures(sigma, m) else {
        return false;
    };
    let has_zero = sigma.atoms().first().is_some_and(Scalar::is_zero);
    components.iter().enumerate().all(|(i, comp)| {
        let mut expected: Vec<Scalar> = sigma
            .atoms()
            .iter()
            .filter(|r| !r.is_zero())
            .map(|r| r.pow(m as u32))
            .collect();
        if has_zero && i == 0 {
            expected.insert(0, Scalar::zero());
        }
        comp.atoms() == expected.as_slice()
    })
}
