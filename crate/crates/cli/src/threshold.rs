//! Exact bisection for the boundary of a one-parameter family of shifts.

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use shiftlab_core::embed::classical_embed;
use shiftlab_core::exact::{q, Scalar};
use shiftlab_core::shift1d::{k_hyponormal, power_decompose};
use shiftlab_core::shift2d::{k_hyponormal_2v, power_components, restrict, six_point, Shift2D};

use crate::descriptors::{substitute, Shift1DDesc, Shift2DDesc, Source};
use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Op {
    #[value(name = "khypo1", alias = "k_hyponormal")]
    Khypo1,
    #[value(name = "khypo2", alias = "k_hyponormal_2v")]
    Khypo2,
    #[value(name = "sixpoint", alias = "six_point")]
    SixPoint,
}

#[derive(Debug, Clone, Serialize)]
pub struct Predicate {
    pub op: Op,
    pub k: usize,
    /// Base points for `khypo1`; base-point bound `u1 + u2` otherwise.
    pub window: usize,
    pub power: Option<(usize, usize)>,
    pub restriction: Option<(usize, usize, usize, usize)>,
}

/// A shift descriptor in which every `"x"` string is the free parameter.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyFile {
    #[serde(default)]
    pub shift1d: Option<Value>,
    #[serde(default)]
    pub shift2d: Option<Value>,
    #[serde(default)]
    pub lo: Option<Scalar>,
    #[serde(default)]
    pub hi: Option<Scalar>,
    #[serde(default)]
    pub candidate: Option<Scalar>,
}

#[derive(Debug, Clone)]
pub enum Family {
    OneVariable(Value),
    TwoVariable(Value),
}

impl Family {
    pub fn from_file(file: &FamilyFile) -> CliResult<Self> {
        match (&file.shift1d, &file.shift2d) {
            (Some(v), None) => Ok(Family::OneVariable(v.clone())),
            (None, Some(v)) => Ok(Family::TwoVariable(v.clone())),
            _ => Err(CliError::Usage(
                "a family needs exactly one of `shift1d` and `shift2d`".into(),
            )),
        }
    }

    fn instance(template: &Value, x: &Scalar) -> Source {
        Source {
            label: format!("family at x = {x}"),
            text: substitute(template, x).to_string(),
        }
    }

    /// Evaluates the predicate at `x`.
    pub fn holds(&self, pred: &Predicate, x: &Scalar) -> CliResult<bool> {
        let grid = pred.window + 2 * pred.k + 2;
        let shift2 = match self {
            Family::OneVariable(t) => {
                let shift = Family::instance(t, x).parse::<Shift1DDesc>()?.build()?;
                if pred.op == Op::Khypo1 {
                    if pred.restriction.is_some() {
                        return Err(CliError::Usage("khypo1 takes no restriction".into()));
                    }
                    let m = match pred.power {
                        None => 1,
                        Some((m, 1)) => m,
                        Some(_) => {
                            return Err(CliError::Usage(
                                "khypo1 takes a power of the form m,1".into(),
                            ))
                        }
                    };
                    let comps = power_decompose(&shift, m, pred.window + 2 * pred.k + 1)?;
                    for c in &comps {
                        if !k_hyponormal(c, pred.k, pred.window)?.holds {
                            return Ok(false);
                        }
                    }
                    return Ok(true);
                }
                classical_embed(&shift, grid)?
            }
            Family::TwoVariable(t) => {
                if pred.op == Op::Khypo1 {
                    return Err(CliError::Usage("khypo1 needs a shift1d family".into()));
                }
                Family::instance(t, x).parse::<Shift2DDesc>()?.build(grid)?
            }
        };
        let base = match pred.restriction {
            Some((m, n, p, q)) => restrict(&shift2, m, n, p, q)?,
            None => shift2,
        };
        let parts: Vec<Shift2D> = match pred.power {
            Some((m, n)) => power_components(&base, m, n)?,
            None => vec![base],
        };
        for c in &parts {
            let ok = match pred.op {
                Op::Khypo2 => k_hyponormal_2v(c, pred.k, pred.window)?.holds,
                Op::SixPoint => six_point(c, pred.window)?.holds,
                Op::Khypo1 => unreachable!("handled above"),
            };
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Confirmation {
    pub candidate: Scalar,
    /// `user` or `simplest` (simplest rational in the final interval).
    pub origin: &'static str,
    pub margin: Scalar,
    pub holds_at_candidate: bool,
    pub holds_above: bool,
    pub in_interval: bool,
    pub confirmed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThresholdOutcome {
    /// Largest parameter found where the predicate holds.
    pub lo: Scalar,
    /// Smallest parameter found where it fails.
    pub hi: Scalar,
    pub width: Scalar,
    pub steps: usize,
    pub confirmation: Confirmation,
}

/// Bisects `[lo, hi]` (predicate true at `lo`, false at `hi`) until the
/// interval is at most `1/precision` wide, then tests the candidate exactly
/// at itself and at `candidate + margin`.
pub fn bisect(
    family: &Family,
    pred: &Predicate,
    lo: Scalar,
    hi: Scalar,
    precision: u64,
    candidate: Option<Scalar>,
    margin: Scalar,
) -> CliResult<ThresholdOutcome> {
    if lo >= hi || precision == 0 {
        return Err(CliError::Usage(
            "threshold needs lo < hi and a positive precision".into(),
        ));
    }
    let at_lo = family.holds(pred, &lo)?;
    let at_hi = family.holds(pred, &hi)?;
    if !at_lo || at_hi {
        return Err(CliError::NotMonotone {
            lo: lo.to_string(),
            hi: hi.to_string(),
            detail: format!("expected true at lo and false at hi, found {at_lo} and {at_hi}"),
        });
    }
    let tol = q(1, precision as i64);
    let (mut a, mut b) = (lo, hi);
    let mut steps = 0;
    while &b - &a > tol {
        let mid = a.midpoint(&b);
        if family.holds(pred, &mid)? {
            a = mid;
        } else {
            b = mid;
        }
        steps += 1;
    }
    let (candidate, origin) = match candidate {
        Some(c) => (c, "user"),
        None => (simplest_between(&a, &b), "simplest"),
    };
    let holds_at_candidate = family.holds(pred, &candidate)?;
    let holds_above = family.holds(pred, &(&candidate + &margin))?;
    Ok(ThresholdOutcome {
        width: &b - &a,
        confirmation: Confirmation {
            in_interval: a <= candidate && candidate < b,
            confirmed: holds_at_candidate && !holds_above,
            candidate,
            origin,
            margin,
            holds_at_candidate,
            holds_above,
        },
        lo: a,
        hi: b,
        steps,
    })
}

fn floor(x: &Scalar) -> Scalar {
    Scalar::from(x.as_big_rational().floor())
}

/// Rational with the least denominator in `[a, b]`, for `0 <= a <= b`.
pub fn simplest_between(a: &Scalar, b: &Scalar) -> Scalar {
    let fa = floor(a);
    if &fa == a {
        return fa;
    }
    if fa < floor(b) {
        return fa + Scalar::one();
    }
    let lo = (b - &fa).recip().expect("b exceeds its floor");
    let hi = (a - &fa).recip().expect("a exceeds its floor");
    fa + simplest_between(&lo, &hi).recip().expect("positive")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplest_rationals() {
        assert_eq!(simplest_between(&q(3, 5), &q(7, 10)), q(2, 3));
        assert_eq!(simplest_between(&q(666_666, 1_000_000), &q(666_667, 1_000_000)), q(2, 3));
        assert_eq!(simplest_between(&q(9, 16), &q(9, 16)), q(9, 16));
        assert_eq!(simplest_between(&q(3, 2), &q(7, 3)), q(2, 1));
        assert_eq!(simplest_between(&q(0, 1), &q(1, 7)), q(0, 1));
    }

    #[test]
    fn perturbed_bergman_hyponormality_boundary() {
        let family = Family::OneVariable(serde_json::json!({
            "prefix_sq": ["x"],
            "tail": {"kind": "rational_fn", "num": [1, 1], "den": [2, 1]},
            "norm_bound_sq": "1"
        }));
        let pred = Predicate {
            op: Op::Khypo1,
            k: 1,
            window: 6,
            power: None,
            restriction: None,
        };
        let out = bisect(&family, &pred, q(1, 2), q(1, 1), 1000, None, q(1, 1000)).unwrap();
        assert!(out.width <= q(1, 1000));
        assert_eq!(out.confirmation.candidate, q(2, 3));
        assert!(out.confirmation.confirmed);
        let err = bisect(&family, &pred, q(4, 5), q(1, 1), 10, None, q(1, 1000)).unwrap_err();
        assert!(matches!(err, CliError::NotMonotone { .. }));
    }
}
