//! Exact real-root isolation for rational polynomials.
//!
//! Roots of the square-free part are separated with a Sturm sequence into
//! disjoint intervals whose endpoints are not roots; after that, refinement
//! only needs sign evaluations. Rational roots are detected without integer
//! factorization: with integer coefficients and leading coefficient `a_n`,
//! every rational root is a multiple of `1/|a_n|`, so an isolating interval
//! narrower than `1/|a_n|` contains at most one candidate.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;

use super::poly::RationalPolynomial;
use super::scalar::Scalar;

/// An isolating interval for one real root. `lo == hi` marks an exactly
/// known rational root; otherwise the root lies in the open interval and
/// neither endpoint is a root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootInterval {
    pub lo: Scalar,
    pub hi: Scalar,
}

impl RootInterval {
    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn exact(&self) -> Option<&Scalar> {
        self.is_exact().then_some(&self.lo)
    }
}

fn sign(x: &Scalar) -> Ordering {
    x.signum()
}

fn sturm_sequence(p: &RationalPolynomial) -> Vec<RationalPolynomial> {
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq.last().unwrap().is_zero() {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        seq.push(-&r);
    }
    seq.pop();
    seq
}

fn sign_variations(seq: &[RationalPolynomial], x: &Scalar) -> usize {
    let mut count = 0;
    let mut last = Ordering::Equal;
    for s in seq {
        let sg = sign(&s.eval(x));
        if sg == Ordering::Equal {
            continue;
        }
        if last != Ordering::Equal && sg != last {
            count += 1;
        }
        last = sg;
    }
    count
}

/// Scales `p` to integer coefficients.
fn integer_coeffs(p: &RationalPolynomial) -> Vec<BigInt> {
    let lcm = p
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    p.coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect()
}

/// Cauchy bound: all real roots lie strictly inside `(-B, B)`.
fn root_bound(p: &RationalPolynomial) -> Scalar {
    let lc = p.leading_coeff().expect("nonzero polynomial").abs();
    let max = p
        .coeffs()
        .iter()
        .map(|c| c.abs() / &lc)
        .max()
        .unwrap_or_else(Scalar::zero);
    max + Scalar::from_int(2)
}

/// A point of the open interval `(a, b)` that is not a root of `p`.
fn non_root_split(p: &RationalPolynomial, a: &Scalar, b: &Scalar) -> Scalar {
    let width = b - a;
    let mut den = 2i64;
    loop {
        for num in 1..den {
            if num.gcd(&den) != 1 {
                continue;
            }
            let x = a + &(&width * Scalar::ratio(num, den));
            if !p.eval(&x).is_zero() {
                return x;
            }
        }
        den += 1;
    }
}

/// Isolates every real root of `p` (each distinct root once). Rational roots
/// are returned as exact degenerate intervals. Output is sorted ascending.
pub fn isolate_real_roots(p: &RationalPolynomial) -> Vec<RootInterval> {
    let Some(deg) = p.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let sf = p.square_free();
    let seq = sturm_sequence(&sf);
    let bound = root_bound(&sf);
    let mut stack = vec![(-bound.clone(), bound)];
    let mut found = Vec::new();
    while let Some((a, b)) = stack.pop() {
        let count = sign_variations(&seq, &a) - sign_variations(&seq, &b);
        match count {
            0 => {}
            1 => found.push(RootInterval { lo: a, hi: b }),
            _ => {
                let m = non_root_split(&sf, &a, &b);
                stack.push((m.clone(), b));
                stack.push((a, m));
            }
        }
    }
    found.sort_by(|x, y| x.lo.cmp(&y.lo));
    let ints = integer_coeffs(&sf);
    let lead = Scalar::from_bigint(ints.last().unwrap().abs());
    found
        .into_iter()
        .map(|iv| resolve_rational(&sf, iv, &lead))
        .collect()
}

/// Narrows `iv` below `1/lead` and tests the single possible rational root.
fn resolve_rational(p: &RationalPolynomial, mut iv: RootInterval, lead: &Scalar) -> RootInterval {
    let target = lead.recip().expect("nonzero leading coefficient");
    while &iv.hi - &iv.lo >= target {
        iv = bisect_once(p, iv);
        if iv.is_exact() {
            return iv;
        }
    }
    // Candidates P/lead with lo < P/lead < hi.
    let scaled_lo = &iv.lo * lead;
    let floor = scaled_lo.numer().div_floor(scaled_lo.denom());
    for step in 1..=2 {
        let cand = Scalar::from_bigint(&floor + BigInt::from(step)) / lead;
        if cand > iv.lo && cand < iv.hi && p.eval(&cand).is_zero() {
            return RootInterval {
                lo: cand.clone(),
                hi: cand,
            };
        }
    }
    iv
}

/// Halves an isolating interval by a sign test at its midpoint.
fn bisect_once(p: &RationalPolynomial, iv: RootInterval) -> RootInterval {
    if iv.is_exact() {
        return iv;
    }
    let m = iv.lo.midpoint(&iv.hi);
    let fm = p.eval(&m);
    if fm.is_zero() {
        return RootInterval { lo: m.clone(), hi: m };
    }
    if sign(&p.eval(&iv.lo)) != sign(&fm) {
        RootInterval { lo: iv.lo, hi: m }
    } else {
        RootInterval { lo: m, hi: iv.hi }
    }
}

/// Refines an isolating interval of a root of `p` until narrower than `width`.
pub fn refine(p: &RationalPolynomial, mut iv: RootInterval, width: &Scalar) -> RootInterval {
    let sf = p.square_free();
    while !iv.is_exact() && &(&iv.hi - &iv.lo) >= width {
        iv = bisect_once(&sf, iv);
    }
    iv
}

/// All rational roots of `p`, ascending.
pub fn rational_roots(p: &RationalPolynomial) -> Vec<Scalar> {
    isolate_real_roots(p)
        .into_iter()
        .filter_map(|iv| iv.exact().cloned())
        .collect()
}

/// Exact decision of `p(x) >= 0` for every `x` in `[lo, hi]`.
///
/// The sign of `p` is constant between consecutive distinct roots, so it is
/// enough to test both endpoints and one point strictly between each pair
/// of consecutive roots lying in the interval.
pub fn is_nonnegative_on(p: &RationalPolynomial, lo: &Scalar, hi: &Scalar) -> bool {
    if p.is_zero() {
        return true;
    }
    let sf = p.square_free();
    let mut samples = vec![lo.clone(), hi.clone()];
    let mut inside: Vec<RootInterval> = Vec::new();
    for mut iv in isolate_real_roots(p) {
        // Decide on which side of lo / hi the root lies.
        loop {
            if iv.is_exact() || iv.hi <= *lo || iv.lo >= *hi || (iv.lo >= *lo && iv.hi <= *hi) {
                break;
            }
            iv = bisect_once(&sf, iv);
        }
        let root_inside = if iv.is_exact() {
            iv.lo >= *lo && iv.lo <= *hi
        } else {
            iv.lo >= *lo && iv.hi <= *hi
        };
        if root_inside {
            inside.push(iv);
        }
    }
    for pair in inside.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if a.hi < b.lo {
            samples.push(a.hi.midpoint(&b.lo));
        } else {
            // Shared endpoint of two proper isolating intervals: not a root.
            samples.push(a.hi.clone());
        }
    }
    samples.iter().all(|x| !p.eval(x).is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scalar::q;

    fn poly(c: &[Scalar]) -> RationalPolynomial {
        RationalPolynomial::new(c.to_vec())
    }

    #[test]
    fn rational_roots_of_cubic() {
        // s^3 - (11/6)s^2 + s - 1/6 = (s - 1/3)(s - 1/2)(s - 1)
        let g = poly(&[q(-1, 6), q(1, 1), q(-11, 6), q(1, 1)]);
        assert_eq!(rational_roots(&g), vec![q(1, 3), q(1, 2), q(1, 1)]);
    }

    #[test]
    fn irrational_roots_stay_intervals() {
        // r^2 - 2
        let p = RationalPolynomial::from_ints(&[-2, 0, 1]);
        let roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|iv| !iv.is_exact()));
        let pos = refine(&p, roots[1].clone(), &q(1, 1_000_000));
        assert!(pos.lo.to_f64() < 2f64.sqrt() && pos.hi.to_f64() > 2f64.sqrt());
        assert!(rational_roots(&p).is_empty());
    }

    #[test]
    fn repeated_and_zero_roots() {
        // r^2 (r - 1)^3
        let a = RationalPolynomial::from_ints(&[-1, 1]);
        let p = &RationalPolynomial::from_ints(&[0, 0, 1]) * &a.pow(3);
        assert_eq!(rational_roots(&p), vec![q(0, 1), q(1, 1)]);
        assert!(isolate_real_roots(&RationalPolynomial::from_ints(&[1, 0, 1])).is_empty());
    }

    #[test]
    fn nonnegativity_on_unit_interval() {
        let unit = (Scalar::zero(), Scalar::one());
        let one_minus_r = RationalPolynomial::from_ints(&[1, -1]);
        assert!(is_nonnegative_on(&one_minus_r, &unit.0, &unit.1));
        let r_minus_half = poly(&[q(-1, 2), q(1, 1)]);
        assert!(!is_nonnegative_on(&r_minus_half, &unit.0, &unit.1));
        // (r - 1/2)^2 touches zero but stays nonnegative.
        assert!(is_nonnegative_on(&r_minus_half.pow(2), &unit.0, &unit.1));
        // r(1 - r)(r - 1/3)(r - 2/3): zero at both endpoints, negative in the middle.
        let dip = &(&RationalPolynomial::from_ints(&[0, 1, -1]) * &poly(&[q(-1, 3), q(1, 1)]))
            * &poly(&[q(-2, 3), q(1, 1)]);
        assert!(!is_nonnegative_on(&dip, &unit.0, &unit.1));
    }
}
