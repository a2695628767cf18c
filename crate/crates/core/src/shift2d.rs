//! 2-variable weighted shifts over truncation windows.
//!
//! A [`Shift2D`] stores its squared weights on an `N × N` grid indexed
//! `[k1][k2]`. A shift may also carry a closed-form [`Generator`]; points
//! outside the grid are then evaluated on demand, otherwise they are an error.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{psd_test, RationalPolynomial, Scalar, SymMatrix};
use crate::measures::MomentOracle2D;
use crate::shift1d::{BaseFailure, HypoVerdict, Shift1D, Tail};

/// Default base-point bound `u1 + u2 <= 15` for 2-variable tests.
pub const DEFAULT_BASE_BOUND_2D: usize = 15;

pub type Point = (usize, usize);

/// Rows `[k1][k2]` with `k1 + k2` bounded.
type Triangle = Vec<Vec<Scalar>>;

/// Polynomial in `(k1, k2)`; `coeffs[i][j]` multiplies `k1^i k2^j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BivariatePolynomial {
    coeffs: Vec<Vec<Scalar>>,
}

impl BivariatePolynomial {
    pub fn new(coeffs: Vec<Vec<Scalar>>) -> Self {
        BivariatePolynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[&[i64]]) -> Self {
        Self::new(
            coeffs
                .iter()
                .map(|row| row.iter().map(|&c| Scalar::from_int(c)).collect())
                .collect(),
        )
    }

    pub fn coeffs(&self) -> &[Vec<Scalar>] {
        &self.coeffs
    }

    pub fn eval(&self, k1: usize, k2: usize) -> Scalar {
        let x = Scalar::from(k1);
        let y = Scalar::from(k2);
        let mut acc = Scalar::zero();
        for row in self.coeffs.iter().rev() {
            let mut inner = Scalar::zero();
            for c in row.iter().rev() {
                inner = inner * &y + c;
            }
            acc = acc * &x + inner;
        }
        acc
    }

    /// The univariate polynomial `k ↦ self(k, j)`.
    pub fn row(&self, j: usize) -> RationalPolynomial {
        let y = Scalar::from(j);
        RationalPolynomial::new(
            self.coeffs
                .iter()
                .map(|row| {
                    row.iter()
                        .rev()
                        .fold(Scalar::zero(), |acc, c| acc * &y + c)
                })
                .collect(),
        )
    }
}

/// Closed-form rule extending a shift beyond its grid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Generator {
    /// `α² = alpha_num/alpha_den`, `β² = beta_num/beta_den` in `(k1, k2)`.
    Rational {
        alpha_num: BivariatePolynomial,
        alpha_den: BivariatePolynomial,
        beta_num: BivariatePolynomial,
        beta_den: BivariatePolynomial,
    },
    /// `α²_(k1,k2) = β²_(k1,k2) = ω²_{k1+k2}`.
    Classical(Shift1D),
    /// `α² = γ_{k+ε1}/γ_k`, `β² = γ_{k+ε2}/γ_k`.
    Moments(MomentOracle2D),
    /// Restriction to the span of `e_(m i + p, n j + q)`.
    Restricted {
        base: Shift2D,
        m: usize,
        n: usize,
        p: usize,
        q: usize,
    },
    /// Restriction to the span of `e_k` with `k1 >= d1`, `k2 >= d2`.
    Translated { base: Shift2D, d1: usize, d2: usize },
}

impl Generator {
    fn alpha_sq(&self, k1: usize, k2: usize) -> Result<Scalar> {
        match self {
            Generator::Rational {
                alpha_num,
                alpha_den,
                ..
            } => rational_weight(alpha_num, alpha_den, k1, k2),
            Generator::Classical(w) => w.weight_sq(k1 + k2),
            Generator::Moments(mu) => moment_ratio(mu, (k1, k2), (k1 + 1, k2)),
            Generator::Restricted { base, m, p, n, q } => (0..*m)
                .map(|l| base.alpha_sq(m * k1 + p + l, n * k2 + q))
                .product(),
            Generator::Translated { base, d1, d2 } => base.alpha_sq(k1 + d1, k2 + d2),
        }
    }

    fn beta_sq(&self, k1: usize, k2: usize) -> Result<Scalar> {
        match self {
            Generator::Rational {
                beta_num, beta_den, ..
            } => rational_weight(beta_num, beta_den, k1, k2),
            Generator::Classical(w) => w.weight_sq(k1 + k2),
            Generator::Moments(mu) => moment_ratio(mu, (k1, k2), (k1, k2 + 1)),
            Generator::Restricted { base, m, p, n, q } => (0..*n)
                .map(|l| base.beta_sq(m * k1 + p, n * k2 + q + l))
                .product(),
            Generator::Translated { base, d1, d2 } => base.beta_sq(k1 + d1, k2 + d2),
        }
    }
}

fn rational_weight(
    num: &BivariatePolynomial,
    den: &BivariatePolynomial,
    k1: usize,
    k2: usize,
) -> Result<Scalar> {
    let d = den.eval(k1, k2);
    match d.recip() {
        Some(inv) => Ok(num.eval(k1, k2) * inv),
        None => Err(Error::InvalidInput(format!(
            "weight denominator vanishes at ({k1}, {k2})"
        ))),
    }
}

fn moment_ratio(mu: &MomentOracle2D, from: Point, to: Point) -> Result<Scalar> {
    let lo = mu.moment(from.0, from.1)?;
    if lo.is_zero() {
        return Err(Error::ZeroMoment {
            index: format!("({}, {})", from.0, from.1),
        });
    }
    Ok(mu.moment(to.0, to.1)? / lo)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Shift2D {
    window: usize,
    alpha_sq: Vec<Vec<Scalar>>,
    beta_sq: Vec<Vec<Scalar>>,
    generator: Option<Arc<Generator>>,
}

impl Shift2D {
    /// Explicit `N × N` grids, indexed `[k1][k2]`, with no extension rule.
    pub fn from_grids(alpha_sq: Vec<Vec<Scalar>>, beta_sq: Vec<Vec<Scalar>>) -> Result<Self> {
        let window = alpha_sq.len();
        if window == 0 {
            return Err(Error::InvalidInput("empty weight grid".into()));
        }
        for grid in [&alpha_sq, &beta_sq] {
            if grid.len() != window {
                return Err(Error::DimensionMismatch {
                    expected: window,
                    found: grid.len(),
                });
            }
            if let Some(row) = grid.iter().find(|r| r.len() != window) {
                return Err(Error::DimensionMismatch {
                    expected: window,
                    found: row.len(),
                });
            }
        }
        for (name, grid) in [("alpha", &alpha_sq), ("beta", &beta_sq)] {
            for (i, row) in grid.iter().enumerate() {
                for (j, w) in row.iter().enumerate() {
                    if !w.is_positive() {
                        return Err(Error::InvalidWeight {
                            index: format!("{name}({i}, {j})"),
                            value: w.clone(),
                        });
                    }
                }
            }
        }
        Ok(Shift2D {
            window,
            alpha_sq,
            beta_sq,
            generator: None,
        })
    }

    /// Materializes an `N × N` grid from `generator`, which also serves every
    /// point outside it.
    pub fn from_generator(generator: Generator, window: usize) -> Result<Self> {
        if window == 0 {
            return Err(Error::InvalidInput("window must be positive".into()));
        }
        let grid = |f: &dyn Fn(usize, usize) -> Result<Scalar>| -> Result<Vec<Vec<Scalar>>> {
            (0..window)
                .map(|i| (0..window).map(|j| f(i, j)).collect())
                .collect()
        };
        let alpha_sq = grid(&|i, j| generator.alpha_sq(i, j))?;
        let beta_sq = grid(&|i, j| generator.beta_sq(i, j))?;
        let mut shift = Self::from_grids(alpha_sq, beta_sq)?;
        shift.generator = Some(Arc::new(generator));
        Ok(shift)
    }

    /// Spherically isometric embedding of the Bergman shift:
    /// `α² = (k1+1)/(k1+k2+2)`, `β² = (k2+1)/(k1+k2+2)`.
    pub fn sie_bergman(window: usize) -> Self {
        let den = BivariatePolynomial::from_ints(&[&[2, 1], &[1]]);
        Self::from_generator(
            Generator::Rational {
                alpha_num: BivariatePolynomial::from_ints(&[&[1], &[1]]),
                alpha_den: den.clone(),
                beta_num: BivariatePolynomial::from_ints(&[&[1, 1]]),
                beta_den: den,
            },
            window,
        )
        .expect("valid weights")
    }

    /// All weights equal to one.
    pub fn helton_howe(window: usize) -> Self {
        let one = BivariatePolynomial::from_ints(&[&[1]]);
        Self::from_generator(
            Generator::Rational {
                alpha_num: one.clone(),
                alpha_den: one.clone(),
                beta_num: one.clone(),
                beta_den: one,
            },
            window,
        )
        .expect("valid weights")
    }

    /// Attaches an extension rule to explicit grids that already agree with it.
    pub(crate) fn with_generator(mut self, generator: Generator) -> Self {
        self.generator = Some(Arc::new(generator));
        self
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn generator(&self) -> Option<&Generator> {
        self.generator.as_deref()
    }

    pub fn alpha_grid(&self) -> &[Vec<Scalar>] {
        &self.alpha_sq
    }

    pub fn beta_grid(&self) -> &[Vec<Scalar>] {
        &self.beta_sq
    }

    pub fn alpha_sq(&self, k1: usize, k2: usize) -> Result<Scalar> {
        self.weight(k1, k2, &self.alpha_sq, Generator::alpha_sq)
    }

    pub fn beta_sq(&self, k1: usize, k2: usize) -> Result<Scalar> {
        self.weight(k1, k2, &self.beta_sq, Generator::beta_sq)
    }

    fn weight(
        &self,
        k1: usize,
        k2: usize,
        grid: &[Vec<Scalar>],
        extend: fn(&Generator, usize, usize) -> Result<Scalar>,
    ) -> Result<Scalar> {
        if k1 < self.window && k2 < self.window {
            return Ok(grid[k1][k2].clone());
        }
        let Some(generator) = &self.generator else {
            return Err(Error::WindowTooSmall { k1, k2 });
        };
        let w = extend(generator, k1, k2)?;
        if !w.is_positive() {
            return Err(Error::InvalidWeight {
                index: format!("({k1}, {k2})"),
                value: w,
            });
        }
        Ok(w)
    }

    /// `(α², β²)` at every point of total degree `<= degree`, indexed `[k1][k2]`.
    fn weight_triangle(&self, degree: usize) -> Result<(Triangle, Triangle)> {
        let mut alpha = Vec::with_capacity(degree + 1);
        let mut beta = Vec::with_capacity(degree + 1);
        for i in 0..=degree {
            let mut a = Vec::with_capacity(degree - i + 1);
            let mut b = Vec::with_capacity(degree - i + 1);
            for j in 0..=degree - i {
                a.push(self.alpha_sq(i, j)?);
                b.push(self.beta_sq(i, j)?);
            }
            alpha.push(a);
            beta.push(b);
        }
        Ok((alpha, beta))
    }
}

/// Points `(k1, k2)` with `k1 + k2 <= bound`, by total degree then `k1`.
pub fn triangle_points(bound: usize) -> Vec<Point> {
    (0..=bound)
        .flat_map(|d| (0..=d).rev().map(move |k1| (k1, d - k1)))
        .collect()
}

/// Moments `γ_(k1,k2)` for `k1 + k2 <= degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Moment2Table {
    degree: usize,
    values: Vec<Vec<Scalar>>,
}

impl Moment2Table {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn get(&self, k1: usize, k2: usize) -> Option<&Scalar> {
        self.values.get(k1).and_then(|row| row.get(k2))
    }

    /// Rows `[k1][k2]` of decreasing length.
    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.values
    }

    fn at(&self, k1: usize, k2: usize) -> &Scalar {
        &self.values[k1][k2]
    }
}

/// First point `k` with `k1 + k2 <= degree - 2` where
/// `β²_{k+ε1} α²_k = α²_{k+ε2} β²_k` fails.
pub fn check_commutativity(shift: &Shift2D, degree: usize) -> Result<()> {
    if degree < 2 {
        return Ok(());
    }
    let (alpha, beta) = shift.weight_triangle(degree - 1)?;
    commutativity_violation(&alpha, &beta, degree - 2).map_or(Ok(()), Err)
}

fn commutativity_violation(
    alpha: &[Vec<Scalar>],
    beta: &[Vec<Scalar>],
    bound: usize,
) -> Option<Error> {
    triangle_points(bound).into_iter().find_map(|(i, j)| {
        let lhs = &beta[i + 1][j] * &alpha[i][j];
        let rhs = &alpha[i][j + 1] * &beta[i][j];
        (lhs != rhs).then_some(Error::CommutativityViolation { k1: i, k2: j })
    })
}

/// Moment table of total degree `degree`, after checking commutativity on the
/// weights it uses.
pub fn moments(shift: &Shift2D, degree: usize) -> Result<Moment2Table> {
    if let Some(Generator::Moments(mu)) = shift.generator() {
        let full = mu.moment_table(degree, degree)?;
        let values = full
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                row.truncate(degree - i + 1);
                row
            })
            .collect();
        return Ok(Moment2Table { degree, values });
    }
    if degree == 0 {
        return Ok(Moment2Table {
            degree,
            values: vec![vec![Scalar::one()]],
        });
    }
    let (alpha, beta) = shift.weight_triangle(degree - 1)?;
    if degree >= 2 {
        if let Some(err) = commutativity_violation(&alpha, &beta, degree - 2) {
            return Err(err);
        }
    }
    let mut values: Vec<Vec<Scalar>> = Vec::with_capacity(degree + 1);
    let mut head = Scalar::one();
    for i in 0..=degree {
        if i > 0 {
            head *= &alpha[i - 1][0];
        }
        let mut row = Vec::with_capacity(degree - i + 1);
        row.push(head.clone());
        for j in 1..=degree - i {
            let next = &row[j - 1] * &beta[i][j - 1];
            row.push(next);
        }
        values.push(row);
    }
    Ok(Moment2Table { degree, values })
}

/// Index pairs `(n, m)` with `n + m <= k`.
fn lattice(k: usize) -> Vec<Point> {
    triangle_points(k)
}

/// Exact `k`-hyponormality test at every base point `u1 + u2 <= base_bound`.
pub fn k_hyponormal_2v(shift: &Shift2D, k: usize, base_bound: usize) -> Result<HypoVerdict<Point>> {
    let table = moments(shift, base_bound + 2 * k)?;
    Ok(k_hyponormal_from_table(&table, k, base_bound))
}

/// As [`k_hyponormal_2v`] on a precomputed table of degree `>= base_bound + 2k`.
pub fn k_hyponormal_from_table(
    table: &Moment2Table,
    k: usize,
    base_bound: usize,
) -> HypoVerdict<Point> {
    assert!(table.degree() >= base_bound + 2 * k, "moment table too small");
    let idx = lattice(k);
    let bases = triangle_points(base_bound);
    let failure = bases
        .par_iter()
        .map(|&(u1, u2)| {
            let m = SymMatrix::from_fn(idx.len(), |a, b| {
                let (n, m) = idx[a];
                let (p, q) = idx[b];
                table.at(u1 + n + p, u2 + m + q).clone()
            });
            ((u1, u2), psd_test(&m))
        })
        .find_first(|(_, v)| !v.is_psd);
    HypoVerdict {
        holds: failure.is_none(),
        k,
        base_points_checked: bases.len(),
        first_failure: failure.map(|(base, verdict)| BaseFailure { base, verdict }),
    }
}

/// Per-point failure of the six-point matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SixPointFailure {
    pub point: Point,
    /// Approximate determinant; exact sign is authoritative.
    pub determinant: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SixPointReport {
    pub holds: bool,
    pub points_checked: usize,
    /// Points whose approximate determinant fell within the boundary band
    /// and were settled exactly.
    pub boundary_points: usize,
    pub first_failure: Option<SixPointFailure>,
}

/// Fixed-point bits used for square roots in the six-point test.
const SQRT_BITS: u32 = 128;
const BOUNDARY_BAND: f64 = 1e-12;

/// `⌊√x · 2^SQRT_BITS⌋` for `x >= 0`.
fn fixed_sqrt(x: &Scalar) -> BigInt {
    let scaled = (x.numer() << (2 * SQRT_BITS as usize)) / x.denom();
    scaled.sqrt()
}

struct SixPointValue {
    holds: bool,
    det: f64,
    boundary: bool,
}

/// Evaluates the 2×2 matrix at `k`:
/// `[[α²_{k+ε1} − α²_k, b], [b, β²_{k+ε2} − β²_k]]` with
/// `b = α_{k+ε2} β_{k+ε1} − α_k β_k`.
fn six_point_at(shift: &Shift2D, (k1, k2): Point) -> Result<SixPointValue> {
    let a = shift.alpha_sq(k1 + 1, k2)? - shift.alpha_sq(k1, k2)?;
    let d = shift.beta_sq(k1, k2 + 1)? - shift.beta_sq(k1, k2)?;
    let x = shift.alpha_sq(k1, k2 + 1)? * shift.beta_sq(k1 + 1, k2)?;
    let y = shift.alpha_sq(k1, k2)? * shift.beta_sq(k1, k2)?;
    let b_fixed = fixed_sqrt(&x) - fixed_sqrt(&y);
    let b = Scalar::from_bigints(b_fixed, BigInt::one() << SQRT_BITS as usize)
        .expect("nonzero denominator");
    let det = (&a * &d - &b * &b).to_f64();
    let diag_ok = !a.is_negative() && !d.is_negative();
    if det.abs() >= BOUNDARY_BAND {
        return Ok(SixPointValue {
            holds: diag_ok && det > 0.0,
            det,
            boundary: false,
        });
    }
    // ad − (√x − √y)² >= 0  ⇔  2√(xy) >= x + y − ad.
    let r = &x + &y - &a * &d;
    let exact = diag_ok && (!r.is_positive() || Scalar::from_int(4) * &x * &y >= &r * &r);
    Ok(SixPointValue {
        holds: exact,
        det,
        boundary: true,
    })
}

/// Six-point hyponormality test at every `k` with `k1 + k2 <= bound`.
pub fn six_point(shift: &Shift2D, bound: usize) -> Result<SixPointReport> {
    let points = triangle_points(bound);
    let values: Vec<(Point, SixPointValue)> = points
        .par_iter()
        .map(|&k| six_point_at(shift, k).map(|v| (k, v)))
        .collect::<Result<_>>()?;
    let boundary_points = values.iter().filter(|(_, v)| v.boundary).count();
    let first_failure = values
        .iter()
        .find(|(_, v)| !v.holds)
        .map(|(point, v)| SixPointFailure {
            point: *point,
            determinant: v.det,
        });
    Ok(SixPointReport {
        holds: first_failure.is_none(),
        points_checked: points.len(),
        boundary_points,
        first_failure,
    })
}

/// Restriction to the span of `e_(m i + p, n j + q)`.
pub fn restrict(shift: &Shift2D, m: usize, n: usize, p: usize, q: usize) -> Result<Shift2D> {
    if m == 0 || n == 0 || p >= m || q >= n {
        return Err(Error::InvalidInput(format!(
            "restriction needs 0 <= p < m and 0 <= q < n, got m={m} n={n} p={p} q={q}"
        )));
    }
    let window = ((shift.window() - p.min(shift.window())) / m)
        .min((shift.window() - q.min(shift.window())) / n);
    if window == 0 {
        return Err(Error::WindowTooSmall { k1: p + m - 1, k2: q + n - 1 });
    }
    let restricted = Generator::Restricted {
        base: shift.clone(),
        m,
        n,
        p,
        q,
    };
    build_derived(shift, restricted, window)
}

/// Restriction to `{e_k : k1 >= d1, k2 >= d2}`; `(1, 1)` gives `M ∩ N`.
pub fn translate(shift: &Shift2D, d1: usize, d2: usize) -> Result<Shift2D> {
    let window = shift.window().saturating_sub(d1.max(d2));
    if window == 0 {
        return Err(Error::WindowTooSmall { k1: d1, k2: d2 });
    }
    build_derived(
        shift,
        Generator::Translated {
            base: shift.clone(),
            d1,
            d2,
        },
        window,
    )
}

/// Grid of a derived shift; the derivation is kept as a generator only when
/// the base itself extends beyond its grid.
fn build_derived(base: &Shift2D, derived: Generator, window: usize) -> Result<Shift2D> {
    let mut shift = Shift2D::from_generator(derived, window)?;
    if base.generator().is_none() {
        shift.generator = None;
    }
    check_commutativity(&shift, window)?;
    Ok(shift)
}

/// All `(p, q)` components of the `(m, n)`-power, `p`-major.
pub fn power_components(shift: &Shift2D, m: usize, n: usize) -> Result<Vec<Shift2D>> {
    let pairs: Vec<Point> = (0..m).flat_map(|p| (0..n).map(move |q| (p, q))).collect();
    pairs
        .into_par_iter()
        .map(|(p, q)| restrict(shift, m, n, p, q))
        .collect()
}

/// Row `j` as a 1-variable shift with squared weights `α²_(k, j)`.
pub fn row(shift: &Shift2D, j: usize) -> Result<Shift1D> {
    line(shift, j, |s, k| s.alpha_sq(k, j), |g| match g {
        Generator::Rational {
            alpha_num,
            alpha_den,
            ..
        } => Some((alpha_num.row(j), alpha_den.row(j))),
        _ => None,
    })
}

/// Column `i` as a 1-variable shift with squared weights `β²_(i, k)`.
pub fn col(shift: &Shift2D, i: usize) -> Result<Shift1D> {
    line(shift, i, |s, k| s.beta_sq(i, k), |g| match g {
        Generator::Rational {
            beta_num, beta_den, ..
        } => Some((transpose(beta_num).row(i), transpose(beta_den).row(i))),
        _ => None,
    })
}

fn transpose(p: &BivariatePolynomial) -> BivariatePolynomial {
    let rows = p.coeffs().len();
    let cols = p.coeffs().iter().map(Vec::len).max().unwrap_or(0);
    BivariatePolynomial::new(
        (0..cols)
            .map(|j| {
                (0..rows)
                    .map(|i| p.coeffs()[i].get(j).cloned().unwrap_or_else(Scalar::zero))
                    .collect()
            })
            .collect(),
    )
}

fn line(
    shift: &Shift2D,
    index: usize,
    weight: impl Fn(&Shift2D, usize) -> Result<Scalar>,
    closed_form: impl Fn(&Generator) -> Option<(RationalPolynomial, RationalPolynomial)>,
) -> Result<Shift1D> {
    if index >= shift.window() && shift.generator().is_none() {
        return Err(Error::WindowTooSmall {
            k1: index,
            k2: index,
        });
    }
    let prefix: Vec<Scalar> = (0..shift.window())
        .map(|k| weight(shift, k))
        .collect::<Result<_>>()?;
    let bound = prefix.iter().max().cloned().unwrap_or_else(Scalar::one);
    match shift.generator().and_then(closed_form) {
        Some((num, den)) => {
            // Rational tails are bounded by their own values; use the prefix
            // maximum only as a floor.
            let start = prefix.len();
            let bound = tail_bound(&num, &den, start, bound);
            Shift1D::new(prefix, Tail::RationalFn { num, den, start }, bound)
        }
        None => Shift1D::new(prefix, Tail::None, bound),
    }
}

/// Upper bound for `num(k)/den(k)` over `k >= start`: the limit ratio when the
/// degrees agree, otherwise the prefix bound.
fn tail_bound(
    num: &RationalPolynomial,
    den: &RationalPolynomial,
    start: usize,
    floor: Scalar,
) -> Scalar {
    let sample = (start..start + 64)
        .map(|k| {
            den.eval_int(k as i64)
                .recip()
                .map(|inv| num.eval_int(k as i64) * inv)
                .unwrap_or_else(Scalar::zero)
        })
        .max()
        .unwrap_or_else(Scalar::zero);
    let limit = match (num.degree(), den.degree()) {
        (Some(a), Some(b)) if a == b => num.leading_coeff().unwrap() / den.leading_coeff().unwrap(),
        _ => Scalar::zero(),
    };
    floor.max(sample).max(limit)
}

/// `c` when `α² + β² = c` at every grid point and the moment identity
/// `γ_{k+ε1} + γ_{k+ε2} = c γ_k` holds on the window.
pub fn spherical_check(shift: &Shift2D) -> Option<Scalar> {
    let c = &shift.alpha_sq[0][0] + &shift.beta_sq[0][0];
    let uniform = shift
        .alpha_sq
        .iter()
        .zip(&shift.beta_sq)
        .all(|(ar, br)| ar.iter().zip(br).all(|(a, b)| a + b == c));
    if !uniform {
        return None;
    }
    let degree = shift.window();
    let table = moments(shift, degree).ok()?;
    let moments_ok = triangle_points(degree - 1)
        .into_iter()
        .all(|(i, j)| table.at(i + 1, j) + table.at(i, j + 1) == &c * table.at(i, j));
    moments_ok.then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{factorial, q};

    fn classical(w: Shift1D, window: usize) -> Shift2D {
        Shift2D::from_generator(Generator::Classical(w), window).unwrap()
    }

    #[test]
    fn sie_bergman_moments() {
        let t = moments(&Shift2D::sie_bergman(8), 8).unwrap();
        assert_eq!(t.get(2, 1).unwrap(), &q(1, 12));
        for (i, j) in triangle_points(8) {
            let expected =
                factorial(i as u64) * factorial(j as u64) / factorial((i + j + 1) as u64);
            assert_eq!(t.get(i, j).unwrap(), &expected);
        }
    }

    #[test]
    fn helton_howe_and_classical_bergman_moments() {
        let t = moments(&Shift2D::helton_howe(6), 10).unwrap();
        assert!(triangle_points(10).iter().all(|&(i, j)| t.get(i, j).unwrap().is_one()));
        let c = moments(&classical(Shift1D::bergman(), 5), 12).unwrap();
        for (i, j) in triangle_points(12) {
            assert_eq!(c.get(i, j).unwrap(), &q(1, (i + j + 1) as i64));
        }
    }

    #[test]
    fn commutativity_violation_is_located() {
        let n = 3;
        let mut alpha = vec![vec![q(1, 1); n]; n];
        let beta = vec![vec![q(1, 1); n]; n];
        alpha[1][1] = q(1, 2);
        let s = Shift2D::from_grids(alpha, beta).unwrap();
        assert_eq!(
            moments(&s, 3).unwrap_err(),
            Error::CommutativityViolation { k1: 1, k2: 0 }
        );
    }

    #[test]
    fn grid_only_shift_fails_outside_window() {
        let s = Shift2D::from_grids(vec![vec![q(1, 1)]], vec![vec![q(1, 1)]]).unwrap();
        assert_eq!(s.alpha_sq(1, 0), Err(Error::WindowTooSmall { k1: 1, k2: 0 }));
        assert!(moments(&s, 3).is_err());
    }

    #[test]
    fn six_point_examples() {
        assert!(six_point(&Shift2D::sie_bergman(12), 10).unwrap().holds);
        let hh = six_point(&Shift2D::helton_howe(4), 6).unwrap();
        assert!(hh.holds);
        assert_eq!(hh.boundary_points, hh.points_checked);
    }

    #[test]
    fn helton_howe_k_hyponormal() {
        for k in 1..=3 {
            assert!(k_hyponormal_2v(&Shift2D::helton_howe(4), k, 6).unwrap().holds);
        }
    }

    #[test]
    fn restriction_examples() {
        let w = Shift1D::bergman();
        let s = classical(w.clone(), 20);
        let r = restrict(&s, 2, 3, 0, 0).unwrap();
        let ws = w.weights_sq(12).unwrap();
        assert_eq!(r.alpha_sq(0, 0).unwrap(), &ws[0] * &ws[1]);
        assert_eq!(r.alpha_sq(1, 0).unwrap(), &ws[2] * &ws[3]);
        assert_eq!(r.beta_sq(0, 0).unwrap(), &ws[0] * &ws[1] * &ws[2]);
        assert_eq!(r.beta_sq(0, 1).unwrap(), &ws[3] * &ws[4] * &ws[5]);

        assert_eq!(restrict(&s, 1, 1, 0, 0).unwrap().alpha_grid(), s.alpha_grid());
        let hh = restrict(&Shift2D::helton_howe(9), 3, 2, 1, 1).unwrap();
        assert!(hh.alpha_grid().iter().flatten().all(Scalar::is_one));
        assert!(restrict(&s, 2, 2, 2, 0).is_err());
    }

    #[test]
    fn restriction_composes() {
        let s = classical(Shift1D::agler(3), 24);
        let two_step = restrict(&restrict(&s, 2, 1, 1, 0).unwrap(), 1, 3, 0, 2).unwrap();
        let direct = restrict(&s, 2, 3, 1, 2).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(two_step.alpha_sq(i, j), direct.alpha_sq(i, j));
                assert_eq!(two_step.beta_sq(i, j), direct.beta_sq(i, j));
            }
        }
    }

    #[test]
    fn rows_and_columns() {
        let sie = Shift2D::sie_bergman(6);
        for j in 0..4 {
            let r = row(&sie, j).unwrap();
            let a = Shift1D::agler(j as i64 + 2);
            assert_eq!(r.weights_sq(15).unwrap(), a.weights_sq(15).unwrap());
            assert_eq!(col(&sie, j).unwrap().weights_sq(15).unwrap(), r.weights_sq(15).unwrap());
        }
        let c = classical(Shift1D::bergman(), 7);
        assert_eq!(
            row(&c, 0).unwrap().weights_sq(7).unwrap(),
            Shift1D::bergman().weights_sq(7).unwrap()
        );
    }

    #[test]
    fn spherical_examples() {
        assert_eq!(spherical_check(&Shift2D::sie_bergman(8)), Some(q(1, 1)));
        let s = Shift2D::sie_bergman(8);
        let scale = |g: &[Vec<Scalar>]| -> Vec<Vec<Scalar>> {
            g.iter().map(|r| r.iter().map(|w| w * q(4, 1)).collect()).collect()
        };
        let scaled = Shift2D::from_grids(scale(s.alpha_grid()), scale(s.beta_grid())).unwrap();
        assert_eq!(spherical_check(&scaled), Some(q(4, 1)));
        assert_eq!(spherical_check(&classical(Shift1D::bergman(), 8)), None);
    }

    #[test]
    fn bivariate_eval() {
        // 1 + 2 k2 + 3 k1 k2
        let p = BivariatePolynomial::from_ints(&[&[1, 2], &[0, 3]]);
        assert_eq!(p.eval(2, 5), q(41, 1));
        assert_eq!(p.row(5).eval_int(2), q(41, 1));
        assert_eq!(transpose(&p).eval(5, 2), q(41, 1));
    }
}
