//! Embeddings of 1-variable shifts into 2-variable shifts.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{is_nonnegative_on, vandermonde_solve, RationalPolynomial, Scalar};
use crate::measures::{pushforward_moments, AtomicMeasure1D, AtomicMeasure2D, MomentOracle1D};
use crate::shift1d::{from_measure, Shift1D, Tail};
use crate::shift2d::{spherical_check, Generator, Point, Shift2D};

/// `α²_(k1,k2) = β²_(k1,k2) = ω²_{k1+k2}`.
pub fn classical_embed(shift: &Shift1D, window: usize) -> Result<Shift2D> {
    Shift2D::from_generator(Generator::Classical(shift.clone()), window)
}

/// The `(p, q)`-embedding: weights are ratios of the moments
/// `∫ p^k1 q^k2 dσ`.
pub fn poly_embed(
    sigma: &MomentOracle1D,
    p: &RationalPolynomial,
    q: &RationalPolynomial,
    window: usize,
) -> Result<Shift2D> {
    if window == 0 {
        return Err(Error::InvalidInput("window must be positive".into()));
    }
    check_nonnegative(sigma, p, "p")?;
    check_nonnegative(sigma, q, "q")?;
    let mu = pushforward_moments(sigma, p, q)?;
    let table = mu.moment_table(window, window)?;
    for (i, row) in table.iter().enumerate() {
        for (j, m) in row.iter().enumerate() {
            if (i, j) != (window, window) && m.is_zero() {
                return Err(Error::ZeroMoment {
                    index: format!("({i}, {j})"),
                });
            }
        }
    }
    let grid = |di: usize, dj: usize| -> Vec<Vec<Scalar>> {
        (0..window)
            .map(|i| {
                (0..window)
                    .map(|j| &table[i + di][j + dj] / &table[i][j])
                    .collect()
            })
            .collect()
    };
    let shift = Shift2D::from_grids(grid(1, 0), grid(0, 1))?;
    Ok(shift.with_generator(Generator::Moments(mu)))
}

/// Exact sign check of `f` on the support of `sigma`.
fn check_nonnegative(sigma: &MomentOracle1D, f: &RationalPolynomial, which: &str) -> Result<()> {
    if let Some(atomic) = sigma.as_atomic() {
        for r in atomic.atoms() {
            let v = f.eval(r);
            if v.is_negative() {
                return Err(Error::NegativeValue {
                    atom: Box::new(r.clone()),
                    value: Box::new(v),
                });
            }
        }
        return Ok(());
    }
    let (lo, hi) = (Scalar::zero(), sigma.support_bound());
    if is_nonnegative_on(f, &lo, &hi) {
        Ok(())
    } else {
        Err(Error::NegativeOnSupport {
            which: which.to_string(),
            lo: Box::new(lo),
            hi: Box::new(hi),
        })
    }
}

/// Spherically quasinormal embedding through `r ↦ (r, c − r)`.
pub fn spherical_embed_measure(sigma: &MomentOracle1D, c: &Scalar, window: usize) -> Result<Shift2D> {
    let q = RationalPolynomial::new(vec![c.clone(), -Scalar::one()]);
    poly_embed(sigma, &RationalPolynomial::identity(), &q, window)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StallCause {
    BetaNonpositive,
    DivisionByZero,
    Row0NotStrictlyIncreasing,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StallReport {
    pub stalled: bool,
    pub location: Option<Point>,
    pub cause: Option<StallCause>,
    /// `β²` at the stall point, when one was computed.
    pub beta_sq: Option<Scalar>,
}

impl StallReport {
    fn at(location: Point, cause: StallCause, beta_sq: Option<Scalar>) -> Self {
        StallReport {
            stalled: true,
            location: Some(location),
            cause: Some(cause),
            beta_sq,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SphericalOutcome {
    Embedded(Shift2D),
    Stalled(StallReport),
}

impl SphericalOutcome {
    pub fn shift(&self) -> Option<&Shift2D> {
        match self {
            SphericalOutcome::Embedded(s) => Some(s),
            SphericalOutcome::Stalled(_) => None,
        }
    }

    pub fn stall(&self) -> Option<&StallReport> {
        match self {
            SphericalOutcome::Stalled(r) => Some(r),
            SphericalOutcome::Embedded(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SphericalOptions {
    /// Reject row-0 data that is not strictly increasing before running.
    pub require_increasing_row0: bool,
}

impl Default for SphericalOptions {
    fn default() -> Self {
        SphericalOptions {
            require_increasing_row0: true,
        }
    }
}

/// Number of row-0 weights the iterative construction reads for a window.
pub fn row0_len(window: usize) -> usize {
    2 * window - 1
}

/// Row-by-row construction from `α²_(k,0)` using `α² + β² = c` and
/// commutativity. `row0_sq` needs `2·window − 1` entries.
pub fn spherical_embed_iterative(
    row0_sq: &[Scalar],
    c: &Scalar,
    window: usize,
    options: SphericalOptions,
) -> Result<SphericalOutcome> {
    if window == 0 {
        return Err(Error::InvalidInput("window must be positive".into()));
    }
    let len = row0_len(window);
    if row0_sq.len() < len {
        return Err(Error::TailExhausted {
            index: row0_sq.len(),
        });
    }
    let row0 = &row0_sq[..len];
    if let Some((k, w)) = row0.iter().enumerate().find(|(_, w)| !w.is_positive()) {
        return Err(Error::InvalidWeight {
            index: k.to_string(),
            value: w.clone(),
        });
    }
    if options.require_increasing_row0 {
        if let Some(k) = row0.windows(2).position(|w| w[1] <= w[0]) {
            return Ok(SphericalOutcome::Stalled(StallReport::at(
                (k + 1, 0),
                StallCause::Row0NotStrictlyIncreasing,
                None,
            )));
        }
    }

    // Row j holds α²_(k, j) for k + j <= 2·window − 2.
    let mut alpha: Vec<Vec<Scalar>> = vec![row0.to_vec()];
    let mut beta: Vec<Vec<Scalar>> = Vec::with_capacity(window);
    for j in 0..window {
        let betas: Vec<Scalar> = alpha[j].iter().map(|a| c - a).collect();
        if let Some((k, b)) = betas.iter().enumerate().find(|(_, b)| !b.is_positive()) {
            let cause = if b.is_zero() {
                StallCause::DivisionByZero
            } else {
                StallCause::BetaNonpositive
            };
            return Ok(SphericalOutcome::Stalled(StallReport::at(
                (k, j),
                cause,
                Some(b.clone()),
            )));
        }
        if j + 1 < window {
            let next: Vec<Scalar> = (0..betas.len() - 1)
                .map(|k| &alpha[j][k] * &betas[k + 1] / &betas[k])
                .collect();
            alpha.push(next);
        }
        beta.push(betas);
    }
    let square = |rows: &[Vec<Scalar>]| -> Vec<Vec<Scalar>> {
        // rows are indexed [k2][k1]; grids are [k1][k2].
        (0..window)
            .map(|k1| (0..window).map(|k2| rows[k2][k1].clone()).collect())
            .collect()
    };
    let shift = Shift2D::from_grids(square(&alpha), square(&beta))?;
    Ok(SphericalOutcome::Embedded(shift))
}

/// Iterative construction reading row 0 from a 1-variable shift.
pub fn spherical_embed_iterative_from(
    row0: &Shift1D,
    c: &Scalar,
    window: usize,
    options: SphericalOptions,
) -> Result<SphericalOutcome> {
    let weights = row0.weights_sq(row0_len(window))?;
    spherical_embed_iterative(&weights, c, window, options)
}

/// Berger measure `Σ ξ_i δ_(s_i, c − s_i)` of a spherical shift with known
/// first-coordinate atoms; densities come from the row-0 moments.
pub fn recover_densities(shift: &Shift2D, atoms: &[Scalar]) -> Result<AtomicMeasure2D> {
    let c = spherical_check(shift).ok_or(Error::NotSpherical)?;
    let mut gammas = Vec::with_capacity(atoms.len());
    let mut acc = Scalar::one();
    for k in 0..atoms.len() {
        if k > 0 {
            acc *= shift.alpha_sq(k - 1, 0)?;
        }
        gammas.push(acc.clone());
    }
    let densities = vandermonde_solve(atoms, &gammas)?;
    if let Some((index, value)) = densities
        .iter()
        .enumerate()
        .find(|(_, d)| !d.is_positive())
    {
        return Err(Error::NonpositiveDensity {
            index,
            value: value.clone(),
        });
    }
    let points = atoms.iter().map(|s| (s.clone(), &c - s)).collect();
    AtomicMeasure2D::new(points, densities)
}

/// Checks that row 1 of the iterative construction over `σ` has Berger
/// moments `∫ r^k (c − r) dσ / (c − γ_1)` for `k = 0..=10`.
pub fn row_measure_transform_check(sigma: &AtomicMeasure1D, c: &Scalar) -> Result<bool> {
    const TOP: usize = 10;
    if let Some(a) = sigma.atoms().iter().find(|a| *a >= c) {
        return Err(Error::InvalidInput(format!(
            "atom {a} lies outside [0, {c}); the row-1 density vanishes"
        )));
    }
    let expected: Vec<Scalar> = {
        let mass = c - sigma.moment(1);
        (0..=TOP)
            .map(|k| {
                sigma
                    .iter()
                    .map(|(r, rho)| rho * r.pow(k as u32) * (c - r))
                    .sum::<Scalar>()
                    / &mass
            })
            .collect()
    };
    if sigma.atoms().iter().all(Scalar::is_zero) {
        // δ_0 has no weighted shift; its row-1 measure is δ_0 again.
        let delta0: Vec<Scalar> = (0..=TOP)
            .map(|k| if k == 0 { Scalar::one() } else { Scalar::zero() })
            .collect();
        return Ok(expected == delta0);
    }
    let shift = from_measure(&MomentOracle1D::Atomic(sigma.clone()))?;
    let window = TOP + 2;
    let outcome = spherical_embed_iterative_from(
        &shift,
        c,
        window,
        SphericalOptions {
            require_increasing_row0: false,
        },
    )?;
    let Some(grid) = outcome.shift() else {
        return Ok(false);
    };
    let mut acc = Scalar::one();
    for (k, e) in expected.iter().enumerate() {
        if k > 0 {
            acc *= grid.alpha_sq(k - 1, 1)?;
        }
        if acc != *e {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Where the 1-variable data of an embedding comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingSource {
    Shift(Shift1D),
    Measure(MomentOracle1D),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EmbeddingKind {
    Classical,
    Poly {
        p: RationalPolynomial,
        q: RationalPolynomial,
    },
    Spherical { c: Scalar },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingSpec {
    pub kind: EmbeddingKind,
    pub source: EmbeddingSource,
}

impl EmbeddingSource {
    fn measure(&self) -> Result<MomentOracle1D> {
        match self {
            EmbeddingSource::Measure(m) => Ok(m.clone()),
            EmbeddingSource::Shift(s) => match s.tail() {
                Tail::FromMeasure(m) if s.prefix_sq().is_empty() => Ok(m.clone()),
                _ => Err(Error::UnsupportedBase(
                    "this embedding needs a Berger measure, not a weight sequence".into(),
                )),
            },
        }
    }
}

/// Runs an embedding. Spherical embeddings of weight sequences use the
/// iterative construction; of measures, the pushforward route.
pub fn embed(spec: &EmbeddingSpec, window: usize) -> Result<SphericalOutcome> {
    let shift = match (&spec.kind, &spec.source) {
        (EmbeddingKind::Classical, EmbeddingSource::Shift(s)) => classical_embed(s, window)?,
        (EmbeddingKind::Classical, EmbeddingSource::Measure(m)) => {
            classical_embed(&from_measure(m)?, window)?
        }
        (EmbeddingKind::Poly { p, q }, source) => poly_embed(&source.measure()?, p, q, window)?,
        (EmbeddingKind::Spherical { c }, EmbeddingSource::Shift(s)) => {
            return spherical_embed_iterative_from(s, c, window, SphericalOptions::default())
        }
        (EmbeddingKind::Spherical { c }, EmbeddingSource::Measure(m)) => {
            spherical_embed_measure(m, c, window)?
        }
    };
    Ok(SphericalOutcome::Embedded(shift))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::measures::pushforward_atomic;
    use crate::shift2d::{moments, triangle_points};

    fn ex1_sigma() -> AtomicMeasure1D {
        AtomicMeasure1D::new(vec![q(1, 3), q(1, 2), q(1, 1)], vec![q(1, 3); 3]).unwrap()
    }

    fn ex103_row0(x: Scalar, len: usize) -> Vec<Scalar> {
        std::iter::once(x)
            .chain((1..len as i64).map(|k| q(k + 1, k + 2)))
            .collect()
    }

    #[test]
    fn classical_examples() {
        let s = classical_embed(&Shift1D::bergman(), 6).unwrap();
        let t = moments(&s, 10).unwrap();
        for (i, j) in triangle_points(10) {
            assert_eq!(t.get(i, j).unwrap(), &q(1, (i + j + 1) as i64));
        }
        let hh = classical_embed(&Shift1D::unweighted(), 5).unwrap();
        assert_eq!(hh.alpha_grid(), Shift2D::helton_howe(5).alpha_grid());
        let finite = Shift1D::from_prefix(vec![q(1, 2); 3]).unwrap();
        assert_eq!(
            classical_embed(&finite, 3).unwrap_err(),
            Error::TailExhausted { index: 3 }
        );
    }

    #[test]
    fn poly_embed_examples() {
        let r = RationalPolynomial::identity();
        let one_minus_r = RationalPolynomial::from_ints(&[1, -1]);
        let seg = poly_embed(&MomentOracle1D::Lebesgue01, &r, &one_minus_r, 8).unwrap();
        assert_eq!(seg.alpha_grid(), Shift2D::sie_bergman(8).alpha_grid());
        assert_eq!(seg.beta_grid(), Shift2D::sie_bergman(8).beta_grid());

        let r2 = RationalPolynomial::from_ints(&[0, 0, 1]);
        let r3 = RationalPolynomial::from_ints(&[0, 0, 0, 1]);
        let delta1 = MomentOracle1D::Atomic(AtomicMeasure1D::dirac(q(1, 1)));
        let flat = poly_embed(&delta1, &r2, &r3, 5).unwrap();
        assert!(flat.alpha_grid().iter().chain(flat.beta_grid()).flatten().all(Scalar::is_one));

        let neil = poly_embed(&MomentOracle1D::Lebesgue01, &r2, &r3, 6).unwrap();
        let bergman = Shift1D::bergman().weights_sq(12).unwrap();
        for k in 0..6 {
            let expected = q(2 * k as i64 + 1, 2 * k as i64 + 3);
            assert_eq!(neil.alpha_sq(k, 0).unwrap(), expected);
            assert_eq!(expected, &bergman[2 * k] * &bergman[2 * k + 1]);
        }
    }

    #[test]
    fn poly_embed_rejects_negative_maps() {
        let shifted = RationalPolynomial::new(vec![q(-1, 2), q(1, 1)]);
        let err = poly_embed(
            &MomentOracle1D::Lebesgue01,
            &shifted,
            &RationalPolynomial::identity(),
            3,
        )
        .unwrap_err();
        assert!(matches!(err, Error::NegativeOnSupport { .. }));
    }

    #[test]
    fn iterative_reproduces_sie_bergman() {
        let row0 = Shift1D::bergman().weights_sq(row0_len(10)).unwrap();
        let out = spherical_embed_iterative(&row0, &q(1, 1), 10, SphericalOptions::default())
            .unwrap();
        let grid = out.shift().unwrap();
        assert_eq!(grid.alpha_grid(), Shift2D::sie_bergman(10).alpha_grid());
        assert_eq!(grid.beta_grid(), Shift2D::sie_bergman(10).beta_grid());
    }

    #[test]
    fn perturbed_bergman_stalls_at_row_seven() {
        let row0 = ex103_row0(q(9, 16), row0_len(10));
        let out = spherical_embed_iterative(&row0, &q(1, 1), 10, SphericalOptions::default())
            .unwrap();
        let stall = out.stall().unwrap();
        assert_eq!(stall.location, Some((0, 7)));
        assert_eq!(stall.cause, Some(StallCause::DivisionByZero));
        assert_eq!(stall.beta_sq, Some(q(0, 1)));
    }

    #[test]
    fn column_zero_trace_of_perturbed_bergman() {
        // x_0 .. x_7 of the column k = 0 recurrence.
        let expected = [
            q(9, 16),
            q(3, 7),
            q(3, 8),
            q(9, 25),
            q(3, 8),
            q(3, 7),
            q(9, 16),
            q(1, 1),
        ];
        let row0 = ex103_row0(q(9, 16), row0_len(7));
        let out = spherical_embed_iterative(&row0, &q(1, 1), 7, SphericalOptions::default())
            .unwrap();
        let grid = out.shift().unwrap();
        for (j, e) in expected.iter().take(7).enumerate() {
            assert_eq!(&grid.alpha_sq(0, j).unwrap(), e);
        }
    }

    #[test]
    fn constant_tail_stalls() {
        let mut row0 = vec![q(1, 4), q(1, 2)];
        row0.resize(row0_len(50), q(3, 4));
        let out = spherical_embed_iterative(&row0, &q(1, 1), 50, SphericalOptions::default())
            .unwrap();
        let stall = out.stall().unwrap();
        assert_eq!(stall.location, Some((3, 0)));
        assert_eq!(stall.cause, Some(StallCause::Row0NotStrictlyIncreasing));

        let relaxed = SphericalOptions {
            require_increasing_row0: false,
        };
        let out = spherical_embed_iterative(&row0, &q(1, 1), 50, relaxed).unwrap();
        let stall = out.stall().unwrap();
        assert_eq!(stall.location, Some((0, 9)));
        assert_eq!(stall.cause, Some(StallCause::BetaNonpositive));
        assert_eq!(stall.beta_sq, Some(q(-29127, 14564)));
    }

    #[test]
    fn spherical_measure_examples() {
        let (a, b) = (q(1, 2), q(3, 4));
        let ratio_sq = (&a / &b).pow(2);
        let sigma = AtomicMeasure1D::new(
            vec![q(0, 1), b.pow(2)],
            vec![q(1, 1) - &ratio_sq, ratio_sq.clone()],
        )
        .unwrap();
        let s = spherical_embed_measure(&MomentOracle1D::Atomic(sigma), &q(1, 1), 6).unwrap();
        assert_eq!(spherical_check(&s), Some(q(1, 1)));
        let mu = recover_densities(&s, &[q(0, 1), q(9, 16)]).unwrap();
        let expected = AtomicMeasure2D::new(
            vec![(q(0, 1), q(1, 1)), (q(9, 16), q(7, 16))],
            vec![q(5, 9), q(4, 9)],
        )
        .unwrap();
        assert_eq!(mu, expected);

        let delta1 = MomentOracle1D::Atomic(AtomicMeasure1D::dirac(q(1, 1)));
        assert!(matches!(
            spherical_embed_measure(&delta1, &q(1, 1), 4),
            Err(Error::ZeroMoment { .. })
        ));
    }

    #[test]
    fn recover_examples() {
        let ex1 = MomentOracle1D::Atomic(ex1_sigma());
        let s = spherical_embed_measure(&ex1, &q(1, 1), 6).unwrap();
        let mu = recover_densities(&s, &[q(1, 3), q(1, 2), q(1, 1)]).unwrap();
        let r = RationalPolynomial::identity();
        let one_minus_r = RationalPolynomial::from_ints(&[1, -1]);
        assert_eq!(mu, pushforward_atomic(&ex1_sigma(), &r, &one_minus_r).unwrap());

        let delta1 = MomentOracle1D::Atomic(AtomicMeasure1D::dirac(q(1, 1)));
        let s = spherical_embed_measure(&delta1, &q(2, 1), 4).unwrap();
        assert_eq!(
            recover_densities(&s, &[q(1, 1)]).unwrap(),
            AtomicMeasure2D::dirac(q(1, 1), q(1, 1))
        );

        let sigma = AtomicMeasure1D::new(
            vec![q(1, 4), q(1, 2), q(1, 1)],
            vec![q(1, 4), q(1, 4), q(1, 2)],
        )
        .unwrap();
        let s = spherical_embed_measure(&MomentOracle1D::Atomic(sigma), &q(1, 1), 5).unwrap();
        let mu = recover_densities(&s, &[q(1, 4), q(1, 2), q(1, 1)]).unwrap();
        assert_eq!(mu.densities(), &[q(1, 4), q(1, 4), q(1, 2)]);

        let wrong = recover_densities(&s, &[q(1, 4), q(1, 3), q(1, 1)]);
        assert!(matches!(wrong, Err(Error::NonpositiveDensity { .. })));
        let not_spherical = classical_embed(&Shift1D::bergman(), 4).unwrap();
        assert_eq!(
            recover_densities(&not_spherical, &[q(1, 2)]).unwrap_err(),
            Error::NotSpherical
        );
    }

    #[test]
    fn row_transform_examples() {
        let half = AtomicMeasure1D::new(vec![q(0, 1), q(1, 2)], vec![q(1, 2); 2]).unwrap();
        assert!(row_measure_transform_check(&half, &q(1, 1)).unwrap());
        assert!(row_measure_transform_check(&AtomicMeasure1D::dirac(q(0, 1)), &q(1, 1)).unwrap());
        let third_half = AtomicMeasure1D::new(vec![q(1, 3), q(1, 2)], vec![q(1, 2); 2]).unwrap();
        assert!(row_measure_transform_check(&third_half, &q(1, 1)).unwrap());
        assert!(row_measure_transform_check(&ex1_sigma(), &q(1, 1)).is_err());
    }

    #[test]
    fn general_c_scaling() {
        let row0 = Shift1D::bergman().weights_sq(row0_len(6)).unwrap();
        let doubled: Vec<Scalar> = row0.iter().map(|w| w * q(4, 1)).collect();
        let base = spherical_embed_iterative(&row0, &q(1, 1), 6, SphericalOptions::default())
            .unwrap();
        let scaled = spherical_embed_iterative(&doubled, &q(4, 1), 6, SphericalOptions::default())
            .unwrap();
        let (base, scaled) = (base.shift().unwrap(), scaled.shift().unwrap());
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(scaled.alpha_sq(i, j).unwrap(), base.alpha_sq(i, j).unwrap() * q(4, 1));
                assert_eq!(scaled.beta_sq(i, j).unwrap(), base.beta_sq(i, j).unwrap() * q(4, 1));
            }
        }
        assert_eq!(spherical_check(scaled), Some(q(4, 1)));
    }
}
