#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use shiftlab_core::exact::{q, RationalPolynomial, Scalar};
use shiftlab_core::measures::AtomicMeasure1D;
use shiftlab_core::shift1d::Shift1D;

/// `ω² = (x, 2/3, 3/4, 4/5, …)`.
pub fn perturbed_bergman(x: Scalar) -> Shift1D {
    Shift1D::with_rational_tail(
        vec![x],
        RationalPolynomial::from_ints(&[1, 1]),
        RationalPolynomial::from_ints(&[2, 1]),
        Scalar::one(),
    )
    .unwrap()
}

/// `ω² = (1/2, 1/2, 1/2, x, 2/3, 3/4, …)`.
pub fn plateau_bergman(x: Scalar) -> Shift1D {
    Shift1D::with_rational_tail(
        vec![q(1, 2), q(1, 2), q(1, 2), x],
        RationalPolynomial::from_ints(&[-2, 1]),
        RationalPolynomial::from_ints(&[-1, 1]),
        Scalar::one(),
    )
    .unwrap()
}

pub fn three_atoms() -> AtomicMeasure1D {
    AtomicMeasure1D::new(vec![q(1, 3), q(1, 2), q(1, 1)], vec![q(1, 3); 3]).unwrap()
}

/// Rational in `(0, 1)` with denominator at most `max_den`.
pub fn unit_rational(rng: &mut ChaCha8Rng, max_den: i64) -> Scalar {
    let den = rng.gen_range(2..=max_den);
    q(rng.gen_range(1..den), den)
}

/// Atomic probability measure with `1..=max_atoms` distinct atoms in `(0, 1)`.
pub fn random_measure(rng: &mut ChaCha8Rng, max_atoms: usize, min_atoms: usize) -> AtomicMeasure1D {
    let count = rng.gen_range(min_atoms..=max_atoms);
    let mut atoms: Vec<Scalar> = Vec::new();
    while atoms.len() < count {
        let a = unit_rational(rng, 9);
        if !atoms.contains(&a) {
            atoms.push(a);
        }
    }
    atoms.sort();
    let raw: Vec<i64> = (0..count).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = raw.iter().sum();
    let densities = raw.iter().map(|&r| q(r, total)).collect();
    AtomicMeasure1D::new(atoms, densities).unwrap()
}

/// Polynomial with nonnegative coefficients and positive linear term, hence
/// nonnegative and injective on `[0, ∞)`.
pub fn random_increasing_poly(rng: &mut ChaCha8Rng) -> RationalPolynomial {
    let deg = rng.gen_range(1..=3);
    let mut coeffs: Vec<Scalar> = (0..=deg).map(|_| q(rng.gen_range(0..=3), rng.gen_range(1..=3))).collect();
    coeffs[1] = q(rng.gen_range(1..=3), rng.gen_range(1..=3));
    RationalPolynomial::new(coeffs)
}
