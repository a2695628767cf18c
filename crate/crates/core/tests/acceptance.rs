//! End-to-end acceptance checks. Every comparison is exact; each test prints
//! one PASS/FAIL line with its elapsed time against the runtime budget.

mod common;

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shiftlab_core::embed::{
    classical_embed, recover_densities, row0_len, spherical_embed_iterative,
    spherical_embed_measure, SphericalOptions, StallCause,
};
use shiftlab_core::exact::{binomial, factorial, psd_test, q, RationalPolynomial, Scalar, SymMatrix};
use shiftlab_core::measures::{
    marginal, pushforward_atomic, pushforward_moments, row_measure, AtomicMeasure1D, Axis,
    MomentOracle1D, MomentOracle2D,
};
use shiftlab_core::shift1d::{curto_park_measures, from_measure, k_hyponormal, power_decompose, Shift1D};
use shiftlab_core::shift2d::{
    k_hyponormal_2v, moments, power_components, restrict, six_point, translate, triangle_points,
    Shift2D,
};

use common::{perturbed_bergman, plateau_bergman, random_increasing_poly, random_measure, three_atoms};

const SEED: u64 = 0x5eed_2024;
const BASE_BOUND: usize = 15;
const GRID: usize = 24;

fn report(id: &str, title: &str, budget: Duration, start: Instant, failures: &[String]) {
    report_with_notes(id, title, budget, start, failures, &[]);
}

fn report_with_notes(
    id: &str,
    title: &str,
    budget: Duration,
    start: Instant,
    failures: &[String],
    notes: &[String],
) {
    let elapsed = start.elapsed();
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!(
        "criterion {id:>3}: {status}  {title}  [{:.2}s / budget {}s]",
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    for f in failures {
        println!("               - {f}");
    }
    for n in notes {
        println!("               note: {n}");
    }
    if elapsed > budget {
        println!("               note: exceeded runtime budget");
    }
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        failures.push(what.into());
    }
}

fn embedded(x: Scalar) -> Shift2D {
    classical_embed(&perturbed_bergman(x), GRID).unwrap()
}

fn khypo2(s: &Shift2D, k: usize) -> bool {
    k_hyponormal_2v(s, k, BASE_BOUND).unwrap().holds
}

#[test]
fn c01_perturbed_bergman_thresholds() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let margin = q(1, 100);
    for (k, x) in [(1, q(2, 3)), (2, q(9, 16)), (3, q(8, 15))] {
        check(&mut failures, khypo2(&embedded(x.clone()), k), format!("k={k}: not PSD at {x}"));
        let above = &x + &margin;
        check(&mut failures, !khypo2(&embedded(above.clone()), k), format!("k={k}: PSD at {above}"));
    }
    let x = q(49, 90);
    let at = restrict(&embedded(x.clone()), 2, 3, 0, 0).unwrap();
    check(&mut failures, khypo2(&at, 2), "(2,3)-restriction: not 2-hyponormal at 49/90");
    let above = restrict(&embedded(&x + &margin), 2, 3, 0, 0).unwrap();
    check(&mut failures, !khypo2(&above, 2), "(2,3)-restriction: 2-hyponormal above 49/90");
    report("1", "perturbed Bergman embedding thresholds 2/3, 9/16, 8/15, 49/90", Duration::from_secs(30), start, &failures);
}

#[test]
fn c02_embedding_versus_restriction_at_five_ninths() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let s = embedded(q(5, 9));
    check(&mut failures, khypo2(&s, 2), "embedding is not 2-hyponormal at 5/9");
    let r = restrict(&s, 2, 3, 0, 0).unwrap();
    check(&mut failures, !khypo2(&r, 2), "(2,3)-restriction is 2-hyponormal at 5/9");
    report("2", "x = 5/9: embedding 2-hyponormal, (2,3)-restriction not", Duration::from_secs(5), start, &failures);
}

#[test]
fn c03_plateau_powers() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let s = classical_embed(&plateau_bergman(q(3, 5)), GRID).unwrap();
    check(&mut failures, khypo2(&s, 1), "embedding is not hyponormal");
    check(&mut failures, six_point(&s, BASE_BOUND).unwrap().holds, "six-point test fails on embedding");

    let comps = power_components(&s, 2, 3).unwrap();
    let exact_fail = comps.iter().any(|c| !khypo2(c, 1));
    let six_fail = comps.iter().any(|c| !six_point(c, BASE_BOUND).unwrap().holds);
    check(&mut failures, exact_fail, "(2,3)-power: every component hyponormal");
    check(&mut failures, six_fail, "(2,3)-power: six-point test finds no failing component");

    let corner = translate(&s, 1, 1).unwrap();
    check(&mut failures, !khypo2(&corner, 2), "M∩N restriction is 2-hyponormal");
    for (m, expect) in [(2, false), (3, true), (4, true)] {
        let all = power_components(&corner, m, m)
            .unwrap()
            .iter()
            .all(|c| khypo2(c, 2));
        check(
            &mut failures,
            all == expect,
            format!("M∩N restriction, ({m},{m})-power: 2-hyponormal = {all}, expected {expect}"),
        );
    }
    // Context for the (2,2) sub-claim: the same power of the unrestricted
    // embedding is not 2-hyponormal.
    let whole = power_components(&s, 2, 2).unwrap().iter().all(|c| khypo2(c, 2));
    let notes = [format!("unrestricted (2,2)-power 2-hyponormal = {whole}")];
    report_with_notes(
        "3",
        "plateau family at 3/5: powers and M∩N restriction",
        Duration::from_secs(60),
        start,
        &failures,
        &notes,
    );
}

#[test]
fn c04_spherical_bergman_grid() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let n = 12;
    let row0 = Shift1D::bergman().weights_sq(row0_len(n)).unwrap();
    let out = spherical_embed_iterative(&row0, &q(1, 1), n, SphericalOptions::default()).unwrap();
    match out.shift() {
        None => failures.push(format!("construction stalled: {:?}", out.stall())),
        Some(s) => {
            for k1 in 0..n {
                for k2 in 0..n {
                    let expected = q(k1 as i64 + 1, (k1 + k2) as i64 + 2);
                    check(&mut failures, s.alpha_sq(k1, k2).unwrap() == expected, format!("α²({k1},{k2})"));
                }
            }
            let t = moments(s, n).unwrap();
            for (k1, k2) in triangle_points(n) {
                let expected =
                    factorial(k1 as u64) * factorial(k2 as u64) / factorial((k1 + k2 + 1) as u64);
                check(&mut failures, t.get(k1, k2) == Some(&expected), format!("γ({k1},{k2})"));
            }
        }
    }
    report("4", "iterative spherical embedding of Bergman, 12×12", Duration::from_secs(5), start, &failures);
}

#[test]
fn c05_segment_rows_are_agler() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for j in 0..=6u64 {
        let row = row_measure(&MomentOracle2D::ArclengthSegment01, j as usize).unwrap();
        for k in 0..=12u64 {
            let expected = factorial(k) * factorial(j + 1) / factorial(k + j + 1);
            check(&mut failures, row.moment(k as usize).unwrap() == expected, format!("j={j} k={k}"));
        }
    }
    report("5", "row measures of segment arclength are Agler measures", Duration::from_secs(1), start, &failures);
}

#[test]
fn c06_beta_identity() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for k in 0..=10u64 {
        for l in 0..=10u64 {
            let lhs: Scalar = (0..=l)
                .map(|i| {
                    let term = binomial(l, i) / Scalar::from(k + l + 1 + i);
                    if i % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum();
            let rhs = factorial(k + l) * factorial(l) / factorial(k + 2 * l + 1);
            check(&mut failures, lhs == rhs, format!("k={k} l={l}"));
        }
    }
    report("6", "alternating binomial sum equals (k+l)! l! / (k+2l+1)!", Duration::from_secs(1), start, &failures);
}

#[test]
fn c07_three_atom_recovery() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let sigma = MomentOracle1D::Atomic(three_atoms());
    let s = spherical_embed_measure(&sigma, &q(1, 1), 6).unwrap();
    // Row-0 moments follow Σ ρ s^k; the third is 49/108.
    check(&mut failures, moments(&s, 2).unwrap().get(2, 0) == Some(&q(49, 108)), "γ(2,0) ≠ 49/108");
    let mu = recover_densities(&s, &[q(1, 3), q(1, 2), q(1, 1)]).unwrap();
    check(
        &mut failures,
        mu.atoms() == [(q(1, 3), q(2, 3)), (q(1, 2), q(1, 2)), (q(1, 1), q(0, 1))],
        format!("atoms {:?}", mu.atoms()),
    );
    check(&mut failures, mu.densities() == [q(1, 3), q(1, 3), q(1, 3)], format!("densities {:?}", mu.densities()));
    report("7", "density recovery for the three-atom measure", Duration::from_secs(1), start, &failures);
}

#[test]
fn c08_power_components_match_measures() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let sigma = three_atoms();
    let shift = from_measure(&MomentOracle1D::Atomic(sigma.clone())).unwrap();
    for m in [2, 3] {
        let comps = power_decompose(&shift, m, 11).unwrap();
        let measures = curto_park_measures(&sigma, m).unwrap();
        for (i, (c, mu)) in comps.iter().zip(&measures).enumerate() {
            let got = c.moments(11).unwrap();
            let want = mu.moments(11);
            check(&mut failures, got == want, format!("m={m} component {i}"));
        }
    }
    report("8", "power components have the predicted Berger measures", Duration::from_secs(5), start, &failures);
}

#[test]
fn c09_perturbed_bergman_stall() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let row0 = perturbed_bergman(q(9, 16)).weights_sq(row0_len(10)).unwrap();
    let out = spherical_embed_iterative(&row0, &q(1, 1), 10, SphericalOptions::default()).unwrap();
    match out.stall() {
        None => failures.push("construction did not stall".into()),
        Some(r) => {
            check(&mut failures, r.location == Some((0, 7)), format!("location {:?}", r.location));
            check(&mut failures, r.beta_sq == Some(q(0, 1)), format!("β² {:?}", r.beta_sq));
            check(&mut failures, r.cause == Some(StallCause::DivisionByZero), format!("cause {:?}", r.cause));
        }
    }
    report("9", "row 0 = (9/16, Bergman tail) stalls with β²(0,7) = 0", Duration::from_secs(1), start, &failures);
}

/// Determinant by cofactor expansion along the first row.
fn cofactor_det(m: &[Vec<Scalar>]) -> Scalar {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    (0..m.len())
        .map(|c| {
            let minor: Vec<Vec<Scalar>> = m[1..]
                .iter()
                .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| v.clone()).collect())
                .collect();
            let term = &m[0][c] * cofactor_det(&minor);
            if c % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

fn brute_force_psd(m: &[Vec<Scalar>]) -> bool {
    let n = m.len();
    (1..(1u32 << n)).all(|mask| {
        let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<Scalar>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect())
            .collect();
        !cofactor_det(&sub).is_negative()
    })
}

fn random_symmetric(rng: &mut ChaCha8Rng) -> Vec<Vec<Scalar>> {
    let mut m = vec![vec![Scalar::zero(); 4]; 4];
    match rng.gen_range(0..3) {
        // Gram matrix of random vectors, possibly rank-deficient.
        0 => {
            let rank = rng.gen_range(1..=4);
            let vs: Vec<Vec<Scalar>> = (0..rank)
                .map(|_| (0..4).map(|_| q(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect())
                .collect();
            for i in 0..4 {
                for j in 0..4 {
                    m[i][j] = vs.iter().map(|v| &v[i] * &v[j]).sum();
                }
            }
        }
        // Diagonally dominant perturbation near the PSD boundary.
        1 => {
            for i in 0..4 {
                for j in i..4 {
                    let v = q(rng.gen_range(-3..=3), rng.gen_range(1..=4));
                    m[i][j] = v.clone();
                    m[j][i] = v;
                }
                m[i][i] = q(rng.gen_range(0..=8), 2);
            }
        }
        _ => {
            for i in 0..4 {
                for j in i..4 {
                    let v = q(rng.gen_range(-5..=5), rng.gen_range(1..=5));
                    m[i][j] = v.clone();
                    m[j][i] = v;
                }
            }
        }
    }
    m
}

#[test]
fn c10_randomized_properties() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    // (a) 1-variable and classical-embedding k-hyponormality agree.
    let window = 8;
    for case in 0..20 {
        let sigma = random_measure(&mut rng, 3, 1);
        let mut shift = from_measure(&MomentOracle1D::Atomic(sigma)).unwrap();
        if case % 2 == 1 {
            // Perturb the first weight to produce non-subnormal cases.
            let w = shift.weights_sq(row0_len(window) + 8).unwrap();
            let mut prefix = w.clone();
            prefix[0] = &prefix[0] * q(rng.gen_range(5..=15), 10);
            let bound = prefix.iter().max().unwrap().clone();
            shift = Shift1D::new(prefix, shiftlab_core::shift1d::Tail::None, bound).unwrap();
        }
        let s2 = classical_embed(&shift, window).unwrap();
        for k in 1..=3 {
            let one = k_hyponormal(&shift, k, window).unwrap().holds;
            let two = k_hyponormal_2v(&s2, k, window - 1).unwrap().holds;
            check(&mut failures, one == two, format!("(a) case {case} k={k}: 1-var {one}, 2-var {two}"));
        }
    }

    // (b) iterative and measure-route spherical embeddings coincide.
    let n = 6;
    for case in 0..20 {
        let sigma = random_measure(&mut rng, 4, 2);
        let oracle = MomentOracle1D::Atomic(sigma);
        let shift = from_measure(&oracle).unwrap();
        let row0 = shift.weights_sq(row0_len(n)).unwrap();
        let it = spherical_embed_iterative(&row0, &q(1, 1), n, SphericalOptions::default()).unwrap();
        let via = spherical_embed_measure(&oracle, &q(1, 1), n).unwrap();
        let same = it
            .shift()
            .is_some_and(|g| g.alpha_grid() == via.alpha_grid() && g.beta_grid() == via.beta_grid());
        check(&mut failures, same, format!("(b) case {case}"));
    }

    // (c) characteristic-polynomial certificate agrees with brute force.
    let mut psd_count = 0;
    for case in 0..50 {
        let m = random_symmetric(&mut rng);
        let fast = psd_test(&SymMatrix::new(m.clone()).unwrap()).is_psd;
        let slow = brute_force_psd(&m);
        psd_count += usize::from(slow);
        check(&mut failures, fast == slow, format!("(c) case {case}: certificate {fast}, minors {slow}"));
    }
    check(&mut failures, psd_count > 5 && psd_count < 45, format!("(c) unbalanced sample: {psd_count} PSD"));

    // (d) pushforward and marginal coherence.
    for case in 0..20 {
        let sigma = random_measure(&mut rng, 4, 1);
        let p = random_increasing_poly(&mut rng);
        let qp = random_increasing_poly(&mut rng);
        let mu = pushforward_atomic(&sigma, &p, &qp).unwrap();
        let through_p =
            AtomicMeasure1D::from_pairs(sigma.iter().map(|(r, d)| (p.eval(r), d.clone()))).unwrap();
        check(&mut failures, marginal(&mu, Axis::X) == through_p, format!("(d) case {case}: marginal"));
        let oracle = pushforward_moments(&MomentOracle1D::Atomic(sigma.clone()), &p, &qp).unwrap();
        let table = oracle.moment_table(6, 6).unwrap();
        let agree = (0..=6).all(|i| (0..=6).all(|j| table[i][j] == mu.moment(i, j)));
        check(&mut failures, agree, format!("(d) case {case}: moments"));
    }

    report("10", "randomized property suites (a)-(d), seeded", Duration::from_secs(120), start, &failures);
}

#[test]
fn identity_polynomial_is_available() {
    // Guards the helper used by criterion 10(d).
    assert_eq!(RationalPolynomial::identity().eval(&q(3, 7)), q(3, 7));
}
