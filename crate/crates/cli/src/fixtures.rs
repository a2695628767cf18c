//! Bundled example descriptors and the reference suite run by `fixtures`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use shiftlab_core::embed::{classical_embed, recover_densities, SphericalOutcome, StallCause};
use shiftlab_core::exact::{factorial, q, Scalar};
use shiftlab_core::measures::{row_measure, AtomicMeasure1D, MomentOracle1D, MomentOracle2D};
use shiftlab_core::shift1d::{curto_park_measures, from_measure, k_hyponormal, power_decompose};
use shiftlab_core::shift2d::{k_hyponormal_2v, moments, Shift2D};

use crate::descriptors::{MeasureDesc, Shift1DDesc, Shift2DDesc, Source};
use crate::error::CliResult;
use crate::threshold::{Family, FamilyFile, Op, Predicate};

/// `(file name, JSON)` for every bundled descriptor.
pub const FILES: &[(&str, &str)] = &[
    ("bergman.json", r#"{"kind": "bergman"}"#),
    (
        "perturbed_bergman.json",
        r#"{
  "prefix_sq": ["9/16"],
  "tail": {"kind": "rational_fn", "num": [1, 1], "den": [2, 1], "start": 1},
  "norm_bound_sq": "1"
}"#,
    ),
    ("sie_bergman.json", r#"{"kind": "sie_bergman"}"#),
    (
        "three_atoms.json",
        r#"{"kind": "atomic1d", "atoms": ["1/3", "1/2", "1"], "densities": ["1/3", "1/3", "1/3"]}"#,
    ),
    (
        "spherical_bergman.json",
        r#"{"kind": "spherical", "c": "1", "row0": {"kind": "bergman"}}"#,
    ),
    (
        "neil_parabola.json",
        r#"{"kind": "pushforward", "p": [0, 0, 1], "q": [0, 0, 0, 1], "base": {"kind": "lebesgue01"}}"#,
    ),
    (
        "perturbed_bergman_family.json",
        r#"{
  "lo": "1/2",
  "hi": "1",
  "shift1d": {
    "prefix_sq": ["x"],
    "tail": {"kind": "rational_fn", "num": [1, 1], "den": [2, 1], "start": 1},
    "norm_bound_sq": "1"
  }
}"#,
    ),
    (
        "plateau_family.json",
        r#"{
  "lo": "1/2",
  "hi": "1",
  "shift1d": {
    "prefix_sq": ["1/2", "1/2", "1/2", "x"],
    "tail": {"kind": "rational_fn", "num": [-2, 1], "den": [-1, 1], "start": 4},
    "norm_bound_sq": "1"
  }
}"#,
    ),
];

pub fn file(name: &str) -> &'static str {
    FILES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .unwrap_or_else(|| panic!("no bundled descriptor {name}"))
}

fn source(name: &str) -> Source {
    Source {
        label: name.into(),
        text: file(name).into(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FixtureResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn fixture(name: &str, run: impl FnOnce() -> CliResult<(bool, String)>) -> FixtureResult {
    let (passed, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
    FixtureResult {
        name: name.into(),
        passed,
        detail,
    }
}

const BOUND: usize = 15;

fn family(name: &str) -> CliResult<Family> {
    Family::from_file(&source(name).parse::<FamilyFile>()?)
}

fn khypo2_pred(k: usize, restriction: Option<(usize, usize, usize, usize)>) -> Predicate {
    Predicate {
        op: Op::Khypo2,
        k,
        window: BOUND,
        power: None,
        restriction,
    }
}

/// Predicate holds at `x` and fails at `x + 1/100`.
fn boundary(fam: &Family, pred: &Predicate, x: Scalar) -> CliResult<(bool, String)> {
    let at = fam.holds(pred, &x)?;
    let above = fam.holds(pred, &(&x + q(1, 100)))?;
    Ok((at && !above, format!("holds at {x}: {at}; at {x} + 1/100: {above}")))
}

/// The reference examples, each checked exactly.
pub fn suite() -> Vec<FixtureResult> {
    let mut out = Vec::new();
    out.push(fixture("bergman moments are 1/(k+1)", || {
        let s = source("bergman.json").parse::<Shift1DDesc>()?.build()?;
        let m = s.moments(12)?;
        let ok = m.iter().enumerate().all(|(k, g)| *g == q(1, k as i64 + 1));
        Ok((ok, "k = 0..11".into()))
    }));
    for (k, x) in [(1, q(2, 3)), (2, q(9, 16)), (3, q(8, 15))] {
        out.push(fixture(&format!("perturbed bergman, k = {k} boundary"), || {
            boundary(&family("perturbed_bergman_family.json")?, &khypo2_pred(k, None), x)
        }));
    }
    out.push(fixture("perturbed bergman, (2,3)-restriction boundary", || {
        boundary(
            &family("perturbed_bergman_family.json")?,
            &khypo2_pred(2, Some((2, 3, 0, 0))),
            q(49, 90),
        )
    }));
    out.push(fixture("perturbed bergman at 5/9: embedding vs restriction", || {
        let fam = family("perturbed_bergman_family.json")?;
        let x = q(5, 9);
        let whole = fam.holds(&khypo2_pred(2, None), &x)?;
        let part = fam.holds(&khypo2_pred(2, Some((2, 3, 0, 0))), &x)?;
        Ok((whole && !part, format!("embedding: {whole}; restriction: {part}")))
    }));
    out.push(fixture("plateau family at 3/5: (2,3)-power has a failing component", || {
        let fam = family("plateau_family.json")?;
        let x = q(3, 5);
        let hypo = fam.holds(&khypo2_pred(1, None), &x)?;
        let pred = Predicate {
            power: Some((2, 3)),
            ..khypo2_pred(1, None)
        };
        let power = fam.holds(&pred, &x)?;
        Ok((hypo && !power, format!("embedding hyponormal: {hypo}; power hyponormal: {power}")))
    }));
    out.push(fixture("spherical bergman grid and moments, 12 x 12", || {
        let s = source("spherical_bergman.json").parse::<Shift2DDesc>()?.build(12)?;
        let mut ok = true;
        for i in 0..12 {
            for j in 0..12 {
                ok &= s.alpha_sq(i, j)? == q(i as i64 + 1, (i + j) as i64 + 2);
            }
        }
        let table = moments(&s, 11)?;
        for (i, row) in table.rows().iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                let (i, j) = (i as u64, j as u64);
                ok &= *g == factorial(i) * factorial(j) / factorial(i + j + 1);
            }
        }
        Ok((ok, "alpha and moment formulas".into()))
    }));
    out.push(fixture("segment rows are Agler measures", || {
        let mut ok = true;
        for j in 0..=6u64 {
            let row = row_measure(&MomentOracle2D::ArclengthSegment01, j as usize)?;
            for k in 0..=12u64 {
                let expect = factorial(k) * factorial(j + 1) / factorial(k + j + 1);
                ok &= row.moment(k as usize)? == expect;
            }
        }
        Ok((ok, "j = 0..6, k = 0..12".into()))
    }));
    out.push(fixture("three-atom recovery", || {
        let sigma = source("three_atoms.json").parse::<MeasureDesc>()?.to_1d()?;
        let s = shiftlab_core::embed::spherical_embed_measure(&sigma, &Scalar::one(), 6)?;
        let atoms = sigma.as_atomic().expect("atomic").atoms().to_vec();
        let mu = recover_densities(&s, &atoms)?;
        let ok = mu.densities() == [q(1, 3), q(1, 3), q(1, 3)]
            && mu.atoms() == [(q(1, 3), q(2, 3)), (q(1, 2), q(1, 2)), (q(1, 1), q(0, 1))];
        Ok((ok, format!("{} atoms", mu.len())))
    }));
    out.push(fixture("power components match their measures", || {
        let sigma = source("three_atoms.json").parse::<MeasureDesc>()?.to_atomic_1d()?;
        let shift = from_measure(&MomentOracle1D::Atomic(sigma.clone()))?;
        let mut ok = true;
        for m in [2, 3] {
            let comps = power_decompose(&shift, m, 11)?;
            for (c, mu) in comps.iter().zip(curto_park_measures(&sigma, m)?) {
                ok &= c.moments(11)? == mu.moments(11);
            }
        }
        Ok((ok, "m = 2, 3; k = 0..10".into()))
    }));
    out.push(fixture("row 0 = (9/16, bergman tail) stalls at (0, 7)", || {
        let row0 = source("perturbed_bergman.json").parse::<Shift1DDesc>()?;
        let desc = Shift2DDesc {
            kind: crate::descriptors::Shift2DKind::Spherical,
            base: Some(Box::new(row0)),
            ..empty_2d()
        };
        let ok = match desc.embed(10, true)? {
            SphericalOutcome::Stalled(r) => {
                r.location == Some((0, 7))
                    && r.cause == Some(StallCause::DivisionByZero)
                    && r.beta_sq == Some(Scalar::zero())
            }
            SphericalOutcome::Embedded(_) => false,
        };
        Ok((ok, "beta^2 = 0".into()))
    }));
    out.push(fixture("spherical bergman embedding is 2-hyponormal", || {
        let s = source("sie_bergman.json").parse::<Shift2DDesc>()?.build(4)?;
        let v = k_hyponormal_2v(&s, 2, 12)?;
        Ok((v.holds, format!("{} base points", v.base_points_checked)))
    }));
    out
}

fn empty_2d() -> Shift2DDesc {
    serde_json::from_str("{}").expect("all fields optional")
}

/// Random atomic measure with up to three atoms in `(0, 1)`.
fn random_measure(rng: &mut ChaCha8Rng) -> AtomicMeasure1D {
    let count = rng.gen_range(1..=3);
    let mut atoms: Vec<Scalar> = Vec::new();
    while atoms.len() < count {
        let den = rng.gen_range(2..=9);
        let a = q(rng.gen_range(1..den), den);
        if !atoms.contains(&a) {
            atoms.push(a);
        }
    }
    atoms.sort();
    let raw: Vec<i64> = (0..count).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = raw.iter().sum();
    AtomicMeasure1D::new(atoms, raw.iter().map(|&r| q(r, total)).collect())
        .expect("valid random measure")
}

/// Seeded agreement checks between 1- and 2-variable verdicts, half of them
/// on shifts with a perturbed first weight.
pub fn randomized(seed: u64, cases: usize) -> Vec<FixtureResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..cases)
        .map(|i| {
            let sigma = random_measure(&mut rng);
            let k = rng.gen_range(1..=3);
            let scale = q(rng.gen_range(5..=15), 10);
            fixture(&format!("random case {i}: 1-D and 2-D verdicts agree, k = {k}"), || {
                let mut shift = from_measure(&MomentOracle1D::Atomic(sigma.clone()))?;
                if i % 2 == 1 {
                    let mut w = shift.weights_sq(16)?;
                    w[0] = &w[0] * &scale;
                    shift = shiftlab_core::shift1d::Shift1D::from_prefix(w)?;
                }
                let one = k_hyponormal(&shift, k, 8)?.holds;
                let s2: Shift2D = classical_embed(&shift, 8)?;
                let two = k_hyponormal_2v(&s2, k, 7)?.holds;
                Ok((one == two, format!("1-D: {one}; 2-D: {two}")))
            })
        })
        .collect()
}
