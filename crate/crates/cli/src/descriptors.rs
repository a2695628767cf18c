//! JSON descriptors for measures, shifts and embeddings.
//!
//! Rationals are written as `"p/q"` strings or integers; polynomials as
//! ascending coefficient lists; bivariate polynomials as matrices whose
//! entry `[i][j]` multiplies `k1^i k2^j`.

use std::fmt;
use std::fs;
use std::io::Read;

use serde::de::{self, DeserializeOwned, IntoDeserializer, SeqAccess, Visitor};
use serde::Deserialize;
use serde_json::Value;
use shiftlab_core::embed::{
    self, spherical_embed_iterative_from, EmbeddingKind, EmbeddingSource, EmbeddingSpec,
    SphericalOptions, SphericalOutcome,
};
use shiftlab_core::exact::{RationalPolynomial, Scalar};
use shiftlab_core::measures::{
    pushforward_atomic, AtomicMeasure1D, AtomicMeasure2D, MomentOracle1D, MomentOracle2D,
};
use shiftlab_core::shift1d::{from_measure, Shift1D, Tail};
use shiftlab_core::shift2d::{BivariatePolynomial, Generator, Shift2D};

use crate::error::{CliError, CliResult};

/// Raw descriptor text plus a label for diagnostics.
#[derive(Debug, Clone)]
pub struct Source {
    pub label: String,
    pub text: String,
}

impl Source {
    /// `arg` is inline JSON, `-` for stdin, or a file path.
    pub fn load(arg: &str) -> CliResult<Self> {
        let trimmed = arg.trim_start();
        if trimmed.starts_with('{') || trimmed.starts_with('[') {
            return Ok(Source {
                label: "<inline>".into(),
                text: arg.to_string(),
            });
        }
        if arg == "-" {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Io {
                    path: "<stdin>".into(),
                    message: e.to_string(),
                })?;
            return Ok(Source {
                label: "<stdin>".into(),
                text,
            });
        }
        let text = fs::read_to_string(arg).map_err(|e| CliError::Io {
            path: arg.into(),
            message: e.to_string(),
        })?;
        Ok(Source {
            label: arg.into(),
            text,
        })
    }

    pub fn parse<T: DeserializeOwned>(&self) -> CliResult<T> {
        let de = &mut serde_json::Deserializer::from_str(&self.text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            CliError::Schema {
                source_name: self.label.clone(),
                message: if path == "." {
                    inner.to_string()
                } else {
                    format!("at `{path}`: {inner}")
                },
            }
        })
    }

    /// The descriptor as an untyped value, for echoing into reports.
    pub fn value(&self) -> CliResult<Value> {
        self.parse()
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum MeasureKind {
    Atomic1d,
    Atomic2d,
    Lebesgue01,
    Beta,
    PrefixTable,
    ArclengthSegment01,
    Pushforward,
}

/// An atom: a point of the half-line or a `[s, t]` pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Point(Scalar),
    Pair(Scalar, Scalar),
}

impl<'de> Deserialize<'de> for Atom {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct AtomVisitor;

        impl<'de> Visitor<'de> for AtomVisitor {
            type Value = Atom;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational or a [s, t] pair of rationals")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Atom, E> {
                Scalar::deserialize(v.into_deserializer()).map(Atom::Point)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Atom, E> {
                Ok(Atom::Point(Scalar::from_int(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Atom, E> {
                Ok(Atom::Point(Scalar::from(v)))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Atom, E> {
                Scalar::deserialize(v.into_deserializer()).map(Atom::Point)
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Atom, A::Error> {
                let s = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(0, &self))?;
                let t = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(1, &self))?;
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(3, &self));
                }
                Ok(Atom::Pair(s, t))
            }
        }

        deserializer.deserialize_any(AtomVisitor)
    }
}

/// Measure descriptor, selected by `kind`: `atomic1d` and `atomic2d` take
/// `atoms` and `densities`; `beta` takes `j`; `prefix_table` takes `moments`
/// and `support_bound`; `pushforward` takes `p`, `q` and a 1-variable `base`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureDesc {
    pub kind: MeasureKind,
    #[serde(default)]
    pub atoms: Option<Vec<Atom>>,
    #[serde(default)]
    pub densities: Option<Vec<Scalar>>,
    #[serde(default)]
    pub j: Option<u32>,
    #[serde(default)]
    pub moments: Option<Vec<Scalar>>,
    #[serde(default)]
    pub support_bound: Option<Scalar>,
    #[serde(default)]
    pub p: Option<RationalPolynomial>,
    #[serde(default)]
    pub q: Option<RationalPolynomial>,
    #[serde(default)]
    pub base: Option<Box<MeasureDesc>>,
}

impl MeasureDesc {
    fn field<'a, T>(&self, f: &'a Option<T>, name: &str) -> CliResult<&'a T> {
        f.as_ref().ok_or_else(|| {
            CliError::Usage(format!("{:?} measure needs `{name}`", self.kind).to_lowercase())
        })
    }

    fn points(&self) -> CliResult<Vec<Scalar>> {
        self.field(&self.atoms, "atoms")?
            .iter()
            .map(|a| match a {
                Atom::Point(s) => Ok(s.clone()),
                Atom::Pair(..) => Err(CliError::Usage("atomic1d atoms are single rationals".into())),
            })
            .collect()
    }

    fn pairs(&self) -> CliResult<Vec<(Scalar, Scalar)>> {
        self.field(&self.atoms, "atoms")?
            .iter()
            .map(|a| match a {
                Atom::Pair(s, t) => Ok((s.clone(), t.clone())),
                Atom::Point(_) => Err(CliError::Usage("atomic2d atoms are [s, t] pairs".into())),
            })
            .collect()
    }

    pub fn to_1d(&self) -> CliResult<MomentOracle1D> {
        Ok(match self.kind {
            MeasureKind::Atomic1d => MomentOracle1D::Atomic(AtomicMeasure1D::new(
                self.points()?,
                self.field(&self.densities, "densities")?.clone(),
            )?),
            MeasureKind::Lebesgue01 => MomentOracle1D::Lebesgue01,
            MeasureKind::Beta => MomentOracle1D::beta_family(*self.field(&self.j, "j")?)?,
            MeasureKind::PrefixTable => MomentOracle1D::prefix_table(
                self.field(&self.moments, "moments")?.clone(),
                self.field(&self.support_bound, "support_bound")?.clone(),
            )?,
            _ => {
                return Err(CliError::Usage(
                    "expected a measure on the half-line (atomic1d, lebesgue01, beta, prefix_table)"
                        .into(),
                ))
            }
        })
    }

    pub fn to_atomic_1d(&self) -> CliResult<AtomicMeasure1D> {
        match self.to_1d()? {
            MomentOracle1D::Atomic(m) => Ok(m),
            _ => Err(CliError::Usage("expected an atomic1d measure".into())),
        }
    }

    pub fn to_2d(&self) -> CliResult<MomentOracle2D> {
        Ok(match self.kind {
            MeasureKind::Atomic2d => MomentOracle2D::Atomic(self.to_atomic_2d()?),
            MeasureKind::ArclengthSegment01 => MomentOracle2D::ArclengthSegment01,
            MeasureKind::Pushforward => MomentOracle2D::Pushforward {
                p: self.field(&self.p, "p")?.clone(),
                q: self.field(&self.q, "q")?.clone(),
                base: Box::new(self.field(&self.base, "base")?.to_1d()?),
            },
            _ => {
                return Err(CliError::Usage(
                    "expected a planar measure (atomic2d, arclength_segment01, pushforward)".into(),
                ))
            }
        })
    }

    /// Atomic planar measure: `atomic2d`, or a pushforward of `atomic1d`.
    pub fn to_atomic_2d(&self) -> CliResult<AtomicMeasure2D> {
        match self.kind {
            MeasureKind::Atomic2d => Ok(AtomicMeasure2D::new(
                self.pairs()?,
                self.field(&self.densities, "densities")?.clone(),
            )?),
            MeasureKind::Pushforward => Ok(pushforward_atomic(
                &self.field(&self.base, "base")?.to_atomic_1d()?,
                self.field(&self.p, "p")?,
                self.field(&self.q, "q")?,
            )?),
            _ => Err(CliError::Usage(
                "expected an atomic planar measure (atomic2d or pushforward of atomic1d)".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum TailKind {
    None,
    RationalFn,
    FromMeasure,
}

/// Tail rule: `rational_fn` takes `num`, `den` and an optional `start`
/// (default: right after the prefix); `from_measure` takes `measure`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailDesc {
    pub kind: TailKind,
    #[serde(default)]
    pub num: Option<RationalPolynomial>,
    #[serde(default)]
    pub den: Option<RationalPolynomial>,
    #[serde(default)]
    pub start: Option<usize>,
    #[serde(default)]
    pub measure: Option<MeasureDesc>,
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Shift1DKind {
    #[default]
    Weights,
    Bergman,
    Agler,
    Unweighted,
    FromMeasure,
}

/// 1-variable shift: explicit squared weights with an optional tail rule, or
/// a named shift (`bergman`, `agler` with `j`, `unweighted`, `from_measure`
/// with `measure`).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Shift1DDesc {
    #[serde(default)]
    pub kind: Shift1DKind,
    #[serde(default)]
    pub prefix_sq: Vec<Scalar>,
    #[serde(default)]
    pub tail: Option<TailDesc>,
    #[serde(default)]
    pub norm_bound_sq: Option<Scalar>,
    #[serde(default)]
    pub j: Option<i64>,
    #[serde(default)]
    pub measure: Option<MeasureDesc>,
}

impl Shift1DDesc {
    pub fn build(&self) -> CliResult<Shift1D> {
        match self.kind {
            Shift1DKind::Bergman => Ok(Shift1D::bergman()),
            Shift1DKind::Unweighted => Ok(Shift1D::unweighted()),
            Shift1DKind::Agler => match self.j {
                Some(j) if j >= 1 => Ok(Shift1D::agler(j)),
                _ => Err(CliError::Usage("agler shift needs an integer `j >= 1`".into())),
            },
            Shift1DKind::FromMeasure => match &self.measure {
                Some(m) => Ok(from_measure(&m.to_1d()?)?),
                None => Err(CliError::Usage("from_measure shift needs `measure`".into())),
            },
            Shift1DKind::Weights => self.build_weights(),
        }
    }

    fn build_weights(&self) -> CliResult<Shift1D> {
        let prefix = self.prefix_sq.clone();
        let tail = match &self.tail {
            None => Tail::None,
            Some(t) => match t.kind {
                TailKind::None => Tail::None,
                TailKind::RationalFn => Tail::RationalFn {
                    num: required(&t.num, "num", "rational_fn tail")?.clone(),
                    den: required(&t.den, "den", "rational_fn tail")?.clone(),
                    start: t.start.unwrap_or(prefix.len()),
                },
                TailKind::FromMeasure => Tail::FromMeasure(
                    required(&t.measure, "measure", "from_measure tail")?.to_1d()?,
                ),
            },
        };
        let bound = match (&self.norm_bound_sq, &tail) {
            (Some(b), _) => b.clone(),
            (None, Tail::None) => prefix.iter().max().cloned().unwrap_or_else(Scalar::one),
            (None, Tail::FromMeasure(m)) => {
                let sup = m.support_bound();
                prefix.iter().cloned().chain([sup]).max().unwrap()
            }
            (None, Tail::RationalFn { .. }) => {
                return Err(CliError::Usage(
                    "a rational_fn tail needs `norm_bound_sq`".into(),
                ))
            }
        };
        Ok(Shift1D::new(prefix, tail, bound)?)
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum Shift2DKind {
    #[default]
    Grids,
    SieBergman,
    HeltonHowe,
    Generator,
    Moments,
    Classical,
    Spherical,
    Poly,
}

/// 2-variable shift: explicit grids `alpha_sq[k1][k2]`, `beta_sq[k1][k2]`;
/// a named shift; a rational generator; the moment shift of a planar
/// measure; or an embedding (`classical`, `spherical`, `poly`) of a
/// 1-variable shift (`base`/`row0`) or measure (`measure`).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Shift2DDesc {
    #[serde(default)]
    pub kind: Shift2DKind,
    #[serde(default)]
    pub alpha_sq: Option<Vec<Vec<Scalar>>>,
    #[serde(default)]
    pub beta_sq: Option<Vec<Vec<Scalar>>>,
    #[serde(default)]
    pub alpha_num: Option<Vec<Vec<Scalar>>>,
    #[serde(default)]
    pub alpha_den: Option<Vec<Vec<Scalar>>>,
    #[serde(default)]
    pub beta_num: Option<Vec<Vec<Scalar>>>,
    #[serde(default)]
    pub beta_den: Option<Vec<Vec<Scalar>>>,
    #[serde(default, alias = "row0")]
    pub base: Option<Box<Shift1DDesc>>,
    #[serde(default)]
    pub measure: Option<MeasureDesc>,
    #[serde(default)]
    pub c: Option<Scalar>,
    #[serde(default)]
    pub p: Option<RationalPolynomial>,
    #[serde(default)]
    pub q: Option<RationalPolynomial>,
}

fn required<'a, T>(field: &'a Option<T>, name: &str, kind: &str) -> CliResult<&'a T> {
    field
        .as_ref()
        .ok_or_else(|| CliError::Usage(format!("{kind} needs `{name}`")))
}

impl Shift2DDesc {
    pub fn is_embedding(&self) -> bool {
        matches!(
            self.kind,
            Shift2DKind::Classical | Shift2DKind::Spherical | Shift2DKind::Poly
        )
    }

    /// Embedding spec for `classical`, `spherical` and `poly` descriptors.
    pub fn embedding_spec(&self) -> CliResult<EmbeddingSpec> {
        let source = match (&self.base, &self.measure) {
            (Some(b), None) => EmbeddingSource::Shift(b.build()?),
            (None, Some(m)) => EmbeddingSource::Measure(m.to_1d()?),
            _ => {
                return Err(CliError::Usage(
                    "an embedding needs exactly one of `base` (alias `row0`) and `measure`".into(),
                ))
            }
        };
        let kind = match self.kind {
            Shift2DKind::Classical => EmbeddingKind::Classical,
            Shift2DKind::Spherical => EmbeddingKind::Spherical {
                c: self.c.clone().unwrap_or_else(Scalar::one),
            },
            Shift2DKind::Poly => EmbeddingKind::Poly {
                p: required(&self.p, "p", "poly embedding")?.clone(),
                q: required(&self.q, "q", "poly embedding")?.clone(),
            },
            _ => return Err(CliError::Usage("not an embedding descriptor".into())),
        };
        Ok(EmbeddingSpec { kind, source })
    }

    /// Runs an embedding descriptor; `strict_row0` keeps the upfront
    /// strictly-increasing check of the iterative construction.
    pub fn embed(&self, window: usize, strict_row0: bool) -> CliResult<SphericalOutcome> {
        let spec = self.embedding_spec()?;
        if let (EmbeddingKind::Spherical { c }, EmbeddingSource::Shift(s)) =
            (&spec.kind, &spec.source)
        {
            let options = SphericalOptions {
                require_increasing_row0: strict_row0,
            };
            return Ok(spherical_embed_iterative_from(s, c, window, options)?);
        }
        Ok(embed::embed(&spec, window)?)
    }

    pub fn build(&self, window: usize) -> CliResult<Shift2D> {
        let bivariate = |f: &Option<Vec<Vec<Scalar>>>, name: &str| {
            required(f, name, "generator shift").map(|m| BivariatePolynomial::new(m.clone()))
        };
        Ok(match self.kind {
            Shift2DKind::Grids => Shift2D::from_grids(
                required(&self.alpha_sq, "alpha_sq", "grid shift")?.clone(),
                required(&self.beta_sq, "beta_sq", "grid shift")?.clone(),
            )?,
            Shift2DKind::SieBergman => Shift2D::sie_bergman(window),
            Shift2DKind::HeltonHowe => Shift2D::helton_howe(window),
            Shift2DKind::Generator => Shift2D::from_generator(
                Generator::Rational {
                    alpha_num: bivariate(&self.alpha_num, "alpha_num")?,
                    alpha_den: bivariate(&self.alpha_den, "alpha_den")?,
                    beta_num: bivariate(&self.beta_num, "beta_num")?,
                    beta_den: bivariate(&self.beta_den, "beta_den")?,
                },
                window,
            )?,
            Shift2DKind::Moments => {
                let mu = required(&self.measure, "measure", "moments shift")?.to_2d()?;
                Shift2D::from_generator(Generator::Moments(mu), window)?
            }
            Shift2DKind::Classical | Shift2DKind::Spherical | Shift2DKind::Poly => {
                match self.embed(window, true)? {
                    SphericalOutcome::Embedded(s) => s,
                    SphericalOutcome::Stalled(r) => {
                        return Err(CliError::Stalled(r.location.unwrap_or((0, 0))))
                    }
                }
            }
        })
    }
}

/// Parses an inline JSON coefficient list such as `[0, "1/2", 1]`.
pub fn parse_poly(label: &str, text: &str) -> CliResult<RationalPolynomial> {
    Source {
        label: label.into(),
        text: text.into(),
    }
    .parse()
}

/// Parses an inline JSON list of rationals.
pub fn parse_scalars(label: &str, text: &str) -> CliResult<Vec<Scalar>> {
    Source {
        label: label.into(),
        text: text.into(),
    }
    .parse()
}

/// Replaces every `"x"` string in a descriptor by `x`.
pub fn substitute(template: &Value, x: &Scalar) -> Value {
    match template {
        Value::String(s) if s == "x" => Value::String(x.to_string()),
        Value::Array(items) => Value::Array(items.iter().map(|v| substitute(v, x)).collect()),
        Value::Object(map) => Value::Object(
            map.iter()
                .map(|(k, v)| (k.clone(), substitute(v, x)))
                .collect(),
        ),
        other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use shiftlab_core::exact::q;

    fn src(text: &str) -> Source {
        Source {
            label: "t.json".into(),
            text: text.into(),
        }
    }

    #[test]
    fn spec_shift_descriptor_parses() {
        let d: Shift1DDesc = src(
            r#"{"prefix_sq":["9/16"],"tail":{"kind":"rational_fn","num":[1,1],"den":[2,1],"start":1},"norm_bound_sq":"1"}"#,
        )
        .parse()
        .unwrap();
        let s = d.build().unwrap();
        assert_eq!(s.weights_sq(3).unwrap(), vec![q(9, 16), q(2, 3), q(3, 4)]);
    }

    #[test]
    fn measure_descriptors_parse() {
        let m: MeasureDesc =
            src(r#"{"kind":"atomic1d","atoms":["1/3","1/2","1"],"densities":["1/3","1/3","1/3"]}"#)
                .parse()
                .unwrap();
        assert_eq!(m.to_1d().unwrap().moment(2).unwrap(), q(49, 108));
        let m: MeasureDesc = src(r#"{"kind":"beta","j":4}"#).parse().unwrap();
        assert_eq!(m.to_1d().unwrap().moment(1).unwrap(), q(1, 4));
        let m: MeasureDesc = src(
            r#"{"kind":"pushforward","p":[0,0,1],"q":[0,0,0,1],"base":{"kind":"lebesgue01"}}"#,
        )
        .parse()
        .unwrap();
        assert_eq!(m.to_2d().unwrap().moment(1, 1).unwrap(), q(1, 6));
    }

    #[test]
    fn schema_errors_name_the_field_and_line() {
        let err = src("{\n  \"prefix_sq\": [\"1/2\", 0.5]\n}")
            .parse::<Shift1DDesc>()
            .unwrap_err()
            .to_string();
        assert!(err.contains("prefix_sq[1]"), "{err}");
        assert!(err.contains("line 2"), "{err}");
        let err = src(r#"{"kind":"beta","k":4}"#)
            .parse::<MeasureDesc>()
            .unwrap_err()
            .to_string();
        assert!(err.contains("unknown field"), "{err}");
    }

    #[test]
    fn two_variable_descriptors_build() {
        let d: Shift2DDesc = src(r#"{"kind":"sie_bergman"}"#).parse().unwrap();
        assert_eq!(d.build(4).unwrap().alpha_sq(1, 1).unwrap(), q(2, 4));
        let d: Shift2DDesc = src(r#"{"alpha_sq":[["1"]],"beta_sq":[["1/2"]]}"#).parse().unwrap();
        assert_eq!(d.build(9).unwrap().window(), 1);
        let d: Shift2DDesc =
            src(r#"{"kind":"spherical","c":"1","row0":{"kind":"bergman"}}"#).parse().unwrap();
        assert_eq!(d.build(5).unwrap().beta_sq(0, 0).unwrap(), q(1, 2));
        let d: Shift2DDesc = src(
            r#"{"kind":"generator","alpha_num":[["1"],["1"]],"alpha_den":[["2","1"],["1"]],"beta_num":[["1","1"]],"beta_den":[["2","1"],["1"]]}"#,
        )
        .parse()
        .unwrap();
        assert_eq!(d.build(4).unwrap(), Shift2D::sie_bergman(4));
    }

    #[test]
    fn placeholder_substitution() {
        let v: Value = serde_json::json!({"prefix_sq": ["x", "1/2"], "n": 3});
        let out = substitute(&v, &q(2, 3));
        assert_eq!(out["prefix_sq"][0], "2/3");
        assert_eq!(out["n"], 3);
    }
}
