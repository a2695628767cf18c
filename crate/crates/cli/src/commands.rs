//! Subcommands and their reports.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use shiftlab_core::embed::{recover_densities, SphericalOutcome};
use shiftlab_core::exact::Scalar;
use shiftlab_core::measures::{marginal, pushforward_moments, Axis, MomentOracle1D};
use shiftlab_core::shift1d::{
    curto_park_measures, detect_recursion, from_measure, k_hyponormal, power_decompose, Shift1D,
    DEFAULT_WINDOW_1D,
};
use shiftlab_core::shift2d::{
    k_hyponormal_2v, moments, power_components, restrict, six_point, spherical_check,
    triangle_points, Shift2D, DEFAULT_BASE_BOUND_2D,
};

use crate::descriptors::{parse_poly, parse_scalars, MeasureDesc, Shift1DDesc, Shift2DDesc, Source};
use crate::error::{CliError, CliResult};
use crate::fixtures;
use crate::report::{grid_value, Report, Table};
use crate::threshold::{bisect, Family, FamilyFile, Op, Predicate};

const WINDOW_HELP: &str = "Defaults: 1-variable sweeps check 25 base points; 2-variable sweeps \
check every base point with u1 + u2 <= 15. Every report echoes the window it used.";

#[derive(Debug, Parser)]
#[command(
    name = "shiftlab",
    version,
    about = "Exact moments, embeddings and k-hyponormality tests for weighted shifts",
    after_help = WINDOW_HELP
)]
pub struct Cli {
    /// Emit the report as JSON
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,

    /// Emit the report's table as CSV
    #[arg(long, global = true)]
    pub csv: bool,

    /// Record wall-clock time in the report
    #[arg(long, global = true)]
    pub timing: bool,

    #[command(subcommand)]
    pub command: Command,
}

/// A 1-variable shift, given directly or by its Berger measure.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Shift1DArg {
    /// Shift descriptor (file, `-` for stdin, or inline JSON)
    #[arg(long)]
    shift: Option<String>,

    /// Berger measure descriptor
    #[arg(long)]
    measure: Option<String>,
}

impl Shift1DArg {
    fn load(&self) -> CliResult<(Shift1D, serde_json::Value)> {
        if let Some(s) = &self.shift {
            let src = Source::load(s)?;
            let shift = src.parse::<Shift1DDesc>()?.build()?;
            return Ok((shift, json!({"shift": src.value()?})));
        }
        let src = Source::load(self.measure.as_deref().expect("clap enforces one source"))?;
        let sigma = src.parse::<MeasureDesc>()?.to_1d()?;
        Ok((from_measure(&sigma)?, json!({"measure": src.value()?})))
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum EmbedKind {
    Classical,
    Spherical,
    Poly,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum AxisArg {
    X,
    Y,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Moments and squared weights of a 1-variable shift
    Moments1 {
        #[command(flatten)]
        source: Shift1DArg,
        /// Number of moments
        #[arg(long, default_value_t = DEFAULT_WINDOW_1D)]
        window: usize,
    },
    /// Moment table (k1 + k2 <= window) of a 2-variable shift or planar measure
    Moments2 {
        /// 2-variable shift descriptor
        #[arg(long, conflicts_with = "measure", required_unless_present = "measure")]
        shift: Option<String>,
        /// Planar measure descriptor
        #[arg(long)]
        measure: Option<String>,
        /// Total degree of the table
        #[arg(long, default_value_t = 8)]
        window: usize,
    },
    /// k-hyponormality of a 1-variable shift
    Khypo1 {
        #[command(flatten)]
        source: Shift1DArg,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Number of base points
        #[arg(long, default_value_t = DEFAULT_WINDOW_1D)]
        window: usize,
    },
    /// k-hyponormality of a 2-variable shift
    Khypo2 {
        #[arg(long)]
        shift: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Base points u1 + u2 <= window
        #[arg(long, default_value_t = DEFAULT_BASE_BOUND_2D)]
        window: usize,
    },
    /// Six-point hyponormality test
    Sixpoint {
        #[arg(long)]
        shift: String,
        /// Points k1 + k2 <= window
        #[arg(long, default_value_t = DEFAULT_BASE_BOUND_2D)]
        window: usize,
    },
    /// Build a classical, spherical or polynomial embedding
    Embed {
        /// Full embedding descriptor; replaces --kind and its inputs
        #[arg(long, conflicts_with_all = ["kind", "row0", "measure"])]
        spec: Option<String>,
        #[arg(long, required_unless_present = "spec")]
        kind: Option<EmbedKind>,
        /// Rational constant for spherical embeddings
        #[arg(long, default_value = "1")]
        c: Scalar,
        /// 1-variable shift descriptor (row 0 / base shift)
        #[arg(long, conflicts_with = "measure")]
        row0: Option<String>,
        /// Berger measure descriptor
        #[arg(long)]
        measure: Option<String>,
        /// First coordinate polynomial, e.g. '[0, 1]'
        #[arg(long)]
        p: Option<String>,
        /// Second coordinate polynomial
        #[arg(long)]
        q: Option<String>,
        /// Grid size
        #[arg(long, default_value_t = 8)]
        window: usize,
        /// Run the iterative construction on row-0 data that is not strictly increasing
        #[arg(long)]
        allow_nonincreasing: bool,
    },
    /// Restriction to the span of e_(m i + p, n j + q)
    Restrict {
        #[arg(long)]
        shift: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        p: usize,
        #[arg(long, default_value_t = 0)]
        q: usize,
        /// Grid size of the output
        #[arg(long, default_value_t = 8)]
        window: usize,
        /// Also test k-hyponormality of the restriction
        #[arg(long)]
        k: Option<usize>,
        /// Base-point bound for --k
        #[arg(long, default_value_t = DEFAULT_BASE_BOUND_2D)]
        bound: usize,
    },
    /// Components of the (m, n)-power
    Power {
        #[arg(long)]
        shift: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Grid size of each component
        #[arg(long, default_value_t = 6)]
        window: usize,
        /// Also test k-hyponormality of every component
        #[arg(long)]
        k: Option<usize>,
        /// Base-point bound for --k
        #[arg(long, default_value_t = DEFAULT_BASE_BOUND_2D)]
        bound: usize,
    },
    /// Components of the m-th power of a 1-variable shift
    Decompose {
        #[command(flatten)]
        source: Shift1DArg,
        #[arg(long)]
        m: usize,
        /// Weights per component
        #[arg(long, default_value_t = 10)]
        window: usize,
    },
    /// Berger measures of the components of the m-th power
    CurtoPark {
        /// Atomic measure descriptor
        #[arg(long)]
        measure: String,
        #[arg(long)]
        m: usize,
    },
    /// Least-order linear recursion of the moment sequence
    Recursion {
        #[command(flatten)]
        source: Shift1DArg,
        /// Number of moments fitted
        #[arg(long, default_value_t = DEFAULT_WINDOW_1D)]
        window: usize,
        #[arg(long, default_value_t = 8)]
        max_order: usize,
    },
    /// Moments of the image of a measure under r -> (p(r), q(r))
    Pushforward {
        #[arg(long)]
        measure: String,
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        /// Total degree of the moment table
        #[arg(long, default_value_t = 6)]
        window: usize,
    },
    /// Marginal of an atomic planar measure
    Marginal {
        #[arg(long)]
        measure: String,
        #[arg(long, value_enum)]
        axis: AxisArg,
    },
    /// Densities of a spherical shift at the given row-0 atoms
    Recover {
        #[arg(long)]
        shift: String,
        /// JSON list of atoms, e.g. '["1/3", "1/2", "1"]'
        #[arg(long)]
        atoms: String,
        /// Grid size used to materialize generator-backed shifts
        #[arg(long, default_value_t = 8)]
        window: usize,
    },
    /// Constant c with alpha^2 + beta^2 = c on the whole grid, if any
    SphericalCheck {
        #[arg(long)]
        shift: String,
        #[arg(long, default_value_t = 8)]
        window: usize,
    },
    /// Bisect a one-parameter family for the boundary of a property
    Threshold {
        /// Family file: {"shift1d" | "shift2d": descriptor with "x", "lo", "hi", "candidate"}
        #[arg(long)]
        family: String,
        #[arg(long, value_enum)]
        op: Op,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Base points (khypo1) or bound u1 + u2 (khypo2, sixpoint)
        #[arg(long)]
        window: Option<usize>,
        /// Stop once the interval is at most 1/precision wide
        #[arg(long, default_value_t = 1_000_000)]
        precision: u64,
        #[arg(long)]
        lo: Option<Scalar>,
        #[arg(long)]
        hi: Option<Scalar>,
        /// Candidate boundary to confirm; defaults to the simplest rational found
        #[arg(long)]
        candidate: Option<Scalar>,
        /// Confirmation offset above the candidate
        #[arg(long, default_value = "1/1000")]
        margin: Scalar,
        /// Test every component of the (m, n)-power, as "m,n"
        #[arg(long, value_parser = parse_pair)]
        power: Option<(usize, usize)>,
        /// Restrict first, as "m,n,p,q"
        #[arg(long, value_parser = parse_quad)]
        restrict: Option<(usize, usize, usize, usize)>,
    },
    /// Run the bundled reference examples
    Fixtures {
        /// Write the bundled descriptors into this directory
        #[arg(long)]
        dump: Option<PathBuf>,
        /// Seed for the randomized agreement checks
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Number of randomized cases
        #[arg(long, default_value_t = 10)]
        cases: usize,
    },
}

fn parse_list(s: &str, len: usize) -> Result<Vec<usize>, String> {
    let parts: Result<Vec<usize>, _> = s.split(',').map(|p| p.trim().parse()).collect();
    match parts {
        Ok(v) if v.len() == len => Ok(v),
        _ => Err(format!("expected {len} comma-separated integers")),
    }
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    parse_list(s, 2).map(|v| (v[0], v[1]))
}

fn parse_quad(s: &str) -> Result<(usize, usize, usize, usize), String> {
    parse_list(s, 4).map(|v| (v[0], v[1], v[2], v[3]))
}

fn load_2d(arg: &str, window: usize) -> CliResult<(Shift2D, serde_json::Value)> {
    let src = Source::load(arg)?;
    let shift = src.parse::<Shift2DDesc>()?.build(window)?;
    Ok((shift, src.value()?))
}

fn grid_table(shift: &Shift2D) -> Table {
    let mut t = Table::new(["k1", "k2", "alpha_sq", "beta_sq"]);
    for (i, (ar, br)) in shift.alpha_grid().iter().zip(shift.beta_grid()).enumerate() {
        for (j, (a, b)) in ar.iter().zip(br).enumerate() {
            t.push([i.to_string(), j.to_string(), a.to_string(), b.to_string()]);
        }
    }
    t
}

fn grid_json(shift: &Shift2D) -> serde_json::Value {
    json!({
        "alpha_sq": grid_value(shift.alpha_grid()),
        "beta_sq": grid_value(shift.beta_grid()),
    })
}

fn base_bound(bound: usize) -> serde_json::Value {
    json!({"base_points": format!("u1 + u2 <= {bound}")})
}

fn base_count(count: usize) -> serde_json::Value {
    json!({"base_points": format!("u = 0..{}", count.saturating_sub(1))})
}

fn verdict_table<B: std::fmt::Debug>(
    holds: bool,
    checked: usize,
    failure: Option<(B, &[Scalar])>,
) -> Table {
    let mut t = Table::new(["holds", "base_points_checked", "first_failure", "certificate"]);
    let (base, cert) = match failure {
        Some((b, c)) => (
            format!("{b:?}"),
            c.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
        ),
        None => (String::new(), String::new()),
    };
    t.push([holds.to_string(), checked.to_string(), base, cert]);
    t
}

impl Command {
    pub fn run(&self) -> CliResult<Report> {
        match self {
            Command::Moments1 { source, window } => {
                let (shift, inputs) = source.load()?;
                let gammas = shift.moments(*window)?;
                let weights = shift.weights_sq(*window)?;
                let mut t = Table::new(["k", "weight_sq", "moment"]);
                for (k, (w, g)) in weights.iter().zip(&gammas).enumerate() {
                    t.push([k.to_string(), w.to_string(), g.to_string()]);
                }
                Ok(Report::new("moments1")
                    .input("source", inputs)
                    .window(json!({"count": window}))
                    .result(json!({"weights_sq": weights, "moments": gammas}))
                    .table(t))
            }
            Command::Moments2 {
                shift,
                measure,
                window,
            } => {
                let (rows, input) = match (shift, measure) {
                    (Some(s), _) => {
                        let (shift, v) = load_2d(s, window + 1)?;
                        (moments(&shift, *window)?.rows().to_vec(), json!({"shift": v}))
                    }
                    (None, Some(m)) => {
                        let src = Source::load(m)?;
                        let mu = src.parse::<MeasureDesc>()?.to_2d()?;
                        let full = mu.moment_table(*window, *window)?;
                        let rows = (0..=*window).map(|i| full[i][..=window - i].to_vec()).collect();
                        (rows, json!({"measure": src.value()?}))
                    }
                    (None, None) => unreachable!("clap requires a source"),
                };
                let mut t = Table::new(["k1", "k2", "moment"]);
                for (i, j) in triangle_points(*window) {
                    t.push([i.to_string(), j.to_string(), rows[i][j].to_string()]);
                }
                Ok(Report::new("moments2")
                    .input("source", input)
                    .window(json!({"degree": format!("k1 + k2 <= {window}")}))
                    .result(json!({"moments": rows}))
                    .table(t))
            }
            Command::Khypo1 { source, k, window } => {
                let (shift, inputs) = source.load()?;
                let v = k_hyponormal(&shift, *k, *window)?;
                let t = verdict_table(
                    v.holds,
                    v.base_points_checked,
                    v.first_failure
                        .as_ref()
                        .map(|f| (f.base, f.verdict.certificate.as_slice())),
                );
                Ok(Report::new("khypo1")
                    .input("source", inputs)
                    .input("k", k)
                    .window(base_count(*window))
                    .holds(v.holds)
                    .result(&v)
                    .table(t))
            }
            Command::Khypo2 { shift, k, window } => {
                let (s, input) = load_2d(shift, window + 2 * k + 1)?;
                let v = k_hyponormal_2v(&s, *k, *window)?;
                let t = verdict_table(
                    v.holds,
                    v.base_points_checked,
                    v.first_failure
                        .as_ref()
                        .map(|f| (f.base, f.verdict.certificate.as_slice())),
                );
                Ok(Report::new("khypo2")
                    .input("shift", input)
                    .input("k", k)
                    .window(base_bound(*window))
                    .holds(v.holds)
                    .result(&v)
                    .table(t))
            }
            Command::Sixpoint { shift, window } => {
                let (s, input) = load_2d(shift, window + 2)?;
                let r = six_point(&s, *window)?;
                let mut t = Table::new([
                    "holds",
                    "points_checked",
                    "boundary_points",
                    "first_failure",
                    "determinant",
                ]);
                let (point, det) = match &r.first_failure {
                    Some(f) => (format!("{:?}", f.point), format!("{:e}", f.determinant)),
                    None => (String::new(), String::new()),
                };
                t.push([
                    r.holds.to_string(),
                    r.points_checked.to_string(),
                    r.boundary_points.to_string(),
                    point,
                    det,
                ]);
                Ok(Report::new("sixpoint")
                    .input("shift", input)
                    .window(json!({"points": format!("k1 + k2 <= {window}")}))
                    .holds(r.holds)
                    .result(&r)
                    .table(t))
            }
            Command::Embed {
                spec,
                kind,
                c,
                row0,
                measure,
                p,
                q,
                window,
                allow_nonincreasing,
            } => {
                let src = match spec {
                    Some(s) => Source::load(s)?,
                    None => {
                        let mut v = json!({
                            "kind": match kind.expect("clap requires --kind") {
                                EmbedKind::Classical => "classical",
                                EmbedKind::Spherical => "spherical",
                                EmbedKind::Poly => "poly",
                            },
                            "c": c.to_string(),
                        });
                        if let Some(r) = row0 {
                            v["base"] = Source::load(r)?.value()?;
                        }
                        if let Some(m) = measure {
                            v["measure"] = Source::load(m)?.value()?;
                        }
                        if let Some(p) = p {
                            v["p"] = serde_json::to_value(parse_poly("--p", p)?).unwrap();
                        }
                        if let Some(q) = q {
                            v["q"] = serde_json::to_value(parse_poly("--q", q)?).unwrap();
                        }
                        Source {
                            label: "<arguments>".into(),
                            text: v.to_string(),
                        }
                    }
                };
                let desc = src.parse::<Shift2DDesc>()?;
                if !desc.is_embedding() {
                    return Err(CliError::Usage(
                        "embedding kind must be classical, spherical or poly".into(),
                    ));
                }
                let report = Report::new("embed")
                    .input("spec", src.value()?)
                    .window(json!({"grid": format!("{window} x {window}")}));
                Ok(match desc.embed(*window, !allow_nonincreasing)? {
                    SphericalOutcome::Embedded(s) => {
                        let mut result = grid_json(&s);
                        result["spherical_c"] = json!(spherical_check(&s));
                        report.holds(true).result(result).table(grid_table(&s))
                    }
                    SphericalOutcome::Stalled(r) => {
                        let mut t = Table::new(["stalled", "k1", "k2", "cause", "beta_sq"]);
                        let (k1, k2) = r.location.unwrap_or((0, 0));
                        t.push([
                            "true".to_string(),
                            k1.to_string(),
                            k2.to_string(),
                            serde_json::to_value(r.cause)
                                .unwrap()
                                .as_str()
                                .unwrap_or("")
                                .to_string(),
                            r.beta_sq.as_ref().map(ToString::to_string).unwrap_or_default(),
                        ]);
                        report.holds(false).result(json!({"stall": r})).table(t)
                    }
                })
            }
            Command::Restrict {
                shift,
                m,
                n,
                p,
                q,
                window,
                k,
                bound,
            } => {
                let need = (m * (window + 1) + p).max(n * (window + 1) + q) + 2;
                let (s, input) = load_2d(shift, need)?;
                let r = restrict(&s, *m, *n, *p, *q)?;
                let grid = Shift2D::from_grids(
                    (0..*window)
                        .map(|i| (0..*window).map(|j| r.alpha_sq(i, j)).collect())
                        .collect::<Result<_, _>>()?,
                    (0..*window)
                        .map(|i| (0..*window).map(|j| r.beta_sq(i, j)).collect())
                        .collect::<Result<_, _>>()?,
                )?;
                let mut report = Report::new("restrict")
                    .input("shift", input)
                    .input("restriction", json!({"m": m, "n": n, "p": p, "q": q}));
                let mut result = grid_json(&grid);
                if let Some(k) = k {
                    let v = k_hyponormal_2v(&r, *k, *bound)?;
                    report = report.input("k", k).holds(v.holds).window(json!({
                        "grid": format!("{window} x {window}"),
                        "base_points": format!("u1 + u2 <= {bound}"),
                    }));
                    result["verdict"] = serde_json::to_value(&v).unwrap();
                } else {
                    report = report.window(json!({"grid": format!("{window} x {window}")}));
                }
                Ok(report.result(result).table(grid_table(&grid)))
            }
            Command::Power {
                shift,
                m,
                n,
                window,
                k,
                bound,
            } => {
                let need = m.max(n) * (window + 1) + 2;
                let (s, input) = load_2d(shift, need)?;
                let comps = power_components(&s, *m, *n)?;
                let mut t = Table::new(["p", "q", "k1", "k2", "alpha_sq", "beta_sq", "holds"]);
                let mut results = Vec::new();
                let mut all = true;
                for (idx, c) in comps.iter().enumerate() {
                    let (p, q) = (idx / n, idx % n);
                    let verdict = match k {
                        Some(k) => Some(k_hyponormal_2v(c, *k, *bound)?),
                        None => None,
                    };
                    let holds = verdict.as_ref().map(|v| v.holds);
                    all &= holds.unwrap_or(true);
                    let mut alpha = Vec::new();
                    let mut beta = Vec::new();
                    for i in 0..*window {
                        let mut ar = Vec::new();
                        let mut br = Vec::new();
                        for j in 0..*window {
                            let a = c.alpha_sq(i, j)?;
                            let b = c.beta_sq(i, j)?;
                            t.push([
                                p.to_string(),
                                q.to_string(),
                                i.to_string(),
                                j.to_string(),
                                a.to_string(),
                                b.to_string(),
                                holds.map(|h| h.to_string()).unwrap_or_default(),
                            ]);
                            ar.push(a);
                            br.push(b);
                        }
                        alpha.push(ar);
                        beta.push(br);
                    }
                    results.push(json!({
                        "p": p, "q": q,
                        "alpha_sq": alpha, "beta_sq": beta,
                        "verdict": verdict,
                    }));
                }
                let mut report = Report::new("power")
                    .input("shift", input)
                    .input("power", json!({"m": m, "n": n}))
                    .result(json!({"components": results}))
                    .table(t);
                report = match k {
                    Some(k) => report.input("k", k).holds(all).window(json!({
                        "grid": format!("{window} x {window}"),
                        "base_points": format!("u1 + u2 <= {bound}"),
                    })),
                    None => report.window(json!({"grid": format!("{window} x {window}")})),
                };
                Ok(report)
            }
            Command::Decompose { source, m, window } => {
                let (shift, inputs) = source.load()?;
                let comps = power_decompose(&shift, *m, *window)?;
                let mut t = Table::new(["component", "k", "weight_sq", "moment"]);
                let mut results = Vec::new();
                for (i, c) in comps.iter().enumerate() {
                    let w = c.weights_sq(*window)?;
                    let g = c.moments(*window)?;
                    for (k, (wk, gk)) in w.iter().zip(&g).enumerate() {
                        t.push([i.to_string(), k.to_string(), wk.to_string(), gk.to_string()]);
                    }
                    results.push(json!({"component": i, "weights_sq": w, "moments": g}));
                }
                Ok(Report::new("decompose")
                    .input("source", inputs)
                    .input("m", m)
                    .window(json!({"count": window}))
                    .result(json!({"components": results}))
                    .table(t))
            }
            Command::CurtoPark { measure, m } => {
                let src = Source::load(measure)?;
                let sigma = src.parse::<MeasureDesc>()?.to_atomic_1d()?;
                let comps = curto_park_measures(&sigma, *m)?;
                let mut t = Table::new(["component", "atom", "density"]);
                for (i, c) in comps.iter().enumerate() {
                    for (a, d) in c.iter() {
                        t.push([i.to_string(), a.to_string(), d.to_string()]);
                    }
                }
                Ok(Report::new("curto-park")
                    .input("measure", src.value()?)
                    .input("m", m)
                    .result(json!({"components": comps}))
                    .table(t))
            }
            Command::Recursion {
                source,
                window,
                max_order,
            } => {
                let (shift, inputs) = source.load()?;
                let r = detect_recursion(&shift.moments(*window)?, *max_order);
                let mut t = Table::new(["found", "order", "coefficients", "atoms"]);
                t.push([
                    r.found.to_string(),
                    r.order.map(|o| o.to_string()).unwrap_or_default(),
                    r.coefficients
                        .iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(" "),
                    r.atoms
                        .as_ref()
                        .map(|a| {
                            a.iter()
                                .map(|(s, d)| format!("{s}:{d}"))
                                .collect::<Vec<_>>()
                                .join(" ")
                        })
                        .unwrap_or_default(),
                ]);
                Ok(Report::new("recursion")
                    .input("source", inputs)
                    .input("max_order", max_order)
                    .window(json!({"moments": window}))
                    .holds(r.found)
                    .result(&r)
                    .table(t))
            }
            Command::Pushforward {
                measure,
                p,
                q,
                window,
            } => {
                let src = Source::load(measure)?;
                let desc = src.parse::<MeasureDesc>()?;
                let sigma = desc.to_1d()?;
                let (pp, qp) = (parse_poly("--p", p)?, parse_poly("--q", q)?);
                let mu = pushforward_moments(&sigma, &pp, &qp)?;
                let mut t = Table::new(["k1", "k2", "moment"]);
                let mut rows: Vec<Vec<Scalar>> = vec![Vec::new(); window + 1];
                for (i, j) in triangle_points(*window) {
                    let v = mu.moment(i, j)?;
                    t.push([i.to_string(), j.to_string(), v.to_string()]);
                    rows[i].push(v);
                }
                let mut result = json!({"moments": rows});
                if let MomentOracle1D::Atomic(a) = &sigma {
                    let image = shiftlab_core::measures::pushforward_atomic(a, &pp, &qp)?;
                    result["atomic"] = serde_json::to_value(image).unwrap();
                }
                Ok(Report::new("pushforward")
                    .input("measure", src.value()?)
                    .input("p", &pp)
                    .input("q", &qp)
                    .window(json!({"degree": format!("k1 + k2 <= {window}")}))
                    .result(result)
                    .table(t))
            }
            Command::Marginal { measure, axis } => {
                let src = Source::load(measure)?;
                let mu = src.parse::<MeasureDesc>()?.to_atomic_2d()?;
                let axis = match axis {
                    AxisArg::X => Axis::X,
                    AxisArg::Y => Axis::Y,
                };
                let m = marginal(&mu, axis);
                let mut t = Table::new(["atom", "density"]);
                for (a, d) in m.iter() {
                    t.push([a.to_string(), d.to_string()]);
                }
                Ok(Report::new("marginal")
                    .input("measure", src.value()?)
                    .input("axis", axis)
                    .result(&m)
                    .table(t))
            }
            Command::Recover {
                shift,
                atoms,
                window,
            } => {
                let (s, input) = load_2d(shift, *window)?;
                let atoms = parse_scalars("--atoms", atoms)?;
                let mu = recover_densities(&s, &atoms)?;
                let mut t = Table::new(["s", "t", "density"]);
                for ((a, b), d) in mu.iter() {
                    t.push([a.to_string(), b.to_string(), d.to_string()]);
                }
                Ok(Report::new("recover")
                    .input("shift", input)
                    .input("atoms", &atoms)
                    .window(json!({"grid": format!("{} x {}", s.window(), s.window())}))
                    .result(&mu)
                    .table(t))
            }
            Command::SphericalCheck { shift, window } => {
                let (s, input) = load_2d(shift, *window)?;
                let c = spherical_check(&s);
                let mut t = Table::new(["spherical", "c"]);
                t.push([
                    c.is_some().to_string(),
                    c.as_ref().map(ToString::to_string).unwrap_or_default(),
                ]);
                Ok(Report::new("spherical-check")
                    .input("shift", input)
                    .window(json!({"grid": format!("{} x {}", s.window(), s.window())}))
                    .holds(c.is_some())
                    .result(json!({"c": c}))
                    .table(t))
            }
            Command::Threshold {
                family,
                op,
                k,
                window,
                precision,
                lo,
                hi,
                candidate,
                margin,
                power,
                restrict,
            } => {
                let src = Source::load(family)?;
                let file = src.parse::<FamilyFile>()?;
                let fam = Family::from_file(&file)?;
                let window = window.unwrap_or(match op {
                    Op::Khypo1 => DEFAULT_WINDOW_1D,
                    _ => DEFAULT_BASE_BOUND_2D,
                });
                let pred = Predicate {
                    op: *op,
                    k: *k,
                    window,
                    power: *power,
                    restriction: *restrict,
                };
                let lo = lo.clone().or(file.lo.clone()).ok_or_else(|| {
                    CliError::Usage("threshold needs `lo` (flag or family file)".into())
                })?;
                let hi = hi.clone().or(file.hi.clone()).ok_or_else(|| {
                    CliError::Usage("threshold needs `hi` (flag or family file)".into())
                })?;
                let candidate = candidate.clone().or(file.candidate.clone());
                let out = bisect(&fam, &pred, lo, hi, *precision, candidate, margin.clone())?;
                let c = &out.confirmation;
                let mut t = Table::new([
                    "lo",
                    "hi",
                    "steps",
                    "candidate",
                    "holds_at_candidate",
                    "holds_above",
                    "confirmed",
                ]);
                t.push([
                    out.lo.to_string(),
                    out.hi.to_string(),
                    out.steps.to_string(),
                    c.candidate.to_string(),
                    c.holds_at_candidate.to_string(),
                    c.holds_above.to_string(),
                    c.confirmed.to_string(),
                ]);
                let window_desc = match op {
                    Op::Khypo1 => base_count(window),
                    _ => base_bound(window),
                };
                Ok(Report::new("threshold")
                    .input("family", src.value()?)
                    .input("predicate", &pred)
                    .input("precision", precision)
                    .window(window_desc)
                    .holds(c.confirmed)
                    .result(&out)
                    .table(t))
            }
            Command::Fixtures { dump, seed, cases } => {
                if let Some(dir) = dump {
                    std::fs::create_dir_all(dir).map_err(|e| CliError::Io {
                        path: dir.display().to_string(),
                        message: e.to_string(),
                    })?;
                    for (name, text) in fixtures::FILES {
                        let path = dir.join(name);
                        std::fs::write(&path, format!("{text}\n")).map_err(|e| CliError::Io {
                            path: path.display().to_string(),
                            message: e.to_string(),
                        })?;
                    }
                }
                let mut results = fixtures::suite();
                results.extend(fixtures::randomized(*seed, *cases));
                let mut t = Table::new(["fixture", "status", "detail"]);
                for r in &results {
                    t.push([
                        r.name.clone(),
                        if r.passed { "PASS" } else { "FAIL" }.to_string(),
                        r.detail.clone(),
                    ]);
                }
                Ok(Report::new("fixtures")
                    .input("seed", seed)
                    .input("cases", cases)
                    .window(json!({
                        "base_points_1d": DEFAULT_WINDOW_1D,
                        "base_points_2d": format!("u1 + u2 <= {DEFAULT_BASE_BOUND_2D}"),
                    }))
                    .holds(results.iter().all(|r| r.passed))
                    .result(&results)
                    .table(t))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use shiftlab_core::exact::q;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn pair_parsing() {
        assert_eq!(parse_pair("2, 3"), Ok((2, 3)));
        assert!(parse_quad("2,3,0").is_err());
        assert_eq!(q(1, 2).to_string(), "1/2");
    }
}
