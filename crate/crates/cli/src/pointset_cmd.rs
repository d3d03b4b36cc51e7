use std::collections::BTreeMap;
use std::fs;

use clap::Args;
use serde::Serialize;
use serde_json::Value;
use singcurve::pointset::{
    classify_generic, cone_quadric_test, gale_transform, is_self_associated, quadric_deficiency,
    random_self_associated, UniformMode,
};
use singcurve::{ConeT1Report, GradedConeModel, PointConfiguration, PointSetError, Verdict};

use crate::error::CliError;

const BUILDERS: [&str; 2] = ["tetrahedron-midpoints", "modified-tetrahedron-midpoints"];

#[derive(Debug, Args)]
pub struct PointsetArgs {
    /// Point-set file (JSON or CSV)
    #[arg(long, group = "source")]
    pub file: Option<String>,
    /// Named configuration: tetrahedron-midpoints, modified-tetrahedron-midpoints
    #[arg(long, group = "source")]
    pub builder: Option<String>,
    /// Random general configuration of R points in P^(N-1)
    #[arg(long, num_args = 2, value_names = ["N", "R"], group = "source")]
    pub random: Option<Vec<usize>>,
    /// Random self-associated configuration of 2N points in P^(N-1)
    #[arg(long, value_name = "N", group = "source")]
    pub self_associated: Option<usize>,
    /// Seed for --random and --self-associated
    #[arg(long)]
    pub seed: Option<u64>,
    /// Coordinate box for --random
    #[arg(long = "box", default_value_t = 10)]
    pub coord_box: i64,
    /// Write the Gale transform to a file ("-" embeds it in the report); T1
    /// is then computed for the transform
    #[arg(long, value_name = "FILE")]
    pub gale: Option<String>,
    /// Graded T1 of the cone over degrees LMIN..=LMAX
    #[arg(long, num_args = 2, value_names = ["LMIN", "LMAX"], allow_negative_numbers = true, conflicts_with = "t1_auto")]
    pub t1: Option<Vec<i64>>,
    /// Graded T1 over a window widened until both ends vanish
    #[arg(long)]
    pub t1_auto: bool,
    /// Seed for sampled uniform-position checks when there are more than 12 points
    #[arg(long)]
    pub uniform_seed: Option<u64>,
    /// Number of sampled subsets for the uniform-position check
    #[arg(long, default_value_t = 200)]
    pub uniform_trials: usize,
    /// Emit JSON instead of text
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Serialize)]
pub struct ConeChecksJson {
    pub tplusnul: bool,
    /// `true`/`false`, or "n/a" outside the self-associated 2n-point case.
    pub negatively_graded: Value,
}

#[derive(Debug, Serialize)]
pub struct ConeJson {
    pub target: &'static str,
    pub n: usize,
    pub r: usize,
    pub delta: u64,
    #[serde(rename = "type")]
    pub type_t: u64,
    pub e: i64,
    pub moduli: i64,
    pub window: [i64; 2],
    pub generators: BTreeMap<u32, usize>,
    /// Quadric test for the cone's own points, genus `r − n`.
    pub quadric_test: Option<Verdict>,
    pub t1: BTreeMap<i64, u64>,
    pub total: u64,
    pub checks: ConeChecksJson,
}

impl ConeJson {
    fn new(target: &'static str, model: &GradedConeModel, rep: ConeT1Report, quadric_test: Option<Verdict>) -> Self {
        ConeJson {
            target,
            n: rep.n,
            r: rep.r,
            delta: rep.delta,
            type_t: rep.type_t,
            e: rep.e,
            moduli: rep.moduli,
            window: [rep.window.0, rep.window.1],
            generators: model.generator_degrees(),
            quadric_test,
            t1: rep.t1,
            total: rep.total,
            checks: ConeChecksJson {
                tplusnul: rep.checks.tplusnul,
                negatively_graded: match rep.checks.negatively_graded {
                    Some(b) => Value::Bool(b),
                    None => Value::String("n/a".into()),
                },
            },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PointsetReport {
    pub source: String,
    pub label: Option<String>,
    pub n: usize,
    pub r: usize,
    pub hilbert: Vec<usize>,
    pub regularity_index: u32,
    pub delta: u64,
    pub general_position: bool,
    /// `null` when not checked (more than 12 points and no sampling seed).
    pub uniform_position: Option<bool>,
    pub uniform_mode: String,
    pub quadric_deficiency: usize,
    /// `null` unless there are exactly `2n` points.
    pub self_associated: Option<bool>,
    /// Quadric test with genus `r − n`; `null` when its hypotheses fail.
    pub quadric_test: Option<Verdict>,
    /// Classification of the general cone with the same `(n, r)`.
    pub generic_verdict: Option<Verdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gale: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gale_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cone: Option<ConeJson>,
}

fn require_seed(args: &PointsetArgs, flag: &str) -> Result<u64, CliError> {
    args.seed
        .ok_or_else(|| CliError::Usage(format!("{flag} needs an explicit --seed")))
}

fn load(args: &PointsetArgs) -> Result<(PointConfiguration, String), CliError> {
    if let Some(path) = &args.file {
        let text = fs::read_to_string(path).map_err(|e| CliError::Configuration(format!("{path}: {e}")))?;
        return Ok((PointConfiguration::from_str_auto(&text)?, format!("file {path}")));
    }
    if let Some(name) = &args.builder {
        let g = match name.as_str() {
            "tetrahedron-midpoints" => PointConfiguration::tetrahedron_midpoints(),
            "modified-tetrahedron-midpoints" => PointConfiguration::modified_tetrahedron_midpoints(),
            other => {
                return Err(CliError::Usage(format!(
                    "unknown builder {other:?}; available: {}",
                    BUILDERS.join(", ")
                )))
            }
        };
        return Ok((g, format!("builder {name}")));
    }
    if let Some(nr) = &args.random {
        let seed = require_seed(args, "--random")?;
        let (n, r) = (nr[0], nr[1]);
        let g = PointConfiguration::random_general_config(n, r, seed, args.coord_box)?;
        return Ok((g, format!("random n={n} r={r} seed={seed} box={}", args.coord_box)));
    }
    if let Some(n) = args.self_associated {
        let seed = require_seed(args, "--self-associated")?;
        return Ok((random_self_associated(n, seed)?, format!("self-associated n={n} seed={seed}")));
    }
    Err(CliError::Usage(
        "one of --file, --builder, --random or --self-associated is required".into(),
    ))
}

fn not_applicable<T>(r: Result<T, PointSetError>) -> Result<Option<T>, CliError> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(
            PointSetError::HypothesisViolated(_)
            | PointSetError::BadShape(_)
            | PointSetError::BadRange(_)
            | PointSetError::BadParameters(_)
            | PointSetError::TooSmall
            | PointSetError::DegenerateConfig(_),
        ) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

pub fn report(args: &PointsetArgs) -> Result<PointsetReport, CliError> {
    if let Some(w) = &args.t1 {
        if w[0] > w[1] {
            return Err(CliError::Usage(format!("empty T1 window {}..{}", w[0], w[1])));
        }
    }
    let (g, source) = load(args)?;
    let (n, r) = (g.n(), g.r());
    if g.rank() < n {
        return Err(PointSetError::RankDeficient { rank: g.rank(), n }.into());
    }
    let hilbert = g.hilbert_sequence();
    let (uniform_position, uniform_mode) = if r <= 12 {
        (Some(g.is_uniform_position(UniformMode::Exhaustive)?), "exhaustive".to_string())
    } else if let Some(seed) = args.uniform_seed {
        let trials = args.uniform_trials;
        (
            Some(g.is_uniform_position(UniformMode::Sampled { seed, trials })?),
            format!("sampled seed={seed} trials={trials}"),
        )
    } else {
        (None, "skipped".to_string())
    };
    let self_associated = if r == 2 * n { not_applicable(is_self_associated(&g))? } else { None };
    let quadric_test = if r > n { not_applicable(cone_quadric_test(&g, r - n))? } else { None };
    let generic_verdict = not_applicable(classify_generic(n as i64, r as i64))?;

    let mut gale = None;
    let mut gale_file = None;
    let mut target = ("input", g.clone());
    if let Some(dest) = &args.gale {
        let q = gale_transform(&g)?;
        let json = q.to_json_value();
        if dest == "-" {
            gale = Some(json);
        } else {
            fs::write(dest, serde_json::to_string_pretty(&json).expect("point file serializes"))
                .map_err(|e| CliError::Configuration(format!("{dest}: {e}")))?;
            gale_file = Some(dest.clone());
        }
        target = ("gale", q);
    }
    let cone = if args.t1.is_some() || args.t1_auto {
        let model = GradedConeModel::build(&target.1)?;
        let rep = match &args.t1 {
            Some(w) => model.t1_report(w[0], w[1]),
            None => model.t1_report_auto(),
        };
        let (tn, tr) = (target.1.n(), target.1.r());
        let test = if tr > tn { not_applicable(cone_quadric_test(&target.1, tr - tn))? } else { None };
        Some(ConeJson::new(target.0, &model, rep, test))
    } else {
        None
    };
    Ok(PointsetReport {
        source,
        label: g.label().map(str::to_string),
        n,
        r,
        regularity_index: hilbert.len() as u32 - 1,
        delta: g.delta_cone(),
        hilbert,
        general_position: g.is_general_position(),
        uniform_position,
        uniform_mode,
        quadric_deficiency: quadric_deficiency(&g),
        self_associated,
        quadric_test,
        generic_verdict,
        gale,
        gale_file,
        cone,
    })
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map_or_else(|| "n/a".to_string(), T::to_string)
}

fn verdict_text(v: &Option<Verdict>) -> String {
    match v {
        None => "n/a".into(),
        Some(v) => {
            let w: Vec<String> = v.witnesses.iter().map(|(k, x)| format!("{k}={x}")).collect();
            format!("{} [{}] {}", v.outcome, v.provenance, w.join(" "))
        }
    }
}

pub fn render_text(p: &PointsetReport) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| out.push_str(&format!("{k:<20}{v}\n"));
    line("source", p.source.clone());
    line("points", format!("{} in P^{}", p.r, p.n - 1));
    line(
        "hilbert",
        p.hilbert.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
    );
    line("regularity index", p.regularity_index.to_string());
    line("delta", p.delta.to_string());
    line("general position", p.general_position.to_string());
    line("uniform position", format!("{} ({})", opt(&p.uniform_position), p.uniform_mode));
    line("quadric deficiency", p.quadric_deficiency.to_string());
    line("self-associated", opt(&p.self_associated));
    line("quadric test", verdict_text(&p.quadric_test));
    line("generic verdict", verdict_text(&p.generic_verdict));
    if let Some(f) = &p.gale_file {
        line("gale transform", format!("written to {f}"));
    }
    if let Some(gale) = &p.gale {
        line("gale transform", gale.to_string());
    }
    if let Some(c) = &p.cone {
        line("cone over", format!("{} ({} points in P^{})", c.target, c.r, c.n - 1));
        let gens: Vec<String> = c.generators.iter().map(|(d, k)| format!("{k} of degree {d}")).collect();
        line("ideal generators", gens.join(", "));
        line("delta", c.delta.to_string());
        line("type", c.type_t.to_string());
        line("e", c.e.to_string());
        line("moduli", c.moduli.to_string());
        line("quadric test", verdict_text(&c.quadric_test));
        for (l, d) in &c.t1 {
            line(&format!("T1_{l}"), d.to_string());
        }
        line("T1 total", c.total.to_string());
        line("check tplusnul", c.checks.tplusnul.to_string());
        let ng = match &c.checks.negatively_graded {
            Value::Bool(b) => b.to_string(),
            other => other.as_str().unwrap_or("n/a").to_string(),
        };
        line("check neg. graded", ng);
    }
    out
}
