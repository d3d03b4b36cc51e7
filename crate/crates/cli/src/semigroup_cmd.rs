use std::collections::BTreeMap;

use clap::Args;
use serde::Serialize;
use singcurve::presentation::{minimal_presentation, t1_profile};
use singcurve::{NumericalSemigroup, SemigroupError, Verdict};

use crate::error::CliError;

#[derive(Debug, Args)]
pub struct SemigroupArgs {
    /// Comma-separated generators, e.g. 13,14,15,16,17,18,20,22,23
    pub generators: String,
    /// Largest k for the Dedekind table and the gap sumset criterion
    #[arg(long, default_value_t = 4)]
    pub kmax: u32,
    /// Also compute the minimal binomial presentation and graded T1
    #[arg(long)]
    pub t1: bool,
    /// Emit JSON instead of text
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Serialize)]
pub struct SemigroupReport {
    pub generators: Vec<u32>,
    pub gaps: Vec<u32>,
    pub delta: u32,
    pub frobenius: i64,
    pub conductor: u32,
    pub multiplicity: u32,
    pub embedding_dim: usize,
    #[serde(rename = "type")]
    pub type_t: u32,
    pub pseudo_frobenius: Vec<u32>,
    pub symmetric: bool,
    pub mu: u32,
    pub deligne_e: u32,
    pub dedekind: BTreeMap<u32, u32>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub presentation: Option<PresentationReport>,
}

#[derive(Debug, Serialize)]
pub struct RelationReport {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub q: u32,
    pub v: Vec<i64>,
}

#[derive(Debug, Serialize)]
pub struct PresentationReport {
    pub relations: Vec<RelationReport>,
    /// Nonzero graded pieces only.
    pub t1: BTreeMap<i64, u64>,
    pub t1_total: u64,
    pub t1_positive_total: u64,
    #[serde(skip)]
    rendered: Vec<String>,
}

pub fn parse_generators(s: &str) -> Result<Vec<i64>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<i64>().map_err(|_| CliError::Usage(format!("not an integer generator: {t:?}"))))
        .collect()
}

pub fn report(args: &SemigroupArgs) -> Result<SemigroupReport, CliError> {
    let gens = parse_generators(&args.generators)?;
    let s = NumericalSemigroup::from_generators(&gens)?;
    let inv = s.invariants();
    let (dedekind, verdict) = match s.buchweitz_verdict(args.kmax) {
        Ok(v) => {
            let table = (1..=args.kmax).map(|k| Ok((k, s.dedekind_dk(k)?))).collect::<Result<_, SemigroupError>>()?;
            (table, v)
        }
        Err(SemigroupError::MultiplicityTooSmall(m)) => (
            BTreeMap::new(),
            Verdict::unknown(format!("gap sumset criterion needs multiplicity >= 3, got {m}")),
        ),
        Err(e) => return Err(e.into()),
    };
    let presentation = args.t1.then(|| {
        let pres = minimal_presentation(&s);
        let profile = t1_profile(&pres);
        let rendered = pres
            .relations
            .iter()
            .map(|r| {
                let (a, b) = r.monomials();
                format!("{a} - {b} @ degree {}", r.q)
            })
            .collect();
        PresentationReport {
            relations: pres
                .relations
                .iter()
                .map(|r| RelationReport {
                    alpha: r.alpha.clone(),
                    beta: r.beta.clone(),
                    q: r.q,
                    v: r.v.clone(),
                })
                .collect(),
            t1: profile.by_degree,
            t1_total: profile.total,
            t1_positive_total: profile.total_positive,
            rendered,
        }
    });
    Ok(SemigroupReport {
        generators: s.generators().to_vec(),
        gaps: s.gaps().to_vec(),
        delta: s.delta(),
        frobenius: s.frobenius(),
        conductor: s.conductor(),
        multiplicity: s.multiplicity(),
        embedding_dim: s.embedding_dim(),
        type_t: inv.type_t,
        pseudo_frobenius: inv.pseudo_frobenius,
        symmetric: inv.symmetric,
        mu: inv.mu,
        deligne_e: inv.deligne_e,
        dedekind,
        verdict,
        presentation,
    })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

pub fn render_text(r: &SemigroupReport) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| out.push_str(&format!("{k:<18}{v}\n"));
    line("generators", join(&r.generators));
    line("gaps", join(&r.gaps));
    line("delta", r.delta.to_string());
    line("frobenius", r.frobenius.to_string());
    line("conductor", r.conductor.to_string());
    line("multiplicity", r.multiplicity.to_string());
    line("embedding dim", r.embedding_dim.to_string());
    line("type", r.type_t.to_string());
    line("pseudo-frobenius", join(&r.pseudo_frobenius));
    line("symmetric", r.symmetric.to_string());
    line("mu", r.mu.to_string());
    line("deligne e", r.deligne_e.to_string());
    for (k, d) in &r.dedekind {
        line(&format!("d_{k}"), format!("{d} (2k*delta = {})", 2 * k * r.delta));
    }
    line("verdict", format!("{} [{}]", r.verdict.outcome, r.verdict.provenance));
    for (k, v) in &r.verdict.witnesses {
        line(&format!("  {k}"), v.to_string());
    }
    if let Some(p) = &r.presentation {
        line("relations", p.relations.len().to_string());
        for s in &p.rendered {
            out.push_str(&format!("  {s}\n"));
        }
        let profile: Vec<String> = p.t1.iter().map(|(l, d)| format!("{l}:{d}")).collect();
        out.push_str(&format!("{:<18}{{{}}}\n", "t1", profile.join(", ")));
        out.push_str(&format!("{:<18}{}\n", "t1 total", p.t1_total));
        out.push_str(&format!("{:<18}{}\n", "t1 positive", p.t1_positive_total));
    }
    out
}
