//! `dualcx`: dual complexes and their homology from JSON inputs.
//!
//! Exit codes: 0 success, 2 unreadable or unparsable input, 3 input that
//! parses but is rejected (invalid complex, singular fan, inconsistent
//! action, bad subdivision target).

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dualcx::hypersurface::{
    dual_complex_hypersurface, enumerate_maximal_rank_strata, linearizability_report, validate_action,
    HypersurfaceJson,
};
use dualcx::quasicomplex::ComplexJson;
use dualcx::toric::{check_smooth, dual_complex_toric, star_subdivision, FanJson};
use dualcx::{
    homology_table, top_invariant, CellId, DiagonalHypersurfaceAction, Fan, FiniteAbelianSubgroup, GroupJson,
    QuasiComplex,
};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use report::{RunReport, Stage, StratumSummary, VerdictSummary};

#[derive(Parser)]
#[command(name = "dualcx", version, about = "Equivariant dual complexes and their homology")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integral homology of a quasicomplex file.
    Homology {
        complex: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Dual complex of a smooth toric variety with a finite torus subgroup.
    Toric {
        fan: PathBuf,
        group: PathBuf,
        /// Star-subdivide a cone before building the complex; repeatable,
        /// applied in order. Ray indices `0,1` or ray vectors `{(1,0),(0,1)}`.
        #[arg(long, value_parser = parse_cone)]
        blowup: Vec<ConeArg>,
        #[arg(long)]
        json: bool,
    },
    /// Strata, dual complex and linearizability verdict for a diagonal
    /// action on a Fermat-type hypersurface. Only the diagonal normal form
    /// is accepted; general invariant hypersurfaces must be diagonalized first.
    Hyp {
        spec: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Stellar subdivision of one cell; prints homology before and after.
    Subdivide {
        complex: PathBuf,
        /// Cell id, `5` or `c5`.
        #[arg(value_parser = parse_cell)]
        cell: CellId,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Debug)]
enum ConeArg {
    Indices(Vec<usize>),
    Rays(Vec<Vec<i64>>),
}

fn parse_cone(s: &str) -> Result<ConeArg, String> {
    let trimmed = s.trim().trim_start_matches('{').trim_end_matches('}');
    if trimmed.contains('(') {
        let rays = trimmed
            .split(')')
            .map(|part| part.trim().trim_start_matches(',').trim())
            .filter(|part| !part.is_empty())
            .map(|part| {
                let inner = part.strip_prefix('(').ok_or_else(|| format!("expected '(' in {part:?}"))?;
                inner
                    .split(',')
                    .map(|x| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}")))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ConeArg::Rays(rays))
    } else {
        trimmed
            .split(',')
            .map(|x| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(ConeArg::Indices)
    }
}

fn parse_cell(s: &str) -> Result<CellId, String> {
    s.trim_start_matches('c').parse().map(CellId).map_err(|e| format!("{s:?}: {e}"))
}

enum Failure {
    Parse(String),
    Rejected(String, Vec<String>),
}

impl From<dualcx::Error> for Failure {
    fn from(e: dualcx::Error) -> Self {
        let details = match &e {
            dualcx::Error::InvalidComplex(v) | dualcx::Error::NotSmooth(v) => v.clone(),
            _ => Vec::new(),
        };
        let head = match &e {
            dualcx::Error::InvalidComplex(_) => "invalid complex".to_string(),
            dualcx::Error::NotSmooth(_) => "fan is not smooth".to_string(),
            _ => e.to_string(),
        };
        Failure::Rejected(head, details)
    }
}

type Outcome<T> = Result<T, Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> Outcome<(T, Value)> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let value: Value =
        serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    let parsed = serde_json::from_value(value.clone())
        .map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    Ok((parsed, value))
}

fn load_complex(path: &Path) -> Outcome<(QuasiComplex, Value)> {
    let (j, value): (ComplexJson, _) = read_json(path)?;
    let k = QuasiComplex::try_from(j)?;
    let violations = k.validate();
    if !violations.is_empty() {
        return Err(Failure::Rejected(
            "invalid complex".into(),
            violations.iter().map(ToString::to_string).collect(),
        ));
    }
    Ok((k, value))
}

fn top_of(table: &[dualcx::HomologyGroup]) -> Option<dualcx::HomologyGroup> {
    table.last().cloned()
}

fn cmd_homology(path: &Path) -> Outcome<RunReport> {
    let (k, input) = load_complex(path)?;
    let homology = homology_table(&k)?;
    Ok(RunReport {
        command: "homology".into(),
        input,
        f_vector: k.f_vector(),
        top_invariant: top_of(&homology),
        homology,
        group: None,
        verdict: None,
        strata: Vec::new(),
        stages: Vec::new(),
        warnings: Vec::new(),
    })
}

fn resolve_cone(fan: &Fan, cone: &ConeArg) -> Outcome<Vec<usize>> {
    match cone {
        ConeArg::Indices(ix) => Ok(ix.clone()),
        ConeArg::Rays(rays) => rays
            .iter()
            .map(|r| {
                fan.rays().iter().position(|x| x == r).ok_or_else(|| {
                    Failure::Rejected(format!("no ray {r:?} in the fan"), Vec::new())
                })
            })
            .collect(),
    }
}

fn cmd_toric(fan_path: &Path, group_path: &Path, blowups: &[ConeArg]) -> Outcome<RunReport> {
    let (fan_json, fan_value): (FanJson, _) = read_json(fan_path)?;
    let (group_json, group_value): (GroupJson, _) = read_json(group_path)?;
    let mut fan = Fan::try_from(fan_json)?;
    let g = FiniteAbelianSubgroup::try_from(group_json)?;
    let violations = check_smooth(&fan);
    if !violations.is_empty() {
        return Err(dualcx::Error::NotSmooth(violations).into());
    }
    let n = fan.rank();
    let mut stages = Vec::new();
    let mut applied = Vec::new();
    for cone in blowups {
        let cone = resolve_cone(&fan, cone)?;
        let before = dual_complex_toric(&fan, &g)?;
        stages.push(Stage::of(format!("before blowup of cone {cone:?}"), &before)?);
        fan = star_subdivision(&fan, &cone)?;
        applied.push(json!({"cone": cone, "new_ray": fan.rays().last()}));
    }
    let k = dual_complex_toric(&fan, &g)?;
    let homology = homology_table(&k)?;
    let top = top_invariant(&k, n)?;
    let minimal = g.with_minimal_modulus();
    Ok(RunReport {
        command: "toric".into(),
        input: json!({"fan": fan_value, "group": group_value, "blowups": applied}),
        f_vector: k.f_vector(),
        homology,
        top_invariant: Some(top),
        group: Some(format!("{minimal} in (Z/{})^{n}", minimal.modulus())),
        verdict: None,
        strata: Vec::new(),
        stages,
        warnings: Vec::new(),
    })
}

fn cmd_hyp(path: &Path) -> Outcome<RunReport> {
    let (spec_json, input): (HypersurfaceJson, _) = read_json(path)?;
    let spec = DiagonalHypersurfaceAction::try_from(spec_json)?;
    let action = validate_action(&spec);
    if !action.is_valid() {
        return Err(Failure::Rejected("invalid action".into(), action.violations));
    }
    let coords = spec.coords();
    let strata = enumerate_maximal_rank_strata(&spec)?
        .into_iter()
        .map(|s| StratumSummary {
            locus: s.label(coords),
            codim: s.codim,
            stabilizer: s.stabilizer.with_minimal_modulus().to_string(),
            component_count: s.component_count,
            support: s.support,
        })
        .collect();
    let k = dual_complex_hypersurface(&spec)?;
    let homology = homology_table(&k)?;
    let r = linearizability_report(&spec)?;
    let group = FiniteAbelianSubgroup::full(spec.modulus(), spec.group_rank_parameter()).with_minimal_modulus();
    Ok(RunReport {
        command: "hyp".into(),
        input,
        f_vector: k.f_vector(),
        homology,
        top_invariant: Some(r.invariant.clone()),
        group: Some(group.to_string()),
        verdict: Some(VerdictSummary {
            verdict: r.verdict,
            invariant: r.invariant,
            reference_value: r.reference_value,
            group_rank: r.group_rank,
            reduced_invariant: r.reduced_invariant,
        }),
        strata,
        stages: Vec::new(),
        warnings: r.warnings,
    })
}

fn cmd_subdivide(path: &Path, cell: CellId, out: &Path) -> Outcome<RunReport> {
    let (k, input) = load_complex(path)?;
    let before = Stage::of(format!("before subdividing {cell}"), &k)?;
    let sub = k.stellar_subdivide(cell)?;
    let homology = homology_table(&sub)?;
    if homology != before.homology {
        return Err(Failure::Rejected(
            "homology changed under subdivision".into(),
            vec![format!("before {:?}", before.homology), format!("after {homology:?}")],
        ));
    }
    let text = serde_json::to_string_pretty(&sub).expect("complex serializes");
    fs::write(out, text + "\n").map_err(|e| Failure::Parse(format!("{}: {e}", out.display())))?;
    Ok(RunReport {
        command: "subdivide".into(),
        input: json!({"complex": input, "cell": cell.0, "out": out.display().to_string()}),
        f_vector: sub.f_vector(),
        top_invariant: top_of(&homology),
        homology,
        group: None,
        verdict: None,
        strata: Vec::new(),
        stages: vec![before],
        warnings: Vec::new(),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, json) = match &cli.command {
        Command::Homology { complex, json } => (cmd_homology(complex), *json),
        Command::Toric { fan, group, blowup, json } => (cmd_toric(fan, group, blowup), *json),
        Command::Hyp { spec, json } => (cmd_hyp(spec), *json),
        Command::Subdivide { complex, cell, out, json } => (cmd_subdivide(complex, *cell, out), *json),
    };
    match result {
        Ok(report) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                print!("{}", report.render());
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Rejected(msg, details)) => {
            eprintln!("error: {msg}");
            for d in details {
                eprintln!("  {d}");
            }
            ExitCode::from(3)
        }
    }
}
