use std::fmt::Write as _;

use dualcx::{HomologyGroup, QuasiComplex, Verdict};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// Everything a subcommand reports. `--json` prints this verbatim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub input: Value,
    pub f_vector: Vec<usize>,
    pub homology: Vec<HomologyGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top_invariant: Option<HomologyGroup>,
    /// The acting group, written with the smallest modulus.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<VerdictSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strata: Vec<StratumSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stages: Vec<Stage>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerdictSummary {
    pub verdict: Verdict,
    pub invariant: HomologyGroup,
    pub reference_value: String,
    pub group_rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_invariant: Option<HomologyGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumSummary {
    pub support: Vec<usize>,
    pub locus: String,
    pub codim: usize,
    pub stabilizer: String,
    pub component_count: u64,
}

/// An intermediate complex: the toric input before each blowup, or the
/// complex before subdivision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub f_vector: Vec<usize>,
    pub homology: Vec<HomologyGroup>,
}

impl Stage {
    pub fn of(name: impl Into<String>, k: &QuasiComplex) -> dualcx::Result<Self> {
        Ok(Stage {
            name: name.into(),
            f_vector: k.f_vector(),
            homology: dualcx::homology_table(k)?,
        })
    }
}

fn homology_lines(out: &mut String, indent: &str, table: &[HomologyGroup]) {
    if table.is_empty() {
        let _ = writeln!(out, "{indent}empty complex: all homology groups are 0");
    }
    for h in table {
        let _ = writeln!(out, "{indent}H_{} = {h}", h.degree);
    }
}

fn f_vector(f: &[usize]) -> String {
    format!("({})", f.iter().map(usize::to_string).collect::<Vec<_>>().join(", "))
}

impl RunReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        if let Some(g) = &self.group {
            let _ = writeln!(out, "group: {g}");
        }
        for s in &self.stages {
            let _ = writeln!(out, "{}: f-vector {}", s.name, f_vector(&s.f_vector));
            homology_lines(&mut out, "  ", &s.homology);
        }
        if !self.strata.is_empty() {
            let _ = writeln!(out, "maximal rank strata:");
            for s in &self.strata {
                let _ = writeln!(
                    out,
                    "  {} codim {} stabilizer {} components {}",
                    s.locus, s.codim, s.stabilizer, s.component_count
                );
            }
        }
        let _ = writeln!(out, "f-vector: {}", f_vector(&self.f_vector));
        homology_lines(&mut out, "", &self.homology);
        if let Some(top) = &self.top_invariant {
            let _ = writeln!(out, "top invariant: H_{} = {top}", top.degree);
        }
        if let Some(v) = &self.verdict {
            let compared = v.reduced_invariant.as_ref().map_or(String::new(), |r| format!(", reduced {r}"));
            let _ = writeln!(
                out,
                "verdict: {} (group rank {}, H_{} = {}{compared}, toric value {})",
                v.verdict, v.group_rank, v.invariant.degree, v.invariant, v.reference_value
            );
        }
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        out
    }
}
