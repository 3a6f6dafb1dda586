//! The Morse and homology pipelines shared by subcommands and reproductions.

use serde::Serialize;

use symjoin::homology::{reduced_homology, HomologyProfile};
use symjoin::morse::{
    build_matching, connectivity_lower_bound, critical_report, passport_monotone_check,
    verify_acyclicity, verify_matching, Connectivity, CriticalReport, GradientField,
    MonotoneCheck,
};
use symjoin::JoinComplex;

use crate::failure::CliError;

/// Everything the Morse route certifies about one join complex.
pub struct MorseOutcome {
    pub field: GradientField,
    pub matching_valid: bool,
    pub acyclic: bool,
    pub report: CriticalReport,
    pub connectivity: Option<Connectivity>,
    pub passports: Option<MonotoneCheck>,
}

impl MorseOutcome {
    /// Valid, acyclic, and every critical cell is the base vertex or large.
    pub fn certified(&self) -> bool {
        self.matching_valid && self.acyclic && self.report.theorem_holds()
    }

    /// `m - r - 1`, the connectivity the construction is meant to reach.
    pub fn target(&self) -> i64 {
        self.report.m as i64 - self.report.r as i64 - 1
    }
}

pub fn analyse(j: &JoinComplex, passport_budget: Option<usize>) -> Result<MorseOutcome, CliError> {
    let field = build_matching(j)?;
    let matching_valid = verify_matching(j, &field);
    let acyclic = verify_acyclicity(j, &field);
    let report = critical_report(j, &field);
    let connectivity = if matching_valid && acyclic {
        connectivity_lower_bound(&report).ok()
    } else {
        None
    };
    let passports = passport_budget.map(|b| passport_monotone_check(j, &field, b));
    Ok(MorseOutcome {
        field,
        matching_valid,
        acyclic,
        report,
        connectivity,
        passports,
    })
}

#[derive(Serialize)]
pub struct PairJson {
    pub step: usize,
    pub pivot: usize,
    pub lower: String,
    pub upper: String,
}

#[derive(Serialize)]
pub struct CriticalJson {
    pub base: Option<String>,
    pub large: Vec<String>,
    pub violations: Vec<String>,
}

#[derive(Serialize)]
pub struct PassportJson {
    pub holds: bool,
    pub segments: usize,
    pub complete: bool,
    pub counterexample: Option<(String, String)>,
}

#[derive(Serialize)]
pub struct MorseJson {
    pub m: usize,
    pub r: usize,
    pub kind: String,
    pub cells: usize,
    pub cell_counts: Vec<usize>,
    pub matched_pairs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<PairJson>>,
    pub critical: CriticalJson,
    pub critical_counts: Vec<usize>,
    pub matching_valid: bool,
    pub acyclic: bool,
    pub theorem_holds: bool,
    pub connectivity: Option<String>,
    pub target_connectivity: i64,
    pub passport_check: Option<PassportJson>,
    pub note: &'static str,
}

pub const HOMOTOPY_NOTE: &str = "connectivity is certified through critical cells of an acyclic \
matching; homology is an independent check of its homological part";

pub fn morse_json(j: &JoinComplex, o: &MorseOutcome, with_pairs: bool) -> MorseJson {
    let s = |c: &symjoin::JoinCell| c.to_string();
    MorseJson {
        m: j.ground(),
        r: j.r(),
        kind: format!("{:?}", j.kind()).to_lowercase(),
        cells: j.len(),
        cell_counts: j.counts(),
        matched_pairs: o.field.pairs.len(),
        pairs: with_pairs.then(|| {
            o.field
                .pairs
                .iter()
                .map(|p| PairJson {
                    step: p.step,
                    pivot: p.pivot,
                    lower: s(&p.lower),
                    upper: s(&p.upper),
                })
                .collect()
        }),
        critical: CriticalJson {
            base: o.report.base.as_ref().map(s),
            large: o.report.large.iter().map(s).collect(),
            violations: o.report.violations.iter().map(s).collect(),
        },
        critical_counts: o.field.critical_counts(),
        matching_valid: o.matching_valid,
        acyclic: o.acyclic,
        theorem_holds: o.report.theorem_holds(),
        connectivity: o.connectivity.map(|c| c.to_string()),
        target_connectivity: o.target(),
        passport_check: o.passports.as_ref().map(|p| PassportJson {
            holds: p.holds,
            segments: p.segments,
            complete: p.complete,
            counterexample: p.counterexample.as_ref().map(|(a, b)| (s(a), s(b))),
        }),
        note: HOMOTOPY_NOTE,
    }
}

/// Reduced homology of a join complex, failing on a broken chain complex.
pub fn join_homology(j: &JoinComplex, max_dim: Option<usize>) -> Result<HomologyProfile, CliError> {
    Ok(reduced_homology(j, max_dim)?)
}

pub fn describe_profile(h: &HomologyProfile) -> String {
    if h.void {
        return "void".into();
    }
    let mut parts = Vec::new();
    if h.minus_one > 0 {
        parts.push("H~_-1 = Z".to_string());
    }
    for p in 0..h.betti.len() {
        let b = h.betti(p);
        let t = h.torsion(p);
        if b == 0 && t.is_empty() {
            continue;
        }
        let mut summands = Vec::new();
        if b > 0 {
            summands.push(if b == 1 { "Z".to_string() } else { format!("Z^{b}") });
        }
        summands.extend(t.iter().map(|q| format!("Z/{q}")));
        parts.push(format!("H~_{p} = {}", summands.join(" + ")));
    }
    if parts.is_empty() {
        "acyclic".into()
    } else {
        parts.join(", ")
    }
}
