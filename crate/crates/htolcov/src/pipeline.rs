//! End-to-end measurement: take objectives (from an annotator or a
//! hyperlabel file), normalize each one, harvest the whole suite once
//! over the union of their atoms, then consolidate per objective.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::coverage::{consolidate, harvest_suite, AtomIndex, Verdict};
use crate::criteria::Objective;
use crate::dnf::{normalize_dnf, Dnf, DnfError};
use crate::htl::{check_well_formed, Hyperlabel, NamedHyperlabel, WfViolation};
use crate::minilang::ast::Program;
use crate::trace::{InputError, TestDatum};

#[derive(Debug, Clone)]
pub struct MeasureConfig {
    pub step_limit: usize,
    pub budget: u64,
    pub disjunct_cap: usize,
    pub dedup: bool,
}

impl Default for MeasureConfig {
    fn default() -> MeasureConfig {
        MeasureConfig {
            step_limit: crate::trace::DEFAULT_STEP_LIMIT,
            budget: crate::coverage::DEFAULT_COMBINATION_BUDGET,
            disjunct_cap: crate::dnf::DEFAULT_DISJUNCT_CAP,
            dedup: true,
        }
    }
}

/// One objective to measure: an id, a grouping tag for the report (the
/// criterion name, or `HTL` for user-written hyperlabels), and the
/// hyperlabel itself.
#[derive(Debug, Clone)]
pub struct MeasureItem {
    pub id: String,
    pub tag: String,
    pub hl: Hyperlabel,
}

impl From<Objective> for MeasureItem {
    fn from(o: Objective) -> MeasureItem {
        MeasureItem {
            id: o.id,
            tag: o.criterion.name().to_string(),
            hl: o.hl,
        }
    }
}

impl From<NamedHyperlabel> for MeasureItem {
    fn from(n: NamedHyperlabel) -> MeasureItem {
        MeasureItem {
            id: n.name,
            tag: "HTL".to_string(),
            hl: n.hl,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum MeasureError {
    #[error("objective {id} is ill-formed: {}", summarize(.violations))]
    IllFormed {
        id: String,
        violations: Vec<WfViolation>,
    },
    #[error("normalizing objective {id}: {source}")]
    Normalize { id: String, source: DnfError },
    #[error("executing the suite: {0}")]
    Input(#[from] InputError),
}

fn summarize(vs: &[WfViolation]) -> String {
    vs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Clone)]
pub struct ObjectiveResult {
    pub id: String,
    pub tag: String,
    pub verdict: Verdict,
}

#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub rows: Vec<ObjectiveResult>,
    pub num_tests: usize,
}

impl MeasureReport {
    pub fn covered(&self) -> usize {
        self.rows.iter().filter(|r| r.verdict.is_covered()).count()
    }

    pub fn unknown(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| r.verdict == Verdict::UnknownBudget)
            .count()
    }

    /// Fraction of covered objectives; an empty objective set counts as
    /// fully covered.
    pub fn score(&self) -> f64 {
        if self.rows.is_empty() {
            1.0
        } else {
            self.covered() as f64 / self.rows.len() as f64
        }
    }

    /// Pass means the score meets the threshold and no verdict was cut
    /// short by the combination budget.
    pub fn passed(&self, threshold: f64) -> bool {
        self.score() >= threshold && self.unknown() == 0
    }

    pub fn render_text(&self, verbose: bool) -> String {
        let mut out = String::new();
        if self.rows.is_empty() {
            out.push_str("warning: no objectives to measure; score is vacuously 1.00\n");
            return out;
        }
        if verbose {
            for r in &self.rows {
                let status = match &r.verdict {
                    Verdict::Covered { witnesses } => format!("covered by {}", witnesses.join(", ")),
                    Verdict::Uncovered => "uncovered".to_string(),
                    Verdict::UnknownBudget => "unknown (budget)".to_string(),
                };
                let _ = writeln!(out, "  {:<30} {status}", r.id);
            }
        }
        let mut per_tag: BTreeMap<&str, (usize, usize, usize)> = BTreeMap::new();
        for r in &self.rows {
            let e = per_tag.entry(&r.tag).or_default();
            e.0 += 1;
            match r.verdict {
                Verdict::Covered { .. } => e.1 += 1,
                Verdict::UnknownBudget => e.2 += 1,
                Verdict::Uncovered => {}
            }
        }
        for (tag, (total, covered, unknown)) in &per_tag {
            let _ = write!(out, "{tag:<10} {covered}/{total} covered");
            if *unknown > 0 {
                let _ = write!(out, " ({unknown} unknown)");
            }
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "score {:.2} over {} objectives, {} tests",
            self.score(),
            self.rows.len(),
            self.num_tests
        );
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from("htolcov-report-v1\nid,criterion,status,witnesses\n");
        for r in &self.rows {
            let (status, wit) = match &r.verdict {
                Verdict::Covered { witnesses } => ("covered", witnesses.join(";")),
                Verdict::Uncovered => ("uncovered", String::new()),
                Verdict::UnknownBudget => ("unknown-budget", String::new()),
            };
            let _ = writeln!(out, "{},{},{status},{wit}", r.id, r.tag);
        }
        out
    }
}

/// Measures every item against the suite. The suite is executed and
/// harvested once; the atom index is shared across objectives.
pub fn measure(
    p: &Program,
    items: &[MeasureItem],
    tests: &[TestDatum],
    cfg: &MeasureConfig,
) -> Result<MeasureReport, MeasureError> {
    let mut atoms = AtomIndex::new();
    let mut normalized: Vec<(Dnf, Vec<Vec<usize>>)> = Vec::with_capacity(items.len());
    for item in items {
        let violations = check_well_formed(&item.hl);
        if !violations.is_empty() {
            return Err(MeasureError::IllFormed {
                id: item.id.clone(),
                violations,
            });
        }
        let dnf = normalize_dnf(&item.hl, cfg.disjunct_cap).map_err(|source| {
            MeasureError::Normalize {
                id: item.id.clone(),
                source,
            }
        })?;
        let ids = atoms.intern_dnf(&dnf);
        normalized.push((dnf, ids));
    }
    let log = harvest_suite(p, &atoms, tests, cfg.step_limit, cfg.dedup)?;
    let rows = items
        .iter()
        .zip(&normalized)
        .map(|(item, (dnf, ids))| ObjectiveResult {
            id: item.id.clone(),
            tag: item.tag.clone(),
            verdict: consolidate(p, dnf, ids, &log, cfg.budget),
        })
        .collect();
    Ok(MeasureReport {
        rows,
        num_tests: tests.len(),
    })
}
