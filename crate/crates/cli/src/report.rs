//! Machine-readable run reports.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub status: Status,
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub elapsed_ms: u64,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn new(suite: &str, cases: Vec<CaseResult>, elapsed_ms: u64) -> SuiteReport {
        let count = |s| cases.iter().filter(|c| c.status == s).count();
        SuiteReport {
            suite: suite.into(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            errors: count(Status::Error),
            elapsed_ms,
            cases,
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }
}

/// Budgets in force for a run; every default is written into the report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Budgets {
    /// Coset budget for intersections in non-abelian groups.
    pub cosets: usize,
    /// Vector trials for `is_induced_from`.
    pub vector_trials: usize,
    pub collapse_levels: usize,
    pub collapse_degree: i64,
    /// Degree bound for annihilators in prop4; `None` means `dim(W/WI) + 1`.
    pub annihilator_degree: Option<i64>,
    /// Randomized instances per suite; `None` keeps each suite's default.
    pub random: Option<usize>,
}

impl Default for Budgets {
    fn default() -> Budgets {
        Budgets {
            cosets: nilrep_core::nilgroup::ORBIT_BUDGET,
            vector_trials: nilrep_core::indmod::INDUCED_SEARCH_BUDGET,
            collapse_levels: 8,
            collapse_degree: 64,
            annihilator_degree: None,
            random: None,
        }
    }
}

impl Budgets {
    /// Applies one `key=value` override.
    pub fn set(&mut self, spec: &str) -> Result<(), String> {
        let (k, v) = spec.split_once('=').ok_or_else(|| format!("budget `{spec}` is not key=value"))?;
        let bad = |_| format!("budget {k}: `{v}` is not a number");
        match k {
            "cosets" => self.cosets = v.parse().map_err(bad)?,
            "vector_trials" => self.vector_trials = v.parse().map_err(bad)?,
            "collapse_levels" => self.collapse_levels = v.parse().map_err(bad)?,
            "collapse_degree" => self.collapse_degree = v.parse().map_err(bad)?,
            "annihilator_degree" => self.annihilator_degree = Some(v.parse().map_err(bad)?),
            "random" => self.random = Some(v.parse().map_err(bad)?),
            _ => return Err(format!("unknown budget `{k}`")),
        }
        Ok(())
    }

    pub fn random_or(&self, default: usize) -> usize {
        self.random.unwrap_or(default)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub toolkit_version: String,
    pub catalog_hash: String,
    pub suite: String,
    pub seed: u64,
    pub budgets: Budgets,
    pub passed: bool,
    pub elapsed_ms: u64,
    pub notes: Vec<String>,
    pub suites: Vec<SuiteReport>,
    /// Full audit reports, keyed by case name.
    pub descent: BTreeMap<String, serde_json::Value>,
}

impl RunReport {
    pub fn case_count(&self) -> usize {
        self.suites.iter().map(|s| s.cases.len()).sum()
    }

    /// Zeroes every timing field.
    pub fn without_timing(&self) -> RunReport {
        let mut r = self.clone();
        r.elapsed_ms = 0;
        for s in &mut r.suites {
            s.elapsed_ms = 0;
        }
        r
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One line per suite plus one per failing case.
    pub fn human(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            out.push_str(&format!(
                "{:<10} {:>4} pass {:>3} fail {:>3} error  {:>6} ms\n",
                s.suite, s.passed, s.failed, s.errors, s.elapsed_ms
            ));
            for c in s.cases.iter().filter(|c| c.status != Status::Pass) {
                let want = c.expected.as_deref().map(|e| format!(" (expected {e})")).unwrap_or_default();
                out.push_str(&format!("  {:?} {}: {}{} {}\n", c.status, c.name, c.verdict, want, c.detail));
            }
        }
        out.push_str(if self.passed { "all expectations met\n" } else { "expectations NOT met\n" });
        out
    }
}
