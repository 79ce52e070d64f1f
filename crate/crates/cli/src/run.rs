//! Suite dispatch and case execution.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::build::Built;
use crate::catalog::Catalog;
use crate::parse::CatalogError;
use crate::report::{Budgets, CaseResult, RunReport, Status, SuiteReport};
use crate::suites;

pub const SUITES: [&str; 13] = [
    "eq1", "lemma1", "lemma2", "lemma3", "prop1", "eq3", "lemma7", "lemma8", "induction", "culling", "prop3", "prop4",
    "descent",
];

/// What a case produced: a verdict label and whether its checks held.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub verdict: String,
    pub ok: bool,
    pub detail: String,
    pub payload: Option<serde_json::Value>,
}

impl Outcome {
    pub fn check(ok: bool, detail: impl Into<String>) -> Outcome {
        Outcome::labelled(if ok { "PASS" } else { "FAIL" }, ok, detail)
    }

    pub fn labelled(verdict: impl Into<String>, ok: bool, detail: impl Into<String>) -> Outcome {
        Outcome { verdict: verdict.into(), ok, detail: detail.into(), payload: None }
    }
}

pub type CaseFn<'a> = Box<dyn Fn() -> nilrep_core::Result<Outcome> + Send + Sync + 'a>;

pub struct Job<'a> {
    pub name: String,
    pub expect: Option<String>,
    pub run: CaseFn<'a>,
}

impl<'a> Job<'a> {
    pub fn new(name: impl Into<String>, run: impl Fn() -> nilrep_core::Result<Outcome> + Send + Sync + 'a) -> Job<'a> {
        Job { name: name.into(), expect: None, run: Box::new(run) }
    }

    pub fn expecting(mut self, expect: Option<String>) -> Job<'a> {
        self.expect = expect;
        self
    }
}

pub struct Ctx<'a> {
    pub catalog: &'a Catalog,
    pub built: &'a Built,
    pub budgets: Budgets,
    pub seed: u64,
}

impl Ctx<'_> {
    /// Independent stream for randomized instance `i` of `suite`.
    pub fn rng(&self, suite: &str, i: usize) -> ChaCha8Rng {
        let h = suite.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3));
        ChaCha8Rng::seed_from_u64(self.seed ^ h ^ (i as u64).wrapping_mul(0x9e3779b97f4a7c15))
    }
}

fn settle(job: &Job) -> (CaseResult, Option<serde_json::Value>) {
    let res = catch_unwind(AssertUnwindSafe(|| (job.run)()));
    let (status, verdict, detail, payload) = match res {
        Ok(Ok(o)) => {
            let status = match &job.expect {
                Some(e) if *e == o.verdict => Status::Pass,
                Some(_) => Status::Fail,
                None if o.ok => Status::Pass,
                None => Status::Fail,
            };
            (status, o.verdict, o.detail, o.payload)
        }
        Ok(Err(e)) => (Status::Error, "ERROR".to_string(), e.to_string(), None),
        Err(p) => {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            (Status::Error, "PANIC".to_string(), msg.unwrap_or_default(), None)
        }
    };
    (CaseResult { name: job.name.clone(), status, verdict, expected: job.expect.clone(), detail }, payload)
}

fn execute(suite: &str, jobs: Vec<Job>) -> (SuiteReport, Vec<(String, serde_json::Value)>) {
    let start = Instant::now();
    let settled: Vec<_> = jobs.par_iter().map(settle).collect();
    let mut payloads = Vec::new();
    let mut cases = Vec::with_capacity(settled.len());
    for (c, p) in settled {
        if let Some(p) = p {
            payloads.push((c.name.clone(), p));
        }
        cases.push(c);
    }
    (SuiteReport::new(suite, cases, start.elapsed().as_millis() as u64), payloads)
}

fn jobs_for<'a>(ctx: &'a Ctx<'a>, suite: &str) -> Vec<Job<'a>> {
    match suite {
        "eq1" => suites::groups::eq1(ctx),
        "lemma1" => suites::groups::lemma1(ctx),
        "lemma2" => suites::groups::lemma2(ctx),
        "lemma3" => suites::groups::lemma3(ctx),
        "prop1" => suites::groups::prop1(ctx),
        "eq3" => suites::laurent::eq3(ctx),
        "lemma7" => suites::laurent::lemma7(ctx),
        "lemma8" => suites::laurent::lemma8(ctx),
        "induction" => suites::modules::induction(ctx),
        "culling" => suites::modules::culling(ctx),
        "prop3" => suites::modules::prop3(ctx),
        "prop4" => suites::modules::prop4(ctx),
        "descent" => suites::descent::descent(ctx),
        _ => unreachable!("suite names are checked before dispatch"),
    }
}

pub fn catalog_hash(cat: &Catalog) -> String {
    hex::encode(Sha256::digest(cat.render().as_bytes()))
}

pub const NOTES: [&str; 2] = [
    "coefficient fields are prime fields or Q; locally finite fields beyond prime fields are not used",
    "COLLAPSE in descent audits is a finite-prefix heuristic, not a theorem-level claim",
];

/// Runs `suite` (or every suite for `all`) over the catalog.
pub fn run_suite(catalog: &Catalog, suite: &str, budgets: Budgets, seed: u64) -> Result<RunReport, CatalogError> {
    let names: Vec<&str> = match suite {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        s => return Err(CatalogError::Io(format!("unknown suite `{s}`"))),
    };
    let start = Instant::now();
    let built = Built::from_catalog(catalog)?;
    let ctx = Ctx { catalog, built: &built, budgets, seed };
    let mut suites = Vec::new();
    let mut descent = BTreeMap::new();
    for name in names {
        let (report, payloads) = execute(name, jobs_for(&ctx, name));
        if name == "descent" {
            descent.extend(payloads);
        }
        suites.push(report);
    }
    Ok(RunReport {
        toolkit_version: env!("CARGO_PKG_VERSION").to_string(),
        catalog_hash: catalog_hash(catalog),
        suite: suite.to_string(),
        seed,
        budgets,
        passed: suites.iter().all(SuiteReport::ok),
        elapsed_ms: start.elapsed().as_millis() as u64,
        notes: NOTES.iter().map(|s| s.to_string()).collect(),
        suites,
        descent,
    })
}
