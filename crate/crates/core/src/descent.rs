//! Finite-prefix auditor for descending chains of finite-index subgroups
//! with ideals attached.

use std::fmt;

use crate::error::{Error, Result};
use crate::laurent::{
    contract, extend, lemma8_lift_at, minimal_primes, mu_proper, FiniteIndexEmbedding, LaurentIdeal, LaurentRing,
    PrimeSet,
};

/// Chain `A_1 ⊇ A_2 ⊇ …` of subgroups of `A` (each relative to `A`) with
/// ideals `J_1, J_2, …` of `kA`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentCase {
    pub ring: LaurentRing,
    pub chain: Vec<FiniteIndexEmbedding>,
    pub ideals: Vec<LaurentIdeal>,
}

impl DescentCase {
    pub fn new(ring: LaurentRing, chain: Vec<FiniteIndexEmbedding>, ideals: Vec<LaurentIdeal>) -> Result<DescentCase> {
        if chain.is_empty() {
            return Err(Error::InvalidInput("descent case needs depth at least 1".into()));
        }
        if chain.len() != ideals.len() {
            return Err(Error::InvalidInput(format!("{} subgroups but {} ideals", chain.len(), ideals.len())));
        }
        if chain.iter().any(|e| e.rank() != ring.rank) || ideals.iter().any(|j| j.ring != ring) {
            return Err(Error::RingMismatch);
        }
        for i in 1..chain.len() {
            if !chain[i - 1].contains(&chain[i]) {
                return Err(Error::InvalidInput(format!("A_{} is not contained in A_{i}", i + 1)));
            }
        }
        Ok(DescentCase { ring, chain, ideals })
    }

    pub fn depth(&self) -> usize {
        self.chain.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    I,
    II,
    III,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::I => "i",
            Condition::II => "ii",
            Condition::III => "iii",
        })
    }
}

/// Verdicts for one index (1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexVerdict {
    pub index: usize,
    pub shrinking: bool,
    pub char_coprime: bool,
    pub clause_i: bool,
    pub clause_ii: bool,
    pub clause_iii: bool,
    pub mu: PrimeSet,
}

impl IndexVerdict {
    pub fn first_failure(&self) -> Option<Condition> {
        [(Condition::I, self.clause_i), (Condition::II, self.clause_ii), (Condition::III, self.clause_iii)]
            .into_iter()
            .find(|(_, ok)| !ok)
            .map(|(c, _)| c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub indices: Vec<IndexVerdict>,
}

impl ConditionReport {
    /// Earliest failing `(condition, index)`, ordered by index first.
    pub fn first_failure(&self) -> Option<(Condition, usize)> {
        self.indices.iter().find_map(|v| v.first_failure().map(|c| (c, v.index)))
    }
}

fn at_index<T>(i: usize, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::IndecisivePrimality(why) => Error::IndecisivePrimality(format!("index {i}: {why}")),
        e => e,
    })
}

pub fn check_conditions(case: &DescentCase) -> Result<ConditionReport> {
    let p = case.ring.field.characteristic();
    let base = case.chain[0].index();
    let mut indices = Vec::with_capacity(case.depth());
    let mut mu_1: Option<PrimeSet> = None;
    for (k, (a, j)) in case.chain.iter().zip(&case.ideals).enumerate() {
        let i = k + 1;
        let shrinking = k == 0 || a.index() > case.chain[k - 1].index();
        let rel = a.index() / base;
        let char_coprime = p == 0 || rel % p != 0;
        let clause_ii = at_index(i, extend(&at_index(i, contract(j, a))?, a))? == *j;
        let mu = at_index(i, minimal_primes(j))?;
        let first = mu_1.get_or_insert_with(|| mu.clone());
        let clause_iii = mu == *first && mu_proper(&mu, true);
        indices.push(IndexVerdict {
            index: i,
            shrinking,
            char_coprime,
            clause_i: shrinking && char_coprime,
            clause_ii,
            clause_iii,
            mu,
        });
    }
    Ok(ConditionReport { indices })
}

/// `|μ_i|` with `μ_i = μ_{kA_i}(J_i ∩ kA_i)`, and the start of the final plateau.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuTrace {
    pub sizes: Vec<usize>,
    pub mus: Vec<PrimeSet>,
    pub stabilization: usize,
}

/// Trace over the first `prefix` indices.
pub fn mu_cardinality_trace(case: &DescentCase, prefix: usize) -> Result<MuTrace> {
    let prefix = prefix.min(case.depth());
    let mut mus = Vec::with_capacity(prefix);
    for i in 0..prefix {
        let c = at_index(i + 1, contract(&case.ideals[i], &case.chain[i]))?;
        mus.push(at_index(i + 1, minimal_primes(&c))?);
    }
    let sizes: Vec<usize> = mus.iter().map(PrimeSet::len).collect();
    if let Some(i) = (1..sizes.len()).find(|&i| sizes[i] > sizes[i - 1]) {
        return Err(Error::MonotonicityViolation(i + 1));
    }
    let last = sizes.last().copied();
    let stabilization = (0..sizes.len()).find(|&i| sizes[i..].iter().all(|&s| Some(s) == last)).map_or(1, |i| i + 1);
    Ok(MuTrace { sizes, mus, stabilization })
}

/// Bounds for the plateau probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProbeBounds {
    pub levels: usize,
    pub degree: i64,
}

impl Default for ProbeBounds {
    fn default() -> ProbeBounds {
        ProbeBounds { levels: 8, degree: 64 }
    }
}

/// One prime of `μ_n` pushed down to level `i` and extended back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftStep {
    pub level: usize,
    pub prime: LaurentIdeal,
    pub contraction: LaurentIdeal,
    pub extension: LaurentIdeal,
    pub degree: i64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftTrace {
    /// Indices `i` at which every prime of `μ_i` lifted uniquely to level `i - 1`.
    pub unique_lifts: Vec<usize>,
    pub plateau_start: usize,
    pub steps: Vec<LiftStep>,
    pub collapse: Option<(usize, String)>,
}

fn ideal_degree(j: &LaurentIdeal) -> i64 {
    j.basis_laurent().iter().map(|p| p.degree()).max().unwrap_or(0)
}

/// Lemma-8 lifts between consecutive levels of the first `prefix` indices;
/// returns the indices checked.
pub fn lemma8_chain(case: &DescentCase, prefix: usize) -> Result<Vec<usize>> {
    let prefix = prefix.min(case.depth());
    let mut checked = Vec::new();
    for i in 2..=prefix {
        let upper = &case.chain[i - 2];
        let lower = &case.chain[i - 1];
        let j = &case.ideals[i - 1];
        let rel = upper.relative(lower)?;
        let ideal = at_index(i, contract(j, upper))?;
        let below = at_index(i, minimal_primes(&at_index(i, contract(j, lower))?))?;
        for q in &below.members {
            lemma8_lift_at(&ideal, &rel, q, i)?;
        }
        checked.push(i);
    }
    Ok(checked)
}

/// Pushes each prime of `μ_n` down to the deeper levels of the plateau and
/// extends it back, watching for the forced extension to blow up.
pub fn lifting_probe(case: &DescentCase, prefix: usize, n: usize, bounds: ProbeBounds) -> Result<LiftTrace> {
    let prefix = prefix.min(case.depth());
    let mut steps = Vec::new();
    let mut collapse = None;
    if n >= 1 && n <= prefix {
        let top = &case.chain[n - 1];
        let mu_n = at_index(n, minimal_primes(&at_index(n, contract(&case.ideals[n - 1], top))?))?;
        let last = prefix.min(n + bounds.levels);
        let mut first_failure = None;
        'levels: for i in n + 1..=last {
            let rel = top.relative(&case.chain[i - 1])?;
            for p in &mu_n.members {
                let q = contract(p, &rel)?;
                let e = extend(&q, &rel)?;
                let degree = ideal_degree(&e);
                let holds = e == *p;
                if !holds && first_failure.is_none() {
                    first_failure = Some(i);
                }
                let unit = e.is_unit();
                steps.push(LiftStep { level: i, prime: p.clone(), contraction: q, extension: e, degree, holds });
                if unit {
                    collapse = Some((i, "forced extension is the whole ring".to_string()));
                    break 'levels;
                }
                if degree > bounds.degree {
                    collapse = Some((i, format!("forced extension has degree {degree} > {}", bounds.degree)));
                    break 'levels;
                }
            }
        }
        if collapse.is_none() {
            if let Some(i) = first_failure {
                collapse = Some((i, "P differs from (P ∩ kA_i)kA_n".to_string()));
            }
        }
    }
    Ok(LiftTrace { unique_lifts: Vec::new(), plateau_start: n, steps, collapse })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    ConsistentToDepth(usize),
    Fails(Condition, usize),
    Collapse(usize),
    HypothesisFailed { index: usize, clause: String },
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::ConsistentToDepth(_) => write!(f, "CONSISTENT_TO_DEPTH"),
            Verdict::Fails(c, i) => write!(f, "FAILS({c},{i})"),
            Verdict::Collapse(i) => write!(f, "COLLAPSE({i})"),
            Verdict::HypothesisFailed { index, clause } => write!(f, "HypothesisFailed({index},\"{clause}\")"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub depth: usize,
    pub conditions: ConditionReport,
    pub trace: Option<MuTrace>,
    pub lifting: Option<LiftTrace>,
    pub verdict: Verdict,
    /// Everything passed on a strictly shrinking chain of depth ≥ 3 with a
    /// collapse-free plateau of length ≥ 2: worth a manual look.
    pub red_flag: bool,
}

pub fn audit(case: &DescentCase) -> Result<AuditReport> {
    audit_with(case, ProbeBounds::default())
}

pub fn audit_with(case: &DescentCase, bounds: ProbeBounds) -> Result<AuditReport> {
    let conditions = check_conditions(case)?;
    let failure = conditions.first_failure();
    let valid = failure.map_or(case.depth(), |(_, i)| i - 1);
    let trace = if valid > 0 { Some(mu_cardinality_trace(case, valid)?) } else { None };
    let mut report =
        AuditReport { depth: case.depth(), conditions, trace, lifting: None, verdict: Verdict::ConsistentToDepth(valid), red_flag: false };
    if let Some((c, i)) = failure {
        report.verdict = Verdict::Fails(c, i);
        return Ok(report);
    }
    let n = report.trace.as_ref().map_or(1, |t| t.stabilization);
    let unique_lifts = match lemma8_chain(case, valid) {
        Ok(l) => l,
        Err(Error::HypothesisFailed { index, clause }) => {
            report.verdict = Verdict::HypothesisFailed { index, clause };
            return Ok(report);
        }
        Err(e) => return Err(e),
    };
    let mut lifting = lifting_probe(case, valid, n, bounds)?;
    lifting.unique_lifts = unique_lifts;
    if let Some((i, _)) = &lifting.collapse {
        report.verdict = Verdict::Collapse(*i);
    } else {
        let plateau = valid + 1 - n;
        report.red_flag = case.depth() >= 3 && plateau >= 2;
    }
    report.lifting = Some(lifting);
    Ok(report)
}
