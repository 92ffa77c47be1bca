//! Enumeration, random search, and density statistics for normal
//! basis generators. The census doubles as a cross-validation
//! harness: with the default policy every applicable criterion runs
//! on every element, and any disagreement aborts the sweep with a
//! full diagnostic instead of producing a table.

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::criteria::{CriteriaSuite, CriterionId};
use crate::error::{DisagreementReport, Error, Result};
use crate::field::{make_field, rel_trace, FFElement};
use crate::num::gcd_u128;

/// Ceiling on exhaustive sweeps unless the caller raises it.
pub const DEFAULT_BOUND: u128 = 1 << 20;

/// Fields at or below this size may return their generator lists.
pub const LIST_LIMIT: u128 = 1 << 12;

/// Which criteria a sweep consults per element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CriterionPolicy {
    /// Every applicable criterion, with disagreement detection.
    All,
    /// One named criterion; it must apply to the field pair.
    Single(CriterionId),
}

/// Tuning knobs shared by the census entry points.
#[derive(Debug, Clone, Copy)]
pub struct CensusOptions {
    /// Seed for field moduli and roots of unity.
    pub seed: u64,
    /// Largest field size an exhaustive sweep will accept.
    pub bound: u128,
    /// Worker threads. The output is identical for every value.
    pub workers: usize,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            seed: 0,
            bound: DEFAULT_BOUND,
            workers: 1,
        }
    }
}

/// Result of one exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct Enumeration {
    pub count: u128,
    /// Present only when requested and the field is small enough.
    pub elements: Option<Vec<FFElement>>,
}

/// One line of the census table.
#[derive(Debug, Clone)]
pub struct CensusRow {
    pub q: u128,
    pub n: u64,
    pub coprime: bool,
    /// Number of cyclotomic classes, 0 when gcd(q, n) > 1.
    pub r: usize,
    pub nbg_count: u128,
    pub field_size: u128,
    /// nbg_count / field_size in lowest terms.
    pub density: (u128, u128),
    pub criteria_used: Vec<CriterionId>,
    pub elapsed: Duration,
}

impl CensusRow {
    pub fn to_json(&self, with_elapsed: bool) -> Value {
        let mut obj = Map::new();
        obj.insert("q".into(), json!(self.q.to_string()));
        obj.insert("n".into(), json!(self.n));
        obj.insert("coprime".into(), json!(self.coprime));
        obj.insert("r".into(), json!(self.r));
        obj.insert("nbg_count".into(), json!(self.nbg_count.to_string()));
        obj.insert("field_size".into(), json!(self.field_size.to_string()));
        obj.insert(
            "density".into(),
            json!({
                "num": self.density.0.to_string(),
                "den": self.density.1.to_string(),
            }),
        );
        obj.insert(
            "criteria_used".into(),
            Value::Array(
                self.criteria_used
                    .iter()
                    .map(|id| json!(id.as_str()))
                    .collect(),
            ),
        );
        if with_elapsed {
            obj.insert("elapsed_ms".into(), json!(self.elapsed.as_millis() as u64));
        }
        Value::Object(obj)
    }
}

/// Aligned text rendering of a census table.
pub fn render_table(rows: &[CensusRow], with_elapsed: bool) -> String {
    let mut header = vec![
        "q".to_string(),
        "n".to_string(),
        "coprime".to_string(),
        "r".to_string(),
        "nbg_count".to_string(),
        "field_size".to_string(),
        "density".to_string(),
        "criteria".to_string(),
    ];
    if with_elapsed {
        header.push("elapsed_ms".to_string());
    }
    let mut table = vec![header];
    for row in rows {
        let mut line = vec![
            row.q.to_string(),
            row.n.to_string(),
            row.coprime.to_string(),
            row.r.to_string(),
            row.nbg_count.to_string(),
            row.field_size.to_string(),
            format!("{}/{}", row.density.0, row.density.1),
            row.criteria_used
                .iter()
                .map(|id| id.as_str())
                .collect::<Vec<_>>()
                .join(","),
        ];
        if with_elapsed {
            line.push(row.elapsed.as_millis().to_string());
        }
        table.push(line);
    }
    let cols = table[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| table.iter().map(|line| line[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for line in &table {
        let rendered: Vec<String> = line
            .iter()
            .enumerate()
            .map(|(c, cell)| format!("{cell:<width$}", width = widths[c]))
            .collect();
        out.push_str(rendered.join("  ").trim_end());
        out.push('\n');
    }
    out
}

struct SlabOutcome {
    nbg_count: u128,
    collected: Vec<FFElement>,
}

/// Criteria a sweep runs for one element, already checked applicable.
fn sweep_ids(suite: &CriteriaSuite, policy: CriterionPolicy) -> Result<Vec<CriterionId>> {
    match policy {
        CriterionPolicy::All => Ok(suite.applicable().to_vec()),
        CriterionPolicy::Single(id) => {
            if suite.applicable().contains(&id) {
                Ok(vec![id])
            } else {
                Err(Error::NotApplicable(
                    "the requested criterion does not cover this field pair",
                ))
            }
        }
    }
}

fn disagreement(
    suite: &CriteriaSuite,
    index: u128,
    alpha: &FFElement,
    conj: &[FFElement],
) -> Error {
    let verdicts = CriterionId::ALL
        .iter()
        .map(|&id| {
            let v = suite.decide(id, alpha, conj).ok().flatten();
            (id.as_str().to_string(), v)
        })
        .collect();
    Error::Disagreement(Box::new(DisagreementReport {
        q: suite.q(),
        n: suite.n(),
        element_index: index,
        element: alpha.to_string(),
        verdicts,
    }))
}

fn sweep_slab(
    suite: &CriteriaSuite,
    ids: &[CriterionId],
    lo: u128,
    hi: u128,
    collect: bool,
) -> Result<SlabOutcome> {
    let mut out = SlabOutcome {
        nbg_count: 0,
        collected: Vec::new(),
    };
    for k in lo..hi {
        let alpha = FFElement::from_index(suite.ext(), k)?;
        let conj = suite.conjugates(&alpha)?;
        let mut agreed: Option<bool> = None;
        for &id in ids {
            let v = suite
                .decide(id, &alpha, &conj)?
                .expect("ids come from the applicable list");
            match agreed {
                None => agreed = Some(v),
                Some(prev) if prev != v => {
                    return Err(disagreement(suite, k, &alpha, &conj));
                }
                Some(_) => {}
            }
        }
        if agreed == Some(true) {
            out.nbg_count += 1;
            if collect {
                out.collected.push(alpha);
            }
        }
    }
    Ok(out)
}

/// Walk every element, applying the policy's criteria. Workers split
/// the index range into contiguous slabs and results merge in index
/// order, so the outcome is byte-for-byte independent of the worker
/// count; with `CriterionPolicy::All` any disagreement aborts with
/// the lowest-index witness.
fn sweep(
    suite: &CriteriaSuite,
    policy: CriterionPolicy,
    workers: usize,
    bound: u128,
    collect: bool,
) -> Result<(Enumeration, Vec<CriterionId>)> {
    let size = suite.ext().cardinality();
    if size > bound {
        return Err(Error::BoundExceeded { size, bound });
    }
    let ids = sweep_ids(suite, policy)?;
    let collect = collect && size <= LIST_LIMIT;
    let workers = workers.clamp(1, size.min(64) as usize);
    let slab = size.div_ceil(workers as u128);
    let outcomes: Vec<Result<SlabOutcome>> = if workers == 1 {
        vec![sweep_slab(suite, &ids, 0, size, collect)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers as u128)
                .map(|w| {
                    let lo = w * slab;
                    let hi = size.min(lo + slab);
                    let ids = &ids;
                    scope.spawn(move || sweep_slab(suite, ids, lo, hi, collect))
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("sweep workers do not panic"))
                .collect()
        })
    };
    let mut count = 0u128;
    let mut elements = Vec::new();
    for outcome in outcomes {
        let slab = outcome?;
        count += slab.nbg_count;
        elements.extend(slab.collected);
    }
    Ok((
        Enumeration {
            count,
            elements: if collect { Some(elements) } else { None },
        },
        ids,
    ))
}

/// Count the normal basis generators of the suite's extension, and
/// list them when the field has at most [`LIST_LIMIT`] elements and a
/// list was requested. The enumeration order is by element index,
/// lowest coordinate fastest.
pub fn enumerate_nbg(
    suite: &CriteriaSuite,
    criterion: CriterionId,
    bound: u128,
    collect: bool,
) -> Result<Enumeration> {
    sweep(suite, CriterionPolicy::Single(criterion), 1, bound, collect).map(|(e, _)| e)
}

/// Rejection-sample a normal basis generator: candidates are drawn
/// from the seeded generator, screened by a nonzero-trace test and
/// the cheapest applicable criterion, and the survivor is confirmed
/// against the rank oracle before being returned.
pub fn random_nbg(
    suite: &CriteriaSuite,
    seed: u64,
    max_tries: Option<u64>,
) -> Result<FFElement> {
    let tries = max_tries.unwrap_or(64 * suite.n().max(1));
    let screen = [
        CriterionId::Thm4,
        CriterionId::Thm5,
        CriterionId::Thm7,
        CriterionId::Thm6,
        CriterionId::ReduceThm8,
        CriterionId::New,
        CriterionId::Classical,
        CriterionId::Oracle,
    ]
    .into_iter()
    .find(|id| suite.applicable().contains(id))
    .expect("the oracle applies everywhere");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..tries {
        let alpha = FFElement::random(suite.ext(), &mut rng);
        // The conjugates sum to the trace, so zero trace is a linear
        // dependence and the candidate can be rejected unexamined.
        if rel_trace(&alpha, 1)?.is_zero() {
            continue;
        }
        let conj = suite.conjugates(&alpha)?;
        let accepted = suite
            .decide(screen, &alpha, &conj)?
            .expect("screen criterion is applicable");
        if !accepted {
            continue;
        }
        let confirmed = suite
            .decide(CriterionId::Oracle, &alpha, &conj)?
            .expect("the oracle applies everywhere");
        if !confirmed {
            return Err(disagreement(suite, k as u128, &alpha, &conj));
        }
        return Ok(alpha);
    }
    Err(Error::SearchExhausted(
        "no normal basis generator found within the try budget",
    ))
}

/// Build the census table over the cross product of the base field
/// sizes and extension degrees. Every row is swept exhaustively with
/// the given policy; under [`CriterionPolicy::All`] the table doubles
/// as a cross-validation run and a disagreement aborts the whole
/// census.
pub fn census(
    qs: &[u128],
    ns: &[u64],
    policy: CriterionPolicy,
    opts: &CensusOptions,
) -> Result<Vec<CensusRow>> {
    let mut rows = Vec::with_capacity(qs.len() * ns.len());
    for &q in qs {
        let (p, m) = crate::criteria::split_prime_power(q)?;
        let base = make_field(p, m, opts.seed)?;
        for &n in ns {
            let start = Instant::now();
            let suite = CriteriaSuite::new(&base, n, opts.seed)?;
            let (enumeration, ids) = sweep(&suite, policy, opts.workers, opts.bound, false)?;
            let field_size = suite.ext().cardinality();
            let g = gcd_u128(enumeration.count, field_size).max(1);
            rows.push(CensusRow {
                q,
                n,
                coprime: gcd_u128(q, n as u128) == 1,
                r: suite.idempotent_set().map_or(0, |s| s.partition.len()),
                nbg_count: enumeration.count,
                field_size,
                density: (enumeration.count / g, field_size / g),
                criteria_used: ids,
                elapsed: start.elapsed(),
            });
        }
    }
    Ok(rows)
}
