//! Brute-force restatement of the proposal stages, written against the
//! flat document rather than the engine's segmentation and state types.
//! Entities of earlier anaphors are taken from the engine's predictions;
//! the oracle independently checks that each prediction is the first
//! admissible candidate, so agreement is inductive.

use std::collections::HashSet;

use centerline::model::{AnaphorKind, ClauseKind, Document, Markable};
use centerline::resolution::{CandidateSource, ProposalTrace, ResolutionReport};
use centerline::Strategy;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expected {
    pub markable: String,
    pub entity: String,
    pub source: CandidateSource,
}

struct Item<'a> {
    m: &'a Markable,
    /// Whether the markable's clause is the utterance's matrix.
    in_matrix: bool,
    utterance: usize,
    first_clause: bool,
}

fn flatten<'a>(doc: &'a Document, per_clause: bool) -> Vec<Item<'a>> {
    let mut items = Vec::new();
    let mut next = 0usize;
    for s in &doc.sentences {
        let mains = s
            .clauses
            .iter()
            .filter(|c| c.kind == ClauseKind::Main)
            .count();
        // group of each clause within the sentence
        let mut seen_mains = 0usize;
        let groups: Vec<usize> = s
            .clauses
            .iter()
            .enumerate()
            .map(|(ci, c)| {
                if per_clause {
                    return ci;
                }
                if mains < 2 {
                    return 0;
                }
                if c.kind == ClauseKind::Main {
                    seen_mains += 1;
                }
                seen_mains.saturating_sub(1)
            })
            .collect();
        for (ci, c) in s.clauses.iter().enumerate() {
            let g = groups[ci];
            for m in &c.markables {
                items.push(Item {
                    m,
                    in_matrix: per_clause || c.kind != ClauseKind::Subordinate,
                    utterance: next + g,
                    first_clause: groups.iter().position(|x| *x == g) == Some(ci),
                });
            }
        }
        next += groups.last().map_or(0, |g| g + 1);
    }
    items
}

fn entity_of(m: &Markable, report: &ResolutionReport) -> String {
    if !m.is_anaphoric() {
        return m.entity.to_string();
    }
    match report.row(&m.id).and_then(|r| r.predicted.as_ref()) {
        Some(e) if m.kind.is_resolvable() => e.to_string(),
        _ => format!("?{}", m.id),
    }
}

fn bound(items: &[Item<'_>], idx: usize, report: &ResolutionReport) -> bool {
    let m = items[idx].m;
    if m.is_anaphoric() {
        return m.kind.is_resolvable() && report.row(&m.id).is_some_and(|r| r.predicted.is_some());
    }
    let e = m.entity.to_string();
    items[..idx].iter().any(|it| entity_of(it.m, report) == e)
}

/// Cf of utterance `u`: matrix markables, bound before unbound, then by
/// position, one entry per entity.
fn cf(items: &[Item<'_>], u: usize, report: &ResolutionReport) -> Vec<(String, String)> {
    let mut bound_part = Vec::new();
    let mut free_part = Vec::new();
    for (i, it) in items.iter().enumerate() {
        if it.utterance != u || !it.in_matrix {
            continue;
        }
        let entry = (it.m.id.clone(), entity_of(it.m, report));
        if bound(items, i, report) {
            bound_part.push(entry);
        } else {
            free_part.push(entry);
        }
    }
    let mut seen = HashSet::new();
    bound_part
        .into_iter()
        .chain(free_part)
        .filter(|(_, e)| seen.insert(e.clone()))
        .collect()
}

pub fn candidates(
    doc: &Document,
    strategy: Strategy,
    report: &ResolutionReport,
) -> Vec<(String, Vec<Expected>)> {
    let items = flatten(doc, strategy == Strategy::Linear);
    let mut out = Vec::new();
    for (idx, it) in items.iter().enumerate() {
        if !it.m.kind.is_resolvable() {
            continue;
        }
        let u = it.utterance;
        let prev: Vec<Expected> = if u == 0 {
            Vec::new()
        } else {
            cf(&items, u - 1, report)
                .into_iter()
                .map(|(markable, entity)| Expected {
                    markable,
                    entity,
                    source: CandidateSource::PrevCf,
                })
                .collect()
        };
        let preceding: Vec<usize> = (0..idx).filter(|&j| items[j].utterance == u).collect();
        let left =
            |js: &mut dyn Iterator<Item = &usize>, source: CandidateSource| -> Vec<Expected> {
                js.map(|&j| Expected {
                    markable: items[j].m.id.clone(),
                    entity: entity_of(items[j].m, report),
                    source,
                })
                .collect()
            };
        let list: Vec<Expected> = match strategy {
            Strategy::Linear | Strategy::InterFirst => {
                let mut v = prev.clone();
                v.extend(left(&mut preceding.iter(), CandidateSource::IntraLeft));
                v
            }
            Strategy::IntraFirst => {
                let mut v = left(&mut preceding.iter(), CandidateSource::IntraLeft);
                v.extend(prev.clone());
                v
            }
            Strategy::Functional => {
                let raw = if it.first_clause {
                    let mut v = prev.clone();
                    v.extend(left(&mut preceding.iter(), CandidateSource::IntraLeft));
                    v
                } else {
                    let mut v = left(
                        &mut preceding.iter().filter(|&&j| bound(&items, j, report)),
                        CandidateSource::IntraBound,
                    );
                    v.extend(prev.clone());
                    v.extend(left(
                        &mut preceding.iter().filter(|&&j| !bound(&items, j, report)),
                        CandidateSource::IntraRest,
                    ));
                    v
                };
                let mut seen = HashSet::new();
                raw.into_iter()
                    .filter(|c| seen.insert(c.entity.clone()))
                    .collect()
            }
        };
        out.push((it.m.id.clone(), list));
    }
    out
}

/// The candidate the filters should pick, by scanning in order.
pub fn first_admissible<'a>(
    doc: &Document,
    strategy: Strategy,
    anaphor: &Markable,
    list: &'a [Expected],
    semantics: bool,
) -> Option<&'a Expected> {
    let index = doc.index();
    let same_utterance = |id: &str| {
        let items = flatten(doc, strategy == Strategy::Linear);
        let ua = items
            .iter()
            .find(|i| i.m.id == anaphor.id)
            .unwrap()
            .utterance;
        items.iter().any(|i| i.m.id == id && i.utterance == ua)
    };
    list.iter().find(|c| {
        let cand = index.markable(&c.markable).unwrap();
        if anaphor.kind == AnaphorKind::Pronoun
            && cand.clause == anaphor.clause
            && same_utterance(&c.markable)
        {
            return false;
        }
        if let (Some(a), Some(b)) = (&anaphor.agr, &cand.agr) {
            if a != b {
                return false;
            }
        }
        if semantics {
            let esem = doc
                .entities
                .iter()
                .find(|(id, _)| id.as_str() == c.entity)
                .and_then(|(_, s)| s.clone())
                .or_else(|| cand.sem.clone());
            if let (Some(a), Some(b)) = (&anaphor.sem, &esem) {
                if a != b {
                    return false;
                }
            }
        }
        true
    })
}

/// Compares the engine's trace and choices with the oracle. Returns a
/// description of the first disagreement.
pub fn check(
    doc: &Document,
    strategy: Strategy,
    semantics: bool,
    report: &ResolutionReport,
    traces: &[ProposalTrace],
) -> Result<(), String> {
    let expected = candidates(doc, strategy, report);
    if expected.len() != traces.len() {
        return Err(format!(
            "{} traces, oracle has {}",
            traces.len(),
            expected.len()
        ));
    }
    let index = doc.index();
    for ((id, exp), trace) in expected.iter().zip(traces) {
        if *id != trace.anaphor {
            return Err(format!(
                "trace for {} where oracle expects {id}",
                trace.anaphor
            ));
        }
        let got: Vec<Expected> = trace
            .candidates
            .iter()
            .map(|c| Expected {
                markable: c.markable.id.clone(),
                entity: c.entity.to_string(),
                source: c.source,
            })
            .collect();
        if got != *exp {
            return Err(format!("{strategy} {id}: engine {got:?}\noracle {exp:?}"));
        }
        let anaphor = index.markable(id).unwrap();
        let pick = first_admissible(doc, strategy, anaphor, exp, semantics);
        let row = report.row(id).unwrap();
        let engine = row.antecedent.as_deref();
        if pick.map(|p| p.markable.as_str()) != engine {
            return Err(format!(
                "{strategy} {id}: engine chose {engine:?}, oracle {pick:?}"
            ));
        }
    }
    Ok(())
}

/// Context-boundedness of every markable given the engine's predictions.
pub fn bound_flags(
    doc: &Document,
    strategy: Strategy,
    report: &ResolutionReport,
) -> std::collections::HashMap<String, bool> {
    let items = flatten(doc, strategy == Strategy::Linear);
    (0..items.len())
        .map(|i| (items[i].m.id.clone(), bound(&items, i, report)))
        .collect()
}
