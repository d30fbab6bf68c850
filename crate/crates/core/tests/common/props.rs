//! Property bodies shared by the proptest suite and the acceptance runner.

use std::collections::HashSet;

use centerline::corpus_io::Severity;
use centerline::evaluation::{classify_errors, score};
use centerline::model::{validate_document, ClauseKind, Document, EntityId};
use centerline::resolution::{resolve_document_with, AlwaysAdmit, CandidateSource};
use centerline::{
    parse_document, resolve_document, serialize_document, ResolutionConfig, Strategy,
};
use proptest::prelude::*;

use super::oracle;

pub fn configs() -> Vec<ResolutionConfig> {
    let mut v = Vec::new();
    for s in Strategy::ALL {
        for sem in [false, true] {
            v.push(ResolutionConfig::new(s).with_semantics(sem));
        }
    }
    v
}

pub fn round_trip(doc: &Document) -> Result<(), TestCaseError> {
    let violations = validate_document(doc);
    prop_assert!(
        violations.iter().all(|v| v.rule.is_warning()),
        "{:?}",
        violations
    );
    let text = serialize_document(doc);
    let parsed = parse_document(&text);
    prop_assert!(
        parsed
            .diagnostics
            .iter()
            .all(|d| d.severity == Severity::Warning),
        "{:?}\n{}",
        parsed.diagnostics,
        text
    );
    prop_assert_eq!(&parsed.document, doc);
    prop_assert_eq!(serialize_document(&parsed.document), text);
    Ok(())
}

pub fn oracle_agreement(doc: &Document) -> Result<(), TestCaseError> {
    for cfg in configs() {
        let (report, traces) = resolve_document_with(doc, &cfg, &AlwaysAdmit).unwrap();
        let checked = oracle::check(doc, cfg.strategy, cfg.semantics_enabled, &report, &traces);
        prop_assert!(
            checked.is_ok(),
            "{}\n{}",
            checked.unwrap_err(),
            serialize_document(doc)
        );
    }
    Ok(())
}

/// Cf holds only matrix markables, one per entity, bound ones first; a Cb
/// comes from the previous Cf and is realized in the utterance.
pub fn cf_invariants(doc: &Document) -> Result<(), TestCaseError> {
    for cfg in configs() {
        let report = resolve_document(doc, &cfg).unwrap();
        let bound = oracle::bound_flags(doc, cfg.strategy, &report);
        for u in &report.centering {
            let matrix: HashSet<&str> = doc.sentences[u.sentence]
                .clauses
                .iter()
                .filter(|c| {
                    u.clauses.contains(&c.id)
                        && (u.clauses.len() == 1 || c.kind != ClauseKind::Subordinate)
                })
                .map(|c| c.id.as_str())
                .collect();
            let cf = &u.centering.cf;
            let mut seen = HashSet::new();
            for e in cf {
                prop_assert!(matrix.contains(e.markable.clause.as_str()));
                prop_assert!(seen.insert(e.entity.clone()));
            }
            let flags: Vec<bool> = cf.iter().map(|e| bound[&e.markable.id]).collect();
            prop_assert!(flags.windows(2).all(|w| w[0] || !w[1]), "{:?}", flags);
            if let Some(cb) = &u.centering.cb {
                let prev = &report.centering[u.index - 1].centering.cf;
                prop_assert!(prev.iter().any(|e| e.entity == cb.entity));
                prop_assert!(u.clauses.contains(&cb.markable.clause));
            }
        }
    }
    Ok(())
}

/// Functional proposals never repeat an entity and follow stage order.
pub fn functional_proposals(doc: &Document) -> Result<(), TestCaseError> {
    let cfg = ResolutionConfig::new(Strategy::Functional);
    let (_, traces) = resolve_document_with(doc, &cfg, &AlwaysAdmit).unwrap();
    let order = |s: CandidateSource| match s {
        CandidateSource::IntraBound => 0,
        CandidateSource::PrevCf => 1,
        CandidateSource::IntraRest | CandidateSource::IntraLeft => 2,
    };
    for t in &traces {
        let mut seen = HashSet::new();
        for c in &t.candidates {
            prop_assert!(seen.insert(c.entity.clone()));
        }
        let stages: Vec<_> = t.candidates.iter().map(|c| order(c.source)).collect();
        prop_assert!(stages.windows(2).all(|w| w[0] <= w[1]), "{:?}", stages);
        let first_clause = t
            .candidates
            .iter()
            .any(|c| c.source == CandidateSource::IntraLeft);
        let later_clause = t.candidates.iter().any(|c| {
            matches!(
                c.source,
                CandidateSource::IntraBound | CandidateSource::IntraRest
            )
        });
        prop_assert!(!(first_clause && later_clause));
    }
    Ok(())
}

fn map_entities(doc: &Document, f: impl Fn(&EntityId, bool) -> EntityId) -> Document {
    let mut out = doc.clone();
    for s in &mut out.sentences {
        for c in &mut s.clauses {
            for m in &mut c.markables {
                m.entity = f(&m.entity, m.is_anaphoric());
            }
        }
    }
    out
}

fn choices(
    doc: &Document,
    cfg: &ResolutionConfig,
) -> Vec<(Option<String>, Option<centerline::Stage>)> {
    resolve_document(doc, cfg)
        .unwrap()
        .rows
        .into_iter()
        .map(|r| (r.antecedent, r.stage))
        .collect()
}

/// Renaming every entity id leaves the chosen antecedents unchanged.
pub fn renaming_invariance(doc: &Document) -> Result<(), TestCaseError> {
    let rename = |e: &EntityId| EntityId::new(format!("z{}", e.as_str()));
    let mut renamed = map_entities(doc, |e, _| rename(e));
    renamed.entities = doc
        .entities
        .iter()
        .map(|(k, v)| (rename(k), v.clone()))
        .collect();
    for cfg in configs() {
        prop_assert_eq!(choices(doc, &cfg), choices(&renamed, &cfg));
    }
    Ok(())
}

/// Reassigning the gold entity of every anaphor leaves the chosen
/// antecedents unchanged.
pub fn masking(doc: &Document, shift: usize) -> Result<(), TestCaseError> {
    let ids: Vec<EntityId> = doc.entities.keys().cloned().collect();
    let altered = map_entities(doc, |e, anaphoric| {
        if !anaphoric {
            return e.clone();
        }
        let i = ids.iter().position(|x| x == e).unwrap();
        ids[(i + shift) % ids.len()].clone()
    });
    for cfg in configs() {
        prop_assert_eq!(choices(doc, &cfg), choices(&altered, &cfg));
    }
    Ok(())
}

/// Every error lands in exactly one bucket.
pub fn taxonomy_partition(doc: &Document) -> Result<(), TestCaseError> {
    let reports: Vec<_> = Strategy::TABLE_ORDER
        .iter()
        .map(|s| resolve_document(doc, &ResolutionConfig::new(*s)).unwrap())
        .collect();
    let tax = classify_errors(&reports, doc).unwrap();
    let n = doc.anaphors().count();
    let all_wrong = tax[0].1.any_strategy_wrong;
    for ((s, t), r) in tax.iter().zip(&reports) {
        let correct = score(r, doc).unwrap().cell(*s).unwrap().correct;
        prop_assert_eq!(t.errors(), n - correct);
        prop_assert_eq!(t.any_strategy_wrong, all_wrong);
        let fps = r.rows.iter().filter(|row| row.false_positive).count();
        prop_assert_eq!(t.false_positive, fps);
        prop_assert!(t.false_positive <= t.any_strategy_wrong + t.strategy_specific);
    }
    Ok(())
}
