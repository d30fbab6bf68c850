//! Antecedent proposal strategies, candidate filters and the sequential
//! resolution driver.
//!
//! Markables are processed strictly left to right. For each pronoun or
//! nominal anaphor the active strategy produces an ordered candidate list;
//! the first candidate surviving the binding and compatibility filters wins.
//! Gold entities of anaphors are never consulted while choosing.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::centering::{compute_cb, compute_cf};
use crate::evaluation::detect_false_positive;
use crate::model::{AnaphorKind, Document, EntityId, Markable};
use crate::segmentation::{clause_segmentation_linear, segment, SegmentError, Utterance};
use crate::state::{context_bound, CenteringState, Resolution, ResolutionState, Stage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    /// Context-bound material of the utterance first, then the previous Cf.
    Functional,
    /// Clause-at-a-time centering.
    Linear,
    /// Previous Cf before sentence-internal candidates.
    InterFirst,
    /// Sentence-internal candidates before the previous Cf.
    IntraFirst,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Functional,
        Strategy::Linear,
        Strategy::InterFirst,
        Strategy::IntraFirst,
    ];

    /// Column order of comparison tables.
    pub const TABLE_ORDER: [Strategy; 4] = [
        Strategy::Linear,
        Strategy::InterFirst,
        Strategy::IntraFirst,
        Strategy::Functional,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Functional => "functional",
            Strategy::Linear => "linear",
            Strategy::InterFirst => "inter",
            Strategy::IntraFirst => "intra",
        }
    }

    /// Longer column heading.
    pub fn heading(self) -> &'static str {
        match self {
            Strategy::Functional => "functional",
            Strategy::Linear => "linear",
            Strategy::InterFirst => "inter > intra",
            Strategy::IntraFirst => "intra > inter",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown strategy `{0}` (expected functional, linear, inter or intra)")]
pub struct UnknownStrategy(pub String);

impl FromStr for Strategy {
    type Err = UnknownStrategy;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "functional" => Ok(Strategy::Functional),
            "linear" => Ok(Strategy::Linear),
            "inter" | "inter_first" => Ok(Strategy::InterFirst),
            "intra" | "intra_first" => Ok(Strategy::IntraFirst),
            other => Err(UnknownStrategy(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResolutionConfig {
    pub strategy: Strategy,
    pub semantics_enabled: bool,
    pub binding_filter_enabled: bool,
    /// Evaluation aid: resolved anaphors carry their gold entity forward so
    /// one mistake does not propagate down the chain.
    pub chain_correct: bool,
}

impl ResolutionConfig {
    pub fn new(strategy: Strategy) -> Self {
        ResolutionConfig {
            strategy,
            semantics_enabled: false,
            binding_filter_enabled: true,
            chain_correct: false,
        }
    }

    pub fn with_semantics(mut self, on: bool) -> Self {
        self.semantics_enabled = on;
        self
    }

    pub fn with_binding(mut self, on: bool) -> Self {
        self.binding_filter_enabled = on;
        self
    }

    pub fn with_chain_correction(mut self, on: bool) -> Self {
        self.chain_correct = on;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CandidateSource {
    /// Context-bound markable of the current utterance.
    IntraBound,
    /// Element of the previous utterance's Cf.
    PrevCf,
    /// Not-yet-checked markable of the current utterance.
    IntraRest,
    /// Preceding markable of the current utterance.
    IntraLeft,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub markable: Markable,
    pub entity: EntityId,
    pub source: CandidateSource,
    pub rank: usize,
}

#[derive(Default)]
struct CandidateList {
    items: Vec<Candidate>,
    entities: HashSet<EntityId>,
    markables: HashSet<String>,
    unique_entities: bool,
}

impl CandidateList {
    fn by_entity() -> Self {
        CandidateList {
            unique_entities: true,
            ..Default::default()
        }
    }

    fn push(&mut self, markable: &Markable, entity: EntityId, source: CandidateSource) {
        if self.unique_entities && self.entities.contains(&entity) {
            return;
        }
        self.entities.insert(entity.clone());
        self.markables.insert(markable.id.clone());
        self.items.push(Candidate {
            markable: markable.clone(),
            entity,
            source,
            rank: self.items.len(),
        });
    }

    fn checked(&self, m: &Markable) -> bool {
        self.markables.contains(&m.id)
    }

    fn push_prev_cf(&mut self, state: &ResolutionState) {
        for e in state.prev_cf() {
            self.push(&e.markable, e.entity.clone(), CandidateSource::PrevCf);
        }
    }

    fn push_markables<'m>(
        &mut self,
        ms: impl IntoIterator<Item = &'m Markable>,
        source: CandidateSource,
        state: &ResolutionState,
    ) {
        for m in ms {
            self.push(m, state.entity_of(m), source);
        }
    }
}

/// Candidates under the functional strategy.
///
/// In the first clause of the utterance: the previous Cf in order, then
/// (fallback) the preceding markables of the utterance. In a later clause:
/// context-bound preceding markables left to right, then the previous Cf,
/// then the remaining preceding markables. No entity is proposed twice.
pub fn propose_functional(
    anaphor: &Markable,
    u: &Utterance<'_>,
    state: &ResolutionState,
) -> Vec<Candidate> {
    let preceding = u.preceding(&anaphor.id);
    let mut list = CandidateList::by_entity();
    if u.clause_of(&anaphor.id) == Some(0) {
        list.push_prev_cf(state);
        list.push_markables(preceding, CandidateSource::IntraLeft, state);
    } else {
        list.push_markables(
            preceding
                .iter()
                .copied()
                .filter(|m| context_bound(m, state)),
            CandidateSource::IntraBound,
            state,
        );
        list.push_prev_cf(state);
        let rest: Vec<_> = preceding.into_iter().filter(|m| !list.checked(m)).collect();
        list.push_markables(rest, CandidateSource::IntraRest, state);
    }
    list.items
}

/// Candidates under clause-at-a-time processing: the Cf of the previous
/// clause, then the preceding markables of this clause.
pub fn propose_linear(
    anaphor: &Markable,
    u_clause: &Utterance<'_>,
    state: &ResolutionState,
) -> Vec<Candidate> {
    let mut list = CandidateList::default();
    list.push_prev_cf(state);
    list.push_markables(
        u_clause.preceding(&anaphor.id),
        CandidateSource::IntraLeft,
        state,
    );
    list.items
}

pub fn propose_inter_first(
    anaphor: &Markable,
    u: &Utterance<'_>,
    state: &ResolutionState,
) -> Vec<Candidate> {
    let mut list = CandidateList::default();
    list.push_prev_cf(state);
    list.push_markables(u.preceding(&anaphor.id), CandidateSource::IntraLeft, state);
    list.items
}

pub fn propose_intra_first(
    anaphor: &Markable,
    u: &Utterance<'_>,
    state: &ResolutionState,
) -> Vec<Candidate> {
    let mut list = CandidateList::default();
    list.push_markables(u.preceding(&anaphor.id), CandidateSource::IntraLeft, state);
    list.push_prev_cf(state);
    list.items
}

pub fn propose(
    strategy: Strategy,
    anaphor: &Markable,
    u: &Utterance<'_>,
    state: &ResolutionState,
) -> Vec<Candidate> {
    match strategy {
        Strategy::Functional => propose_functional(anaphor, u, state),
        Strategy::Linear => propose_linear(anaphor, u, state),
        Strategy::InterFirst => propose_inter_first(anaphor, u, state),
        Strategy::IntraFirst => propose_intra_first(anaphor, u, state),
    }
}

/// Clause-mate exclusion: a pronoun cannot take an antecedent from its own
/// clause. Candidates from other utterances always pass.
pub fn binding_filter(anaphor: &Markable, cand: &Markable) -> bool {
    !(anaphor.kind == AnaphorKind::Pronoun && anaphor.clause == cand.clause)
}

/// Agreement must match when both sides carry a tag; with semantics
/// enabled, so must the semantic type. `entity_sem` is the type of the
/// candidate's entity and takes precedence over the candidate's own tag.
pub fn compatibility_filter(
    anaphor: &Markable,
    cand: &Markable,
    entity_sem: Option<&str>,
    cfg: &ResolutionConfig,
) -> bool {
    fn clash(a: Option<&str>, b: Option<&str>) -> bool {
        matches!((a, b), (Some(x), Some(y)) if x != y)
    }
    if clash(anaphor.agr.as_deref(), cand.agr.as_deref()) {
        return false;
    }
    !(cfg.semantics_enabled && clash(anaphor.sem.as_deref(), entity_sem.or(cand.sem.as_deref())))
}

/// Extra syntactic admissibility check applied after the binding filter
/// (e.g. control phenomena). The default admits everything.
pub trait SyntacticConstraint {
    fn admits(&self, anaphor: &Markable, cand: &Markable) -> bool;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AlwaysAdmit;

impl SyntacticConstraint for AlwaysAdmit {
    fn admits(&self, _: &Markable, _: &Markable) -> bool {
        true
    }
}

impl<F: Fn(&Markable, &Markable) -> bool> SyntacticConstraint for F {
    fn admits(&self, anaphor: &Markable, cand: &Markable) -> bool {
        self(anaphor, cand)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Correct,
    Wrong,
    Unresolved,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Correct => "correct",
            Outcome::Wrong => "wrong",
            Outcome::Unresolved => "unresolved",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportRow {
    pub mark_id: String,
    pub kind: AnaphorKind,
    pub predicted: Option<EntityId>,
    pub gold: EntityId,
    /// Markable whose entity was adopted.
    pub antecedent: Option<String>,
    pub stage: Option<Stage>,
    pub outcome: Outcome,
    pub false_positive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UtteranceCentering {
    pub index: usize,
    pub sentence: usize,
    pub clauses: Vec<String>,
    pub centering: CenteringState,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolutionReport {
    pub doc_id: String,
    pub config: ResolutionConfig,
    /// One row per anaphoric markable, in document order.
    pub rows: Vec<ReportRow>,
    pub centering: Vec<UtteranceCentering>,
}

impl ResolutionReport {
    pub fn row(&self, mark_id: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.mark_id == mark_id)
    }
}

/// Candidate list handed to the filters for one anaphor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProposalTrace {
    pub anaphor: String,
    pub utterance: usize,
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ResolveError {
    #[error(transparent)]
    Segment(#[from] SegmentError),
}

pub fn resolve_document(
    doc: &Document,
    cfg: &ResolutionConfig,
) -> Result<ResolutionReport, ResolveError> {
    resolve_document_with(doc, cfg, &AlwaysAdmit).map(|(r, _)| r)
}

/// Full driver: also returns the candidate list of every resolvable anaphor.
pub fn resolve_document_with(
    doc: &Document,
    cfg: &ResolutionConfig,
    constraint: &dyn SyntacticConstraint,
) -> Result<(ResolutionReport, Vec<ProposalTrace>), ResolveError> {
    let utterances = match cfg.strategy {
        Strategy::Linear => clause_segmentation_linear(doc),
        _ => segment(doc)?,
    };
    let index = doc.index();
    let mut state = ResolutionState::new();
    let mut rows = Vec::new();
    let mut traces = Vec::new();
    let mut centering = Vec::new();

    for u in &utterances {
        for (ci, clause) in u.clauses.iter().enumerate() {
            for m in &clause.markables {
                if !m.is_anaphoric() {
                    state.record(m, None);
                    continue;
                }
                if !m.kind.is_resolvable() {
                    state.record(m, None);
                    rows.push(unresolved_row(m));
                    continue;
                }
                let candidates = propose(cfg.strategy, m, u, &state);
                let chosen = candidates.iter().find(|c| {
                    let same_utterance = u.contains(&c.markable.id);
                    (!cfg.binding_filter_enabled
                        || !same_utterance
                        || binding_filter(m, &c.markable))
                        && constraint.admits(m, &c.markable)
                        && compatibility_filter(m, &c.markable, doc.entity_sem(&c.entity), cfg)
                });
                match chosen {
                    Some(c) => {
                        let resolution = Resolution {
                            entity: c.entity.clone(),
                            antecedent: c.markable.id.clone(),
                            stage: stage_for(cfg.strategy, c.source, ci == 0),
                        };
                        let correct = c.entity == m.entity;
                        let false_positive =
                            !correct && detect_false_positive(m, &c.markable, &index);
                        rows.push(ReportRow {
                            mark_id: m.id.clone(),
                            kind: m.kind,
                            predicted: Some(c.entity.clone()),
                            gold: m.entity.clone(),
                            antecedent: Some(c.markable.id.clone()),
                            stage: Some(resolution.stage),
                            outcome: if correct {
                                Outcome::Correct
                            } else {
                                Outcome::Wrong
                            },
                            false_positive,
                        });
                        if cfg.chain_correct {
                            state.record_carrying(m, resolution, m.entity.clone());
                        } else {
                            state.record(m, Some(resolution));
                        }
                    }
                    None => {
                        state.record(m, None);
                        rows.push(unresolved_row(m));
                    }
                }
                traces.push(ProposalTrace {
                    anaphor: m.id.clone(),
                    utterance: u.index,
                    candidates,
                });
            }
        }
        let cf = compute_cf(u, &state);
        let cb = compute_cb(state.prev_cf(), u, &state);
        centering.push(UtteranceCentering {
            index: u.index,
            sentence: u.sentence,
            clauses: u.clauses.iter().map(|c| c.id.clone()).collect(),
            centering: CenteringState { cb, cf: cf.clone() },
        });
        state.complete_utterance(cf);
    }

    Ok((
        ResolutionReport {
            doc_id: doc.id.clone(),
            config: *cfg,
            rows,
            centering,
        },
        traces,
    ))
}

fn unresolved_row(m: &Markable) -> ReportRow {
    ReportRow {
        mark_id: m.id.clone(),
        kind: m.kind,
        predicted: None,
        gold: m.entity.clone(),
        antecedent: None,
        stage: None,
        outcome: Outcome::Unresolved,
        false_positive: false,
    }
}

fn stage_for(strategy: Strategy, source: CandidateSource, first_clause: bool) -> Stage {
    use CandidateSource::*;
    match (strategy, source) {
        (Strategy::Functional, PrevCf) if first_clause => Stage::Step1,
        (Strategy::Functional, PrevCf) => Stage::PrevCf,
        (Strategy::Functional, IntraBound) => Stage::Bound,
        (Strategy::Functional, IntraRest) => Stage::Rest,
        (Strategy::Functional, IntraLeft) => Stage::Fallback,
        (_, PrevCf) => Stage::Cf,
        _ => Stage::Intra,
    }
}
