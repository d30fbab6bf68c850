//! Running discourse state of a resolution pass and the context-boundedness
//! test derived from it.

use std::collections::HashMap;
use std::fmt;

use crate::model::{EntityId, Markable};

/// One (entity, realizing markable) pair of a Cf list or a Cb.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfEntry {
    pub entity: EntityId,
    pub markable: Markable,
}

/// Centering data of one utterance.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CenteringState {
    pub cb: Option<CfEntry>,
    pub cf: Vec<CfEntry>,
}

/// Proposal stage that produced the winning candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stage {
    /// First clause of an utterance: previous Cf.
    Step1,
    /// First clause, after the previous Cf ran out: preceding markables.
    Fallback,
    /// Subsequent clause: context-bound markables of the utterance.
    Bound,
    /// Subsequent clause: previous Cf.
    PrevCf,
    /// Subsequent clause: everything not yet checked.
    Rest,
    /// Non-functional strategies: previous Cf.
    Cf,
    /// Non-functional strategies: preceding markables of the utterance.
    Intra,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Step1 => "step1",
            Stage::Fallback => "fallback",
            Stage::Bound => "2a",
            Stage::PrevCf => "2b",
            Stage::Rest => "2c",
            Stage::Cf => "cf",
            Stage::Intra => "intra",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub entity: EntityId,
    pub antecedent: String,
    pub stage: Stage,
}

#[derive(Debug, Clone, Default)]
pub struct ResolutionState {
    resolved: HashMap<String, Resolution>,
    prev_cf: Vec<CfEntry>,
    current_partial: Vec<String>,
    /// Every processed markable with the entity it carries in the discourse.
    history: Vec<(String, EntityId)>,
    ordinals: HashMap<String, usize>,
}

impl ResolutionState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Cf of the previously completed utterance; empty before the first.
    pub fn prev_cf(&self) -> &[CfEntry] {
        &self.prev_cf
    }

    pub fn resolution(&self, markable_id: &str) -> Option<&Resolution> {
        self.resolved.get(markable_id)
    }

    pub fn is_resolved(&self, markable_id: &str) -> bool {
        self.resolved.contains_key(markable_id)
    }

    /// Ids of the markables of the current utterance processed so far.
    pub fn current_partial(&self) -> &[String] {
        &self.current_partial
    }

    pub fn is_processed(&self, markable_id: &str) -> bool {
        self.ordinals.contains_key(markable_id)
    }

    /// The entity a markable stands for as far as the resolver knows: the
    /// gold entity of a non-anaphor, the predicted entity of a resolved
    /// anaphor, a fresh singleton for an unresolved one.
    pub fn entity_of(&self, m: &Markable) -> EntityId {
        if let Some(&i) = self.ordinals.get(&m.id) {
            return self.history[i].1.clone();
        }
        if !m.is_anaphoric() {
            return m.entity.clone();
        }
        match self.resolved.get(&m.id) {
            Some(r) => r.entity.clone(),
            None => EntityId::fresh(&m.id),
        }
    }

    /// Records a processed markable. `resolution` is only meaningful for
    /// anaphors; `None` marks an anaphor as unresolved.
    pub fn record(&mut self, m: &Markable, resolution: Option<Resolution>) {
        if let Some(r) = resolution.filter(|_| m.is_anaphoric()) {
            self.resolved.insert(m.id.clone(), r);
        }
        let entity = self.entity_of(m);
        self.push_history(m, entity);
    }

    /// Like [`record`](Self::record) but the markable carries `carried`
    /// forward instead of its predicted entity.
    pub(crate) fn record_carrying(
        &mut self,
        m: &Markable,
        resolution: Resolution,
        carried: EntityId,
    ) {
        self.resolved.insert(m.id.clone(), resolution);
        self.push_history(m, carried);
    }

    fn push_history(&mut self, m: &Markable, entity: EntityId) {
        if self.ordinals.contains_key(&m.id) {
            return;
        }
        self.ordinals.insert(m.id.clone(), self.history.len());
        self.history.push((m.id.clone(), entity));
        self.current_partial.push(m.id.clone());
    }

    /// Closes the current utterance; `cf` becomes the previous Cf.
    pub fn complete_utterance(&mut self, cf: Vec<CfEntry>) {
        self.prev_cf = cf;
        self.current_partial.clear();
    }

    fn mentioned_before(&self, entity: &EntityId, markable_id: &str) -> bool {
        let limit = self
            .ordinals
            .get(markable_id)
            .copied()
            .unwrap_or(self.history.len());
        self.history[..limit].iter().any(|(_, e)| e == entity)
    }
}

/// Whether a markable is given by the preceding discourse: a successfully
/// resolved anaphor, or a non-anaphor whose entity was already mentioned.
/// The gold entity of an anaphor is never looked at.
pub fn context_bound(m: &Markable, state: &ResolutionState) -> bool {
    if m.is_anaphoric() {
        state.is_resolved(&m.id)
    } else {
        state.mentioned_before(&m.entity, &m.id)
    }
}
