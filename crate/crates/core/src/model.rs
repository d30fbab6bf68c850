//! Annotated discourse: entities, markables, clauses and sentences, plus
//! structural validation.

use std::collections::{HashMap, HashSet};
use std::fmt;

use indexmap::IndexMap;

/// Identifier of a discourse entity (one coreference chain).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EntityId(String);

/// Prefix reserved for entities minted at runtime for unresolved anaphors.
pub const FRESH_PREFIX: char = '?';

impl EntityId {
    pub fn new(id: impl Into<String>) -> Self {
        EntityId(id.into())
    }

    /// Singleton entity standing in for an anaphor that found no antecedent.
    pub fn fresh(markable_id: &str) -> Self {
        EntityId(format!("{FRESH_PREFIX}{markable_id}"))
    }

    pub fn is_fresh(&self) -> bool {
        self.0.starts_with(FRESH_PREFIX)
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EntityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for EntityId {
    fn from(s: &str) -> Self {
        EntityId::new(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Subject,
    Other,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Subject => "subj",
            Role::Other => "other",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "subj" => Some(Role::Subject),
            "other" => Some(Role::Other),
            _ => None,
        }
    }
}

/// Anaphoric status of a markable. Everything except `None` is anaphoric;
/// only pronouns and nominal anaphors are handled by the resolver, the
/// remaining kinds are recorded as unresolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnaphorKind {
    None,
    Pronoun,
    Nominal,
    Prepositional,
    Plural,
    SetMember,
    SentenceAnaphor,
    GlobalFocus,
}

impl AnaphorKind {
    pub const ALL: [AnaphorKind; 8] = [
        AnaphorKind::None,
        AnaphorKind::Pronoun,
        AnaphorKind::Nominal,
        AnaphorKind::Prepositional,
        AnaphorKind::Plural,
        AnaphorKind::SetMember,
        AnaphorKind::SentenceAnaphor,
        AnaphorKind::GlobalFocus,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AnaphorKind::None => "none",
            AnaphorKind::Pronoun => "pron",
            AnaphorKind::Nominal => "nom",
            AnaphorKind::Prepositional => "prep",
            AnaphorKind::Plural => "plural",
            AnaphorKind::SetMember => "setmem",
            AnaphorKind::SentenceAnaphor => "sent",
            AnaphorKind::GlobalFocus => "global",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s)
    }

    pub fn is_anaphoric(self) -> bool {
        self != AnaphorKind::None
    }

    /// Kinds the proposal strategies actually try to resolve.
    pub fn is_resolvable(self) -> bool {
        matches!(self, AnaphorKind::Pronoun | AnaphorKind::Nominal)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Markable {
    pub id: String,
    /// Id of the clause this markable belongs to.
    pub clause: String,
    /// Left-to-right position inside the clause.
    pub pos: u32,
    pub surface: String,
    /// Gold entity. Never consulted for anaphoric markables during resolution.
    pub entity: EntityId,
    pub agr: Option<String>,
    pub role: Role,
    pub kind: AnaphorKind,
    /// Semantic type of the expression itself (e.g. the head noun's concept).
    pub sem: Option<String>,
}

impl Markable {
    pub fn is_anaphoric(&self) -> bool {
        self.kind.is_anaphoric()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClauseKind {
    Matrix,
    Subordinate,
    Main,
}

impl ClauseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ClauseKind::Matrix => "matrix",
            ClauseKind::Subordinate => "subord",
            ClauseKind::Main => "main",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "matrix" => Some(ClauseKind::Matrix),
            "subord" => Some(ClauseKind::Subordinate),
            "main" => Some(ClauseKind::Main),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub id: String,
    pub kind: ClauseKind,
    pub pos: u32,
    pub markables: Vec<Markable>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub id: String,
    pub clauses: Vec<Clause>,
    pub raw_text: Option<String>,
}

impl Sentence {
    pub fn markables(&self) -> impl Iterator<Item = &Markable> {
        self.clauses.iter().flat_map(|c| c.markables.iter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Document {
    pub id: String,
    pub sentences: Vec<Sentence>,
    /// Entity table in declaration order, with an optional semantic tag.
    pub entities: IndexMap<EntityId, Option<String>>,
}

/// Where a markable sits in its document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub sentence: usize,
    pub clause: usize,
    pub index: usize,
    /// Position in the document-wide left-to-right order.
    pub ordinal: usize,
}

impl Document {
    pub fn new(id: impl Into<String>) -> Self {
        Document {
            id: id.into(),
            ..Default::default()
        }
    }

    /// All markables in document order (sentence, clause, position).
    pub fn markables(&self) -> impl Iterator<Item = &Markable> {
        self.sentences.iter().flat_map(|s| s.markables())
    }

    pub fn anaphors(&self) -> impl Iterator<Item = &Markable> {
        self.markables().filter(|m| m.is_anaphoric())
    }

    pub fn entity_sem(&self, entity: &EntityId) -> Option<&str> {
        self.entities.get(entity).and_then(|s| s.as_deref())
    }

    pub fn clause_count(&self) -> usize {
        self.sentences.iter().map(|s| s.clauses.len()).sum()
    }

    pub fn index(&self) -> DocIndex<'_> {
        DocIndex::new(self)
    }
}

/// Lookup tables over a document, keyed by markable id.
pub struct DocIndex<'a> {
    doc: &'a Document,
    locations: HashMap<&'a str, Location>,
    order: Vec<&'a Markable>,
}

impl<'a> DocIndex<'a> {
    pub fn new(doc: &'a Document) -> Self {
        let mut locations = HashMap::new();
        let mut order = Vec::new();
        for (si, s) in doc.sentences.iter().enumerate() {
            for (ci, c) in s.clauses.iter().enumerate() {
                for (mi, m) in c.markables.iter().enumerate() {
                    locations.entry(m.id.as_str()).or_insert(Location {
                        sentence: si,
                        clause: ci,
                        index: mi,
                        ordinal: order.len(),
                    });
                    order.push(m);
                }
            }
        }
        DocIndex {
            doc,
            locations,
            order,
        }
    }

    pub fn document(&self) -> &'a Document {
        self.doc
    }

    pub fn location(&self, markable_id: &str) -> Option<Location> {
        self.locations.get(markable_id).copied()
    }

    pub fn markable(&self, markable_id: &str) -> Option<&'a Markable> {
        self.location(markable_id).map(|l| self.order[l.ordinal])
    }

    pub fn in_order(&self) -> &[&'a Markable] {
        &self.order
    }

    /// Closest preceding markable that shares the markable's gold entity.
    pub fn gold_antecedent(&self, markable_id: &str) -> Option<&'a Markable> {
        let loc = self.location(markable_id)?;
        let entity = &self.order[loc.ordinal].entity;
        self.order[..loc.ordinal]
            .iter()
            .rev()
            .find(|m| &m.entity == entity)
            .copied()
    }

    /// True when the gold antecedent lies in the anaphor's own sentence.
    pub fn is_intra_sentential(&self, markable_id: &str) -> bool {
        match (
            self.location(markable_id),
            self.gold_antecedent(markable_id),
        ) {
            (Some(loc), Some(ante)) => self
                .location(&ante.id)
                .is_some_and(|a| a.sentence == loc.sentence),
            _ => false,
        }
    }
}

/// A broken structural rule, naming the offending id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub id: String,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    EmptyId,
    MalformedToken(String),
    ReservedEntityPrefix,
    DuplicateId(&'static str),
    EmptySentence,
    ClausePositions,
    /// Main clauses next to a matrix clause.
    MainWithMatrix,
    /// Subordinate clauses hanging off main clauses. Accepted: each main
    /// clause acts as the matrix of the subordinates that follow it.
    SubordinateUnderMain,
    MatrixCount(usize),
    UnknownEntity(String),
    EmptySurface,
    ClauseMismatch(String),
    MarkablePositions,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::EmptyId => write!(f, "empty id"),
            Rule::MalformedToken(t) => {
                write!(f, "`{t}` is not a bare token (whitespace, quote or `=`)")
            }
            Rule::ReservedEntityPrefix => {
                write!(f, "entity ids may not start with `{FRESH_PREFIX}`")
            }
            Rule::DuplicateId(what) => write!(f, "duplicate {what} id"),
            Rule::EmptySentence => write!(f, "sentence has no clauses"),
            Rule::ClausePositions => write!(f, "clause positions are not consecutive from 0"),
            Rule::MainWithMatrix => write!(f, "sentence mixes main clauses with a matrix clause"),
            Rule::SubordinateUnderMain => write!(
                f,
                "subordinate clauses attached to main clauses; each main clause is taken as their matrix"
            ),
            Rule::MatrixCount(n) => write!(f, "expected exactly one matrix clause, found {n}"),
            Rule::UnknownEntity(e) => write!(f, "entity `{e}` is not declared"),
            Rule::EmptySurface => write!(f, "empty surface string"),
            Rule::ClauseMismatch(c) => write!(f, "markable claims clause `{c}`"),
            Rule::MarkablePositions => {
                write!(f, "markable positions are not strictly ascending")
            }
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.id, self.rule)
    }
}

fn is_bare_token(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c == '"' || c == '=')
}

/// Checks every structural invariant; an empty list means the document is
/// well formed. Pure and deterministic.
impl Rule {
    /// Rules about how a sentence is built from clauses.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Rule::EmptySentence
                | Rule::ClausePositions
                | Rule::MainWithMatrix
                | Rule::SubordinateUnderMain
                | Rule::MatrixCount(_)
        )
    }

    /// Rules that flag an unusual but processable structure.
    pub fn is_warning(&self) -> bool {
        matches!(self, Rule::SubordinateUnderMain)
    }
}

pub fn validate_document(doc: &Document) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut push = |id: &str, rule: Rule| {
        out.push(Violation {
            id: id.to_string(),
            rule,
        })
    };

    let check_token = |id: &str, push: &mut dyn FnMut(&str, Rule)| {
        if id.is_empty() {
            push(id, Rule::EmptyId);
        } else if !is_bare_token(id) {
            push(id, Rule::MalformedToken(id.to_string()));
        }
    };

    check_token(&doc.id, &mut push);
    for (entity, sem) in &doc.entities {
        check_token(entity.as_str(), &mut push);
        if entity.is_fresh() {
            push(entity.as_str(), Rule::ReservedEntityPrefix);
        }
        if let Some(tag) = sem {
            if !is_bare_token(tag) || tag == "-" {
                push(entity.as_str(), Rule::MalformedToken(tag.clone()));
            }
        }
    }

    let mut sentence_ids = HashSet::new();
    let mut clause_ids = HashSet::new();
    let mut markable_ids = HashSet::new();
    for s in &doc.sentences {
        check_token(&s.id, &mut push);
        if !sentence_ids.insert(s.id.as_str()) {
            push(&s.id, Rule::DuplicateId("sentence"));
        }
        if s.clauses.is_empty() {
            push(&s.id, Rule::EmptySentence);
        }
        if s.clauses
            .iter()
            .enumerate()
            .any(|(i, c)| c.pos as usize != i)
        {
            push(&s.id, Rule::ClausePositions);
        }
        let mains = s
            .clauses
            .iter()
            .filter(|c| c.kind == ClauseKind::Main)
            .count();
        let matrices = s
            .clauses
            .iter()
            .filter(|c| c.kind == ClauseKind::Matrix)
            .count();
        if mains > 0 && matrices > 0 {
            push(&s.id, Rule::MainWithMatrix);
        } else if mains > 0 && mains < s.clauses.len() {
            push(&s.id, Rule::SubordinateUnderMain);
        } else if mains == 0 && !s.clauses.is_empty() && matrices != 1 {
            push(&s.id, Rule::MatrixCount(matrices));
        }

        for c in &s.clauses {
            check_token(&c.id, &mut push);
            if !clause_ids.insert(c.id.as_str()) {
                push(&c.id, Rule::DuplicateId("clause"));
            }
            if c.markables.windows(2).any(|w| w[0].pos >= w[1].pos) {
                push(&c.id, Rule::MarkablePositions);
            }
            for m in &c.markables {
                check_token(&m.id, &mut push);
                if !markable_ids.insert(m.id.as_str()) {
                    push(&m.id, Rule::DuplicateId("markable"));
                }
                if m.clause != c.id {
                    push(&m.id, Rule::ClauseMismatch(m.clause.clone()));
                }
                if m.surface.is_empty() {
                    push(&m.id, Rule::EmptySurface);
                }
                if !doc.entities.contains_key(&m.entity) {
                    push(m.entity.as_str(), Rule::UnknownEntity(m.entity.to_string()));
                }
                for tag in m.agr.iter().chain(m.sem.iter()) {
                    if !is_bare_token(tag) || tag == "-" {
                        push(&m.id, Rule::MalformedToken(tag.clone()));
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mk(id: &str, clause: &str, pos: u32, ent: &str, kind: AnaphorKind) -> Markable {
        Markable {
            id: id.into(),
            clause: clause.into(),
            pos,
            surface: id.to_uppercase(),
            entity: ent.into(),
            agr: None,
            role: Role::Other,
            kind,
            sem: None,
        }
    }

    fn two_sentence_doc() -> Document {
        let mut doc = Document::new("d");
        doc.entities.insert("e1".into(), Some("THING".into()));
        doc.entities.insert("e2".into(), None);
        doc.sentences.push(Sentence {
            id: "s1".into(),
            raw_text: None,
            clauses: vec![
                Clause {
                    id: "c1".into(),
                    kind: ClauseKind::Subordinate,
                    pos: 0,
                    markables: vec![mk("m1", "c1", 0, "e2", AnaphorKind::None)],
                },
                Clause {
                    id: "c2".into(),
                    kind: ClauseKind::Matrix,
                    pos: 1,
                    markables: vec![mk("m2", "c2", 0, "e1", AnaphorKind::None)],
                },
            ],
        });
        doc.sentences.push(Sentence {
            id: "s2".into(),
            raw_text: Some("It works.".into()),
            clauses: vec![Clause {
                id: "c3".into(),
                kind: ClauseKind::Main,
                pos: 0,
                markables: vec![mk("m3", "c3", 0, "e1", AnaphorKind::Pronoun)],
            }],
        });
        doc
    }

    #[test]
    fn well_formed_document_has_no_violations() {
        assert_eq!(validate_document(&two_sentence_doc()), vec![]);
    }

    #[test]
    fn mixing_main_and_matrix_names_the_sentence() {
        let mut doc = two_sentence_doc();
        doc.sentences[0].clauses[0].kind = ClauseKind::Main;
        let v = validate_document(&doc);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].id, "s1");
        assert_eq!(v[0].rule, Rule::MainWithMatrix);
        assert!(!v[0].rule.is_warning());
    }

    #[test]
    fn subordinate_under_main_is_only_a_warning() {
        let mut doc = two_sentence_doc();
        for c in &mut doc.sentences[0].clauses {
            c.kind = match c.kind {
                ClauseKind::Matrix => ClauseKind::Main,
                k => k,
            };
        }
        let v = validate_document(&doc);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, Rule::SubordinateUnderMain);
        assert!(v[0].rule.is_warning());
    }

    #[test]
    fn undeclared_entity_is_named() {
        let mut doc = two_sentence_doc();
        doc.sentences[1].clauses[0].markables[0].entity = "e9".into();
        let v = validate_document(&doc);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].id, "e9");
    }

    #[test]
    fn duplicate_positions_and_ids() {
        let mut doc = two_sentence_doc();
        let dup = mk("m2", "c2", 0, "e1", AnaphorKind::None);
        doc.sentences[0].clauses[1].markables.push(dup);
        let rules: Vec<_> = validate_document(&doc)
            .into_iter()
            .map(|v| v.rule)
            .collect();
        assert!(rules.contains(&Rule::MarkablePositions));
        assert!(rules.contains(&Rule::DuplicateId("markable")));
    }

    #[test]
    fn two_matrix_clauses_rejected() {
        let mut doc = two_sentence_doc();
        doc.sentences[0].clauses[0].kind = ClauseKind::Matrix;
        let v = validate_document(&doc);
        assert_eq!(v[0].rule, Rule::MatrixCount(2));
    }

    #[test]
    fn validation_is_idempotent() {
        let mut doc = two_sentence_doc();
        doc.sentences[0].clauses[0].pos = 3;
        assert_eq!(validate_document(&doc), validate_document(&doc));
    }

    #[test]
    fn gold_antecedent_is_closest_preceding_mention() {
        let doc = two_sentence_doc();
        let idx = doc.index();
        assert_eq!(idx.gold_antecedent("m3").map(|m| m.id.as_str()), Some("m2"));
        assert!(idx.gold_antecedent("m1").is_none());
        assert!(!idx.is_intra_sentential("m3"));
    }
}
