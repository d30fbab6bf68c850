#![allow(dead_code)]

pub mod oracle;
pub mod props;

use std::path::PathBuf;

use centerline::model::{
    AnaphorKind, Clause, ClauseKind, Document, EntityId, Markable, Role, Sentence,
};
use centerline::parse_document;
use proptest::prelude::*;

pub fn data_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub fn fixture(name: &str) -> Document {
    let text = std::fs::read_to_string(data_path(name)).unwrap();
    let parsed = parse_document(&text);
    assert!(
        parsed.diagnostics.is_empty(),
        "{name}: {:?}",
        parsed.diagnostics
    );
    parsed.document
}

#[derive(Debug, Clone)]
enum Shape {
    SimpleMain,
    SimpleMatrix,
    /// Subordinate clause count and where the matrix goes.
    Complex(usize, usize),
    Compound(usize),
    /// Main clauses, each flagged when a subordinate follows it, plus a
    /// leading subordinate.
    MainsWithSubordinates(Vec<bool>, bool),
}

impl Shape {
    fn kinds(&self) -> Vec<ClauseKind> {
        match *self {
            Shape::SimpleMain => vec![ClauseKind::Main],
            Shape::SimpleMatrix => vec![ClauseKind::Matrix],
            Shape::Complex(subs, at) => {
                let mut v = vec![ClauseKind::Subordinate; subs];
                v.insert(at.min(subs), ClauseKind::Matrix);
                v
            }
            Shape::Compound(n) => vec![ClauseKind::Main; n],
            Shape::MainsWithSubordinates(ref mains, leading) => {
                let mut v = Vec::new();
                if leading {
                    v.push(ClauseKind::Subordinate);
                }
                for &sub in mains {
                    v.push(ClauseKind::Main);
                    if sub {
                        v.push(ClauseKind::Subordinate);
                    }
                }
                v
            }
        }
    }
}

fn shape() -> impl Strategy<Value = Shape> {
    prop_oneof![
        Just(Shape::SimpleMain),
        Just(Shape::SimpleMatrix),
        (1usize..=2, 0usize..=2).prop_map(|(s, a)| Shape::Complex(s, a)),
        (2usize..=3).prop_map(Shape::Compound),
        (prop::collection::vec(any::<bool>(), 1..=2), any::<bool>())
            .prop_filter("needs a subordinate", |(m, l)| *l || m.contains(&true))
            .prop_map(|(m, l)| Shape::MainsWithSubordinates(m, l)),
    ]
}

#[derive(Debug, Clone)]
struct Draft {
    slot: usize,
    entity: usize,
    kind: AnaphorKind,
    agr: Option<&'static str>,
    role: Role,
    sem: Option<&'static str>,
    surface: String,
}

fn kind() -> impl Strategy<Value = AnaphorKind> {
    prop_oneof![
        5 => Just(AnaphorKind::None),
        3 => Just(AnaphorKind::Pronoun),
        2 => Just(AnaphorKind::Nominal),
        1 => prop::sample::select(vec![
            AnaphorKind::Prepositional,
            AnaphorKind::Plural,
            AnaphorKind::SetMember,
            AnaphorKind::SentenceAnaphor,
            AnaphorKind::GlobalFocus,
        ]),
    ]
}

fn draft(surface: BoxedStrategy<String>) -> impl Strategy<Value = Draft> {
    (
        0usize..64,
        0usize..4,
        kind(),
        prop::option::of(prop::sample::select(vec!["masc-sg", "fem-sg"])),
        prop::bool::ANY,
        prop::option::of(prop::sample::select(vec!["A", "B"])),
        surface,
    )
        .prop_map(|(slot, entity, kind, agr, subj, sem, surface)| Draft {
            slot,
            entity,
            kind,
            agr,
            role: if subj { Role::Subject } else { Role::Other },
            sem,
            surface,
        })
}

fn build(
    id: String,
    shapes: Vec<Shape>,
    mut drafts: Vec<Draft>,
    texts: Vec<Option<String>>,
    sems: Vec<Option<&'static str>>,
) -> Document {
    let mut doc = Document::new(id);
    for (i, sem) in sems.iter().enumerate() {
        doc.entities
            .insert(EntityId::new(format!("e{i}")), sem.map(str::to_string));
    }
    let kinds: Vec<Vec<ClauseKind>> = shapes.iter().map(|s| s.kinds()).collect();
    let total: usize = kinds.iter().map(Vec::len).sum();
    for s in &mut drafts {
        s.slot %= total;
    }
    drafts.sort_by_key(|s| s.slot);
    let mut slot = 0;
    let mut mark = 0;
    for (si, ks) in kinds.iter().enumerate() {
        let mut clauses = Vec::new();
        for (ci, k) in ks.iter().enumerate() {
            let cid = format!("s{si}c{ci}");
            let markables = drafts
                .iter()
                .filter(|s| s.slot == slot)
                .enumerate()
                .map(|(pos, s)| {
                    mark += 1;
                    Markable {
                        id: format!("m{mark}"),
                        clause: cid.clone(),
                        pos: pos as u32 * 2,
                        surface: s.surface.clone(),
                        entity: EntityId::new(format!("e{}", s.entity % sems.len())),
                        agr: s.agr.map(str::to_string),
                        role: s.role,
                        kind: s.kind,
                        sem: s.sem.map(str::to_string),
                    }
                })
                .collect();
            clauses.push(Clause {
                id: cid,
                kind: *k,
                pos: ci as u32,
                markables,
            });
            slot += 1;
        }
        doc.sentences.push(Sentence {
            id: format!("s{si}"),
            clauses,
            raw_text: texts.get(si).cloned().flatten(),
        });
    }
    doc
}

fn plain_surface() -> BoxedStrategy<String> {
    prop::sample::select(vec!["Rechner", "Drucker", "er", "sie", "Müller"])
        .prop_map(str::to_string)
        .boxed()
}

fn tricky_text() -> BoxedStrategy<String> {
    "[a-zA-Z0-9äöüß\"\\\\ .,#=-]{1,12}".boxed()
}

fn document_with(
    max_sentences: usize,
    max_markables: usize,
    surface: BoxedStrategy<String>,
) -> impl Strategy<Value = Document> {
    (
        prop::collection::vec(shape(), 0..=max_sentences),
        prop::collection::vec(draft(surface), 0..=max_markables),
        prop::collection::vec(prop::option::of(tricky_text()), 0..=max_sentences),
        prop::collection::vec(
            prop::option::of(prop::sample::select(vec!["A", "B"])),
            1..=4,
        ),
        "[a-z][a-z0-9_-]{0,6}",
    )
        .prop_map(|(shapes, drafts, texts, sems, id)| {
            if shapes.is_empty() {
                let mut d = build(id, vec![Shape::SimpleMain], vec![], vec![], sems);
                d.sentences.clear();
                d
            } else {
                build(id, shapes, drafts, texts, sems)
            }
        })
}

/// Small valid documents: at most 3 sentences and 8 markables.
pub fn small_document() -> impl Strategy<Value = Document> {
    document_with(3, 8, plain_surface())
}

/// Valid documents with quotes, backslashes and non-ASCII in free text.
pub fn text_heavy_document() -> impl Strategy<Value = Document> {
    document_with(4, 12, tricky_text())
}

/// Larger documents for invariants that should hold at any size.
pub fn larger_document() -> impl Strategy<Value = Document> {
    document_with(6, 20, plain_surface())
}
