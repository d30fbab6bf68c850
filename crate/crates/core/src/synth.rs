//! Generated corpora.
//!
//! [`synthetic_corpus`] builds a seeded document out of short episodes,
//! each exercising one way in which the proposal strategies part company.
//! [`engineered_corpus`] builds a document with a prescribed distribution of
//! text- and sentence-level anaphors and antecedent types.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::evaluation::TypologyRow;
use crate::model::{AnaphorKind, Clause, ClauseKind, Document, EntityId, Markable, Role, Sentence};

/// Incremental document construction with generated ids.
pub struct DocWriter {
    doc: Document,
    markables: usize,
}

/// Markable description for [`DocWriter::sentence`].
#[derive(Debug, Clone)]
pub struct Mention {
    pub surface: String,
    pub entity: EntityId,
    pub agr: Option<String>,
    pub role: Role,
    pub kind: AnaphorKind,
    pub sem: Option<String>,
}

impl Mention {
    pub fn new(surface: &str, entity: &EntityId, kind: AnaphorKind) -> Self {
        Mention {
            surface: surface.to_string(),
            entity: entity.clone(),
            agr: None,
            role: Role::Other,
            kind,
            sem: None,
        }
    }

    pub fn agr(mut self, agr: &str) -> Self {
        self.agr = Some(agr.to_string());
        self
    }

    pub fn subject(mut self) -> Self {
        self.role = Role::Subject;
        self
    }

    pub fn sem(mut self, sem: &str) -> Self {
        self.sem = Some(sem.to_string());
        self
    }
}

impl DocWriter {
    pub fn new(id: &str) -> Self {
        DocWriter {
            doc: Document::new(id),
            markables: 0,
        }
    }

    pub fn entity(&mut self, id: &str, sem: Option<&str>) -> EntityId {
        let e = EntityId::new(id);
        self.doc.entities.insert(e.clone(), sem.map(str::to_string));
        e
    }

    /// Appends a sentence; clauses are given in surface order.
    pub fn sentence(&mut self, text: &str, clauses: Vec<(ClauseKind, Vec<Mention>)>) {
        let sid = format!("s{}", self.doc.sentences.len() + 1);
        let clauses = clauses
            .into_iter()
            .enumerate()
            .map(|(ci, (kind, mentions))| {
                let cid = format!("{sid}c{ci}");
                let markables = mentions
                    .into_iter()
                    .enumerate()
                    .map(|(pos, mention)| {
                        self.markables += 1;
                        Markable {
                            id: format!("m{}", self.markables),
                            clause: cid.clone(),
                            pos: pos as u32,
                            surface: mention.surface,
                            entity: mention.entity,
                            agr: mention.agr,
                            role: mention.role,
                            kind: mention.kind,
                            sem: mention.sem,
                        }
                    })
                    .collect();
                Clause {
                    id: cid,
                    kind,
                    pos: ci as u32,
                    markables,
                }
            })
            .collect();
        self.doc.sentences.push(Sentence {
            id: sid,
            clauses,
            raw_text: (!text.is_empty()).then(|| text.to_string()),
        });
    }

    pub fn finish(self) -> Document {
        self.doc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Gender {
    Masc,
    Fem,
    Neut,
}

impl Gender {
    fn article(self) -> &'static str {
        match self {
            Gender::Masc => "der",
            Gender::Fem => "die",
            Gender::Neut => "das",
        }
    }

    fn accusative(self) -> &'static str {
        match self {
            Gender::Masc => "den",
            g => g.article(),
        }
    }

    fn pronoun(self) -> &'static str {
        match self {
            Gender::Masc => "er",
            Gender::Fem => "sie",
            Gender::Neut => "es",
        }
    }

    fn agr(self) -> &'static str {
        match self {
            Gender::Masc => "masc-sg",
            Gender::Fem => "fem-sg",
            Gender::Neut => "neut-sg",
        }
    }

    fn nouns(self) -> &'static [&'static str] {
        match self {
            Gender::Masc => &[
                "Rechner", "Drucker", "Monitor", "Server", "Scanner", "Router", "Akku", "Lüfter",
            ],
            Gender::Fem => &[
                "Festplatte",
                "Tastatur",
                "Maus",
                "Platine",
                "Kamera",
                "Software",
                "Batterie",
                "Grafikkarte",
            ],
            Gender::Neut => &[
                "Netzteil",
                "Laufwerk",
                "Kabel",
                "Gehäuse",
                "Modem",
                "Display",
                "Mainboard",
                "Programm",
            ],
        }
    }
}

fn cap(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Episode types of the synthetic corpus, named by which strategies fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Episode {
    /// Plain inter-sentential anaphor; every strategy succeeds.
    Easy,
    /// Antecedent is a context-bound element of the same sentence while the
    /// previous Cf offers a compatible competitor. Inter-first fails.
    BoundIntra,
    /// Inter-sentential antecedent with a compatible new entity earlier in
    /// the sentence. Intra-first and linear fail.
    SpuriousIntra,
    /// Previous sentence ends in a subordinate clause. Linear fails.
    MatrixFirst,
    /// Antecedent is a new entity of the same sentence. Functional and
    /// inter-first fail.
    UnboundIntra,
    /// Two entities with the same surface; inter-first and linear pick the
    /// wrong one, which counts as a false positive.
    FalsePositive,
    /// Anaphor of a kind outside the resolver's scope.
    Underspecified,
    /// Antecedent disagrees morphologically with the pronoun; everyone fails.
    AllWrong,
}

/// Episode counts per 50 anaphors; [`Episode::Easy`] fills the rest.
const QUOTAS: [(Episode, usize); 7] = [
    (Episode::Underspecified, 8),
    (Episode::AllWrong, 1),
    (Episode::UnboundIntra, 1),
    (Episode::SpuriousIntra, 2),
    (Episode::MatrixFirst, 1),
    (Episode::BoundIntra, 3),
    (Episode::FalsePositive, 4),
];

const UNDERSPECIFIED: [(AnaphorKind, &str, &str); 5] = [
    (
        AnaphorKind::Prepositional,
        "Damit",
        "Damit arbeitet man gut.",
    ),
    (AnaphorKind::Plural, "Sie", "Sie sind schnell."),
    (AnaphorKind::SetMember, "Einer", "Einer davon ist alt."),
    (AnaphorKind::SentenceAnaphor, "Das", "Das war zu erwarten."),
    (AnaphorKind::GlobalFocus, "Es", "Es ist ein Notebook."),
];

/// Episode sequence for a corpus of `anaphors` anaphors, in quota order.
pub fn episode_plan(anaphors: usize) -> Vec<Episode> {
    let mut plan = Vec::with_capacity(anaphors);
    for (episode, per_50) in QUOTAS {
        let n = (per_50 * anaphors + 25) / 50;
        plan.extend(std::iter::repeat_n(episode, n));
    }
    plan.truncate(anaphors);
    let easy = anaphors - plan.len();
    plan.extend(std::iter::repeat_n(Episode::Easy, easy));
    plan
}

/// Seeded corpus with one evaluated anaphor per episode. Each episode opens
/// with an anaphor-free sentence so episodes do not interact.
pub fn synthetic_corpus(seed: u64, anaphors: usize) -> Document {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plan = episode_plan(anaphors);
    plan.shuffle(&mut rng);
    let mut w = DocWriter::new(&format!("synthetic-{seed}"));
    let mut underspecified = 0;
    for (i, episode) in plan.into_iter().enumerate() {
        let gender = *[Gender::Masc, Gender::Fem, Gender::Neut]
            .choose(&mut rng)
            .unwrap();
        let nouns: Vec<&str> = gender
            .nouns()
            .choose_multiple(&mut rng, 2)
            .copied()
            .collect();
        let nominal = rng.gen_bool(0.5);
        write_episode(
            &mut w,
            i,
            episode,
            gender,
            &nouns,
            nominal,
            &mut underspecified,
        );
    }
    w.finish()
}

fn write_episode(
    w: &mut DocWriter,
    i: usize,
    episode: Episode,
    g: Gender,
    nouns: &[&str],
    nominal: bool,
    underspecified: &mut usize,
) {
    let (art, acc, pron, agr) = (g.article(), g.accusative(), g.pronoun(), g.agr());
    let (x, y) = (nouns[0], nouns[1]);
    let mut ent =
        |suffix: &str, noun: &str| w.entity(&format!("ep{i}{suffix}"), Some(&noun.to_uppercase()));
    let ex = ent("x", x);
    let ey = ent("y", y);
    let intro = |noun: &str, e: &EntityId| {
        Mention::new(noun, e, AnaphorKind::None)
            .agr(agr)
            .sem(&noun.to_uppercase())
    };
    // anaphor referring to the entity named `noun`
    let anaphor = |noun: &str, e: &EntityId, nominal: bool| {
        if nominal {
            Mention::new(noun, e, AnaphorKind::Nominal)
                .agr(agr)
                .sem(&noun.to_uppercase())
        } else {
            Mention::new(pron, e, AnaphorKind::Pronoun).agr(agr)
        }
    };
    let main = ClauseKind::Main;
    let (sub, matrix) = (ClauseKind::Subordinate, ClauseKind::Matrix);

    match episode {
        Episode::Easy => {
            w.sentence(
                &format!("{} {x} ist neu.", cap(art)),
                vec![(main, vec![intro(x, &ex).subject()])],
            );
            let text = if nominal {
                format!("{} {x} funktioniert.", cap(art))
            } else {
                format!("{} funktioniert.", cap(pron))
            };
            w.sentence(
                &text,
                vec![(main, vec![anaphor(x, &ex, nominal).subject()])],
            );
        }
        Episode::BoundIntra => {
            w.sentence(
                &format!("{} {x} steht bereit.", cap(art)),
                vec![(main, vec![intro(x, &ex).subject()])],
            );
            w.sentence(
                &format!("{} {y} wird geliefert.", cap(art)),
                vec![(main, vec![intro(y, &ey).subject()])],
            );
            w.sentence(
                &format!("Wenn man {acc} {x} einschaltet, startet {pron} sofort."),
                vec![
                    (sub, vec![intro(x, &ex)]),
                    (matrix, vec![anaphor(x, &ex, false).subject()]),
                ],
            );
        }
        Episode::SpuriousIntra => {
            w.sentence(
                &format!("{} {y} ist defekt.", cap(art)),
                vec![(main, vec![intro(y, &ey).subject()])],
            );
            let tail = if nominal {
                format!("muss {art} {y} repariert werden.")
            } else {
                format!("muss {pron} repariert werden.")
            };
            w.sentence(
                &format!("Obwohl {art} {x} neu ist, {tail}"),
                vec![
                    (sub, vec![intro(x, &ex).subject()]),
                    (matrix, vec![anaphor(y, &ey, nominal).subject()]),
                ],
            );
        }
        Episode::MatrixFirst => {
            w.sentence(
                &format!("{} {x} startet, weil {art} {y} bereit ist.", cap(art)),
                vec![
                    (matrix, vec![intro(x, &ex).subject()]),
                    (sub, vec![intro(y, &ey).subject()]),
                ],
            );
            w.sentence(
                &format!("{} läuft stabil.", cap(pron)),
                vec![(main, vec![anaphor(x, &ex, false).subject()])],
            );
        }
        Episode::UnboundIntra => {
            w.sentence(
                &format!("{} {y} ist alt.", cap(art)),
                vec![(main, vec![intro(y, &ey).subject()])],
            );
            w.sentence(
                &format!("Nachdem {art} {x} angeschlossen wurde, meldete {pron} einen Fehler."),
                vec![
                    (sub, vec![intro(x, &ex).subject()]),
                    (matrix, vec![anaphor(x, &ex, false).subject()]),
                ],
            );
        }
        Episode::FalsePositive => {
            // ey is a second object carrying the same name as ex
            w.sentence(
                &format!("Ein {x} steht im Büro."),
                vec![(main, vec![intro(x, &ex).subject()])],
            );
            w.sentence(
                &format!("Ein anderer {x} steht im Flur."),
                vec![(main, vec![intro(x, &ey).subject()])],
            );
            w.sentence(
                &format!("Als {art} {x} ausfiel, während {art} {x} lief, wurde {pron} ersetzt."),
                vec![
                    (sub, vec![intro(x, &ex).subject()]),
                    (sub, vec![intro(x, &ey).subject()]),
                    (matrix, vec![anaphor(x, &ex, false).subject()]),
                ],
            );
        }
        Episode::Underspecified => {
            let (kind, surface, text) = UNDERSPECIFIED[*underspecified % UNDERSPECIFIED.len()];
            *underspecified += 1;
            w.sentence(
                &format!("{} {x} ist installiert.", cap(art)),
                vec![(main, vec![intro(x, &ex).subject()])],
            );
            w.sentence(text, vec![(main, vec![Mention::new(surface, &ex, kind)])]);
        }
        Episode::AllWrong => {
            let girl = w.entity(&format!("ep{i}g"), Some("PERSON"));
            let woman = w.entity(&format!("ep{i}w"), Some("PERSON"));
            w.sentence(
                "Das Mädchen spielt.",
                vec![(
                    main,
                    vec![Mention::new("Mädchen", &girl, AnaphorKind::None)
                        .agr("neut-sg")
                        .subject()],
                )],
            );
            w.sentence(
                "Die Frau liest.",
                vec![(
                    main,
                    vec![Mention::new("Frau", &woman, AnaphorKind::None)
                        .agr("fem-sg")
                        .subject()],
                )],
            );
            w.sentence(
                "Sie lacht.",
                vec![(
                    main,
                    vec![Mention::new("sie", &girl, AnaphorKind::Pronoun)
                        .agr("fem-sg")
                        .subject()],
                )],
            );
        }
    }
}

/// Target distribution for [`engineered_corpus`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionProfile {
    pub label: String,
    pub text_anaphora: usize,
    /// Antecedent types of the sentence-level anaphors; its total is the
    /// number of sentence-level anaphors.
    pub typology: TypologyRow,
    pub words: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SynthError {
    #[error("typology is inconsistent: bound+unbound={0} but subject+non-subject={1}")]
    InconsistentTypology(usize, usize),
    #[error("profile needs at least {needed} words, target is {target}")]
    TooFewWords { needed: usize, target: usize },
}

/// Seed of the bundled synthetic corpus.
pub const DEFAULT_SEED: u64 = 1994;

fn profile(label: &str, text_anaphora: usize, t: [usize; 4], words: usize) -> DistributionProfile {
    DistributionProfile {
        label: label.to_string(),
        text_anaphora,
        typology: TypologyRow {
            context_bound: t[0],
            not_bound: t[1],
            subject: t[2],
            not_subject: t[3],
        },
        words,
    }
}

/// Profiles of the three evaluation corpora: technical manuals, news
/// magazine articles and literary prose.
pub fn reference_profiles() -> Vec<DistributionProfile> {
    vec![
        profile("IT", 284, [20, 4, 16, 8], 5542),
        profile("Spiegel", 90, [10, 2, 6, 6], 1468),
        profile("Müller", 124, [28, 1, 10, 19], 867),
    ]
}

const NAMES: [&str; 8] = [
    "Bernd", "Dieter", "Egon", "Frank", "Georg", "Hans", "Jens", "Lutz",
];

/// Document whose anaphors follow `profile` exactly. Sentence-level
/// anaphors are split over (bound, subject) combinations so both marginals
/// come out right.
pub fn engineered_corpus(profile: &DistributionProfile) -> Result<Document, SynthError> {
    let t = profile.typology;
    let (bound_total, subj_total) = (t.context_bound + t.not_bound, t.subject + t.not_subject);
    if bound_total != subj_total {
        return Err(SynthError::InconsistentTypology(bound_total, subj_total));
    }
    let bound_subj = t.context_bound.min(t.subject);
    let groups = [
        (true, Role::Subject, bound_subj),
        (true, Role::Other, t.context_bound - bound_subj),
        (false, Role::Subject, t.subject - bound_subj),
        (false, Role::Other, t.not_bound - (t.subject - bound_subj)),
    ];

    let mut w = DocWriter::new(&profile.label);
    let mut words = 0;
    let mut say = |w: &mut DocWriter, text: &str, clauses| {
        words += text.split_whitespace().count();
        w.sentence(text, clauses);
    };
    let karl = w.entity("karl", Some("PERSON"));
    let main = ClauseKind::Main;
    let person =
        |surface: &str, e: &EntityId| Mention::new(surface, e, AnaphorKind::None).agr("masc-sg");
    let he = |e: &EntityId| Mention::new("er", e, AnaphorKind::Pronoun).agr("masc-sg");

    say(
        &mut w,
        "Karl kam.",
        vec![(main, vec![person("Karl", &karl).subject()])],
    );
    for _ in 0..profile.text_anaphora {
        say(&mut w, "Er ging.", vec![(main, vec![he(&karl).subject()])]);
    }
    let mut fresh = 0;
    for (bound, role, count) in groups {
        for _ in 0..count {
            let (surface, e) = if bound {
                ("Karl".to_string(), karl.clone())
            } else {
                fresh += 1;
                let name = NAMES[fresh % NAMES.len()];
                (
                    name.to_string(),
                    w.entity(&format!("p{fresh}"), Some("PERSON")),
                )
            };
            let mut ante = person(&surface, &e);
            ante.role = role;
            let text = if role == Role::Subject {
                format!("{surface} glaubt, er gewinnt.")
            } else {
                format!("Man lobt {surface}, er lacht.")
            };
            say(&mut w, &text, vec![(main, vec![ante, he(&e).subject()])]);
        }
    }
    if words > profile.words {
        return Err(SynthError::TooFewWords {
            needed: words,
            target: profile.words,
        });
    }
    let filler = vec!["und"; profile.words - words].join(" ");
    if !filler.is_empty() {
        w.sentence(&filler, vec![(main, vec![])]);
    }
    Ok(w.finish())
}
