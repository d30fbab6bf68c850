//! Scoring against gold chains, error taxonomy, antecedent typology and
//! corpus statistics.

use std::collections::HashMap;
use std::ops::Add;

use crate::model::{AnaphorKind, DocIndex, Document, Markable, Role};
use crate::resolution::{Outcome, ResolutionReport, Strategy};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("report is for document `{report}` but scored against `{doc}`")]
    DocumentMismatch { report: String, doc: String },
    #[error("report row `{0}` is not an anaphor of the document")]
    UnknownRow(String),
}

/// Correct resolutions of one strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScoreCell {
    pub strategy: Strategy,
    pub correct: usize,
}

/// Success rates of one corpus (or group of documents).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoreRow {
    pub label: String,
    pub n: usize,
    pub cells: Vec<ScoreCell>,
}

impl ScoreRow {
    pub fn cell(&self, strategy: Strategy) -> Option<ScoreCell> {
        self.cells.iter().copied().find(|c| c.strategy == strategy)
    }

    /// `correct / n`, undefined for an empty row.
    pub fn rate(&self, strategy: Strategy) -> Option<f64> {
        let c = self.cell(strategy)?;
        (self.n > 0).then(|| c.correct as f64 / self.n as f64)
    }

    /// Adds the cells of another score of the same anaphors.
    pub fn merge(mut self, other: ScoreRow) -> ScoreRow {
        for c in other.cells {
            match self.cells.iter_mut().find(|x| x.strategy == c.strategy) {
                Some(x) => x.correct = c.correct,
                None => self.cells.push(c),
            }
        }
        self
    }

    /// Column-wise sum over rows, e.g. the Σ row of a table.
    pub fn total<'a>(label: &str, rows: impl IntoIterator<Item = &'a ScoreRow>) -> ScoreRow {
        let mut out = ScoreRow {
            label: label.to_string(),
            n: 0,
            cells: Vec::new(),
        };
        for r in rows {
            out.n += r.n;
            for c in &r.cells {
                match out.cells.iter_mut().find(|x| x.strategy == c.strategy) {
                    Some(x) => x.correct += c.correct,
                    None => out.cells.push(*c),
                }
            }
        }
        out
    }
}

/// Success rate of a report: an anaphor counts as correct iff its predicted
/// entity equals its gold entity; unresolved anaphors count as wrong.
pub fn score(report: &ResolutionReport, doc: &Document) -> Result<ScoreRow, EvalError> {
    if report.doc_id != doc.id {
        return Err(EvalError::DocumentMismatch {
            report: report.doc_id.clone(),
            doc: doc.id.clone(),
        });
    }
    let index = doc.index();
    let mut correct = 0;
    for row in &report.rows {
        let m = index
            .markable(&row.mark_id)
            .filter(|m| m.is_anaphoric())
            .ok_or_else(|| EvalError::UnknownRow(row.mark_id.clone()))?;
        if row.predicted.as_ref() == Some(&m.entity) {
            correct += 1;
        }
    }
    Ok(ScoreRow {
        label: doc.id.clone(),
        n: doc.anaphors().count(),
        cells: vec![ScoreCell {
            strategy: report.config.strategy,
            correct,
        }],
    })
}

/// A wrong resolution is a false positive when the adopted antecedent
/// looks exactly like the true one: its surface equals that of the closest
/// preceding mention of the anaphor's gold entity.
pub fn detect_false_positive(anaphor: &Markable, chosen: &Markable, index: &DocIndex<'_>) -> bool {
    index
        .gold_antecedent(&anaphor.id)
        .is_some_and(|gold| gold.surface == chosen.surface)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ErrorTaxonomy {
    pub prepositional: usize,
    pub plural: usize,
    pub set_member: usize,
    pub sentence_anaphor: usize,
    pub global_focus: usize,
    /// Wrong under every compared strategy.
    pub any_strategy_wrong: usize,
    /// Wrong under this strategy but right under some other.
    pub strategy_specific: usize,
    /// Wrong resolutions whose antecedent surface matches the true one.
    pub false_positive: usize,
}

impl ErrorTaxonomy {
    pub fn underspecified(&self) -> usize {
        self.prepositional
            + self.plural
            + self.set_member
            + self.sentence_anaphor
            + self.global_focus
    }

    /// Every wrong or unresolved anaphor lands in exactly one bucket.
    pub fn errors(&self) -> usize {
        self.underspecified() + self.any_strategy_wrong + self.strategy_specific
    }
}

/// Buckets every error of every report. All reports must be over `doc`.
pub fn classify_errors(
    reports: &[ResolutionReport],
    doc: &Document,
) -> Result<Vec<(Strategy, ErrorTaxonomy)>, EvalError> {
    let mut outcomes: Vec<HashMap<&str, (Outcome, bool)>> = Vec::new();
    for r in reports {
        if r.doc_id != doc.id {
            return Err(EvalError::DocumentMismatch {
                report: r.doc_id.clone(),
                doc: doc.id.clone(),
            });
        }
        outcomes.push(
            r.rows
                .iter()
                .map(|row| (row.mark_id.as_str(), (row.outcome, row.false_positive)))
                .collect(),
        );
    }
    let mut out: Vec<(Strategy, ErrorTaxonomy)> = reports
        .iter()
        .map(|r| (r.config.strategy, ErrorTaxonomy::default()))
        .collect();

    for m in doc.anaphors() {
        let bucket: Option<fn(&mut ErrorTaxonomy) -> &mut usize> = match m.kind {
            AnaphorKind::Prepositional => Some(|t| &mut t.prepositional),
            AnaphorKind::Plural => Some(|t| &mut t.plural),
            AnaphorKind::SetMember => Some(|t| &mut t.set_member),
            AnaphorKind::SentenceAnaphor => Some(|t| &mut t.sentence_anaphor),
            AnaphorKind::GlobalFocus => Some(|t| &mut t.global_focus),
            _ => None,
        };
        if let Some(field) = bucket {
            for (_, t) in &mut out {
                *field(t) += 1;
            }
            continue;
        }
        let verdicts: Vec<(bool, bool)> = outcomes
            .iter()
            .map(|o| match o.get(m.id.as_str()) {
                Some((Outcome::Correct, _)) => (false, false),
                Some((_, fp)) => (true, *fp),
                None => (true, false),
            })
            .collect();
        let all_wrong = verdicts.iter().all(|(wrong, _)| *wrong);
        for ((_, t), (wrong, fp)) in out.iter_mut().zip(verdicts) {
            if !wrong {
                continue;
            }
            if all_wrong {
                t.any_strategy_wrong += 1;
            } else {
                t.strategy_specific += 1;
            }
            if fp {
                t.false_positive += 1;
            }
        }
    }
    Ok(out)
}

/// Kinds of antecedents of sentence-internal anaphors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TypologyRow {
    pub context_bound: usize,
    pub not_bound: usize,
    pub subject: usize,
    pub not_subject: usize,
}

impl TypologyRow {
    pub fn total(&self) -> usize {
        self.context_bound + self.not_bound
    }
}

impl Add for TypologyRow {
    type Output = TypologyRow;

    fn add(self, o: TypologyRow) -> TypologyRow {
        TypologyRow {
            context_bound: self.context_bound + o.context_bound,
            not_bound: self.not_bound + o.not_bound,
            subject: self.subject + o.subject,
            not_subject: self.not_subject + o.not_subject,
        }
    }
}

/// Over gold intra-sentential anaphors: is the gold antecedent itself
/// given by the context (anaphoric, or its entity appears in an earlier
/// sentence), and is it a subject?
pub fn antecedent_typology(doc: &Document) -> TypologyRow {
    let index = doc.index();
    let mut row = TypologyRow::default();
    for m in doc.anaphors() {
        let Some(ante) = index.gold_antecedent(&m.id) else {
            continue;
        };
        let (Some(here), Some(there)) = (index.location(&m.id), index.location(&ante.id)) else {
            continue;
        };
        if here.sentence != there.sentence {
            continue;
        }
        let earlier_mention = doc.sentences[..there.sentence]
            .iter()
            .flat_map(|s| s.markables())
            .any(|x| x.entity == ante.entity);
        if ante.is_anaphoric() || earlier_mention {
            row.context_bound += 1;
        } else {
            row.not_bound += 1;
        }
        if ante.role == Role::Subject {
            row.subject += 1;
        } else {
            row.not_subject += 1;
        }
    }
    row
}

/// Distribution of anaphors: text-level, sentence-level, total, words.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StatsRow {
    pub label: String,
    pub text_anaphora: usize,
    pub sentence_anaphora: usize,
    pub words: usize,
}

impl StatsRow {
    pub fn anaphors(&self) -> usize {
        self.text_anaphora + self.sentence_anaphora
    }
}

/// One row per document plus a Σ row. Sentence anaphora have their gold
/// antecedent in the same sentence; words are whitespace tokens of the raw
/// sentence text.
pub fn corpus_stats(docs: &[Document]) -> Vec<StatsRow> {
    let mut rows: Vec<StatsRow> = docs
        .iter()
        .map(|doc| {
            let index = doc.index();
            let (sent, text): (Vec<_>, Vec<_>) = doc
                .anaphors()
                .partition(|m| index.is_intra_sentential(&m.id));
            StatsRow {
                label: doc.id.clone(),
                text_anaphora: text.len(),
                sentence_anaphora: sent.len(),
                words: doc
                    .sentences
                    .iter()
                    .filter_map(|s| s.raw_text.as_deref())
                    .map(|t| t.split_whitespace().count())
                    .sum(),
            }
        })
        .collect();
    let total = rows.iter().fold(
        StatsRow {
            label: "Σ".to_string(),
            ..Default::default()
        },
        |mut acc, r| {
            acc.text_anaphora += r.text_anaphora;
            acc.sentence_anaphora += r.sentence_anaphora;
            acc.words += r.words;
            acc
        },
    );
    rows.push(total);
    rows
}

/// Comparison of a printed percentage against exact division.
#[derive(Debug, Clone, PartialEq)]
pub struct CellAudit {
    pub correct: usize,
    pub n: usize,
    /// Exact rate in percent.
    pub exact: f64,
    /// Our one-decimal rendering.
    pub rendered: String,
    pub printed: f64,
    /// Printed minus exact, in percentage points.
    pub deviation: f64,
    /// Printed value is at least one display unit (0.1 pp) off the exact
    /// rate, i.e. no rounding of the count pair produces it.
    pub flagged: bool,
}

pub fn audit_printed_cell(correct: usize, n: usize, printed: f64) -> CellAudit {
    let exact = if n == 0 {
        f64::NAN
    } else {
        100.0 * correct as f64 / n as f64
    };
    let deviation = printed - exact;
    CellAudit {
        correct,
        n,
        exact,
        rendered: crate::tables::format_percent(correct, n),
        printed,
        deviation,
        flagged: deviation.is_nan() || deviation.abs() >= 0.1,
    }
}
