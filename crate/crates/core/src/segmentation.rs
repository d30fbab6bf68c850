//! Utterance segmentation.
//!
//! A simple or complex sentence is one utterance; each main clause of a
//! compound sentence is an utterance of its own, together with the
//! subordinate clauses that follow it (leading subordinates go with the
//! first main clause). The clause-at-a-time
//! segmentation used by the linear strategy turns every clause into an
//! utterance.

use std::fmt;

use crate::model::{Clause, ClauseKind, Document, Markable, Sentence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SentenceClass {
    Simple,
    Complex,
    Compound,
}

impl fmt::Display for SentenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SentenceClass::Simple => "simple",
            SentenceClass::Complex => "complex",
            SentenceClass::Compound => "compound",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SegmentError {
    #[error("sentence `{0}` has no clauses")]
    Empty(String),
    #[error("sentence `{0}` mixes main clauses with a matrix clause")]
    MixedClauseKinds(String),
    #[error("sentence `{0}` needs exactly one matrix clause, found {1}")]
    MatrixCount(String, usize),
}

/// The centering update unit.
#[derive(Debug, Clone)]
pub struct Utterance<'a> {
    /// Position in the utterance sequence, from 0.
    pub index: usize,
    /// Index of the sentence this utterance was cut from.
    pub sentence: usize,
    pub clauses: Vec<&'a Clause>,
    /// Index into `clauses` of the matrix clause.
    pub matrix: usize,
}

impl<'a> Utterance<'a> {
    pub fn matrix_clause(&self) -> &'a Clause {
        self.clauses[self.matrix]
    }

    /// Markables in left-to-right order across clauses.
    pub fn markables(&self) -> impl Iterator<Item = &'a Markable> + '_ {
        self.clauses.iter().flat_map(|c| c.markables.iter())
    }

    /// Markables strictly before `markable_id`, left to right.
    pub fn preceding(&self, markable_id: &str) -> Vec<&'a Markable> {
        self.markables()
            .take_while(|m| m.id != markable_id)
            .collect()
    }

    pub fn clause_of(&self, markable_id: &str) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| c.markables.iter().any(|m| m.id == markable_id))
    }

    pub fn contains(&self, markable_id: &str) -> bool {
        self.clause_of(markable_id).is_some()
    }
}

pub fn classify_sentence(s: &Sentence) -> Result<SentenceClass, SegmentError> {
    if s.clauses.is_empty() {
        return Err(SegmentError::Empty(s.id.clone()));
    }
    let count = |k: ClauseKind| s.clauses.iter().filter(|c| c.kind == k).count();
    let (mains, matrices) = (count(ClauseKind::Main), count(ClauseKind::Matrix));
    if mains > 0 {
        if matrices > 0 {
            return Err(SegmentError::MixedClauseKinds(s.id.clone()));
        }
        return Ok(match (mains, s.clauses.len()) {
            (1, 1) => SentenceClass::Simple,
            (1, _) => SentenceClass::Complex,
            _ => SentenceClass::Compound,
        });
    }
    match (matrices, s.clauses.len()) {
        (1, 1) => Ok(SentenceClass::Simple),
        (1, _) => Ok(SentenceClass::Complex),
        (n, _) => Err(SegmentError::MatrixCount(s.id.clone(), n)),
    }
}

pub fn segment(doc: &Document) -> Result<Vec<Utterance<'_>>, SegmentError> {
    let mut out = Vec::new();
    for (si, s) in doc.sentences.iter().enumerate() {
        match classify_sentence(s)? {
            SentenceClass::Compound => {
                for (clauses, matrix) in main_clause_groups(s) {
                    out.push(Utterance {
                        index: out.len(),
                        sentence: si,
                        clauses,
                        matrix,
                    });
                }
            }
            SentenceClass::Simple | SentenceClass::Complex => {
                let matrix = s
                    .clauses
                    .iter()
                    .position(|c| c.kind != ClauseKind::Subordinate)
                    .unwrap_or(0);
                out.push(Utterance {
                    index: out.len(),
                    sentence: si,
                    clauses: s.clauses.iter().collect(),
                    matrix,
                });
            }
        }
    }
    Ok(out)
}

/// Splits a compound sentence at its main clauses. Returns each group with
/// the index of its main clause.
fn main_clause_groups(s: &Sentence) -> Vec<(Vec<&Clause>, usize)> {
    let mut groups: Vec<(Vec<&Clause>, usize)> = Vec::new();
    let mut leading = Vec::new();
    for c in &s.clauses {
        match (c.kind, groups.last_mut()) {
            (ClauseKind::Main, _) => {
                let mut clauses = std::mem::take(&mut leading);
                let matrix = clauses.len();
                clauses.push(c);
                groups.push((clauses, matrix));
            }
            (_, Some((clauses, _))) => clauses.push(c),
            (_, None) => leading.push(c),
        }
    }
    groups
}

pub fn clause_segmentation_linear(doc: &Document) -> Vec<Utterance<'_>> {
    let mut out = Vec::new();
    for (si, s) in doc.sentences.iter().enumerate() {
        for c in &s.clauses {
            out.push(Utterance {
                index: out.len(),
                sentence: si,
                clauses: vec![c],
                matrix: 0,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clause(id: &str, kind: ClauseKind, pos: u32) -> Clause {
        Clause {
            id: id.into(),
            kind,
            pos,
            markables: vec![],
        }
    }

    fn sentence(id: &str, kinds: &[ClauseKind]) -> Sentence {
        Sentence {
            id: id.into(),
            raw_text: None,
            clauses: kinds
                .iter()
                .enumerate()
                .map(|(i, k)| clause(&format!("{id}c{i}"), *k, i as u32))
                .collect(),
        }
    }

    use ClauseKind::*;

    #[test]
    fn classification() {
        assert_eq!(
            classify_sentence(&sentence("a", &[Main])),
            Ok(SentenceClass::Simple)
        );
        assert_eq!(
            classify_sentence(&sentence("a", &[Matrix])),
            Ok(SentenceClass::Simple)
        );
        assert_eq!(
            classify_sentence(&sentence("a", &[Subordinate, Matrix])),
            Ok(SentenceClass::Complex)
        );
        assert_eq!(
            classify_sentence(&sentence("a", &[Main, Main])),
            Ok(SentenceClass::Compound)
        );
        assert_eq!(
            classify_sentence(&sentence("a", &[Main, Subordinate])),
            Ok(SentenceClass::Complex)
        );
        assert_eq!(
            classify_sentence(&sentence("a", &[Main, Subordinate, Main])),
            Ok(SentenceClass::Compound)
        );
        assert!(matches!(
            classify_sentence(&sentence("a", &[Main, Matrix])),
            Err(SegmentError::MixedClauseKinds(_))
        ));
        assert!(matches!(
            classify_sentence(&sentence("a", &[Subordinate])),
            Err(SegmentError::MatrixCount(_, 0))
        ));
    }

    #[test]
    fn compound_sentence_yields_one_utterance_per_clause() {
        let mut doc = Document::new("d");
        doc.sentences.push(sentence("s", &[Main, Main, Main]));
        let us = segment(&doc).unwrap();
        assert_eq!(us.len(), 3);
        assert!(us
            .iter()
            .enumerate()
            .all(|(i, u)| u.index == i && u.clauses.len() == 1));
    }

    #[test]
    fn subordinates_follow_the_preceding_main_clause() {
        let mut doc = Document::new("d");
        doc.sentences
            .push(sentence("s", &[Subordinate, Main, Subordinate, Main]));
        let us = segment(&doc).unwrap();
        let groups: Vec<(Vec<&str>, &str)> = us
            .iter()
            .map(|u| {
                let ids = u.clauses.iter().map(|c| c.id.as_str()).collect();
                (ids, u.matrix_clause().id.as_str())
            })
            .collect();
        assert_eq!(
            groups,
            [(vec!["sc0", "sc1", "sc2"], "sc1"), (vec!["sc3"], "sc3")]
        );
    }

    #[test]
    fn complex_sentence_keeps_its_matrix() {
        let mut doc = Document::new("d");
        doc.sentences
            .push(sentence("s", &[Subordinate, Matrix, Subordinate]));
        let us = segment(&doc).unwrap();
        assert_eq!(us.len(), 1);
        assert_eq!(us[0].matrix_clause().id, "sc1");
        assert_eq!(clause_segmentation_linear(&doc).len(), 3);
    }

    #[test]
    fn empty_document() {
        let doc = Document::new("d");
        assert!(segment(&doc).unwrap().is_empty());
        assert!(clause_segmentation_linear(&doc).is_empty());
    }
}
