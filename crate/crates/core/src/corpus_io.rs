//! Line-oriented annotation format.
//!
//! ```text
//! DOC <doc-id>
//! ENT <entity-id> sem=<tag|->
//! SENT <sent-id> [txt="<raw text>"]
//! CL <clause-id> kind=<matrix|subord|main> pos=<int>
//! M <mark-id> cl=<clause-id> pos=<int> surf="<string>" ent=<entity-id> agr=<tag|-> role=<subj|other> kind=<none|pron|nom|prep|plural|setmem|sent|global> [sem=<tag>]
//! ```
//!
//! `#` starts a comment line and blank lines are ignored. Quoted values use
//! backslash escapes for `"` and `\` only. `CL` records attach to the most
//! recent `SENT`; `M` records may appear anywhere after their `CL`.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::model::{
    validate_document, AnaphorKind, Clause, ClauseKind, Document, EntityId, Markable, Role,
    Sentence,
};
use crate::resolution::ResolutionReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    /// 1-based line number.
    pub line: usize,
    pub message: String,
    pub severity: Severity,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "line {}: {}: {}", self.line, sev, self.message)
    }
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub document: Document,
    pub diagnostics: Vec<ParseDiagnostic>,
}

impl Parsed {
    pub fn has_errors(&self) -> bool {
        self.diagnostics
            .iter()
            .any(|d| d.severity == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &ParseDiagnostic> {
        self.diagnostics
            .iter()
            .filter(|d| d.severity == Severity::Error)
    }

    /// The document, or every error diagnostic if there was at least one.
    pub fn into_result(self) -> Result<Document, Vec<ParseDiagnostic>> {
        if self.has_errors() {
            Err(self
                .diagnostics
                .into_iter()
                .filter(|d| d.severity == Severity::Error)
                .collect())
        } else {
            Ok(self.document)
        }
    }
}

#[derive(Debug, PartialEq)]
struct Field {
    key: Option<String>,
    value: String,
    quoted: bool,
}

fn tokenize(line: &str) -> Result<Vec<Field>, String> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    loop {
        while chars.peek().is_some_and(|c| c.is_whitespace()) {
            chars.next();
        }
        if chars.peek().is_none() {
            return Ok(out);
        }
        let mut head = String::new();
        let mut key = None;
        while let Some(&c) = chars.peek() {
            if c.is_whitespace() {
                break;
            }
            chars.next();
            if c == '=' && key.is_none() {
                key = Some(std::mem::take(&mut head));
                break;
            }
            if c == '"' {
                return Err(format!("unexpected quote in `{head}`"));
            }
            head.push(c);
        }
        let Some(key) = key else {
            out.push(Field {
                key: None,
                value: head,
                quoted: false,
            });
            continue;
        };
        if chars.peek() == Some(&'"') {
            chars.next();
            let mut value = String::new();
            let mut closed = false;
            while let Some(c) = chars.next() {
                match c {
                    '"' => {
                        closed = true;
                        break;
                    }
                    '\\' => match chars.next() {
                        Some(e @ ('"' | '\\')) => value.push(e),
                        Some(e) => return Err(format!("invalid escape `\\{e}` in `{key}`")),
                        None => return Err(format!("dangling backslash in `{key}`")),
                    },
                    c => value.push(c),
                }
            }
            if !closed {
                return Err(format!("unterminated quoted value for `{key}`"));
            }
            if chars.peek().is_some_and(|c| !c.is_whitespace()) {
                return Err(format!("trailing characters after quoted `{key}`"));
            }
            out.push(Field {
                key: Some(key),
                value,
                quoted: true,
            });
        } else {
            let mut value = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() {
                    break;
                }
                if c == '"' {
                    return Err(format!("unexpected quote in value of `{key}`"));
                }
                value.push(c);
                chars.next();
            }
            out.push(Field {
                key: Some(key),
                value,
                quoted: false,
            });
        }
    }
}

enum Quoting {
    Bare,
    Quoted,
}

/// Pulls the fixed-order fields of one record out of its token list.
struct Record<'a> {
    line: usize,
    fields: std::iter::Peekable<std::slice::Iter<'a, Field>>,
}

impl<'a> Record<'a> {
    fn required(&mut self, key: &str, quoting: Quoting) -> Result<&'a str, String> {
        match self.fields.peek() {
            Some(f) if f.key.as_deref() == Some(key) => {
                let f = self.fields.next().unwrap();
                match (quoting, f.quoted) {
                    (Quoting::Bare, true) => Err(format!("`{key}` must not be quoted")),
                    (Quoting::Quoted, false) => Err(format!("`{key}` must be a quoted string")),
                    _ => Ok(f.value.as_str()),
                }
            }
            Some(f) => match &f.key {
                Some(k) => Err(format!("expected field `{key}`, found `{k}`")),
                None => Err(format!("expected field `{key}`, found `{}`", f.value)),
            },
            None => Err(format!("missing field `{key}`")),
        }
    }

    fn optional(&mut self, key: &str, quoting: Quoting) -> Result<Option<&'a str>, String> {
        if self
            .fields
            .peek()
            .is_some_and(|f| f.key.as_deref() == Some(key))
        {
            self.required(key, quoting).map(Some)
        } else {
            Ok(None)
        }
    }

    /// Leftover fields are ignored with a warning.
    fn finish(self, known: &[&str], diags: &mut Vec<ParseDiagnostic>) -> Result<(), String> {
        let line = self.line;
        for f in self.fields {
            match &f.key {
                Some(k) if known.contains(&k.as_str()) => {
                    return Err(format!("field `{k}` out of order"))
                }
                Some(k) => diags.push(ParseDiagnostic {
                    line,
                    message: format!("unknown key `{k}` ignored"),
                    severity: Severity::Warning,
                }),
                None => return Err(format!("unexpected token `{}`", f.value)),
            }
        }
        Ok(())
    }
}

fn parse_pos(value: &str) -> Result<u32, String> {
    value
        .parse::<u32>()
        .map_err(|_| format!("pos `{value}` is not a non-negative integer"))
}

fn optional_tag(value: &str) -> Option<String> {
    (value != "-").then(|| value.to_string())
}

#[derive(Default)]
struct Builder {
    doc: Option<Document>,
    /// Declaration line of every id, for mapping violations back to lines.
    lines: HashMap<String, usize>,
    entity_lines: HashMap<EntityId, usize>,
    clause_owner: HashMap<String, (usize, usize)>,
    markable_ids: HashMap<String, usize>,
    pending: Vec<(usize, Markable)>,
}

/// Parses one document. Never panics; problems come back as diagnostics.
pub fn parse_document(text: &str) -> Parsed {
    let mut diags = Vec::new();
    let mut b = Builder::default();
    let mut saw_record = false;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let error = |message: String| ParseDiagnostic {
            line,
            message,
            severity: Severity::Error,
        };
        let fields = match tokenize(trimmed) {
            Ok(f) => f,
            Err(e) => {
                diags.push(error(e));
                continue;
            }
        };
        let (tag, id) = match fields.as_slice() {
            [Field {
                key: None,
                value: t,
                ..
            }, Field {
                key: None,
                value: id,
                ..
            }, ..] => (t.as_str(), id.as_str()),
            [Field {
                key: None,
                value: t,
                ..
            }, ..] => {
                diags.push(error(format!("`{t}` record is missing its id")));
                continue;
            }
            _ => {
                diags.push(error("malformed record".to_string()));
                continue;
            }
        };
        if !saw_record && tag != "DOC" {
            diags.push(error("missing DOC header".to_string()));
        }
        saw_record = true;
        let mut rec = Record {
            line,
            fields: fields[2..].iter().peekable(),
        };
        let result = match tag {
            "DOC" => b.doc_record(id, rec, &mut diags),
            "ENT" => b
                .ent_record(id, &mut rec)
                .and_then(|_| rec.finish(&["sem"], &mut diags)),
            "SENT" => b
                .sent_record(id, &mut rec)
                .and_then(|_| rec.finish(&["txt"], &mut diags)),
            "CL" => b
                .cl_record(id, &mut rec)
                .and_then(|_| rec.finish(&["kind", "pos"], &mut diags)),
            "M" => b.m_record(id, &mut rec).and_then(|_| {
                rec.finish(
                    &["cl", "pos", "surf", "ent", "agr", "role", "kind", "sem"],
                    &mut diags,
                )
            }),
            other => Err(format!("unknown record type `{other}`")),
        };
        if let Err(e) = result {
            diags.push(error(e));
        }
    }

    if !saw_record {
        diags.push(ParseDiagnostic {
            line: 1,
            message: "missing DOC header".to_string(),
            severity: Severity::Error,
        });
    }

    let document = b.finish(&mut diags);
    diags.sort_by_key(|d| d.line);
    Parsed {
        document,
        diagnostics: diags,
    }
}

impl Builder {
    fn doc_mut(&mut self) -> Result<&mut Document, String> {
        self.doc
            .as_mut()
            .ok_or_else(|| "record before DOC header".to_string())
    }

    fn claim(&mut self, what: &str, id: &str, line: usize) -> Result<(), String> {
        let key = format!("{what}:{id}");
        if let Some(prev) = self.lines.get(&key) {
            return Err(format!(
                "duplicate {what} id `{id}` (first declared on line {prev})"
            ));
        }
        self.lines.insert(key, line);
        Ok(())
    }

    fn doc_record(
        &mut self,
        id: &str,
        rec: Record<'_>,
        diags: &mut Vec<ParseDiagnostic>,
    ) -> Result<(), String> {
        if self.doc.is_some() {
            return Err("duplicate DOC header".to_string());
        }
        self.doc = Some(Document::new(id));
        rec.finish(&[], diags)
    }

    fn ent_record(&mut self, id: &str, rec: &mut Record<'_>) -> Result<(), String> {
        let sem = rec.required("sem", Quoting::Bare)?;
        let line = rec.line;
        let entity = EntityId::new(id);
        let doc = self.doc_mut()?;
        if doc.entities.contains_key(&entity) {
            return Err(format!("duplicate entity id `{id}`"));
        }
        doc.entities.insert(entity.clone(), optional_tag(sem));
        self.entity_lines.insert(entity, line);
        Ok(())
    }

    fn sent_record(&mut self, id: &str, rec: &mut Record<'_>) -> Result<(), String> {
        let txt = rec.optional("txt", Quoting::Quoted)?;
        self.doc_mut()?;
        self.claim("sentence", id, rec.line)?;
        self.doc_mut()?.sentences.push(Sentence {
            id: id.to_string(),
            clauses: Vec::new(),
            raw_text: txt.map(str::to_string),
        });
        Ok(())
    }

    fn cl_record(&mut self, id: &str, rec: &mut Record<'_>) -> Result<(), String> {
        let kind = rec.required("kind", Quoting::Bare)?;
        let kind =
            ClauseKind::parse(kind).ok_or_else(|| format!("unknown clause kind `{kind}`"))?;
        let pos = parse_pos(rec.required("pos", Quoting::Bare)?)?;
        let doc = self.doc_mut()?;
        let si = doc
            .sentences
            .len()
            .checked_sub(1)
            .ok_or_else(|| format!("clause `{id}` precedes any SENT"))?;
        self.claim("clause", id, rec.line)?;
        let doc = self.doc_mut()?;
        let sentence = &mut doc.sentences[si];
        sentence.clauses.push(Clause {
            id: id.to_string(),
            kind,
            pos,
            markables: Vec::new(),
        });
        let ci = sentence.clauses.len() - 1;
        self.clause_owner.insert(id.to_string(), (si, ci));
        Ok(())
    }

    fn m_record(&mut self, id: &str, rec: &mut Record<'_>) -> Result<(), String> {
        let cl = rec.required("cl", Quoting::Bare)?;
        let pos = parse_pos(rec.required("pos", Quoting::Bare)?)?;
        let surf = rec.required("surf", Quoting::Quoted)?;
        let ent = rec.required("ent", Quoting::Bare)?;
        let agr = rec.required("agr", Quoting::Bare)?;
        let role = rec.required("role", Quoting::Bare)?;
        let role = Role::parse(role).ok_or_else(|| format!("unknown role `{role}`"))?;
        let kind = rec.required("kind", Quoting::Bare)?;
        let kind =
            AnaphorKind::parse(kind).ok_or_else(|| format!("unknown markable kind `{kind}`"))?;
        let sem = rec.optional("sem", Quoting::Bare)?;
        self.doc_mut()?;
        if !self.clause_owner.contains_key(cl) {
            return Err(format!(
                "markable `{id}` references undeclared clause `{cl}`"
            ));
        }
        if let Some(prev) = self.markable_ids.get(id) {
            return Err(format!(
                "duplicate markable id `{id}` (first declared on line {prev})"
            ));
        }
        self.markable_ids.insert(id.to_string(), rec.line);
        self.pending.push((
            rec.line,
            Markable {
                id: id.to_string(),
                clause: cl.to_string(),
                pos,
                surface: surf.to_string(),
                entity: EntityId::new(ent),
                agr: optional_tag(agr),
                role,
                kind,
                sem: sem.and_then(optional_tag),
            },
        ));
        Ok(())
    }

    fn finish(mut self, diags: &mut Vec<ParseDiagnostic>) -> Document {
        let Some(mut doc) = self.doc.take() else {
            return Document::default();
        };
        for (line, m) in self.pending {
            if !doc.entities.contains_key(&m.entity) {
                diags.push(ParseDiagnostic {
                    line,
                    message: format!(
                        "markable `{}` references undeclared entity `{}`",
                        m.id, m.entity
                    ),
                    severity: Severity::Error,
                });
            }
            let (si, ci) = self.clause_owner[&m.clause];
            doc.sentences[si].clauses[ci].markables.push(m);
        }
        for s in &mut doc.sentences {
            s.clauses.sort_by_key(|c| c.pos);
            for c in &mut s.clauses {
                c.markables.sort_by_key(|m| m.pos);
            }
        }
        // After record-level errors only sentence structure is still
        // trustworthy; dropped records would cause follow-up noise.
        let partial = diags.iter().any(|d| d.severity == Severity::Error);
        for v in validate_document(&doc) {
            if partial && !v.rule.is_structural() {
                continue;
            }
            {
                let line = ["sentence", "clause"]
                    .iter()
                    .find_map(|w| self.lines.get(&format!("{w}:{}", v.id)).copied())
                    .or_else(|| self.markable_ids.get(&v.id).copied())
                    .or_else(|| self.entity_lines.get(&EntityId::new(v.id.clone())).copied())
                    .unwrap_or(1);
                diags.push(ParseDiagnostic {
                    line,
                    message: v.to_string(),
                    severity: if v.rule.is_warning() {
                        Severity::Warning
                    } else {
                        Severity::Error
                    },
                });
            }
        }
        doc
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// Canonical text form: DOC, ENT*, then per sentence SENT, CL*, M*.
pub fn serialize_document(doc: &Document) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "DOC {}", doc.id);
    for (entity, sem) in &doc.entities {
        let _ = writeln!(out, "ENT {} sem={}", entity, sem.as_deref().unwrap_or("-"));
    }
    for s in &doc.sentences {
        let _ = write!(out, "SENT {}", s.id);
        if let Some(txt) = &s.raw_text {
            let _ = write!(out, " txt={}", quote(txt));
        }
        out.push('\n');
        for c in &s.clauses {
            let _ = writeln!(out, "CL {} kind={} pos={}", c.id, c.kind.as_str(), c.pos);
        }
        for m in s.markables() {
            let _ = write!(
                out,
                "M {} cl={} pos={} surf={} ent={} agr={} role={} kind={}",
                m.id,
                m.clause,
                m.pos,
                quote(&m.surface),
                m.entity,
                m.agr.as_deref().unwrap_or("-"),
                m.role.as_str(),
                m.kind.as_str()
            );
            if let Some(sem) = &m.sem {
                let _ = write!(out, " sem={sem}");
            }
            out.push('\n');
        }
    }
    out
}

/// One TSV row per anaphor:
/// `doc_id mark_id strategy predicted|- gold stage|- outcome fp|-`.
pub fn write_report_tsv(report: &ResolutionReport) -> String {
    let mut out = String::new();
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            report.doc_id,
            row.mark_id,
            report.config.strategy.as_str(),
            row.predicted.as_ref().map_or("-", EntityId::as_str),
            row.gold,
            row.stage.map_or("-", |s| s.as_str()),
            row.outcome.as_str(),
            if row.false_positive { "fp" } else { "-" },
        );
    }
    out
}
