//! Plain-text and TSV rendering of result tables.

use crate::evaluation::{ErrorTaxonomy, ScoreRow, StatsRow, TypologyRow};
use crate::resolution::Strategy;

/// Percentage with one decimal, rounded half up; `-` for an empty
/// denominator. Exact integer arithmetic.
pub fn format_percent(correct: usize, n: usize) -> String {
    if n == 0 {
        return "-".to_string();
    }
    let tenths = (correct as u128 * 2000 + n as u128) / (2 * n as u128);
    format!("{}.{}%", tenths / 10, tenths % 10)
}

/// `"424 (75.3%)"`, or `"0 (-)"` when there is nothing to score.
pub fn format_cell(correct: usize, n: usize) -> String {
    format!("{correct} ({})", format_percent(correct, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Plain,
    /// Bold header via ANSI escapes.
    Ansi,
}

impl Style {
    /// Honours `CENTERLINE_COLOR=1`.
    pub fn from_env() -> Self {
        match std::env::var("CENTERLINE_COLOR").as_deref() {
            Ok("1") => Style::Ansi,
            _ => Style::Plain,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub title: Option<String>,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: impl IntoIterator<Item = impl Into<String>>) -> Self {
        Table {
            title: None,
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn titled(mut self, title: impl Into<String>) -> Self {
        self.title = Some(title.into());
        self
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// Fixed-width layout: first column left-aligned, the rest right-aligned.
    pub fn render(&self, style: Style) -> String {
        let cols = self.headers.len();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate().take(cols) {
                widths[i] = widths[i].max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let mut s = String::new();
            for (i, w) in widths.iter().enumerate() {
                let cell = cells.get(i).map(String::as_str).unwrap_or("");
                let pad = w - cell.chars().count();
                if i > 0 {
                    s.push_str("  ");
                    s.push_str(&" ".repeat(pad));
                    s.push_str(cell);
                } else {
                    s.push_str(cell);
                    s.push_str(&" ".repeat(pad));
                }
            }
            s.trim_end().to_string()
        };

        let mut out = String::new();
        if let Some(t) = &self.title {
            out.push_str(t);
            out.push('\n');
        }
        let header = line(&self.headers);
        match style {
            Style::Plain => out.push_str(&header),
            Style::Ansi => {
                out.push_str("\x1b[1m");
                out.push_str(&header);
                out.push_str("\x1b[0m");
            }
        }
        out.push('\n');
        let total: usize = widths.iter().sum::<usize>() + 2 * cols.saturating_sub(1);
        out.push_str(&"-".repeat(total));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }

    pub fn render_tsv(&self) -> String {
        let mut out = String::new();
        if let Some(t) = &self.title {
            out.push_str("# ");
            out.push_str(t);
            out.push('\n');
        }
        out.push_str(&self.headers.join("\t"));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        out
    }
}

/// Success-rate matrix: corpora as rows, strategies as columns.
pub fn score_table(rows: &[ScoreRow], strategies: &[Strategy]) -> Table {
    let mut t = Table::new(
        ["", "N"]
            .into_iter()
            .map(String::from)
            .chain(strategies.iter().map(|s| s.heading().to_string())),
    );
    for r in rows {
        let mut cells = vec![r.label.clone(), r.n.to_string()];
        for s in strategies {
            cells.push(match r.cell(*s) {
                Some(c) => format_cell(c.correct, r.n),
                None => "-".to_string(),
            });
        }
        t.push(cells);
    }
    t
}

pub fn stats_table(rows: &[StatsRow]) -> Table {
    let mut t = Table::new(["", "text ana.", "sent. ana.", "anaphors", "words"]);
    for r in rows {
        t.push(vec![
            r.label.clone(),
            r.text_anaphora.to_string(),
            r.sentence_anaphora.to_string(),
            r.anaphors().to_string(),
            r.words.to_string(),
        ]);
    }
    t
}

pub fn typology_table(rows: &[(String, TypologyRow)]) -> Table {
    let mut t = Table::new(["", "cont.-bound", "not bound", "subj.", "not subj."]);
    for (label, r) in rows {
        t.push(vec![
            label.clone(),
            r.context_bound.to_string(),
            r.not_bound.to_string(),
            r.subject.to_string(),
            r.not_subject.to_string(),
        ]);
    }
    t
}

pub fn taxonomy_table(rows: &[(Strategy, ErrorTaxonomy)]) -> Table {
    let mut t = Table::new([
        "strategy",
        "prep",
        "plural",
        "set member",
        "sentence",
        "global focus",
        "all wrong",
        "specific",
        "false pos.",
    ]);
    for (s, e) in rows {
        t.push(vec![
            s.heading().to_string(),
            e.prepositional.to_string(),
            e.plural.to_string(),
            e.set_member.to_string(),
            e.sentence_anaphor.to_string(),
            e.global_focus.to_string(),
            e.any_strategy_wrong.to_string(),
            e.strategy_specific.to_string(),
            e.false_positive.to_string(),
        ]);
    }
    t
}
