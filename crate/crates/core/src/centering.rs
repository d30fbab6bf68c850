//! Forward- and backward-looking centers.

use std::collections::HashSet;

use crate::segmentation::Utterance;
use crate::state::{context_bound, CfEntry, ResolutionState};

/// Cf of a processed utterance. Only matrix-clause markables take part.
/// Context-bound elements come first, then the rest; each group in surface
/// order. An entity realized twice keeps its best-ranked occurrence.
pub fn compute_cf(u: &Utterance<'_>, state: &ResolutionState) -> Vec<CfEntry> {
    let mut ranked: Vec<(bool, CfEntry)> = u
        .matrix_clause()
        .markables
        .iter()
        .map(|m| {
            (
                context_bound(m, state),
                CfEntry {
                    entity: state.entity_of(m),
                    markable: m.clone(),
                },
            )
        })
        .collect();
    // stable: ties stay in ascending position
    ranked.sort_by_key(|(bound, _)| !*bound);
    let mut seen = HashSet::new();
    ranked
        .into_iter()
        .filter_map(|(_, e)| seen.insert(e.entity.clone()).then_some(e))
        .collect()
}

/// Cb: the best-ranked element of the previous Cf that the utterance
/// realizes. A matrix-clause realization is preferred, otherwise the
/// earliest one.
pub fn compute_cb(
    prev_cf: &[CfEntry],
    u: &Utterance<'_>,
    state: &ResolutionState,
) -> Option<CfEntry> {
    let matrix_id = &u.matrix_clause().id;
    prev_cf.iter().find_map(|entry| {
        let mut realizations = u
            .markables()
            .filter(|m| state.entity_of(m) == entry.entity)
            .peekable();
        let earliest = realizations.peek().copied()?;
        let chosen = realizations
            .find(|m| &m.clause == matrix_id)
            .unwrap_or(earliest);
        Some(CfEntry {
            entity: entry.entity.clone(),
            markable: chosen.clone(),
        })
    })
}
