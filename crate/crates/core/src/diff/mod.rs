//! Semantic comparison of two protocol versions.
//!
//! Definition items are matched by number. The impact list names, for each
//! removed or edited item, the cells of the old protocol that cite it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::model::{CellId, CellState, CellStatus, MetaField, Protocol, Relation, WorkPackage};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaChange {
    pub field: MetaField,
    pub old: String,
    pub new: String,
}

/// Change of a numbered definition item or of a description group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "change", rename_all = "snake_case")]
pub enum EntryChange<K> {
    Added { key: K, text: String },
    Removed { key: K, text: String },
    Edited { key: K, old: String, new: String },
}

impl<K: Copy> EntryChange<K> {
    fn key(&self) -> &K {
        match self {
            EntryChange::Added { key, .. }
            | EntryChange::Removed { key, .. }
            | EntryChange::Edited { key, .. } => key,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkPackageChange {
    pub work_package: WorkPackage,
    pub old: bool,
    pub new: bool,
}

/// One changed field of one cell.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "field", rename_all = "snake_case")]
pub enum CellFieldChange {
    Status { old: CellStatus, new: CellStatus },
    Text { old: Option<String>, new: Option<String> },
    Group { old: Option<String>, new: Option<String> },
    Refs { old: BTreeSet<u32>, new: BTreeSet<u32> },
}

impl CellFieldChange {
    pub fn field(&self) -> &'static str {
        match self {
            CellFieldChange::Status { .. } => "status",
            CellFieldChange::Text { .. } => "text",
            CellFieldChange::Group { .. } => "group",
            CellFieldChange::Refs { .. } => "refs",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellChange {
    pub cell: CellId,
    #[serde(flatten)]
    pub change: CellFieldChange,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Impact {
    pub item: u32,
    pub cell: CellId,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProtocolDiff {
    pub meta: Vec<MetaChange>,
    pub definition: Vec<EntryChange<u32>>,
    pub work_packages: Vec<WorkPackageChange>,
    pub groups: Vec<EntryChange<String>>,
    pub cells: Vec<CellChange>,
    pub relations_added: Vec<Relation>,
    pub relations_removed: Vec<Relation>,
    /// Derived from the changes above; not counted as a change itself.
    pub impact: Vec<Impact>,
}

impl ProtocolDiff {
    /// Number of reported changes, impact excluded.
    pub fn change_count(&self) -> usize {
        self.meta.len()
            + self.definition.len()
            + self.work_packages.len()
            + self.groups.len()
            + self.cells.len()
            + self.relations_added.len()
            + self.relations_removed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.change_count() == 0
    }
}

fn diff_entries<K: Ord + Clone>(
    old: &BTreeMap<K, String>,
    new: &BTreeMap<K, String>,
) -> Vec<EntryChange<K>> {
    let keys: BTreeSet<&K> = old.keys().chain(new.keys()).collect();
    keys.into_iter()
        .filter_map(|k| match (old.get(k), new.get(k)) {
            (Some(a), Some(b)) if a == b => None,
            (Some(a), Some(b)) => Some(EntryChange::Edited {
                key: k.clone(),
                old: a.clone(),
                new: b.clone(),
            }),
            (Some(a), None) => Some(EntryChange::Removed {
                key: k.clone(),
                text: a.clone(),
            }),
            (None, Some(b)) => Some(EntryChange::Added {
                key: k.clone(),
                text: b.clone(),
            }),
            (None, None) => None,
        })
        .collect()
}

fn diff_cell(cell: CellId, a: &CellState, b: &CellState, out: &mut Vec<CellChange>) {
    let mut push = |change| out.push(CellChange { cell, change });
    if a.status != b.status {
        push(CellFieldChange::Status {
            old: a.status,
            new: b.status,
        });
    }
    if a.text != b.text {
        push(CellFieldChange::Text {
            old: a.text.clone(),
            new: b.text.clone(),
        });
    }
    if a.group != b.group {
        push(CellFieldChange::Group {
            old: a.group.clone(),
            new: b.group.clone(),
        });
    }
    if a.refs != b.refs {
        push(CellFieldChange::Refs {
            old: a.refs.clone(),
            new: b.refs.clone(),
        });
    }
}

/// Field-by-field change set from `old` to `new`.
pub fn diff(old: &Protocol, new: &Protocol) -> ProtocolDiff {
    let meta = MetaField::ALL
        .into_iter()
        .filter_map(|field| {
            let (a, b) = (old.meta.get(field), new.meta.get(field));
            (a != b).then_some(MetaChange { field, old: a, new: b })
        })
        .collect();

    let definition = diff_entries(&old.definition, &new.definition);

    let work_packages = WorkPackage::ALL
        .into_iter()
        .filter_map(|wp| {
            let (a, b) = (old.work_packages.responsible(wp), new.work_packages.responsible(wp));
            (a != b).then_some(WorkPackageChange {
                work_package: wp,
                old: a,
                new: b,
            })
        })
        .collect();

    let groups = diff_entries(&old.groups, &new.groups);

    let mut cells = Vec::new();
    for id in CellId::all() {
        diff_cell(id, old.cell(id), new.cell(id), &mut cells);
    }

    let old_rel: BTreeSet<&Relation> = old.relations.iter().collect();
    let new_rel: BTreeSet<&Relation> = new.relations.iter().collect();
    let relations_added = new_rel.difference(&old_rel).map(|r| **r).collect();
    let relations_removed = old_rel.difference(&new_rel).map(|r| **r).collect();

    let impact = definition
        .iter()
        .filter(|c| !matches!(c, EntryChange::Added { .. }))
        .flat_map(|c| {
            let item = *c.key();
            old.cells_referencing(item)
                .into_iter()
                .map(move |cell| Impact { item, cell })
        })
        .collect();

    ProtocolDiff {
        meta,
        definition,
        work_packages,
        groups,
        cells,
        relations_added,
        relations_removed,
        impact,
    }
}

fn apply_entries<K: Ord + Clone>(map: &mut BTreeMap<K, String>, changes: &[EntryChange<K>]) {
    for change in changes {
        match change {
            EntryChange::Removed { key, .. } => {
                map.remove(key);
            }
            EntryChange::Added { key, text } | EntryChange::Edited { key, new: text, .. } => {
                map.insert(key.clone(), text.clone());
            }
        }
    }
}

/// Replays `changes` onto `old`.
pub fn apply(old: &Protocol, changes: &ProtocolDiff) -> Protocol {
    let mut p = old.clone();
    for change in &changes.meta {
        match change.field {
            MetaField::Date => p.meta.date = change.new.parse().ok(),
            field => {
                if let Some(text) = p.meta.text_mut(field) {
                    *text = change.new.clone();
                }
            }
        }
    }
    apply_entries(&mut p.definition, &changes.definition);
    for change in &changes.work_packages {
        p.work_packages.set(change.work_package, change.new);
    }
    apply_entries(&mut p.groups, &changes.groups);
    for CellChange { cell, change } in &changes.cells {
        let state = p.cells.entry(*cell).or_default();
        match change {
            CellFieldChange::Status { new, .. } => state.status = *new,
            CellFieldChange::Text { new, .. } => state.text = new.clone(),
            CellFieldChange::Group { new, .. } => state.group = new.clone(),
            CellFieldChange::Refs { new, .. } => state.refs = new.clone(),
        }
    }
    p.relations.retain(|r| !changes.relations_removed.contains(r));
    p.relations.extend(changes.relations_added.iter().copied());
    p.relations.sort();
    p.relations.dedup();
    p
}

fn text(s: &str) -> String {
    serde_json::to_string(s).unwrap_or_default()
}

fn opt_text(s: &Option<String>) -> String {
    s.as_deref().map_or_else(|| "none".to_string(), text)
}

fn refs(r: &BTreeSet<u32>) -> String {
    let items: Vec<String> = r.iter().map(u32::to_string).collect();
    format!("[{}]", items.join(", "))
}

fn flag(responsible: bool) -> &'static str {
    if responsible {
        "responsible"
    } else {
        "handover"
    }
}

fn entry_lines<K: std::fmt::Display>(out: &mut String, section: &str, changes: &[EntryChange<K>]) {
    for change in changes {
        let _ = match change {
            EntryChange::Added { key, text: t } => {
                writeln!(out, "{section} {key} added: {}", text(t))
            }
            EntryChange::Removed { key, text: t } => {
                writeln!(out, "{section} {key} removed: {}", text(t))
            }
            EntryChange::Edited { key, old, new } => {
                writeln!(out, "{section} {key} edited: {} -> {}", text(old), text(new))
            }
        };
    }
}

/// Line-oriented report; `no changes` for an empty diff.
pub fn render_diff(d: &ProtocolDiff) -> String {
    if d.is_empty() {
        return "no changes\n".to_string();
    }
    let mut out = String::new();
    for c in &d.meta {
        let _ = writeln!(out, "meta {}: {} -> {}", c.field, text(&c.old), text(&c.new));
    }
    entry_lines(&mut out, "definition", &d.definition);
    for c in &d.work_packages {
        let _ = writeln!(
            out,
            "workpackage {}: {} -> {}",
            c.work_package.as_str(),
            flag(c.old),
            flag(c.new)
        );
    }
    entry_lines(&mut out, "group", &d.groups);
    for CellChange { cell, change } in &d.cells {
        let (old, new) = match change {
            CellFieldChange::Status { old, new } => (old.to_string(), new.to_string()),
            CellFieldChange::Text { old, new } | CellFieldChange::Group { old, new } => {
                (opt_text(old), opt_text(new))
            }
            CellFieldChange::Refs { old, new } => (refs(old), refs(new)),
        };
        let _ = writeln!(out, "cell {cell} {}: {old} -> {new}", change.field());
    }
    for r in &d.relations_added {
        let _ = writeln!(out, "relation added: {r}");
    }
    for r in &d.relations_removed {
        let _ = writeln!(out, "relation removed: {r}");
    }
    for i in &d.impact {
        let _ = writeln!(out, "impact definition.{} -> {}", i.item, i.cell);
    }
    out
}
