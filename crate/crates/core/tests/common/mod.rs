#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;
use proptest::collection::{btree_map, btree_set, vec};
use proptest::prelude::*;
use ssmach::model::{
    CellId, CellState, CellStatus, MetaInfo, Protocol, Relation, RelationKind, WorkPackages,
};

pub fn corpus(text: &str) -> Protocol {
    ssmach::dsl::parse(text).expect("bundled corpus parses")
}

/// Texts that stress quoting: escapes, newlines, lines that look like
/// block delimiters, comment and section characters.
pub fn text() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-zA-Z0-9 ,.;:!?()'-]{0,30}",
        "[a-z\"\\\\#=\\[\\]{}\t ]{0,20}",
        vec("[a-z \"#]{0,12}", 1..4).prop_map(|lines| lines.join("\n")),
        Just("\"\"\"".to_string()),
        Just("a\n\"\"\"\nb".to_string()),
        Just("line\r\nnext".to_string()),
        Just(String::new()),
        any::<String>(),
    ]
}

pub fn ident() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_-]{0,8}"
}

pub fn cell_id() -> impl Strategy<Value = CellId> {
    (0..CellId::COUNT).prop_map(|i| CellId::from_index(i).unwrap())
}

pub fn status() -> impl Strategy<Value = CellStatus> {
    proptest::sample::select(CellStatus::ALL.to_vec())
}

pub fn cell_state() -> impl Strategy<Value = CellState> {
    (
        status(),
        proptest::option::of(text()),
        proptest::option::of(ident()),
        btree_set(1u32..40, 0..4),
    )
        .prop_map(|(status, text, group, refs)| CellState {
            status,
            text,
            group,
            refs,
        })
}

pub fn meta() -> impl Strategy<Value = MetaInfo> {
    (
        vec(text(), 6),
        proptest::option::of((1990i32..2100, 1u32..13, 1u32..29)),
    )
        .prop_map(|(t, date)| MetaInfo {
            name: t[0].clone(),
            version: t[1].clone(),
            date: date.and_then(|(y, m, d)| NaiveDate::from_ymd_opt(y, m, d)),
            filler: t[2].clone(),
            our_team: t[3].clone(),
            cooperating_teams: t[4].clone(),
            externals: t[5].clone(),
        })
}

pub fn relation() -> impl Strategy<Value = Relation> {
    (any::<bool>(), cell_id(), cell_id())
        .prop_filter("no self relations", |(_, s, t)| s != t)
        .prop_map(|(provides, source, target)| Relation {
            kind: if provides {
                RelationKind::Provides
            } else {
                RelationKind::Demands
            },
            source,
            target,
        })
}

/// Arbitrary protocols in normalized form; content need not validate.
pub fn protocol() -> impl Strategy<Value = Protocol> {
    (
        meta(),
        btree_map(1u32..30, text(), 0..6),
        (any::<bool>(), any::<bool>(), any::<bool>()),
        btree_map(ident(), text(), 0..4),
        btree_map(cell_id(), cell_state(), 0..40),
        vec(relation(), 0..20),
    )
        .prop_map(|(meta, definition, (d, m, i), groups, cells, relations)| {
            let mut p = Protocol::new(
                meta,
                WorkPackages {
                    development: d,
                    maintenance: m,
                    improvement: i,
                },
            );
            p.definition = definition;
            p.groups = groups;
            p.cells.extend(cells);
            p.relations = relations;
            p.fill_defaults()
        })
}

/// Cells on at least one directed cycle, found by walking every simple
/// path from every start.
pub fn brute_force_cycle_cells(edges: &[(CellId, CellId)]) -> BTreeSet<CellId> {
    let mut succ: BTreeMap<CellId, Vec<CellId>> = BTreeMap::new();
    for (s, t) in edges {
        succ.entry(*s).or_default().push(*t);
    }
    fn walk(
        start: CellId,
        at: CellId,
        path: &mut Vec<CellId>,
        succ: &BTreeMap<CellId, Vec<CellId>>,
        found: &mut BTreeSet<CellId>,
    ) {
        for &next in succ.get(&at).into_iter().flatten() {
            if next == start {
                found.extend(path.iter().copied());
            } else if !path.contains(&next) {
                path.push(next);
                walk(start, next, path, succ, found);
                path.pop();
            }
        }
    }
    let mut found = BTreeSet::new();
    for &start in succ.keys() {
        walk(start, start, &mut vec![start], &succ, &mut found);
    }
    found
}
