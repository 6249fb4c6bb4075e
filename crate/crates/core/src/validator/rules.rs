use std::collections::{BTreeMap, BTreeSet};

use super::{Diagnostic, Location, RuleId, Severity};
use crate::model::{CellId, CellStatus, MetaField, Protocol, RelationKind, WorkPackage};

struct Sink<'a> {
    rule: RuleId,
    out: &'a mut Vec<Diagnostic>,
}

impl Sink<'_> {
    fn emit(&mut self, severity: Severity, location: Location, message: impl Into<String>) {
        self.out.push(Diagnostic {
            rule: self.rule,
            severity,
            location,
            message: message.into(),
        });
    }

    fn error(&mut self, location: Location, message: impl Into<String>) {
        self.emit(Severity::Error, location, message);
    }
}

pub(super) fn check(rule: RuleId, p: &Protocol, out: &mut Vec<Diagnostic>) {
    let mut sink = Sink { rule, out };
    match rule {
        RuleId::R1 => completeness(p, &mut sink),
        RuleId::R2 => provided_needs_provider(p, &mut sink),
        RuleId::R3 => provider_validity(p, &mut sink),
        RuleId::R4 => open_cells(p, &mut sink),
        RuleId::R5 => reference_integrity(p, &mut sink),
        RuleId::R6 => definition_minimality(p, &mut sink),
        RuleId::R7 => group_integrity(p, &mut sink),
        RuleId::R7b => group_usage(p, &mut sink),
        RuleId::R8 => meta_completeness(p, &mut sink),
        RuleId::R9 => work_package_consistency(p, &mut sink),
        RuleId::R10 => demand_targets(p, &mut sink),
        RuleId::R11 => acyclicity(p, &mut sink),
        RuleId::R12 => cross_exclusion(p, &mut sink),
    }
}

fn completeness(p: &Protocol, sink: &mut Sink) {
    for id in CellId::all() {
        let cell = p.cell(id);
        match cell.status {
            CellStatus::Unset => sink.error(Location::Cell(id), "cell is not filled in"),
            CellStatus::Described if cell.text.is_none() && cell.group.is_none() => {
                sink.error(Location::Cell(id), "described cell has neither text nor group")
            }
            _ => {}
        }
    }
}

fn provided_needs_provider(p: &Protocol, sink: &mut Sink) {
    let provided: BTreeSet<CellId> = p
        .relations_of(RelationKind::Provides)
        .map(|r| r.target)
        .collect();
    for id in CellId::all() {
        let cell = p.cell(id);
        if cell.status != CellStatus::Provided {
            continue;
        }
        if !provided.contains(&id) {
            sink.error(Location::Cell(id), "provided cell is not the target of any provides relation");
        }
        if cell.text.is_some() || cell.group.is_some() {
            sink.error(
                Location::Cell(id),
                "provided cell carries its own description; it belongs to the providing cell",
            );
        }
    }
}

fn provider_validity(p: &Protocol, sink: &mut Sink) {
    let mut sources: BTreeMap<CellId, Vec<CellId>> = BTreeMap::new();
    for r in p.relations_of(RelationKind::Provides) {
        sources.entry(r.source).or_default().push(r.target);
    }
    for (source, targets) in sources {
        let status = p.status(source);
        if !matches!(status, CellStatus::Described | CellStatus::Denied) {
            let targets: Vec<String> = targets.iter().map(ToString::to_string).collect();
            sink.error(
                Location::Cell(source),
                format!(
                    "provides {} but is {status}; a provider must be described or denied",
                    targets.join(", ")
                ),
            );
        }
    }
}

fn open_cells(p: &Protocol, sink: &mut Sink) {
    for id in CellId::all().filter(|&id| p.status(id) == CellStatus::Open) {
        let message = match &p.cell(id).text {
            Some(text) => format!("open question: {}", first_line(text)),
            None => "open question".to_string(),
        };
        sink.emit(Severity::Open, Location::Cell(id), message);
    }
}

fn first_line(text: &str) -> &str {
    text.lines().next().unwrap_or("")
}

fn reference_integrity(p: &Protocol, sink: &mut Sink) {
    for (id, cell) in &p.cells {
        for n in cell.refs.iter().filter(|n| !p.definition.contains_key(n)) {
            sink.error(Location::Cell(*id), format!("reference {n} does not name a definition item"));
        }
    }
}

fn definition_minimality(p: &Protocol, sink: &mut Sink) {
    let referenced: BTreeSet<u32> = p.cells.values().flat_map(|c| c.refs.iter().copied()).collect();
    for &n in p.definition.keys() {
        if !referenced.contains(&n) {
            sink.emit(
                Severity::Warning,
                Location::Definition(n),
                "definition item is not referenced by any cell",
            );
        }
    }
    if let Some((expected, &found)) = p
        .definition
        .keys()
        .enumerate()
        .map(|(i, n)| (i as u32 + 1, n))
        .find(|(expected, n)| expected != *n)
    {
        sink.emit(
            Severity::Warning,
            Location::Definition(found),
            format!("definition items are not numbered contiguously; expected {expected}"),
        );
    }
}

fn group_integrity(p: &Protocol, sink: &mut Sink) {
    for (id, cell) in &p.cells {
        if let Some(group) = &cell.group {
            if !p.groups.contains_key(group) {
                sink.error(Location::Cell(*id), format!("group `{group}` is not declared"));
            }
        }
    }
}

fn group_usage(p: &Protocol, sink: &mut Sink) {
    for group in p.groups.keys() {
        let uses = p
            .cells
            .values()
            .filter(|c| c.group.as_deref() == Some(group.as_str()))
            .count();
        if uses < 2 {
            sink.emit(
                Severity::Warning,
                Location::Group(group.clone()),
                format!("group is used by {uses} cell(s); a shared description needs at least 2"),
            );
        }
    }
}

fn meta_completeness(p: &Protocol, sink: &mut Sink) {
    for field in MetaField::ALL {
        if !p.meta.is_filled(field) {
            sink.error(Location::Meta(field), "meta information is missing");
        }
    }
}

fn work_package_consistency(p: &Protocol, sink: &mut Sink) {
    for id in CellId::all() {
        let cell = p.cell(id);
        let crossed = cell.status == CellStatus::Crossed;
        match id.row.work_package() {
            Some(wp) if p.work_packages.responsible(wp) && !crossed => sink.error(
                Location::Cell(id),
                format!("our team keeps {}; its handover row must be crossed", wp_name(wp)),
            ),
            Some(wp) if !p.work_packages.responsible(wp) && crossed => sink.error(
                Location::Cell(id),
                format!("{} is handed over; its handover row must be filled in", wp_name(wp)),
            ),
            None if crossed => sink.error(Location::Cell(id), "only handover rows can be crossed"),
            _ => {}
        }
        if crossed && cell.has_content() {
            sink.error(Location::Cell(id), "crossed cell carries text, group or references");
        }
    }
}

fn wp_name(wp: WorkPackage) -> &'static str {
    wp.as_str()
}

fn demand_targets(p: &Protocol, sink: &mut Sink) {
    for r in p.relations_of(RelationKind::Demands) {
        match p.status(r.target) {
            CellStatus::Crossed => sink.error(
                Location::Cell(r.source),
                format!("demands {}, which is crossed", r.target),
            ),
            CellStatus::Open => sink.emit(
                Severity::Open,
                Location::Cell(r.source),
                format!("demands {}, which is still open", r.target),
            ),
            _ => {}
        }
    }
}

/// Cells lying on a directed cycle of `kind` edges, grouped per strongly
/// connected component.
pub(crate) fn cyclic_components(p: &Protocol, kind: RelationKind) -> Vec<Vec<CellId>> {
    // reach[i] has bit j set iff j is reachable from i by one or more edges.
    let mut reach = [0u64; CellId::COUNT];
    for r in p.relations_of(kind) {
        reach[r.source.index()] |= 1 << r.target.index();
    }
    for k in 0..CellId::COUNT {
        let via = reach[k];
        for row in reach.iter_mut() {
            if *row & (1 << k) != 0 {
                *row |= via;
            }
        }
    }
    let mut seen = 0u64;
    let mut components = Vec::new();
    for i in 0..CellId::COUNT {
        if reach[i] & (1 << i) == 0 || seen & (1 << i) != 0 {
            continue;
        }
        let members: Vec<CellId> = (0..CellId::COUNT)
            .filter(|&j| reach[i] & (1 << j) != 0 && reach[j] & (1 << i) != 0)
            .filter_map(CellId::from_index)
            .collect();
        for m in &members {
            seen |= 1 << m.index();
        }
        components.push(members);
    }
    components
}

fn acyclicity(p: &Protocol, sink: &mut Sink) {
    for (kind, severity, what) in [
        (RelationKind::Provides, Severity::Error, "provides itself through the cycle"),
        (RelationKind::Demands, Severity::Warning, "demands itself through the cycle"),
    ] {
        for component in cyclic_components(p, kind) {
            let names: Vec<String> = component.iter().map(ToString::to_string).collect();
            let cycle = names.join(", ");
            for id in &component {
                sink.emit(severity, Location::Cell(*id), format!("{what} {{{cycle}}}"));
            }
        }
    }
}

fn cross_exclusion(p: &Protocol, sink: &mut Sink) {
    for (i, r) in p.relations.iter().enumerate() {
        let crossed: Vec<String> = [r.source, r.target]
            .into_iter()
            .filter(|&c| p.status(c) == CellStatus::Crossed)
            .map(|c| c.to_string())
            .collect();
        if !crossed.is_empty() {
            sink.error(
                Location::Relation(i),
                format!("`{r}` involves crossed cell(s) {}", crossed.join(", ")),
            );
        }
    }
}
