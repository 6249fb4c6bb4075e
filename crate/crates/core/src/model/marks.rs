//! Marks computed from relations and statuses, and knowledge-flow tracing.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{CellId, CellStatus, Protocol, RelationKind};

/// Coloring of the right part of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RightPart {
    Active,
    NoActiveManagement,
    Provided,
    Open,
    Crossed,
}

impl RightPart {
    pub fn of(status: CellStatus) -> RightPart {
        match status {
            CellStatus::Unset | CellStatus::Described => RightPart::Active,
            CellStatus::Denied => RightPart::NoActiveManagement,
            CellStatus::Provided => RightPart::Provided,
            CellStatus::Open => RightPart::Open,
            CellStatus::Crossed => RightPart::Crossed,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Active => "active",
            Self::NoActiveManagement => "no-active-management",
            Self::Provided => "provided",
            Self::Open => "open",
            Self::Crossed => "crossed",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedMarks {
    /// Cells used or required by others (violet).
    pub emphasized: BTreeSet<CellId>,
    pub right_part: BTreeMap<CellId, RightPart>,
}

/// Emphasis is every demands target and every provides source; the right
/// part follows the status.
pub fn derive_marks(protocol: &Protocol) -> DerivedMarks {
    let emphasized = protocol
        .relations
        .iter()
        .map(|r| match r.kind {
            RelationKind::Demands => r.target,
            RelationKind::Provides => r.source,
        })
        .collect();
    let right_part = CellId::all()
        .map(|id| (id, RightPart::of(protocol.status(id))))
        .collect();
    DerivedMarks {
        emphasized,
        right_part,
    }
}

/// All maximal demand chains starting at `start`.
///
/// A chain follows demands edges from source to target and ends when the
/// current cell has no demands edge to a cell not already on the chain.
/// Chains are returned in lexicographic order.
pub fn trace_knowledge_flow(protocol: &Protocol, start: CellId) -> Vec<Vec<CellId>> {
    let mut successors: BTreeMap<CellId, Vec<CellId>> = BTreeMap::new();
    for r in protocol.relations_of(RelationKind::Demands) {
        successors.entry(r.source).or_default().push(r.target);
    }
    for targets in successors.values_mut() {
        targets.sort();
        targets.dedup();
    }

    let mut chains = Vec::new();
    let mut path = vec![start];
    let mut on_path = [false; CellId::COUNT];
    on_path[start.index()] = true;
    walk(&successors, &mut path, &mut on_path, &mut chains);
    chains.sort();
    chains
}

fn walk(
    successors: &BTreeMap<CellId, Vec<CellId>>,
    path: &mut Vec<CellId>,
    on_path: &mut [bool; CellId::COUNT],
    chains: &mut Vec<Vec<CellId>>,
) {
    let current = *path.last().expect("path never empty");
    let next: Vec<CellId> = successors
        .get(&current)
        .map(|t| t.iter().copied().filter(|c| !on_path[c.index()]).collect())
        .unwrap_or_default();
    if next.is_empty() {
        chains.push(path.clone());
        return;
    }
    for cell in next {
        on_path[cell.index()] = true;
        path.push(cell);
        walk(successors, path, on_path, chains);
        path.pop();
        on_path[cell.index()] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AspectColumn, AspectRow, MetaInfo, Relation, WorkPackages};

    fn id(i: usize) -> CellId {
        CellId::from_index(i).unwrap()
    }

    fn protocol_with(relations: Vec<Relation>) -> Protocol {
        let mut p = Protocol::new(MetaInfo::default(), WorkPackages::ALL_RESPONSIBLE);
        p.relations = relations;
        p
    }

    #[test]
    fn no_relations_no_emphasis() {
        let p = protocol_with(vec![]);
        let marks = derive_marks(&p);
        assert!(marks.emphasized.is_empty());
        assert_eq!(marks.right_part.len(), 60);
    }

    #[test]
    fn emphasis_is_demand_targets_and_provide_sources() {
        let p = protocol_with(vec![
            Relation::provides(id(20), id(21)),
            Relation::demands(id(30), id(31)),
        ]);
        let marks = derive_marks(&p);
        assert_eq!(marks.emphasized, [id(20), id(31)].into());
    }

    #[test]
    fn no_outgoing_demands_yields_single_chain() {
        let p = protocol_with(vec![Relation::demands(id(40), id(41))]);
        assert_eq!(trace_knowledge_flow(&p, id(41)), vec![vec![id(41)]]);
        assert_eq!(trace_knowledge_flow(&p, id(40)), vec![vec![id(40), id(41)]]);
    }

    #[test]
    fn three_cycle_terminates_after_each_cell_once() {
        let (a, b, c) = (
            CellId::new(AspectRow::OutsideInterfaces, AspectColumn::Roles),
            CellId::new(AspectRow::OutsideInterfaces, AspectColumn::ProcessKnowledge),
            CellId::new(AspectRow::OutsideInterfaces, AspectColumn::ProductKnowledge),
        );
        let p = protocol_with(vec![
            Relation::demands(a, b),
            Relation::demands(b, c),
            Relation::demands(c, a),
        ]);
        // Brute force over the three-node graph: the only simple path from
        // `a` that cannot be extended is a, b, c.
        assert_eq!(trace_knowledge_flow(&p, a), vec![vec![a, b, c]]);
        assert_eq!(trace_knowledge_flow(&p, b), vec![vec![b, c, a]]);
    }

    #[test]
    fn branching_yields_one_chain_per_branch() {
        let p = protocol_with(vec![
            Relation::demands(id(1), id(2)),
            Relation::demands(id(1), id(3)),
            Relation::demands(id(3), id(4)),
            Relation::provides(id(4), id(5)),
        ]);
        assert_eq!(
            trace_knowledge_flow(&p, id(1)),
            vec![vec![id(1), id(2)], vec![id(1), id(3), id(4)]]
        );
    }
}
