//! In-memory protocol model.
//!
//! A [`Protocol`] holds the meta information, the numbered definition items,
//! the work-package flags, the shared description groups, the 12×5 cell grid
//! and the provides/demands relations between cells. Values are immutable
//! once built; all analysis lives in free functions.

mod grid;
mod marks;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

pub use grid::{AspectColumn, AspectRow, CellId, CellIdError, PartyGroup, WorkPackage};
pub use marks::{derive_marks, trace_knowledge_flow, DerivedMarks, RightPart};

/// Context of a protocol: who filled it, for which team, when.
///
/// Empty strings and a missing date are representable so that unfinished
/// documents can be loaded; the validator reports them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaInfo {
    pub name: String,
    pub version: String,
    pub date: Option<NaiveDate>,
    pub filler: String,
    pub our_team: String,
    pub cooperating_teams: String,
    pub externals: String,
}

/// A meta information key as written in documents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MetaField {
    Name,
    Version,
    Date,
    Filler,
    OurTeam,
    CooperatingTeams,
    Externals,
}

impl MetaField {
    pub const ALL: [MetaField; 7] = [
        Self::Name,
        Self::Version,
        Self::Date,
        Self::Filler,
        Self::OurTeam,
        Self::CooperatingTeams,
        Self::Externals,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Name => "name",
            Self::Version => "version",
            Self::Date => "date",
            Self::Filler => "filler",
            Self::OurTeam => "our-team",
            Self::CooperatingTeams => "cooperating-teams",
            Self::Externals => "externals",
        }
    }
}

impl fmt::Display for MetaField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MetaField {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|m| m.as_str() == s).ok_or(())
    }
}

impl MetaInfo {
    /// Text of a meta field; the date is rendered ISO-8601 or empty.
    pub fn get(&self, field: MetaField) -> String {
        match field {
            MetaField::Name => self.name.clone(),
            MetaField::Version => self.version.clone(),
            MetaField::Date => self.date.map(|d| d.to_string()).unwrap_or_default(),
            MetaField::Filler => self.filler.clone(),
            MetaField::OurTeam => self.our_team.clone(),
            MetaField::CooperatingTeams => self.cooperating_teams.clone(),
            MetaField::Externals => self.externals.clone(),
        }
    }

    /// Mutable access to the text fields. `Date` has no text slot.
    pub fn text_mut(&mut self, field: MetaField) -> Option<&mut String> {
        Some(match field {
            MetaField::Name => &mut self.name,
            MetaField::Version => &mut self.version,
            MetaField::Date => return None,
            MetaField::Filler => &mut self.filler,
            MetaField::OurTeam => &mut self.our_team,
            MetaField::CooperatingTeams => &mut self.cooperating_teams,
            MetaField::Externals => &mut self.externals,
        })
    }

    pub fn is_filled(&self, field: MetaField) -> bool {
        match field {
            MetaField::Date => self.date.is_some(),
            other => !self.get(other).trim().is_empty(),
        }
    }
}

/// Responsibility flags: `true` means our team is responsible for the work
/// package, `false` means it has to be prepared for handover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorkPackages {
    pub development: bool,
    pub maintenance: bool,
    pub improvement: bool,
}

impl WorkPackages {
    pub const ALL_RESPONSIBLE: WorkPackages = WorkPackages {
        development: true,
        maintenance: true,
        improvement: true,
    };

    pub fn responsible(&self, wp: WorkPackage) -> bool {
        match wp {
            WorkPackage::Development => self.development,
            WorkPackage::Maintenance => self.maintenance,
            WorkPackage::Improvement => self.improvement,
        }
    }

    pub fn set(&mut self, wp: WorkPackage, responsible: bool) {
        match wp {
            WorkPackage::Development => self.development = responsible,
            WorkPackage::Maintenance => self.maintenance = responsible,
            WorkPackage::Improvement => self.improvement = responsible,
        }
    }

    /// Whether normalization crosses the cells of `row`.
    pub fn crosses(&self, row: AspectRow) -> bool {
        row.work_package().is_some_and(|wp| self.responsible(wp))
    }
}

/// Status of one aspect cell.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    /// Nothing filled in yet.
    #[default]
    Unset,
    /// Actively managed; the cell carries a description.
    Described,
    /// No active management needed.
    Denied,
    /// Handled as a consequence of another cell.
    Provided,
    /// Cannot be answered yet (red, question marks).
    Open,
    /// Not applicable; only in handover rows.
    Crossed,
}

impl CellStatus {
    pub const ALL: [CellStatus; 6] = [
        Self::Unset,
        Self::Described,
        Self::Denied,
        Self::Provided,
        Self::Open,
        Self::Crossed,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Unset => "unset",
            Self::Described => "described",
            Self::Denied => "denied",
            Self::Provided => "provided",
            Self::Open => "open",
            Self::Crossed => "crossed",
        }
    }
}

impl fmt::Display for CellStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CellStatus {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|st| st.as_str() == s).ok_or(())
    }
}

/// Content of one grid cell.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellState {
    pub status: CellStatus,
    pub text: Option<String>,
    pub group: Option<String>,
    /// Definition item numbers this cell is based on.
    pub refs: BTreeSet<u32>,
}

impl CellState {
    pub fn crossed() -> Self {
        Self {
            status: CellStatus::Crossed,
            ..Self::default()
        }
    }

    pub fn with_status(status: CellStatus) -> Self {
        Self {
            status,
            ..Self::default()
        }
    }

    pub fn described(text: impl Into<String>, refs: impl IntoIterator<Item = u32>) -> Self {
        Self {
            status: CellStatus::Described,
            text: Some(text.into()),
            group: None,
            refs: refs.into_iter().collect(),
        }
    }

    pub fn denied(text: impl Into<String>, refs: impl IntoIterator<Item = u32>) -> Self {
        Self {
            status: CellStatus::Denied,
            ..Self::described(text, refs)
        }
    }

    /// Nothing stated: unset and without any content.
    pub fn is_blank(&self) -> bool {
        self.status == CellStatus::Unset
            && self.text.is_none()
            && self.group.is_none()
            && self.refs.is_empty()
    }

    pub fn has_content(&self) -> bool {
        self.text.is_some() || self.group.is_some() || !self.refs.is_empty()
    }
}

static BLANK_CELL: CellState = CellState {
    status: CellStatus::Unset,
    text: None,
    group: None,
    refs: BTreeSet::new(),
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    /// Source handles the target; the target needs no active management.
    Provides,
    /// Source needs the target.
    Demands,
}

impl RelationKind {
    pub const ALL: [RelationKind; 2] = [Self::Provides, Self::Demands];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Provides => "provides",
            Self::Demands => "demands",
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationKind {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|k| k.as_str() == s).ok_or(())
    }
}

/// A directed edge between two cells. Ordered by kind, source, target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Relation {
    pub kind: RelationKind,
    pub source: CellId,
    pub target: CellId,
}

impl Relation {
    pub fn provides(source: CellId, target: CellId) -> Self {
        Self {
            kind: RelationKind::Provides,
            source,
            target,
        }
    }

    pub fn demands(source: CellId, target: CellId) -> Self {
        Self {
            kind: RelationKind::Demands,
            source,
            target,
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} -> {}", self.kind, self.source, self.target)
    }
}

/// One complete protocol for one team's management process.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Protocol {
    pub meta: MetaInfo,
    /// Numbered definition items, keyed by number.
    #[serde(with = "definition_list")]
    pub definition: BTreeMap<u32, String>,
    pub work_packages: WorkPackages,
    /// Shared description groups, keyed by identifier.
    pub groups: BTreeMap<String, String>,
    pub cells: BTreeMap<CellId, CellState>,
    pub relations: Vec<Relation>,
}

/// A responsible-flag handover cell with explicit non-crossed content.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("handover cells with content although the work package is kept: {}", list_cells(.cells))]
pub struct NormalizeError {
    pub cells: Vec<CellId>,
}

fn list_cells(cells: &[CellId]) -> String {
    cells.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

impl Protocol {
    /// A protocol with the given context and no content.
    pub fn new(meta: MetaInfo, work_packages: WorkPackages) -> Self {
        Protocol {
            meta,
            definition: BTreeMap::new(),
            work_packages,
            groups: BTreeMap::new(),
            cells: BTreeMap::new(),
            relations: Vec::new(),
        }
        .fill_defaults()
    }

    /// State of a cell; cells absent from the map read as blank.
    pub fn cell(&self, id: CellId) -> &CellState {
        self.cells.get(&id).unwrap_or(&BLANK_CELL)
    }

    pub fn status(&self, id: CellId) -> CellStatus {
        self.cell(id).status
    }

    /// Completes the grid and brings relations into canonical order,
    /// rejecting handover content that conflicts with a kept work package.
    pub fn normalize(&self) -> Result<Protocol, NormalizeError> {
        let conflicts: Vec<CellId> = self
            .cells
            .iter()
            .filter(|(id, state)| {
                self.work_packages.crosses(id.row)
                    && state.status != CellStatus::Crossed
                    && !state.is_blank()
            })
            .map(|(id, _)| *id)
            .collect();
        if !conflicts.is_empty() {
            return Err(NormalizeError { cells: conflicts });
        }
        Ok(self.clone().fill_defaults())
    }

    /// The lenient half of [`Protocol::normalize`]: fills unstated cells
    /// (crossed in kept handover rows, unset elsewhere), sorts and dedups
    /// relations, and leaves conflicting content in place for the
    /// validator to report.
    pub fn fill_defaults(mut self) -> Protocol {
        for id in CellId::all() {
            let crosses = self.work_packages.crosses(id.row);
            let entry = self.cells.entry(id).or_default();
            if crosses && entry.is_blank() {
                *entry = CellState::crossed();
            }
        }
        self.relations.sort();
        self.relations.dedup();
        self
    }

    /// Whether `cell` holds what normalization would put there unprompted.
    pub fn is_default_cell(&self, id: CellId) -> bool {
        let state = self.cell(id);
        if self.work_packages.crosses(id.row) {
            *state == CellState::crossed()
        } else {
            state.is_blank()
        }
    }

    /// Cells in canonical order whose refs include `item`.
    pub fn cells_referencing(&self, item: u32) -> Vec<CellId> {
        self.cells
            .iter()
            .filter(|(_, s)| s.refs.contains(&item))
            .map(|(id, _)| *id)
            .collect()
    }

    pub fn relations_of(&self, kind: RelationKind) -> impl Iterator<Item = &Relation> {
        self.relations.iter().filter(move |r| r.kind == kind)
    }
}

mod definition_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Item {
        number: u32,
        text: String,
    }

    pub fn serialize<S: Serializer>(map: &BTreeMap<u32, String>, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(map.iter().map(|(number, text)| Item {
            number: *number,
            text: text.clone(),
        }))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<u32, String>, D::Error> {
        let items = Vec::<Item>::deserialize(d)?;
        Ok(items.into_iter().map(|i| (i.number, i.text)).collect())
    }
}
