//! Fixed geometry of the key-aspect table: twelve rows, five columns.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// The three party groups a protocol distinguishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartyGroup {
    OurTeam,
    CooperatingTeams,
    Externals,
}

impl PartyGroup {
    pub const ALL: [PartyGroup; 3] = [Self::OurTeam, Self::CooperatingTeams, Self::Externals];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::OurTeam => "our-team",
            Self::CooperatingTeams => "cooperating-teams",
            Self::Externals => "externals",
        }
    }
}

/// One of the three work packages a team may be responsible for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WorkPackage {
    Development,
    Maintenance,
    Improvement,
}

impl WorkPackage {
    pub const ALL: [WorkPackage; 3] = [Self::Development, Self::Maintenance, Self::Improvement];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Development => "development",
            Self::Maintenance => "maintenance",
            Self::Improvement => "improvement",
        }
    }

    /// The handover-preparation row belonging to this work package.
    pub fn handover_row(self) -> AspectRow {
        match self {
            Self::Development => AspectRow::HandoverDevelopment,
            Self::Maintenance => AspectRow::HandoverMaintenance,
            Self::Improvement => AspectRow::HandoverImprovement,
        }
    }
}

impl FromStr for WorkPackage {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|w| w.as_str() == s).ok_or(())
    }
}

macro_rules! named_enum {
    (
        $(#[$meta:meta])*
        $name:ident { $($variant:ident => $text:literal, $title:literal;)* }
    ) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant,)*
        }

        impl $name {
            /// All values in declaration order.
            pub const ALL: &'static [$name] = &[$($name::$variant,)*];

            /// Identifier used in documents and on the wire.
            pub fn as_str(self) -> &'static str {
                match self {
                    $($name::$variant => $text,)*
                }
            }

            /// Human-readable label.
            pub fn title(self) -> &'static str {
                match self {
                    $($name::$variant => $title,)*
                }
            }

            pub fn index(self) -> usize {
                self as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = ();

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::ALL.iter().copied().find(|v| v.as_str() == s).ok_or(())
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.serialize_str(self.as_str())
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let s = String::deserialize(deserializer)?;
                s.parse()
                    .map_err(|_| serde::de::Error::custom(format!("unknown {}: {s}", stringify!($name))))
            }
        }
    };
}

named_enum! {
    /// A row of the key-aspect table.
    ///
    /// Three handover rows, the four product aspects for cooperating teams
    /// (inside) and externals (outside), and the undivided external artifacts
    /// row.
    AspectRow {
        HandoverDevelopment => "handover_development", "Handover: Development";
        HandoverMaintenance => "handover_maintenance", "Handover: Maintenance";
        HandoverImprovement => "handover_improvement", "Handover: Improvement";
        InsideProductProperties => "inside_product_properties", "Inside: Product Properties";
        InsideInterfaces => "inside_interfaces", "Inside: Interfaces";
        InsideDependencies => "inside_dependencies", "Inside: Dependencies";
        InsideResponsibilities => "inside_responsibilities", "Inside: Responsibilities";
        OutsideProductProperties => "outside_product_properties", "Outside: Product Properties";
        OutsideInterfaces => "outside_interfaces", "Outside: Interfaces";
        OutsideDependencies => "outside_dependencies", "Outside: Dependencies";
        OutsideResponsibilities => "outside_responsibilities", "Outside: Responsibilities";
        ExternalArtifacts => "external_artifacts", "External Artifacts";
    }
}

named_enum! {
    /// A knowledge-management column of the key-aspect table.
    AspectColumn {
        Roles => "roles", "Roles";
        ProcessKnowledge => "process_knowledge", "Process Knowledge";
        ProductKnowledge => "product_knowledge", "Product Knowledge";
        DemandedKnowledge => "demanded_knowledge", "Demanded Knowledge";
        ProcessInformation => "process_information", "Process Information";
    }
}

impl AspectRow {
    /// The work package whose handover this row prepares, if any.
    pub fn work_package(self) -> Option<WorkPackage> {
        match self {
            Self::HandoverDevelopment => Some(WorkPackage::Development),
            Self::HandoverMaintenance => Some(WorkPackage::Maintenance),
            Self::HandoverImprovement => Some(WorkPackage::Improvement),
            _ => None,
        }
    }

    pub fn is_handover(self) -> bool {
        self.work_package().is_some()
    }

    pub fn is_inside(self) -> bool {
        matches!(
            self,
            Self::InsideProductProperties
                | Self::InsideInterfaces
                | Self::InsideDependencies
                | Self::InsideResponsibilities
        )
    }

    pub fn is_outside(self) -> bool {
        matches!(
            self,
            Self::OutsideProductProperties
                | Self::OutsideInterfaces
                | Self::OutsideDependencies
                | Self::OutsideResponsibilities
        )
    }

    /// Party group that influences the aspects of this row.
    pub fn party(self) -> PartyGroup {
        if self.is_inside() {
            PartyGroup::CooperatingTeams
        } else if self.is_outside() {
            PartyGroup::Externals
        } else {
            PartyGroup::OurTeam
        }
    }
}

/// Address of one aspect cell. Ordered row-major in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellId {
    pub row: AspectRow,
    pub column: AspectColumn,
}

impl CellId {
    pub const COUNT: usize = 60;

    pub const fn new(row: AspectRow, column: AspectColumn) -> Self {
        Self { row, column }
    }

    /// Every cell of the grid in canonical (row-major) order.
    pub fn all() -> impl Iterator<Item = CellId> {
        AspectRow::ALL
            .iter()
            .flat_map(|&row| AspectColumn::ALL.iter().map(move |&column| CellId { row, column }))
    }

    pub fn index(self) -> usize {
        self.row.index() * AspectColumn::ALL.len() + self.column.index()
    }

    pub fn from_index(index: usize) -> Option<CellId> {
        let cols = AspectColumn::ALL.len();
        let row = *AspectRow::ALL.get(index / cols)?;
        Some(CellId::new(row, AspectColumn::ALL[index % cols]))
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.row, self.column)
    }
}

/// Why a `row.column` literal failed to resolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellIdError {
    Malformed,
    UnknownRow,
    UnknownColumn,
}

impl FromStr for CellId {
    type Err = CellIdError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (row, column) = s.split_once('.').ok_or(CellIdError::Malformed)?;
        let row = row.parse().map_err(|_| CellIdError::UnknownRow)?;
        let column = column.parse().map_err(|_| CellIdError::UnknownColumn)?;
        Ok(CellId { row, column })
    }
}

impl Serialize for CellId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CellId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse()
            .map_err(|_| serde::de::Error::custom(format!("invalid cell id: {s}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_has_sixty_cells_in_row_major_order() {
        let cells: Vec<_> = CellId::all().collect();
        assert_eq!(cells.len(), CellId::COUNT);
        assert!(cells.windows(2).all(|w| w[0] < w[1]));
        for (i, c) in cells.iter().enumerate() {
            assert_eq!(c.index(), i);
            assert_eq!(CellId::from_index(i), Some(*c));
        }
        assert_eq!(CellId::from_index(60), None);
    }

    #[test]
    fn row_classification() {
        assert_eq!(AspectRow::ALL.len(), 12);
        assert_eq!(AspectColumn::ALL.len(), 5);
        assert_eq!(AspectRow::ALL.iter().filter(|r| r.is_handover()).count(), 3);
        assert_eq!(AspectRow::ALL.iter().filter(|r| r.is_inside()).count(), 4);
        assert_eq!(AspectRow::ALL.iter().filter(|r| r.is_outside()).count(), 4);
        assert_eq!(AspectRow::ExternalArtifacts.party(), PartyGroup::OurTeam);
        for wp in WorkPackage::ALL {
            assert_eq!(wp.handover_row().work_package(), Some(wp));
        }
    }

    #[test]
    fn cell_id_parsing() {
        let id: CellId = "inside_interfaces.roles".parse().unwrap();
        assert_eq!(id, CellId::new(AspectRow::InsideInterfaces, AspectColumn::Roles));
        assert_eq!(id.to_string(), "inside_interfaces.roles");
        assert_eq!("inside_iface.roles".parse::<CellId>(), Err(CellIdError::UnknownRow));
        assert_eq!("inside_interfaces.role".parse::<CellId>(), Err(CellIdError::UnknownColumn));
        assert_eq!("inside_interfaces".parse::<CellId>(), Err(CellIdError::Malformed));
    }
}
