//! The document written by `ssmach init`.

use std::fmt::Write;

use ssmach::model::{AspectColumn, AspectRow};

fn row_hint(row: AspectRow) -> &'static str {
    match row {
        AspectRow::HandoverDevelopment => {
            "what another team needs to take development over from us"
        }
        AspectRow::HandoverMaintenance => {
            "what another team needs to take maintenance over from us"
        }
        AspectRow::HandoverImprovement => {
            "what another team needs to take improvement over from us"
        }
        AspectRow::InsideProductProperties => {
            "properties of our product that matter to teams of our organization"
        }
        AspectRow::InsideInterfaces => "interfaces between our product and other teams' products",
        AspectRow::InsideDependencies => "what we need from other teams of our organization",
        AspectRow::InsideResponsibilities => "what other teams of our organization rely on us for",
        AspectRow::OutsideProductProperties => "properties of our product that matter to externals",
        AspectRow::OutsideInterfaces => "interfaces offered to end-users and other externals",
        AspectRow::OutsideDependencies => "services and partners outside the organization we need",
        AspectRow::OutsideResponsibilities => "what externals rely on us for",
        AspectRow::ExternalArtifacts => "libraries, tools and other artifacts we take over",
    }
}

fn column_hint(column: AspectColumn) -> &'static str {
    match column {
        AspectColumn::Roles => "who does the work",
        AspectColumn::ProcessKnowledge => "how the work is done",
        AspectColumn::ProductKnowledge => "what the product or result looks like",
        AspectColumn::DemandedKnowledge => "knowledge missing today that has to be acquired",
        AspectColumn::ProcessInformation => "information the process has to record or report",
    }
}

/// A protocol skeleton: empty meta and definition, every work package
/// handed over, and all 60 cells unset.
pub fn template() -> String {
    let mut out = String::new();
    let _ = write_template(&mut out);
    out
}

fn write_template(out: &mut String) -> std::fmt::Result {
    writeln!(out, "ssmach 1")?;
    writeln!(out, "# Protocol template. Fill every cell with a status:")?;
    writeln!(out, "#   described  managed actively; add text or a group")?;
    writeln!(out, "#   denied     needs no active management; say why in text")?;
    writeln!(out, "#   provided   handled by another cell; add a provides relation")?;
    writeln!(out, "#   open       not answered yet")?;
    writeln!(out, "#   crossed    only in handover rows")?;
    writeln!(out, "# Cite definition items with refs = [1, 2].")?;
    writeln!(out, "#")?;
    writeln!(out, "# Columns:")?;
    for column in AspectColumn::ALL {
        writeln!(out, "#   {:<20} {}", column.as_str(), column_hint(*column))?;
    }
    writeln!(out)?;
    writeln!(out, "[meta]")?;
    for key in ["name", "version"] {
        writeln!(out, "{key} = \"\"")?;
    }
    writeln!(out, "# date = 2024-01-31")?;
    for key in ["filler", "our-team", "cooperating-teams", "externals"] {
        writeln!(out, "{key} = \"\"")?;
    }
    writeln!(out)?;
    writeln!(out, "[definition]")?;
    writeln!(out, "# 1 = \"First part of the definition.\"")?;
    writeln!(out)?;
    writeln!(out, "[workpackages]")?;
    writeln!(out, "# responsible crosses the handover row of the work package")?;
    for wp in ["development", "maintenance", "improvement"] {
        writeln!(out, "{wp} = handover")?;
    }
    writeln!(out)?;
    writeln!(out, "[groups]")?;
    writeln!(out, "# shared-text = \"Text used by several cells.\"")?;
    for row in AspectRow::ALL {
        writeln!(out)?;
        writeln!(out, "# {}: {}", row.title(), row_hint(*row))?;
        for column in AspectColumn::ALL {
            writeln!(out, "[cell {row}.{column}]")?;
            writeln!(out, "status = \"unset\"")?;
        }
    }
    writeln!(out)?;
    writeln!(out, "[relations]")?;
    writeln!(out, "# provides inside_interfaces.product_knowledge -> inside_interfaces.roles")?;
    writeln!(out, "# demands outside_interfaces.product_knowledge -> outside_responsibilities.product_knowledge")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ssmach::model::{CellId, CellStatus};

    #[test]
    fn template_parses_with_all_cells_unset() {
        let p = ssmach::dsl::parse(&template()).expect("template parses");
        assert_eq!(p.cells.len(), CellId::COUNT);
        assert!(p.cells.values().all(|c| c.status == CellStatus::Unset));
        let report = ssmach::validator::validate(&p);
        let r1 = report.by_rule(ssmach::validator::RuleId::R1).count();
        assert_eq!(r1, CellId::COUNT);
    }

    #[test]
    fn every_row_and_column_gets_a_hint() {
        let t = template();
        for row in AspectRow::ALL {
            assert!(t.contains(row_hint(*row)));
        }
        for column in AspectColumn::ALL {
            assert!(t.contains(column_hint(*column)));
        }
    }
}
