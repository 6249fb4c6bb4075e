use std::fmt::Write;

use super::FORMAT_VERSION;
use crate::model::{CellId, CellStatus, MetaField, Protocol, WorkPackage};

/// Writes the canonical form of a normalized protocol.
///
/// Sections come in a fixed order (meta, definition, workpackages, groups,
/// cells row-major, relations). Cells holding exactly what normalization
/// would fill in are omitted.
pub fn serialize(protocol: &Protocol) -> String {
    let mut out = String::new();
    // Writing to a String cannot fail.
    let _ = write_protocol(&mut out, protocol);
    out
}

fn write_protocol(out: &mut String, p: &Protocol) -> std::fmt::Result {
    writeln!(out, "ssmach {FORMAT_VERSION}")?;

    writeln!(out, "\n[meta]")?;
    for field in MetaField::ALL {
        match field {
            MetaField::Date => {
                if let Some(date) = p.meta.date {
                    writeln!(out, "date = {}", date.format("%Y-%m-%d"))?;
                }
            }
            other => writeln!(out, "{} = {}", other.as_str(), quote(&p.meta.get(other)))?,
        }
    }

    writeln!(out, "\n[definition]")?;
    for (number, text) in &p.definition {
        writeln!(out, "{number} = {}", quote(text))?;
    }

    writeln!(out, "\n[workpackages]")?;
    for wp in WorkPackage::ALL {
        let flag = if p.work_packages.responsible(wp) {
            "responsible"
        } else {
            "handover"
        };
        writeln!(out, "{} = {flag}", wp.as_str())?;
    }

    if !p.groups.is_empty() {
        writeln!(out, "\n[groups]")?;
        for (id, text) in &p.groups {
            writeln!(out, "{id} = {}", quote(text))?;
        }
    }

    for id in CellId::all() {
        if p.is_default_cell(id) {
            continue;
        }
        let cell = p.cell(id);
        writeln!(out, "\n[cell {id}]")?;
        if cell.status != CellStatus::Unset {
            writeln!(out, "status = {}", quote(cell.status.as_str()))?;
        }
        if let Some(text) = &cell.text {
            writeln!(out, "text = {}", quote(text))?;
        }
        if let Some(group) = &cell.group {
            writeln!(out, "group = {}", quote(group))?;
        }
        if !cell.refs.is_empty() {
            let refs: Vec<String> = cell.refs.iter().map(u32::to_string).collect();
            writeln!(out, "refs = [{}]", refs.join(", "))?;
        }
    }

    if !p.relations.is_empty() {
        let mut relations = p.relations.clone();
        relations.sort();
        relations.dedup();
        writeln!(out, "\n[relations]")?;
        for r in relations {
            writeln!(out, "{r}")?;
        }
    }
    Ok(())
}

/// Renders text as a value literal.
///
/// Multi-line text becomes a triple-quoted block unless one of its lines
/// would read as the closing delimiter; everything else is a quoted string
/// with `\\`, `\"`, `\n`, `\r` and `\t` escapes.
pub fn quote(text: &str) -> String {
    let block_safe = text.contains('\n')
        && !text.contains('\r')
        && text.split('\n').all(|line| line.trim() != "\"\"\"");
    if block_safe {
        return format!("\"\"\"\n{text}\n\"\"\"");
    }
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use crate::model::{AspectColumn, AspectRow, CellState, MetaInfo, Relation, WorkPackages};

    #[test]
    fn quoting_round_trips_awkward_text() {
        let samples = [
            "",
            "plain",
            "with \"quotes\" and \\ backslash",
            "two\nlines",
            "trailing newline\n",
            "\n",
            "tab\tand\r\nwindows",
            "block\n\"\"\"\nbreaker",
            "  \"\"\"  \nx",
            "# hash",
            "ümlaut ß",
        ];
        for text in samples {
            let doc = format!(
                "ssmach 1\n[meta]\nname = {}\n[workpackages]\ndevelopment = handover\nmaintenance = handover\nimprovement = handover\n",
                quote(text)
            );
            let p = parse(&doc).unwrap_or_else(|e| panic!("{text:?}: {e:?}"));
            assert_eq!(p.meta.name, text);
        }
    }

    #[test]
    fn cells_emitted_row_major_and_relations_sorted() {
        let mut p = Protocol::new(MetaInfo::default(), WorkPackages::ALL_RESPONSIBLE);
        let late = CellId::new(AspectRow::ExternalArtifacts, AspectColumn::Roles);
        let early = CellId::new(AspectRow::InsideProductProperties, AspectColumn::Roles);
        p.cells.insert(late, CellState::described("late", [1]));
        p.cells.insert(early, CellState::described("early", [1]));
        p.relations = vec![Relation::demands(late, early), Relation::provides(early, late)];
        let text = serialize(&p);
        let a = text.find("[cell inside_product_properties.roles]").unwrap();
        let b = text.find("[cell external_artifacts.roles]").unwrap();
        assert!(a < b);
        let provides = text.find("provides ").unwrap();
        let demands = text.find("demands ").unwrap();
        assert!(provides < demands);
    }

    #[test]
    fn crossed_handover_cells_are_omitted() {
        let p = Protocol::new(MetaInfo::default(), WorkPackages::ALL_RESPONSIBLE);
        let text = serialize(&p);
        assert!(!text.contains("[cell"));
        assert_eq!(parse(&text).unwrap(), p);
    }
}
