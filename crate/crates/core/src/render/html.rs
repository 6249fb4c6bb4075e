use std::fmt::Write;

use super::{escape, legend, refs_attr, RenderPlan};
use crate::model::{AspectColumn, AspectRow};

const STYLE: &str = "\
body { font-family: sans-serif; margin: 2em; color: #212121; }
h1 { font-size: 1.6em; }
dl.meta dt { font-weight: bold; }
dl.meta dd { margin: 0 0 0.6em 1.5em; white-space: pre-wrap; }
table.aspects { border-collapse: separate; border-spacing: 4px; }
table.aspects th { text-align: left; vertical-align: top; padding: 4px; }
td.cell { border: 1px solid #757575; padding: 0; vertical-align: top; width: 13em; }
td.cell.emphasized { outline: 3px solid var(--emphasized); }
td.cell .parts { display: flex; min-height: 5em; }
td.cell .left { flex: 1; padding: 4px; font-size: 0.85em; white-space: pre-wrap; }
td.cell .right { width: 2.5em; padding: 4px; font-size: 0.85em; text-align: center; border-left: 1px dashed #9E9E9E; }
td.cell.crossed .left { background: repeating-linear-gradient(45deg, transparent 0 6px, var(--crossed) 6px 8px); }
ul.legend { list-style: none; padding: 0; }
ul.legend li { display: inline-block; margin-right: 1.5em; }
ul.legend .swatch { display: inline-block; width: 1em; height: 1em; border: 1px solid #757575; vertical-align: middle; margin-right: 0.3em; }
";

/// Standalone HTML document with embedded CSS.
///
/// Every cell carries `data-cell`, `data-status` and `data-refs`
/// attributes for machine checking.
pub fn render_html(plan: &RenderPlan) -> String {
    let mut out = String::new();
    let _ = write_html(&mut out, plan);
    out
}

fn write_html(out: &mut String, plan: &RenderPlan) -> std::fmt::Result {
    let title = if plan.title.is_empty() { "ssMACH protocol" } else { &plan.title };
    writeln!(out, "<!DOCTYPE html>")?;
    writeln!(out, "<html lang=\"en\">")?;
    writeln!(out, "<head>")?;
    writeln!(out, "<meta charset=\"utf-8\">")?;
    writeln!(out, "<title>{}</title>", escape(title))?;
    writeln!(out, "<style>")?;
    writeln!(
        out,
        ":root {{ --emphasized: {}; --crossed: {}; }}",
        plan.palette.emphasized, plan.palette.crossed
    )?;
    out.push_str(STYLE);
    writeln!(out, "</style>")?;
    writeln!(out, "</head>")?;
    writeln!(out, "<body>")?;
    writeln!(out, "<h1>{}</h1>", escape(title))?;

    writeln!(out, "<section class=\"meta\">")?;
    writeln!(out, "<h2>Meta information</h2>")?;
    writeln!(out, "<dl class=\"meta\">")?;
    for (field, value) in &plan.meta {
        writeln!(out, "<dt>{field}</dt><dd data-meta=\"{field}\">{}</dd>", escape(value))?;
    }
    writeln!(out, "</dl>")?;
    writeln!(out, "</section>")?;

    writeln!(out, "<section class=\"definition\">")?;
    writeln!(out, "<h2>Definition</h2>")?;
    writeln!(out, "<ol>")?;
    for (n, text) in &plan.definition {
        writeln!(out, "<li value=\"{n}\" id=\"def-{n}\">{}</li>", escape(text))?;
    }
    writeln!(out, "</ol>")?;
    writeln!(out, "<h3>Work packages</h3>")?;
    writeln!(out, "<ul class=\"work-packages\">")?;
    for (wp, responsible) in &plan.work_packages {
        let state = if *responsible { "responsible" } else { "handover" };
        writeln!(out, "<li data-work-package=\"{wp}\">{wp}: {state}</li>")?;
    }
    writeln!(out, "</ul>")?;
    writeln!(out, "</section>")?;

    writeln!(out, "<section class=\"aspects\">")?;
    writeln!(out, "<h2>Key aspects</h2>")?;
    writeln!(out, "<ul class=\"legend\">")?;
    for (label, color) in legend(&plan.palette) {
        writeln!(
            out,
            "<li><span class=\"swatch\" style=\"background: {color}\"></span>{label}</li>"
        )?;
    }
    writeln!(out, "</ul>")?;
    writeln!(out, "<table class=\"aspects\">")?;
    write!(out, "<thead><tr><th></th>")?;
    for column in AspectColumn::ALL {
        write!(out, "<th scope=\"col\">{}</th>", column.title())?;
    }
    writeln!(out, "</tr></thead>")?;
    writeln!(out, "<tbody>")?;
    for row in AspectRow::ALL {
        writeln!(out, "<tr data-row=\"{row}\">")?;
        writeln!(out, "<th scope=\"row\">{}</th>", row.title())?;
        for column in AspectColumn::ALL {
            let cell = plan.cell(crate::model::CellId::new(*row, *column));
            let mut class = format!("cell {}", cell.status);
            if cell.emphasized {
                class.push_str(" emphasized");
            }
            write!(
                out,
                "<td class=\"{class}\" data-cell=\"{}\" data-status=\"{}\" data-refs=\"{}\"",
                cell.id,
                cell.status,
                refs_attr(&cell.refs)
            )?;
            if let Some(group) = &cell.group {
                write!(out, " data-group=\"{}\"", escape(group))?;
            }
            writeln!(out, ">")?;
            write!(out, "<div class=\"parts\"><div class=\"left\"")?;
            if let Some(fill) = cell.left_fill {
                write!(out, " style=\"background: {fill}\"")?;
            }
            write!(out, ">")?;
            let text: Vec<String> = cell.lines.iter().map(|l| escape(l)).collect();
            write!(out, "{}", text.join("\n"))?;
            write!(out, "</div><div class=\"right\"")?;
            if let Some(fill) = cell.right_fill {
                write!(out, " style=\"background: {fill}\"")?;
            }
            let refs: Vec<String> = cell.refs.iter().map(u32::to_string).collect();
            writeln!(out, ">{}</div></div>", refs.join(", "))?;
            writeln!(out, "</td>")?;
        }
        writeln!(out, "</tr>")?;
    }
    writeln!(out, "</tbody>")?;
    writeln!(out, "</table>")?;
    writeln!(out, "</section>")?;

    writeln!(out, "<section class=\"relations\">")?;
    writeln!(out, "<h2>Relations</h2>")?;
    writeln!(out, "<ol>")?;
    for arrow in &plan.arrows {
        writeln!(
            out,
            "<li data-kind=\"{}\" data-source=\"{}\" data-target=\"{}\">{} {} {}</li>",
            arrow.kind, arrow.source, arrow.target, arrow.source, arrow.kind, arrow.target
        )?;
    }
    writeln!(out, "</ol>")?;
    writeln!(out, "</section>")?;

    if !plan.group_colors.is_empty() {
        writeln!(out, "<section class=\"groups\">")?;
        writeln!(out, "<h2>Description groups</h2>")?;
        writeln!(out, "<ul class=\"legend\">")?;
        for (group, color) in &plan.group_colors {
            writeln!(
                out,
                "<li><span class=\"swatch\" style=\"background: {color}\"></span>{}</li>",
                escape(group)
            )?;
        }
        writeln!(out, "</ul>")?;
        writeln!(out, "</section>")?;
    }

    writeln!(out, "</body>")?;
    writeln!(out, "</html>")?;
    Ok(())
}
