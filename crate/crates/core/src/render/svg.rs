use std::collections::BTreeSet;
use std::fmt::Write;

use super::{escape, legend, refs_attr, ArrowEnd, RenderPlan};
use crate::model::{AspectColumn, AspectRow};

const CELL_CHARS: usize = 26;
const CELL_LINES: usize = 6;
const LINE_HEIGHT: i32 = 13;
const FOOTER_CHARS: usize = 150;

/// Greedy word wrap; words longer than `width` are split.
fn wrap(text: &str, width: usize) -> Vec<String> {
    let mut lines = Vec::new();
    for paragraph in text.split('\n') {
        let mut line = String::new();
        for word in paragraph.split_whitespace() {
            let mut word: Vec<char> = word.chars().collect();
            while word.len() > width {
                if !line.is_empty() {
                    lines.push(std::mem::take(&mut line));
                }
                lines.push(word.drain(..width).collect());
            }
            let word: String = word.into_iter().collect();
            let len = line.chars().count();
            if len > 0 && len + 1 + word.chars().count() > width {
                lines.push(std::mem::take(&mut line));
            }
            if !line.is_empty() {
                line.push(' ');
            }
            line.push_str(&word);
        }
        if !line.is_empty() {
            lines.push(line);
        }
    }
    lines
}

fn clip(mut lines: Vec<String>, max: usize) -> Vec<String> {
    if lines.len() > max {
        lines.truncate(max);
        if let Some(last) = lines.last_mut() {
            last.push('…');
        }
    }
    lines
}

/// SVG 1.1 document sized to the grid plus the meta and definition footer.
pub fn render_svg(plan: &RenderPlan) -> String {
    let mut out = String::new();
    let _ = write_svg(&mut out, plan);
    out
}

fn write_svg(out: &mut String, plan: &RenderPlan) -> std::fmt::Result {
    let g = &plan.geometry;
    let mut footer: Vec<(&'static str, String)> = Vec::new();
    for (field, value) in &plan.meta {
        let text = format!("{field}: {}", value.replace('\n', " "));
        footer.extend(wrap(&text, FOOTER_CHARS).into_iter().map(|l| ("meta", l)));
    }
    for (n, text) in &plan.definition {
        let text = format!("{n}. {}", text.replace('\n', " "));
        footer.extend(wrap(&text, FOOTER_CHARS).into_iter().map(|l| ("definition", l)));
    }
    let legend_y = g.grid_height();
    let footer_top = legend_y + 2 * LINE_HEIGHT + g.gutter;
    let width = g.grid_width() + g.margin;
    let height = footer_top + footer.len() as i32 * LINE_HEIGHT + g.margin;

    writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>")?;
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\" font-family=\"sans-serif\" font-size=\"11\">"
    )?;
    writeln!(out, "<title>{}</title>", escape(&plan.title))?;

    let ends: BTreeSet<ArrowEnd> = plan.arrows.iter().map(|a| a.end).collect();
    if !ends.is_empty() {
        writeln!(out, "<defs>")?;
        if ends.contains(&ArrowEnd::Peak) {
            writeln!(
                out,
                "<marker id=\"provides-peak\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"8\" markerHeight=\"8\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#212121\"/></marker>"
            )?;
        }
        if ends.contains(&ArrowEnd::Round) {
            writeln!(
                out,
                "<marker id=\"demands-round\" viewBox=\"0 0 10 10\" refX=\"5\" refY=\"5\" markerWidth=\"7\" markerHeight=\"7\"><circle cx=\"5\" cy=\"5\" r=\"4\" fill=\"#212121\"/></marker>"
            )?;
        }
        writeln!(out, "</defs>")?;
    }
    writeln!(out, "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"#FFFFFF\"/>")?;

    writeln!(out, "<g class=\"headers\" font-weight=\"bold\">")?;
    for column in AspectColumn::ALL {
        writeln!(
            out,
            "<text x=\"{}\" y=\"{}\">{}</text>",
            g.column_x(*column) + 4,
            g.margin + g.column_header_height / 2,
            column.title()
        )?;
    }
    for row in AspectRow::ALL {
        writeln!(
            out,
            "<text x=\"{}\" y=\"{}\">{}</text>",
            g.margin,
            g.row_y(*row) + g.cell_height / 2,
            row.title()
        )?;
    }
    writeln!(out, "</g>")?;

    writeln!(out, "<g class=\"cells\">")?;
    let left_width = g.cell_width - g.right_width;
    for cell in &plan.cells {
        writeln!(
            out,
            "<g class=\"cell\" data-cell=\"{}\" data-status=\"{}\" data-refs=\"{}\">",
            cell.id,
            cell.status,
            refs_attr(&cell.refs)
        )?;
        writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{left_width}\" height=\"{}\" fill=\"{}\" stroke=\"#757575\"/>",
            cell.x,
            cell.y,
            g.cell_height,
            cell.left_fill.unwrap_or("#FFFFFF")
        )?;
        writeln!(
            out,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\" stroke=\"#757575\"/>",
            cell.x + left_width,
            cell.y,
            g.right_width,
            g.cell_height,
            cell.right_fill.unwrap_or("#FFFFFF")
        )?;
        if cell.status == crate::model::CellStatus::Crossed {
            writeln!(
                out,
                "<path d=\"M{},{} L{},{} M{},{} L{},{}\" stroke=\"#757575\"/>",
                cell.x,
                cell.y,
                cell.x + g.cell_width,
                cell.y + g.cell_height,
                cell.x,
                cell.y + g.cell_height,
                cell.x + g.cell_width,
                cell.y
            )?;
        }
        if cell.emphasized {
            writeln!(
                out,
                "<rect class=\"emphasized\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"3\"/>",
                cell.x - 2,
                cell.y - 2,
                g.cell_width + 4,
                g.cell_height + 4,
                plan.palette.emphasized
            )?;
        }
        let lines = clip(wrap(&cell.lines.join("\n"), CELL_CHARS), CELL_LINES);
        for (i, line) in lines.iter().enumerate() {
            writeln!(
                out,
                "<text x=\"{}\" y=\"{}\">{}</text>",
                cell.x + 4,
                cell.y + 14 + i as i32 * LINE_HEIGHT,
                escape(line)
            )?;
        }
        let refs = wrap(
            &cell.refs.iter().map(u32::to_string).collect::<Vec<_>>().join(", "),
            5,
        );
        for (i, line) in clip(refs, CELL_LINES).iter().enumerate() {
            writeln!(
                out,
                "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
                cell.x + left_width + g.right_width / 2,
                cell.y + 14 + i as i32 * LINE_HEIGHT,
                escape(line)
            )?;
        }
        writeln!(out, "</g>")?;
    }
    writeln!(out, "</g>")?;

    writeln!(out, "<g class=\"arrows\" fill=\"none\" stroke=\"#212121\" stroke-width=\"1.5\">")?;
    for arrow in &plan.arrows {
        let points: Vec<String> = arrow.points.iter().map(|(x, y)| format!("{x},{y}")).collect();
        writeln!(
            out,
            "<polyline data-relation=\"{}\" data-kind=\"{}\" points=\"{}\" marker-end=\"url(#{})\"/>",
            arrow.relation,
            arrow.kind,
            points.join(" "),
            arrow.end.marker_id()
        )?;
    }
    writeln!(out, "</g>")?;

    writeln!(out, "<g class=\"legend\">")?;
    let mut x = g.margin;
    for (label, color) in legend(&plan.palette) {
        writeln!(
            out,
            "<rect x=\"{x}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{color}\" stroke=\"#757575\"/><text x=\"{}\" y=\"{}\">{label}</text>",
            legend_y,
            x + 16,
            legend_y + 10
        )?;
        x += 200;
    }
    writeln!(out, "</g>")?;

    writeln!(out, "<g class=\"footer\">")?;
    for (i, (class, line)) in footer.iter().enumerate() {
        writeln!(
            out,
            "<text class=\"{class}\" x=\"{}\" y=\"{}\">{}</text>",
            g.margin,
            footer_top + i as i32 * LINE_HEIGHT,
            escape(line)
        )?;
    }
    writeln!(out, "</g>")?;
    writeln!(out, "</svg>")?;
    Ok(())
}
