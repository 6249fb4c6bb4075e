//! Color-and-arrow rendering of a protocol as standalone HTML or SVG.
//!
//! [`plan`] turns a protocol and its derived marks into a [`RenderPlan`]
//! with fixed integer geometry; [`render_html`] and [`render_svg`] only
//! print the plan, so both outputs are byte-deterministic.

mod html;
mod svg;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::model::{
    AspectColumn, AspectRow, CellId, CellStatus, DerivedMarks, MetaField, Protocol, RelationKind,
    RightPart,
};

pub use html::render_html;
pub use svg::render_svg;

/// Colors, named after what they mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Palette {
    pub no_active_management: &'static str,
    pub provided: &'static str,
    pub emphasized: &'static str,
    pub open: &'static str,
    pub crossed: &'static str,
    pub groups: [&'static str; 12],
}

impl Palette {
    pub const DEFAULT: Palette = Palette {
        no_active_management: "#C8E6C9",
        provided: "#66BB6A",
        emphasized: "#B39DDB",
        open: "#EF5350",
        crossed: "#BDBDBD",
        // Qualitative 12-class ramp. Colors close to a status color
        // (grey, violet, light green, red) are handed out last.
        groups: [
            "#8DD3C7", "#FFFFB3", "#80B1D3", "#FDB462", "#FCCDE5", "#FFED6F", "#BC80BD",
            "#B3DE69", "#D9D9D9", "#BEBADA", "#CCEBC5", "#FB8072",
        ],
    };

    /// Right-part fill for a status coloring; active cells stay white.
    pub fn right_fill(&self, part: RightPart) -> Option<&'static str> {
        match part {
            RightPart::Active => None,
            RightPart::NoActiveManagement => Some(self.no_active_management),
            RightPart::Provided => Some(self.provided),
            RightPart::Open => Some(self.open),
            RightPart::Crossed => Some(self.crossed),
        }
    }

    /// Color of the `n`-th group in first-use order. Wraps after twelve.
    pub fn group(&self, n: usize) -> &'static str {
        self.groups[n % self.groups.len()]
    }
}

/// Fixed layout constants, in SVG user units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Geometry {
    pub margin: i32,
    pub row_header_width: i32,
    pub column_header_height: i32,
    pub cell_width: i32,
    pub cell_height: i32,
    /// Width of the right (status/refs) part of a cell.
    pub right_width: i32,
    pub gutter: i32,
}

impl Geometry {
    pub const DEFAULT: Geometry = Geometry {
        margin: 20,
        row_header_width: 190,
        column_header_height: 40,
        cell_width: 200,
        cell_height: 96,
        right_width: 40,
        gutter: 28,
    };

    fn grid_left(&self) -> i32 {
        self.margin + self.row_header_width + self.gutter
    }

    fn grid_top(&self) -> i32 {
        self.margin + self.column_header_height + self.gutter
    }

    pub fn column_x(&self, column: AspectColumn) -> i32 {
        self.grid_left() + column.index() as i32 * (self.cell_width + self.gutter)
    }

    pub fn row_y(&self, row: AspectRow) -> i32 {
        self.grid_top() + row.index() as i32 * (self.cell_height + self.gutter)
    }

    pub fn grid_width(&self) -> i32 {
        self.grid_left() + AspectColumn::ALL.len() as i32 * (self.cell_width + self.gutter)
    }

    pub fn grid_height(&self) -> i32 {
        self.grid_top() + AspectRow::ALL.len() as i32 * (self.cell_height + self.gutter)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlannedCell {
    pub id: CellId,
    pub status: CellStatus,
    pub right_part: RightPart,
    pub right_fill: Option<&'static str>,
    /// Group color of the left part.
    pub left_fill: Option<&'static str>,
    pub group: Option<String>,
    /// Group description followed by the cell's own text.
    pub lines: Vec<String>,
    pub refs: Vec<u32>,
    pub emphasized: bool,
    pub x: i32,
    pub y: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArrowEnd {
    /// Provides: the peak points at the provided cell.
    Peak,
    /// Demands: the round end sits at the needed cell.
    Round,
}

impl ArrowEnd {
    pub fn marker_id(self) -> &'static str {
        match self {
            ArrowEnd::Peak => "provides-peak",
            ArrowEnd::Round => "demands-round",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrow {
    /// Index of the relation in the protocol.
    pub relation: usize,
    pub kind: RelationKind,
    pub source: CellId,
    pub target: CellId,
    pub end: ArrowEnd,
    /// Orthogonal polyline from source edge to target edge.
    pub points: Vec<(i32, i32)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderPlan {
    pub title: String,
    pub meta: Vec<(MetaField, String)>,
    pub definition: Vec<(u32, String)>,
    pub work_packages: Vec<(String, bool)>,
    pub palette: Palette,
    pub geometry: Geometry,
    /// All 60 cells in row-major order.
    pub cells: Vec<PlannedCell>,
    pub arrows: Vec<Arrow>,
    /// Group identifier to color, in first-use order.
    pub group_colors: Vec<(String, &'static str)>,
}

impl RenderPlan {
    pub fn cell(&self, id: CellId) -> &PlannedCell {
        &self.cells[id.index()]
    }
}

/// Lays out the table of a normalized protocol.
pub fn plan(protocol: &Protocol, marks: &DerivedMarks) -> RenderPlan {
    let palette = Palette::DEFAULT;
    let geometry = Geometry::DEFAULT;

    let mut group_colors: Vec<(String, &'static str)> = Vec::new();
    let mut color_of: BTreeMap<String, &'static str> = BTreeMap::new();
    for id in CellId::all() {
        if let Some(group) = &protocol.cell(id).group {
            if !color_of.contains_key(group) {
                let color = palette.group(group_colors.len());
                color_of.insert(group.clone(), color);
                group_colors.push((group.clone(), color));
            }
        }
    }

    let cells = CellId::all()
        .map(|id| {
            let state = protocol.cell(id);
            let right_part = marks
                .right_part
                .get(&id)
                .copied()
                .unwrap_or_else(|| RightPart::of(state.status));
            let mut lines = Vec::new();
            if let Some(text) = state.group.as_ref().and_then(|g| protocol.groups.get(g)) {
                lines.push(text.clone());
            }
            if let Some(text) = &state.text {
                lines.push(text.clone());
            }
            PlannedCell {
                id,
                status: state.status,
                right_part,
                right_fill: palette.right_fill(right_part),
                left_fill: state.group.as_ref().map(|g| color_of[g]),
                group: state.group.clone(),
                lines,
                refs: state.refs.iter().copied().collect(),
                emphasized: marks.emphasized.contains(&id),
                x: geometry.column_x(id.column),
                y: geometry.row_y(id.row),
            }
        })
        .collect();

    let arrows = protocol
        .relations
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            protocol.status(r.source) != CellStatus::Crossed
                && protocol.status(r.target) != CellStatus::Crossed
        })
        .map(|(i, r)| Arrow {
            relation: i,
            kind: r.kind,
            source: r.source,
            target: r.target,
            end: match r.kind {
                RelationKind::Provides => ArrowEnd::Peak,
                RelationKind::Demands => ArrowEnd::Round,
            },
            points: route(&geometry, r.source, r.target, i),
        })
        .collect();

    RenderPlan {
        title: protocol.meta.name.clone(),
        meta: MetaField::ALL
            .into_iter()
            .map(|f| (f, protocol.meta.get(f)))
            .collect(),
        definition: protocol
            .definition
            .iter()
            .map(|(n, t)| (*n, t.clone()))
            .collect(),
        work_packages: crate::model::WorkPackage::ALL
            .into_iter()
            .map(|wp| (wp.as_str().to_string(), protocol.work_packages.responsible(wp)))
            .collect(),
        palette,
        geometry,
        cells,
        arrows,
        group_colors,
    }
}

/// Orthogonal route through the gutters. The lane inside a gutter and the
/// attachment height on a cell edge depend on the relation index so that
/// parallel arrows do not coincide.
fn route(g: &Geometry, source: CellId, target: CellId, index: usize) -> Vec<(i32, i32)> {
    let lane = 6 + (index % 5) as i32 * 4;
    let attach = 18 + (index % 6) as i32 * 12;
    let sy = g.row_y(source.row) + attach;
    let ty = g.row_y(target.row) + attach;
    let src_x = g.column_x(source.column);
    let tgt_x = g.column_x(target.column);
    let right_gutter = |x: i32| x + g.cell_width + lane;
    let left_gutter = |x: i32| x - g.gutter + lane;
    let gy = g.row_y(target.row) - g.gutter + lane;

    match source.column.cmp(&target.column) {
        std::cmp::Ordering::Equal => {
            let exit = src_x + g.cell_width;
            let gx = right_gutter(src_x);
            vec![(exit, sy), (gx, sy), (gx, ty), (exit, ty)]
        }
        std::cmp::Ordering::Less => {
            let exit = src_x + g.cell_width;
            let gx = right_gutter(src_x);
            let tx = left_gutter(tgt_x);
            vec![(exit, sy), (gx, sy), (gx, gy), (tx, gy), (tx, ty), (tgt_x, ty)]
        }
        std::cmp::Ordering::Greater => {
            let gx = left_gutter(src_x);
            let tx = right_gutter(tgt_x);
            let entry = tgt_x + g.cell_width;
            vec![(src_x, sy), (gx, sy), (gx, gy), (tx, gy), (tx, ty), (entry, ty)]
        }
    }
}

/// Escapes text for XML/HTML element content and attribute values.
pub(crate) fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&#39;"),
            c => out.push(c),
        }
    }
    out
}

pub(crate) fn refs_attr(refs: &[u32]) -> String {
    refs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

pub(crate) fn legend(palette: &Palette) -> [(&'static str, &'static str); 5] {
    [
        ("no active management", palette.no_active_management),
        ("provided by another aspect", palette.provided),
        ("used or required by others", palette.emphasized),
        ("open", palette.open),
        ("crossed", palette.crossed),
    ]
}
