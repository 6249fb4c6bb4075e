//! The wire API shared by the command line and the local service.
//!
//! Every function takes document text and returns a [`Reply`]. The service
//! sends the reply as its HTTP response; the command line prints the body
//! and maps the status to an exit code. Both therefore emit the same bytes.

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::Serialize;

use crate::diff::{diff as diff_protocols, render_diff, ProtocolDiff};
use crate::dsl::{parse_with_spans, ParseError, Parsed, SourceSpan, FORMAT_VERSION};
use crate::model::{
    derive_marks, AspectColumn, AspectRow, CellId, CellStatus, DerivedMarks, MetaField, Protocol,
    RelationKind, WorkPackage,
};
use crate::render::{plan, render_html, render_svg, ArrowEnd, Geometry, Palette};
use crate::validator::{validate as run_rules, Location, Mode, RuleId, SeverityCounts, Verdicts};

pub const JSON: &str = "application/json";
pub const HTML: &str = "text/html; charset=utf-8";
pub const SVG: &str = "image/svg+xml";
pub const TEXT: &str = "text/plain; charset=utf-8";

/// Outcome of one API call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    /// Strict mode and open findings remain.
    Open,
    /// Validation errors, or a non-empty diff.
    Findings,
    ParseErrors,
    BadRequest,
}

impl Outcome {
    /// Process exit code of the command line counterpart.
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ok => 0,
            Outcome::Open => 1,
            Outcome::Findings => 2,
            Outcome::ParseErrors => 3,
            Outcome::BadRequest => 4,
        }
    }

    /// HTTP status; findings are a successful answer.
    pub fn http_status(self) -> u16 {
        match self {
            Outcome::Ok | Outcome::Open | Outcome::Findings => 200,
            Outcome::ParseErrors => 422,
            Outcome::BadRequest => 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reply {
    pub outcome: Outcome,
    pub content_type: &'static str,
    pub body: String,
}

impl Reply {
    fn json<T: Serialize>(outcome: Outcome, value: &T) -> Reply {
        let mut body = serde_json::to_string_pretty(value).expect("wire types serialize");
        body.push('\n');
        Reply {
            outcome,
            content_type: JSON,
            body,
        }
    }

    pub fn bad_request(message: impl Into<String>) -> Reply {
        Reply::json(
            Outcome::BadRequest,
            &ErrorBody {
                ok: false,
                error: message.into(),
            },
        )
    }
}

#[derive(Serialize)]
struct ErrorBody {
    ok: bool,
    error: String,
}

#[derive(Serialize)]
struct ParseErrorsBody<'a> {
    ok: bool,
    errors: &'a [ParseError],
}

fn parse_errors(errors: &[ParseError]) -> Reply {
    Reply::json(Outcome::ParseErrors, &ParseErrorsBody { ok: false, errors })
}

/// Source spans of a parsed document; relations are listed in protocol order.
#[derive(Debug, Serialize)]
pub struct Spans {
    pub version: Option<SourceSpan>,
    pub meta: BTreeMap<MetaField, SourceSpan>,
    pub definition: BTreeMap<u32, SourceSpan>,
    pub work_packages: BTreeMap<WorkPackage, SourceSpan>,
    pub groups: BTreeMap<String, SourceSpan>,
    pub cells: BTreeMap<CellId, SourceSpan>,
    pub relations: Vec<Option<SourceSpan>>,
}

impl Spans {
    fn of(parsed: &Parsed) -> Spans {
        let map = &parsed.source_map;
        Spans {
            version: map.version,
            meta: map.meta.clone(),
            definition: map.definition.clone(),
            work_packages: map.work_packages.clone(),
            groups: map.groups.clone(),
            cells: map.cells.clone(),
            relations: parsed
                .protocol
                .relations
                .iter()
                .map(|r| map.relations.get(r).copied())
                .collect(),
        }
    }

    fn locate(&self, location: &Location) -> Option<SourceSpan> {
        match location {
            Location::Meta(field) => self.meta.get(field).copied(),
            Location::Definition(n) => self.definition.get(n).copied(),
            Location::Cell(id) => self.cells.get(id).copied(),
            Location::Group(id) => self.groups.get(id).copied(),
            Location::Relation(i) => self.relations.get(*i).copied().flatten(),
        }
    }
}

#[derive(Serialize)]
struct ParseBody<'a> {
    ok: bool,
    protocol: &'a Protocol,
    spans: Spans,
}

/// `POST /parse`: the normalized protocol and its source spans.
pub fn parse(text: &str) -> Reply {
    match parse_with_spans(text) {
        Ok(parsed) => Reply::json(
            Outcome::Ok,
            &ParseBody {
                ok: true,
                protocol: &parsed.protocol,
                spans: Spans::of(&parsed),
            },
        ),
        Err(errors) => parse_errors(&errors),
    }
}

#[derive(Serialize)]
struct WireDiagnostic<'a> {
    rule: RuleId,
    severity: crate::validator::Severity,
    location: &'a Location,
    message: &'a str,
    span: Option<SourceSpan>,
}

#[derive(Serialize)]
struct ValidateBody<'a> {
    ok: bool,
    mode: Mode,
    passes: bool,
    counts: SeverityCounts,
    verdict: Verdicts,
    diagnostics: Vec<WireDiagnostic<'a>>,
    marks: DerivedMarks,
}

fn check_outcome(report: &crate::validator::ValidationReport, mode: Mode) -> Outcome {
    if report.counts.error > 0 {
        Outcome::Findings
    } else if mode == Mode::Strict && report.counts.open > 0 {
        Outcome::Open
    } else {
        Outcome::Ok
    }
}

/// `POST /validate?strict=bool`: the validation report with spans and marks.
pub fn validate(text: &str, mode: Mode) -> Reply {
    let parsed = match parse_with_spans(text) {
        Ok(parsed) => parsed,
        Err(errors) => return parse_errors(&errors),
    };
    let report = run_rules(&parsed.protocol);
    let spans = Spans::of(&parsed);
    let diagnostics = report
        .diagnostics
        .iter()
        .map(|d| WireDiagnostic {
            rule: d.rule,
            severity: d.severity,
            location: &d.location,
            message: &d.message,
            span: spans.locate(&d.location),
        })
        .collect();
    Reply::json(
        check_outcome(&report, mode),
        &ValidateBody {
            ok: true,
            mode,
            passes: report.passes(mode),
            counts: report.counts,
            verdict: report.verdict,
            diagnostics,
            marks: derive_marks(&parsed.protocol),
        },
    )
}

/// Diagnostic lines as printed by `check`; parse errors as `line:col: kind: message`.
pub fn check_lines(text: &str, mode: Mode) -> Reply {
    match parse_with_spans(text) {
        Ok(parsed) => {
            let report = run_rules(&parsed.protocol);
            Reply {
                outcome: check_outcome(&report, mode),
                content_type: TEXT,
                body: report.render_lines(),
            }
        }
        Err(errors) => Reply {
            outcome: Outcome::ParseErrors,
            content_type: TEXT,
            body: errors.iter().map(|e| format!("{e}\n")).collect(),
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Html,
    Svg,
}

impl FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "html" => Ok(RenderFormat::Html),
            "svg" => Ok(RenderFormat::Svg),
            other => Err(format!("unknown render format {other:?}; expected html or svg")),
        }
    }
}

/// `POST /render?format=html|svg`: the rendered document.
pub fn render(text: &str, format: RenderFormat) -> Reply {
    let parsed = match parse_with_spans(text) {
        Ok(parsed) => parsed,
        Err(errors) => return parse_errors(&errors),
    };
    let plan = plan(&parsed.protocol, &derive_marks(&parsed.protocol));
    match format {
        RenderFormat::Html => Reply {
            outcome: Outcome::Ok,
            content_type: HTML,
            body: render_html(&plan),
        },
        RenderFormat::Svg => Reply {
            outcome: Outcome::Ok,
            content_type: SVG,
            body: render_svg(&plan),
        },
    }
}

#[derive(Serialize)]
struct DiffBody<'a> {
    ok: bool,
    changes: usize,
    diff: &'a ProtocolDiff,
    report: String,
}

#[derive(Serialize)]
struct DiffErrorsBody<'a> {
    ok: bool,
    errors: BTreeMap<&'static str, &'a [ParseError]>,
}

fn parse_pair(old: &str, new: &str) -> Result<(Protocol, Protocol), Reply> {
    match (parse_with_spans(old), parse_with_spans(new)) {
        (Ok(a), Ok(b)) => Ok((a.protocol, b.protocol)),
        (a, b) => {
            let (a, b) = (a.err().unwrap_or_default(), b.err().unwrap_or_default());
            let mut errors = BTreeMap::new();
            if !a.is_empty() {
                errors.insert("old", a.as_slice());
            }
            if !b.is_empty() {
                errors.insert("new", b.as_slice());
            }
            Err(Reply::json(Outcome::ParseErrors, &DiffErrorsBody { ok: false, errors }))
        }
    }
}

fn diff_outcome(d: &ProtocolDiff) -> Outcome {
    if d.is_empty() {
        Outcome::Ok
    } else {
        Outcome::Findings
    }
}

/// `POST /diff`: the structured change set plus its text report.
pub fn diff(old: &str, new: &str) -> Reply {
    let (a, b) = match parse_pair(old, new) {
        Ok(pair) => pair,
        Err(reply) => return reply,
    };
    let d = diff_protocols(&a, &b);
    Reply::json(
        diff_outcome(&d),
        &DiffBody {
            ok: true,
            changes: d.change_count(),
            diff: &d,
            report: render_diff(&d),
        },
    )
}

/// The text report printed by `diff`.
pub fn diff_text(old: &str, new: &str) -> Reply {
    let (a, b) = match parse_pair(old, new) {
        Ok(pair) => pair,
        Err(reply) => return reply,
    };
    let d = diff_protocols(&a, &b);
    Reply {
        outcome: diff_outcome(&d),
        content_type: TEXT,
        body: render_diff(&d),
    }
}

#[derive(Serialize)]
struct RowInfo {
    id: AspectRow,
    title: &'static str,
    party: crate::model::PartyGroup,
    work_package: Option<WorkPackage>,
}

#[derive(Serialize)]
struct ColumnInfo {
    id: AspectColumn,
    title: &'static str,
}

#[derive(Serialize)]
struct RuleInfo {
    id: RuleId,
    title: &'static str,
    severities: &'static [crate::validator::Severity],
    explanation: &'static str,
}

#[derive(Serialize)]
struct RelationInfo {
    kind: RelationKind,
    end: ArrowEnd,
    marker: &'static str,
}

#[derive(Serialize)]
struct SchemaBody {
    format_version: u32,
    rows: Vec<RowInfo>,
    columns: Vec<ColumnInfo>,
    statuses: [CellStatus; 6],
    meta_fields: [MetaField; 7],
    work_packages: [WorkPackage; 3],
    relation_kinds: Vec<RelationInfo>,
    rules: Vec<RuleInfo>,
    palette: Palette,
    geometry: Geometry,
}

/// `GET /schema`: rows, columns, statuses, rules and the render palette.
pub fn schema() -> Reply {
    let body = SchemaBody {
        format_version: FORMAT_VERSION,
        rows: AspectRow::ALL
            .iter()
            .map(|&row| RowInfo {
                id: row,
                title: row.title(),
                party: row.party(),
                work_package: row.work_package(),
            })
            .collect(),
        columns: AspectColumn::ALL
            .iter()
            .map(|&column| ColumnInfo {
                id: column,
                title: column.title(),
            })
            .collect(),
        statuses: CellStatus::ALL,
        meta_fields: MetaField::ALL,
        work_packages: WorkPackage::ALL,
        relation_kinds: RelationKind::ALL
            .into_iter()
            .map(|kind| {
                let end = match kind {
                    RelationKind::Provides => ArrowEnd::Peak,
                    RelationKind::Demands => ArrowEnd::Round,
                };
                RelationInfo {
                    kind,
                    end,
                    marker: end.marker_id(),
                }
            })
            .collect(),
        rules: RuleId::ALL
            .into_iter()
            .map(|id| RuleInfo {
                id,
                title: id.title(),
                severities: id.severities(),
                explanation: crate::validator::explain(id.as_str()).unwrap_or_default(),
            })
            .collect(),
        palette: Palette::DEFAULT,
        geometry: Geometry::DEFAULT,
    };
    Reply::json(Outcome::Ok, &body)
}

/// `GET /health`.
pub fn health() -> Reply {
    Reply {
        outcome: Outcome::Ok,
        content_type: TEXT,
        body: "ok\n".to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_outcomes() {
        let codes: Vec<i32> = [
            Outcome::Ok,
            Outcome::Open,
            Outcome::Findings,
            Outcome::ParseErrors,
            Outcome::BadRequest,
        ]
        .iter()
        .map(|o| o.exit_code())
        .collect();
        assert_eq!(codes, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn parse_errors_are_422_json() {
        let reply = parse("ssmach 1\n[cell nowhere.roles]\n");
        assert_eq!(reply.outcome.http_status(), 422);
        let v: serde_json::Value = serde_json::from_str(&reply.body).unwrap();
        assert_eq!(v["ok"], false);
        assert_eq!(v["errors"][0]["kind"], "unknown-row");
    }

    #[test]
    fn schema_lists_the_grid() {
        let v: serde_json::Value = serde_json::from_str(&schema().body).unwrap();
        assert_eq!(v["rows"].as_array().unwrap().len(), 12);
        assert_eq!(v["columns"].as_array().unwrap().len(), 5);
        assert_eq!(v["statuses"].as_array().unwrap().len(), 6);
        assert_eq!(v["rules"].as_array().unwrap().len(), 13);
        assert_eq!(v["palette"]["open"], "#EF5350");
    }

    #[test]
    fn render_format_names() {
        assert_eq!("svg".parse::<RenderFormat>(), Ok(RenderFormat::Svg));
        assert!("pdf".parse::<RenderFormat>().is_err());
    }
}
