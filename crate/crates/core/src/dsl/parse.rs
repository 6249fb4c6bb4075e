use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;

use super::{ParseError, ParseErrorKind, Parsed, SourceMap, SourceSpan, FORMAT_VERSION};
use crate::model::{
    CellId, CellIdError, CellState, CellStatus, MetaField, MetaInfo, Protocol, Relation,
    RelationKind, WorkPackage, WorkPackages,
};

/// Parses a document into a protocol with defaults filled in.
pub fn parse(text: &str) -> Result<Protocol, Vec<ParseError>> {
    parse_with_spans(text).map(|p| p.protocol)
}

/// Like [`parse`], also returning where each element was written.
pub fn parse_with_spans(text: &str) -> Result<Parsed, Vec<ParseError>> {
    Parser::new(text).run()
}

#[derive(Debug, Clone, PartialEq)]
enum Value {
    Str(String),
    Word(String),
    Date(NaiveDate),
    Refs(BTreeSet<u32>),
}

impl Value {
    fn describe(&self) -> &'static str {
        match self {
            Value::Str(_) => "a string",
            Value::Word(_) => "a bare word",
            Value::Date(_) => "a date",
            Value::Refs(_) => "a reference list",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CellKey {
    Status,
    Text,
    Group,
    Refs,
}

#[derive(Clone, Copy)]
enum Section {
    Preamble,
    Meta,
    Definition,
    WorkPackages,
    Groups,
    /// `None` when the header itself was rejected; entries are consumed
    /// but not recorded.
    Cell(Option<CellId>),
    Relations,
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    line_starts: Vec<usize>,
    errors: Vec<ParseError>,
    section: Section,
    cell_keys: Vec<CellKey>,
    meta: MetaInfo,
    definition: BTreeMap<u32, String>,
    flags: BTreeMap<WorkPackage, bool>,
    workpackages_header: Option<SourceSpan>,
    groups: BTreeMap<String, String>,
    cells: BTreeMap<CellId, CellState>,
    relations: Vec<Relation>,
    map: SourceMap,
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let line_starts = std::iter::once(0)
            .chain(src.match_indices('\n').map(|(i, _)| i + 1))
            .collect();
        Parser {
            src,
            bytes: src.as_bytes(),
            pos: 0,
            line_starts,
            errors: Vec::new(),
            section: Section::Preamble,
            cell_keys: Vec::new(),
            meta: MetaInfo::default(),
            definition: BTreeMap::new(),
            flags: BTreeMap::new(),
            workpackages_header: None,
            groups: BTreeMap::new(),
            cells: BTreeMap::new(),
            relations: Vec::new(),
            map: SourceMap::default(),
        }
    }

    fn span(&self, start: usize, end: usize) -> SourceSpan {
        let line_idx = self.line_starts.partition_point(|&s| s <= start) - 1;
        let line_start = self.line_starts[line_idx];
        SourceSpan {
            start,
            end,
            line: line_idx + 1,
            column: self.src[line_start..start].chars().count() + 1,
        }
    }

    fn error(&mut self, start: usize, end: usize, kind: ParseErrorKind, message: impl Into<String>) {
        let span = self.span(start, end);
        self.errors.push(ParseError {
            span,
            kind,
            message: message.into(),
        });
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn at_eol(&self) -> bool {
        matches!(self.peek(), None | Some(b'\n'))
            || (self.peek() == Some(b'\r') && self.bytes.get(self.pos + 1) == Some(&b'\n'))
    }

    fn skip_blanks(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t')) {
            self.pos += 1;
        }
    }

    fn line_end(&self) -> usize {
        self.src[self.pos..]
            .find('\n')
            .map_or(self.src.len(), |i| self.pos + i)
    }

    fn skip_line(&mut self) {
        self.pos = self.line_end();
    }

    /// Accepts trailing blanks and a comment; anything else is an error.
    fn finish_line(&mut self) {
        self.skip_blanks();
        if self.peek() == Some(b'#') {
            self.skip_line();
        }
        if !self.at_eol() {
            let start = self.pos;
            let end = self.line_end();
            self.error(start, end, ParseErrorKind::Syntax, "unexpected trailing text");
            self.pos = end;
        }
    }

    fn run(mut self) -> Result<Parsed, Vec<ParseError>> {
        if !self.version_line() {
            return Err(self.errors);
        }
        loop {
            self.skip_blanks();
            match self.peek() {
                None => break,
                Some(b'\n') => self.pos += 1,
                Some(b'\r') if self.at_eol() => self.pos += 2,
                Some(b'#') => self.skip_line(),
                Some(b'[') => self.header(),
                Some(_) => self.entry(),
            }
        }
        self.finish()
    }

    /// Returns false when the document must not be read any further.
    fn version_line(&mut self) -> bool {
        let end = self.line_end();
        let line = self.src[..end].trim_end_matches('\r');
        let mut words = line.split_whitespace();
        if words.next() != Some("ssmach") {
            self.error(0, end, ParseErrorKind::Syntax, "expected version line `ssmach 1`");
            return true;
        }
        let version = words.next().and_then(|v| v.parse::<u32>().ok());
        let trailing = words.next();
        match version {
            Some(v) if v != FORMAT_VERSION => {
                self.error(
                    0,
                    end,
                    ParseErrorKind::UnsupportedVersion,
                    format!("unsupported format version {v}, expected {FORMAT_VERSION}"),
                );
                false
            }
            Some(_) if trailing.is_none() => {
                self.map.version = Some(self.span(0, end));
                self.pos = end;
                true
            }
            _ => {
                self.error(0, end, ParseErrorKind::Syntax, "malformed version line");
                self.pos = end;
                true
            }
        }
    }

    fn header(&mut self) {
        let start = self.pos;
        let line_end = self.line_end();
        let Some(close) = self.src[start..line_end].find(']').map(|i| start + i) else {
            self.error(start, line_end, ParseErrorKind::Syntax, "unterminated section header");
            self.section = Section::Cell(None);
            self.pos = line_end;
            return;
        };
        let inner = &self.src[start + 1..close];
        let span = self.span(start, close + 1);
        self.pos = close + 1;
        self.cell_keys.clear();
        self.section = match inner {
            "meta" => Section::Meta,
            "definition" => Section::Definition,
            "workpackages" => {
                self.workpackages_header.get_or_insert(span);
                Section::WorkPackages
            }
            "groups" => Section::Groups,
            "relations" => Section::Relations,
            _ => match inner.strip_prefix("cell").filter(|r| r.starts_with([' ', '\t'])) {
                Some(rest) => {
                    let id_text = rest.trim();
                    let id_start = start + 1 + inner.find(id_text).unwrap_or(4);
                    let id = self.cell_id(id_text, id_start);
                    if let Some(id) = id {
                        let duplicate = self.cells.contains_key(&id);
                        if duplicate {
                            self.error(
                                start,
                                close + 1,
                                ParseErrorKind::DuplicateCell,
                                format!("cell {id} is declared twice"),
                            );
                            Section::Cell(None)
                        } else {
                            self.cells.insert(id, CellState::default());
                            self.map.cells.insert(id, span);
                            Section::Cell(Some(id))
                        }
                    } else {
                        Section::Cell(None)
                    }
                }
                None => {
                    self.error(
                        start,
                        close + 1,
                        ParseErrorKind::Syntax,
                        format!("unknown section [{inner}]"),
                    );
                    Section::Cell(None)
                }
            },
        };
        self.finish_line();
    }

    fn cell_id(&mut self, text: &str, start: usize) -> Option<CellId> {
        let end = start + text.len();
        match text.parse::<CellId>() {
            Ok(id) => Some(id),
            Err(CellIdError::Malformed) => {
                self.error(start, end, ParseErrorKind::Syntax, format!("expected row.column, found `{text}`"));
                None
            }
            Err(CellIdError::UnknownRow) => {
                let row = text.split('.').next().unwrap_or(text);
                self.error(start, start + row.len(), ParseErrorKind::UnknownRow, format!("unknown row `{row}`"));
                None
            }
            Err(CellIdError::UnknownColumn) => {
                let dot = text.find('.').unwrap_or(0) + 1;
                self.error(
                    start + dot,
                    end,
                    ParseErrorKind::UnknownColumn,
                    format!("unknown column `{}`", &text[dot..]),
                );
                None
            }
        }
    }

    fn entry(&mut self) {
        if matches!(self.section, Section::Relations) {
            self.relation_line();
            return;
        }
        let line_start = self.pos;
        let key_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_' || c == b'-') {
            self.pos += 1;
        }
        let key_end = self.pos;
        let key = &self.src[key_start..key_end];
        self.skip_blanks();
        if key.is_empty() || self.peek() != Some(b'=') {
            let end = self.line_end();
            self.error(line_start, end, ParseErrorKind::Syntax, "expected `key = value`");
            self.pos = end;
            return;
        }
        self.pos += 1;
        self.skip_blanks();
        let value_start = self.pos;
        let value = self.value();
        let value_end = self.pos;
        self.finish_line();
        let Some(value) = value else { return };
        let entry_span = (line_start, value_end);
        self.apply(key, (key_start, key_end), value, (value_start, value_end), entry_span);
    }

    fn apply(
        &mut self,
        key: &str,
        key_at: (usize, usize),
        value: Value,
        value_at: (usize, usize),
        entry_at: (usize, usize),
    ) {
        let entry_span = self.span(entry_at.0, entry_at.1);
        match self.section {
            Section::Preamble => {
                self.error(entry_at.0, entry_at.1, ParseErrorKind::Syntax, "entry outside of any section");
            }
            Section::Meta => {
                let Ok(field) = key.parse::<MetaField>() else {
                    self.error(key_at.0, key_at.1, ParseErrorKind::Syntax, format!("unknown meta key `{key}`"));
                    return;
                };
                if self.map.meta.contains_key(&field) {
                    self.error(key_at.0, key_at.1, ParseErrorKind::Syntax, format!("meta key `{key}` given twice"));
                    return;
                }
                match (field, value) {
                    (MetaField::Date, Value::Date(d)) => self.meta.date = Some(d),
                    (MetaField::Date, other) => {
                        let what = other.describe();
                        self.error(value_at.0, value_at.1, ParseErrorKind::Syntax, format!("date must be YYYY-MM-DD, found {what}"));
                        return;
                    }
                    (field, Value::Str(s)) => {
                        *self.meta.text_mut(field).expect("text field") = s;
                    }
                    (_, other) => {
                        let what = other.describe();
                        self.error(value_at.0, value_at.1, ParseErrorKind::Syntax, format!("`{key}` expects a string, found {what}"));
                        return;
                    }
                }
                self.map.meta.insert(field, entry_span);
            }
            Section::Definition => {
                let number = match key.parse::<u32>() {
                    Ok(n) if n > 0 && key.bytes().all(|b| b.is_ascii_digit()) => n,
                    _ => {
                        self.error(key_at.0, key_at.1, ParseErrorKind::Syntax, format!("definition items are numbered 1, 2, ...; found `{key}`"));
                        return;
                    }
                };
                let Value::Str(text) = value else {
                    let what = value.describe();
                    self.error(value_at.0, value_at.1, ParseErrorKind::Syntax, format!("definition item expects a string, found {what}"));
                    return;
                };
                if self.definition.contains_key(&number) {
                    self.error(
                        key_at.0,
                        key_at.1,
                        ParseErrorKind::DuplicateDefinitionNumber,
                        format!("definition item {number} is given twice"),
                    );
                    return;
                }
                self.definition.insert(number, text);
                self.map.definition.insert(number, entry_span);
            }
            Section::WorkPackages => {
                let Ok(wp) = key.parse::<WorkPackage>() else {
                    self.error(key_at.0, key_at.1, ParseErrorKind::Syntax, format!("unknown work package `{key}`"));
                    return;
                };
                let responsible = match value {
                    Value::Word(w) if w == "responsible" => true,
                    Value::Word(w) if w == "handover" => false,
                    other => {
                        let shown = match other {
                            Value::Word(w) => format!("`{w}`"),
                            other => other.describe().to_string(),
                        };
                        self.error(value_at.0, value_at.1, ParseErrorKind::Syntax, format!("expected `responsible` or `handover`, found {shown}"));
                        return;
                    }
                };
                if self.flags.contains_key(&wp) {
                    self.error(key_at.0, key_at.1, ParseErrorKind::Syntax, format!("work package `{key}` given twice"));
                    return;
                }
                self.flags.insert(wp, responsible);
                self.map.work_packages.insert(wp, entry_span);
            }
            Section::Groups => {
                if !is_ident(key) {
                    self.error(key_at.0, key_at.1, ParseErrorKind::Syntax, format!("invalid group identifier `{key}`"));
                    return;
                }
                let Value::Str(text) = value else {
                    let what = value.describe();
                    self.error(value_at.0, value_at.1, ParseErrorKind::Syntax, format!("group expects a string, found {what}"));
                    return;
                };
                if self.groups.contains_key(key) {
                    self.error(key_at.0, key_at.1, ParseErrorKind::Syntax, format!("group `{key}` defined twice"));
                    return;
                }
                self.groups.insert(key.to_string(), text);
                self.map.groups.insert(key.to_string(), entry_span);
            }
            Section::Cell(id) => {
                let cell_key = match key {
                    "status" => CellKey::Status,
                    "text" => CellKey::Text,
                    "group" => CellKey::Group,
                    "refs" => CellKey::Refs,
                    _ => {
                        self.error(key_at.0, key_at.1, ParseErrorKind::Syntax, format!("unknown cell key `{key}`"));
                        return;
                    }
                };
                if self.cell_keys.contains(&cell_key) {
                    self.error(key_at.0, key_at.1, ParseErrorKind::Syntax, format!("cell key `{key}` given twice"));
                    return;
                }
                self.cell_keys.push(cell_key);
                let mut state = CellState::default();
                match (cell_key, value) {
                    (CellKey::Status, Value::Str(s)) => match s.parse::<CellStatus>() {
                        Ok(status) => state.status = status,
                        Err(()) => {
                            self.error(value_at.0, value_at.1, ParseErrorKind::BadStatus, format!("unknown status `{s}`"));
                            return;
                        }
                    },
                    (CellKey::Status, Value::Word(w)) => {
                        self.error(value_at.0, value_at.1, ParseErrorKind::BadStatus, format!("status must be quoted, found `{w}`"));
                        return;
                    }
                    (CellKey::Text, Value::Str(s)) => state.text = Some(s),
                    (CellKey::Group, Value::Str(s)) if is_ident(&s) => state.group = Some(s),
                    (CellKey::Group, Value::Str(s)) => {
                        self.error(value_at.0, value_at.1, ParseErrorKind::Syntax, format!("invalid group identifier `{s}`"));
                        return;
                    }
                    (CellKey::Refs, Value::Refs(r)) => state.refs = r,
                    (CellKey::Refs, other) => {
                        let what = other.describe();
                        self.error(value_at.0, value_at.1, ParseErrorKind::BadReferenceLiteral, format!("refs expects a list like [1, 2], found {what}"));
                        return;
                    }
                    (_, other) => {
                        let what = other.describe();
                        self.error(value_at.0, value_at.1, ParseErrorKind::Syntax, format!("`{key}` expects a string, found {what}"));
                        return;
                    }
                }
                let Some(id) = id else { return };
                let cell = self.cells.get_mut(&id).expect("header inserted the cell");
                match cell_key {
                    CellKey::Status => cell.status = state.status,
                    CellKey::Text => cell.text = state.text,
                    CellKey::Group => cell.group = state.group,
                    CellKey::Refs => cell.refs = state.refs,
                }
            }
            Section::Relations => unreachable!("relations are parsed line by line"),
        }
    }

    fn relation_line(&mut self) {
        let start = self.pos;
        let end = self.line_end();
        let raw = &self.src[start..end];
        let content_len = raw.find('#').unwrap_or(raw.len());
        let content = raw[..content_len].trim_end();
        self.pos = end;

        let mut parts = Vec::new();
        let mut offset = 0;
        for word in content.split_whitespace() {
            let at = content[offset..].find(word).map_or(offset, |i| offset + i);
            parts.push((start + at, word));
            offset = at + word.len();
        }
        let shape_ok = parts.len() == 4 && parts[2].1 == "->";
        if !shape_ok {
            self.error(
                start,
                start + content.len(),
                ParseErrorKind::Syntax,
                "expected `provides|demands row.column -> row.column`",
            );
            return;
        }
        let kind = match parts[0].1.parse::<RelationKind>() {
            Ok(k) => Some(k),
            Err(()) => {
                let (at, word) = parts[0];
                self.error(at, at + word.len(), ParseErrorKind::Syntax, format!("unknown relation kind `{word}`"));
                None
            }
        };
        let source = self.cell_id(parts[1].1, parts[1].0);
        let target = self.cell_id(parts[3].1, parts[3].0);
        let (Some(kind), Some(source), Some(target)) = (kind, source, target) else {
            return;
        };
        let line_span = (start, start + content.len());
        if source == target {
            self.error(line_span.0, line_span.1, ParseErrorKind::Syntax, "a relation needs two different cells");
            return;
        }
        let relation = Relation { kind, source, target };
        if self.map.relations.contains_key(&relation) {
            self.error(line_span.0, line_span.1, ParseErrorKind::Syntax, format!("relation `{relation}` given twice"));
            return;
        }
        let span = self.span(line_span.0, line_span.1);
        self.map.relations.insert(relation, span);
        self.relations.push(relation);
    }

    /// Lexes one value. On failure an error is recorded and the cursor is
    /// left where the rest of the line can be skipped.
    fn value(&mut self) -> Option<Value> {
        let start = self.pos;
        match self.peek() {
            Some(b'"') if self.src[self.pos..].starts_with("\"\"\"") => self.triple_quoted(),
            Some(b'"') => self.quoted(),
            Some(b'[') => self.refs(),
            None | Some(b'\n' | b'\r' | b'#') => {
                self.error(start, start, ParseErrorKind::Syntax, "missing value");
                None
            }
            Some(_) => {
                while matches!(self.peek(), Some(c) if !c.is_ascii_whitespace() && c != b'#') {
                    self.pos += 1;
                }
                let word = &self.src[start..self.pos];
                if word.bytes().next().is_some_and(|b| b.is_ascii_digit()) {
                    let valid = word.len() == 10
                        && word.as_bytes()[4] == b'-'
                        && word.as_bytes()[7] == b'-';
                    match NaiveDate::parse_from_str(word, "%Y-%m-%d") {
                        Ok(d) if valid => Some(Value::Date(d)),
                        _ => {
                            self.error(start, self.pos, ParseErrorKind::Syntax, format!("invalid date `{word}`, expected YYYY-MM-DD"));
                            None
                        }
                    }
                } else if word.bytes().all(|b| b.is_ascii_alphabetic() || b == b'_' || b == b'-') {
                    Some(Value::Word(word.to_string()))
                } else {
                    self.error(start, self.pos, ParseErrorKind::Syntax, format!("unexpected value `{word}`"));
                    None
                }
            }
        }
    }

    fn quoted(&mut self) -> Option<Value> {
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        let mut ok = true;
        loop {
            let Some(c) = self.src[self.pos..].chars().next() else {
                self.error(start, self.pos, ParseErrorKind::Syntax, "unterminated string");
                return None;
            };
            match c {
                '"' => {
                    self.pos += 1;
                    break;
                }
                '\n' => {
                    self.error(start, self.pos, ParseErrorKind::Syntax, "unterminated string");
                    return None;
                }
                '\\' => {
                    let esc_at = self.pos;
                    self.pos += 1;
                    let Some(e) = self.src[self.pos..].chars().next() else { continue };
                    match e {
                        '"' => out.push('"'),
                        '\\' => out.push('\\'),
                        'n' => out.push('\n'),
                        'r' => out.push('\r'),
                        't' => out.push('\t'),
                        '\n' => continue,
                        other => {
                            self.error(esc_at, esc_at + 1 + other.len_utf8(), ParseErrorKind::Syntax, format!("unknown escape `\\{other}`"));
                            ok = false;
                        }
                    }
                    self.pos += e.len_utf8();
                }
                c => {
                    out.push(c);
                    self.pos += c.len_utf8();
                }
            }
        }
        ok.then_some(Value::Str(out))
    }

    fn triple_quoted(&mut self) -> Option<Value> {
        let start = self.pos;
        self.pos += 3;
        let line_end = self.line_end();
        let rest = self.src[self.pos..line_end].trim_end_matches('\r');
        if !rest.trim().is_empty() {
            // Inline form: """text""" on one line.
            return match rest.find("\"\"\"") {
                Some(i) => {
                    let text = rest[..i].to_string();
                    self.pos += i + 3;
                    Some(Value::Str(text))
                }
                None => {
                    self.error(start, line_end, ParseErrorKind::Syntax, "unterminated triple-quoted string");
                    self.pos = line_end;
                    None
                }
            };
        }
        let mut lines = Vec::new();
        let mut cursor = line_end;
        while cursor < self.src.len() {
            let line_start = cursor + 1;
            let end = self.src[line_start..]
                .find('\n')
                .map_or(self.src.len(), |i| line_start + i);
            let line = self.src[line_start..end].trim_end_matches('\r');
            if line.trim() == "\"\"\"" {
                self.pos = line_start + self.src[line_start..end].find("\"\"\"").unwrap_or(0) + 3;
                return Some(Value::Str(lines.join("\n")));
            }
            lines.push(line);
            cursor = end;
        }
        self.error(start, start + 3, ParseErrorKind::Syntax, "unterminated triple-quoted block");
        self.pos = self.src.len();
        None
    }

    fn refs(&mut self) -> Option<Value> {
        let start = self.pos;
        let line_end = self.line_end();
        let Some(close) = self.src[start..line_end].find(']').map(|i| start + i) else {
            self.error(start, line_end, ParseErrorKind::BadReferenceLiteral, "unterminated reference list");
            self.pos = line_end;
            return None;
        };
        self.pos = close + 1;
        let inner = &self.src[start + 1..close];
        let mut refs = BTreeSet::new();
        if inner.trim().is_empty() {
            return Some(Value::Refs(refs));
        }
        let mut ok = true;
        let mut offset = start + 1;
        for item in inner.split(',') {
            let trimmed = item.trim();
            let at = offset + item.find(trimmed).unwrap_or(0);
            match trimmed.parse::<u32>() {
                Ok(n) if n > 0 && trimmed.bytes().all(|b| b.is_ascii_digit()) => {
                    if !refs.insert(n) {
                        self.error(at, at + trimmed.len(), ParseErrorKind::BadReferenceLiteral, format!("reference {n} listed twice"));
                        ok = false;
                    }
                }
                _ => {
                    self.error(
                        at,
                        at + trimmed.len(),
                        ParseErrorKind::BadReferenceLiteral,
                        format!("expected a definition item number, found `{trimmed}`"),
                    );
                    ok = false;
                }
            }
            offset += item.len() + 1;
        }
        ok.then_some(Value::Refs(refs))
    }

    fn finish(mut self) -> Result<Parsed, Vec<ParseError>> {
        let missing: Vec<WorkPackage> = WorkPackage::ALL
            .into_iter()
            .filter(|wp| !self.flags.contains_key(wp))
            .collect();
        if !missing.is_empty() {
            let (start, end) = match self.workpackages_header {
                Some(s) => (s.start, s.end),
                None => (self.src.len(), self.src.len()),
            };
            for wp in missing {
                self.error(
                    start,
                    end,
                    ParseErrorKind::Syntax,
                    format!("work package `{wp}` must be set to responsible or handover", wp = wp.as_str()),
                );
            }
        }
        if !self.errors.is_empty() {
            self.errors.sort_by_key(|e| (e.span.start, e.span.end));
            return Err(self.errors);
        }
        let work_packages = WorkPackages {
            development: self.flags[&WorkPackage::Development],
            maintenance: self.flags[&WorkPackage::Maintenance],
            improvement: self.flags[&WorkPackage::Improvement],
        };
        let protocol = Protocol {
            meta: self.meta,
            definition: self.definition,
            work_packages,
            groups: self.groups,
            cells: self.cells,
            relations: self.relations,
        }
        .fill_defaults();
        Ok(Parsed {
            protocol,
            source_map: self.map,
        })
    }
}
