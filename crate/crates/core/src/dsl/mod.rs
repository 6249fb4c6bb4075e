//! The `.ssmach` plain-text format.
//!
//! ```text
//! ssmach 1
//!
//! [meta]
//! name = "Toy"
//! date = 2024-04-18
//!
//! [definition]
//! 1 = "Our team uses the magical box."
//!
//! [workpackages]
//! development = responsible
//! maintenance = responsible
//! improvement = handover
//!
//! [cell inside_interfaces.product_knowledge]
//! status = "denied"
//! refs = [1]
//!
//! [relations]
//! provides inside_interfaces.product_knowledge -> inside_interfaces.roles
//! ```
//!
//! [`parse`] reports every recoverable error of a document in one pass and
//! never hands out a partial protocol. [`serialize`] writes the canonical
//! form, and [`format`] is the composition of both.

mod parse;
mod write;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{CellId, MetaField, Protocol, Relation};

pub use parse::{parse, parse_with_spans};
pub use write::{quote, serialize};

/// Major format version accepted by the parser and written by the serializer.
pub const FORMAT_VERSION: u32 = 1;

/// Conventional file extension.
pub const FILE_EXTENSION: &str = "ssmach";

/// Location of a parsed element or error in the source text.
///
/// Offsets are bytes, `line` and `column` are 1-based, columns count
/// characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParseErrorKind {
    Syntax,
    UnknownRow,
    UnknownColumn,
    DuplicateCell,
    DuplicateDefinitionNumber,
    BadStatus,
    BadReferenceLiteral,
    UnsupportedVersion,
}

impl ParseErrorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Syntax => "syntax",
            Self::UnknownRow => "unknown-row",
            Self::UnknownColumn => "unknown-column",
            Self::DuplicateCell => "duplicate-cell",
            Self::DuplicateDefinitionNumber => "duplicate-definition-number",
            Self::BadStatus => "bad-status",
            Self::BadReferenceLiteral => "bad-reference-literal",
            Self::UnsupportedVersion => "unsupported-version",
        }
    }
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, thiserror::Error)]
#[error("{}:{}: {kind}: {message}", span.line, span.column)]
pub struct ParseError {
    pub span: SourceSpan,
    pub kind: ParseErrorKind,
    pub message: String,
}

/// Where each element of a parsed document was written.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SourceMap {
    pub version: Option<SourceSpan>,
    pub meta: BTreeMap<MetaField, SourceSpan>,
    pub definition: BTreeMap<u32, SourceSpan>,
    pub work_packages: BTreeMap<crate::model::WorkPackage, SourceSpan>,
    pub groups: BTreeMap<String, SourceSpan>,
    pub cells: BTreeMap<CellId, SourceSpan>,
    pub relations: BTreeMap<Relation, SourceSpan>,
}

/// Parses and re-serializes a document.
pub fn format(text: &str) -> Result<String, Vec<ParseError>> {
    parse(text).map(|p| serialize(&p))
}

/// A parsed protocol together with its source map.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub protocol: Protocol,
    pub source_map: SourceMap,
}
