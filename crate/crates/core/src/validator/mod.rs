//! Semantic rules over a protocol.
//!
//! [`validate`] never fails; it returns a [`ValidationReport`] whose
//! diagnostics are sorted by rule and location. Each rule is a plain
//! function in [`rules`] appending to a shared list.

mod rules;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::model::{CellId, MetaField, Protocol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    /// Blocks acceptance in every mode.
    Error,
    /// An aspect the team cannot answer yet; blocks strict mode only.
    Open,
    /// Advisory.
    Warning,
}

impl Severity {
    pub const ALL: [Severity; 3] = [Self::Error, Self::Open, Self::Warning];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Error => "error",
            Self::Open => "open",
            Self::Warning => "warning",
        }
    }
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Rule identifiers, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R7b,
    R8,
    R9,
    R10,
    R11,
    R12,
}

impl RuleId {
    pub const ALL: [RuleId; 13] = [
        Self::R1,
        Self::R2,
        Self::R3,
        Self::R4,
        Self::R5,
        Self::R6,
        Self::R7,
        Self::R7b,
        Self::R8,
        Self::R9,
        Self::R10,
        Self::R11,
        Self::R12,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::R1 => "R1",
            Self::R2 => "R2",
            Self::R3 => "R3",
            Self::R4 => "R4",
            Self::R5 => "R5",
            Self::R6 => "R6",
            Self::R7 => "R7",
            Self::R7b => "R7b",
            Self::R8 => "R8",
            Self::R9 => "R9",
            Self::R10 => "R10",
            Self::R11 => "R11",
            Self::R12 => "R12",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            Self::R1 => "completeness",
            Self::R2 => "provided needs provider",
            Self::R3 => "provider validity",
            Self::R4 => "open cells",
            Self::R5 => "reference integrity",
            Self::R6 => "definition minimality",
            Self::R7 => "group reference integrity",
            Self::R7b => "group usage",
            Self::R8 => "meta completeness",
            Self::R9 => "work-package consistency",
            Self::R10 => "demand-target content",
            Self::R11 => "relation acyclicity",
            Self::R12 => "relation/cross exclusion",
        }
    }

    /// Severities this rule can emit, primary first.
    pub fn severities(self) -> &'static [Severity] {
        match self {
            Self::R4 => &[Severity::Open],
            Self::R6 | Self::R7b => &[Severity::Warning],
            Self::R10 => &[Severity::Error, Severity::Open],
            Self::R11 => &[Severity::Error, Severity::Warning],
            _ => &[Severity::Error],
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RuleId {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|r| r.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

impl Serialize for RuleId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for RuleId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

/// What a diagnostic points at.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Location {
    Meta(MetaField),
    Definition(u32),
    Cell(CellId),
    Group(String),
    /// Index into the protocol's (canonically ordered) relation list.
    Relation(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Meta(field) => write!(f, "meta.{field}"),
            Location::Definition(n) => write!(f, "definition.{n}"),
            Location::Cell(id) => write!(f, "{id}"),
            Location::Group(id) => write!(f, "group.{id}"),
            Location::Relation(i) => write!(f, "relation.{i}"),
        }
    }
}

impl Serialize for Location {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub rule: RuleId,
    pub severity: Severity,
    pub location: Location,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}: {}", self.rule, self.severity, self.location, self.message)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SeverityCounts {
    pub error: usize,
    pub open: usize,
    pub warning: usize,
}

impl SeverityCounts {
    pub fn get(&self, severity: Severity) -> usize {
        match severity {
            Severity::Error => self.error,
            Severity::Open => self.open,
            Severity::Warning => self.warning,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Default,
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub default: Verdict,
    pub strict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub diagnostics: Vec<Diagnostic>,
    pub counts: SeverityCounts,
    pub verdict: Verdicts,
}

impl ValidationReport {
    pub fn from_diagnostics(mut diagnostics: Vec<Diagnostic>) -> Self {
        diagnostics.sort_by(|a, b| {
            (a.rule, &a.location, &a.message).cmp(&(b.rule, &b.location, &b.message))
        });
        diagnostics.dedup();
        let mut counts = SeverityCounts::default();
        for d in &diagnostics {
            match d.severity {
                Severity::Error => counts.error += 1,
                Severity::Open => counts.open += 1,
                Severity::Warning => counts.warning += 1,
            }
        }
        let verdict = Verdicts {
            default: if counts.error == 0 { Verdict::Pass } else { Verdict::Fail },
            strict: if counts.error == 0 && counts.open == 0 {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
        };
        ValidationReport {
            diagnostics,
            counts,
            verdict,
        }
    }

    pub fn verdict(&self, mode: Mode) -> Verdict {
        match mode {
            Mode::Default => self.verdict.default,
            Mode::Strict => self.verdict.strict,
        }
    }

    pub fn passes(&self, mode: Mode) -> bool {
        self.verdict(mode) == Verdict::Pass
    }

    pub fn by_rule(&self, rule: RuleId) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(move |d| d.rule == rule)
    }

    pub fn by_severity(&self, severity: Severity) -> impl Iterator<Item = &Diagnostic> {
        self.diagnostics.iter().filter(move |d| d.severity == severity)
    }

    /// One `RULE SEVERITY location: message` line per diagnostic.
    pub fn render_lines(&self) -> String {
        let mut out = String::new();
        for d in &self.diagnostics {
            out.push_str(&d.to_string());
            out.push('\n');
        }
        out
    }
}

/// Applies every rule to `protocol`.
pub fn validate(protocol: &Protocol) -> ValidationReport {
    let mut diagnostics = Vec::new();
    for rule in RuleId::ALL {
        rules::check(rule, protocol, &mut diagnostics);
    }
    ValidationReport::from_diagnostics(diagnostics)
}

/// Help text for a rule.
pub fn explain(rule: &str) -> Result<&'static str, UnknownRule> {
    let rule: RuleId = rule.parse()?;
    Ok(match rule {
        RuleId::R1 => {
            "R1 completeness (error): every cell that is not crossed must be filled in. \
             A cell still unset, or marked described without text or a group, leaves a \
             management aspect without an answer."
        }
        RuleId::R2 => {
            "R2 provided needs provider (error): a provided cell needs no active management \
             because another cell handles it, so it must be the target of at least one \
             provides relation. Its content lives at the providing cell; it carries no \
             text or group of its own."
        }
        RuleId::R3 => {
            "R3 provider validity (error): the source of a provides relation must be \
             described or denied. A denial may provide: ruling an aspect out (for example \
             forbidding external artifacts) settles every aspect that depended on it."
        }
        RuleId::R4 => {
            "R4 open cells (open): a cell the team cannot answer yet is reported as open. \
             Open cells pass the default check and fail the strict one."
        }
        RuleId::R5 => {
            "R5 reference integrity (error): every definition number a cell refers to must \
             exist in the definition."
        }
        RuleId::R6 => {
            "R6 definition minimality (warning): every definition item should be referenced \
             by at least one cell, and items should be numbered 1..n without gaps. An item \
             nobody refers to is not needed to describe the process."
        }
        RuleId::R7 => {
            "R7 group reference integrity (error): a cell may only name a description group \
             declared in the [groups] section."
        }
        RuleId::R7b => {
            "R7b group usage (warning): a description group stands for cells whose \
             descriptions are the same; a group used by fewer than two cells shares nothing."
        }
        RuleId::R8 => {
            "R8 meta completeness (error): name, version, date, filler and the descriptions \
             of our team, cooperating teams and externals must all be given."
        }
        RuleId::R9 => {
            "R9 work-package consistency (error): when our team keeps a work package its \
             handover row is crossed entirely; when the package is handed over the row \
             carries content and no crossed cells. Crossed cells appear only in handover \
             rows and carry no content."
        }
        RuleId::R10 => {
            "R10 demand-target content (error/open): a cell may not demand a crossed cell. \
             Demanding an open cell is allowed but is surfaced as open at the demanding cell."
        }
        RuleId::R11 => {
            "R11 relation acyclicity (error/warning): a cell cannot provide itself, so \
             provides relations must not form a cycle (error). A cycle of demands relations \
             is reported as a warning."
        }
        RuleId::R12 => {
            "R12 relation/cross exclusion (error): crossed cells take part in no relation."
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_rule_has_an_explanation() {
        for rule in RuleId::ALL {
            let text = explain(rule.as_str()).unwrap();
            assert!(text.starts_with(&format!("{} ", rule.as_str())), "{text}");
            assert!(text.contains(rule.title()));
        }
        assert_eq!(explain("R13"), Err(UnknownRule("R13".into())));
        assert!(explain("r1").is_ok());
    }

    #[test]
    fn explanations_name_their_subject() {
        assert!(explain("R1").unwrap().contains("completeness"));
        assert!(explain("R3").unwrap().contains("A denial may provide"));
        assert!(explain("R11").unwrap().contains("cycle"));
    }

    #[test]
    fn verdict_law() {
        let d = |severity| Diagnostic {
            rule: RuleId::R4,
            severity,
            location: Location::Definition(1),
            message: String::new(),
        };
        let open_only = ValidationReport::from_diagnostics(vec![d(Severity::Open)]);
        assert!(open_only.passes(Mode::Default));
        assert!(!open_only.passes(Mode::Strict));
        let warn_only = ValidationReport::from_diagnostics(vec![d(Severity::Warning)]);
        assert!(warn_only.passes(Mode::Strict));
        let error = ValidationReport::from_diagnostics(vec![d(Severity::Error)]);
        assert!(!error.passes(Mode::Default));
    }

    #[test]
    fn line_format() {
        let d = Diagnostic {
            rule: RuleId::R4,
            severity: Severity::Open,
            location: Location::Cell("outside_responsibilities.roles".parse().unwrap()),
            message: "open question".into(),
        };
        assert_eq!(d.to_string(), "R4 open outside_responsibilities.roles: open question");
        assert_eq!(Location::Meta(MetaField::OurTeam).to_string(), "meta.our-team");
    }
}
