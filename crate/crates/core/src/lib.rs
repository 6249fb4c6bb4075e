//! Toolkit for ßMACH software-management protocols.
//!
//! A protocol describes how one team manages its software: meta
//! information, a numbered definition, the work packages the team is
//! responsible for, and a 12×5 grid of key aspects connected by
//! `provides` and `demands` relations.
//!
//! ```
//! let protocol = ssmach::dsl::parse(ssmach::corpus::TOY).unwrap();
//! let report = ssmach::validator::validate(&protocol);
//! assert_eq!(report.counts.error, 0);
//! ```

pub mod api;
pub mod corpus;
pub mod diff;
pub mod dsl;
pub mod model;
pub mod render;
pub mod validator;
