//! The two bundled example protocols.

/// One microservice team; two cells stay open.
pub const MICROSERVICE: &str = include_str!("../../../corpus/microservice.ssmach");

/// A team using a magical box that creates software.
pub const TOY: &str = include_str!("../../../corpus/toy.ssmach");

/// Name and text of every bundled protocol.
pub const ALL: [(&str, &str); 2] = [("microservice", MICROSERVICE), ("toy", TOY)];
