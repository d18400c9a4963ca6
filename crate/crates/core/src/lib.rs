//! Contextual abduction over logic programs by tabled dual transformation.

pub mod fixtures;
pub mod model;
pub mod parser;
pub mod transform;
pub mod engine;
pub mod oracle;
pub mod bench;
pub mod check;
