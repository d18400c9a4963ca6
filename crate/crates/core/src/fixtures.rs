//! Small programs shipped with the crate, used by tests and the CLI docs.

/// Three rules over abducibles q, r, t with two integrity constraints.
pub const RUNNING_EXAMPLE: &str = include_str!("../programs/running.ablp");

/// The running example with `p(X) :- q(0), not q(1), s(X).`
pub const RUNNING_EXAMPLE_MODIFIED: &str = include_str!("../programs/running_modified.ablp");
