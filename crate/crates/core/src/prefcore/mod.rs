//! Alternatives, weak orders, profiles and the structures derived from them.

mod alternative;
mod choice;
mod order;
mod profile;
mod signature;

pub use alternative::Alternative;
pub use choice::ChoiceSet;
pub(crate) use order::resolve_letter;
pub use order::{kelly_strictly_prefers, rank_tuple, RankTuple, WeakOrder};
pub use profile::Profile;
pub use signature::{MajorityRelation, MarginMatrix, RankMatrix, SupportMatrix};

/// Largest number of alternatives any type in this crate accepts.
pub const MAX_ALTERNATIVES: usize = 8;
