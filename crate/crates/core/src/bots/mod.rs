//! The 43-slot bot population and the opponent-modeling pieces it is
//! built from.

pub mod archetype;
mod catalog;
pub mod iocaine;
pub mod meta;
pub mod predict;
pub mod reactive;
pub mod sequence;
pub mod statistical;

pub use catalog::{default_catalog, BotFamily, BotParams, BotSpec, CatalogError, Population};
pub use iocaine::{IocaineBot, IocaineParams};
pub use meta::{MetaSwitcher, MetaSwitcherParams};
pub use predict::{history_match, markov_predict, Channel, MarkovModel, SuffixIndex};
