//! Person co-occurrence relations mined from clustered news: name
//! recognition, an occurrence index, related and associated rankings,
//! relation maps, and evaluation against an encyclopedia link baseline.

pub mod baseline;
pub mod error;
pub mod evaluator;
pub mod layout;
pub mod linker;
pub mod model;
pub mod recognizer;
pub mod store;

pub use error::{Error, Result};
pub use linker::{RankMode, RankedEntry, RankedList};
pub use model::{Cluster, ClusterId, Entity, EntityCatalog, EntityId, EntityKind, Lang, TitleTable, VariantMap};
pub use store::{OccurrenceIndex, Snapshot};
