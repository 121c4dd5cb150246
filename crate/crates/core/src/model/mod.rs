//! Domain types shared by every stage of the pipeline.

mod actor;
mod record;
mod registry;
mod status;
mod tables;

pub use actor::{Actor, ActorKind, ActorRegistry, Group};
pub use record::{DocType, PublicationRecord, YearWindow};
pub use registry::{
    canonical_erc_subfield, canonical_ost_discipline, classify, erc_panel, ClassificationRegistry,
    ErcPanel, FieldId, Level, ERC_SUBFIELDS, OST_DISCIPLINES,
};
pub use status::{resolve_status, OaStatus, OaType, StatusPriority, StatusSet};
pub use tables::{ActorFieldAggregate, IndicatorRow, IndicatorTable, TypeCounts, WorldBaseline};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("unknown subject category \"{0}\"")]
    UnknownCategory(String),
    #[error("duplicate subject category \"{0}\"")]
    DuplicateCategory(String),
    #[error("unknown OA type \"{0}\" (expected gold, bronze or green)")]
    UnknownOaType(String),
    #[error("invalid status priority \"{0}\" (expected a permutation of gold,bronze,green)")]
    InvalidPriority(String),
    #[error("unknown classification level \"{0}\"")]
    UnknownLevel(String),
    #[error("unknown document type \"{0}\"")]
    UnknownDocType(String),
    #[error("unknown actor kind \"{0}\"")]
    UnknownActorKind(String),
    #[error("unknown institution group \"{0}\"")]
    UnknownGroup(String),
    #[error("actor {0}: a group is only allowed on institutions")]
    GroupOnNonInstitution(String),
    #[error("duplicate actor \"{0}\"")]
    DuplicateActor(String),
    #[error("invalid year window \"{0}\" (expected Y1:Y2 with Y1 <= Y2)")]
    InvalidWindow(String),
}
