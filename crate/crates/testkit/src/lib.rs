//! Deterministic stand-ins for the live model: a scripted chat backend
//! that answers the pipeline's prompt shapes from a fixed table, plus the
//! small Chinese dataset the table describes. Everything here is for
//! tests and fixture generation; nothing talks to the network.

pub mod backend;
pub mod data;

pub use backend::{CountingBackend, ScriptedBackend};
pub use data::{bio_text, dataset, gold_tags, tag_set, zh, ScriptedEntity, ScriptedSentence, SCRIPTS};
