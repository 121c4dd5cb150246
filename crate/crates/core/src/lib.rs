//! Field-normalized open-access indicators for research actors.
//!
//! Publications are credited to fields by disciplinary fractional counting
//! and to actors (countries, institutions) by whole counting. An actor's OA
//! share in each field is divided by the world OA share in that field, and
//! the normalized shares are averaged with the actor's fractional output as
//! weights. A value of 1.0 means world-typical openness for the actor's
//! disciplinary mix.

pub mod analysis;
pub mod cli;
pub mod engine;
pub mod ingest;
pub mod model;
pub mod synth;
