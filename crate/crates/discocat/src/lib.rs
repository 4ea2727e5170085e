//! Corpus pipeline, file formats, and command-line tools around
//! [`discocat_core`]: building distributional spaces from tagged text,
//! inducing word senses by clustering occurrence contexts, turning sense
//! inventories into density matrices, and composing phrase meanings whose
//! Von Neumann entropy measures lexical ambiguity.

pub mod cli;
pub mod cluster;
pub mod config;
pub mod corpus;
pub mod formats;
pub mod repair;
pub mod report;
pub mod senses;
pub mod space;
pub mod synthetic;
