//! Document model for the truss kernel: JSON serializations of towers,
//! signatures and combinatorial diagrams, shared by the CLI binary and by
//! anything else that wants the file formats.

pub mod doc;
