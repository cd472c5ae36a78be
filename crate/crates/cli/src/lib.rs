//! Library half of the `matchdist` CLI: family templates, report emission,
//! and the exact/sample/sweep runners. The binary in `main.rs` is a thin
//! argument parser over [`run`].

pub mod report;
pub mod run;
pub mod templates;
