//! The user guide, one chapter per module.
//!
//! Chapter sources live in `book/src/` at the workspace root and render
//! with `mdbook build book`. Including them here compiles every Rust
//! snippet as a doc-test, so the book cannot drift from the API: if a
//! chapter's example stops compiling or asserting, `cargo test` fails.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/designs.md")]
pub mod designs {}

#[doc = include_str!("../../../book/src/models.md")]
pub mod models {}

#[doc = include_str!("../../../book/src/criterion.md")]
pub mod criterion {}

#[doc = include_str!("../../../book/src/saturated.md")]
pub mod saturated {}

#[doc = include_str!("../../../book/src/pso.md")]
pub mod pso {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
