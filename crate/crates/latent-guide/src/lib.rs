//! The guide in `book/`, with every Rust code block compiled and run as a
//! doctest. mdbook cannot test snippets that use an external crate, so each
//! chapter is included here as the documentation of an empty module.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/categories.md")]
pub mod categories {}
#[doc = include_str!("../../../book/src/pullbacks.md")]
pub mod pullbacks {}
#[doc = include_str!("../../../book/src/fibrations.md")]
pub mod fibrations {}
#[doc = include_str!("../../../book/src/constructions.md")]
pub mod constructions {}
#[doc = include_str!("../../../book/src/mcategories.md")]
pub mod mcategories {}
#[doc = include_str!("../../../book/src/duals.md")]
pub mod duals {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
