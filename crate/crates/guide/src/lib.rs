//! Doctest harness for the book.
//!
//! mdbook renders `book/` but cannot execute the snippets; including each
//! chapter here turns every fenced Rust block into a doctest, so
//! `cargo test --workspace` keeps the book and the library in lockstep.
//! One module per chapter so a failing snippet names its chapter.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/algebra.md")]
pub mod algebra {}

#[doc = include_str!("../../../book/src/calculus.md")]
pub mod calculus {}

#[doc = include_str!("../../../book/src/kernels.md")]
pub mod kernels {}

#[doc = include_str!("../../../book/src/solving.md")]
pub mod solving {}

#[doc = include_str!("../../../book/src/verification.md")]
pub mod verification {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
