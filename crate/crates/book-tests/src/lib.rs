//! Compiles every chapter of the book as rustdoc input so `cargo test`
//! runs the embedded snippets. A book example that drifts from the
//! library API fails here before a reader ever sees it.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/deformed-oscillator.md")]
pub mod deformed_oscillator {}

#[doc = include_str!("../../../book/src/initial-states.md")]
pub mod initial_states {}

#[doc = include_str!("../../../book/src/block-dynamics.md")]
pub mod block_dynamics {}

#[doc = include_str!("../../../book/src/reduced-states.md")]
pub mod reduced_states {}

#[doc = include_str!("../../../book/src/wigner-distribution.md")]
pub mod wigner_distribution {}

#[doc = include_str!("../../../book/src/command-line.md")]
pub mod command_line {}

#[doc = include_str!("../../../book/src/validation.md")]
pub mod validation {}
