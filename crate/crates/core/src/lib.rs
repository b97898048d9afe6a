pub mod error;
pub mod graph;
pub mod oracle;
pub mod pagerank;
pub mod parametric;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/pagerank.md")]
    mod pagerank {}
    #[doc = include_str!("../../../book/src/verifying.md")]
    mod verifying {}
    #[doc = include_str!("../../../book/src/parametric.md")]
    mod parametric {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../book/src/conventions.md")]
    mod conventions {}
}
