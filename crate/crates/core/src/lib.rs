pub mod algebra;
pub mod checks;
pub mod classify;
pub mod discrepancy;
pub mod error;
pub mod graph;
pub mod star;
pub mod stringy;

pub use checks::{run_check_suite, CheckOutcome, CheckStatus, CheckSuiteResult};
pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/discrepancies.md")]
    mod discrepancies {}
    #[doc = include_str!("../../../book/src/classification.md")]
    mod classification {}
    #[doc = include_str!("../../../book/src/structure.md")]
    mod structure {}
    #[doc = include_str!("../../../book/src/chains.md")]
    mod chains {}
    #[doc = include_str!("../../../book/src/stringy.md")]
    mod stringy {}
    #[doc = include_str!("../../../book/src/blowups.md")]
    mod blowups {}
    #[doc = include_str!("../../../book/src/complete.md")]
    mod complete {}
    #[doc = include_str!("../../../book/src/stars.md")]
    mod stars {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../README.md")]
    mod readme {}
    #[doc = include_str!("../../../README.md")]
    mod workspace_readme {}
}
