//! Error type shared by every module.

use alloc::string::String;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("not a spanning set: {0}")]
    NotSpanning(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("carry cap exceeded: more than {cap} carries explored{}", bound_suffix(.bound))]
    CarryCapExceeded { cap: usize, bound: String },
    #[error("kernel cap exceeded: more than {cap} classes")]
    KernelCapExceeded { cap: usize },
    #[error("step cap exceeded while expanding {element} (cap {cap})")]
    StepCapExceeded { element: String, cap: usize },
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
}

impl Error {
    /// True for the errors that come from a resource cap rather than bad input.
    pub fn is_cap(&self) -> bool {
        matches!(
            self,
            Error::CarryCapExceeded { .. }
                | Error::KernelCapExceeded { .. }
                | Error::StepCapExceeded { .. }
                | Error::CapExceeded(_)
        )
    }
}

fn bound_suffix(b: &str) -> String {
    if b.is_empty() {
        String::new()
    } else {
        alloc::format!(" (estimated carry bound: {b})")
    }
}

pub type Result<T> = core::result::Result<T, Error>;

/// Resource caps. The defaults are the documented ones; the CLI reads overrides
/// from the environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Distinct carries explored by any carry automaton.
    pub carry: usize,
    /// Kernel classes explored by `kernel_of`.
    pub kernel: usize,
    /// Default length bound for bounded ladder search.
    pub ladder_bound: u32,
    /// States visited by any breadth-first expansion search.
    pub search: usize,
    /// States of any intermediate automaton.
    pub states: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { carry: 10_000, kernel: 4096, ladder_bound: 10, search: 200_000, states: 2_000_000 }
    }
}
