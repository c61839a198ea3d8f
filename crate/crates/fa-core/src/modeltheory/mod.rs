//! Model-theoretic probes: EDP sets, exponent relations, ladders, and the
//! 𝔽_p[t] construction.

pub mod edp;
pub mod exponent;
pub mod ladder;
pub mod polysnip;

pub use edp::EdpSet;
pub use exponent::{block_exponents, block_exponents_within, block_semilinear, exponent_relation, exponent_relation_within};
pub use ladder::{ladder_search, verify_ladder, Ladder, LadderMode, LadderOutcome};
pub use polysnip::{poly_string, polysnip_demo, polysnip_set, PolysnipReport};
