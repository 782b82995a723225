//! Exact rational formal power series and the combinatorial identities built
//! on them.

pub mod bell;
pub mod power;
pub mod reversion;
pub mod trees;

pub use bell::{
    bell_partial, binomial_identity_check, falling_factorial, gen_binomial, lagrange_virial, potential_by_series,
    potential_polynomial,
};
pub use power::{factorial, int, rat, rational_to_f64, PowerSeries, Rational};
pub use reversion::{revert, reversion_oracle};
pub use trees::{
    doubly_rooted_tree_series, identity_suite, identity_suite_with, rooted_tree_series, t1_series, tree_series,
    IdentityCheck,
};
