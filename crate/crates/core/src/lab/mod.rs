//! Generators, exhaustive enumerators and brute-force oracles used to test
//! the rest of the crate and to find example covers.

mod generate;
mod oracle;
mod search;

pub use generate::{
    enumerate_binary_trees, random_binary_tree, random_binary_tree_with, random_cover, random_instance, Balanced,
    CoverPolicy, ENUMERATION_CAP,
};
pub use oracle::{positive_solution, uniqueness_oracle, Realization, ORACLE_CAP};
pub use search::{search_fixture, FixturePredicate, Flags, InstanceRecord, SearchBudget};
