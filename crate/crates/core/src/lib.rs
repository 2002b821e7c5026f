pub mod cover;
pub mod error;
pub mod formats;
pub mod graph;
pub mod lab;
pub mod newick;
pub mod rational;
pub mod reconstruction;
pub mod report;
pub mod shelling;
pub mod taxa;
pub mod tree;

pub use error::{Error, Result};
