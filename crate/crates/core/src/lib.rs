//! Exact enumeration of rooted hypermaps and constellations through
//! symmetric-group characters.

pub mod beta;
pub mod bigser;
pub mod census;
pub mod character;
pub mod error;
pub mod littlewood;
pub mod oracle;
pub mod partition;
pub mod poly;
pub mod relation;
pub mod series;

pub use error::{Error, Result};
pub use partition::Partition;
