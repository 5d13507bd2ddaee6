//! Command-line front end for sparse function updates: JSON formats, the
//! product-matrix MBR layout and runnable storage scenarios.

pub mod formats;
pub mod mbr;
pub mod scenario;
