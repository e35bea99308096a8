pub mod chern;
pub mod cohomology;
pub mod error;
pub mod exactmath;
pub mod geombasis;
pub mod gwcount;
pub mod report;
pub mod smoothcheck;
pub mod specialfiber;

pub use error::{Error, Result};
