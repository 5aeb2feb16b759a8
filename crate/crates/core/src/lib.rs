pub mod analyzer;
pub mod angle;
pub mod cli;
pub mod fixtures;
pub mod report;
pub mod error;
pub mod geometry;
pub mod group;
pub mod linalg;
pub mod oracle;
pub mod scenario;
pub mod symbol;
