pub mod cli;
pub mod density;
pub mod error;
pub mod geometry;
pub mod girstmair;
pub mod nefcheck;
pub mod numtheory;
pub mod partitions;
pub mod pipeline;
pub mod prank;
pub mod rational;
pub mod rootcover;
