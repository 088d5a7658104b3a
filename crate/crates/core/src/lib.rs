pub mod error;
pub mod linalg;
pub mod spin;
pub mod states;
pub mod moments;
pub mod criteria;
pub mod polytope;
pub mod measurement;
pub mod random;
pub mod pipeline;
