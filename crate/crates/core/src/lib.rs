pub mod experiments;
pub mod graph;
pub mod linalg;
pub mod maxcut;
pub mod rng;
pub mod sdp;
pub mod structure;
