pub mod graph;
pub mod linalg;
pub mod sdp;
pub mod theta;
pub mod hom;
pub mod projrank;
pub mod coding;
pub mod reproduce;
