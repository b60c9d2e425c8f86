pub mod backend;
pub mod construction;
pub mod geometry;
pub mod scalar;
pub mod ring;
pub mod density;
pub mod export;
