//! Arithmetic Fuchsian groups from quaternion algebras over totally real fields.

pub mod catalog;
pub mod classify;
pub mod ford;
pub mod lattice;
pub mod ideals;
pub mod numfield;
pub mod orders;
pub mod quatalg;
pub mod volume;
