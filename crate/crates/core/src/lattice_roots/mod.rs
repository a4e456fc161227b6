//! Root systems, extended Dynkin diagrams, closed subsystems and the
//! character lattices sitting between the root and weight lattices.

mod isogeny;
mod root_system;
mod subsystem;

pub use isogeny::{isogeny_kernel, IsogenyDescriptor, LatticeForm};
pub use root_system::{cartan_matrix, simple_root_lengths, ExtendedDiagram, RootSystem, TypeLabel};
pub use subsystem::{closed_subsystem, Component, ComponentType, Subsystem};
