//! Sheets of conjugacy classes in complex simple algebraic groups, computed
//! exactly: root data and isogenies, Weyl groups, pseudo-Levi subgroups,
//! sheet parametrizations and normality of their categorical quotients.
//!
//! ```
//! use sheet_atlas::lattice_roots::{IsogenyDescriptor, RootSystem, TypeLabel};
//! use sheet_atlas::sheets::{enumerate_sheets, RigidTable};
//! use sheet_atlas::weyl::WeylGroup;
//!
//! let rs = RootSystem::new(TypeLabel::G, 2).unwrap();
//! let x = IsogenyDescriptor::adjoint(&rs);
//! let w = WeylGroup::generate(&rs).unwrap();
//! let sheets = enumerate_sheets(&w, &x, &RigidTable::builtin()).unwrap();
//! assert_eq!(sheets.len(), 8);
//! ```

pub mod error;
pub mod exactalg;
pub mod intmat;
pub mod lattice_roots;
pub mod pseudolevi;
pub mod quotient;
pub mod sheets;
pub mod weyl;

pub use error::{Error, Result};
