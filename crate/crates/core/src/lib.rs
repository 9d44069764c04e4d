//! Coxeter groups, Coxeter complexes, triangles of rank-2 residues and small
//! Moufang buildings over the two-element field.

pub mod building;
pub mod coxeter;
pub mod error;
pub mod f2;
pub mod geometric;
pub mod thin;
pub mod triangles;
pub mod verify;

pub use building::{Building, Residue};
pub use coxeter::{CoxeterGroup, CoxeterMatrix, Elem, Order, SubsetJ};
pub use error::{Error, Result};
pub use thin::{CoxeterComplex, Root, Sign};
