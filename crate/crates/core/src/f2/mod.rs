//! Finite rank-2 buildings over the two-element field: flag systems of the
//! Fano plane, the doily and loaded generalized polygons, with root groups
//! for `A2(2)` and `B2(2)`.

pub mod flag;
pub mod geometry;
pub mod lemmas;
pub mod perm;
pub mod rgd;

pub use flag::{apartment_census, apartments_of, is_apartment, validate_building, ApartmentIndex, FlagBuilding, ValidationReport};
pub use geometry::{doily, fano_plane, load_incidence, IncidenceGeometry};
pub use lemmas::{
    distinct_stabilized_panels_check, no_apartment_scan, opposite_pairs_covered, stabilized_implies_parallel_check,
    stabilized_implies_parallel_scan, stabilized_panels_set, ScanReport, StabilizedPanels,
};
pub use perm::{Perm, PermGroup};
pub use rgd::{check_rgd, root_group_datum_a2, root_group_datum_b2, DatumKind, RgdReport, RootGroupDatum};
