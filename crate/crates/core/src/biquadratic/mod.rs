//! Orders `R_f` in the CM field `K = Q(sqrt(-2), sqrt(-D))`, their ideals,
//! class groups and unit groups.

pub mod brauer;
pub mod classgroup;
pub mod ideal;
pub mod lattice;
pub mod order;
pub mod residues;
pub mod units;

pub use brauer::{
    ring_class_number, verify_brauer, verify_level_one, verify_unit_lemmas, BrauerBreakdown, BrauerContext,
};
pub use classgroup::{class_number_max, is_principal, minkowski_bound, prime_ideals, PrimeIdeal};
pub use ideal::OrderIdeal;
pub use order::{CMOrderBasis, Coords, OrderElement};
pub use residues::{residue_unit_count, verify_lemma_residues, ResidueRing};
pub use units::{norm_unit_index, quartic_unit, UnitDescription};
