//! The multiplicative-group engine: points on G_m^n over Q, their
//! reductions and orders, relation lattices and the exact relation finder.

pub mod order;
pub mod point;
pub mod relation;

pub use order::{
    gm_good_reduction, gm_point_order, gm_reduce, mult_order, primitive_root, DlogTable, GmOrderRecord,
    DLOG_LIMIT,
};
pub use point::{EndoMatrix, GmPoint};
pub use relation::{
    component_count, decompose_independent, gm_find_relation, gm_is_independent, isogeny_degree,
    isogeny_kernel_exponent, multiplicative_relations, relation_lattice, Decomposition, GmRelation,
};
