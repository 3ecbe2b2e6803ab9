//! The elliptic-curve engine: short Weierstrass curves over Q, the group
//! law over Q and F_p, reduction, point counting and bounded relations.

pub mod cm;
pub mod count;
pub mod curve;
pub mod fp;
pub mod relation;

pub use cm::{cm_iota, CmAction};
pub use count::{ec_group_order, ec_point_order, group_order_fp, hasse_interval, SCAN_LIMIT};
pub use curve::{CurveQ, PointQ};
pub use fp::{ec_good_reduction, ec_reduce, CurveFp, PointFp};
pub use relation::{ec_find_relation, ec_torsion_order, EcRelation};
